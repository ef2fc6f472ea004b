use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use bifurjet::io::{read_jsonl, write_csv, write_jsonl};
use bifurjet::metrics::{assignment_efficiency, split_by_btag, trajectory_aggregate, Hypothesis};
use bifurjet::synth::Simplified;
use bifurjet::{
    anneal_evolve, anneal_sweep, child_seed, decode_assignment, durham_exclusive, event_masses, event_preselection,
    generate_events, ground_state_probability, multi_shot, IsingModel, read_events, simplify_event, time_to_solution,
    write_events, Error, Event, Jet, MultijetProblem, Process, SaParams, SbParams, SolverSpec, SyntheticSpec,
};
use rayon::prelude::*;

use crate::records::{BenchRow, ClusterRecord, DurhamRecord, JetRecord, JetsLine, MassRow, TimingRow, TtsRow};
use crate::{
    sidecar, AnnealArgs, AnnealProblemArgs, BenchArgs, ClusterArgs, DurhamArgs, EventSelection, GenArgs, MassArgs,
    SolverArgs, SolverKind, TtsArgs,
};

/// Anneal problems are kept to this many spins by default.
const ANNEAL_SPINS: usize = 12;

pub fn gen(a: &GenArgs) -> Result<()> {
    ensure!(a.min_particles >= 1, "--min-particles must be >= 1");
    ensure!(a.min_particles <= a.max_particles, "--min-particles exceeds --max-particles");
    let mut spec = SyntheticSpec {
        particles_per_jet: a.min_particles..=a.max_particles,
        angular_spread: a.spread,
        energy_smear: a.smear,
        ..SyntheticSpec::new(a.process, a.seed)
    };
    if let Some(s) = a.sqrt_s {
        spec.sqrt_s = s;
    }
    spec.validate()?;
    let events: Vec<Event<f64>> = generate_events(&spec, a.events)?.into_iter().map(|e| e.event).collect();
    write_events(&events, &a.out)?;
    eprintln!("wrote {} {} events to {}", events.len(), a.process, a.out.display());
    Ok(())
}

fn load(sel: &EventSelection) -> Result<(Vec<Event<f64>>, usize)> {
    let events = read_events::<f64>(&sel.events).with_context(|| format!("reading {}", sel.events.display()))?;
    let process = events
        .first()
        .and_then(|e| e.meta.get("process"))
        .and_then(|p| p.parse::<Process>().ok());
    let n_jet = match (sel.njet, process) {
        (Some(n), Some(p)) if n != p.n_jet() => {
            eprintln!("warning: --njet {n} differs from the {} jets of a {p} event", p.n_jet());
            n
        }
        (Some(n), _) => n,
        (None, Some(p)) => p.n_jet(),
        (None, None) => bail!("events carry no process tag; pass --njet"),
    };
    ensure!(n_jet >= 1, "--njet must be >= 1");
    Ok((events, n_jet))
}

fn jet_records(jets: &[Jet<f64>]) -> Vec<JetRecord> {
    jets.iter().map(JetRecord::from).collect()
}

pub fn durham(a: &DurhamArgs) -> Result<()> {
    let (events, n_jet) = load(&a.input)?;
    let records = events
        .par_iter()
        .enumerate()
        .map(|(k, ev)| {
            let jets = durham_exclusive(ev, n_jet).with_context(|| format!("event {k}"))?;
            let preselection = if jets.len() >= 2 {
                event_preselection(&jets)?
            } else {
                bifurjet::Preselection { pass: false, failures: vec![] }
            };
            Ok(DurhamRecord {
                event: k,
                masses: event_masses(&jets),
                jets: jet_records(&jets),
                preselection,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_jsonl(&records, &a.out)?;
    eprintln!("clustered {} events into {n_jet} jets -> {}", records.len(), a.out.display());
    Ok(())
}

fn solver_spec(kind: SolverKind, s: &SolverArgs, record_every: usize) -> Result<SolverSpec<f64>> {
    let sb = SbParams {
        c0: s.c0,
        dt: s.dt,
        steps: s.steps,
        record_every,
        ..SbParams::default()
    };
    let spec = match kind {
        SolverKind::Bsb => SolverSpec::Bsb(sb),
        SolverKind::Dsb => SolverSpec::Dsb(sb),
        SolverKind::Sa => SolverSpec::Sa(SaParams {
            sweeps: s.steps,
            beta_min: s.beta_min,
            beta_max: s.beta_max,
            record_every,
        }),
    };
    match &spec {
        SolverSpec::Bsb(p) | SolverSpec::Dsb(p) => p.validate()?,
        SolverSpec::Sa(p) => p.validate()?,
    }
    Ok(spec)
}

fn shots(s: &SolverArgs, n_jet: usize) -> Result<usize> {
    let n = s.shots.unwrap_or(if n_jet == 2 { 100 } else { 50 });
    ensure!(n >= 1, "--shots must be >= 1");
    Ok(n)
}

fn check_multijet(n_jet: usize, lambda: Option<f64>) -> Result<()> {
    ensure!(n_jet >= 2, "QUBO clustering needs --njet >= 2");
    if let Some(l) = lambda {
        ensure!(l > 0.0 && l.is_finite(), "--lambda must be positive");
    }
    Ok(())
}

pub fn cluster(a: &ClusterArgs) -> Result<()> {
    let (events, n_jet) = load(&a.input)?;
    check_multijet(n_jet, a.solve.lambda)?;
    let spec = solver_spec(a.solver, &a.solve, 0)?;
    let n_shots = shots(&a.solve, n_jet)?;
    let metric = a.solve.metric.into();

    let results = events
        .par_iter()
        .enumerate()
        .map(|(k, ev)| -> Result<(ClusterRecord, TimingRow)> {
            let start = Instant::now();
            let problem = MultijetProblem::build(ev, n_jet, metric, a.solve.lambda).with_context(|| format!("event {k}"))?;
            let model = problem.qubo.to_ising();
            let ensemble = multi_shot(&spec, &model, n_shots, child_seed(a.solve.seed, k as u64))?;
            let best = ensemble.best();
            let best_shot = ensemble.shots.iter().position(|s| std::ptr::eq(s, best)).expect("best is a shot");
            let decoded = decode_assignment(&best.best_spins.to_bits(), problem.n_input, n_jet)?;
            let assignment = decoded.repair(&problem.distances);
            let reference = durham_exclusive(ev, n_jet)?;
            let eff = assignment_efficiency(&assignment, &reference)?;
            let jets: Vec<Jet<f64>> = assignment
                .jets()
                .iter()
                .map(|c| Jet::from_constituents(ev, c.clone()))
                .collect();
            let record = ClusterRecord {
                event: k,
                solver: spec.name().to_string(),
                n_input: problem.n_input,
                n_jet,
                qubo_size: problem.qubo.n(),
                lambda: problem.lambda,
                shots: n_shots,
                best_energy: best.best_energy,
                best_shot,
                violations: decoded.report.count(),
                efficiency: eff.mean,
                efficiency_per_jet: eff.per_jet,
                masses: event_masses(&jets),
                jets: jet_records(&jets),
            };
            let timing = TimingRow {
                event: k,
                shots: n_shots,
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            Ok((record, timing))
        })
        .collect::<Result<Vec<_>>>()?;
    let (records, timing): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    write_jsonl(&records, &a.out)?;
    write_csv(&timing, sidecar(&a.out, "timing.csv"))?;

    let valid = records.iter().filter(|r| r.violations == 0).count();
    let mean_eff = records.iter().map(|r| r.efficiency).sum::<f64>() / records.len().max(1) as f64;
    eprintln!(
        "{}: {} events, one-hot {valid}/{}, mean efficiency {mean_eff:.3} -> {}",
        spec.name(),
        records.len(),
        records.len(),
        a.out.display()
    );
    Ok(())
}

fn pick(events: &[Event<f64>], index: usize) -> Result<&Event<f64>> {
    events
        .get(index)
        .with_context(|| format!("--event {index} out of range ({} events)", events.len()))
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    let (events, n_jet) = load(&a.input)?;
    check_multijet(n_jet, a.solve.lambda)?;
    ensure!(a.record_every >= 1, "--record-every must be >= 1");
    ensure!(!a.solver.is_empty(), "--solver needs at least one solver");
    let specs = a
        .solver
        .iter()
        .map(|&k| solver_spec(k, &a.solve, a.record_every))
        .collect::<Result<Vec<_>>>()?;
    let n_shots = shots(&a.solve, n_jet)?;
    let ev = pick(&events, a.event)?;

    let problem = MultijetProblem::build(ev, n_jet, a.solve.metric.into(), a.solve.lambda)?;
    let model = problem.qubo.to_ising();
    let reference: Vec<Vec<usize>> = durham_exclusive(ev, n_jet)?.into_iter().map(|j| j.constituents).collect();
    let master = child_seed(a.solve.seed, a.event as u64);

    let mut rows = Vec::new();
    for spec in &specs {
        let ensemble = multi_shot(spec, &model, n_shots, master)?;
        let table = trajectory_aggregate(&ensemble, &reference, |s| problem.assignment(&s.to_bits()))?;
        rows.extend(table.into_iter().map(|r| BenchRow {
            solver: spec.name(),
            step: r.step,
            time_s: r.time_s,
            energy_mean: r.energy_mean,
            energy_std: r.energy_std,
            eff_mean: r.eff_mean,
            eff_std: r.eff_std,
        }));
    }
    write_csv(&rows, &a.out)?;
    eprintln!("{} rows for {} solver(s) -> {}", rows.len(), specs.len(), a.out.display());
    Ok(())
}

pub fn mass(a: &MassArgs) -> Result<()> {
    let lines: Vec<JetsLine> = read_jsonl(&a.jets).with_context(|| format!("reading {}", a.jets.display()))?;
    let rows = lines
        .iter()
        .map(|line| {
            let jets: Vec<Jet<f64>> = line.jets.iter().map(Jet::from).collect();
            let preselected = jets.len() >= 2 && event_preselection(&jets)?.pass;
            let m = event_masses(&jets);
            let get = |h| m.get(&h).copied();
            Ok(MassRow {
                event: line.event,
                n_jet: jets.len(),
                n_btag: split_by_btag(&jets).0.len(),
                preselected,
                m_z: get(Hypothesis::Z),
                m_h: get(Hypothesis::H),
                m_w1: get(Hypothesis::W1),
                m_w2: get(Hypothesis::W2),
                m_top1: get(Hypothesis::Top1),
                m_top2: get(Hypothesis::Top2),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(&rows, &a.out)?;
    eprintln!("{} events -> {}", rows.len(), a.out.display());
    Ok(())
}

/// Ising form of `problem` divided by its largest coefficient, so evolution
/// times are in units of the strongest term. Returns the scale as well.
fn unit_ising(problem: &MultijetProblem<f64>) -> Result<(IsingModel<f64>, f64)> {
    let m = problem.qubo.to_ising();
    let scale = m
        .j()
        .as_slice()
        .iter()
        .chain(m.h())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Ok((m, 1.0));
    }
    let j = m.j().map(|v| v / scale);
    let h = m.h().iter().map(|v| v / scale).collect();
    Ok((IsingModel::new(j, h, m.offset() / scale)?, scale))
}

/// Simplified event and its multijet problem.
fn anneal_problem(a: &AnnealProblemArgs) -> Result<(Simplified<f64>, MultijetProblem<f64>)> {
    let (events, n_jet) = load(&a.input)?;
    check_multijet(n_jet, a.lambda)?;
    let keep = a.keep.unwrap_or((ANNEAL_SPINS / n_jet).max(1));
    let s = simplify_event(pick(&events, a.event)?, keep)?;
    if s.warning {
        eprintln!("warning: --keep {keep} exceeds the {} particles of event {}", s.event.len(), a.event);
    }
    let problem = MultijetProblem::build(&s.event, n_jet, a.metric.into(), a.lambda)?;
    Ok((s, problem))
}

pub fn anneal(a: &AnnealArgs) -> Result<()> {
    let (_, problem) = anneal_problem(&a.problem)?;
    let (model, scale) = unit_ising(&problem)?;
    let (_, samples) = anneal_sweep(&model, a.problem.schedule.into(), a.time, a.steps, a.record_every.max(1))?;
    write_csv(&samples, &a.out)?;
    let last = samples.last().expect("final step is always recorded");
    eprintln!(
        "{} spins, energy unit {scale:.6e}, T = {}: ground probability {:.6} -> {}",
        model.n(),
        a.time,
        last.ground_probability,
        a.out.display()
    );
    Ok(())
}

pub fn tts(a: &TtsArgs) -> Result<()> {
    ensure!(a.target > 0.0 && a.target < 1.0, "--target must be in (0, 1)");
    ensure!(a.steps_per_time > 0.0, "--steps-per-time must be positive");
    ensure!(
        a.times.iter().all(|&t| t > 0.0 && t.is_finite()),
        "--times must be positive"
    );
    let (_, problem) = anneal_problem(&a.problem)?;
    let (model, _) = unit_ising(&problem)?;
    let schedule = a.problem.schedule.into();
    let rows = a
        .times
        .par_iter()
        .map(|&t| {
            let steps = ((t * a.steps_per_time).ceil() as usize).max(1);
            let psi = anneal_evolve(&model, schedule, t, steps)?;
            let p = ground_state_probability(&psi, &model)?;
            let tts = match time_to_solution(p, t, a.target) {
                Ok(v) => Some(v),
                Err(Error::Unreachable) => None,
                Err(e) => return Err(e),
            };
            Ok(TtsRow {
                total_time: t,
                steps,
                ground_probability: p,
                tts,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(&rows, &a.out)?;
    eprintln!("{} sweep times -> {}", rows.len(), a.out.display());
    Ok(())
}
