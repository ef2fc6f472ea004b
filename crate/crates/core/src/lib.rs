//! Jet clustering as Ising ground-state search, solved with simulated
//! bifurcation.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below pin the scalar.

pub mod anneal;
pub mod durham;
pub mod error;
pub mod event;
pub mod ising;
pub mod jet_qubo;
pub mod kinematics;
pub mod io;
pub mod metrics;
pub mod scalar;
pub mod solvers;
pub mod synth;

pub use anneal::{anneal_evolve, anneal_sweep, build_target_hamiltonian, ground_state_probability, AnnealSchedule, Statevector};
pub use durham::{durham_exclusive, durham_exclusive_naive, event_preselection, jet_separation, Jet, Preselection};
pub use error::{Error, Result};
pub use event::{Event, Flavor, Particle};
pub use ising::{BitConfig, IsingModel, Qubo, SpinConfig, SquareMatrix};
pub use jet_qubo::{
    build_dijet_qubo, build_multijet_qubo, decode_assignment, distance_matrix, DistanceMetric, JetAssignment,
    MultijetProblem,
};
pub use kinematics::FourMomentum;
pub use metrics::{event_masses, invariant_mass, jet_efficiency, time_to_solution, top_pairing, EfficiencyReport, TrajectoryRow};
pub use io::{read_events, write_events};
pub use scalar::Real;
pub use solvers::{
    bsb_solve, child_seed, dsb_solve, multi_shot, sa_solve, SaParams, SbParams, ShotEnsemble, SolverResult,
    SolverSpec,
};

pub use synth::{generate_events, generate_synthetic_event, simplify_event, Process, SyntheticEvent, SyntheticSpec};

pub type QuboF64 = Qubo<f64>;
pub type QuboF32 = Qubo<f32>;
pub type IsingModelF64 = IsingModel<f64>;
pub type IsingModelF32 = IsingModel<f32>;
pub type EventF64 = Event<f64>;
pub type EventF32 = Event<f32>;
pub type ParticleF64 = Particle<f64>;
pub type ParticleF32 = Particle<f32>;
pub type JetF64 = Jet<f64>;
pub type JetF32 = Jet<f32>;
pub type FourMomentumF64 = FourMomentum<f64>;
pub type FourMomentumF32 = FourMomentum<f32>;
pub type SbParamsF64 = SbParams<f64>;
pub type SbParamsF32 = SbParams<f32>;
pub type SolverSpecF64 = SolverSpec<f64>;
pub type SolverResultF64 = SolverResult<f64>;
pub type MultijetProblemF64 = MultijetProblem<f64>;
pub type SyntheticEventF64 = SyntheticEvent<f64>;
