//! Canonical QUBO and Ising models.
//!
//! A [`Qubo`] stores a symmetric, zero-diagonal coupling matrix together with
//! a linear vector and a constant offset. Its energy sums the coupling over
//! all ordered pairs, so each off-diagonal entry contributes twice:
//!
//! ```text
//! E(s) = sum_{i != j} C_ij s_i s_j + sum_i l_i s_i + c
//! ```
//!
//! An [`IsingModel`] carries the usual one-half prefactor:
//!
//! ```text
//! H(x) = 1/2 sum_{i != j} J_ij x_i x_j + sum_i h_i x_i + c
//! ```
//!
//! [`Qubo::to_ising`] is exact under `x = 2s - 1`, including the offset.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major square matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    /// Builds from nested rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = Self { n, data };
        m.check_finite("matrix")?;
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Largest entry, or `None` for an empty matrix.
    pub fn max_entry(&self) -> Option<T> {
        self.data.iter().copied().reduce(T::max)
    }

    /// Writes `out = self * x`.
    #[inline]
    pub fn mul_vec_into(&self, x: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    fn check_finite(&self, what: &'static str) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(Error::NonFinite { what, index }),
            None => Ok(()),
        }
    }

    fn check_canonical(&self, what: &'static str) -> Result<()> {
        self.check_finite(what)?;
        for i in 0..self.n {
            if self[(i, i)] != T::zero() {
                return Err(Error::NotCanonical { what, i, j: i });
            }
            for j in i + 1..self.n {
                if self[(i, j)] != self[(j, i)] {
                    return Err(Error::NotCanonical { what, i, j });
                }
            }
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// Dot product over eight interleaved partial sums (fixed order, so results
/// are reproducible while the loop still vectorizes).
#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    const LANES: usize = 8;
    let n = a.len().min(b.len());
    let body = n / LANES * LANES;
    let mut acc = [T::zero(); LANES];
    let mut i = 0;
    while i < body {
        let x: &[T; LANES] = a[i..i + LANES].try_into().expect("exact chunk");
        let y: &[T; LANES] = b[i..i + LANES].try_into().expect("exact chunk");
        for k in 0..LANES {
            acc[k] = acc[k] + x[k] * y[k];
        }
        i += LANES;
    }
    let mut tail = T::zero();
    for k in body..n {
        tail = tail + a[k] * b[k];
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

/// Spin configuration over `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(index) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidConfig {
                what: "spin",
                index,
                value: spins[index] as i64,
            });
        }
        Ok(Self(spins))
    }

    /// Signs of a continuous state, with zero mapped to `+1`.
    pub fn from_signs<T: Real>(x: &[T]) -> Self {
        Self(x.iter().map(|&v| crate::scalar::spin_sign(v)).collect())
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// `s = (x + 1) / 2`.
    pub fn to_bits(&self) -> BitConfig {
        BitConfig(self.0.iter().map(|&x| ((x + 1) / 2) as u8).collect())
    }

    /// Spin `i` as a scalar.
    #[inline]
    pub fn value<T: Real>(&self, i: usize) -> T {
        if self.0[i] > 0 {
            T::one()
        } else {
            -T::one()
        }
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// Binary configuration over `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct BitConfig(Vec<u8>);

impl BitConfig {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidConfig {
                what: "bit",
                index,
                value: bits[index] as i64,
            });
        }
        Ok(Self(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Bit `k` of `index` becomes entry `k`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|k| ((index >> k) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit as u8;
    }

    /// `x = 2s - 1`.
    pub fn to_spins(&self) -> SpinConfig {
        SpinConfig(self.0.iter().map(|&b| 2 * b as i8 - 1).collect())
    }
}

impl TryFrom<Vec<u8>> for BitConfig {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BitConfig> for Vec<u8> {
    fn from(b: BitConfig) -> Self {
        b.0
    }
}

/// Quadratic unconstrained binary optimization problem in canonical form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Qubo<T> {
    coupling: SquareMatrix<T>,
    linear: Vec<T>,
    offset: T,
}

impl<T: Real> Qubo<T> {
    /// Validates an already canonical triple.
    pub fn new(coupling: SquareMatrix<T>, linear: Vec<T>, offset: T) -> Result<Self> {
        let n = coupling.n();
        if n == 0 {
            return Err(Error::InvalidParameter("QUBO needs at least one variable".into()));
        }
        if linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.len(),
            });
        }
        coupling.check_canonical("QUBO coupling")?;
        check_finite_vec(&linear, "QUBO linear")?;
        if !offset.is_finite() {
            return Err(Error::NonFinite {
                what: "QUBO offset",
                index: 0,
            });
        }
        Ok(Self {
            coupling,
            linear,
            offset,
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coupling: SquareMatrix::zeros(n),
            linear: vec![T::zero(); n],
            offset: T::zero(),
        }
    }

    /// Canonical form of `sum_{i,j} raw_ij s_i s_j`.
    ///
    /// Diagonal entries move into the linear vector (`s^2 = s`) and the
    /// off-diagonal part is symmetrized by averaging.
    pub fn canonicalize(raw: &SquareMatrix<T>) -> Result<Self> {
        let n = raw.n();
        Self::from_raw(raw, vec![T::zero(); n], T::zero())
    }

    /// Canonicalizes `raw` and adds the given linear terms and offset.
    pub fn from_raw(raw: &SquareMatrix<T>, linear: Vec<T>, offset: T) -> Result<Self> {
        let n = raw.n();
        if n == 0 {
            return Err(Error::InvalidParameter("QUBO needs at least one variable".into()));
        }
        if linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.len(),
            });
        }
        raw.check_finite("raw QUBO matrix")?;
        let half = T::lit(0.5);
        let coupling = SquareMatrix::from_fn(n, |i, j| {
            if i == j {
                T::zero()
            } else {
                (raw[(i, j)] + raw[(j, i)]) * half
            }
        });
        let linear = linear
            .into_iter()
            .enumerate()
            .map(|(i, l)| l + raw[(i, i)])
            .collect();
        Self::new(coupling, linear, offset)
    }

    pub fn n(&self) -> usize {
        self.coupling.n()
    }

    pub fn coupling(&self) -> &SquareMatrix<T> {
        &self.coupling
    }

    pub fn linear(&self) -> &[T] {
        &self.linear
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    /// Adds `v` to both `(i, j)` and `(j, i)`; `i != j`.
    pub(crate) fn add_coupling_pair(&mut self, i: usize, j: usize, v: T) {
        debug_assert_ne!(i, j);
        self.coupling[(i, j)] = self.coupling[(i, j)] + v;
        self.coupling[(j, i)] = self.coupling[(j, i)] + v;
    }

    pub(crate) fn add_linear(&mut self, i: usize, v: T) {
        self.linear[i] = self.linear[i] + v;
    }

    pub(crate) fn add_offset(&mut self, v: T) {
        self.offset = self.offset + v;
    }

    pub fn energy(&self, s: &BitConfig) -> Result<T> {
        check_len(self.n(), s.len())?;
        let bits = s.as_slice();
        let mut e = self.offset;
        for i in (0..self.n()).filter(|&i| bits[i] == 1) {
            let row = self.coupling.row(i);
            let mut acc = self.linear[i];
            for j in (0..self.n()).filter(|&j| bits[j] == 1) {
                acc = acc + row[j];
            }
            e = e + acc;
        }
        Ok(e)
    }

    /// Exact conversion under `x = 2s - 1`.
    pub fn to_ising(&self) -> IsingModel<T> {
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        let n = self.n();
        let j = self.coupling.map(|c| c * half);
        let mut h = Vec::with_capacity(n);
        let mut coupling_total = T::zero();
        for i in 0..n {
            let row_sum: T = self.coupling.row(i).iter().copied().sum();
            coupling_total = coupling_total + row_sum;
            h.push((row_sum + self.linear[i]) * half);
        }
        let linear_total: T = self.linear.iter().copied().sum();
        let offset = self.offset + coupling_total * quarter + linear_total * half;
        IsingModel { j, h, offset }
    }
}

/// Ising spin glass with fields and a constant offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingModel<T> {
    j: SquareMatrix<T>,
    h: Vec<T>,
    offset: T,
}

impl<T: Real> IsingModel<T> {
    pub fn new(j: SquareMatrix<T>, h: Vec<T>, offset: T) -> Result<Self> {
        let n = j.n();
        if n == 0 {
            return Err(Error::InvalidParameter("Ising model needs at least one spin".into()));
        }
        if h.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.len(),
            });
        }
        j.check_canonical("Ising couplings")?;
        check_finite_vec(&h, "Ising fields")?;
        if !offset.is_finite() {
            return Err(Error::NonFinite {
                what: "Ising offset",
                index: 0,
            });
        }
        Ok(Self { j, h, offset })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            j: SquareMatrix::zeros(n),
            h: vec![T::zero(); n],
            offset: T::zero(),
        }
    }

    pub fn n(&self) -> usize {
        self.j.n()
    }

    pub fn j(&self) -> &SquareMatrix<T> {
        &self.j
    }

    pub fn h(&self) -> &[T] {
        &self.h
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn energy(&self, x: &SpinConfig) -> Result<T> {
        check_len(self.n(), x.len())?;
        Ok(self.energy_unchecked(x.as_slice()))
    }

    pub(crate) fn energy_unchecked(&self, x: &[i8]) -> T {
        let half = T::lit(0.5);
        let mut quad = T::zero();
        let mut lin = T::zero();
        for (i, &xi) in x.iter().enumerate() {
            let row = self.j.row(i);
            let mut acc = T::zero();
            for (&jij, &xj) in row.iter().zip(x) {
                if xj > 0 {
                    acc = acc + jij;
                } else {
                    acc = acc - jij;
                }
            }
            if xi > 0 {
                quad = quad + acc;
                lin = lin + self.h[i];
            } else {
                quad = quad - acc;
                lin = lin - self.h[i];
            }
        }
        quad * half + lin + self.offset
    }

    /// Same model with spins `perm[k]` moved to position `k`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_len(self.n(), perm.len())?;
        let j = SquareMatrix::from_fn(self.n(), |a, b| self.j[(perm[a], perm[b])]);
        let h = perm.iter().map(|&p| self.h[p]).collect();
        Self::new(j, h, self.offset)
    }

    /// Root-mean-square of the off-diagonal couplings.
    pub fn coupling_rms(&self) -> T {
        let n = self.n();
        if n < 2 {
            return T::zero();
        }
        let sq: T = self.j.as_slice().iter().map(|&v| v * v).sum();
        (sq / T::of_usize(n * (n - 1))).sqrt()
    }

    /// Exhaustive ground-state search for `n <= 30`, in Gray-code order.
    ///
    /// Returns the minimum energy and every configuration within
    /// `tol * (1 + |E_min|)` of it.
    pub fn exhaustive_ground_states(&self, tol: T) -> Result<(T, Vec<SpinConfig>)> {
        let n = self.n();
        if n > 30 {
            return Err(Error::TooManySpins { n, max: 30 });
        }
        // start at all spins down, track local fields J x incrementally
        let mut x = vec![-1i8; n];
        let mut field: Vec<T> = (0..n)
            .map(|i| -self.j.row(i).iter().copied().sum::<T>())
            .collect();
        let mut energy = self.energy_unchecked(&x);
        let mut energies = Vec::with_capacity(1 << n);
        energies.push(energy);
        let two = T::lit(2.0);
        for k in 1u64..(1u64 << n) {
            let flip = k.trailing_zeros() as usize;
            let old = if x[flip] > 0 { T::one() } else { -T::one() };
            energy = energy - two * old * (field[flip] + self.h[flip]);
            x[flip] = -x[flip];
            let delta = -two * old;
            for (f, &jv) in field.iter_mut().zip(self.j.row(flip)) {
                *f = *f + jv * delta;
            }
            energies.push(energy);
        }
        let approx_min = energies.iter().copied().fold(T::infinity(), T::min);
        let window = tol * (T::one() + approx_min.abs()) + T::lit(1e-9) * (T::one() + approx_min.abs());
        let mut best = T::infinity();
        let mut states = Vec::new();
        for (k, &e) in energies.iter().enumerate() {
            if e <= approx_min + window {
                let gray = (k as u64) ^ ((k as u64) >> 1);
                let cfg = BitConfig::from_index(gray, n).to_spins();
                let exact = self.energy_unchecked(cfg.as_slice());
                best = best.min(exact);
                states.push((exact, cfg));
            }
        }
        let cut = tol * (T::one() + best.abs());
        let states = states
            .into_iter()
            .filter(|(e, _)| *e <= best + cut)
            .map(|(_, c)| c)
            .collect();
        Ok((best, states))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

fn check_finite_vec<T: Real>(v: &[T], what: &'static str) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[u8]) -> BitConfig {
        BitConfig::new(v.to_vec()).unwrap()
    }

    fn spins(v: &[i8]) -> SpinConfig {
        SpinConfig::new(v.to_vec()).unwrap()
    }

    fn pair_qubo(c: f64) -> Qubo<f64> {
        let raw = SquareMatrix::from_rows(&[vec![0.0, c], vec![c, 0.0]]).unwrap();
        Qubo::canonicalize(&raw).unwrap()
    }

    #[test]
    fn qubo_energy_examples() {
        let zero = Qubo::<f64>::zeros(3);
        assert_eq!(zero.energy(&bits(&[1, 0, 1])).unwrap(), 0.0);
        let q = pair_qubo(4.0);
        assert_eq!(q.energy(&bits(&[1, 1])).unwrap(), 8.0);
        assert_eq!(q.energy(&bits(&[1, 0])).unwrap(), 0.0);
    }

    #[test]
    fn qubo_energy_dimension_mismatch() {
        let q = pair_qubo(4.0);
        let err = q.energy(&bits(&[1, 0, 1])).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        ));
        assert!(err.to_string().contains('2') && err.to_string().contains('3'));
    }

    #[test]
    fn ising_energy_examples() {
        let m = IsingModel::new(SquareMatrix::zeros(2), vec![1.0, -1.0], 0.0).unwrap();
        assert_eq!(m.energy(&spins(&[1, 1])).unwrap(), 0.0);
        let ferro = IsingModel::new(
            SquareMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap(),
            vec![0.0, 0.0],
            0.0,
        )
        .unwrap();
        assert_eq!(ferro.energy(&spins(&[1, 1])).unwrap(), -1.0);
        assert_eq!(ferro.energy(&spins(&[1, -1])).unwrap(), 1.0);
        assert!(ferro.energy(&spins(&[1])).is_err());
    }

    #[test]
    fn conversion_examples() {
        let m = pair_qubo(4.0).to_ising();
        assert_eq!(m.j()[(0, 1)], 2.0);
        assert_eq!(m.j()[(1, 0)], 2.0);
        assert_eq!(m.h(), &[2.0, 2.0]);
        assert_eq!(m.offset(), 2.0);
        assert_eq!(m.energy(&spins(&[1, 1])).unwrap() , 8.0);

        let zero = Qubo::<f64>::zeros(3).to_ising();
        assert_eq!(zero, IsingModel::zeros(3));

        let single = Qubo::new(SquareMatrix::zeros(1), vec![3.0], 1.0).unwrap();
        let m = single.to_ising();
        assert_eq!(m.h(), &[1.5]);
        assert_eq!(m.offset(), 2.5);
        assert_eq!(m.energy(&spins(&[1])).unwrap(), 4.0);
        assert_eq!(m.energy(&spins(&[-1])).unwrap(), 1.0);
    }

    #[test]
    fn canonicalize_examples() {
        let raw = SquareMatrix::from_rows(&[vec![5.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let q = Qubo::canonicalize(&raw).unwrap();
        assert_eq!(q.coupling(), &SquareMatrix::zeros(2));
        assert_eq!(q.linear(), &[5.0, 0.0]);
        assert_eq!(q.offset(), 0.0);

        let raw = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![3.0, 0.0]]).unwrap();
        let q = Qubo::canonicalize(&raw).unwrap();
        assert_eq!(q.coupling()[(0, 1)], 2.0);
        assert_eq!(q.coupling()[(1, 0)], 2.0);
        assert_eq!(q.linear(), &[0.0, 0.0]);

        let q = Qubo::canonicalize(&SquareMatrix::<f64>::zeros(4)).unwrap();
        assert_eq!(q, Qubo::zeros(4));
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        assert!(matches!(
            SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            SquareMatrix::from_rows(&[vec![0.0, f64::NAN], vec![1.0, 0.0]]),
            Err(Error::NonFinite { .. })
        ));
        assert!(Qubo::canonicalize(&SquareMatrix::<f64>::zeros(0)).is_err());
    }

    #[test]
    fn constructors_enforce_invariants() {
        let asym = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(
            Qubo::new(asym.clone(), vec![0.0; 2], 0.0),
            Err(Error::NotCanonical { .. })
        ));
        assert!(IsingModel::new(asym, vec![0.0; 2], 0.0).is_err());
        let diag = SquareMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(Qubo::new(diag, vec![0.0; 2], 0.0).is_err());
        assert!(IsingModel::new(SquareMatrix::zeros(2), vec![0.0], 0.0).is_err());
        assert!(SpinConfig::new(vec![1, 0]).is_err());
        assert!(BitConfig::new(vec![0, 2]).is_err());
    }

    #[test]
    fn spin_bit_round_trip() {
        let b = bits(&[1, 0, 0, 1]);
        assert_eq!(b.to_spins(), spins(&[1, -1, -1, 1]));
        assert_eq!(b.to_spins().to_bits(), b);
    }

    #[test]
    fn exhaustive_ground_states_ferromagnet() {
        let ferro = IsingModel::new(
            SquareMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap(),
            vec![0.0, 0.0],
            0.0,
        )
        .unwrap();
        let (e, states) = ferro.exhaustive_ground_states(1e-12).unwrap();
        assert_eq!(e, -1.0);
        assert_eq!(states.len(), 2);
        assert!(states.contains(&spins(&[1, 1])));
        assert!(states.contains(&spins(&[-1, -1])));
    }

    #[test]
    fn works_in_single_precision() {
        let raw = SquareMatrix::from_rows(&[vec![0.0f32, 4.0], vec![4.0, 0.0]]).unwrap();
        let q = Qubo::canonicalize(&raw).unwrap();
        let m = q.to_ising();
        for k in 0..4 {
            let s = BitConfig::from_index(k, 2);
            assert_eq!(q.energy(&s).unwrap(), m.energy(&s.to_spins()).unwrap());
        }
    }
}
