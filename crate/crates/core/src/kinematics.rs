//! Four-vector kinematics in the `(E, px, py, pz)` convention, GeV units.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum<T> {
    pub e: T,
    pub px: T,
    pub py: T,
    pub pz: T,
}

impl<T: Real> FourMomentum<T> {
    pub fn new(e: T, px: T, py: T, pz: T) -> Self {
        Self { e, px, py, pz }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Massless vector with energy `e` along the unit direction `dir`.
    pub fn massless(e: T, dir: [T; 3]) -> Self {
        Self::new(e, e * dir[0], e * dir[1], e * dir[2])
    }

    pub fn p3(&self) -> [T; 3] {
        [self.px, self.py, self.pz]
    }

    pub fn p2(&self) -> T {
        self.px * self.px + self.py * self.py + self.pz * self.pz
    }

    pub fn p(&self) -> T {
        self.p2().sqrt()
    }

    /// Transverse momentum with respect to the beam (z) axis.
    pub fn pt(&self) -> T {
        self.px.hypot(self.py)
    }

    pub fn m2(&self) -> T {
        self.e * self.e - self.p2()
    }

    /// Invariant mass, clamped at zero for spacelike rounding.
    pub fn mass(&self) -> T {
        self.m2().max(T::zero()).sqrt()
    }

    /// Cosine of the polar angle, or `None` at zero momentum.
    pub fn cos_theta(&self) -> Option<T> {
        let p = self.p();
        (p > T::zero()).then(|| self.pz / p)
    }

    pub fn dot3(&self, other: &Self) -> T {
        self.px * other.px + self.py * other.py + self.pz * other.pz
    }

    /// Cosine of the opening angle, clamped to `[-1, 1]`; `None` if either
    /// momentum vanishes.
    pub fn cos_angle(&self, other: &Self) -> Option<T> {
        let norm = self.p() * other.p();
        if norm > T::zero() {
            Some((self.dot3(other) / norm).max(-T::one()).min(T::one()))
        } else {
            None
        }
    }

    /// Boost along +z with velocity `beta`.
    pub fn boost_z(&self, beta: T) -> Self {
        let gamma = T::one() / (T::one() - beta * beta).sqrt();
        Self::new(
            gamma * (self.e + beta * self.pz),
            self.px,
            self.py,
            gamma * (self.pz + beta * self.e),
        )
    }

    /// Boost by the velocity vector `beta` (|beta| < 1).
    pub fn boost(&self, beta: [T; 3]) -> Self {
        let b2 = beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
        if b2 == T::zero() {
            return *self;
        }
        let gamma = T::one() / (T::one() - b2).sqrt();
        let bp = beta[0] * self.px + beta[1] * self.py + beta[2] * self.pz;
        let k = (gamma - T::one()) * bp / b2 + gamma * self.e;
        Self::new(
            gamma * (self.e + bp),
            self.px + k * beta[0],
            self.py + k * beta[1],
            self.pz + k * beta[2],
        )
    }

    /// Velocity vector `p / E`.
    pub fn velocity(&self) -> [T; 3] {
        [self.px / self.e, self.py / self.e, self.pz / self.e]
    }

    pub fn rotated(&self, r: &Rotation<T>) -> Self {
        let [x, y, z] = r.apply(self.p3());
        Self::new(self.e, x, y, z)
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.px.is_finite() && self.py.is_finite() && self.pz.is_finite()
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.e, self.px, self.py, self.pz]
    }
}

impl<T: Real> Add for FourMomentum<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.e + o.e, self.px + o.px, self.py + o.py, self.pz + o.pz)
    }
}

impl<T: Real> AddAssign for FourMomentum<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for FourMomentum<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.e - o.e, self.px - o.px, self.py - o.py, self.pz - o.pz)
    }
}

impl<T: Real> Neg for FourMomentum<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e, -self.px, -self.py, -self.pz)
    }
}

impl<T: Real> Mul<T> for FourMomentum<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.e * s, self.px * s, self.py * s, self.pz * s)
    }
}

impl<T: Real> Sum for FourMomentum<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}

/// `2 min(Ei^2, Ej^2) (1 - cos theta_ij)`, the Durham / ee-kt distance.
pub fn eekt_measure<T: Real>(ei: T, ej: T, cos_ij: T) -> T {
    let emin = ei.min(ej);
    T::lit(2.0) * emin * emin * (T::one() - cos_ij)
}

/// 3x3 rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<T> {
    m: [[T; 3]; 3],
}

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    /// Rotation by `angle` about the unit `axis` (Rodrigues).
    pub fn axis_angle(axis: [T; 3], angle: T) -> Self {
        let [x, y, z] = axis;
        let (s, c) = angle.sin_cos();
        let t = T::one() - c;
        Self {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// Rotation taking the unit vector `from` onto the unit vector `to`
    /// along the great circle joining them.
    pub fn aligning(from: [T; 3], to: [T; 3]) -> Self {
        let cross = [
            from[1] * to[2] - from[2] * to[1],
            from[2] * to[0] - from[0] * to[2],
            from[0] * to[1] - from[1] * to[0],
        ];
        let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let cos = from[0] * to[0] + from[1] * to[1] + from[2] * to[2];
        if sin <= T::lit(1e-300).max(T::min_positive_value()) {
            if cos > T::zero() {
                return Self::identity();
            }
            // antiparallel: half turn about any axis orthogonal to `from`
            let helper = if from[0].abs() < T::lit(0.9) {
                [T::one(), T::zero(), T::zero()]
            } else {
                [T::zero(), T::one(), T::zero()]
            };
            let mut axis = [
                from[1] * helper[2] - from[2] * helper[1],
                from[2] * helper[0] - from[0] * helper[2],
                from[0] * helper[1] - from[1] * helper[0],
            ];
            let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
            axis.iter_mut().for_each(|a| *a = *a / n);
            return Self::axis_angle(axis, T::PI());
        }
        let axis = [cross[0] / sin, cross[1] / sin, cross[2] / sin];
        Self::axis_angle(axis, sin.atan2(cos))
    }

    pub fn apply(&self, v: [T; 3]) -> [T; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }
}
