// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Tolerances throughout the crate are quoted for `f64`. [`Real::tol`]
/// rescales them by the ratio of machine epsilons so the same checks stay
/// meaningful in single precision.
pub trait Real: Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self;

    /// Lossy conversion to `f64`.
    fn to_f64_lossy(self) -> f64;

    /// Tolerance `x` (given for double precision) adapted to this precision.
    fn tol(x: f64) -> Self {
        let ratio = Self::epsilon().to_f64_lossy() / f64::EPSILON;
        if ratio <= 1.0 {
            Self::of(x)
        } else {
            Self::of((x * ratio).min(x.max(1e-4)))
        }
    }
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

pub(crate) fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}
