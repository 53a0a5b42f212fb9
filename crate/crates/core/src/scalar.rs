//! Scalar abstraction shared by the rate formulas and the region geometry.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by every closed-form computation in the crate.
///
/// Implemented for `f32` and `f64`. The Monte Carlo simulator works in `f64`
/// only; everything else is generic.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Collinearity / coincidence threshold for hull construction.
    const GEOM_EPS: f64;
    /// Absolute accuracy the adaptive quadrature aims for, in bits.
    const QUAD_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// `max(self, 0)`.
    #[inline]
    fn pos(self) -> Self {
        if self > Self::zero() {
            self
        } else {
            Self::zero()
        }
    }
}

impl Real for f64 {
    const GEOM_EPS: f64 = 1e-12;
    const QUAD_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const GEOM_EPS: f64 = 1e-6;
    const QUAD_TOL: f64 = 1e-5;
}

/// Points `0, step, 2 step, ..., 1` on the unit interval; `1` is always included.
pub fn unit_grid<T: Real>(step: T) -> Vec<T> {
    let n = (T::one() / step).round().to_usize().unwrap_or(1).max(1);
    let exact = (T::lit(n as f64) * step - T::one()).abs() <= T::lit(1e-9);
    if exact {
        return unit_linspace(n);
    }
    // step does not divide 1: keep the regular points below 1, then 1 itself
    let mut out: Vec<T> = (0..=n)
        .map(|k| T::lit(k as f64) * step)
        .filter(|&x| x < T::one())
        .collect();
    out.push(T::one());
    out
}

/// `n + 1` evenly spaced points on `[0, 1]`.
pub fn unit_linspace<T: Real>(n: usize) -> Vec<T> {
    let n = n.max(1);
    (0..=n)
        .map(|k| T::lit(k as f64) / T::lit(n as f64))
        .collect()
}
