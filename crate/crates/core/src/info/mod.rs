//! Scalar information-theoretic primitives.
//!
//! All logarithms are base 2, so every entropy and rate is in bits.
//! The convention `0 log 0 = 0` is used throughout.

mod mixture;
pub(crate) mod quad;

pub use mixture::{
    expected_mixture_entropy, gaussian_entropy, mixture_diff_entropy, GaussianMixture1D,
    MixtureSpec,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A probability in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Probability<T>(T);

impl<T: Real> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "probability",
                value: value.to_f64().unwrap_or(f64::NAN),
                expected: "[0, 1]",
            })
        }
    }

    /// Clamps into `[0, 1]`; used for quantities that are probabilities by
    /// construction but may drift by rounding.
    pub fn clamped(value: T) -> Self {
        Self(value.max(T::zero()).min(T::one()))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    pub fn half() -> Self {
        Self(T::lit(0.5))
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }

    pub fn complement(self) -> Self {
        Self(T::one() - self.0)
    }
}

impl<T: fmt::Display> fmt::Display for Probability<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A non-negative rate in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct BitRate<T>(T);

impl<T: Real> BitRate<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "rate",
                value: value.to_f64().unwrap_or(f64::NAN),
                expected: ">= 0",
            })
        }
    }

    /// `[value]^+`.
    pub fn positive_part(value: T) -> Self {
        Self(value.pos())
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

impl<T: fmt::Display> fmt::Display for BitRate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy<T: Real>(p: Probability<T>) -> BitRate<T> {
    BitRate(h2(p.get()))
}

/// Unchecked binary entropy; the argument is clamped into `[0, 1]`.
#[inline]
pub(crate) fn h2<T: Real>(p: T) -> T {
    let p = p.max(T::zero()).min(T::one());
    let q = T::one() - p;
    let term = |x: T| {
        if x > T::zero() {
            -x * x.log2()
        } else {
            T::zero()
        }
    };
    term(p) + term(q)
}

/// Crossover probability of two cascaded binary symmetric channels:
/// `a (1 - b) + b (1 - a)`.
pub fn bsc_compose<T: Real>(a: Probability<T>, b: Probability<T>) -> Probability<T> {
    Probability::clamped(compose(a.get(), b.get()))
}

#[inline]
pub(crate) fn compose<T: Real>(a: T, b: T) -> T {
    a * (T::one() - b) + b * (T::one() - a)
}

/// `γ(x) = ½ log2(1 + x)`, the Gaussian channel rate at SNR `x`.
pub fn gamma_rate<T: Real>(snr: T) -> Result<BitRate<T>> {
    if snr >= T::zero() {
        Ok(BitRate(gamma(snr)))
    } else {
        Err(Error::Domain {
            name: "snr",
            value: snr.to_f64().unwrap_or(f64::NAN),
            expected: ">= 0",
        })
    }
}

#[inline]
pub(crate) fn gamma<T: Real>(snr: T) -> T {
    T::lit(0.5) * snr.ln_1p() / T::LN_2()
}

/// Standard normal CDF `φ(x)`.
pub fn gaussian_cdf<T: Real>(x: T) -> Probability<T> {
    let x = x.as_f64();
    Probability::clamped(T::lit(0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)))
}
