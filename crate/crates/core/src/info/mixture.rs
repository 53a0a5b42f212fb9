//! Differential entropy of two-component Gaussian mixtures.

use std::cell::Cell;

use super::quad::integrate_segments;
use super::{h2, Probability};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Components further apart than this many standard deviations are treated
/// as disjoint; the overlap contribution is far below double precision.
const DISJOINT_SIGMAS: f64 = 30.0;

/// `w N(mean1, var1) + (1 - w) N(mean2, var2)` on the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianMixture1D<T> {
    pub weight1: Probability<T>,
    pub mean1: T,
    pub mean2: T,
    pub var1: T,
    pub var2: T,
}

impl<T: Real> GaussianMixture1D<T> {
    pub fn new(weight1: T, mean1: T, mean2: T, var1: T, var2: T) -> Result<Self> {
        let weight1 = Probability::new(weight1)?;
        check_variance("var1", var1)?;
        check_variance("var2", var2)?;
        if !(mean1.is_finite() && mean2.is_finite()) {
            return Err(Error::invalid("mean", "component means must be finite"));
        }
        Ok(Self {
            weight1,
            mean1,
            mean2,
            var1,
            var2,
        })
    }

    pub fn weight2(&self) -> T {
        T::one() - self.weight1.get()
    }

    /// Natural log of the density at `z`.
    pub fn ln_pdf(&self, z: T) -> T {
        let w1 = self.weight1.get();
        let w2 = self.weight2();
        let mut terms = [T::neg_infinity(); 2];
        if w1 > T::zero() {
            terms[0] = w1.ln() + ln_normal(z, self.mean1, self.var1);
        }
        if w2 > T::zero() {
            terms[1] = w2.ln() + ln_normal(z, self.mean2, self.var2);
        }
        let m = terms[0].max(terms[1]);
        if m == T::neg_infinity() {
            return m;
        }
        m + ((terms[0] - m).exp() + (terms[1] - m).exp()).ln()
    }

    pub fn pdf(&self, z: T) -> T {
        self.ln_pdf(z).exp()
    }
}

fn check_variance<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v.as_f64(),
            expected: "> 0",
        })
    }
}

#[inline]
fn ln_normal<T: Real>(z: T, mean: T, var: T) -> T {
    let d = z - mean;
    -T::lit(0.5) * (d * d / var + (T::TAU() * var).ln())
}

/// `½ log2(2 π e σ²)`.
pub fn gaussian_entropy<T: Real>(var: T) -> T {
    T::lit(0.5) * (T::TAU() * T::E() * var).log2()
}

/// `h = -∫ f log2 f` of a two-component mixture, by adaptive quadrature.
pub fn mixture_diff_entropy<T: Real>(m: &GaussianMixture1D<T>) -> Result<T> {
    let w1 = m.weight1.get();
    if w1 == T::one() {
        return Ok(gaussian_entropy(m.var1));
    }
    if w1 == T::zero() {
        return Ok(gaussian_entropy(m.var2));
    }

    let (s1, s2) = (m.var1.sqrt(), m.var2.sqrt());
    let s_max = s1.max(s2);
    if (m.mean1 - m.mean2).abs() > T::lit(DISJOINT_SIGMAS) * s_max {
        let w2 = m.weight2();
        return Ok(h2(w1) + w1 * gaussian_entropy(m.var1) + w2 * gaussian_entropy(m.var2));
    }

    // Break points every two standard deviations out to ten, per component.
    let mut breaks = Vec::with_capacity(22);
    for (mu, s) in [(m.mean1, s1), (m.mean2, s2)] {
        for k in (-10..=10).step_by(2) {
            breaks.push(mu + T::lit(k as f64) * s);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * b.abs().max(T::one()));

    let ln2 = T::LN_2();
    let (lw1, lw2) = (
        w1.ln() - half_ln_tau_var(m.var1),
        m.weight2().ln() - half_ln_tau_var(m.var2),
    );
    let (k1, k2) = (-T::lit(0.5) / m.var1, -T::lit(0.5) / m.var2);
    let integrand = |z: T| {
        let (d1, d2) = (z - m.mean1, z - m.mean2);
        let (t1, t2) = (lw1 + k1 * d1 * d1, lw2 + k2 * d2 * d2);
        let f = t1.exp() + t2.exp();
        if f < T::min_positive_value() {
            // f ln f -> 0 in the far tails
            return T::zero();
        }
        -f * f.ln() / ln2
    };
    integrate_segments(integrand, &breaks, T::lit(T::QUAD_TOL))
}

#[inline]
fn half_ln_tau_var<T: Real>(var: T) -> T {
    T::lit(0.5) * (T::TAU() * var).ln()
}

/// Component weights and noise variances of the mixture whose means are the
/// two codeword amplitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureSpec<T> {
    pub weight1: Probability<T>,
    pub var1: T,
    pub var2: T,
}

impl<T: Real> MixtureSpec<T> {
    pub fn new(weight1: T, var1: T, var2: T) -> Result<Self> {
        check_variance("var1", var1)?;
        check_variance("var2", var2)?;
        Ok(Self {
            weight1: Probability::new(weight1)?,
            var1,
            var2,
        })
    }

    fn at(&self, mean1: T, mean2: T) -> GaussianMixture1D<T> {
        GaussianMixture1D {
            weight1: self.weight1,
            mean1,
            mean2,
            var1: self.var1,
            var2: self.var2,
        }
    }
}

/// `E[h(Z | i, j)]` for independent `i ~ N(0, signal_var1)`,
/// `j ~ N(0, signal_var2)`, where `Z | i, j` is the mixture
/// `w N(i, var1) + (1 - w) N(j, var2)`.
///
/// The entropy is invariant under a common shift of both means and even in
/// their difference, so only `|i - j| ~ |N(0, signal_var1 + signal_var2)|`
/// matters; that one-dimensional expectation is integrated adaptively.
pub fn expected_mixture_entropy<T: Real>(
    spec: &MixtureSpec<T>,
    signal_var1: T,
    signal_var2: T,
) -> Result<T> {
    for (name, v) in [("signal_var1", signal_var1), ("signal_var2", signal_var2)] {
        if !(v >= T::zero() && v.is_finite()) {
            return Err(Error::Domain {
                name,
                value: v.as_f64(),
                expected: ">= 0",
            });
        }
    }
    let w1 = spec.weight1.get();
    if w1 == T::one() {
        return Ok(gaussian_entropy(spec.var1));
    }
    if w1 == T::zero() {
        return Ok(gaussian_entropy(spec.var2));
    }

    let spread = (signal_var1 + signal_var2).sqrt();
    if spread == T::zero() {
        return mixture_diff_entropy(&spec.at(T::zero(), T::zero()));
    }

    // t = |i - j| / spread; beyond 9 the Gaussian weight is below 1e-18.
    let t_max = T::lit(9.0);
    let mut breaks: Vec<T> = [0.0, 1.0, 2.0, 3.5, 5.5, 9.0]
        .iter()
        .map(|&x| T::lit(x))
        .collect();
    // The mixture separates once |i - j| exceeds a few noise deviations.
    let noise = spec.var1.min(spec.var2).sqrt();
    for k in [1.0, 3.0, 8.0] {
        let t = T::lit(k) * noise / spread;
        if t < t_max {
            breaks.push(t);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));
    breaks.dedup();

    let failure: Cell<Option<Error>> = Cell::new(None);
    let norm = T::lit(2.0) / T::TAU().sqrt();
    let integrand = |t: T| {
        let weight = norm * (-T::lit(0.5) * t * t).exp();
        match mixture_diff_entropy(&spec.at(spread * t, T::zero())) {
            Ok(h) => weight * h,
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        }
    };
    let value = integrate_segments(integrand, &breaks, T::lit(10.0 * T::QUAD_TOL))?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_is_gaussian() {
        let m = GaussianMixture1D::new(1.0_f64, 0.0, 5.0, 2.5, 1.0).unwrap();
        assert_eq!(mixture_diff_entropy(&m).unwrap(), gaussian_entropy(2.5));
        let g = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * 2.5).log2();
        assert!((gaussian_entropy(2.5) - g).abs() < 1e-15);
    }

    #[test]
    fn coincident_components_collapse() {
        for w in [0.1_f64, 0.5, 0.83] {
            let m = GaussianMixture1D::new(w, 1.5, 1.5, 0.7, 0.7).unwrap();
            let h = mixture_diff_entropy(&m).unwrap();
            assert!((h - gaussian_entropy(0.7)).abs() < 1e-7, "w = {w}: {h}");
        }
    }

    #[test]
    fn translation_invariant() {
        let a = GaussianMixture1D::new(0.3_f64, 0.0, 2.0, 1.0, 3.0).unwrap();
        let b = GaussianMixture1D::new(0.3, 100.0, 102.0, 1.0, 3.0).unwrap();
        let (ha, hb) = (
            mixture_diff_entropy(&a).unwrap(),
            mixture_diff_entropy(&b).unwrap(),
        );
        assert!((ha - hb).abs() < 1e-7);
    }

    #[test]
    fn far_separation_adds_one_bit() {
        let m = GaussianMixture1D::new(0.5_f64, 0.0, 1e4, 1.0, 1.0).unwrap();
        let h = mixture_diff_entropy(&m).unwrap();
        assert!((h - gaussian_entropy(1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_variance() {
        assert!(GaussianMixture1D::new(0.5, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(MixtureSpec::new(0.5, 1.0, -1.0).is_err());
        assert!(MixtureSpec::new(1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn expected_entropy_degenerate_cases() {
        let spec = MixtureSpec::new(0.4_f64, 1.0, 2.0).unwrap();
        let direct =
            mixture_diff_entropy(&GaussianMixture1D::new(0.4, 0.0, 0.0, 1.0, 2.0).unwrap())
                .unwrap();
        assert_eq!(expected_mixture_entropy(&spec, 0.0, 0.0).unwrap(), direct);

        let spec = MixtureSpec::new(1.0_f64, 3.0, 2.0).unwrap();
        assert_eq!(
            expected_mixture_entropy(&spec, 5.0, 7.0).unwrap(),
            gaussian_entropy(3.0)
        );
        assert!(expected_mixture_entropy(&spec, -1.0, 0.0).is_err());
    }

    #[test]
    fn expected_entropy_is_between_limits() {
        // between the collapsed mixture and the fully separated one
        let spec = MixtureSpec::new(0.5_f64, 1.0, 1.0).unwrap();
        let e = expected_mixture_entropy(&spec, 2.0, 2.0).unwrap();
        let lo = gaussian_entropy(1.0);
        assert!(e > lo && e < lo + 1.0, "{e}");
        let far = expected_mixture_entropy(&spec, 1e8, 0.0).unwrap();
        assert!((far - lo - 1.0).abs() < 1e-3, "{far}");
    }

    #[test]
    fn works_in_single_precision() {
        let m = GaussianMixture1D::new(0.5_f32, 0.0, 3.0, 1.0, 1.0).unwrap();
        let h32 = mixture_diff_entropy(&m).unwrap();
        let m64 = GaussianMixture1D::new(0.5_f64, 0.0, 3.0, 1.0, 1.0).unwrap();
        let h64 = mixture_diff_entropy(&m64).unwrap();
        assert!((h32 as f64 - h64).abs() < 1e-4);
    }
}
