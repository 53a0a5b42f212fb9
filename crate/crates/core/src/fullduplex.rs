//! Full-duplex regions: modulo-2 and Gaussian channels with channel
//! prefixing, cooperative binning and key sharing, plus the comparison
//! schemes they are plotted against.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::{compose, gamma, h2, Probability};
use crate::region::{hull_unchecked, pentagon, RateBounds, RatePoint, RateRegion};
use crate::scalar::{unit_grid, unit_linspace, Real};

/// Binary additive noise crossovers at user 1, user 2 and Eve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuloChannel<T> {
    pub eps1: Probability<T>,
    pub eps2: Probability<T>,
    pub eps_e: Probability<T>,
}

impl<T: Real> ModuloChannel<T> {
    pub fn new(eps1: T, eps2: T, eps_e: T) -> Result<Self> {
        Ok(Self {
            eps1: Probability::new(eps1)?,
            eps2: Probability::new(eps2)?,
            eps_e: Probability::new(eps_e)?,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            eps1: Probability::zero(),
            eps2: Probability::zero(),
            eps_e: Probability::zero(),
        }
    }

    /// Relabels user 1 as user 2 and vice versa.
    pub fn swapped(self) -> Self {
        Self {
            eps1: self.eps2,
            eps2: self.eps1,
            eps_e: self.eps_e,
        }
    }
}

/// Probabilities of the prefix noise bits Alice and Bob add to their codewords.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuloPrefix<T> {
    pub ebar1: Probability<T>,
    pub ebar2: Probability<T>,
}

impl<T: Real> ModuloPrefix<T> {
    pub fn new(ebar1: T, ebar2: T) -> Result<Self> {
        Ok(Self {
            ebar1: Probability::new(ebar1)?,
            ebar2: Probability::new(ebar2)?,
        })
    }

    pub fn none() -> Self {
        Self {
            ebar1: Probability::zero(),
            ebar2: Probability::zero(),
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            ebar1: self.ebar2,
            ebar2: self.ebar1,
        }
    }
}

/// End-to-end crossovers once prefix noise is cascaded with channel noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuloDerived<T> {
    /// Bob's codeword as seen by Alice.
    pub ehat1: T,
    /// Alice's codeword as seen by Bob.
    pub ehat2: T,
    pub ebar12: T,
    /// `c1 ⊕ c2` as seen by Eve.
    pub ehat_e: T,
}

impl<T: Real> ModuloDerived<T> {
    pub fn new(ch: &ModuloChannel<T>, pre: &ModuloPrefix<T>) -> Self {
        let ebar12 = compose(pre.ebar1.get(), pre.ebar2.get());
        Self {
            ehat1: compose(ch.eps1.get(), pre.ebar2.get()),
            ehat2: compose(ch.eps2.get(), pre.ebar1.get()),
            ebar12,
            ehat_e: compose(ch.eps_e.get(), ebar12),
        }
    }
}

pub fn fm_bounds<T: Real>(ch: &ModuloChannel<T>, pre: &ModuloPrefix<T>) -> RateBounds<T> {
    let d = ModuloDerived::new(ch, pre);
    let one = T::one();
    RateBounds::new(
        one - h2(d.ehat2),
        one - h2(d.ehat1),
        one + h2(d.ehat_e) - h2(d.ehat1) - h2(d.ehat2),
    )
}

fn check_step<T: Real>(name: &'static str, step: T) -> Result<()> {
    if step > T::zero() && step <= T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("step {step} is not in (0, 0.5]"),
        ))
    }
}

/// Union over the `(ebar1, ebar2)` prefix grid on `[0, 1]²`.
pub fn fm_region<T: Real>(ch: &ModuloChannel<T>, grid_step: T) -> Result<RateRegion<T>> {
    check_step("grid_step", grid_step)?;
    let grid = unit_grid(grid_step);
    let mut pts = Vec::with_capacity(2 * grid.len() * grid.len());
    for &e1 in &grid {
        for &e2 in &grid {
            let pre = ModuloPrefix {
                ebar1: Probability::clamped(e1),
                ebar2: Probability::clamped(e2),
            };
            pts.extend_from_slice(pentagon(fm_bounds(ch, &pre)).vertices());
        }
    }
    Ok(hull_unchecked(pts))
}

/// Single-user end points `(1 - H(eps2), 0)` and `(0, 1 - H(eps1))`.
///
/// Each user's rate is limited by the noise at its receiver: Alice's
/// message travels to Bob through `eps2`, Bob's to Alice through `eps1`.
/// These are exactly the axis extremes of [`fm_region`].
pub fn fm_corner_points<T: Real>(ch: &ModuloChannel<T>) -> (RatePoint<T>, RatePoint<T>) {
    let one = T::one();
    (
        RatePoint::new(one - h2(ch.eps2.get()), T::zero()),
        RatePoint::new(T::zero(), one - h2(ch.eps1.get())),
    )
}

/// Binning and key sharing only: the region without prefix noise.
pub fn fm_no_prefix_region<T: Real>(ch: &ModuloChannel<T>) -> RateRegion<T> {
    pentagon(fm_bounds(ch, &ModuloPrefix::none()))
}

/// Power gains and budgets of the full-duplex Gaussian channel.
///
/// `g11` and `g22` are kept for completeness; each receiver cancels its
/// own signal, so they never enter a rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianChannel<T> {
    pub g11: T,
    pub g22: T,
    pub ge1: T,
    pub ge2: T,
    pub rho1: T,
    pub rho2: T,
}

impl<T: Real> GaussianChannel<T> {
    pub fn new(ge1: T, ge2: T, rho1: T, rho2: T) -> Result<Self> {
        let ch = Self {
            g11: T::one(),
            g22: T::one(),
            ge1,
            ge2,
            rho1,
            rho2,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g11", self.g11),
            ("g22", self.g22),
            ("ge1", self.ge1),
            ("ge2", self.ge2),
            ("rho1", self.rho1),
            ("rho2", self.rho2),
        ];
        for (name, v) in fields {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::Domain {
                    name,
                    value: v.as_f64(),
                    expected: "finite and >= 0",
                });
            }
        }
        Ok(())
    }

    pub fn swapped(self) -> Self {
        Self {
            g11: self.g22,
            g22: self.g11,
            ge1: self.ge2,
            ge2: self.ge1,
            rho1: self.rho2,
            rho2: self.rho1,
        }
    }
}

/// Codeword (`c`) and artificial-noise (`n`) powers of both users.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PowerSplit<T> {
    pub rho1c: T,
    pub rho1n: T,
    pub rho2c: T,
    pub rho2n: T,
}

impl<T: Real> PowerSplit<T> {
    pub fn new(rho1c: T, rho1n: T, rho2c: T, rho2n: T) -> Result<Self> {
        for (name, v) in [
            ("rho1c", rho1c),
            ("rho1n", rho1n),
            ("rho2c", rho2c),
            ("rho2n", rho2n),
        ] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::Domain {
                    name,
                    value: v.as_f64(),
                    expected: "finite and >= 0",
                });
            }
        }
        Ok(Self {
            rho1c,
            rho1n,
            rho2c,
            rho2n,
        })
    }

    /// Checks `rho_ic + rho_in <= rho_i` with a relative slack of 1e-9.
    pub fn check_budget(&self, ch: &GaussianChannel<T>) -> Result<()> {
        let slack = |rho: T| T::lit(1e-9) * rho.max(T::one());
        if self.rho1c + self.rho1n > ch.rho1 + slack(ch.rho1) {
            return Err(Error::ConstraintViolation(format!(
                "rho1c + rho1n = {} exceeds rho1 = {}",
                self.rho1c + self.rho1n,
                ch.rho1
            )));
        }
        if self.rho2c + self.rho2n > ch.rho2 + slack(ch.rho2) {
            return Err(Error::ConstraintViolation(format!(
                "rho2c + rho2n = {} exceeds rho2 = {}",
                self.rho2c + self.rho2n,
                ch.rho2
            )));
        }
        Ok(())
    }

    pub fn swapped(self) -> Self {
        Self {
            rho1c: self.rho2c,
            rho1n: self.rho2n,
            rho2c: self.rho1c,
            rho2n: self.rho1n,
        }
    }
}

pub fn fg_bounds<T: Real>(ch: &GaussianChannel<T>, sp: &PowerSplit<T>) -> RateBounds<T> {
    let one = T::one();
    let a = gamma(sp.rho1c / (one + sp.rho1n));
    let b = gamma(sp.rho2c / (one + sp.rho2n));
    let eve = gamma(
        (sp.rho1c * ch.ge1 + sp.rho2c * ch.ge2) / (one + sp.rho1n * ch.ge1 + sp.rho2n * ch.ge2),
    );
    RateBounds::new(a, b, a + b - eve)
}

/// Per-user power grid: `budget_steps + 1` total-power fractions times
/// `codeword_steps + 1` codeword fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerSweep {
    pub budget_steps: usize,
    pub codeword_steps: usize,
}

impl Default for PowerSweep {
    fn default() -> Self {
        Self {
            budget_steps: 50,
            codeword_steps: 50,
        }
    }
}

/// Which users may put power into a codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SplitFamily {
    Full,
    NoPrefix,
    /// Only user 1 (or only user 2) sends a codeword; the other only jams.
    JamOne,
}

impl PowerSweep {
    pub fn validate(&self) -> Result<()> {
        if self.budget_steps == 0 || self.codeword_steps == 0 {
            return Err(Error::invalid(
                "sweep",
                "grid needs at least one step per axis",
            ));
        }
        Ok(())
    }

    /// `(rho_c, rho_n)` pairs for a user with budget `rho`.
    pub fn user_splits<T: Real>(&self, rho: T) -> Vec<(T, T)> {
        let mut out = Vec::new();
        for u in unit_linspace::<T>(self.budget_steps) {
            for f in unit_linspace::<T>(self.codeword_steps) {
                out.push((u * f * rho, u * (T::one() - f) * rho));
            }
        }
        out
    }
}

fn fg_family<T: Real>(
    ch: &GaussianChannel<T>,
    sweep: &PowerSweep,
    family: SplitFamily,
) -> Result<RateRegion<T>> {
    ch.validate()?;
    sweep.validate()?;
    let mut s1 = sweep.user_splits(ch.rho1);
    let mut s2 = sweep.user_splits(ch.rho2);
    if family == SplitFamily::NoPrefix {
        s1.retain(|&(_, n)| n == T::zero());
        s2.retain(|&(_, n)| n == T::zero());
    }
    if family != SplitFamily::JamOne {
        return Ok(hull_splits(ch, &s1, &s2));
    }
    let jam1: Vec<_> = s1
        .iter()
        .copied()
        .filter(|&(c, _)| c == T::zero())
        .collect();
    let jam2: Vec<_> = s2
        .iter()
        .copied()
        .filter(|&(c, _)| c == T::zero())
        .collect();
    let mut pts = hull_splits(ch, &s1, &jam2).vertices().to_vec();
    pts.extend_from_slice(hull_splits(ch, &jam1, &s2).vertices());
    Ok(hull_unchecked(pts))
}

fn hull_splits<T: Real>(ch: &GaussianChannel<T>, s1: &[(T, T)], s2: &[(T, T)]) -> RateRegion<T> {
    let one = T::one();
    let user2: Vec<(T, T, T)> = s2
        .iter()
        .map(|&(c, n)| (gamma(c / (one + n)), c * ch.ge2, n * ch.ge2))
        .collect();
    let pts: Vec<RatePoint<T>> = s1
        .par_iter()
        .map(|&(c1, n1)| {
            let a = gamma(c1 / (one + n1));
            let (ec1, en1) = (c1 * ch.ge1, n1 * ch.ge1);
            let mut local = Vec::with_capacity(2 * user2.len());
            for &(b, ec2, en2) in &user2 {
                let sum = (a + b - gamma((ec1 + ec2) / (one + en1 + en2))).pos();
                let (a, b) = (a.min(sum), b.min(sum));
                local.push(RatePoint::new(a, (sum - a).min(b)));
                local.push(RatePoint::new((sum - b).min(a), b));
            }
            hull_unchecked(local).vertices().to_vec()
        })
        .flatten()
        .collect();
    hull_unchecked(pts)
}

/// Union over the power-split sweep.
pub fn fg_region<T: Real>(ch: &GaussianChannel<T>, sweep: &PowerSweep) -> Result<RateRegion<T>> {
    fg_family(ch, sweep, SplitFamily::Full)
}

/// Binning and key sharing without artificial noise (`rho_in = 0`).
pub fn fg_no_prefix_region<T: Real>(
    ch: &GaussianChannel<T>,
    sweep: &PowerSweep,
) -> Result<RateRegion<T>> {
    fg_family(ch, sweep, SplitFamily::NoPrefix)
}

/// One user encodes, the other only transmits noise; union of both roles.
pub fn fg_jam_one_region<T: Real>(
    ch: &GaussianChannel<T>,
    sweep: &PowerSweep,
) -> Result<RateRegion<T>> {
    fg_family(ch, sweep, SplitFamily::JamOne)
}

/// α grid `step, 2 step, ..., 1` plus extra candidate points in `(0, 1]`.
fn alpha_candidates<T: Real>(step: T, extra: &[T]) -> Vec<T> {
    let mut out: Vec<T> = unit_grid(step)
        .into_iter()
        .filter(|&a| a > T::zero())
        .collect();
    out.extend(
        extra
            .iter()
            .copied()
            .filter(|&a| a > T::zero() && a <= T::one()),
    );
    out
}

/// Rate a key received from the other user over a full-power link is worth
/// to Eve-free encryption: `[γ(ρ2) - γ(ge2 ρ2 / (1 + ge1 ρ1))]^+`.
fn key_rate<T: Real>(ch: &GaussianChannel<T>) -> T {
    (gamma(ch.rho2) - gamma(ch.ge2 * ch.rho2 / (T::one() + ch.ge1 * ch.rho1))).pos()
}

fn he_yener_r1<T: Real>(ch: &GaussianChannel<T>, alpha_step: T) -> T {
    let one = T::one();
    let g1 = gamma(ch.rho1);
    let leak = gamma(ch.ge1 * ch.rho1 / (one + ch.ge2 * ch.rho2));
    let key = key_rate(ch);
    // the inner bracket switches on where α leak = (1 - α) key
    let switch = if leak + key > T::zero() {
        key / (leak + key)
    } else {
        one
    };
    alpha_candidates(alpha_step, &[switch])
        .into_iter()
        .map(|alpha| {
            let inner = (leak - (one - alpha) / alpha * key).pos();
            (alpha * (g1 - inner).pos()).pos()
        })
        .fold(T::zero(), T::max)
}

fn backward_key_r1<T: Real>(ch: &GaussianChannel<T>, alpha_step: T) -> T {
    let g1 = gamma(ch.rho1);
    let key = key_rate(ch);
    // the two branches cross at α g1 = (1 - α) key
    let crossing = if g1 + key > T::zero() {
        key / (g1 + key)
    } else {
        T::one()
    };
    alpha_candidates(alpha_step, &[crossing])
        .into_iter()
        .map(|alpha| (alpha * g1).min((T::one() - alpha) * key))
        .fold(T::zero(), T::max)
}

/// Single-user rates `(R1*, R2*)` of the comparison scheme that time-shares
/// between wiretap coding with the other user jamming and key exchange.
pub fn he_yener_rates<T: Real>(ch: &GaussianChannel<T>, alpha_step: T) -> Result<(T, T)> {
    check_step("alpha_step", alpha_step)?;
    ch.validate()?;
    Ok((
        he_yener_r1(ch, alpha_step),
        he_yener_r1(&ch.swapped(), alpha_step),
    ))
}

/// Hull of `(0,0)`, `(R1*, 0)`, `(0, R2*)`.
pub fn he_yener_region<T: Real>(ch: &GaussianChannel<T>, alpha_step: T) -> Result<RateRegion<T>> {
    let (r1, r2) = he_yener_rates(ch, alpha_step)?;
    Ok(axis_triangle(r1, r2))
}

/// Single-user rates `(R1†, R2†)` of backward key sharing: the receiver first
/// sends a secret key, which then one-time-pads the message.
pub fn backward_key_rates<T: Real>(ch: &GaussianChannel<T>, alpha_step: T) -> Result<(T, T)> {
    check_step("alpha_step", alpha_step)?;
    ch.validate()?;
    Ok((
        backward_key_r1(ch, alpha_step),
        backward_key_r1(&ch.swapped(), alpha_step),
    ))
}

/// Hull of `(0,0)`, `(R1†, 0)`, `(0, R2†)`.
pub fn backward_key_region<T: Real>(
    ch: &GaussianChannel<T>,
    alpha_step: T,
) -> Result<RateRegion<T>> {
    let (r1, r2) = backward_key_rates(ch, alpha_step)?;
    Ok(axis_triangle(r1, r2))
}

fn axis_triangle<T: Real>(r1: T, r2: T) -> RateRegion<T> {
    hull_unchecked(vec![
        RatePoint::new(r1, T::zero()),
        RatePoint::new(T::zero(), r2),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::gamma_rate;

    fn hb(p: f64) -> f64 {
        h2(p)
    }

    #[test]
    fn noiseless_prefix_example() {
        let ch = ModuloChannel::noiseless();
        let b = fm_bounds(&ch, &ModuloPrefix::new(0.0, 0.5).unwrap());
        assert_eq!((b.a, b.b, b.c), (1.0, 0.0, 1.0));
        let b = fm_bounds(&ch, &ModuloPrefix::new(0.5, 0.5).unwrap());
        assert_eq!((b.a, b.b), (0.0, 0.0));
    }

    #[test]
    fn modulo_bounds_at_reference_channel() {
        let ch = ModuloChannel::new(0.2, 0.3, 0.25).unwrap();
        let b = fm_bounds(&ch, &ModuloPrefix::none());
        assert!((b.a - (1.0 - hb(0.3))).abs() < 1e-15);
        assert!((b.b - (1.0 - hb(0.2))).abs() < 1e-15);
        assert!((b.c - (1.0 + hb(0.25) - hb(0.2) - hb(0.3))).abs() < 1e-15);
    }

    #[test]
    fn corner_points() {
        let (p, q) = fm_corner_points(&ModuloChannel::new(0.3, 0.0, 0.1).unwrap());
        assert_eq!((p.r1, p.r2), (1.0, 0.0));
        assert!((q.r2 - (1.0 - hb(0.3))).abs() < 1e-15);
        let (p, _) = fm_corner_points(&ModuloChannel::new(0.1, 0.5, 0.1).unwrap());
        assert_eq!(p.r1, 0.0);
        let (_, q) = fm_corner_points(&ModuloChannel::new(0.2_f64, 0.1, 0.1).unwrap());
        assert!((q.r2 - 0.278_071_905_112_638).abs() < 1e-12);
    }

    #[test]
    fn noiseless_region_reaches_unit_points() {
        let r = fm_region(&ModuloChannel::noiseless(), 0.05).unwrap();
        assert!(r.contains(RatePoint::new(1.0, 0.0), 0.0));
        assert!(r.contains(RatePoint::new(0.0, 1.0), 0.0));
        assert!(fm_region(&ModuloChannel::noiseless(), 0.0).is_err());
        assert!(fm_region(&ModuloChannel::noiseless(), 0.6).is_err());
    }

    #[test]
    fn gaussian_bounds_examples() {
        let ch = GaussianChannel::new(10.0_f64, 0.1, 1.0, 100.0).unwrap();
        let zero = fg_bounds(&ch, &PowerSplit::default());
        assert_eq!((zero.a, zero.b, zero.c), (0.0, 0.0, 0.0));

        let sp = PowerSplit::new(1.0, 0.0, 100.0, 0.0).unwrap();
        let b = fg_bounds(&ch, &sp);
        assert!((b.a - 0.5).abs() < 1e-15);
        let g100 = 0.5 * 101f64.log2();
        assert!((b.b - g100).abs() < 1e-14);
        // Eve sees 1·10 + 100·0.1 = 20 over unit noise
        assert!((b.c - (0.5 + g100 - 0.5 * 21f64.log2())).abs() < 1e-14);

        let deaf = GaussianChannel::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let b = fg_bounds(&deaf, &PowerSplit::new(0.4, 0.6, 1.0, 0.0).unwrap());
        assert_eq!(b.c, b.a + b.b);
    }

    #[test]
    fn budget_check() {
        let ch = GaussianChannel::new(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(PowerSplit::new(0.5, 0.5, 1.0, 1.0)
            .unwrap()
            .check_budget(&ch)
            .is_ok());
        assert!(PowerSplit::new(0.5, 0.6, 1.0, 1.0)
            .unwrap()
            .check_budget(&ch)
            .is_err());
        assert!(PowerSplit::new(-0.1, 0.0, 0.0, 0.0).is_err());
        assert!(GaussianChannel::new(-1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn comparison_scheme_limits() {
        let deaf = GaussianChannel::new(0.0, 0.0, 3.0, 1.0).unwrap();
        let (r1, _) = he_yener_rates(&deaf, 0.01).unwrap();
        assert!((r1 - gamma_rate(3.0_f64).unwrap().get()).abs() < 1e-15);

        let silent = GaussianChannel::new(5.0, 0.1, 0.0, 0.0).unwrap();
        let r = he_yener_region(&silent, 0.01).unwrap();
        assert_eq!(r.vertices(), &[RatePoint::origin()]);

        // clean key channel: balance α γ(ρ1) = (1 - α) γ(ρ2)
        let clean = GaussianChannel::new(1.0, 0.0, 3.0, 1.0).unwrap();
        let (r1, _) = backward_key_rates(&clean, 0.1).unwrap();
        let (g1, g2) = (1.0, 0.5 * 2f64.log2());
        assert!((r1 - g1 * g2 / (g1 + g2)).abs() < 1e-12);

        // Eve hears user 2 better than user 1 does: no key, no rate
        let keyless = GaussianChannel::new(0.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(backward_key_rates(&keyless, 0.01).unwrap().0, 0.0);
    }

    #[test]
    fn comparison_rates_with_asymmetric_eve_gains() {
        let ch = GaussianChannel::new(5.0_f64, 0.1, 1.0, 1.0).unwrap();
        let (r1_star, _) = he_yener_rates(&ch, 1e-4).unwrap();
        let (r1_dag, _) = backward_key_rates(&ch, 1e-4).unwrap();
        assert!((r1_star - 0.1414).abs() < 1e-3, "{r1_star}");
        assert!((r1_dag - 0.2470).abs() < 1e-3, "{r1_dag}");
    }

    #[test]
    fn restriction_regions_fit_inside_full_region() {
        let ch = GaussianChannel::new(10.0, 0.1, 1.0, 10.0).unwrap();
        let sweep = PowerSweep {
            budget_steps: 10,
            codeword_steps: 10,
        };
        let full = fg_region(&ch, &sweep).unwrap();
        for sub in [
            fg_no_prefix_region(&ch, &sweep).unwrap(),
            fg_jam_one_region(&ch, &sweep).unwrap(),
        ] {
            for v in sub.vertices() {
                assert!(full.contains(*v, 1e-12));
            }
        }
    }
}
