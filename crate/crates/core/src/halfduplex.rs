//! Half-duplex regions: deterministic and randomized scheduling over the
//! modulo-2 and Gaussian channels.
//!
//! With randomized scheduling each user transmits in a given symbol with
//! probability `P_i`. The four states are: only user 1 (state 1), only user 2
//! (state 2), both (state 3) and silence (state 4, known to everybody).

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fullduplex::{GaussianChannel, ModuloChannel, ModuloDerived, ModuloPrefix, PowerSplit};
use crate::info::{
    compose, expected_mixture_entropy, gamma, gaussian_entropy, h2, MixtureSpec, Probability,
};
use crate::region::{hull_unchecked, RateBounds, RatePoint, RateRegion};
use crate::scalar::{unit_grid, unit_linspace, Real};

/// Per-symbol transmit probabilities of the two users.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchedulingProbs<T> {
    pub p1: Probability<T>,
    pub p2: Probability<T>,
}

impl<T: Real> SchedulingProbs<T> {
    pub fn new(p1: T, p2: T) -> Result<Self> {
        Ok(Self {
            p1: Probability::new(p1)?,
            p2: Probability::new(p2)?,
        })
    }

    /// `(P(state 1), P(state 2), P(state 3))`.
    pub fn state_probs(&self) -> (T, T, T) {
        let (p1, p2) = (self.p1.get(), self.p2.get());
        (p1 * (T::one() - p2), p2 * (T::one() - p1), p1 * p2)
    }

    /// Probability that exactly one user transmits.
    pub fn single_weight(&self) -> T {
        let (s1, s2, _) = self.state_probs();
        s1 + s2
    }

    /// `(d1, d2)`: which user is active given that exactly one is.
    pub fn single_split(&self) -> Result<(T, T)> {
        let (s1, s2, _) = self.state_probs();
        let w = s1 + s2;
        if w > T::zero() {
            let d1 = (s1 / w).min(T::one());
            Ok((d1, T::one() - d1))
        } else {
            Err(Error::DegenerateScheduling {
                p1: self.p1.get().as_f64(),
                p2: self.p2.get().as_f64(),
            })
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            p1: self.p2,
            p2: self.p1,
        }
    }
}

/// Time shares of a schedule agreed in advance (and so known to Eve).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterministicShares<T> {
    pub ps1: Probability<T>,
    pub ps2: Probability<T>,
}

impl<T: Real> DeterministicShares<T> {
    pub fn new(ps1: T, ps2: T) -> Result<Self> {
        if (ps1 + ps2 - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(4.0)) {
            return Err(Error::ConstraintViolation(format!(
                "time shares must sum to 1, got {ps1} + {ps2}"
            )));
        }
        Ok(Self {
            ps1: Probability::new(ps1)?,
            ps2: Probability::new(ps2)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfDuplexModuloParams<T> {
    pub prefix: ModuloPrefix<T>,
    /// `P(C1 = 1)` and `P(C2 = 1)`.
    pub mu1: Probability<T>,
    pub mu2: Probability<T>,
    pub sched: SchedulingProbs<T>,
}

impl<T: Real> HalfDuplexModuloParams<T> {
    pub fn new(ebar1: T, ebar2: T, mu1: T, mu2: T, p1: T, p2: T) -> Result<Self> {
        Ok(Self {
            prefix: ModuloPrefix::new(ebar1, ebar2)?,
            mu1: Probability::new(mu1)?,
            mu2: Probability::new(mu2)?,
            sched: SchedulingProbs::new(p1, p2)?,
        })
    }

    pub fn swapped(self) -> Self {
        Self {
            prefix: self.prefix.swapped(),
            mu1: self.mu2,
            mu2: self.mu1,
            sched: self.sched.swapped(),
        }
    }
}

/// Output statistics of every single-user and collision state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuloStates<T> {
    pub eps_e1: T,
    pub eps_e2: T,
    pub ehat_e: T,
    pub ehat1: T,
    pub ehat2: T,
    pub muhat1: T,
    pub muhat2: T,
    pub mu_e1: T,
    pub mu_e2: T,
    pub muhat_e: T,
    pub mu12: T,
}

impl<T: Real> ModuloStates<T> {
    pub fn new(ch: &ModuloChannel<T>, prefix: &ModuloPrefix<T>, mu1: T, mu2: T) -> Self {
        let full = ModuloDerived::new(ch, prefix);
        let eps_e1 = compose(ch.eps_e.get(), prefix.ebar1.get());
        let eps_e2 = compose(ch.eps_e.get(), prefix.ebar2.get());
        let mu12 = compose(mu1, mu2);
        Self {
            eps_e1,
            eps_e2,
            ehat_e: full.ehat_e,
            ehat1: full.ehat1,
            ehat2: full.ehat2,
            muhat1: compose(full.ehat1, mu2),
            muhat2: compose(full.ehat2, mu1),
            mu_e1: compose(eps_e1, mu1),
            mu_e2: compose(eps_e2, mu2),
            muhat_e: compose(full.ehat_e, mu12),
            mu12,
        }
    }

    /// `I(C1; Y2 | state 1)`.
    pub fn main1(&self) -> T {
        h2(self.muhat2) - h2(self.ehat2)
    }

    /// `I(C2; Y1 | state 2)`.
    pub fn main2(&self) -> T {
        h2(self.muhat1) - h2(self.ehat1)
    }

    /// `I(C1, C2; Z | state 3)`.
    pub fn eve_collision(&self) -> T {
        h2(self.muhat_e) - h2(self.ehat_e)
    }

    /// `I(C1, C2; Z | state 1 or 2)` when Eve cannot tell the two apart.
    pub fn eve_single(&self, d1: T, d2: T) -> T {
        let half = T::lit(0.5);
        h2(self.mu_e1 * d1 + self.mu_e2 * d2)
            - half * h2(d1 * self.eps_e1 + d2 * self.eps_e2)
            - half * h2(d1 * (T::one() - self.eps_e1) + d2 * self.eps_e2)
    }
}

/// Derived crossovers together with the single-state split `(d1, d2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfDuplexModuloDerived<T> {
    pub states: ModuloStates<T>,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> HalfDuplexModuloDerived<T> {
    pub fn new(ch: &ModuloChannel<T>, params: &HalfDuplexModuloParams<T>) -> Result<Self> {
        let (d1, d2) = params.sched.single_split()?;
        Ok(Self {
            states: ModuloStates::new(ch, &params.prefix, params.mu1.get(), params.mu2.get()),
            d1,
            d2,
        })
    }
}

fn hm_from_states<T: Real>(st: &ModuloStates<T>, sched: (T, T, T), d: (T, T)) -> RateBounds<T> {
    let (s1, s2, s3) = sched;
    let a = s1 * st.main1();
    let b = s2 * st.main2();
    let c = a + b - s3 * st.eve_collision() - (s1 + s2) * st.eve_single(d.0, d.1);
    RateBounds::new(a, b, c)
}

/// Randomized scheduling over the modulo-2 channel.
pub fn hm_bounds<T: Real>(
    ch: &ModuloChannel<T>,
    params: &HalfDuplexModuloParams<T>,
) -> Result<RateBounds<T>> {
    let dv = HalfDuplexModuloDerived::new(ch, params)?;
    Ok(hm_from_states(
        &dv.states,
        params.sched.state_probs(),
        (dv.d1, dv.d2),
    ))
}

/// Grid steps for the modulo-2 half-duplex sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HmSweep<T> {
    pub prefix_step: T,
    pub input_step: T,
    pub sched_step: T,
}

impl<T: Real> Default for HmSweep<T> {
    fn default() -> Self {
        let s = T::lit(0.05);
        Self {
            prefix_step: s,
            input_step: s,
            sched_step: s,
        }
    }
}

impl<T: Real> HmSweep<T> {
    fn validate(&self) -> Result<()> {
        for (name, s) in [
            ("prefix_step", self.prefix_step),
            ("input_step", self.input_step),
            ("sched_step", self.sched_step),
        ] {
            if !(s > T::zero() && s <= T::lit(0.5)) {
                return Err(Error::invalid(name, format!("step {s} is not in (0, 0.5]")));
            }
        }
        Ok(())
    }

    /// `(ebar, mu)` pairs for one user. Flipping both the prefix bit and the
    /// input bit of a user leaves every bound unchanged, so only `mu <= 1/2`
    /// is visited.
    fn user_pairs(&self) -> Vec<(T, T)> {
        let mus: Vec<T> = unit_grid(self.input_step)
            .into_iter()
            .filter(|&m| m <= T::lit(0.5))
            .collect();
        let mut out = Vec::new();
        for e in unit_grid(self.prefix_step) {
            for &m in &mus {
                out.push((e, m));
            }
        }
        out
    }
}

/// Hull of the randomized-scheduling pentagons over the sweep. Schedules in
/// which nobody ever transmits alone contribute only the origin.
pub fn hm_region<T: Real>(ch: &ModuloChannel<T>, sweep: &HmSweep<T>) -> Result<RateRegion<T>> {
    sweep.validate()?;
    let pairs = sweep.user_pairs();
    let sched: Vec<(T, T, T, T, T)> = {
        let grid = unit_grid(sweep.sched_step);
        let mut out = Vec::new();
        for &p1 in &grid {
            for &p2 in &grid {
                let s = SchedulingProbs {
                    p1: Probability::clamped(p1),
                    p2: Probability::clamped(p2),
                };
                if let Ok((d1, d2)) = s.single_split() {
                    let (s1, s2, s3) = s.state_probs();
                    out.push((s1, s2, s3, d1, d2));
                }
            }
        }
        out
    };

    let combos: Vec<((T, T), (T, T))> = pairs
        .iter()
        .flat_map(|&u1| pairs.iter().map(move |&u2| (u1, u2)))
        .collect();
    let pts: Vec<RatePoint<T>> = combos
        .par_iter()
        .map(|&((e1, m1), (e2, m2))| {
            let prefix = ModuloPrefix {
                ebar1: Probability::clamped(e1),
                ebar2: Probability::clamped(e2),
            };
            let st = ModuloStates::new(ch, &prefix, m1, m2);
            let mut local = Vec::with_capacity(2 * sched.len());
            for &(s1, s2, s3, d1, d2) in &sched {
                push_corners(&mut local, hm_from_states(&st, (s1, s2, s3), (d1, d2)));
            }
            hull_unchecked(local).vertices().to_vec()
        })
        .flatten()
        .collect();
    Ok(hull_unchecked(pts))
}

fn push_corners<T: Real>(out: &mut Vec<RatePoint<T>>, b: RateBounds<T>) {
    let c = b.c.pos();
    let (a, b) = (b.a.pos().min(c), b.b.pos().min(c));
    out.push(RatePoint::new(a, (c - a).min(b)));
    out.push(RatePoint::new((c - b).min(a), b));
}

/// Deterministic time division: only the single-user states carry rate.
pub fn hd_deterministic_bounds<T: Real>(
    ch: &ModuloChannel<T>,
    prefix: &ModuloPrefix<T>,
    mu1: Probability<T>,
    mu2: Probability<T>,
    shares: &DeterministicShares<T>,
) -> RateBounds<T> {
    let st = ModuloStates::new(ch, prefix, mu1.get(), mu2.get());
    deterministic_from_states(&st, shares.ps1.get(), shares.ps2.get())
}

fn deterministic_from_states<T: Real>(st: &ModuloStates<T>, ps1: T, ps2: T) -> RateBounds<T> {
    let (i1, i2) = (st.main1(), st.main2());
    let leak1 = h2(st.mu_e1) - h2(st.eps_e1);
    let leak2 = h2(st.mu_e2) - h2(st.eps_e2);
    RateBounds::new(
        ps1 * i1,
        ps2 * i2,
        ps1 * (i1 - leak1).pos() + ps2 * (i2 - leak2).pos(),
    )
}

/// Hull of the deterministic-scheduling pentagons over the same kind of
/// grid as [`hm_region`], with the time share swept at `sched_step`.
pub fn hd_deterministic_region<T: Real>(
    ch: &ModuloChannel<T>,
    sweep: &HmSweep<T>,
) -> Result<RateRegion<T>> {
    sweep.validate()?;
    let pairs = sweep.user_pairs();
    let shares = unit_grid(sweep.sched_step);
    let mut pts = Vec::new();
    for &(e1, m1) in &pairs {
        for &(e2, m2) in &pairs {
            let prefix = ModuloPrefix {
                ebar1: Probability::clamped(e1),
                ebar2: Probability::clamped(e2),
            };
            let st = ModuloStates::new(ch, &prefix, m1, m2);
            for &ps1 in &shares {
                push_corners(
                    &mut pts,
                    deterministic_from_states(&st, ps1, T::one() - ps1),
                );
            }
        }
        pts = hull_unchecked(pts).vertices().to_vec();
    }
    Ok(hull_unchecked(pts))
}

/// Power split, schedule and the common Eve-referred power `rho_r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfDuplexGaussianParams<T> {
    pub split: PowerSplit<T>,
    pub sched: SchedulingProbs<T>,
    pub rho_r: T,
}

impl<T: Real> HalfDuplexGaussianParams<T> {
    /// Checks the equalization `(rho_ic + rho_in) g_ei = rho_r` and the
    /// average-power limits `P_i (rho_ic + rho_in) <= rho_i`.
    pub fn validate(&self, ch: &GaussianChannel<T>) -> Result<()> {
        ch.validate()?;
        if !(self.rho_r >= T::zero() && self.rho_r.is_finite()) {
            return Err(Error::Domain {
                name: "rho_r",
                value: self.rho_r.as_f64(),
                expected: "finite and >= 0",
            });
        }
        let sp = &self.split;
        let tol = T::lit(1e-9) * self.rho_r.max(T::one());
        let users = [
            (1, sp.rho1c + sp.rho1n, ch.ge1, self.sched.p1.get(), ch.rho1),
            (2, sp.rho2c + sp.rho2n, ch.ge2, self.sched.p2.get(), ch.rho2),
        ];
        for (i, total, ge, p, rho) in users {
            if (total * ge - self.rho_r).abs() > tol {
                return Err(Error::ConstraintViolation(format!(
                    "user {i}: (rho{i}c + rho{i}n) ge{i} = {} differs from rho_r = {}",
                    total * ge,
                    self.rho_r
                )));
            }
            if p * total > rho + T::lit(1e-9) * rho.max(T::one()) {
                return Err(Error::ConstraintViolation(format!(
                    "user {i}: average power P{i} (rho{i}c + rho{i}n) = {} exceeds rho{i} = {rho}",
                    p * total
                )));
            }
        }
        Ok(())
    }
}

/// Memo for expected mixture entropies keyed on
/// `(d1, noise variance 1, noise variance 2, signal variance sum)`; the
/// expectation depends on the two signal variances only through their sum.
#[derive(Debug, Default)]
pub struct MixtureCache<T> {
    map: RwLock<HashMap<[u64; 4], T>>,
}

impl<T: Real> MixtureCache<T> {
    pub fn new() -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn expected_entropy(&self, spec: &MixtureSpec<T>, signal_var1: T, signal_var2: T) -> Result<T> {
        let key = [
            spec.weight1.get().as_f64().to_bits(),
            spec.var1.as_f64().to_bits(),
            spec.var2.as_f64().to_bits(),
            (signal_var1 + signal_var2).as_f64().to_bits(),
        ];
        if let Some(v) = self.map.read().expect("cache lock").get(&key) {
            return Ok(*v);
        }
        let v = expected_mixture_entropy(spec, signal_var1, signal_var2)?;
        self.map.write().expect("cache lock").insert(key, v);
        Ok(v)
    }
}

/// `h(Z) - h(Z | C1, C2)`: what Eve learns per symbol about both codewords,
/// given that she recognizes collisions and silence but not which user
/// transmits alone.
pub fn hg_eve_information<T: Real>(
    ch: &GaussianChannel<T>,
    params: &HalfDuplexGaussianParams<T>,
) -> Result<T> {
    params.validate(ch)?;
    eve_information(ch, params, &MixtureCache::new())
}

fn eve_information<T: Real>(
    ch: &GaussianChannel<T>,
    params: &HalfDuplexGaussianParams<T>,
    cache: &MixtureCache<T>,
) -> Result<T> {
    let one = T::one();
    let sp = &params.split;
    let (s1, s2, s3) = params.sched.state_probs();
    let (sig1, sig2) = (sp.rho1c * ch.ge1, sp.rho2c * ch.ge2);
    let (jam1, jam2) = (sp.rho1n * ch.ge1, sp.rho2n * ch.ge2);
    let collision = s3 * gamma((sig1 + sig2) / (one + jam1 + jam2));
    let single = s1 + s2;
    if single == T::zero() {
        return Ok(collision);
    }
    let d1 = (s1 / single).min(one);
    let spec = MixtureSpec {
        weight1: Probability::clamped(d1),
        var1: one + jam1,
        var2: one + jam2,
    };
    let conditional = cache.expected_entropy(&spec, sig1, sig2)?;
    Ok(collision + single * (gaussian_entropy(one + params.rho_r) - conditional))
}

/// Randomized scheduling over the Gaussian channel with equalized
/// Eve-referred power.
pub fn hg_bounds<T: Real>(
    ch: &GaussianChannel<T>,
    params: &HalfDuplexGaussianParams<T>,
) -> Result<RateBounds<T>> {
    params.validate(ch)?;
    hg_bounds_cached(ch, params, &MixtureCache::new())
}

fn hg_bounds_cached<T: Real>(
    ch: &GaussianChannel<T>,
    params: &HalfDuplexGaussianParams<T>,
    cache: &MixtureCache<T>,
) -> Result<RateBounds<T>> {
    let one = T::one();
    let sp = &params.split;
    let (s1, s2, _) = params.sched.state_probs();
    let a = s1 * gamma(sp.rho1c / (one + sp.rho1n));
    let b = s2 * gamma(sp.rho2c / (one + sp.rho2n));
    Ok(RateBounds::new(
        a,
        b,
        a + b - eve_information(ch, params, cache)?,
    ))
}

/// Sweep for [`hg_region`]. For every schedule on the `sched_step` grid the
/// largest admissible `rho_r` is split into `power_steps` levels, and each
/// user's power into `codeword_steps + 1` codeword fractions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HgSweep<T> {
    pub sched_step: T,
    pub power_steps: usize,
    pub codeword_steps: usize,
}

impl<T: Real> Default for HgSweep<T> {
    fn default() -> Self {
        Self {
            sched_step: T::lit(0.1),
            power_steps: 4,
            codeword_steps: 5,
        }
    }
}

/// Hull over the sweep; requires `ge1, ge2 > 0` so that `rho_r` fixes both
/// users' transmit powers.
pub fn hg_region<T: Real>(ch: &GaussianChannel<T>, sweep: &HgSweep<T>) -> Result<RateRegion<T>> {
    let (region, _) = hg_region_with_cache(ch, sweep)?;
    Ok(region)
}

/// [`hg_region`] that also reports how many distinct quadratures were run.
pub fn hg_region_with_cache<T: Real>(
    ch: &GaussianChannel<T>,
    sweep: &HgSweep<T>,
) -> Result<(RateRegion<T>, usize)> {
    ch.validate()?;
    if !(sweep.sched_step > T::zero() && sweep.sched_step <= T::lit(0.5)) {
        return Err(Error::invalid(
            "sched_step",
            format!("step {} is not in (0, 0.5]", sweep.sched_step),
        ));
    }
    if sweep.power_steps == 0 || sweep.codeword_steps == 0 {
        return Err(Error::invalid(
            "sweep",
            "power_steps and codeword_steps must be positive",
        ));
    }
    if !(ch.ge1 > T::zero() && ch.ge2 > T::zero()) {
        return Err(Error::invalid(
            "ge1/ge2",
            "power equalization needs positive eavesdropper gains",
        ));
    }

    let grid = unit_grid(sweep.sched_step);
    let fractions = unit_linspace::<T>(sweep.codeword_steps);
    let mut params = Vec::new();
    for &p1 in &grid {
        for &p2 in &grid {
            let sched = SchedulingProbs {
                p1: Probability::clamped(p1),
                p2: Probability::clamped(p2),
            };
            if sched.single_weight() == T::zero() {
                continue;
            }
            // largest rho_r meeting both average-power limits
            let mut rho_r_max = T::infinity();
            if p1 > T::zero() {
                rho_r_max = rho_r_max.min(ch.rho1 * ch.ge1 / p1);
            }
            if p2 > T::zero() {
                rho_r_max = rho_r_max.min(ch.rho2 * ch.ge2 / p2);
            }
            for k in 1..=sweep.power_steps {
                let rho_r = rho_r_max * T::lit(k as f64) / T::lit(sweep.power_steps as f64);
                let (t1, t2) = (rho_r / ch.ge1, rho_r / ch.ge2);
                for &f1 in &fractions {
                    for &f2 in &fractions {
                        let split = PowerSplit {
                            rho1c: f1 * t1,
                            rho1n: (T::one() - f1) * t1,
                            rho2c: f2 * t2,
                            rho2n: (T::one() - f2) * t2,
                        };
                        params.push(HalfDuplexGaussianParams {
                            split,
                            sched,
                            rho_r,
                        });
                    }
                }
            }
        }
    }

    let cache = MixtureCache::new();
    let bounds: Vec<RateBounds<T>> = params
        .par_iter()
        .map(|p| hg_bounds_cached(ch, p, &cache))
        .collect::<Result<_>>()?;
    let mut pts = Vec::with_capacity(2 * bounds.len());
    for b in bounds {
        push_corners(&mut pts, b);
    }
    Ok((hull_unchecked(pts), cache.len()))
}
