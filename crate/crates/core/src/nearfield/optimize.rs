//! Max-min secrecy optimization: best protocol parameters against the worst
//! Eve angle and classifier.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::Probability;

use super::classifier::{ClassifierVariant, Mode};
use super::geometry::{place_eve, theta_grid, GeometryConfig};
use super::policy::PowerPolicy;
use super::rates::{rate_tdm, rate_twoway, SecrecyRateReport};
use super::stats::{simulate, sub_seed, ClassificationTally};

/// Number of Eve angles swept by default.
pub const DEFAULT_THETAS: usize = 64;

fn unit_steps(step: f64, include_ends: bool) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    let range = if include_ends { 0..=n } else { 1..=n - 1 };
    range.map(|i| i as f64 / n as f64).collect()
}

/// Exclusion radius putting the closest Eve position at distance ratio 0.1.
fn default_geometry() -> GeometryConfig {
    let r_e = GeometryConfig::radius_for_min_ratio(1.0, 0.1).expect("valid ratio");
    GeometryConfig::new(1.0, r_e, 0.0).expect("valid default geometry")
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoWayScenario {
    /// Placement; `theta` is ignored in favour of `thetas`.
    pub geometry: GeometryConfig,
    pub thetas: Vec<f64>,
    pub policies: Vec<PowerPolicy>,
    pub pt_grid: Vec<f64>,
    pub variants: Vec<ClassifierVariant>,
    /// Monte Carlo trials per true scenario.
    pub trials: u64,
    pub seed: u64,
    pub noiseless_main: bool,
}

impl Default for TwoWayScenario {
    fn default() -> Self {
        Self {
            geometry: default_geometry(),
            thetas: theta_grid(DEFAULT_THETAS),
            policies: vec![PowerPolicy::uniform(1.0, 10.0).expect("valid policy")],
            pt_grid: unit_steps(1e-3, false),
            variants: ClassifierVariant::TWO_WAY_DEFAULT.to_vec(),
            trials: 100_000,
            seed: 1,
            noiseless_main: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TdmScenario {
    pub geometry: GeometryConfig,
    pub thetas: Vec<f64>,
    /// `(data, feedback)` power laws.
    pub policies: Vec<(PowerPolicy, PowerPolicy)>,
    pub beta_grid: Vec<f64>,
    pub variants: Vec<ClassifierVariant>,
    pub trials: u64,
    pub seed: u64,
    pub noiseless_main: bool,
}

impl Default for TdmScenario {
    fn default() -> Self {
        let p = PowerPolicy::uniform(1.0, 10.0).expect("valid policy");
        Self {
            geometry: default_geometry(),
            thetas: theta_grid(DEFAULT_THETAS),
            policies: vec![(p.clone(), p)],
            beta_grid: unit_steps(1e-3, true),
            variants: ClassifierVariant::TDM_DEFAULT.to_vec(),
            trials: 100_000,
            seed: 1,
            noiseless_main: true,
        }
    }
}

fn check_common(
    geometry: &GeometryConfig,
    thetas: &[f64],
    n_policies: usize,
    grid: &[f64],
    variants: &[ClassifierVariant],
    trials: u64,
    mode: Mode,
) -> Result<()> {
    geometry.validate()?;
    if thetas.is_empty() {
        return Err(Error::EmptyInput("theta grid"));
    }
    for &t in thetas {
        geometry.with_theta(t).validate()?;
    }
    if n_policies == 0 {
        return Err(Error::EmptyInput("policy grid"));
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput("protocol parameter grid"));
    }
    for &g in grid {
        Probability::new(g)?;
    }
    if variants.is_empty() {
        return Err(Error::EmptyInput("classifier variants"));
    }
    if let Some(v) = variants.iter().find(|v| !v.supports(mode)) {
        return Err(Error::invalid(
            "classifier",
            format!("variant {v} is not defined for {mode:?}"),
        ));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    Ok(())
}

/// Best rate at one Eve angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaPoint {
    pub theta: f64,
    pub d_ae: f64,
    pub d_be: f64,
    /// `min(d_ae, d_be) / max(d_ae, d_be)`.
    pub ratio: f64,
    pub best: SecrecyRateReport,
}

/// Simulation counts behind one `(theta, policy, direction)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsRecord {
    pub theta: f64,
    pub policy_index: usize,
    /// TDM only: Bob transmits and Alice jams.
    pub reverse: bool,
    pub tally: ClassificationTally,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizedRates {
    /// Maximum over protocol parameters of the minimum over angles and
    /// classifiers.
    pub overall: SecrecyRateReport,
    /// Per-angle maximum of the minimum over classifiers.
    pub curve: Vec<ThetaPoint>,
    pub stats: Vec<StatsRecord>,
}

/// Runs the max-min given `eval(theta_index, policy_index, param)`, which
/// returns the worst report over classifiers (and directions).
fn max_min<F>(
    geometry: &GeometryConfig,
    thetas: &[f64],
    n_policies: usize,
    grid: &[f64],
    eval: F,
) -> (SecrecyRateReport, Vec<ThetaPoint>)
where
    F: Fn(usize, usize, f64) -> SecrecyRateReport,
{
    let mut overall: Option<SecrecyRateReport> = None;
    let mut per_theta: Vec<Option<SecrecyRateReport>> = vec![None; thetas.len()];
    for pi in 0..n_policies {
        for &param in grid {
            let mut worst: Option<SecrecyRateReport> = None;
            for (ti, &theta) in thetas.iter().enumerate() {
                let mut r = eval(ti, pi, param);
                r.policy_index = pi;
                r.worst_theta = Some(theta);
                if per_theta[ti].is_none_or(|b| r.r_s > b.r_s) {
                    per_theta[ti] = Some(r);
                }
                if worst.is_none_or(|w| r.r_s < w.r_s) {
                    worst = Some(r);
                }
            }
            let worst = worst.expect("non-empty theta grid");
            if overall.is_none_or(|b| worst.r_s > b.r_s) {
                overall = Some(worst);
            }
        }
    }
    let curve = thetas
        .iter()
        .zip(per_theta)
        .map(|(&theta, best)| {
            let g = geometry.with_theta(theta);
            let (d_ae, d_be) = place_eve(&g);
            ThetaPoint {
                theta,
                d_ae,
                d_be,
                ratio: d_ae.min(d_be) / d_ae.max(d_be),
                best: best.expect("non-empty grids"),
            }
        })
        .collect();
    (overall.expect("non-empty grids"), curve)
}

fn worse(a: Option<SecrecyRateReport>, b: SecrecyRateReport) -> Option<SecrecyRateReport> {
    match a {
        Some(a) if a.r_s <= b.r_s => Some(a),
        _ => Some(b),
    }
}

pub fn optimize_twoway(sc: &TwoWayScenario) -> Result<OptimizedRates> {
    check_common(
        &sc.geometry,
        &sc.thetas,
        sc.policies.len(),
        &sc.pt_grid,
        &sc.variants,
        sc.trials,
        Mode::TwoWay,
    )?;
    let jobs: Vec<(usize, usize)> = (0..sc.thetas.len())
        .flat_map(|ti| (0..sc.policies.len()).map(move |pi| (ti, pi)))
        .collect();
    // the same seed for every angle keeps the curve free of independent noise
    let tallies: Vec<ClassificationTally> = jobs
        .par_iter()
        .map(|&(ti, pi)| {
            let geo = sc.geometry.with_theta(sc.thetas[ti]);
            let p = &sc.policies[pi];
            simulate(
                &geo,
                p,
                p,
                Mode::TwoWay,
                sc.trials,
                sub_seed(sc.seed, &[pi as u64]),
            )
        })
        .collect::<Result<_>>()?;
    let n_pol = sc.policies.len();
    let stats: Vec<Vec<_>> = tallies
        .iter()
        .map(|t| {
            sc.variants
                .iter()
                .map(|&v| t.twoway_stats(v))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let (overall, curve) = max_min(&sc.geometry, &sc.thetas, n_pol, &sc.pt_grid, |ti, pi, t| {
        let geo = sc.geometry.with_theta(sc.thetas[ti]);
        let mut worst = None;
        for (vi, s) in stats[ti * n_pol + pi].iter().enumerate() {
            let mut r = rate_twoway(
                s,
                Probability::clamped(t),
                &geo,
                &sc.policies[pi],
                sc.noiseless_main,
            );
            r.worst_variant = Some(sc.variants[vi]);
            worst = worse(worst, r);
        }
        worst.expect("non-empty variants")
    });

    let stats = jobs
        .into_iter()
        .zip(tallies)
        .map(|((ti, pi), tally)| StatsRecord {
            theta: sc.thetas[ti],
            policy_index: pi,
            reverse: false,
            tally,
        })
        .collect();
    Ok(OptimizedRates {
        overall,
        curve,
        stats,
    })
}

/// Both transmission directions are evaluated; Bob-to-Alice is simulated as
/// Alice-to-Bob with Eve reflected to `pi - theta`.
pub fn optimize_tdm(sc: &TdmScenario) -> Result<OptimizedRates> {
    check_common(
        &sc.geometry,
        &sc.thetas,
        sc.policies.len(),
        &sc.beta_grid,
        &sc.variants,
        sc.trials,
        Mode::Tdm,
    )?;
    let n_pol = sc.policies.len();
    let jobs: Vec<(usize, usize, bool)> = (0..sc.thetas.len())
        .flat_map(|ti| (0..n_pol).flat_map(move |pi| [(ti, pi, false), (ti, pi, true)]))
        .collect();
    let tallies: Vec<ClassificationTally> = jobs
        .par_iter()
        .map(|&(ti, pi, rev)| {
            let theta = if rev {
                PI - sc.thetas[ti]
            } else {
                sc.thetas[ti]
            };
            let geo = sc.geometry.with_theta(theta);
            let (data, feedback) = &sc.policies[pi];
            simulate(
                &geo,
                data,
                feedback,
                Mode::Tdm,
                sc.trials,
                sub_seed(sc.seed, &[pi as u64, rev as u64]),
            )
        })
        .collect::<Result<_>>()?;
    let stats: Vec<Vec<_>> = tallies
        .iter()
        .map(|t| {
            sc.variants
                .iter()
                .map(|&v| t.tdm_stats(v))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let (overall, curve) = max_min(
        &sc.geometry,
        &sc.thetas,
        n_pol,
        &sc.beta_grid,
        |ti, pi, beta| {
            let geo = sc.geometry.with_theta(sc.thetas[ti]);
            let mut worst = None;
            for rev in [false, true] {
                let cell = (ti * n_pol + pi) * 2 + rev as usize;
                for (vi, s) in stats[cell].iter().enumerate() {
                    let mut r = rate_tdm(
                        s,
                        Probability::clamped(beta),
                        &geo,
                        &sc.policies[pi].0,
                        sc.noiseless_main,
                    )
                    .scaled(0.5);
                    r.worst_variant = Some(sc.variants[vi]);
                    worst = worse(worst, r);
                }
            }
            worst.expect("non-empty variants")
        },
    );

    let stats = jobs
        .into_iter()
        .zip(tallies)
        .map(|((ti, pi, reverse), tally)| StatsRecord {
            theta: sc.thetas[ti],
            policy_index: pi,
            reverse,
            tally,
        })
        .collect();
    Ok(OptimizedRates {
        overall,
        curve,
        stats,
    })
}
