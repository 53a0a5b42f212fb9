//! Secrecy rates of the TDM and two-way randomized protocols.

use crate::error::{Error, Result};
use crate::info::{gaussian_cdf, h2, Probability};

use super::classifier::ClassifierVariant;
use super::geometry::{Event, GeometryConfig};
use super::policy::PowerPolicy;
use super::stats::{TdmClassifierStats, TwoWayClassifierStats};

/// Rate summary. `r_s = scale * [r_m - max(r_ea, r_eb)]^+`, with
/// `scale = 0.5` for TDM (the two directions share time) and 1 otherwise.
/// TDM reports its single eavesdropper rate in both `r_ea` and `r_eb`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecrecyRateReport {
    pub r_m: f64,
    pub r_ea: f64,
    pub r_eb: f64,
    pub r_s: f64,
    pub scale: f64,
    /// Jamming probability (TDM) or transmit probability (two-way).
    pub param: f64,
    pub policy_index: usize,
    pub worst_theta: Option<f64>,
    pub worst_variant: Option<ClassifierVariant>,
}

impl SecrecyRateReport {
    fn new(r_m: f64, r_ea: f64, r_eb: f64, param: f64) -> Self {
        Self {
            r_m,
            r_ea,
            r_eb,
            r_s: (r_m - r_ea.max(r_eb)).max(0.0),
            scale: 1.0,
            param,
            policy_index: 0,
            worst_theta: None,
            worst_variant: None,
        }
    }

    pub(crate) fn scaled(mut self, scale: f64) -> Self {
        self.r_s *= scale / self.scale;
        self.scale = scale;
        self
    }
}

/// `1 - H(1 - phi(sqrt(rho_min / d_ab^alpha)))`, the per-symbol main-channel
/// rate at the weakest transmit power, or 1 when coding is assumed to clean
/// up the main channel.
pub fn main_channel_rate(geo: &GeometryConfig, policy: &PowerPolicy, noiseless_main: bool) -> f64 {
    main_rate(policy.rho_min, geo.d_ab, geo.alpha_pl, noiseless_main)
}

fn main_rate(rho_min: f64, d_ab: f64, alpha_pl: f64, noiseless_main: bool) -> f64 {
    if noiseless_main {
        return 1.0;
    }
    let snr = rho_min / d_ab.powf(alpha_pl);
    1.0 - h2(1.0 - gaussian_cdf(snr.sqrt()).get())
}

fn wiretap_leak(kept: f64, errors: f64) -> f64 {
    if kept > 0.0 {
        kept * (1.0 - h2(errors / kept))
    } else {
        0.0
    }
}

/// One direction of the TDM protocol at jamming probability `beta`, before
/// the time-division factor.
pub fn rate_tdm(
    stats: &TdmClassifierStats,
    beta: Probability<f64>,
    geo: &GeometryConfig,
    data: &PowerPolicy,
    noiseless_main: bool,
) -> SecrecyRateReport {
    let b = beta.get();
    let (p_m, p_f, p_e) = (stats.p_m.get(), stats.p_f.get(), stats.p_e_given_m.get());
    let r_m = (1.0 - b) * main_channel_rate(geo, data, noiseless_main);
    let kept = 1.0 - b * (1.0 - p_m) - (1.0 - b) * p_f;
    let r_e = wiretap_leak(kept, b * p_m * p_e);
    SecrecyRateReport::new(r_m, r_e, r_e, b)
}

/// Both directions of the two-way protocol at transmit probability `p_t`.
pub fn rate_twoway(
    stats: &TwoWayClassifierStats,
    p_t: Probability<f64>,
    geo: &GeometryConfig,
    policy: &PowerPolicy,
    noiseless_main: bool,
) -> SecrecyRateReport {
    use Event::{AOnly as A, BOnly as B, Both as AB};
    let t = p_t.get();
    let (both, single) = (t * t, t * (1.0 - t));
    let p = |x, y| stats.get(x, y);
    let d_a = both * p(AB, A) + single * p(B, A) + single * (1.0 - p(A, B) - p(A, AB));
    let d_b = both * p(AB, B) + single * p(A, B) + single * (1.0 - p(B, A) - p(B, AB));
    let e_a = both * p(AB, A) * stats.p_e_ab_to_a.get() + 0.5 * single * p(B, A);
    let e_b = both * p(AB, B) * stats.p_e_ab_to_b.get() + 0.5 * single * p(A, B);
    let r_m = single * main_channel_rate(geo, policy, noiseless_main);
    SecrecyRateReport::new(r_m, wiretap_leak(d_a, e_a), wiretap_leak(d_b, e_b), t)
}

fn asymptotic_with_confusion(
    pt_grid: &[f64],
    main: f64,
    confusion_entropy: f64,
) -> Result<SecrecyRateReport> {
    let mut best: Option<SecrecyRateReport> = None;
    for &t in pt_grid {
        Probability::new(t)?;
        let r_e = (1.0 - (1.0 - t) * (1.0 - t)) * (1.0 - confusion_entropy);
        let r = SecrecyRateReport::new(t * (1.0 - t) * main, r_e, r_e, t);
        if best.is_none_or(|b| r.r_s > b.r_s) {
            best = Some(r);
        }
    }
    best.ok_or(Error::EmptyInput("p_t grid"))
}

/// Two-way rate when Eve is so far away that she cannot tell Alice from Bob
/// and attributes every symbol to one of them.
pub fn asymptotic_rmax(
    pt_grid: &[f64],
    rho_min: f64,
    d_ab: f64,
    alpha_pl: f64,
    noiseless_main: bool,
) -> Result<SecrecyRateReport> {
    for (name, v) in [("rho_min", rho_min), ("d_ab", d_ab), ("alpha_pl", alpha_pl)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain {
                name,
                value: v,
                expected: "finite and > 0",
            });
        }
    }
    let main = main_rate(rho_min, d_ab, alpha_pl, noiseless_main);
    asymptotic_with_confusion(pt_grid, main, h2(0.25))
}
