//! Node placement, path loss and the noiseless power seen by Eve.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Alice at `(-d_ab/2, 0)`, Bob at `(d_ab/2, 0)`, Eve on the circle of
/// radius `r_e` around the origin at angle `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryConfig {
    pub d_ab: f64,
    pub r_e: f64,
    pub theta: f64,
    pub alpha_pl: f64,
    /// Wave number in radians per meter. Zero drops the carrier phase, so
    /// concurrent arrivals add coherently whatever Eve's position.
    pub k_wave: f64,
    pub g_a: f64,
    pub g_b: f64,
    pub g_e: f64,
}

/// Wave number at 2.4 GHz (wavelength 0.125 m). With metre-scale distances
/// the collision power then oscillates quickly with Eve's angle.
pub const K_WAVE_2G4: f64 = 2.0 * std::f64::consts::PI / 0.125;

impl GeometryConfig {
    /// Free-space path loss, unit gains, no carrier phase.
    pub fn new(d_ab: f64, r_e: f64, theta: f64) -> Result<Self> {
        let geo = Self {
            d_ab,
            r_e,
            theta,
            alpha_pl: 2.0,
            k_wave: 0.0,
            g_a: 1.0,
            g_b: 1.0,
            g_e: 1.0,
        };
        geo.validate()?;
        Ok(geo)
    }

    /// Exclusion radius at which the distance ratio reaches `ratio` when Eve
    /// sits on the Alice-Bob axis (`theta = 0`).
    pub fn radius_for_min_ratio(d_ab: f64, ratio: f64) -> Result<f64> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Domain {
                name: "ratio",
                value: ratio,
                expected: "(0, 1)",
            });
        }
        Ok(0.5 * d_ab * (1.0 + ratio) / (1.0 - ratio))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("d_ab", self.d_ab),
            ("r_e", self.r_e),
            ("alpha_pl", self.alpha_pl),
            ("g_a", self.g_a),
            ("g_b", self.g_b),
            ("g_e", self.g_e),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain {
                    name,
                    value: v,
                    expected: "finite and > 0",
                });
            }
        }
        if !(self.k_wave >= 0.0 && self.k_wave.is_finite()) {
            return Err(Error::Domain {
                name: "k_wave",
                value: self.k_wave,
                expected: "finite and >= 0",
            });
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(Error::Domain {
                name: "theta",
                value: self.theta,
                expected: "[0, pi]",
            });
        }
        let (d_ae, d_be) = place_eve(self);
        if !(d_ae > 0.0 && d_be > 0.0) {
            return Err(Error::invalid(
                "r_e",
                "Eve coincides with a legitimate node",
            ));
        }
        Ok(())
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// `min(d_ae, d_be) / max(d_ae, d_be)`.
    pub fn distance_ratio(&self) -> f64 {
        let (a, b) = place_eve(self);
        a.min(b) / a.max(b)
    }
}

/// `(d_ae, d_be)`.
pub fn place_eve(geo: &GeometryConfig) -> (f64, f64) {
    let (x, y) = (geo.r_e * geo.theta.cos(), geo.r_e * geo.theta.sin());
    let half = 0.5 * geo.d_ab;
    ((x + half).hypot(y), (x - half).hypot(y))
}

/// `n` angles evenly covering `[0, pi/2]`; by symmetry this is every
/// distinct Eve position on the circle.
pub fn theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![FRAC_PI_2],
        _ => (0..n)
            .map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Which legitimate transmitters are active in a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    AOnly,
    BOnly,
    Both,
}

impl Event {
    pub const ALL: [Event; 3] = [Event::AOnly, Event::BOnly, Event::Both];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Event::AOnly => "A",
            Event::BOnly => "B",
            Event::Both => "AB",
        }
    }
}

/// Amplitudes and phase offset of the two paths into Eve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct EveLinks {
    /// `d_ae^-alpha` and `d_be^-alpha`.
    pub loss_a: f64,
    pub loss_b: f64,
    /// `cos(k (d_ae - d_be))`.
    pub cos_phase: f64,
}

impl EveLinks {
    pub fn new(geo: &GeometryConfig) -> Self {
        let (d_ae, d_be) = place_eve(geo);
        Self {
            loss_a: d_ae.powf(-geo.alpha_pl),
            loss_b: d_be.powf(-geo.alpha_pl),
            cos_phase: (geo.k_wave * (d_ae - d_be)).cos(),
        }
    }

    /// `|a s_a e^{-jk d_ae} + b s_b e^{-jk d_be}|^2` with inactive terms dropped.
    #[inline]
    pub fn power(&self, event: Event, rho_a: f64, rho_b: f64, same_sign: bool) -> f64 {
        let pa = rho_a * self.loss_a;
        let pb = rho_b * self.loss_b;
        match event {
            Event::AOnly => pa,
            Event::BOnly => pb,
            Event::Both => {
                let cross = 2.0 * (pa * pb).sqrt() * self.cos_phase;
                let p = pa + pb + if same_sign { cross } else { -cross };
                p.max(0.0)
            }
        }
    }
}

/// Noiseless received power at Eve. Symbols are `+1` / `-1`; the receive
/// gain is dropped since it scales every scenario alike.
pub fn eve_received_power(
    event: Event,
    powers: (f64, f64),
    symbols: (i8, i8),
    geo: &GeometryConfig,
) -> Result<f64> {
    for (name, s) in [("s_a", symbols.0), ("s_b", symbols.1)] {
        if s != 1 && s != -1 {
            return Err(Error::Domain {
                name,
                value: s as f64,
                expected: "+1 or -1",
            });
        }
    }
    for (name, r) in [("rho_a", powers.0), ("rho_b", powers.1)] {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Domain {
                name,
                value: r,
                expected: "finite and >= 0",
            });
        }
    }
    geo.validate()?;
    Ok(EveLinks::new(geo).power(event, powers.0, powers.1, symbols.0 == symbols.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placement_examples() {
        let geo = GeometryConfig::new(1.0, 3.0, FRAC_PI_2).unwrap();
        let (a, b) = place_eve(&geo);
        assert!((a - (9.25f64).sqrt()).abs() < 1e-12 && (a - b).abs() < 1e-12);

        let (a, b) = place_eve(&geo.with_theta(0.0));
        assert!((a - 3.5).abs() < 1e-12 && (b - 2.5).abs() < 1e-12);

        let far = GeometryConfig::new(1.0, 1e7, 0.3).unwrap();
        assert!((far.distance_ratio() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ratio_radius_round_trip() {
        let r = GeometryConfig::radius_for_min_ratio(1.0, 0.1).unwrap();
        let geo = GeometryConfig::new(1.0, r, 0.0).unwrap();
        assert!((geo.distance_ratio() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn received_power_examples() {
        let geo = GeometryConfig::new(2.0, 3f64.sqrt(), FRAC_PI_2).unwrap();
        assert!((place_eve(&geo).0 - 2.0).abs() < 1e-12);
        let p = eve_received_power(Event::AOnly, (4.0, 0.0), (1, 1), &geo).unwrap();
        assert!((p - 1.0).abs() < 1e-12);

        // Eve on the bisector, zero phase difference
        let geo = GeometryConfig::new(2f64.sqrt(), 1.0 / 2f64.sqrt(), FRAC_PI_2).unwrap();
        let same = eve_received_power(Event::Both, (1.0, 1.0), (1, 1), &geo).unwrap();
        let opposite = eve_received_power(Event::Both, (1.0, 1.0), (1, -1), &geo).unwrap();
        assert!((same - 4.0).abs() < 1e-12);
        assert!(opposite.abs() < 1e-12);

        assert!(eve_received_power(Event::Both, (1.0, 1.0), (0, 1), &geo).is_err());
    }

    #[test]
    fn half_wavelength_offset_swaps_extremes() {
        let links = EveLinks {
            loss_a: 1.0,
            loss_b: 1.0,
            cos_phase: -1.0,
        };
        assert!((links.power(Event::Both, 1.0, 1.0, false) - 4.0).abs() < 1e-12);
        assert!(links.power(Event::Both, 1.0, 1.0, true).abs() < 1e-12);
    }
}
