//! Eve's energy classifier.
//!
//! Eve is noiseless, so each transmission scenario produces received powers
//! in a known set. The classifier collects the scenarios consistent with the
//! observed power and picks one of the admissible classes uniformly at
//! random among those; when no admissible class is consistent it guesses
//! uniformly among all admissible classes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::geometry::{EveLinks, Event, GeometryConfig};
use super::policy::{PowerLaw, PowerPolicy};

/// Relative slack when testing whether a power lies in a support set.
const SUPPORT_RTOL: f64 = 1e-9;

/// Union of closed intervals of received power (isolated levels are
/// zero-width intervals).
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSupport {
    intervals: Vec<(f64, f64)>,
}

impl PowerSupport {
    fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        Self { intervals }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, p: f64) -> bool {
        // first interval whose upper end is not below p
        let i = self
            .intervals
            .partition_point(|&(_, hi)| hi * (1.0 + SUPPORT_RTOL) < p);
        match self.intervals.get(i) {
            Some(&(lo, _)) => p >= lo * (1.0 - SUPPORT_RTOL) - f64::MIN_POSITIVE,
            None => false,
        }
    }
}

/// Ranges of transmit SNR a policy can produce.
fn snr_ranges(policy: &PowerPolicy) -> Vec<(f64, f64)> {
    match &policy.law {
        PowerLaw::ContinuousUniform => vec![(policy.rho_min, policy.rho_max)],
        PowerLaw::DiscreteUniform(levels) => levels.iter().map(|&l| (l, l)).collect(),
    }
}

/// Range of `x^2 + y^2 + 2 kappa x y` over the box `[x0,x1] x [y0,y1]` of
/// non-negative amplitudes, `|kappa| <= 1`.
fn cross_range(x: (f64, f64), y: (f64, f64), kappa: f64) -> (f64, f64) {
    let q = |a: f64, b: f64| (a * a + b * b + 2.0 * kappa * a * b).max(0.0);
    let corners = [q(x.0, y.0), q(x.0, y.1), q(x.1, y.0), q(x.1, y.1)];
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if kappa >= 0.0 {
        return (q(x.0, y.0), hi);
    }
    // convex in (x, y); the minimum sits on an edge
    let k = -kappa;
    let clamp = |v: f64, r: (f64, f64)| v.max(r.0).min(r.1);
    let lo = [
        q(x.0, clamp(k * x.0, y)),
        q(x.1, clamp(k * x.1, y)),
        q(clamp(k * y.0, x), y.0),
        q(clamp(k * y.1, x), y.1),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Which classes a classifier may output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassifierVariant {
    /// Never erases: every symbol is attributed to a single transmitter. In
    /// the TDM protocol this means jamming is never detected.
    MlBinary,
    /// Also recognizes concurrent transmissions (jammed symbols in TDM).
    MlFull,
    /// Attributes every symbol to Alice.
    AttributeAlice,
    /// Attributes every symbol to Bob.
    AttributeBob,
    /// Always right; used to check that perfect classification kills secrecy.
    Oracle,
}

impl ClassifierVariant {
    pub const ALL: [ClassifierVariant; 5] = [
        ClassifierVariant::MlBinary,
        ClassifierVariant::MlFull,
        ClassifierVariant::AttributeAlice,
        ClassifierVariant::AttributeBob,
        ClassifierVariant::Oracle,
    ];

    /// Variants Eve is assumed to choose from in the two-way protocol.
    pub const TWO_WAY_DEFAULT: [ClassifierVariant; 4] = [
        ClassifierVariant::MlBinary,
        ClassifierVariant::MlFull,
        ClassifierVariant::AttributeAlice,
        ClassifierVariant::AttributeBob,
    ];

    /// Variants Eve is assumed to choose from in the TDM protocol.
    pub const TDM_DEFAULT: [ClassifierVariant; 2] =
        [ClassifierVariant::MlBinary, ClassifierVariant::MlFull];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassifierVariant::MlBinary => "ml-binary",
            ClassifierVariant::MlFull => "ml-full",
            ClassifierVariant::AttributeAlice => "attribute-alice",
            ClassifierVariant::AttributeBob => "attribute-bob",
            ClassifierVariant::Oracle => "oracle",
        }
    }

    pub fn supports(self, mode: Mode) -> bool {
        match mode {
            Mode::TwoWay => true,
            Mode::Tdm => matches!(
                self,
                ClassifierVariant::MlBinary | ClassifierVariant::MlFull | ClassifierVariant::Oracle
            ),
        }
    }
}

impl fmt::Display for ClassifierVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifierVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid("classifier", format!("unknown variant `{s}`")))
    }
}

/// Protocol the classifier is deployed against. In TDM, Alice sends data
/// (class `AOnly` is a clean symbol) and Bob may jam (`Both`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Tdm,
    TwoWay,
}

/// Received-power supports of the three scenarios for one Eve position.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyClassifier {
    pub mode: Mode,
    supports: [PowerSupport; 3],
}

/// Builds the exact scenario supports for the given placement and power
/// laws.
pub fn train_classifier(
    geo: &GeometryConfig,
    alice: &PowerPolicy,
    bob: &PowerPolicy,
    mode: Mode,
) -> Result<EnergyClassifier> {
    geo.validate()?;
    alice.validate()?;
    bob.validate()?;
    Ok(EnergyClassifier::from_links(
        &EveLinks::new(geo),
        alice,
        bob,
        mode,
    ))
}

impl EnergyClassifier {
    pub(crate) fn from_links(
        links: &EveLinks,
        alice: &PowerPolicy,
        bob: &PowerPolicy,
        mode: Mode,
    ) -> Self {
        let ra = snr_ranges(alice);
        let rb = snr_ranges(bob);
        let scale = |r: &[(f64, f64)], loss: f64| {
            r.iter().map(|&(lo, hi)| (lo * loss, hi * loss)).collect()
        };
        let mut both = Vec::with_capacity(2 * ra.len() * rb.len());
        for &(a0, a1) in &ra {
            let x = ((a0 * links.loss_a).sqrt(), (a1 * links.loss_a).sqrt());
            for &(b0, b1) in &rb {
                let y = ((b0 * links.loss_b).sqrt(), (b1 * links.loss_b).sqrt());
                both.push(cross_range(x, y, links.cos_phase));
                both.push(cross_range(x, y, -links.cos_phase));
            }
        }
        Self {
            mode,
            supports: [
                PowerSupport::from_intervals(scale(&ra, links.loss_a)),
                PowerSupport::from_intervals(scale(&rb, links.loss_b)),
                PowerSupport::from_intervals(both),
            ],
        }
    }

    pub fn support(&self, event: Event) -> &PowerSupport {
        &self.supports[event.index()]
    }

    fn admissible(&self, variant: ClassifierVariant) -> &'static [Event] {
        use ClassifierVariant::*;
        match (self.mode, variant) {
            (Mode::TwoWay, MlBinary) => &[Event::AOnly, Event::BOnly],
            (Mode::TwoWay, MlFull) => &[Event::AOnly, Event::BOnly, Event::Both],
            (Mode::Tdm, MlBinary) | (_, AttributeAlice) => &[Event::AOnly],
            (Mode::Tdm, MlFull) => &[Event::AOnly, Event::Both],
            (Mode::TwoWay, AttributeBob) => &[Event::BOnly],
            (Mode::Tdm, AttributeBob) => &[Event::Both],
            (_, Oracle) => &[],
        }
    }

    /// Classifies one observed power. `u` in `[0, 1)` drives the random
    /// choice among equally plausible classes.
    pub fn classify(&self, power: f64, truth: Event, variant: ClassifierVariant, u: f64) -> Event {
        let allowed = self.admissible(variant);
        if allowed.is_empty() {
            return truth;
        }
        let mut consistent = [Event::AOnly; 3];
        let mut n = 0;
        for &e in allowed {
            if self.supports[e.index()].contains(power) {
                consistent[n] = e;
                n += 1;
            }
        }
        let pool: &[Event] = if n == 0 { allowed } else { &consistent[..n] };
        pool[((u * pool.len() as f64) as usize).min(pool.len() - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_merging_and_lookup() {
        let s = PowerSupport::from_intervals(vec![(3.0, 4.0), (1.0, 2.0), (1.5, 2.5), (5.0, 5.0)]);
        assert_eq!(s.intervals(), &[(1.0, 2.5), (3.0, 4.0), (5.0, 5.0)]);
        assert!(s.contains(1.0) && s.contains(2.5) && s.contains(3.5) && s.contains(5.0));
        assert!(!s.contains(2.7) && !s.contains(0.9) && !s.contains(5.1));
    }

    #[test]
    fn cross_range_matches_brute_force() {
        let x = (0.5, 2.0);
        let y = (1.0, 1.5);
        for kappa in [-1.0, -0.6, -0.1, 0.0, 0.4, 1.0] {
            let (lo, hi) = cross_range(x, y, kappa);
            let (mut blo, mut bhi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..=300 {
                for j in 0..=300 {
                    let a = x.0 + (x.1 - x.0) * i as f64 / 300.0;
                    let b = y.0 + (y.1 - y.0) * j as f64 / 300.0;
                    let q = a * a + b * b + 2.0 * kappa * a * b;
                    blo = blo.min(q);
                    bhi = bhi.max(q);
                }
            }
            assert!((lo - blo).abs() < 1e-4, "kappa {kappa}: {lo} vs {blo}");
            assert!((hi - bhi).abs() < 1e-12);
        }
    }

    #[test]
    fn separated_supports_classify_exactly() {
        let links = EveLinks {
            loss_a: 1.0,
            loss_b: 0.01,
            cos_phase: 1.0,
        };
        let p = PowerPolicy::uniform(1.0, 2.0).unwrap();
        let c = EnergyClassifier::from_links(&links, &p, &p, Mode::TwoWay);
        for u in [0.0, 0.5, 0.99] {
            assert_eq!(
                c.classify(1.5, Event::AOnly, ClassifierVariant::MlBinary, u),
                Event::AOnly
            );
            assert_eq!(
                c.classify(0.015, Event::BOnly, ClassifierVariant::MlBinary, u),
                Event::BOnly
            );
            assert_eq!(
                c.classify(1.5, Event::BOnly, ClassifierVariant::Oracle, u),
                Event::BOnly
            );
            assert_eq!(
                c.classify(0.015, Event::BOnly, ClassifierVariant::AttributeAlice, u),
                Event::AOnly
            );
        }
        // powers only a collision can produce are erased by the full classifier
        assert_eq!(
            c.classify(2.3, Event::Both, ClassifierVariant::MlFull, 0.3),
            Event::Both
        );
        let guesses: Vec<Event> = [0.1, 0.9]
            .iter()
            .map(|&u| c.classify(2.3, Event::Both, ClassifierVariant::MlBinary, u))
            .collect();
        assert_eq!(guesses, vec![Event::AOnly, Event::BOnly]);
    }

    #[test]
    fn overlapping_supports_split_uniformly() {
        let links = EveLinks {
            loss_a: 1.0,
            loss_b: 1.0,
            cos_phase: 0.0,
        };
        let p = PowerPolicy::uniform(1.0, 2.0).unwrap();
        let c = EnergyClassifier::from_links(&links, &p, &p, Mode::TwoWay);
        // 1.5 is reachable by A, B and not by a collision (>= 2)
        assert_eq!(
            c.classify(1.5, Event::AOnly, ClassifierVariant::MlFull, 0.2),
            Event::AOnly
        );
        assert_eq!(
            c.classify(1.5, Event::AOnly, ClassifierVariant::MlFull, 0.7),
            Event::BOnly
        );
        let tdm = EnergyClassifier::from_links(&links, &p, &p, Mode::Tdm);
        assert_eq!(
            tdm.classify(3.0, Event::Both, ClassifierVariant::MlBinary, 0.9),
            Event::AOnly
        );
        assert_eq!(
            tdm.classify(3.0, Event::Both, ClassifierVariant::MlFull, 0.9),
            Event::Both
        );
    }

    #[test]
    fn discrete_levels_give_point_supports() {
        let links = EveLinks {
            loss_a: 1.0,
            loss_b: 0.5,
            cos_phase: 1.0,
        };
        let p = PowerPolicy::discrete(vec![1.0, 4.0]).unwrap();
        let c = EnergyClassifier::from_links(&links, &p, &p, Mode::TwoWay);
        assert_eq!(
            c.support(Event::AOnly).intervals(),
            &[(1.0, 1.0), (4.0, 4.0)]
        );
        assert_eq!(c.support(Event::Both).intervals().len(), 8);
        assert_eq!(
            "ml-full".parse::<ClassifierVariant>().unwrap(),
            ClassifierVariant::MlFull
        );
    }
}
