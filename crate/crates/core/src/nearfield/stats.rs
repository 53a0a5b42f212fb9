//! Monte Carlo estimation of Eve's classification statistics.
//!
//! Trials are drawn per true scenario in fixed-size chunks, each chunk with
//! its own ChaCha8 stream seeded from `(seed, scenario, chunk)`. Chunks
//! produce integer counts that are summed, so results depend only on the
//! seed and never on the thread schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::Probability;

use super::classifier::{ClassifierVariant, EnergyClassifier, Mode};
use super::geometry::{EveLinks, Event, GeometryConfig};
use super::policy::PowerPolicy;

const CHUNK: u64 = 1 << 14;
const NV: usize = ClassifierVariant::ALL.len();

/// Below this many trials per scenario the estimates are too noisy for the
/// rate formulas to mean much.
pub const MIN_TRIALS: u64 = 10_000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic child seed for a labelled sub-stream.
pub fn sub_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

/// Raw counts from one simulation of every classifier variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTally {
    pub mode: Mode,
    /// Trials per true scenario.
    pub trials: u64,
    /// `counts[variant][truth][decision]`.
    counts: [[[u64; 3]; 3]; NV],
    /// Collisions attributed to Alice (`[v][0]`) or Bob (`[v][1]`) in which
    /// Eve's decoded symbol differs from that user's.
    collision_errors: [[u64; 2]; NV],
}

impl ClassificationTally {
    fn empty(mode: Mode, trials: u64) -> Self {
        Self {
            mode,
            trials,
            counts: [[[0; 3]; 3]; NV],
            collision_errors: [[0; 2]; NV],
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        for v in 0..NV {
            for t in 0..3 {
                for d in 0..3 {
                    self.counts[v][t][d] += other.counts[v][t][d];
                }
            }
            for k in 0..2 {
                self.collision_errors[v][k] += other.collision_errors[v][k];
            }
        }
        self
    }

    pub fn count(&self, variant: ClassifierVariant, truth: Event, decision: Event) -> u64 {
        self.counts[variant.index()][truth.index()][decision.index()]
    }

    fn fraction(&self, variant: ClassifierVariant, truth: Event, decision: Event) -> f64 {
        self.count(variant, truth, decision) as f64 / self.trials as f64
    }

    fn check(&self, variant: ClassifierVariant) -> Result<()> {
        if variant.supports(self.mode) {
            Ok(())
        } else {
            Err(Error::invalid(
                "classifier",
                format!("variant {variant} is not defined for {:?}", self.mode),
            ))
        }
    }

    fn error_rate(&self, variant: ClassifierVariant, decision: Event) -> (f64, u64) {
        let n = self.count(variant, Event::Both, decision);
        let k = match decision {
            Event::AOnly => 0,
            Event::BOnly => 1,
            Event::Both => unreachable!("erased symbols are not decoded"),
        };
        let errors = self.collision_errors[variant.index()][k];
        if n == 0 {
            (0.0, 0)
        } else {
            (errors as f64 / n as f64, n)
        }
    }

    pub fn tdm_stats(&self, variant: ClassifierVariant) -> Result<TdmClassifierStats> {
        self.check(variant)?;
        if self.mode != Mode::Tdm {
            return Err(Error::invalid(
                "mode",
                "tally was not simulated for the TDM protocol",
            ));
        }
        let (p_e, n_m) = self.error_rate(variant, Event::AOnly);
        let p_m = self.fraction(variant, Event::Both, Event::AOnly);
        let p_f = self.fraction(variant, Event::AOnly, Event::Both);
        let se = |p: f64, n: u64| {
            if n == 0 {
                0.0
            } else {
                (p * (1.0 - p) / n as f64).sqrt()
            }
        };
        Ok(TdmClassifierStats {
            p_m: Probability::clamped(p_m),
            p_f: Probability::clamped(p_f),
            p_e_given_m: Probability::clamped(p_e),
            se_m: se(p_m, self.trials),
            se_f: se(p_f, self.trials),
            se_e_given_m: se(p_e, n_m),
        })
    }

    pub fn twoway_stats(&self, variant: ClassifierVariant) -> Result<TwoWayClassifierStats> {
        self.check(variant)?;
        if self.mode != Mode::TwoWay {
            return Err(Error::invalid(
                "mode",
                "tally was not simulated for the two-way protocol",
            ));
        }
        let mut p = [[Probability::zero(); 3]; 3];
        for t in Event::ALL {
            for d in Event::ALL {
                p[t.index()][d.index()] = Probability::clamped(self.fraction(variant, t, d));
            }
        }
        Ok(TwoWayClassifierStats {
            p,
            p_e_ab_to_a: Probability::clamped(self.error_rate(variant, Event::AOnly).0),
            p_e_ab_to_b: Probability::clamped(self.error_rate(variant, Event::BOnly).0),
            trials: self.trials,
        })
    }
}

/// Classifier behaviour against the TDM protocol, conditional on the true
/// scenario (and hence independent of the jamming probability).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TdmClassifierStats {
    /// Jammed symbol taken for a clean one.
    pub p_m: Probability<f64>,
    /// Clean symbol taken for a jammed one.
    pub p_f: Probability<f64>,
    /// Eve's symbol error on missed jammed symbols.
    pub p_e_given_m: Probability<f64>,
    pub se_m: f64,
    pub se_f: f64,
    pub se_e_given_m: f64,
}

impl TdmClassifierStats {
    pub fn new(p_m: f64, p_f: f64, p_e_given_m: f64) -> Result<Self> {
        Ok(Self {
            p_m: Probability::new(p_m)?,
            p_f: Probability::new(p_f)?,
            p_e_given_m: Probability::new(p_e_given_m)?,
            se_m: 0.0,
            se_f: 0.0,
            se_e_given_m: 0.0,
        })
    }
}

/// Classifier behaviour against the two-way protocol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoWayClassifierStats {
    /// `p[truth][decision]`, indexed by [`Event::index`]; a `Both` decision
    /// is an erasure.
    pub p: [[Probability<f64>; 3]; 3],
    /// Eve's error on Alice's symbol when a collision is attributed to Alice.
    pub p_e_ab_to_a: Probability<f64>,
    /// Eve's error on Bob's symbol when a collision is attributed to Bob.
    pub p_e_ab_to_b: Probability<f64>,
    /// Trials per true scenario behind the estimates (0 for exact values).
    pub trials: u64,
}

impl TwoWayClassifierStats {
    pub fn get(&self, truth: Event, decision: Event) -> f64 {
        self.p[truth.index()][decision.index()].get()
    }

    /// Binomial standard error of `get(truth, decision)`.
    pub fn std_error(&self, truth: Event, decision: Event) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.get(truth, decision);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Eve that cannot tell anything apart and never erases: every
    /// attribution is a coin flip and a collision decodes the wrong bit a
    /// quarter of the time.
    pub fn fully_confused() -> Self {
        let half = Probability::half();
        let quarter = Probability::clamped(0.25);
        let z = Probability::zero();
        Self {
            p: [[half, half, z]; 3],
            p_e_ab_to_a: quarter,
            p_e_ab_to_b: quarter,
            trials: 0,
        }
    }

    /// The perfect classifier.
    pub fn perfect() -> Self {
        let mut p = [[Probability::zero(); 3]; 3];
        for e in Event::ALL {
            p[e.index()][e.index()] = Probability::one();
        }
        Self {
            p,
            p_e_ab_to_a: Probability::zero(),
            p_e_ab_to_b: Probability::zero(),
            trials: 0,
        }
    }
}

/// Everything a chunk of trials needs besides its scenario and seed.
struct Sampler<'a> {
    links: EveLinks,
    classifier: EnergyClassifier,
    alice: &'a PowerPolicy,
    bob: &'a PowerPolicy,
    variants: Vec<ClassifierVariant>,
}

fn run_chunk(sampler: &Sampler<'_>, truth: Event, n: u64, seed: u64) -> ClassificationTally {
    let Sampler {
        links,
        classifier,
        alice,
        bob,
        variants,
    } = sampler;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = ClassificationTally::empty(classifier.mode, 0);
    let t = truth.index();
    for _ in 0..n {
        let rho_a = if truth == Event::BOnly {
            0.0
        } else {
            alice.sample(&mut rng)
        };
        let rho_b = if truth == Event::AOnly {
            0.0
        } else {
            bob.sample(&mut rng)
        };
        let same_sign: bool = rng.random();
        let power = links.power(truth, rho_a, rho_b, same_sign);
        let u: f64 = rng.random();
        // Eve decodes the stronger component of a collision
        let (err_a, err_b) = if truth == Event::Both {
            let (pa, pb) = (rho_a * links.loss_a, rho_b * links.loss_b);
            let b_wins = pb > pa || (pb == pa && rng.random::<bool>());
            (b_wins && !same_sign, !b_wins && !same_sign)
        } else {
            (false, false)
        };
        for &v in variants.iter() {
            let d = classifier.classify(power, truth, v, u);
            let vi = v.index();
            tally.counts[vi][t][d.index()] += 1;
            match d {
                Event::AOnly if err_a => tally.collision_errors[vi][0] += 1,
                Event::BOnly if err_b => tally.collision_errors[vi][1] += 1,
                _ => {}
            }
        }
    }
    tally
}

/// Simulates `trials` symbols of every scenario the protocol produces and
/// classifies each one with every variant the protocol admits, sharing the
/// random draws between variants.
pub fn simulate(
    geo: &GeometryConfig,
    alice: &PowerPolicy,
    bob: &PowerPolicy,
    mode: Mode,
    trials: u64,
    seed: u64,
) -> Result<ClassificationTally> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be positive"));
    }
    if trials < MIN_TRIALS {
        log::warn!("only {trials} trials per scenario; estimates will be noisy (recommended >= {MIN_TRIALS})");
    }
    let classifier = super::classifier::train_classifier(geo, alice, bob, mode)?;
    let truths: &[Event] = match mode {
        Mode::TwoWay => &Event::ALL,
        Mode::Tdm => &[Event::AOnly, Event::Both],
    };
    let sampler = Sampler {
        links: EveLinks::new(geo),
        classifier,
        alice,
        bob,
        variants: ClassifierVariant::ALL
            .into_iter()
            .filter(|v| v.supports(mode))
            .collect(),
    };
    let chunks = trials.div_ceil(CHUNK);
    let jobs: Vec<(Event, u64)> = truths
        .iter()
        .flat_map(|&e| (0..chunks).map(move |c| (e, c)))
        .collect();
    let total = jobs
        .par_iter()
        .map(|&(e, c)| {
            let n = CHUNK.min(trials - c * CHUNK);
            let s = sub_seed(seed, &[e.index() as u64, c]);
            run_chunk(&sampler, e, n, s)
        })
        .reduce(|| ClassificationTally::empty(mode, 0), |a, b| a.merge(&b));
    Ok(ClassificationTally { trials, ..total })
}

/// TDM statistics for one classifier variant: Alice sends `data` symbols,
/// Bob jams with `feedback` powers.
pub fn estimate_stats_tdm(
    geo: &GeometryConfig,
    data: &PowerPolicy,
    feedback: &PowerPolicy,
    variant: ClassifierVariant,
    trials: u64,
    seed: u64,
) -> Result<TdmClassifierStats> {
    simulate(geo, data, feedback, Mode::Tdm, trials, seed)?.tdm_stats(variant)
}

/// Two-way statistics for one classifier variant.
pub fn estimate_stats_twoway(
    geo: &GeometryConfig,
    policy: &PowerPolicy,
    variant: ClassifierVariant,
    trials: u64,
    seed: u64,
) -> Result<TwoWayClassifierStats> {
    simulate(geo, policy, policy, Mode::TwoWay, trials, seed)?.twoway_stats(variant)
}
