//! Randomized transmit-power laws.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum PowerLaw {
    ContinuousUniform,
    /// Equiprobable levels.
    DiscreteUniform(Vec<f64>),
}

/// Per-symbol SNR at unit distance, drawn independently for every symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerPolicy {
    pub rho_min: f64,
    pub rho_max: f64,
    pub law: PowerLaw,
}

impl PowerPolicy {
    pub fn uniform(rho_min: f64, rho_max: f64) -> Result<Self> {
        let p = Self {
            rho_min,
            rho_max,
            law: PowerLaw::ContinuousUniform,
        };
        p.validate()?;
        Ok(p)
    }

    /// Levels are sorted; the range is taken from the extreme levels.
    pub fn discrete(mut levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyInput("power levels"));
        }
        levels.sort_by(f64::total_cmp);
        let p = Self {
            rho_min: levels[0],
            rho_max: levels[levels.len() - 1],
            law: PowerLaw::DiscreteUniform(levels),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho_min > 0.0 && self.rho_max.is_finite()) {
            return Err(Error::Domain {
                name: "rho_min",
                value: self.rho_min,
                expected: "> 0",
            });
        }
        if self.rho_max < self.rho_min {
            return Err(Error::invalid(
                "rho_max",
                format!("{} is below rho_min = {}", self.rho_max, self.rho_min),
            ));
        }
        if let PowerLaw::DiscreteUniform(levels) = &self.law {
            if levels.is_empty() {
                return Err(Error::EmptyInput("power levels"));
            }
            if let Some(&l) = levels
                .iter()
                .find(|&&l| !(l >= self.rho_min && l <= self.rho_max))
            {
                return Err(Error::Domain {
                    name: "power level",
                    value: l,
                    expected: "[rho_min, rho_max]",
                });
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.law {
            PowerLaw::ContinuousUniform => {
                if self.rho_max > self.rho_min {
                    rng.random_range(self.rho_min..self.rho_max)
                } else {
                    self.rho_min
                }
            }
            PowerLaw::DiscreteUniform(levels) => levels[rng.random_range(0..levels.len())],
        }
    }

    /// Mean transmit SNR.
    pub fn mean(&self) -> f64 {
        match &self.law {
            PowerLaw::ContinuousUniform => 0.5 * (self.rho_min + self.rho_max),
            PowerLaw::DiscreteUniform(levels) => levels.iter().sum::<f64>() / levels.len() as f64,
        }
    }
}
