//! Per-command configuration records. Each is read from an optional JSON
//! file, patched with `--set key=value` overrides, and rejected if it names
//! an unknown key.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use twoway_secrecy::nearfield::{ClassifierVariant, GeometryConfig, PowerPolicy};

use crate::CliError;

/// Hooks for the generic command-line flags.
pub trait Tunable {
    /// `--step`: the command's grid step.
    fn set_step(&mut self, step: f64) -> Result<(), CliError>;
    /// `--fine`: double every grid resolution.
    fn refine(&mut self);
}

/// Merges `--set` overrides into a JSON object and deserializes it.
pub fn resolve<C: DeserializeOwned>(
    mut base: Value,
    overrides: &[(String, String)],
) -> Result<C, CliError> {
    if !base.is_object() {
        return Err(CliError::Config(
            "configuration file must hold a JSON object".into(),
        ));
    }
    for (key, raw) in overrides {
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        set_path(&mut base, key, value)?;
    }
    serde_json::from_value(base).map_err(|e| CliError::Config(e.to_string()))
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<(), CliError> {
    let mut node = root;
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(CliError::Config(format!("malformed key `{key}`")));
        }
        let obj: &mut Map<String, Value> = node.as_object_mut().ok_or_else(|| {
            CliError::Config(format!("`{key}`: `{part}` is not inside an object"))
        })?;
        if parts.peek().is_none() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        node = obj.entry(part).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

/// Hex SHA-256 over the command name and the resolved configuration.
pub fn digest<C: Serialize>(command: &str, config: &C) -> String {
    let json = serde_json::to_string(config).expect("config is serializable");
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(json.as_bytes());
    hex::encode(h.finalize())
}

fn check_step(name: &str, step: f64) -> Result<(), CliError> {
    if step > 0.0 && step <= 0.5 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name}: step {step} is not in (0, 0.5]"
        )))
    }
}

fn steps_for(name: &str, step: f64) -> Result<usize, CliError> {
    check_step(name, step)?;
    Ok((1.0 / step).round() as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdModuloConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_e: f64,
    pub step: f64,
    /// Resample each boundary at this many arc-length points instead of
    /// listing polygon vertices.
    pub boundary_samples: Option<usize>,
}

impl Default for FdModuloConfig {
    fn default() -> Self {
        Self {
            eps1: 0.2,
            eps2: 0.3,
            eps_e: 0.25,
            step: 0.01,
            boundary_samples: None,
        }
    }
}

impl Tunable for FdModuloConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("step", step)?;
        self.step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.step /= 2.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdGaussianConfig {
    pub ge1: f64,
    pub ge2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub budget_steps: usize,
    pub codeword_steps: usize,
    pub boundary_samples: Option<usize>,
}

impl Default for FdGaussianConfig {
    fn default() -> Self {
        Self {
            ge1: 10.0,
            ge2: 0.1,
            rho1: 1.0,
            rho2: 100.0,
            budget_steps: 50,
            codeword_steps: 50,
            boundary_samples: None,
        }
    }
}

impl Tunable for FdGaussianConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        let n = steps_for("step", step)?;
        self.budget_steps = n;
        self.codeword_steps = n;
        Ok(())
    }

    fn refine(&mut self) {
        self.budget_steps *= 2;
        self.codeword_steps *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HdModuloConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_e: f64,
    pub prefix_step: f64,
    pub input_step: f64,
    pub sched_step: f64,
    pub boundary_samples: Option<usize>,
}

impl Default for HdModuloConfig {
    fn default() -> Self {
        Self {
            eps1: 0.2,
            eps2: 0.3,
            eps_e: 0.25,
            prefix_step: 0.05,
            input_step: 0.05,
            sched_step: 0.05,
            boundary_samples: None,
        }
    }
}

impl Tunable for HdModuloConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("step", step)?;
        self.prefix_step = step;
        self.input_step = step;
        self.sched_step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.prefix_step /= 2.0;
        self.input_step /= 2.0;
        self.sched_step /= 2.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HdGaussianConfig {
    pub ge1: f64,
    pub ge2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub sched_step: f64,
    pub power_steps: usize,
    pub codeword_steps: usize,
    /// Split grid of the full-duplex reference region.
    pub full_duplex_steps: usize,
    pub boundary_samples: Option<usize>,
}

impl Default for HdGaussianConfig {
    fn default() -> Self {
        Self {
            ge1: 5.0,
            ge2: 0.1,
            rho1: 1.0,
            rho2: 1.0,
            sched_step: 0.1,
            power_steps: 4,
            codeword_steps: 5,
            full_duplex_steps: 50,
            boundary_samples: None,
        }
    }
}

impl Tunable for HdGaussianConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("step", step)?;
        self.sched_step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.sched_step /= 2.0;
        self.power_steps *= 2;
        self.codeword_steps *= 2;
        self.full_duplex_steps *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareGaussianConfig {
    pub ge1: f64,
    pub ge2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub budget_steps: usize,
    pub codeword_steps: usize,
    pub alpha_step: f64,
    pub boundary_samples: Option<usize>,
}

impl Default for CompareGaussianConfig {
    fn default() -> Self {
        Self {
            ge1: 5.0,
            ge2: 0.1,
            rho1: 1.0,
            rho2: 1.0,
            budget_steps: 50,
            codeword_steps: 50,
            alpha_step: 1e-3,
            boundary_samples: None,
        }
    }
}

impl Tunable for CompareGaussianConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        let n = steps_for("step", step)?;
        self.budget_steps = n;
        self.codeword_steps = n;
        Ok(())
    }

    fn refine(&mut self) {
        self.budget_steps *= 2;
        self.codeword_steps *= 2;
        self.alpha_step /= 2.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    /// Equiprobable discrete levels; overrides the range when present.
    pub levels: Option<Vec<f64>>,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            rho_min: 1.0,
            rho_max: 10.0,
            levels: None,
        }
    }
}

impl PolicyConfig {
    pub fn build(&self) -> Result<PowerPolicy, CliError> {
        Ok(match &self.levels {
            Some(levels) => PowerPolicy::discrete(levels.clone())?,
            None => PowerPolicy::uniform(self.rho_min, self.rho_max)?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TdmPolicyConfig {
    pub data: PolicyConfig,
    pub feedback: PolicyConfig,
}

fn default_r_e() -> f64 {
    GeometryConfig::radius_for_min_ratio(1.0, 0.1).expect("valid ratio")
}

/// Placement shared by the simulation commands; Eve's angle is swept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimGeometry {
    pub d_ab: f64,
    pub r_e: f64,
    pub alpha_pl: f64,
    pub k_wave: f64,
    /// Number of Eve angles evenly covering `[0, pi/2]`.
    pub thetas: usize,
}

impl Default for SimGeometry {
    fn default() -> Self {
        Self {
            d_ab: 1.0,
            r_e: default_r_e(),
            alpha_pl: 2.0,
            k_wave: 0.0,
            thetas: 64,
        }
    }
}

impl SimGeometry {
    pub fn build(&self) -> Result<GeometryConfig, CliError> {
        let geo = GeometryConfig {
            d_ab: self.d_ab,
            r_e: self.r_e,
            theta: 0.0,
            alpha_pl: self.alpha_pl,
            k_wave: self.k_wave,
            g_a: 1.0,
            g_b: 1.0,
            g_e: 1.0,
        };
        geo.validate()?;
        if self.thetas == 0 {
            return Err(CliError::Config("geometry.thetas: must be positive".into()));
        }
        Ok(geo)
    }
}

pub fn parse_variants(names: &[String]) -> Result<Vec<ClassifierVariant>, CliError> {
    names
        .iter()
        .map(|n| Ok(n.parse::<ClassifierVariant>()?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoWaySimConfig {
    pub geometry: SimGeometry,
    pub policies: Vec<PolicyConfig>,
    pub pt_step: f64,
    pub variants: Vec<String>,
    /// Monte Carlo trials per true transmission scenario.
    pub trials: u64,
    pub seed: u64,
    pub noiseless_main: bool,
}

impl Default for TwoWaySimConfig {
    fn default() -> Self {
        Self {
            geometry: SimGeometry::default(),
            policies: vec![PolicyConfig::default()],
            pt_step: 1e-3,
            variants: ClassifierVariant::TWO_WAY_DEFAULT
                .iter()
                .map(|v| v.name().to_string())
                .collect(),
            trials: 100_000,
            seed: 1,
            noiseless_main: true,
        }
    }
}

impl Tunable for TwoWaySimConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("pt_step", step)?;
        self.pt_step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.geometry.thetas *= 2;
        self.pt_step /= 2.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TdmSimConfig {
    pub geometry: SimGeometry,
    pub policies: Vec<TdmPolicyConfig>,
    pub beta_step: f64,
    pub variants: Vec<String>,
    pub trials: u64,
    pub seed: u64,
    pub noiseless_main: bool,
}

impl Default for TdmSimConfig {
    fn default() -> Self {
        Self {
            geometry: SimGeometry::default(),
            policies: vec![TdmPolicyConfig::default()],
            beta_step: 1e-3,
            variants: ClassifierVariant::TDM_DEFAULT
                .iter()
                .map(|v| v.name().to_string())
                .collect(),
            trials: 100_000,
            seed: 1,
            noiseless_main: true,
        }
    }
}

impl Tunable for TdmSimConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("beta_step", step)?;
        self.beta_step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.geometry.thetas *= 2;
        self.beta_step /= 2.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoteConfig {
    pub rho_min: f64,
    pub d_ab: f64,
    pub alpha_pl: f64,
    pub pt_step: f64,
    pub noiseless_main: bool,
}

impl Default for AsymptoteConfig {
    fn default() -> Self {
        Self {
            rho_min: 1.0,
            d_ab: 1.0,
            alpha_pl: 2.0,
            pt_step: 1e-5,
            noiseless_main: true,
        }
    }
}

impl Tunable for AsymptoteConfig {
    fn set_step(&mut self, step: f64) -> Result<(), CliError> {
        check_step("pt_step", step)?;
        self.pt_step = step;
        Ok(())
    }

    fn refine(&mut self) {
        self.pt_step /= 2.0;
    }
}

/// `n + 1` points `0, 1/n, ..., 1` with `n = round(1 / step)`.
pub fn unit_points(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round().max(1.0) as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overrides_and_unknown_keys() {
        let c: TwoWaySimConfig = resolve(
            json!({"trials": 5}),
            &[
                ("seed".into(), "9".into()),
                ("geometry.r_e".into(), "100".into()),
            ],
        )
        .unwrap();
        assert_eq!((c.trials, c.seed, c.geometry.r_e), (5, 9, 100.0));
        assert_eq!(c.geometry.d_ab, 1.0);

        let err = resolve::<FdModuloConfig>(json!({"epsilon": 0.1}), &[]).unwrap_err();
        assert!(err.to_string().contains("epsilon"));
        let err = resolve::<TwoWaySimConfig>(json!({}), &[("geometry.bogus".into(), "1".into())])
            .unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert!(resolve::<FdModuloConfig>(json!([1]), &[]).is_err());
    }

    #[test]
    fn string_values_fall_back_to_text() {
        let c: TwoWaySimConfig =
            resolve(json!({}), &[("variants".into(), r#"["oracle"]"#.into())]).unwrap();
        assert_eq!(
            parse_variants(&c.variants).unwrap(),
            vec![ClassifierVariant::Oracle]
        );
        assert!(parse_variants(&["nope".to_string()]).is_err());
    }

    #[test]
    fn digest_tracks_content() {
        let a = FdModuloConfig::default();
        let mut b = a.clone();
        assert_eq!(digest("x", &a), digest("x", &b));
        b.step = 0.02;
        assert_ne!(digest("x", &a), digest("x", &b));
        assert_ne!(digest("x", &a), digest("y", &a));
    }

    #[test]
    fn refine_doubles_resolution() {
        let mut c = HdGaussianConfig::default();
        c.refine();
        assert_eq!(
            (c.sched_step, c.power_steps, c.codeword_steps),
            (0.05, 8, 10)
        );
        let mut f = FdGaussianConfig::default();
        f.set_step(0.04).unwrap();
        assert_eq!(f.budget_steps, 25);
        assert!(f.set_step(0.0).is_err());
    }
}
