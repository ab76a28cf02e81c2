//! On-disk run configuration: a TOML schema that maps onto a model spec
//! plus stepper and driver settings.
//!
//! Constitutive curves come either as a rational-family cap (`beta_max`,
//! `phi_max` with `r_phi`) or as explicit monotone tables; the ambient
//! moisture and the initial content each accept a scalar or a table. The
//! schema serializes back verbatim, so a run can echo the exact
//! configuration it executed.

use crate::model::{CurveSpec, ModelSpec, PhysicalParams, ProfileSpec, SignalSpec};
use crate::pde::AdvectionScheme;
use serde::{Deserialize, Serialize};

/// Physical constants section.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhysicalSection {
    pub a: f64,
    pub a0: f64,
    #[serde(rename = "H")]
    pub henry: f64,
    pub k: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
}

/// Constitutive curves section. Exactly one representation per curve.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct ConstitutiveSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_table: Option<Vec<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_table: Option<Vec<(f64, f64)>>,
}

/// Scalar-or-table boundary signal.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SignalEntry {
    Constant(f64),
    Table(Vec<(f64, f64)>),
}

/// Ambient moisture section.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundarySection {
    pub h: SignalEntry,
}

/// Scalar-or-samples initial content.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ProfileEntry {
    Constant(f64),
    Samples(Vec<f64>),
}

/// Initial state section.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InitialSection {
    pub s0: f64,
    pub u0: ProfileEntry,
}

fn default_steps() -> usize {
    200
}
fn default_picard_tol() -> f64 {
    1e-10
}
fn default_picard_max() -> usize {
    50
}
fn default_delta_min_factor() -> f64 {
    1e-3
}

/// Stepper controls section, all optional.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StepperSection {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_picard_tol")]
    pub picard_tol: f64,
    #[serde(default = "default_picard_max")]
    pub picard_max: usize,
    #[serde(default = "default_delta_min_factor")]
    pub delta_min_factor: f64,
}

impl Default for StepperSection {
    fn default() -> Self {
        Self {
            steps: default_steps(),
            picard_tol: default_picard_tol(),
            picard_max: default_picard_max(),
            delta_min_factor: default_delta_min_factor(),
        }
    }
}

/// Solution mode: couple the front to the field step by step, or construct
/// the front by the fixed-point iteration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Monolithic,
    Gamma,
}

fn default_n() -> usize {
    64
}
fn default_fp_max() -> usize {
    60
}
fn default_verify() -> bool {
    true
}

/// Driver section, all optional.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunSection {
    /// Number of reference cells.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub mode: Mode,
    /// Fixed-point distance tolerance; defaults to `1e-8 sqrt(T)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp_tol: Option<f64>,
    #[serde(default = "default_fp_max")]
    pub fp_max: usize,
    /// Run the bound and ledger audits after solving.
    #[serde(default = "default_verify")]
    pub verify: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            n: default_n(),
            mode: Mode::default(),
            fp_tol: None,
            fp_max: default_fp_max(),
            verify: default_verify(),
        }
    }
}

/// A full run configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Config {
    pub physical: PhysicalSection,
    pub constitutive: ConstitutiveSection,
    pub boundary: BoundarySection,
    pub initial: InitialSection,
    #[serde(default)]
    pub stepper: StepperSection,
    #[serde(default)]
    pub run: RunSection,
}

impl Config {
    /// Parse from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    /// Serialize back to TOML text.
    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Shape-check the constitutive section and build the model spec.
    ///
    /// Shape problems (both or neither representation of a curve) are
    /// reported here; admissibility itself is the model's job.
    pub fn to_model_spec(&self) -> Result<ModelSpec, String> {
        let beta = match (&self.constitutive.beta_max, &self.constitutive.beta_table) {
            (Some(cap), None) => CurveSpec::Rational { cap: *cap, scale: 1.0 },
            (None, Some(table)) => CurveSpec::Tabulated(table.clone()),
            (Some(_), Some(_)) => {
                return Err("give either beta_max or beta_table, not both".into())
            }
            (None, None) => return Err("give beta_max or beta_table".into()),
        };
        let phi = match (
            &self.constitutive.phi_max,
            &self.constitutive.r_phi,
            &self.constitutive.phi_table,
        ) {
            (Some(cap), Some(scale), None) => CurveSpec::Rational { cap: *cap, scale: *scale },
            (Some(_), None, None) => return Err("phi_max needs r_phi".into()),
            (None, Some(_), None) => return Err("r_phi needs phi_max".into()),
            (None, None, Some(table)) => CurveSpec::Tabulated(table.clone()),
            (None, None, None) => return Err("give phi_max with r_phi, or phi_table".into()),
            _ => return Err("give either phi_max with r_phi, or phi_table, not both".into()),
        };
        let boundary = match &self.boundary.h {
            SignalEntry::Constant(v) => SignalSpec::Constant(*v),
            SignalEntry::Table(t) => SignalSpec::Table(t.clone()),
        };
        let u0 = match &self.initial.u0 {
            ProfileEntry::Constant(v) => ProfileSpec::Constant(*v),
            ProfileEntry::Samples(s) => ProfileSpec::Samples(s.clone()),
        };
        Ok(ModelSpec {
            physical: PhysicalParams {
                a: self.physical.a,
                a0: self.physical.a0,
                henry: self.physical.henry,
                k: self.physical.k,
                t_end: self.physical.t_end,
            },
            beta,
            phi,
            boundary,
            s0: self.initial.s0,
            u0,
        })
    }

    /// Time step implied by the horizon and step count.
    pub fn dt(&self) -> f64 {
        self.physical.t_end / self.stepper.steps as f64
    }

    /// Stepper controls implied by the config.
    pub fn stepper_config(&self) -> crate::pde::StepperConfig {
        crate::pde::StepperConfig {
            dt: self.dt(),
            picard_tol: self.stepper.picard_tol,
            picard_max: self.stepper.picard_max,
            delta_min: self.physical.a * self.stepper.delta_min_factor,
            advection: AdvectionScheme::default(),
        }
    }

    /// The stock wetting configuration, matching the library's default model.
    pub fn default_config() -> Self {
        Self {
            physical: PhysicalSection { a: 1.0, a0: 1.0, henry: 1.0, k: 1.0, t_end: 1.0 },
            constitutive: ConstitutiveSection {
                beta_max: Some(0.5),
                beta_table: None,
                phi_max: Some(0.5),
                r_phi: Some(1.0),
                phi_table: None,
            },
            boundary: BoundarySection { h: SignalEntry::Constant(1.0) },
            initial: InitialSection { s0: 2.0, u0: ProfileEntry::Constant(0.5) },
            stepper: StepperSection::default(),
            run: RunSection::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_model_spec;

    const FULL: &str = r#"
[physical]
a = 1.0
a0 = 1.0
H = 1.0
k = 1.0
T = 1.0

[constitutive]
beta_max = 0.5
phi_max = 0.5
r_phi = 1.0

[boundary]
h = 1.0

[initial]
s0 = 2.0
u0 = 0.5

[stepper]
steps = 100
picard_tol = 1e-9

[run]
n = 32
mode = "gamma"
"#;

    #[test]
    fn full_config_parses() {
        let cfg = Config::from_toml_str(FULL).unwrap();
        assert_eq!(cfg.stepper.steps, 100);
        assert_eq!(cfg.stepper.picard_max, 50); // defaulted
        assert_eq!(cfg.run.n, 32);
        assert_eq!(cfg.run.mode, Mode::Gamma);
        assert!((cfg.dt() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let text = r#"
[physical]
a = 1.0
a0 = 1.0
H = 1.0
k = 1.0
T = 1.0
[constitutive]
beta_max = 0.5
phi_max = 0.5
r_phi = 1.0
[boundary]
h = 1.0
[initial]
s0 = 2.0
u0 = 0.5
"#;
        let cfg = Config::from_toml_str(text).unwrap();
        assert_eq!(cfg.stepper, StepperSection::default());
        assert_eq!(cfg.run, RunSection::default());
        assert_eq!(cfg.run.mode, Mode::Monolithic);
    }

    #[test]
    fn tables_parse_for_signal_and_profile() {
        let text = r#"
[physical]
a = 1.0
a0 = 1.0
H = 1.0
k = 1.0
T = 1.0
[constitutive]
beta_table = [[0.0, 0.0], [0.5, 0.3], [2.0, 0.45]]
phi_table = [[0.0, 0.0], [0.5, 0.3], [1.0, 0.4], [1.5, 0.5], [2.5, 0.5]]
[boundary]
h = [[0.0, 0.5], [1.0, 0.5]]
[initial]
s0 = 2.0
u0 = [0.5, 0.5, 0.5]
"#;
        let cfg = Config::from_toml_str(text).unwrap();
        let spec = cfg.to_model_spec().unwrap();
        spec.validate().unwrap();
    }

    #[test]
    fn curve_shape_conflicts_are_reported() {
        let mut cfg = Config::default_config();
        cfg.constitutive.beta_table = Some(vec![(0.0, 0.0), (1.0, 0.3)]);
        assert!(cfg.to_model_spec().unwrap_err().contains("beta"));

        let mut cfg = Config::default_config();
        cfg.constitutive.r_phi = None;
        assert!(cfg.to_model_spec().unwrap_err().contains("r_phi"));

        let mut cfg = Config::default_config();
        cfg.constitutive.beta_max = None;
        assert!(cfg.to_model_spec().is_err());
    }

    #[test]
    fn default_config_matches_the_default_spec() {
        let from_config = Config::default_config().to_model_spec().unwrap();
        let stock = default_model_spec();
        assert_eq!(format!("{from_config:?}"), format!("{stock:?}"));
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = Config::from_toml_str(FULL).unwrap();
        let text = cfg.to_toml_string();
        let back = Config::from_toml_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn stepper_config_carries_the_floor() {
        let cfg = Config::default_config();
        let sc = cfg.stepper_config();
        assert!((sc.delta_min - 1e-3).abs() < 1e-18);
        assert_eq!(sc.picard_max, 50);
    }
}
