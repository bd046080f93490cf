//! Scenario files: one TOML document describing the reaction, the choice of `λ`, and
//! every numerical knob of the pipeline.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{FrontError, Result};
use crate::numerics::CubicHermite;
use crate::pde::TimeStep;
use crate::profile::ProfileSettings;
use crate::reaction::{CoefficientField, EnvelopeFunction, EnvelopeRule, ReactionKind, ReactionSpec, SampleGrid};
use crate::verify::{InteriorRegion, VerifySettings, WidthForm};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionModel {
    Kpp,
    Cubic,
    ModulatedCubic,
    Tabulated,
}

/// Samples of a function on `[0, 1]`, interpolated with a monotone-limited cubic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub u: Vec<Real>,
    pub g: Vec<Real>,
}

impl Table {
    fn interpolant(&self) -> Result<CubicHermite<Real>> {
        CubicHermite::pchip(self.u.clone(), self.g.clone()).map_err(|e| FrontError::Config(format!("table: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvelopeConfig {
    Linear,
    Quadratic { beta: Real },
    Logistic,
    LogisticSquared,
    Tabulated { u: Vec<Real>, g: Vec<Real> },
}

impl EnvelopeConfig {
    fn rule(&self) -> Result<EnvelopeRule> {
        Ok(match self {
            Self::Linear => EnvelopeRule::Linear,
            Self::Quadratic { beta } => EnvelopeRule::Quadratic { beta: *beta },
            Self::Logistic => EnvelopeRule::Logistic,
            Self::LogisticSquared => EnvelopeRule::LogisticSquared,
            Self::Tabulated { u, g } => EnvelopeRule::Tabulated(
                Table {
                    u: u.clone(),
                    g: g.clone(),
                }
                .interpolant()?,
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionSection {
    pub model: ReactionModel,
    #[serde(default)]
    pub beta: Real,
    #[serde(default)]
    pub wavenumber: Option<Real>,
    /// `G` in `f = a(x) G(u)` for the tabulated model.
    #[serde(default)]
    pub table: Option<Table>,
    pub a: CoefficientField,
    #[serde(default)]
    pub diffusion: Option<CoefficientField>,
    #[serde(default)]
    pub drift: Option<CoefficientField>,
    /// Overrides of the default envelopes of the model.
    #[serde(default)]
    pub g0: Option<EnvelopeConfig>,
    #[serde(default)]
    pub g1: Option<EnvelopeConfig>,
}

impl ReactionSection {
    pub fn to_spec(&self) -> Result<ReactionSpec> {
        let mut spec = match self.model {
            ReactionModel::Kpp => ReactionSpec::kpp(self.a.clone()),
            ReactionModel::Cubic => ReactionSpec::cubic(self.a.clone(), self.beta),
            ReactionModel::ModulatedCubic => {
                let wavenumber = self
                    .wavenumber
                    .ok_or_else(|| FrontError::Config("modulated_cubic needs `wavenumber`".into()))?;
                let mut s = ReactionSpec::cubic(self.a.clone(), self.beta);
                s.kind = ReactionKind::ModulatedCubic {
                    beta: self.beta,
                    wavenumber,
                };
                s
            }
            ReactionModel::Tabulated => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| FrontError::Config("tabulated model needs `table`".into()))?;
                if self.g0.is_none() || self.g1.is_none() {
                    return Err(FrontError::Config("tabulated model needs explicit `g0` and `g1`".into()));
                }
                let mut s = ReactionSpec::kpp(self.a.clone());
                s.kind = ReactionKind::Tabulated(table.interpolant()?);
                s
            }
        };
        if let Some(g0) = &self.g0 {
            spec.g0 = EnvelopeFunction::lower(g0.rule()?);
        }
        if let Some(g1) = &self.g1 {
            spec.g1 = EnvelopeFunction::upper(g1.rule()?);
        }
        spec.diffusion = self.diffusion.clone();
        spec.drift = self.drift.clone();
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationSection {
    pub x_min: Real,
    pub x_max: Real,
    pub nx: usize,
    pub nu: usize,
}

impl Default for ValidationSection {
    fn default() -> Self {
        let g = SampleGrid::new(-100.0, 100.0);
        Self {
            x_min: g.x_min,
            x_max: g.x_max,
            nx: g.nx,
            nu: g.nu,
        }
    }
}

impl ValidationSection {
    pub fn grid(&self) -> SampleGrid {
        SampleGrid {
            x_min: self.x_min,
            x_max: self.x_max,
            nx: self.nx,
            nu: self.nu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    /// Half-width of the truncation window.
    pub window: Real,
    pub dx: Real,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { window: 100.0, dx: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaValue {
    Fixed(Real),
    /// Only `"auto"` is accepted.
    Named(String),
}

impl Default for LambdaValue {
    fn default() -> Self {
        Self::Named("auto".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeWeight {
    pub lambda: Real,
    pub weight: Real,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSection {
    #[serde(default)]
    pub value: LambdaValue,
    /// Finite superposition; replaces `value` when non-empty.
    #[serde(default)]
    pub modes: Vec<ModeWeight>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenSection {
    pub dx: Real,
    /// Half-width; defaults to `30/sqrt(λ - λ0)` capped at 200, widened to cover the domain.
    #[serde(default)]
    pub window: Option<Real>,
    pub margin: Real,
}

impl Default for EigenSection {
    fn default() -> Self {
        Self {
            dx: 1e-2,
            window: None,
            margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub x_left: Real,
    pub x_right: Real,
    pub dx: Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeSection {
    pub dt: TimeStep,
    /// Start and end of the time window; default: the 1/2-level of `w̃` at 25% and 75%.
    #[serde(default)]
    pub t0: Option<Real>,
    #[serde(default)]
    pub t1: Option<Real>,
    pub reaction_scale: Real,
    pub exhaust_margin: Real,
}

impl Default for SchemeSection {
    fn default() -> Self {
        Self {
            dt: TimeStep::Auto { fraction: 0.5 },
            t0: None,
            t1: None,
            reaction_scale: 1.0,
            exhaust_margin: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub snapshots: usize,
    /// Every `stride`-th node goes to the snapshot table.
    pub stride: usize,
    pub width_eps: Real,
    pub plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            snapshots: 41,
            stride: 10,
            width_eps: 0.1,
            plots: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub sandwich_tol: Real,
    pub monotone_tol: Real,
    pub ratio_threshold: Real,
    pub ratio_tol: Real,
    pub limits_tol: Real,
    #[serde(default)]
    pub width_form: WidthForm,
    pub boundary_nodes: usize,
    pub tail_fraction: Real,
    pub initial_fraction: Real,
}

impl Default for VerifySection {
    fn default() -> Self {
        let v = VerifySettings::default();
        Self {
            sandwich_tol: v.sandwich_tol,
            monotone_tol: v.monotone_tol,
            ratio_threshold: v.ratio_threshold,
            ratio_tol: v.ratio_tol,
            limits_tol: v.limits_tol,
            width_form: v.width_form,
            boundary_nodes: v.region.boundary_nodes,
            tail_fraction: v.region.tail_fraction,
            initial_fraction: v.region.initial_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub reaction: ReactionSection,
    #[serde(default)]
    pub validation: ValidationSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub lambda: LambdaSection,
    #[serde(default)]
    pub eigen: EigenSection,
    #[serde(default)]
    pub profile: ProfileSettings,
    pub domain: DomainSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub verify: VerifySection,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Self = toml::from_str(text).map_err(|e| FrontError::Config(e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FrontError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| FrontError::Config(e.to_string()))
    }

    fn check(&self) -> Result<()> {
        if let LambdaValue::Named(w) = &self.lambda.value {
            if w != "auto" {
                return Err(FrontError::Config(format!("lambda.value must be a number or \"auto\", got {w:?}")));
            }
        }
        if self.lambda.modes.iter().any(|m| !(m.weight >= 0.0)) {
            return Err(FrontError::Config("lambda.modes weights must be non-negative".into()));
        }
        if self.output.snapshots < 2 || self.output.stride == 0 {
            return Err(FrontError::Config("output.snapshots >= 2 and output.stride >= 1 required".into()));
        }
        if !(self.output.width_eps > 0.0 && self.output.width_eps < 0.5) {
            return Err(FrontError::Config("output.width_eps must lie in (0, 1/2)".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form (defaults filled in).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn verify_settings(&self) -> VerifySettings {
        let v = &self.verify;
        VerifySettings {
            sandwich_tol: v.sandwich_tol,
            monotone_tol: v.monotone_tol,
            width_eps: self.output.width_eps,
            width_form: v.width_form,
            ratio_threshold: v.ratio_threshold,
            ratio_tol: v.ratio_tol,
            limits_tol: v.limits_tol,
            region: InteriorRegion {
                boundary_nodes: v.boundary_nodes,
                tail_fraction: v.tail_fraction,
                initial_fraction: v.initial_fraction,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[reaction]
model = "cubic"
beta = 1.0
a = { kind = "sine", base = 1.0, amplitude = 0.05, wavenumber = 1.0 }

[domain]
x_left = -60.0
x_right = 60.0
dx = 0.005
"#;

    #[test]
    fn defaults_fill_in() {
        let s = Scenario::from_toml_str(MINIMAL).unwrap();
        assert_eq!(s.lambda.value, LambdaValue::Named("auto".into()));
        assert_eq!(s.output.snapshots, 41);
        let spec = s.reaction.to_spec().unwrap();
        assert!((spec.g1.value(0.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = Scenario::from_toml_str(MINIMAL).unwrap();
        let b = Scenario::from_toml_str(&a.to_toml().unwrap()).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = Scenario::from_toml_str(&MINIMAL.replace("beta = 1.0", "beta = 0.5")).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn rejects_unknown_fields_and_words() {
        assert!(Scenario::from_toml_str(&format!("{MINIMAL}\n[scheme]\nbogus = 1\n")).is_err());
        assert!(Scenario::from_toml_str(&format!("{MINIMAL}\n[lambda]\nvalue = \"max\"\n")).is_err());
    }

    #[test]
    fn fixed_lambda_and_modes() {
        let s = Scenario::from_toml_str(&format!(
            "{MINIMAL}\n[lambda]\nvalue = 1.01\nmodes = [{{ lambda = 1.01, weight = 0.5 }}]\n"
        ))
        .unwrap();
        assert_eq!(s.lambda.value, LambdaValue::Fixed(1.01));
        assert_eq!(s.lambda.modes.len(), 1);
    }
}
