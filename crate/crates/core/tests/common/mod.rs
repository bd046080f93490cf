#![allow(dead_code)]

use frontlab_core::pipeline::{self, PipelineState, Stage};
use frontlab_core::reaction::{validate_spec, CoefficientField, ReactionSpec, SampleGrid, ValidatedSpec};
use frontlab_core::scenario::Scenario;
use frontlab_core::Real;

pub fn validated(spec: ReactionSpec) -> ValidatedSpec {
    let report = validate_spec(&spec, &SampleGrid::new(-100.0, 100.0)).expect("validation runs");
    ValidatedSpec::new(spec, &report).expect("hypotheses hold")
}

pub fn constant(value: Real) -> CoefficientField {
    CoefficientField::Constant { value }
}

pub fn gaussian() -> CoefficientField {
    CoefficientField::Gaussian {
        base: 1.0,
        amplitude: 0.5,
        width: 1.0,
    }
}

/// Homogeneous KPP, `λ = 1.5`, on `[-20, 20]`.
pub fn kpp_scenario(dx: Real, dt: Real) -> Scenario {
    Scenario::from_toml_str(&format!(
        r#"
[reaction]
model = "kpp"
a = {{ kind = "constant", value = 1.0 }}

[lambda]
value = 1.5

[domain]
x_left = -20.0
x_right = 20.0
dx = {dx:e}

[scheme]
dt = {{ rule = "fixed", dt = {dt:e} }}
"#
    ))
    .expect("scenario parses")
}

pub fn simulate(scenario: Scenario) -> PipelineState {
    let st = pipeline::run(scenario, Stage::Simulate);
    assert!(st.error.is_none(), "{:?}", st.error);
    st
}

pub fn max_abs_diff(a: impl IntoIterator<Item = Real>, b: impl IntoIterator<Item = Real>) -> Real {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, Real::max)
}
