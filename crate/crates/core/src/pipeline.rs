//! Staged execution of a scenario: validate, spectrum, eigenfunction, profile,
//! simulate, verify. Every stage records gate checks; a failed gate stops the run
//! before any later stage is launched.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::linearized::{gradient_certificate, EnvelopeFields, LinearizedSolution};
use crate::pde::{self, default_time_window, DiagnosticRow, FrontSolution, SimulationConfig, SpeedEstimate, TimeStep};
use crate::profile::{transforms_for, ProfileTransforms, TransformCertificates, WaveProfile};
use crate::reaction::{nu_penalty, threshold_rhs, validate_spec, ValidatedSpec, ValidationReport};
use crate::scenario::{LambdaValue, ModeWeight, ReactionModel, Scenario};
use crate::spectral::{default_window, eigenfunction, sup_spectrum, EigenSettings, Eigenpair, SpectralBound};
use crate::verify::{certify, CertificateReport, Provenance};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Validate,
    Spectrum,
    Eigenfunction,
    Profile,
    Simulate,
    Verify,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Validate,
        Stage::Spectrum,
        Stage::Eigenfunction,
        Stage::Profile,
        Stage::Simulate,
        Stage::Verify,
    ];
}

/// One pass/fail item recorded by a stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCheck {
    pub stage: Stage,
    pub name: String,
    pub value: Real,
    pub tolerance: Real,
    pub passed: bool,
    /// Non-gating checks are reported but never stop the pipeline.
    pub gating: bool,
    pub detail: String,
}

/// Relative margin above `λ0` enforced by the automatic choice of `λ`.
pub const AUTO_MARGIN: Real = 1e-3;
pub const EIGEN_RESIDUAL_TOL: Real = 1e-6;
pub const SLACK_TOL: Real = 1e-10;
pub const ODE_RESIDUAL_TOL: Real = 1e-8;
pub const SUPER_RESIDUAL_TOL: Real = 1e-6;
pub const SUB_INEQUALITY_TOL: Real = 1e-8;
pub const SLOPE_TOL: Real = 1e-6;
pub const FAR_LIMIT_TOL: Real = 1e-4;

/// Everything produced so far; later fields are `None` after an early stop.
#[derive(Debug)]
pub struct PipelineState {
    pub scenario: Scenario,
    pub hash: String,
    pub validation: Option<ValidationReport>,
    pub spec: Option<ValidatedSpec>,
    pub spectrum: Option<SpectralBound>,
    pub threshold_rhs: Option<Real>,
    pub modes: Vec<ModeWeight>,
    pub eigenpairs: Vec<Eigenpair>,
    pub linear: Option<LinearizedSolution>,
    pub super_profile: Option<WaveProfile>,
    pub sub_profile: Option<WaveProfile>,
    pub transforms: Option<ProfileTransforms>,
    pub transform_certificates: Option<TransformCertificates>,
    pub time_window: Option<(Real, Real)>,
    pub simulation: Option<FrontSolution>,
    pub speed: Option<SpeedEstimate>,
    pub diagnostics: Vec<DiagnosticRow>,
    pub report: Option<CertificateReport>,
    pub gates: Vec<GateCheck>,
    pub completed: Vec<Stage>,
    pub error: Option<FrontError>,
}

impl PipelineState {
    fn new(scenario: Scenario) -> Self {
        let hash = scenario.hash();
        Self {
            scenario,
            hash,
            validation: None,
            spec: None,
            spectrum: None,
            threshold_rhs: None,
            modes: Vec::new(),
            eigenpairs: Vec::new(),
            linear: None,
            super_profile: None,
            sub_profile: None,
            transforms: None,
            transform_certificates: None,
            time_window: None,
            simulation: None,
            speed: None,
            diagnostics: Vec::new(),
            report: None,
            gates: Vec::new(),
            completed: Vec::new(),
            error: None,
        }
    }

    /// No error, every gating check passed, and every certificate passed.
    pub fn all_passed(&self) -> bool {
        self.error.is_none()
            && self.gates.iter().all(|g| g.passed || !g.gating)
            && self.report.as_ref().is_none_or(|r| r.all_passed())
    }

    pub fn fields(&self) -> Option<EnvelopeFields> {
        Some(EnvelopeFields::new(self.linear.clone()?, self.transforms.clone()?))
    }

    fn gate(&mut self, stage: Stage, name: &str, value: Real, tolerance: Real, passed: bool, detail: String) {
        self.gates.push(GateCheck {
            stage,
            name: name.into(),
            value,
            tolerance,
            passed,
            gating: true,
            detail,
        });
    }

    fn note(&mut self, stage: Stage, name: &str, value: Real, tolerance: Real, passed: bool, detail: String) {
        self.gates.push(GateCheck {
            stage,
            name: name.into(),
            value,
            tolerance,
            passed,
            gating: false,
            detail,
        });
    }

    fn first_failed_gate(&self, stage: Stage) -> Option<&GateCheck> {
        self.gates.iter().find(|g| g.stage == stage && g.gating && !g.passed)
    }

    fn spec_ref(&self) -> &ValidatedSpec {
        self.spec.as_ref().expect("validate stage ran")
    }
}

/// Runs stages in order up to and including `upto`.
pub fn run(scenario: Scenario, upto: Stage) -> PipelineState {
    let mut st = PipelineState::new(scenario);
    for stage in Stage::ALL {
        if stage > upto {
            break;
        }
        let outcome = match stage {
            Stage::Validate => stage_validate(&mut st),
            Stage::Spectrum => stage_spectrum(&mut st),
            Stage::Eigenfunction => stage_eigen(&mut st),
            Stage::Profile => stage_profile(&mut st),
            Stage::Simulate => stage_simulate(&mut st),
            Stage::Verify => stage_verify(&mut st),
        };
        let outcome = outcome.and_then(|()| match st.first_failed_gate(stage) {
            Some(g) => Err(FrontError::HypothesisViolation(format!(
                "{:?} certificate `{}` failed: {}",
                stage, g.name, g.detail
            ))),
            None => Ok(()),
        });
        match outcome {
            Ok(()) => st.completed.push(stage),
            Err(e) => {
                st.error = Some(e);
                break;
            }
        }
    }
    st
}

fn stage_validate(st: &mut PipelineState) -> Result<()> {
    let spec = st.scenario.reaction.to_spec()?;
    let report = validate_spec(&spec, &st.scenario.validation.grid())?;
    for h in &report.hypotheses {
        st.gate(Stage::Validate, &h.name, h.worst_violation, 0.0, h.passed, h.detail.clone());
    }
    let ok = report.all_passed();
    st.validation = Some(report.clone());
    if ok {
        st.spec = Some(ValidatedSpec::new(spec, &report)?);
    }
    Ok(())
}

fn stage_spectrum(st: &mut PipelineState) -> Result<()> {
    let sec = st.scenario.spectrum;
    let spec = st.spec_ref();
    let bound = sup_spectrum(spec, sec.window, sec.dx)?;
    let rhs = threshold_rhs(spec)?;
    let b = *spec.bounds();
    st.gate(
        Stage::Spectrum,
        "lambda0_in_coefficient_range",
        bound.lambda0,
        0.0,
        bound.lambda0 >= b.a_minus && bound.lambda0 <= b.a_plus,
        format!("lambda0 = {:.9} in [a-, a+] = [{}, {}]", bound.lambda0, b.a_minus, b.a_plus),
    );
    st.spectrum = Some(bound);
    st.threshold_rhs = Some(rhs);
    Ok(())
}

fn threshold_error(st: &PipelineState, detail: String) -> FrontError {
    let b = st.spec_ref().bounds();
    FrontError::Threshold {
        detail: format!(
            "{detail}; the construction needs lambda0 < lambda <= 2a- - 2 sqrt(nu-1)/(sqrt(nu)+sqrt(nu-1)) a+{}",
            if st.spec_ref().has_divergence_form() {
                " (with 2a- replaced by lambda1)"
            } else {
                ""
            }
        ),
        lambda0: st.spectrum.as_ref().map_or(Real::NAN, |s| s.lambda0),
        nu: b.nu,
        rhs: st.threshold_rhs.unwrap_or(Real::NAN),
    }
}

/// `λ` values and weights requested by the scenario, checked against the threshold.
fn select_modes(st: &PipelineState) -> Result<Vec<ModeWeight>> {
    let spec = st.spec_ref();
    let lambda0 = st.spectrum.as_ref().expect("spectrum ran").lambda0;
    let rhs = st.threshold_rhs.expect("spectrum ran");
    let b = spec.bounds();
    let lead = if spec.has_divergence_form() { b.lambda1 } else { 2.0 * b.a_minus };
    let margin = st.scenario.eigen.margin;
    let check = |lambda: Real| -> Result<()> {
        if !(lambda > lambda0 * (1.0 + margin)) || lambda > rhs {
            return Err(threshold_error(
                st,
                format!("lambda = {lambda} outside (lambda0 (1 + {margin}), {rhs}]"),
            ));
        }
        Ok(())
    };
    if !st.scenario.lambda.modes.is_empty() {
        for m in &st.scenario.lambda.modes {
            check(m.lambda)?;
        }
        return Ok(st.scenario.lambda.modes.clone());
    }
    let lambda = match &st.scenario.lambda.value {
        LambdaValue::Fixed(l) => *l,
        LambdaValue::Named(_) => {
            let top = rhs.min(lead);
            let floor = lambda0 * (1.0 + AUTO_MARGIN);
            if !(floor < top) {
                return Err(threshold_error(
                    st,
                    format!("no admissible lambda: lambda0 (1 + {AUTO_MARGIN}) = {floor:.6} is not below {top:.6}"),
                ));
            }
            (lambda0 + 0.5 * (top - lambda0)).max(floor)
        }
    };
    check(lambda)?;
    Ok(vec![ModeWeight { lambda, weight: 1.0 }])
}

fn stage_eigen(st: &mut PipelineState) -> Result<()> {
    let modes = select_modes(st)?;
    let bound = st.spectrum.clone().expect("spectrum ran");
    let sec = st.scenario.eigen;
    let dom = st.scenario.domain;
    let reach = 1.05 * dom.x_left.abs().max(dom.x_right.abs());
    let window = sec.window.unwrap_or_else(|| {
        modes
            .iter()
            .map(|m| default_window(m.lambda - bound.lambda0))
            .fold(reach, Real::max)
    });
    let settings = EigenSettings {
        window: Some(window),
        dx: sec.dx,
        margin: sec.margin,
        ..EigenSettings::default()
    };
    let spec = st.spec.clone().expect("validate stage ran");
    let mut pairs = Vec::with_capacity(modes.len());
    for m in &modes {
        let p = eigenfunction(&spec, m.lambda, &bound, &settings)?;
        let tag = format!("lambda={}", m.lambda);
        st.gate(
            Stage::Eigenfunction,
            &format!("eigen_residual[{tag}]"),
            p.residual.max_relative,
            EIGEN_RESIDUAL_TOL,
            p.residual.max_relative <= EIGEN_RESIDUAL_TOL,
            format!("max relative residual {:.3e} at x = {}", p.residual.max_relative, p.residual.at_x),
        );
        st.gate(
            Stage::Eigenfunction,
            &format!("gradient_bound[{tag}]"),
            p.gradient.global_margin,
            SLACK_TOL,
            p.gradient.passed,
            format!(
                "global margin {:.3e}, pointwise margin {:.3e} at x = {}",
                p.gradient.global_margin, p.gradient.pointwise_margin, p.gradient.at_x
            ),
        );
        if dom.x_left < p.x(0) || dom.x_right > p.x(p.len() - 1) {
            return Err(FrontError::Window(format!(
                "domain [{}, {}] exceeds the eigenfunction window [{}, {}]",
                dom.x_left,
                dom.x_right,
                p.x(0),
                p.x(p.len() - 1)
            )));
        }
        pairs.push((p, m.weight));
    }
    st.eigenpairs = pairs.iter().map(|(p, _)| p.clone()).collect();
    st.linear = Some(LinearizedSolution::new(pairs)?);
    st.modes = modes;
    Ok(())
}

fn stage_profile(st: &mut PipelineState) -> Result<()> {
    let spec = st.spec.clone().expect("validate stage ran");
    let alpha = st.linear.as_ref().expect("eigenfunction stage ran").alpha;
    let nu = spec.bounds().nu;
    let cap = 1.0 - nu_penalty(nu)?;
    if alpha > cap * (1.0 + 1e-12) {
        return Err(threshold_error(
            st,
            format!("alpha = {alpha} exceeds (sqrt(nu) - sqrt(nu-1))^2 = {cap}"),
        ));
    }
    let (sup, sub, tr) = transforms_for(&spec.g0, &spec.g1, alpha.min(cap), nu, &st.scenario.profile)?;
    let tc = tr.certificates(4001);
    let s = Stage::Profile;
    let (pc, qc) = (sup.certificates, sub.certificates);
    st.gate(s, "super_triangle", pc.triangle_margin, -SLACK_TOL, pc.triangle_margin >= -SLACK_TOL,
        format!("min(-V, 1 - U, V + cU/2) = {:.3e}", pc.triangle_margin));
    st.gate(s, "super_boundary_flux", pc.boundary_flux_margin, -SLACK_TOL, pc.boundary_flux_margin >= -SLACK_TOL,
        format!("flux through V = -cU/2 is {:.3e} at worst", pc.boundary_flux_margin));
    st.gate(s, "super_convexity", pc.convexity_margin, -SLACK_TOL, pc.convexity_margin >= -SLACK_TOL,
        format!("min(-U' - sqrt(alpha) g1(U)) = {:.3e}", pc.convexity_margin));
    st.gate(s, "super_ode_residual", pc.ode_residual, ODE_RESIDUAL_TOL, pc.ode_residual <= ODE_RESIDUAL_TOL,
        format!("max |U'' + cU' + g1(U)| = {:.3e}", pc.ode_residual));
    st.gate(s, "sub_concavity", qc.convexity_margin, -SLACK_TOL, qc.convexity_margin >= -SLACK_TOL,
        format!("min(sqrt(alpha) g0(U) + U') = {:.3e}", qc.convexity_margin));
    st.gate(s, "sub_ode_residual", qc.ode_residual, ODE_RESIDUAL_TOL, qc.ode_residual <= ODE_RESIDUAL_TOL,
        format!("max |U'' + cU' + g0(U)| = {:.3e}", qc.ode_residual));
    st.gate(s, "h_residual", tc.super_residual, SUPER_RESIDUAL_TOL, tc.super_residual <= SUPER_RESIDUAL_TOL,
        format!("max |alpha v^2 h'' - v h' + g1(h)| = {:.3e} on (0, v_max]", tc.super_residual));
    // h'' comes from the interpolant's second derivative, like the residual above.
    st.gate(s, "h_convex", tc.super_convexity, -SUPER_RESIDUAL_TOL, tc.super_convexity >= -SUPER_RESIDUAL_TOL,
        format!("min alpha v^2 h'' = {:.3e}", tc.super_convexity));
    st.gate(s, "h_tilde_concave", tc.sub_concavity, SUPER_RESIDUAL_TOL, tc.sub_concavity <= SUPER_RESIDUAL_TOL,
        format!("max alpha v^2 h~'' = {:.3e}", tc.sub_concavity));
    st.gate(s, "h_tilde_inequality", tc.sub_inequality, SUB_INEQUALITY_TOL, tc.sub_inequality <= SUB_INEQUALITY_TOL,
        format!("max (v h~' - alpha v^2 h~'' - g0(h~)) = {:.3e}", tc.sub_inequality));
    st.gate(s, "h_tilde_below_identity", tc.sub_below_identity, SLACK_TOL, tc.sub_below_identity <= SLACK_TOL,
        format!("max (h~(v) - v) = {:.3e}", tc.sub_below_identity));
    st.gate(s, "h_above_identity", tc.super_above_identity, SLACK_TOL, tc.super_above_identity <= SLACK_TOL,
        format!("max (v - h(v)) on [0, v_max] = {:.3e}", tc.super_above_identity));
    let dh = (tc.h_slope_at_zero - 1.0).abs();
    st.gate(s, "h_slope_at_zero", dh, SLOPE_TOL, dh <= SLOPE_TOL, format!("h'(0) = {:.12}", tc.h_slope_at_zero));
    let dht = (tc.h_tilde_slope_at_zero - 1.0).abs();
    st.gate(s, "h_tilde_slope_at_zero", dht, SLOPE_TOL, dht <= SLOPE_TOL,
        format!("h~'(0) = {:.12}", tc.h_tilde_slope_at_zero));
    let lim = 1.0 - tr.h_tilde(tr.v_tilde_max());
    st.gate(s, "h_tilde_limit", lim, FAR_LIMIT_TOL, lim <= FAR_LIMIT_TOL,
        format!("1 - h~ = {lim:.3e} at the largest sampled v = {:.3e}", tr.v_tilde_max()));
    let far = (1.0 - tc.h_tilde_far).abs();
    st.note(s, "h_tilde_far_limit", far, FAR_LIMIT_TOL, far <= FAR_LIMIT_TOL,
        format!("1 - h~(e^10) = {far:.3e}; the limit 1 is approached at rate v^(-r/sqrt(alpha))"));
    st.super_profile = Some(sup);
    st.sub_profile = Some(sub);
    st.transforms = Some(tr);
    st.transform_certificates = Some(tc);
    Ok(())
}

/// `SimulationConfig` of the scenario once the envelope fields are known.
pub fn simulation_config(scenario: &Scenario, fields: &EnvelopeFields) -> Result<SimulationConfig> {
    let d = scenario.domain;
    let s = scenario.scheme;
    let (t0, t1) = match (s.t0, s.t1) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            let (da, db) = default_time_window(fields, d.x_left, d.x_right)?;
            (a.unwrap_or(da), b.unwrap_or(db))
        }
    };
    Ok(SimulationConfig {
        x_left: d.x_left,
        x_right: d.x_right,
        dx: d.dx,
        t0,
        t1,
        dt: s.dt,
        snapshots: scenario.output.snapshots,
        reaction_scale: s.reaction_scale,
        exhaust_margin: s.exhaust_margin,
    })
}

fn stage_simulate(st: &mut PipelineState) -> Result<()> {
    let fields = st.fields().expect("profile stage ran");
    let spec = st.spec.clone().expect("validate stage ran");
    let config = simulation_config(&st.scenario, &fields)?;
    if st.modes.len() > 1 {
        // The gradient bound of a superposition depends on t; scan the slab before launching.
        let ts: Vec<Real> = (0..=20).map(|k| config.t0 + (config.t1 - config.t0) * k as Real / 20.0).collect();
        let n = 401;
        let xs: Vec<Real> = (0..n)
            .map(|i| config.x_left + (config.x_right - config.x_left) * i as Real / (n - 1) as Real)
            .collect();
        let r = gradient_certificate(&spec, &fields.linear, &ts, &xs, SLACK_TOL)?;
        st.gate(Stage::Simulate, "superposition_gradient", r.worst_margin, SLACK_TOL, r.passed,
            format!("max (A v_x^2 - alpha a v^2)/(alpha a v^2) = {:.3e} at (t, x) = ({}, {})", r.worst_margin, r.at_t, r.at_x));
        if let Some(g) = st.first_failed_gate(Stage::Simulate) {
            return Err(FrontError::HypothesisViolation(g.detail.clone()));
        }
    }
    st.time_window = Some((config.t0, config.t1));
    let sol = pde::run(&spec, &fields, &config)?;
    st.note(Stage::Simulate, "significant_clamps", sol.meta.significant_clamps as Real, 0.0,
        sol.meta.significant_clamps == 0, format!("{} clamps, {} beyond rounding", sol.meta.clamps, sol.meta.significant_clamps));
    st.diagnostics = pde::diagnostics(&sol, st.scenario.output.width_eps);
    st.speed = pde::speed_estimate(&sol).ok();
    st.simulation = Some(sol);
    Ok(())
}

fn stage_verify(st: &mut PipelineState) -> Result<()> {
    let sol = st.simulation.as_ref().expect("simulate stage ran");
    let tr = st.transforms.as_ref().expect("profile stage ran");
    let l = st.linear.as_ref().expect("eigenfunction stage ran").doubling_length;
    let provenance = Provenance {
        config_hash: st.hash.clone(),
        dx: sol.meta.dx,
        dt: sol.meta.dt,
        t0: st.time_window.map_or(Real::NAN, |w| w.0),
    };
    st.report = Some(certify(sol, tr, l, &st.scenario.verify_settings(), provenance)?);
    Ok(())
}

/// Certifies a stored solution. `st` must have completed the profile stage and must
/// come from the scenario that produced `sol`.
pub fn verify_stored(mut st: PipelineState, sol: FrontSolution, time_window: (Real, Real)) -> PipelineState {
    if st.error.is_some() {
        return st;
    }
    if !st.completed.contains(&Stage::Profile) {
        st.error = Some(FrontError::Config("stored solutions are verified after the profile stage".into()));
        return st;
    }
    st.time_window = Some(time_window);
    st.diagnostics = pde::diagnostics(&sol, st.scenario.output.width_eps);
    st.speed = pde::speed_estimate(&sol).ok();
    st.simulation = Some(sol);
    st.completed.push(Stage::Simulate);
    match stage_verify(&mut st) {
        Ok(()) => st.completed.push(Stage::Verify),
        Err(e) => st.error = Some(e),
    }
    st
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Lambda,
    Beta,
    AAmplitude,
    Mesh,
}

impl std::str::FromStr for SweepParameter {
    type Err = FrontError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(Self::Lambda),
            "beta" => Ok(Self::Beta),
            "a-amplitude" | "a_amplitude" => Ok(Self::AAmplitude),
            "mesh" => Ok(Self::Mesh),
            _ => Err(FrontError::Config(format!(
                "unknown sweep parameter {s:?}; expected lambda, beta, a-amplitude or mesh"
            ))),
        }
    }
}

/// Copy of `base` with one parameter replaced. A mesh change scales a fixed `dt` with `dx^2`.
pub fn vary(base: &Scenario, parameter: SweepParameter, value: Real) -> Scenario {
    let mut s = base.clone();
    match parameter {
        SweepParameter::Lambda => {
            s.lambda.value = LambdaValue::Fixed(value);
            s.lambda.modes.clear();
        }
        SweepParameter::Beta => {
            s.reaction.beta = value;
            if s.reaction.model == ReactionModel::Kpp && value != 0.0 {
                s.reaction.model = ReactionModel::Cubic;
            }
        }
        SweepParameter::AAmplitude => s.reaction.a = s.reaction.a.with_amplitude(value),
        SweepParameter::Mesh => {
            let ratio = value / s.domain.dx;
            s.domain.dx = value;
            if let TimeStep::Fixed { dt } = s.scheme.dt {
                s.scheme.dt = TimeStep::Fixed { dt: dt * ratio * ratio };
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: Real,
    pub lambda: Real,
    pub speed: Real,
    pub max_width: Real,
    pub width_bound: Real,
    pub worst_sandwich: Real,
    pub passed: bool,
    pub error: Option<String>,
}

/// Runs every variant through verification, in parallel; rows keep the order of `values`.
pub fn sweep(base: &Scenario, parameter: SweepParameter, values: &[Real]) -> Vec<SweepRow> {
    values
        .par_iter()
        .map(|&value| {
            let st = run(vary(base, parameter, value), Stage::Verify);
            let width = st.report.as_ref().and_then(|r| r.get("width"));
            SweepRow {
                value,
                lambda: st.modes.iter().map(|m| m.lambda).fold(Real::NAN, Real::max),
                speed: st.speed.map_or(Real::NAN, |s| s.speed),
                max_width: width.and_then(|w| w.values.get("max_width").copied()).unwrap_or(Real::NAN),
                width_bound: width.and_then(|w| w.values.get("bound").copied()).unwrap_or(Real::NAN),
                worst_sandwich: st
                    .report
                    .as_ref()
                    .and_then(|r| r.get("sandwich"))
                    .map_or(Real::NAN, |r| r.worst_margin),
                passed: st.all_passed(),
                error: st.error.as_ref().map(|e| e.to_string()),
            }
        })
        .collect()
}
