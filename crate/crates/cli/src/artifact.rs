//! Run directory layout: config copy, CSV tables, JSON summaries, certificate report
//! and SVG figures. Every file has a single writer; nothing is time-stamped, so the
//! same config reproduces the same bytes.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use frontlab_core::pde::{Grid, SchemeMeta, SpeedEstimate};
use frontlab_core::pipeline::{GateCheck, PipelineState, Stage, SweepRow};
use frontlab_core::reaction::ReactionBounds;
use frontlab_core::spectral::{EigenResidual, GradientBound, SpectralBound};
use frontlab_core::verify::{width_bound, CertificateReport, Status, WidthBound};
use frontlab_core::Real;
use serde::{Deserialize, Serialize};

use crate::plot::{Chart, Series, PALETTE};
use crate::schema::{self, TableSchema};
use crate::state::write_state;

pub const CONFIG_COPY: &str = "scenario.toml";
pub const RESOLVED_CONFIG: &str = "scenario.resolved.toml";
pub const SCHEMA: &str = "schema.json";
pub const SUMMARY: &str = "summary.json";
pub const GATES: &str = "gates.json";
pub const VALIDATION: &str = "validation.json";
pub const SPECTRUM: &str = "spectrum.json";
pub const EIGEN_SUMMARY: &str = "eigenfunction.json";
pub const PROFILE_SUMMARY: &str = "profile.json";
pub const RUN_SUMMARY: &str = "run.json";
pub const STATE: &str = "state.bin";
pub const CERTIFICATES: &str = "certificates.json";
pub const CERTIFICATE_TABLE: &str = "certificates.txt";

/// Points per branch in `transforms.csv`.
const TRANSFORM_SAMPLES: usize = 2001;
/// Snapshots drawn in the front figure.
const FRONT_CURVES: usize = 5;

/// Shortest round-trip form of a number, so tables reload bit-exactly.
pub fn fmt(x: Real) -> String {
    format!("{x:e}")
}

pub struct RunDir {
    pub root: PathBuf,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<()> {
        let p = self.path(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Writes `rows` under the header of `table`; every row must match its width.
    pub fn write_table<I>(&self, table: &TableSchema, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let p = self.path(table.file);
        let mut w = csv::Writer::from_path(&p).with_context(|| format!("writing {}", p.display()))?;
        let header = table.header();
        w.write_record(&header)?;
        for row in rows {
            anyhow::ensure!(
                row.len() == header.len(),
                "{}: row of {} fields under a header of {}",
                table.file,
                row.len(),
                header.len()
            );
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_chart(&self, name: &str, chart: &Chart) -> Result<()> {
        self.write_text(name, &chart.to_svg())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub command: String,
    pub config_hash: String,
    pub completed: Vec<Stage>,
    pub error: Option<String>,
    pub failed_gates: Vec<String>,
    pub failed_certificates: Vec<String>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub lambda0: Real,
    pub threshold_rhs: Real,
    pub bounds: ReactionBounds,
    pub spectrum: SpectralBound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSummary {
    pub lambda: Real,
    pub weight: Real,
    pub alpha: Real,
    #[serde(rename = "L")]
    pub doubling_length: Real,
    pub window: Real,
    pub residual: EigenResidual,
    pub gradient: GradientBound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSummary {
    pub lambda: Real,
    pub lambda0: Real,
    pub alpha: Real,
    #[serde(rename = "L")]
    pub doubling_length: Real,
    /// Largest relative residual among the modes.
    pub residual: Real,
    pub modes: Vec<ModeSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileCertificateSummary {
    pub triangle: Real,
    pub convexity: Real,
    pub residual: Real,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub alpha: Real,
    pub c: Real,
    pub s0: Real,
    #[serde(rename = "A_tail")]
    pub a_tail: Real,
    pub vmax: Real,
    pub v_tilde_max: Real,
    pub slopes_at_zero: (Real, Real),
    pub certificates: ProfileCertificateSummary,
    pub sub_certificates: ProfileCertificateSummary,
    pub transforms: frontlab_core::profile::TransformCertificates,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub config_hash: String,
    pub grid: Grid,
    pub time_window: (Real, Real),
    pub snapshot_times: Vec<Real>,
    pub meta: SchemeMeta,
    pub speed: Option<SpeedEstimate>,
    pub width_bound: Option<WidthBound>,
}

pub fn run_summary(command: &str, st: &PipelineState) -> RunSummary {
    RunSummary {
        command: command.into(),
        config_hash: st.hash.clone(),
        completed: st.completed.clone(),
        error: st.error.as_ref().map(|e| e.to_string()),
        failed_gates: st
            .gates
            .iter()
            .filter(|g| g.gating && !g.passed)
            .map(|g| g.name.clone())
            .collect(),
        failed_certificates: st
            .report
            .iter()
            .flat_map(|r| r.records.iter())
            .filter(|r| !r.passed())
            .map(|r| r.name.clone())
            .collect(),
        all_passed: st.all_passed(),
    }
}

/// Schema, config copies, gates and summary; written for every command.
pub fn write_common(dir: &RunDir, command: &str, config_text: &str, st: &PipelineState) -> Result<()> {
    dir.write_json(SCHEMA, &schema::TABLES)?;
    dir.write_text(CONFIG_COPY, config_text)?;
    dir.write_text(RESOLVED_CONFIG, &st.scenario.to_toml()?)?;
    dir.write_json(GATES, &st.gates)?;
    dir.write_json(SUMMARY, &run_summary(command, st))
}

/// Everything the stages of `st` produced. `with_state` controls the binary fields file.
pub fn write_stages(dir: &RunDir, st: &PipelineState, with_state: bool) -> Result<()> {
    if let Some(v) = &st.validation {
        dir.write_json(VALIDATION, v)?;
    }
    if let (Some(b), Some(spec)) = (&st.spectrum, &st.spec) {
        dir.write_json(
            SPECTRUM,
            &SpectrumSummary {
                lambda0: b.lambda0,
                threshold_rhs: st.threshold_rhs.unwrap_or(Real::NAN),
                bounds: *spec.bounds(),
                spectrum: b.clone(),
            },
        )?;
    }
    if st.linear.is_some() {
        write_eigen(dir, st)?;
    }
    if st.transforms.is_some() {
        write_profile(dir, st)?;
    }
    if st.simulation.is_some() {
        write_simulation(dir, st, with_state)?;
    }
    if let Some(r) = &st.report {
        dir.write_json(CERTIFICATES, r)?;
        dir.write_text(CERTIFICATE_TABLE, &certificate_table(r, &st.gates))?;
    }
    Ok(())
}

fn write_eigen(dir: &RunDir, st: &PipelineState) -> Result<()> {
    let spec = st.spec.as_ref().expect("eigen stage implies a spec");
    let linear = st.linear.as_ref().expect("checked by caller");
    let mut rows = Vec::new();
    let mut modes = Vec::new();
    for (k, (pair, m)) in st.eigenpairs.iter().zip(&st.modes).enumerate() {
        let (phi, dphi) = (pair.phi(), pair.dphi());
        for (i, x) in pair.xs().into_iter().enumerate() {
            let a = spec.a_at(x);
            rows.push(vec![
                k.to_string(),
                fmt(pair.lambda),
                fmt(x),
                fmt(phi[i]),
                fmt(dphi[i]),
                fmt(a),
                fmt(spec.diffusion_at(x) * dphi[i] * dphi[i]),
                fmt(pair.alpha * a * phi[i] * phi[i]),
            ]);
        }
        modes.push(ModeSummary {
            lambda: pair.lambda,
            weight: m.weight,
            alpha: pair.alpha,
            doubling_length: pair.doubling_length,
            window: pair.window,
            residual: pair.residual,
            gradient: pair.gradient,
        });
    }
    dir.write_table(&schema::EIGENFUNCTION, rows)?;
    dir.write_json(
        EIGEN_SUMMARY,
        &EigenSummary {
            lambda: linear.lambda_max(),
            lambda0: st.spectrum.as_ref().map_or(Real::NAN, |s| s.lambda0),
            alpha: linear.alpha,
            doubling_length: linear.doubling_length,
            residual: modes.iter().map(|m| m.residual.max_relative).fold(0.0, Real::max),
            modes,
        },
    )?;
    if st.scenario.output.plots {
        let mut chart = Chart::new("generalized eigenfunctions", "x", "ln phi");
        for (k, pair) in st.eigenpairs.iter().enumerate() {
            let pts = pair.xs().into_iter().zip(pair.log_phi.iter().copied()).collect();
            chart.push(Series::new(format!("lambda = {}", pair.lambda), pts, PALETTE[k % PALETTE.len()]));
        }
        dir.write_chart("eigenfunction.svg", &chart)?;
    }
    Ok(())
}

fn profile_rows(p: &frontlab_core::profile::WaveProfile, stride: usize) -> Vec<Vec<String>> {
    (0..p.len())
        .step_by(stride)
        .map(|k| vec![fmt(p.s(k)), fmt(p.u[k]), fmt(p.v[k])])
        .collect()
}

fn write_profile(dir: &RunDir, st: &PipelineState) -> Result<()> {
    let sup = st.super_profile.as_ref().expect("profile stage ran");
    let sub = st.sub_profile.as_ref().expect("profile stage ran");
    let tr = st.transforms.as_ref().expect("checked by caller");
    let stride = st.scenario.output.stride;
    dir.write_table(&schema::PROFILE_SUPER, profile_rows(sup, stride))?;
    dir.write_table(&schema::PROFILE_SUB, profile_rows(sub, stride))?;

    let (vmin_h, vmin_ht) = tr.v_min();
    let lo = vmin_h.min(vmin_ht).ln() - 2.0;
    let hi = tr.v_tilde_max().ln();
    let n = TRANSFORM_SAMPLES;
    let mut rows = Vec::with_capacity(n);
    let mut h_pts = Vec::new();
    let mut ht_pts = Vec::new();
    for i in 0..n {
        let lv = lo + (hi - lo) * i as Real / (n - 1) as Real;
        let v = lv.exp();
        let (h, ht) = (tr.h_jet_log(lv), tr.h_tilde_jet_log(lv));
        rows.push(vec![fmt(v), fmt(h.value), fmt(ht.value), fmt(h.d2), fmt(ht.d2)]);
        if v <= 3.0 * tr.v_max {
            h_pts.push((v, h.value.min(1.0)));
            ht_pts.push((v, ht.value));
        }
    }
    dir.write_table(&schema::TRANSFORMS, rows)?;

    let pc = sup.certificates;
    let qc = sub.certificates;
    dir.write_json(
        PROFILE_SUMMARY,
        &ProfileSummary {
            alpha: tr.alpha,
            c: tr.c,
            s0: tr.s0,
            a_tail: sup.a_tail,
            vmax: tr.v_max,
            v_tilde_max: tr.v_tilde_max(),
            slopes_at_zero: tr.slopes_at_zero(),
            certificates: ProfileCertificateSummary {
                triangle: pc.triangle_margin,
                convexity: pc.convexity_margin,
                residual: pc.ode_residual,
            },
            sub_certificates: ProfileCertificateSummary {
                triangle: qc.triangle_margin,
                convexity: qc.convexity_margin,
                residual: qc.ode_residual,
            },
            transforms: st.transform_certificates.expect("profile stage ran"),
        },
    )?;
    if st.scenario.output.plots {
        let mut chart = Chart::new("transforms", "v", "u");
        chart.y_range = Some((0.0, 1.05));
        chart.push(Series::new("min(h(v), 1)", h_pts, PALETTE[1]));
        chart.push(Series::new("h~(v)", ht_pts, PALETTE[0]));
        let top = 3.0 * tr.v_max;
        chart.push(Series::new("v", vec![(0.0, 0.0), (top.min(1.05), top.min(1.05))], "#888").dashed());
        dir.write_chart("transforms.svg", &chart)?;
    }
    Ok(())
}

fn simulation_width_bound(st: &PipelineState) -> Option<WidthBound> {
    let tr = st.transforms.as_ref()?;
    let l = st.linear.as_ref()?.doubling_length;
    width_bound(l, st.scenario.output.width_eps, tr).ok()
}

fn write_simulation(dir: &RunDir, st: &PipelineState, with_state: bool) -> Result<()> {
    let sol = st.simulation.as_ref().expect("checked by caller");
    let stride = st.scenario.output.stride;
    let xs = sol.grid.xs();
    let mut rows = Vec::new();
    for s in &sol.snapshots {
        let mut i = 0;
        while i < xs.len() {
            rows.push(vec![fmt(s.t), fmt(xs[i]), fmt(s.u[i]), fmt(s.w_tilde[i]), fmt(s.w_clamped[i])]);
            // The last node is always included.
            i = if i + 1 == xs.len() { i + 1 } else { (i + stride).min(xs.len() - 1) };
        }
    }
    dir.write_table(&schema::SNAPSHOTS, rows)?;
    dir.write_table(
        &schema::DIAGNOSTICS,
        st.diagnostics
            .iter()
            .map(|d| vec![fmt(d.t), fmt(d.position), fmt(d.width), fmt(d.speed)]),
    )?;
    let bound = simulation_width_bound(st);
    dir.write_json(
        RUN_SUMMARY,
        &SimulationSummary {
            config_hash: st.hash.clone(),
            grid: sol.grid,
            time_window: st.time_window.unwrap_or((Real::NAN, Real::NAN)),
            snapshot_times: sol.times(),
            meta: sol.meta,
            speed: st.speed,
            width_bound: bound,
        },
    )?;
    if with_state {
        let f = File::create(dir.path(STATE))?;
        write_state(BufWriter::new(f), sol)?;
    }
    if !st.scenario.output.plots {
        return Ok(());
    }

    let m = sol.snapshots.len();
    let picks: Vec<usize> = (0..FRONT_CURVES.min(m))
        .map(|k| k * (m - 1) / (FRONT_CURVES.min(m) - 1).max(1))
        .collect();
    let mut fronts = Chart::new("front and envelopes", "x", "u");
    fronts.y_range = Some((-0.02, 1.05));
    for (k, &j) in picks.iter().enumerate() {
        let s = &sol.snapshots[j];
        let color = PALETTE[k % PALETTE.len()];
        let thin = |f: &[Real]| -> Vec<(Real, Real)> {
            (0..xs.len()).step_by(stride).map(|i| (xs[i], f[i])).collect()
        };
        fronts.push(Series::new(format!("u, t = {:.3}", s.t), thin(&s.u), color));
        fronts.push(Series::new("", thin(&s.w_tilde), color).dashed());
        fronts.push(Series::new("", thin(&s.w_clamped), color).dashed());
    }
    dir.write_chart("fronts.svg", &fronts)?;

    let mut pos = Chart::new("front position", "t", "X(t)");
    pos.push(Series::new(
        "X(t)",
        st.diagnostics.iter().map(|d| (d.t, d.position)).collect(),
        PALETTE[0],
    ));
    if let Some(sp) = st.speed {
        let (t0, t1) = (sol.snapshots[0].t, sol.snapshots[m - 1].t);
        let tm = 0.5 * (t0 + t1);
        let xm = st
            .diagnostics
            .iter()
            .filter(|d| d.position.is_finite())
            .map(|d| d.position - sp.speed * (d.t - tm))
            .sum::<Real>()
            / st.diagnostics.iter().filter(|d| d.position.is_finite()).count().max(1) as Real;
        pos.push(
            Series::new(
                format!("slope {:.4}", sp.speed),
                vec![(t0, xm + sp.speed * (t0 - tm)), (t1, xm + sp.speed * (t1 - tm))],
                PALETTE[1],
            )
            .dashed(),
        );
    }
    dir.write_chart("position.svg", &pos)?;

    let mut width = Chart::new(
        &format!("width at eps = {}", st.scenario.output.width_eps),
        "t",
        "width",
    );
    width.push(Series::new(
        "measured",
        st.diagnostics.iter().map(|d| (d.t, d.width)).collect(),
        PALETTE[0],
    ));
    if let Some(b) = bound {
        let (t0, t1) = (sol.snapshots[0].t, sol.snapshots[m - 1].t);
        width.push(Series::new("L_eps (stated)", vec![(t0, b.stated), (t1, b.stated)], PALETTE[1]).dashed());
        width.push(Series::new("L_eps (ratio)", vec![(t0, b.ratio_form), (t1, b.ratio_form)], PALETTE[2]).dashed());
    }
    dir.write_chart("width.svg", &width)?;
    Ok(())
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

/// Plain-text table of the gates and certificates.
pub fn certificate_table(report: &CertificateReport, gates: &[GateCheck]) -> String {
    let mut out = String::new();
    let p = &report.provenance;
    out.push_str(&format!(
        "config {}  dx {}  dt {}  t0 {}\n\n",
        p.config_hash, p.dx, p.dt, p.t0
    ));
    out.push_str(&format!(
        "{:<14} {:<13} {:>13} {:>11}  {:<24} {}\n",
        "certificate", "status", "worst margin", "tolerance", "location (t, x)", "detail"
    ));
    for r in &report.records {
        let loc = r
            .location
            .map_or_else(|| "-".to_string(), |(t, x)| format!("({t:.4}, {x:.4})"));
        out.push_str(&format!(
            "{:<14} {:<13} {:>13.4e} {:>11.3e}  {:<24} {}\n",
            r.name,
            status_word(r.status),
            r.worst_margin,
            r.tolerance,
            loc,
            r.detail
        ));
    }
    out.push('\n');
    out.push_str(&gate_table(gates));
    out
}

pub fn gate_table(gates: &[GateCheck]) -> String {
    let mut out = format!("{:<14} {:<40} {:<6} {:>12} {:>11}\n", "stage", "gate", "status", "value", "tolerance");
    for g in gates {
        let status = match (g.passed, g.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        out.push_str(&format!(
            "{:<14} {:<40} {:<6} {:>12.4e} {:>11.3e}\n",
            format!("{:?}", g.stage).to_lowercase(),
            g.name,
            status,
            g.value,
            g.tolerance
        ));
    }
    out
}

pub fn write_sweep(dir: &RunDir, parameter: &str, rows: &[SweepRow], plots: bool) -> Result<()> {
    dir.write_table(
        &schema::SWEEP,
        rows.iter().map(|r| {
            vec![
                fmt(r.value),
                fmt(r.lambda),
                fmt(r.speed),
                fmt(r.max_width),
                fmt(r.width_bound),
                fmt(r.worst_sandwich),
                r.passed.to_string(),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )?;
    if plots {
        let mut chart = Chart::new("sweep", parameter, "speed");
        chart.push(Series::new("speed", rows.iter().map(|r| (r.value, r.speed)).collect(), PALETTE[0]));
        dir.write_chart("sweep.svg", &chart)?;
    }
    Ok(())
}
