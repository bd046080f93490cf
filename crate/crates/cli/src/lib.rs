//! Command layer of `frontlab`: runs pipeline stages for a scenario file and writes the
//! run directory.

pub mod artifact;
pub mod plot;
pub mod schema;
pub mod state;

use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use frontlab_core::pde::{envelope_snapshot, FrontSolution, Grid};
use frontlab_core::pipeline::{self, PipelineState, Stage, SweepParameter, SweepRow};
use frontlab_core::scenario::Scenario;
use frontlab_core::Real;

use artifact::{RunDir, SimulationSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Spectrum,
    Eigenfunction,
    Profile,
    Simulate,
    /// Certifies the solution stored in the run directory.
    Verify,
    Pipeline,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Validate => "validate",
            Self::Spectrum => "spectrum",
            Self::Eigenfunction => "eigenfunction",
            Self::Profile => "profile",
            Self::Simulate => "simulate",
            Self::Verify => "verify",
            Self::Pipeline => "pipeline",
        }
    }

    fn last_stage(self) -> Stage {
        match self {
            Self::Validate => Stage::Validate,
            Self::Spectrum => Stage::Spectrum,
            Self::Eigenfunction => Stage::Eigenfunction,
            Self::Profile => Stage::Profile,
            Self::Simulate => Stage::Simulate,
            Self::Verify | Self::Pipeline => Stage::Verify,
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<(Scenario, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let scenario = Scenario::from_toml_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((scenario, text))
}

/// Runs `command` and writes its artifacts under `out`.
pub fn execute(command: Command, config: &Path, out: &Path) -> Result<PipelineState> {
    let (scenario, text) = load_scenario(config)?;
    let dir = RunDir::create(out)?;
    let st = match command {
        Command::Verify => verify_run_dir(scenario, &dir)?,
        _ => pipeline::run(scenario, command.last_stage()),
    };
    artifact::write_stages(&dir, &st, command != Command::Verify)?;
    artifact::write_common(&dir, command.name(), &text, &st)?;
    Ok(st)
}

fn verify_run_dir(scenario: Scenario, dir: &RunDir) -> Result<PipelineState> {
    let summary_path = dir.path(artifact::RUN_SUMMARY);
    let state_path = dir.path(artifact::STATE);
    if !summary_path.exists() || !state_path.exists() {
        bail!(
            "{} holds no simulation; run `frontlab simulate` with the same --out first",
            dir.root.display()
        );
    }
    let summary: SimulationSummary = serde_json::from_reader(BufReader::new(File::open(&summary_path)?))
        .with_context(|| format!("reading {}", summary_path.display()))?;
    let hash = scenario.hash();
    if summary.config_hash != hash {
        bail!(
            "run directory was produced by config {} but --config hashes to {}",
            summary.config_hash,
            hash
        );
    }
    let stored = state::read_state(BufReader::new(File::open(&state_path)?))?;
    let st = pipeline::run(scenario, Stage::Profile);
    if st.error.is_some() {
        return Ok(st);
    }
    let fields = st.fields().expect("profile stage completed");
    let d = st.scenario.domain;
    let grid = Grid::new(d.x_left, d.x_right, d.dx)?;
    if grid.n != stored.n || grid.x0 != stored.x0 || grid.dx != stored.dx {
        bail!("stored fields do not match the grid of the config");
    }
    let snapshots = stored
        .times
        .iter()
        .zip(stored.fields)
        .map(|(&t, u)| envelope_snapshot(&fields, &grid, t, u))
        .collect::<frontlab_core::error::Result<Vec<_>>>()?;
    let sol = FrontSolution {
        grid,
        snapshots,
        meta: summary.meta,
    };
    Ok(pipeline::verify_stored(st, sol, summary.time_window))
}

/// Runs every variant of a sweep and writes `sweep.csv`.
pub fn execute_sweep(config: &Path, out: &Path, parameter: SweepParameter, values: &[Real]) -> Result<Vec<SweepRow>> {
    let (scenario, text) = load_scenario(config)?;
    let dir = RunDir::create(out)?;
    let rows = pipeline::sweep(&scenario, parameter, values);
    dir.write_json(artifact::SCHEMA, &schema::TABLES)?;
    dir.write_text(artifact::CONFIG_COPY, &text)?;
    let name = serde_json::to_value(parameter)?
        .as_str()
        .unwrap_or("value")
        .to_string();
    artifact::write_sweep(&dir, &name, &rows, scenario.output.plots)?;
    Ok(rows)
}

/// Short report for the terminal.
pub fn report(st: &PipelineState) -> String {
    let mut out = String::new();
    if let Some(b) = &st.spectrum {
        out.push_str(&format!(
            "lambda0 = {:.9}  threshold rhs = {:.9}\n",
            b.lambda0,
            st.threshold_rhs.unwrap_or(Real::NAN)
        ));
    }
    if let Some(l) = &st.linear {
        out.push_str(&format!(
            "lambda = {:?}  alpha = {:.9}  L = {:.6}\n",
            l.lambdas(),
            l.alpha,
            l.doubling_length
        ));
    }
    if let Some(tr) = &st.transforms {
        out.push_str(&format!("c = {:.9}  v_max = {:.6}\n", tr.c, tr.v_max));
    }
    if let Some(sp) = &st.speed {
        out.push_str(&format!("measured speed = {:.6}\n", sp.speed));
    }
    out.push('\n');
    match &st.report {
        Some(r) => out.push_str(&artifact::certificate_table(r, &st.gates)),
        None => out.push_str(&artifact::gate_table(&st.gates)),
    }
    if let Some(e) = &st.error {
        out.push_str(&format!("\nerror: {e}\n"));
    }
    out.push_str(if st.all_passed() { "\nresult: PASS\n" } else { "\nresult: FAIL\n" });
    out
}
