//! Configuration and run modes behind the `hvdc-mc` binary.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use hvdc_mc::acdc::{AcSide, HvdcConfig, Side};
use hvdc_mc::io::{
    read_mc_csv, read_pmu_csv, write_allocation_csv, write_mc_csv, write_te_csv,
    write_trajectory_csv, McRow, PmuRecord,
};
use hvdc_mc::mc::{allocate, AllocationPlan, SweepConfig};
use hvdc_mc::sim::{generate, ScenarioConfig};
use hvdc_mc::{
    EstimatorConfig, McEngine, McEngineConfig, McResult, McStep, TheveninEstimate,
    TheveninEstimator,
};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Simulate,
    Estimate,
    Mc,
    Run,
    Allocate,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// PMU CSV read by `estimate` and `mc`.
    pub input: Option<PathBuf>,
    /// Capacity CSVs read by `allocate`, one per link.
    pub mc_inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    /// Terminal the PMU stream belongs to.
    pub side: Side,
    /// Side whose power is reported.
    pub report_side: Side,
    /// Grid behind the other terminal.
    pub other: AcSide,
    /// kA.
    pub delta_id: f64,
    pub refine_tol: f64,
    /// Present DC current when the input has no `i_d_true` column, kA.
    pub i_d: f64,
    pub boost_start: Option<f64>,
    /// Fixed-point tolerance, kV^2.
    pub mu: f64,
    pub max_iter: usize,
}

impl Default for McSection {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        McSection {
            side: Side::Rectifier,
            report_side: Side::Rectifier,
            other: AcSide::new(1.0, 0.01),
            delta_id: sweep.delta_id,
            refine_tol: sweep.refine_tol,
            i_d: 1.2,
            boost_start: None,
            mu: sweep.fixed_point.mu,
            max_iter: sweep.fixed_point.max_iter,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AllocateSection {
    /// Present transfer of each link, MW, in the order of `paths.mc_inputs`.
    pub initial: Vec<f64>,
    pub shortage: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub paths: Paths,
    pub hvdc: HvdcConfig,
    pub estimator: EstimatorConfig,
    pub scenario: Option<ScenarioConfig>,
    pub mc: McSection,
    pub allocate: AllocateSection,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("computation: {0}")]
    Compute(#[from] hvdc_mc::Error),
}

impl CliError {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Input(_) => 3,
            CliError::Compute(_) => 4,
        }
    }
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(config_err)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| input_err(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        // relative paths are taken from the config file's directory
        let dir = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        if let Some(p) = cfg.paths.input.as_mut() {
            fix(p);
        }
        cfg.paths.mc_inputs.iter_mut().for_each(fix);
        Ok(cfg)
    }

    fn engine_config(&self) -> McEngineConfig {
        McEngineConfig {
            hvdc: self.hvdc,
            estimated_side: self.mc.side,
            other: self.mc.other,
            sweep: SweepConfig {
                delta_id: self.mc.delta_id,
                refine_tol: self.mc.refine_tol,
                report_side: self.mc.report_side,
                fixed_point: hvdc_mc::acdc::FixedPointOptions {
                    mu: self.mc.mu,
                    max_iter: self.mc.max_iter,
                    initial: None,
                },
                ..SweepConfig::default()
            },
            boost_start: self.mc.boost_start,
            i_d_initial: self.mc.i_d,
            estimator: self.estimator,
        }
    }

    fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let mut sc = self
            .scenario
            .clone()
            .ok_or_else(|| CliError::Config("a [scenario] section is required".into()))?;
        if let Some(seed) = self.seed {
            sc.seed = seed;
        }
        sc.terminal_id = self.mc.side.to_string();
        Ok(sc)
    }

    fn input(&self) -> Result<&Path, CliError> {
        let p = self
            .paths
            .input
            .as_deref()
            .ok_or_else(|| CliError::Config("paths.input is required".into()))?;
        if !p.is_file() {
            return Err(CliError::Config(format!(
                "input file {} does not exist",
                p.display()
            )));
        }
        Ok(p)
    }

    /// Check everything the chosen mode needs before any work starts.
    pub fn validate(&self, mode: Mode) -> Result<(), CliError> {
        self.hvdc.validate().map_err(config_err)?;
        self.estimator.validate().map_err(config_err)?;
        McEngine::new(self.engine_config()).map_err(config_err)?;
        match mode {
            Mode::Simulate | Mode::Run => self.scenario()?.validate().map_err(config_err)?,
            Mode::Estimate | Mode::Mc => {
                self.input()?;
            }
            Mode::Allocate => {
                if self.paths.mc_inputs.is_empty() {
                    return Err(CliError::Config("paths.mc_inputs is empty".into()));
                }
                if self.paths.mc_inputs.len() != self.allocate.initial.len() {
                    return Err(CliError::Config(
                        "allocate.initial needs one entry per paths.mc_inputs file".into(),
                    ));
                }
                if let Some(p) = self.paths.mc_inputs.iter().find(|p| !p.is_file()) {
                    return Err(CliError::Config(format!(
                        "input file {} does not exist",
                        p.display()
                    )));
                }
                if self.allocate.shortage.is_nan() || self.allocate.shortage < 0.0 {
                    return Err(CliError::Config(
                        "allocate.shortage must be non-negative".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Files written by a run.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub written: Vec<PathBuf>,
    pub estimates: Vec<TheveninEstimate>,
    pub results: Vec<McResult>,
    pub plan: Option<AllocationPlan>,
}

fn create(out: &Path, name: &str, art: &mut Artifacts) -> Result<BufWriter<File>, CliError> {
    let path = out.join(name);
    let f = File::create(&path).map_err(|e| input_err(&path, e))?;
    art.written.push(path);
    Ok(BufWriter::new(f))
}

fn read_pmu(path: &Path, terminal: &str) -> Result<Vec<PmuRecord>, CliError> {
    let f = File::open(path).map_err(|e| input_err(path, e))?;
    read_pmu_csv(f, terminal).map_err(|e| input_err(path, e))
}

fn estimate(cfg: &RunConfig, rows: &[PmuRecord]) -> Result<Vec<TheveninEstimate>, CliError> {
    let mut est = TheveninEstimator::new(cfg.estimator)?;
    let mut out = Vec::new();
    for row in rows {
        if let Some(te) = est.update(&row.sample)? {
            out.push(te);
        }
    }
    Ok(out)
}

fn capacity(
    cfg: &RunConfig,
    rows: &[PmuRecord],
) -> Result<(Vec<TheveninEstimate>, Vec<McResult>), CliError> {
    let mut engine = McEngine::new(cfg.engine_config())?;
    let (mut tes, mut results) = (Vec::new(), Vec::new());
    for row in rows {
        if let McStep::Result(r) = engine.step(&row.sample, row.truth("i_d"))? {
            tes.extend(r.te);
            results.push(*r);
        }
    }
    Ok((tes, results))
}

/// Execute `mode`, writing outputs under `out`.
pub fn run(cfg: &RunConfig, mode: Mode, out: &Path) -> Result<Artifacts, CliError> {
    cfg.validate(mode)?;
    fs::create_dir_all(out).map_err(|e| input_err(out, e))?;
    let mut art = Artifacts::default();
    let terminal = cfg.mc.side.to_string();

    let rows = match mode {
        Mode::Simulate | Mode::Run => {
            let traj = generate(&cfg.scenario()?)?;
            write_trajectory_csv(create(out, "trajectory.csv", &mut art)?, &traj)?;
            // re-read so later stages see exactly what was written
            let path = art.written.last().expect("just written").clone();
            read_pmu(&path, &terminal)?
        }
        Mode::Estimate | Mode::Mc => read_pmu(cfg.input()?, &terminal)?,
        Mode::Allocate => Vec::new(),
    };

    match mode {
        Mode::Simulate => {}
        Mode::Estimate => {
            art.estimates = estimate(cfg, &rows)?;
            write_te_csv(create(out, "te.csv", &mut art)?, &art.estimates)?;
        }
        Mode::Mc | Mode::Run => {
            let (tes, results) = capacity(cfg, &rows)?;
            write_te_csv(create(out, "te.csv", &mut art)?, &tes)?;
            let mc_rows: Vec<McRow> = results.iter().map(McRow::from).collect();
            write_mc_csv(create(out, "mc.csv", &mut art)?, &mc_rows)?;
            art.estimates = tes;
            art.results = results;
        }
        Mode::Allocate => {
            let mut links = Vec::new();
            for (path, initial) in cfg.paths.mc_inputs.iter().zip(&cfg.allocate.initial) {
                let f = File::open(path).map_err(|e| input_err(path, e))?;
                let rows = read_mc_csv(f).map_err(|e| input_err(path, e))?;
                let last = rows
                    .last()
                    .ok_or_else(|| input_err(path, "no capacity rows"))?;
                links.push((*initial, last.mc_power));
            }
            let plan = allocate(&links, cfg.allocate.shortage)?;
            write_allocation_csv(create(out, "allocation.csv", &mut art)?, &plan)?;
            art.plan = Some(plan);
        }
    }
    Ok(art)
}
