//! Job configuration: command-line flags, the JSON config file that mirrors
//! them, and the merge of the two into a fully resolved job. Flags win over
//! file fields; anything still unset falls back to the documented defaults.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use germscan::loja::{CMode, Variant};
use germscan::map::Point;
use germscan::region::RegionSpec;
use germscan::verify::Suite;

pub mod defaults {
    pub const EPSILON: f64 = 0.5;
    pub const LEVELS: u32 = 16;
    pub const DIRECTIONS: u32 = 32;
    pub const SEED: u64 = 42;
    pub const DELTA: f64 = 0.01;
    pub const TUBE_SAMPLES: usize = 2000;
    pub const TRIALS: usize = 64;
    pub const GRID_RES: usize = 33;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sweep the region and report per-point spectra, weights, and norms.
    Analyze,
    /// Fit the Lojasiewicz exponent for |G| against a singular quantity.
    LojaFit,
    /// Estimate the infimum weight, detect simplicity, and cross-check.
    Weight,
    /// Scan Milnor conditions (a) and (b) on one map.
    MilnorScan,
    /// Check the Milnor tube of a pair for transversality at level delta.
    PairScan,
    /// Scan condition (c): x must leave the span of the gradients.
    ConditionC,
    /// Sample the weight on a coordinate plane as a plot-ready grid.
    RhoGrid,
    /// Run the randomized property suites.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Strong,
    Weak,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Strong => Variant::Strong,
            VariantArg::Weak => Variant::Weak,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CModeArg {
    FixedOne,
    TwoParam,
}

impl From<CModeArg> for CMode {
    fn from(m: CModeArg) -> CMode {
        match m {
            CModeArg::FixedOne => CMode::FixedOne,
            CModeArg::TwoParam => CMode::TwoParam,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    All,
    Spectra,
    Loja,
    Milnor,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Spectra => Suite::Spectra,
            SuiteArg::Loja => Suite::Loja,
            SuiteArg::Milnor => Suite::Milnor,
        }
    }
}

/// Analyze polynomial map germs: gradient spectra, Lojasiewicz exponent
/// fits, and Milnor fibration condition scans.
///
/// Reports are deterministic: the same config file and seed produce
/// byte-identical output. CSV output is available for the point-sweep
/// commands (analyze, rho-grid); everything else reports JSON.
#[derive(Debug, Parser)]
#[command(name = "germscan", version, arg_required_else_help = true)]
pub struct Cli {
    /// JSON job config mirroring these flags; explicit flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// What to run.
    #[arg(long, value_enum)]
    pub command: Option<Command>,

    /// Map description file (JSON with n, k, label, components).
    #[arg(long, value_name = "PATH")]
    pub map: Option<PathBuf>,

    /// Sampling region radius around the base point [default: 0.5].
    #[arg(long, value_name = "F")]
    pub epsilon: Option<f64>,

    /// Radial levels; level j sits at epsilon/2^j [default: 16].
    #[arg(long, value_name = "N")]
    pub levels: Option<u32>,

    /// Sample directions per radial level [default: 32].
    #[arg(long, value_name = "N")]
    pub directions: Option<u32>,

    /// Seed for all randomized sampling [default: 42].
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    /// Tube level |G| = delta used by pair-scan [default: 0.01].
    #[arg(long, value_name = "F")]
    pub delta: Option<f64>,

    /// Report file; written to stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Report format [default: json].
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Gradient-dependence threshold on sigma_k/sigma_1 [default: 1e-8].
    #[arg(long, value_name = "F")]
    pub tol_dep: Option<f64>,

    /// Zero-set proximity threshold on |G(x)| [default: 1e-8].
    #[arg(long, value_name = "F")]
    pub tol_f: Option<f64>,

    /// Radius under which condition (b) witnesses are ignored
    /// [default: epsilon/100].
    #[arg(long, value_name = "F")]
    pub r_min: Option<f64>,

    /// Span-residual threshold for condition (c) [default: 1e-6].
    #[arg(long, value_name = "F")]
    pub span_tol: Option<f64>,

    /// Which singular quantity the exponent fit bounds [default: strong].
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,

    /// How the fitted constant is handled [default: fixed-one].
    #[arg(long, value_enum)]
    pub c_mode: Option<CModeArg>,

    /// Property suite selector for verify [default: all].
    #[arg(long, value_enum)]
    pub suite: Option<SuiteArg>,

    /// Trials per property for verify [default: 64].
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,

    /// Ball draws projected onto the tube by pair-scan [default: 2000].
    #[arg(long, value_name = "N")]
    pub tube_samples: Option<usize>,

    /// Grid resolution per axis for rho-grid [default: 33].
    #[arg(long, value_name = "N")]
    pub grid_res: Option<usize>,

    /// The two variable indices spanning the rho-grid plane [default: 0,1].
    #[arg(long, value_name = "I,J", value_delimiter = ',')]
    pub axes: Option<Vec<usize>>,

    /// Lower,upper coordinate bound for both rho-grid axes
    /// [default: -epsilon,epsilon].
    #[arg(
        long,
        value_name = "LO,HI",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub bounds: Option<Vec<f64>>,
}

/// The config file shape. Field names follow the job vocabulary
/// (`map_path`, `output_path`) rather than the flag spellings.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<Command>,
    pub map_path: Option<PathBuf>,
    pub region: Option<RegionConfig>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub overrides: Option<Overrides>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub epsilon: Option<f64>,
    pub levels: Option<u32>,
    pub directions: Option<u32>,
    /// Base point; the origin of the map's source space when omitted.
    pub center: Option<Vec<f64>>,
}

/// Tuning knobs beyond the region: tolerances plus the per-command
/// selectors that have no place in the region record.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub tol_dep: Option<f64>,
    pub tol_f: Option<f64>,
    pub r_min: Option<f64>,
    pub span_tol: Option<f64>,
    pub delta: Option<f64>,
    pub tube_samples: Option<usize>,
    pub variant: Option<VariantArg>,
    pub c_mode: Option<CModeArg>,
    pub suite: Option<SuiteArg>,
    pub trials: Option<usize>,
    pub grid_res: Option<usize>,
    pub axes: Option<Vec<usize>>,
    pub bounds: Option<Vec<f64>>,
}

/// A fully resolved job: every knob has a concrete value except the ones
/// whose defaults depend on the map or on other knobs.
#[derive(Debug)]
pub struct Job {
    pub command: Command,
    pub map_path: Option<PathBuf>,
    pub epsilon: f64,
    pub levels: u32,
    pub directions: u32,
    pub center: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub tol_dep: f64,
    pub tol_f: f64,
    pub r_min: Option<f64>,
    pub span_tol: f64,
    pub delta: f64,
    pub tube_samples: usize,
    pub variant: Variant,
    pub c_mode: CMode,
    pub suite: Suite,
    pub trials: usize,
    pub grid_res: usize,
    pub axes: [usize; 2],
    pub bounds: Option<[f64; 2]>,
}

fn pair<T: Copy>(values: Option<Vec<T>>, what: &str) -> Result<Option<[T; 2]>, String> {
    match values {
        None => Ok(None),
        Some(v) if v.len() == 2 => Ok(Some([v[0], v[1]])),
        Some(v) => Err(format!("{what} needs exactly two values, got {}", v.len())),
    }
}

pub fn resolve(cli: Cli, file: JobConfig) -> Result<Job, String> {
    let region = file.region.unwrap_or_default();
    let over = file.overrides.unwrap_or_default();
    let command = cli
        .command
        .or(file.command)
        .ok_or("no command selected; pass --command or set it in the config file")?;
    let epsilon = cli.epsilon.or(region.epsilon).unwrap_or(defaults::EPSILON);
    Ok(Job {
        command,
        map_path: cli.map.or(file.map_path),
        epsilon,
        levels: cli.levels.or(region.levels).unwrap_or(defaults::LEVELS),
        directions: cli
            .directions
            .or(region.directions)
            .unwrap_or(defaults::DIRECTIONS),
        center: region.center,
        output_path: cli.out.or(file.output_path),
        format: cli.format.or(file.format).unwrap_or(Format::Json),
        seed: cli.seed.or(file.seed).unwrap_or(defaults::SEED),
        tol_dep: cli
            .tol_dep
            .or(over.tol_dep)
            .unwrap_or(germscan::milnor::defaults::TOL_DEP),
        tol_f: cli
            .tol_f
            .or(over.tol_f)
            .unwrap_or(germscan::milnor::defaults::TOL_F),
        r_min: cli.r_min.or(over.r_min),
        span_tol: cli
            .span_tol
            .or(over.span_tol)
            .unwrap_or(germscan::milnor::defaults::SPAN_TOL),
        delta: cli.delta.or(over.delta).unwrap_or(defaults::DELTA),
        tube_samples: cli
            .tube_samples
            .or(over.tube_samples)
            .unwrap_or(defaults::TUBE_SAMPLES),
        variant: cli
            .variant
            .or(over.variant)
            .unwrap_or(VariantArg::Strong)
            .into(),
        c_mode: cli
            .c_mode
            .or(over.c_mode)
            .unwrap_or(CModeArg::FixedOne)
            .into(),
        suite: cli.suite.or(over.suite).unwrap_or(SuiteArg::All).into(),
        trials: cli.trials.or(over.trials).unwrap_or(defaults::TRIALS),
        grid_res: cli.grid_res.or(over.grid_res).unwrap_or(defaults::GRID_RES),
        axes: pair(cli.axes.or(over.axes), "--axes")?.unwrap_or([0, 1]),
        bounds: pair(cli.bounds.or(over.bounds), "--bounds")?,
    })
}

impl Job {
    /// The sampling region, centered per config or at the origin of the
    /// map's source space.
    pub fn region_spec(&self, n: usize) -> Result<RegionSpec, String> {
        let center = match &self.center {
            Some(coords) => {
                if coords.len() != n {
                    return Err(format!(
                        "region center has {} coordinates but the map takes {n}",
                        coords.len()
                    ));
                }
                Point::new(coords.clone()).map_err(|e| e.to_string())?
            }
            None => Point::origin(n),
        };
        RegionSpec::new(center, self.epsilon, self.levels, self.directions, self.seed)
            .map_err(|e| e.to_string())
    }

    pub fn effective_r_min(&self) -> f64 {
        self.r_min
            .unwrap_or(self.epsilon * germscan::milnor::defaults::R_MIN_FRACTION)
    }

    pub fn grid_bounds(&self) -> [f64; 2] {
        self.bounds.unwrap_or([-self.epsilon, self.epsilon])
    }
}
