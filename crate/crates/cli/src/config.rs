//! Run configuration. Every field has a default, so `{}` is a valid config file.

use std::path::{Path, PathBuf};

use anyhow::Context as _;
use semilab_core::{Grading, TestFunction};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Simulate,
    Verify,
    Sweep,
}

/// Cartesian product of parameter axes. Points are enumerated with `c` varying fastest,
/// then `b`, `beta`, `alpha` and `dim`; an empty axis gives an empty grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamGrid {
    /// Default `[3]`.
    pub dim: Vec<u32>,
    /// Default `[1.0]`.
    pub alpha: Vec<f64>,
    /// Default `[1.0]`.
    pub beta: Vec<f64>,
    /// Default `[0.0]`.
    pub b: Vec<f64>,
    /// Default `[0.0]`.
    pub c: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            dim: vec![3],
            alpha: vec![1.0],
            beta: vec![1.0],
            b: vec![0.0],
            c: vec![0.0],
        }
    }
}

/// One grid point before validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub index: usize,
    pub dim: u32,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub c: f64,
}

impl ParamGrid {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &dim in &self.dim {
            for &alpha in &self.alpha {
                for &beta in &self.beta {
                    for &b in &self.b {
                        for &c in &self.c {
                            let index = out.len();
                            out.push(GridPoint { index, dim, alpha, beta, b, c });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshConfig {
    /// Default `0.01`.
    pub r_min: f64,
    /// Default `10.0`.
    pub r_max: f64,
    /// Number of intervals. Default `1024`.
    pub intervals: usize,
    /// Default `log_graded`.
    pub grading: Grading,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            r_min: 0.01,
            r_max: 10.0,
            intervals: 1024,
            grading: Grading::LogGraded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    /// Default `1e-3`.
    pub dt: f64,
    /// Default `200`.
    pub steps: usize,
    /// Every `output_stride`-th time level is written to the trajectory CSV. Default `10`.
    pub output_stride: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            steps: 200,
            output_stride: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Shifted `L^p` non-expansiveness. Default `1e-8`.
    pub contractivity: f64,
    /// Positivity, sub-Markov bound and monotone truncation. Default `1e-10`.
    pub positivity: f64,
    /// Relative tolerance for the inequality suites. Default `1e-6`.
    pub inequality: f64,
    /// Least refinement ratio of the adjoint pairing defect. Default `1.8`.
    pub adjoint_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            contractivity: 1e-8,
            positivity: 1e-10,
            inequality: 1e-6,
            adjoint_ratio: 1.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Overridden by the subcommand. Default `classify`.
    pub command: Command,
    pub params: ParamGrid,
    /// Default `[1.5, 2.0, 3.0]`.
    pub p_list: Vec<f64>,
    pub mesh: MeshConfig,
    pub time: TimeConfig,
    pub tolerances: Tolerances,
    /// Fixed shift. Default: `λ_min + lambda_margin` per grid point.
    pub lambda: Option<f64>,
    /// Default `0.1`.
    pub lambda_margin: f64,
    /// Test functions per suite. Default `20`.
    pub corpus_size: usize,
    /// Corpus seed. Default `42`.
    pub seed: u64,
    /// Yosida parameters and interpolation weights. Default `[1e-3, 1e-2, 0.1, 1.0]`.
    pub eps_list: Vec<f64>,
    /// Truncation levels of the negative potential. Default `[4, 16, 64, 256]`.
    pub truncation_levels: Vec<f64>,
    /// Cutoff indices for the core experiment. Default `[2, 4, 8, 16, 32, 64, 128, 256]`.
    pub cutoff_indices: Vec<u32>,
    /// Initial datum of `simulate`. Default: bump on `[0.05, 3]`.
    pub initial: TestFunction,
    /// Default `out`.
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Classify,
            params: ParamGrid::default(),
            p_list: vec![1.5, 2.0, 3.0],
            mesh: MeshConfig::default(),
            time: TimeConfig::default(),
            tolerances: Tolerances::default(),
            lambda: None,
            lambda_margin: 0.1,
            corpus_size: 20,
            seed: 42,
            eps_list: vec![1e-3, 1e-2, 0.1, 1.0],
            truncation_levels: vec![4.0, 16.0, 64.0, 256.0],
            cutoff_indices: vec![2, 4, 8, 16, 32, 64, 128, 256],
            initial: TestFunction::Bump { lo: 0.05, hi: 3.0 },
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rejects settings no command can run with. Invalid parameter points are not
    /// rejected here; they become per-row errors.
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(
            self.p_list.iter().all(|&p| p.is_finite() && p > 1.0),
            "p_list entries must exceed 1"
        );
        anyhow::ensure!(self.time.dt > 0.0 && self.time.dt.is_finite(), "dt must be positive");
        anyhow::ensure!(self.time.steps > 0, "steps must be positive");
        anyhow::ensure!(self.time.output_stride > 0, "output_stride must be positive");
        anyhow::ensure!(self.eps_list.iter().all(|&e| e > 0.0), "eps_list entries must be positive");
        anyhow::ensure!(self.lambda_margin > 0.0, "lambda_margin must be positive");
        anyhow::ensure!(self.cutoff_indices.iter().all(|&n| n >= 1), "cutoff indices start at 1");
        anyhow::ensure!(
            self.truncation_levels.windows(2).all(|w| w[0] < w[1]),
            "truncation_levels must increase"
        );
        Ok(())
    }
}
