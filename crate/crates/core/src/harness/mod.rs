//! Seeded Monte Carlo experiments over graph families and noise grids.
//!
//! A run is a pure function of its [`ExperimentConfig`]: the graph comes from
//! `base_seed`, and every trial derives its own seed from
//! `(base_seed, p_index, trial_index)`, so records are reproducible no matter
//! how trials are scheduled across threads.

mod plot;
mod report;

use std::path::Path;
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::observe::{generate_observations, score_quadratic, Labeling, NoiseParams};
use crate::rng;
use crate::solve::{brute_force_max, recover, RecoverOptions, SolverOptions, BRUTE_FORCE_LIMIT};
use crate::spectral;

pub use plot::plot_svg;
pub use report::{
    csv_string, summarize, write_csv, write_summary_json, PointSummary, Summary, CSV_HEADER,
};

/// Regeneration attempts for random families that come out disconnected.
pub const CONNECT_ATTEMPTS: u64 = 100;

/// Graph family with its parameters. `n` lives on the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Complete,
    Cycle,
    Grid { rows: usize, cols: usize },
    Regular { d: usize },
    Er { prob: f64 },
    Smoothed { base: Box<FamilySpec>, epsilon: f64 },
}

impl FamilySpec {
    pub fn is_random(&self) -> bool {
        match self {
            FamilySpec::Complete | FamilySpec::Cycle | FamilySpec::Grid { .. } => false,
            FamilySpec::Regular { .. } | FamilySpec::Er { .. } | FamilySpec::Smoothed { .. } => {
                true
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Complete => "complete".into(),
            FamilySpec::Cycle => "cycle".into(),
            FamilySpec::Grid { rows, cols } => format!("grid({rows}x{cols})"),
            FamilySpec::Regular { d } => format!("regular(d={d})"),
            FamilySpec::Er { prob } => format!("er(prob={prob})"),
            FamilySpec::Smoothed { base, epsilon } => {
                format!("smoothed({}, epsilon={epsilon})", base.describe())
            }
        }
    }

    /// One draw of the family; random families may come out disconnected.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Graph> {
        match self {
            FamilySpec::Complete => graph::complete(n),
            FamilySpec::Cycle => graph::cycle(n),
            FamilySpec::Grid { rows, cols } => {
                if rows * cols != n {
                    return Err(Error::InvalidParameters(format!(
                        "grid {rows}x{cols} does not have n = {n} vertices"
                    )));
                }
                graph::grid(*rows, *cols)
            }
            FamilySpec::Regular { d } => graph::random_regular(n, *d, seed),
            FamilySpec::Er { prob } => graph::erdos_renyi(n, *prob, seed),
            FamilySpec::Smoothed { base, epsilon } => {
                let g = base.generate(n, seed)?;
                graph::smooth(&g, *epsilon, rng::mix64(seed))
            }
        }
    }

    /// Connected draw, retrying random families with seeds `seed, seed+1, ...`.
    pub fn generate_connected(&self, n: usize, seed: u64) -> Result<Graph> {
        let attempts = if self.is_random() {
            CONNECT_ATTEMPTS
        } else {
            1
        };
        for k in 0..attempts {
            let g = self.generate(n, seed.wrapping_add(k))?;
            if g.is_connected() {
                return Ok(g);
            }
        }
        Err(Error::Experiment(format!(
            "no connected {} graph on {n} vertices after {attempts} attempts",
            self.describe()
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    pub n: usize,
    pub p_grid: Vec<f64>,
    pub q: f64,
    pub trials: usize,
    pub base_seed: u64,
    /// Compare stage-one labels against exhaustive search (ignored for n > 20).
    #[serde(default)]
    pub compare_brute_force: bool,
    /// Prefix for `.csv`, `.json` and `.svg` outputs.
    #[serde(default)]
    pub output_path: Option<String>,
    /// Use this truth in every trial instead of sampling one per trial.
    #[serde(default)]
    pub fixed_truth: Option<Vec<i8>>,
    /// Fill `wall_ms`; leaves it 0 otherwise so output bytes are reproducible.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.p_grid.is_empty() {
            return bad("p_grid must not be empty".into());
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..0.5).contains(*p)) {
            return bad(format!("p_grid value {p} outside [0, 0.5)"));
        }
        if !(0.0..0.5).contains(&self.q) {
            return bad(format!("q = {} outside [0, 0.5)", self.q));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n < 2 {
            return bad("n must be at least 2".into());
        }
        if let Some(t) = &self.fixed_truth {
            if t.len() != self.n {
                return bad(format!(
                    "fixed_truth has {} entries, n = {}",
                    t.len(),
                    self.n
                ));
            }
            Labeling::new(t.clone())?;
        }
        Ok(())
    }

    pub fn brute_force_enabled(&self) -> bool {
        self.compare_brute_force && self.n <= BRUTE_FORCE_LIMIT
    }
}

/// Per-trial seed; independent of how many grid points or trials exist.
pub fn trial_seed(base_seed: u64, p_index: usize, trial_index: usize) -> u64 {
    base_seed ^ rng::mix64(((p_index as u64) << 32) | trial_index as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub p: f64,
    pub q: f64,
    pub trial_index: usize,
    pub seed: u64,
    /// Final labels equal the truth.
    pub recovered: bool,
    /// Stage-one labels equal the truth up to a global sign.
    pub sign_class_recovered: bool,
    pub certified: bool,
    pub hamming: usize,
    pub objective: f64,
    /// Stage-one labels attain the exhaustive optimum.
    pub brute_match: Option<bool>,
    pub wall_ms: u64,
}

/// Graph-level quantities the bounds need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub edges: usize,
    pub dmax: usize,
    /// Exact expansion for small graphs, otherwise the spectral lower bound.
    pub phi: f64,
    pub phi_exact: bool,
}

impl GraphStats {
    pub fn of(g: &Graph) -> Result<Self> {
        let (phi, phi_exact) = if g.n() <= graph::CHEEGER_EXACT_LIMIT {
            (graph::cheeger_exact(g)?.expansion(), true)
        } else {
            (spectral::cheeger_bounds_spectral(g)?.0, false)
        };
        Ok(GraphStats {
            n: g.n(),
            edges: g.edge_count(),
            dmax: g.max_degree(),
            phi,
            phi_exact,
        })
    }
}

/// Everything a sweep produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub graph: Graph,
    pub stats: GraphStats,
    pub records: Vec<TrialRecord>,
}

/// Runs every `(p, trial)` pair of the grid. Records come back ordered by
/// `(p_index, trial_index)` regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    Ok(run_experiment_full(cfg)?.records)
}

pub fn run_experiment_full(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let graph = cfg.family.generate_connected(cfg.n, cfg.base_seed)?;
    let stats = GraphStats::of(&graph)?;
    let fixed_truth = cfg.fixed_truth.clone().map(Labeling::new).transpose()?;
    let work: Vec<(usize, usize)> = (0..cfg.p_grid.len())
        .flat_map(|pi| (0..cfg.trials).map(move |t| (pi, t)))
        .collect();
    let records = work
        .par_iter()
        .map(|&(pi, t)| run_trial(&graph, cfg, fixed_truth.as_ref(), pi, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentOutput {
        graph,
        stats,
        records,
    })
}

fn run_trial(
    g: &Graph,
    cfg: &ExperimentConfig,
    fixed_truth: Option<&Labeling>,
    p_index: usize,
    trial_index: usize,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let p = cfg.p_grid[p_index];
    let seed = trial_seed(cfg.base_seed, p_index, trial_index);
    let mut stream = rng::seeded(seed);
    let truth = match fixed_truth {
        Some(t) => t.clone(),
        None => Labeling::random(g.n(), &mut stream),
    };
    let obs_seed = stream.next_u64();
    let solver_seed = stream.next_u64();

    let obs = generate_observations(g, &truth, NoiseParams::new(p, cfg.q)?, obs_seed)?;
    let opts = RecoverOptions {
        solver: SolverOptions::with_seed(solver_seed),
        tolerance: None,
        truth: Some(truth.clone()),
    };
    let result = recover(g, &obs, &opts)?;
    let brute_match = if cfg.brute_force_enabled() {
        let (_, best) = brute_force_max(&obs)?;
        Some(score_quadratic(&result.stage1_labels, &obs) == best)
    } else {
        None
    };
    let wall_ms = if cfg.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(TrialRecord {
        p,
        q: cfg.q,
        trial_index,
        seed,
        recovered: result.labels == truth,
        sign_class_recovered: result.stage1_labels.same_sign_class(&truth),
        certified: result.certified,
        hamming: result.hamming.unwrap_or(0),
        objective: result.objective,
        brute_match,
        wall_ms,
    })
}

/// Paths written by [`run_sweep`].
#[derive(Debug, Clone)]
pub struct SweepArtifacts {
    pub csv: std::path::PathBuf,
    pub json: std::path::PathBuf,
    pub svg: Option<std::path::PathBuf>,
    pub summary: Summary,
}

/// Runs the experiment and writes `<prefix>.csv`, `<prefix>.json` and, with at
/// least two grid points, `<prefix>.svg`.
pub fn run_sweep(cfg: &ExperimentConfig, prefix: &Path) -> Result<SweepArtifacts> {
    let out = run_experiment_full(cfg)?;
    let summary = summarize(cfg, &out.stats, &out.records)?;
    if let Some(parent) = prefix.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let with_ext = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        std::path::PathBuf::from(s)
    };
    let csv = with_ext(".csv");
    let json = with_ext(".json");
    write_csv(&out.records, &csv)?;
    write_summary_json(&summary, &json)?;
    let svg = if summary.points.len() >= 2 {
        let path = with_ext(".svg");
        plot_svg(&summary, &path)?;
        Some(path)
    } else {
        None
    };
    Ok(SweepArtifacts {
        csv,
        json,
        svg,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(family: FamilySpec, n: usize) -> ExperimentConfig {
        ExperimentConfig {
            family,
            n,
            p_grid: vec![0.0],
            q: 0.0,
            trials: 10,
            base_seed: 17,
            compare_brute_force: true,
            output_path: None,
            fixed_truth: None,
            record_timing: false,
        }
    }

    #[test]
    fn noiseless_runs_recover_everything() {
        for (family, n) in [
            (FamilySpec::Complete, 8),
            (FamilySpec::Cycle, 9),
            (FamilySpec::Grid { rows: 3, cols: 4 }, 12),
            (FamilySpec::Regular { d: 3 }, 10),
            (FamilySpec::Er { prob: 0.5 }, 10),
            (
                FamilySpec::Smoothed {
                    base: Box::new(FamilySpec::Cycle),
                    epsilon: 2.0,
                },
                10,
            ),
        ] {
            let recs = run_experiment(&config(family.clone(), n)).unwrap();
            assert_eq!(recs.len(), 10);
            for r in &recs {
                assert!(r.recovered && r.certified, "{}: {r:?}", family.describe());
                assert_eq!(r.brute_match, Some(true));
                assert_eq!(r.hamming, 0);
            }
        }
    }

    #[test]
    fn trial_order_and_determinism() {
        let mut cfg = config(FamilySpec::Complete, 6);
        cfg.p_grid = vec![0.1, 0.3];
        cfg.q = 0.2;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        let order: Vec<(f64, usize)> = a.iter().map(|r| (r.p, r.trial_index)).collect();
        let expected: Vec<(f64, usize)> = [0.1, 0.3]
            .iter()
            .flat_map(|&p| (0..10).map(move |t| (p, t)))
            .collect();
        assert_eq!(order, expected);
        // Appending a grid point leaves earlier trial seeds alone.
        cfg.p_grid.push(0.4);
        let c = run_experiment(&cfg).unwrap();
        assert_eq!(&c[..20], &a[..]);
    }

    #[test]
    fn record_invariants_hold() {
        let mut cfg = config(FamilySpec::Cycle, 10);
        cfg.p_grid = vec![0.1, 0.25];
        cfg.q = 0.3;
        cfg.trials = 30;
        for r in run_experiment(&cfg).unwrap() {
            if r.recovered {
                assert!(r.sign_class_recovered && r.hamming == 0);
            }
            if r.certified {
                assert_eq!(r.brute_match, Some(true));
            }
        }
    }

    #[test]
    fn fixed_truth_is_used() {
        let mut cfg = config(FamilySpec::Complete, 5);
        cfg.fixed_truth = Some(vec![1, -1, 1, -1, 1]);
        assert!(run_experiment(&cfg).unwrap().iter().all(|r| r.recovered));
        cfg.fixed_truth = Some(vec![1, 2, 1, 1, 1]);
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = config(FamilySpec::Complete, 5);
        cfg.p_grid = vec![0.5];
        assert!(cfg.validate().is_err());
        let mut cfg = config(FamilySpec::Complete, 5);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let cfg = config(FamilySpec::Grid { rows: 2, cols: 2 }, 5);
        assert!(run_experiment(&cfg).is_err());
        // Too sparse to ever be connected.
        let cfg = config(FamilySpec::Er { prob: 0.0 }, 6);
        let err = run_experiment(&cfg).unwrap_err();
        assert!(err.to_string().contains("er(prob=0)"), "{err}");
        assert!(ExperimentConfig::from_json(r#"{"family":{"type":"ring"}}"#).is_err());
    }

    #[test]
    fn config_json_shape() {
        let cfg = ExperimentConfig::from_json(
            r#"{"family": {"type": "smoothed", "base": {"type": "cycle"}, "epsilon": 4.0},
                "n": 30, "p_grid": [0.0, 0.1], "q": 0.1, "trials": 3, "base_seed": 5}"#,
        )
        .unwrap();
        assert!(!cfg.compare_brute_force);
        assert_eq!(cfg.family.describe(), "smoothed(cycle, epsilon=4)");
    }
}
