use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, GraphStats, TrialRecord};
use crate::bounds;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 11] = [
    "p",
    "q",
    "trial",
    "seed",
    "recovered",
    "sign_class_recovered",
    "certified",
    "hamming",
    "objective",
    "brute_match",
    "wall_ms",
];

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn csv_rows<W: std::io::Write>(records: &[TrialRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            r.trial_index.to_string(),
            r.seed.to_string(),
            flag(r.recovered).into(),
            flag(r.sign_class_recovered).into(),
            flag(r.certified).into(),
            r.hamming.to_string(),
            format!("{:.9}", r.objective),
            r.brute_match.map(flag).unwrap_or("").into(),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV text for `records`: the fixed header, booleans as 0/1, and an empty
/// `brute_match` field when the comparison was skipped.
pub fn csv_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    csv_rows(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

pub fn write_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to write".into()));
    }
    std::fs::write(path, csv_string(records)).map_err(|e| Error::io(path, e))
}

/// Aggregates for one value of `p`, with the bounds for that configuration
/// where they are defined (`p, q` in the open interval).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub p: f64,
    pub trials: usize,
    pub recovery_rate: f64,
    pub sign_class_rate: f64,
    pub certification_rate: f64,
    pub mean_hamming: f64,
    pub brute_match_rate: Option<f64>,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub combined_success: Option<f64>,
    pub vacuous: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub family: String,
    pub n: usize,
    pub q: f64,
    pub trials_per_point: usize,
    pub base_seed: u64,
    pub graph: GraphStats,
    pub eps2: Option<f64>,
    pub points: Vec<PointSummary>,
}

fn rate(count: usize, total: usize) -> f64 {
    count as f64 / total as f64
}

/// Per-`p` rates (in grid order) plus the bounds for the configuration.
pub fn summarize(
    cfg: &ExperimentConfig,
    stats: &GraphStats,
    records: &[TrialRecord],
) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to summarize".into()));
    }
    let open = |v: f64| v > 0.0 && v < 0.5;
    let eps2 = if open(cfg.q) {
        Some(bounds::eps2(stats.n, cfg.q)?)
    } else {
        None
    };
    let mut points = Vec::with_capacity(cfg.p_grid.len());
    for &p in &cfg.p_grid {
        let recs: Vec<&TrialRecord> = records.iter().filter(|r| r.p == p).collect();
        if recs.is_empty() {
            continue;
        }
        let t = recs.len();
        let count = |f: fn(&TrialRecord) -> bool| recs.iter().filter(|r| f(r)).count();
        let brute: Vec<bool> = recs.iter().filter_map(|r| r.brute_match).collect();
        let combined = if open(p) && open(cfg.q) && stats.phi > 0.0 {
            Some(bounds::combined(stats.phi, stats.dmax, stats.n, p, cfg.q)?)
        } else {
            None
        };
        let eps1 = if open(p) && stats.phi > 0.0 {
            Some(bounds::eps1(stats.phi, stats.dmax, p, stats.n)?)
        } else {
            None
        };
        points.push(PointSummary {
            p,
            trials: t,
            recovery_rate: rate(count(|r| r.recovered), t),
            sign_class_rate: rate(count(|r| r.sign_class_recovered), t),
            certification_rate: rate(count(|r| r.certified), t),
            mean_hamming: recs.iter().map(|r| r.hamming as f64).sum::<f64>() / t as f64,
            brute_match_rate: (!brute.is_empty())
                .then(|| rate(brute.iter().filter(|&&b| b).count(), brute.len())),
            eps1,
            eps2: combined.map(|b| b.eps2),
            combined_success: combined.map(|b| b.combined_success),
            vacuous: combined.map(|b| b.vacuous),
        });
    }
    Ok(Summary {
        family: cfg.family.describe(),
        n: cfg.n,
        q: cfg.q,
        trials_per_point: cfg.trials,
        base_seed: cfg.base_seed,
        graph: *stats,
        eps2,
        points,
    })
}

pub fn write_summary_json(summary: &Summary, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
