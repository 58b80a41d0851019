// Runs the shipped `k12.json` sweep and writes the CSV, summary JSON and SVG
// chart into a scratch directory.

use std::path::Path;

use exact_recovery::harness::{run_sweep, ExperimentConfig, SweepArtifacts};
use exact_recovery::Result;

pub fn run_example() -> Result<SweepArtifacts> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/k12.json");
    let cfg = ExperimentConfig::read(&config)?;
    let dir = std::env::temp_dir().join(format!("exact-recovery-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| exact_recovery::Error::io(&dir, e))?;
    let art = run_sweep(&cfg, &dir.join("k12"))?;
    for pt in &art.summary.points {
        println!(
            "p={:<5} recovered={:.2} certified={:.2} brute_match={:?} bound={:?}",
            pt.p, pt.recovery_rate, pt.certification_rate, pt.brute_match_rate, pt.combined_success
        );
    }
    println!("wrote {} and {}", art.csv.display(), art.json.display());
    Ok(art)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
