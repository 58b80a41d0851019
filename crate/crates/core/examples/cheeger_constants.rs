// Exact edge expansion of small graphs next to the spectral sandwich
// `λ2/2 <= φ <= 2·sqrt(λ2·Δmax)`.

use exact_recovery::graph::{self, cheeger_exact};
use exact_recovery::spectral::cheeger_bounds_spectral;
use exact_recovery::Result;

/// `(name, exact φ, spectral lower, spectral upper)` per graph.
pub fn run_example() -> Result<Vec<(String, f64, f64, f64)>> {
    let cases = vec![
        ("K4".to_string(), graph::complete(4)?),
        ("K9".to_string(), graph::complete(9)?),
        ("C6".to_string(), graph::cycle(6)?),
        ("C10".to_string(), graph::cycle(10)?),
        ("grid 3x4".to_string(), graph::grid(3, 4)?),
        (
            "3-regular n=12".to_string(),
            graph::random_regular(12, 3, 5)?,
        ),
    ];
    let mut rows = Vec::new();
    for (name, g) in cases {
        let cut = cheeger_exact(&g)?;
        let (lo, hi) = cheeger_bounds_spectral(&g)?;
        println!(
            "{name:<16} phi={:<5} (|S|={}, cut={})  spectral [{lo:.4}, {hi:.4}]",
            cut.ratio_string(),
            cut.best_set.len(),
            cut.cut_edges
        );
        rows.push((name, cut.expansion(), lo, hi));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
