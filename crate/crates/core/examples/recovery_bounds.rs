// Failure-probability bounds for complete graphs across sizes. Small graphs
// get a vacuous guarantee; the bound only bites once `n` is large.

use exact_recovery::bounds::{combined, complete_graph_phi, RecoveryBounds};
use exact_recovery::Result;

pub fn run_example() -> Result<Vec<(usize, RecoveryBounds)>> {
    let (p, q) = (0.1, 0.1);
    println!(
        "{:>9} {:>13} {:>13} {:>13} vacuous",
        "n", "eps1", "eps2", "1-eps1-eps2"
    );
    let mut rows = Vec::new();
    for n in [12, 100, 1_000, 10_000, 100_000] {
        let b = combined(complete_graph_phi(n), n - 1, n, p, q)?;
        println!(
            "{n:>9} {:>13.6e} {:>13.6e} {:>13.6e} {}",
            b.eps1, b.eps2, b.combined_success, b.vacuous
        );
        rows.push((n, b));
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
