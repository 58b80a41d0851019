// The signed Laplacian `D - diag(y) A diag(y)` of a labeled graph is
// unitarily similar to the plain Laplacian, and its second eigenvalue
// dominates `φ²/(4Δmax)`.

use exact_recovery::graph;
use exact_recovery::observe::Labeling;
use exact_recovery::rng;
use exact_recovery::spectral::{
    laplacian, signed_cheeger_bound, signed_laplacian, symmetric_eigen,
};
use exact_recovery::Result;

/// `(λ2 of the signed Laplacian, φ²/(4Δmax))` for each labeled graph.
pub fn run_example() -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (k, g) in [
        graph::cycle(7)?,
        graph::grid(3, 3)?,
        graph::random_regular(10, 3, 2)?,
    ]
    .iter()
    .enumerate()
    {
        let y = Labeling::random(g.n(), &mut rng::seeded(k as u64));
        let signed = symmetric_eigen(&signed_laplacian(g, &y)?)?;
        let plain = symmetric_eigen(&laplacian(g))?;
        let gap = signed
            .values
            .iter()
            .zip(&plain.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let (bound, lambda2) = signed_cheeger_bound(g, &y)?;
        println!(
            "n={:<3} y={}  lambda2={lambda2:.6}  phi^2/(4 dmax)={bound:.6}  spectrum gap to L: {gap:.1e}",
            g.n(),
            y.to_text()
        );
        out.push((lambda2, bound));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
