// Builds one graph from each family, prints its basic shape, and round-trips
// it through the text format.

use exact_recovery::graph::{self, Graph};
use exact_recovery::Result;

pub fn run_example() -> Result<Vec<(String, Graph)>> {
    let graphs = vec![
        ("complete(6)".to_string(), graph::complete(6)?),
        ("cycle(8)".to_string(), graph::cycle(8)?),
        ("grid(3, 4)".to_string(), graph::grid(3, 4)?),
        (
            "random_regular(10, 3)".to_string(),
            graph::random_regular(10, 3, 7)?,
        ),
        (
            "erdos_renyi(12, 0.4)".to_string(),
            graph::erdos_renyi(12, 0.4, 7)?,
        ),
    ];
    let smoothed = graph::smooth(&graphs[1].1, 2.0, 11)?;
    let mut all = graphs;
    all.push(("smooth(cycle(8), 2)".to_string(), smoothed));

    for (name, g) in &all {
        let back = Graph::parse(&g.to_text(), name)?;
        assert_eq!(&back, g);
        println!(
            "{name:<24} n={:<3} m={:<3} max_degree={:<2} connected={}",
            g.n(),
            g.edge_count(),
            g.max_degree(),
            g.is_connected()
        );
    }
    Ok(all)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
