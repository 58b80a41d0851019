mod generate_graphs {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/generate_graphs.rs"
    ));
}
mod cheeger_constants {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cheeger_constants.rs"
    ));
}
mod signed_laplacian {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/signed_laplacian.rs"
    ));
}
mod recover_labels {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/recover_labels.rs"
    ));
}
mod recovery_bounds {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/recovery_bounds.rs"
    ));
}
mod smoothed_cycle {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/smoothed_cycle.rs"
    ));
}
mod monte_carlo_sweep {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/monte_carlo_sweep.rs"
    ));
}

#[test]
fn generate_graphs_example_runs() {
    let graphs = generate_graphs::run_example().expect("generate_graphs should run");
    assert_eq!(graphs.len(), 6);
    assert!(graphs.iter().all(|(_, g)| g.is_connected()));
}

#[test]
fn cheeger_constants_example_runs() {
    let rows = cheeger_constants::run_example().expect("cheeger_constants should run");
    for (name, phi, lo, hi) in rows {
        assert!(
            lo <= phi + 1e-12 && phi <= hi + 1e-12,
            "{name}: {lo} {phi} {hi}"
        );
    }
}

#[test]
fn signed_laplacian_example_runs() {
    let rows = signed_laplacian::run_example().expect("signed_laplacian should run");
    assert!(rows.iter().all(|(l2, bound)| bound <= &(l2 + 1e-9)));
}

#[test]
fn recover_labels_example_runs() {
    let res = recover_labels::run_example().expect("recover_labels should run");
    assert!(res.certified);
    assert_eq!(res.hamming, Some(0));
}

#[test]
fn recovery_bounds_example_runs() {
    let rows = recovery_bounds::run_example().expect("recovery_bounds should run");
    assert!(rows[0].1.vacuous);
    assert!(!rows.last().unwrap().1.vacuous);
}

#[test]
fn smoothed_cycle_example_runs() {
    let rows = smoothed_cycle::run_example().expect("smoothed_cycle should run");
    for (_, plain, smoothed) in rows {
        assert!(smoothed.iter().all(|&l| l > plain));
    }
}

#[test]
fn monte_carlo_sweep_example_runs() {
    let art = monte_carlo_sweep::run_example().expect("monte_carlo_sweep should run");
    let golden = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/k12.golden.csv"
    ))
    .unwrap();
    assert_eq!(std::fs::read_to_string(&art.csv).unwrap(), golden);
    assert!(art.svg.is_some());
    std::fs::remove_dir_all(art.csv.parent().unwrap()).ok();
}
