// End-to-end recovery on a 3-regular graph: sample noisy observations, solve
// the relaxation, check the certificate, fix the sign, and compare with the
// exhaustive optimum.

use exact_recovery::graph;
use exact_recovery::observe::{generate_observations, score_quadratic, Labeling, NoiseParams};
use exact_recovery::rng;
use exact_recovery::solve::{brute_force_max, recover, PipelineResult, RecoverOptions};
use exact_recovery::Result;

pub fn run_example() -> Result<PipelineResult> {
    let g = graph::random_regular(12, 3, 21)?;
    let truth = Labeling::random(g.n(), &mut rng::seeded(3));
    let obs = generate_observations(&g, &truth, NoiseParams::new(0.05, 0.1)?, 9)?;
    let opts = RecoverOptions {
        truth: Some(truth.clone()),
        ..RecoverOptions::default()
    };
    let res = recover(&g, &obs, &opts)?;
    let (best, best_score) = brute_force_max(&obs)?;

    println!("truth      {}", truth.to_text());
    println!("recovered  {}", res.labels.to_text());
    println!(
        "certified={} lambda2={:.4} stage2_flipped={} hamming={}",
        res.certified,
        res.certificate.lambda2,
        res.stage2_flipped,
        res.hamming.unwrap_or(0)
    );
    println!(
        "relaxation={:.6}  score(stage 1)={}  brute-force optimum={} at {}",
        res.objective,
        score_quadratic(&res.stage1_labels, &obs),
        best_score,
        best.to_text()
    );
    if res.certified {
        assert!(res.stage1_labels.same_sign_class(&best));
    }
    Ok(res)
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
