//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 runtime
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds;
use crate::error::{Error, Result};
use crate::graph::{self, Graph, CHEEGER_EXACT_LIMIT};
use crate::harness::{self, ExperimentConfig, GraphStats};
use crate::observe::{self, generate_observations, Labeling, NoiseParams, Observations};
use crate::rng;
use crate::solve::{self, RecoverOptions, SolverOptions};
use crate::spectral;

#[derive(Debug, Parser)]
#[command(
    name = "exact-recovery",
    version,
    about = "Exact label recovery on noisy graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph file from a family.
    Generate(GenerateArgs),
    /// Sample noisy observations of a random (or given) labeling.
    Observe(ObserveArgs),
    /// Run the two-stage recovery on a graph and its observations.
    Recover(RecoverArgs),
    /// Check the dual certificate for a given labeling.
    Certify(CertifyArgs),
    /// Edge expansion: exact for small graphs, spectral bounds otherwise.
    Cheeger(CheegerArgs),
    /// Print a table of failure-probability bounds.
    Bounds(BoundsArgs),
    /// Run a Monte Carlo sweep from a JSON config.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Cycle,
    Grid,
    Regular,
    Er,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Vertex count (grids use --rows and --cols).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Degree for the regular family.
    #[arg(long)]
    d: Option<usize>,
    /// Edge probability for the er family.
    #[arg(long)]
    prob: Option<f64>,
    /// Add ER(n, epsilon/n) edges to the generated graph.
    #[arg(long)]
    smooth: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ObserveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-truth labels; sampled from the seed when absent.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Where to save the sampled ground truth.
    #[arg(long)]
    truth_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    obs: PathBuf,
    /// Ground truth for reporting the Hamming distance.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Solver initialization seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise levels, used only to weight the node term of the full score.
    #[arg(long, requires = "q")]
    p: Option<f64>,
    #[arg(long, requires = "p")]
    q: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    obs: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct CheegerArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Comma-separated edge-noise values.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long)]
    q: f64,
    /// Explicit expansion (requires --dmax).
    #[arg(long, requires = "dmax", conflicts_with_all = ["complete", "expander", "graph"])]
    phi: Option<f64>,
    #[arg(long)]
    dmax: Option<usize>,
    /// Use K_n: phi = ceil(n/2), dmax = n - 1.
    #[arg(long, conflicts_with_all = ["expander", "graph"])]
    complete: bool,
    /// Expander constant c (requires --degree): phi = c*d, dmax = d.
    #[arg(long, requires = "degree", conflicts_with = "graph")]
    expander: Option<f64>,
    #[arg(long)]
    degree: Option<usize>,
    /// Take n, phi and dmax from a graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Also print the smoothed-expansion guarantee for this epsilon.
    #[arg(long)]
    smoothed_epsilon: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    config: PathBuf,
    /// Output prefix; defaults to the config's output_path, then the config
    /// path without its extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI with process stdout/stderr and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI against arbitrary writers.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().ansi().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Generate(a) => generate(a, out),
        Command::Observe(a) => observe_cmd(a, out),
        Command::Recover(a) => recover_cmd(a, out),
        Command::Certify(a) => certify_cmd(a, out),
        Command::Cheeger(a) => cheeger_cmd(a, out),
        Command::Bounds(a) => bounds_cmd(a, out),
        Command::Sweep(a) => sweep_cmd(a, out),
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for the {family} family")))
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let g = match a.family {
        Family::Complete => graph::complete(need(a.n, "n", "complete")?)?,
        Family::Cycle => graph::cycle(need(a.n, "n", "cycle")?)?,
        Family::Grid => graph::grid(need(a.rows, "rows", "grid")?, need(a.cols, "cols", "grid")?)?,
        Family::Regular => graph::random_regular(
            need(a.n, "n", "regular")?,
            need(a.d, "d", "regular")?,
            a.seed,
        )?,
        Family::Er => {
            graph::erdos_renyi(need(a.n, "n", "er")?, need(a.prob, "prob", "er")?, a.seed)?
        }
    };
    let g = match a.smooth {
        Some(eps) => graph::smooth(&g, eps, rng::mix64(a.seed))?,
        None => g,
    };
    g.write(&a.out)?;
    writeln!(
        out,
        "wrote {}: n={} m={} max_degree={} connected={}",
        a.out.display(),
        g.n(),
        g.edge_count(),
        g.max_degree(),
        g.is_connected()
    )
    .map_err(io_out)
}

fn observe_cmd(a: ObserveArgs, out: &mut dyn Write) -> Result<()> {
    let g = Graph::read(&a.graph)?;
    let params = NoiseParams::new(a.p, a.q)?;
    let truth = match &a.truth {
        Some(path) => Labeling::read(path)?,
        None => Labeling::random(g.n(), &mut rng::seeded(rng::mix64(a.seed))),
    };
    let obs = generate_observations(&g, &truth, params, a.seed)?;
    obs.write(&a.out)?;
    if let Some(path) = &a.truth_out {
        std::fs::write(path, format!("{}\n", truth.to_text())).map_err(|e| Error::io(path, e))?;
    }
    let flipped = obs
        .x_edges()
        .iter()
        .filter(|(&(u, v), &s)| s != truth[u] * truth[v])
        .count();
    let bad_nodes = obs
        .c()
        .iter()
        .zip(truth.iter())
        .filter(|(c, y)| c != y)
        .count();
    writeln!(
        out,
        "wrote {}: {} edges ({flipped} flipped), {} nodes ({bad_nodes} flipped)",
        a.out.display(),
        obs.x_edges().len(),
        obs.n()
    )
    .map_err(io_out)
}

fn load_pair(graph: &Path, obs: &Path) -> Result<(Graph, Observations)> {
    let g = Graph::read(graph)?;
    let o = Observations::read(obs)?;
    if !o.has_support(&g) {
        return Err(Error::InvalidArgument(format!(
            "{} is not supported on the edges of {}",
            obs.display(),
            graph.display()
        )));
    }
    Ok((g, o))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_certificate(out: &mut dyn Write, rep: &solve::CertificateReport) -> Result<()> {
    writeln!(
        out,
        "certified={} lambda1={:.6e} lambda2={:.6e} tau={:.1e}",
        yes_no(rep.certified),
        rep.lambda1,
        rep.lambda2,
        rep.tolerance
    )
    .map_err(io_out)
}

fn recover_cmd(a: RecoverArgs, out: &mut dyn Write) -> Result<()> {
    let (g, obs) = load_pair(&a.graph, &a.obs)?;
    let truth = a.truth.as_deref().map(Labeling::read).transpose()?;
    let opts = RecoverOptions {
        solver: SolverOptions::with_seed(a.seed),
        tolerance: None,
        truth,
    };
    let res = solve::recover(&g, &obs, &opts)?;
    print_certificate(out, &res.certificate)?;
    let mut lines = vec![
        format!("stage2_flipped={}", yes_no(res.stage2_flipped)),
        format!(
            "objective={:.9} sweeps={} converged={}",
            res.objective,
            res.sweeps,
            yes_no(res.converged)
        ),
        format!(
            "score_quadratic={}",
            observe::score_quadratic(&res.labels, &obs)
        ),
    ];
    if let (Some(p), Some(q)) = (a.p, a.q) {
        let alpha = observe::alpha(NoiseParams::new(p, q)?)?;
        lines.push(format!(
            "score_full={:.9} alpha={alpha:.9}",
            observe::score_full(&res.labels, &obs, alpha)
        ));
    }
    if let Some(h) = res.hamming {
        lines.push(format!("hamming={h}"));
    }
    lines.push(format!("labels={}", res.labels.to_text()));
    for l in lines {
        writeln!(out, "{l}").map_err(io_out)?;
    }
    if let Some(path) = &a.out {
        std::fs::write(path, format!("{}\n", res.labels.to_text()))
            .map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn certify_cmd(a: CertifyArgs, out: &mut dyn Write) -> Result<()> {
    let (_, obs) = load_pair(&a.graph, &a.obs)?;
    let labels = Labeling::read(&a.labels)?;
    let rep = solve::build_certificate(&obs, &labels, a.tolerance)?;
    print_certificate(out, &rep)?;
    let diag: Vec<String> = rep.v_diagonal.iter().map(|v| v.to_string()).collect();
    writeln!(out, "v_diagonal={}", diag.join(" ")).map_err(io_out)?;
    writeln!(out, "null_residual={:.3e}", rep.null_residual).map_err(io_out)
}

fn cheeger_cmd(a: CheegerArgs, out: &mut dyn Write) -> Result<()> {
    let g = Graph::read(&a.graph)?;
    if g.n() <= CHEEGER_EXACT_LIMIT || !g.is_connected() {
        let rep = graph::cheeger_exact(&g)?;
        let members: Vec<String> = rep.best_set.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "phi={} (|S|={}, cut={})",
            rep.ratio_string(),
            rep.best_set.len(),
            rep.cut_edges
        )
        .map_err(io_out)?;
        writeln!(out, "S={}", members.join(" ")).map_err(io_out)
    } else {
        let (lo, hi) = spectral::cheeger_bounds_spectral(&g)?;
        writeln!(
            out,
            "phi in [{lo:.6}, {hi:.6}] (spectral; n={} exceeds the exact limit {CHEEGER_EXACT_LIMIT})",
            g.n()
        )
        .map_err(io_out)
    }
}

fn bounds_cmd(a: BoundsArgs, out: &mut dyn Write) -> Result<()> {
    let graph_stats = a.graph.as_deref().map(Graph::read).transpose()?.map(|g| {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        GraphStats::of(&g)
    });
    let graph_stats = graph_stats.transpose()?;
    let ns: Vec<usize> = match &graph_stats {
        Some(s) => vec![s.n],
        None if a.n.is_empty() => {
            return Err(Error::InvalidArgument(
                "--n is required without --graph".into(),
            ))
        }
        None => a.n.clone(),
    };
    writeln!(
        out,
        "{:>9} {:>10} {:>6} {:>6} {:>6} {:>13} {:>13} {:>13} {:>8}",
        "n", "phi", "dmax", "p", "q", "eps1", "eps2", "combined", "vacuous"
    )
    .map_err(io_out)?;
    for &n in &ns {
        let (phi, dmax) = if let Some(s) = &graph_stats {
            (s.phi, s.dmax)
        } else if a.complete {
            (bounds::complete_graph_phi(n), n.saturating_sub(1))
        } else if let (Some(c), Some(d)) = (a.expander, a.degree) {
            (bounds::expander_phi(c, d), d)
        } else if let (Some(phi), Some(d)) = (a.phi, a.dmax) {
            (phi, d)
        } else {
            return Err(Error::InvalidArgument(
                "give one of --phi/--dmax, --complete, --expander/--degree or --graph".into(),
            ));
        };
        for &p in &a.p {
            let b = bounds::combined(phi, dmax, n, p, a.q)?;
            writeln!(
                out,
                "{:>9} {:>10.4} {:>6} {:>6} {:>6} {:>13.6e} {:>13.6e} {:>13.6e} {:>8}",
                n,
                phi,
                dmax,
                p,
                a.q,
                b.eps1,
                b.eps2,
                b.combined_success,
                yes_no(b.vacuous)
            )
            .map_err(io_out)?;
        }
    }
    if let Some(eps) = a.smoothed_epsilon {
        for &n in &ns {
            let (phi_lb, prob_lb) = bounds::smoothed_cheeger_bound(n as f64, eps)?;
            writeln!(
                out,
                "smoothed n={n} epsilon={eps}: phi >= {phi_lb:.6e} with probability >= {prob_lb:.12}"
            )
            .map_err(io_out)?;
        }
    }
    Ok(())
}

fn sweep_cmd(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = ExperimentConfig::read(&a.config)?;
    let prefix = a
        .out
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| a.config.with_extension(""));
    let art = harness::run_sweep(&cfg, &prefix)?;
    let s = &art.summary;
    writeln!(
        out,
        "{} n={} q={} trials={} phi={}{} dmax={}",
        s.family,
        s.n,
        s.q,
        s.trials_per_point,
        s.graph.phi,
        if s.graph.phi_exact {
            ""
        } else {
            " (spectral lower bound)"
        },
        s.graph.dmax
    )
    .map_err(io_out)?;
    for pt in &s.points {
        writeln!(
            out,
            "p={:<6} recovered={:.3} certified={:.3} sign_class={:.3} mean_hamming={:.3}",
            pt.p, pt.recovery_rate, pt.certification_rate, pt.sign_class_rate, pt.mean_hamming
        )
        .map_err(io_out)?;
    }
    writeln!(out, "wrote {}", art.csv.display()).map_err(io_out)?;
    writeln!(out, "wrote {}", art.json.display()).map_err(io_out)?;
    if let Some(svg) = &art.svg {
        writeln!(out, "wrote {}", svg.display()).map_err(io_out)?;
    }
    Ok(())
}
