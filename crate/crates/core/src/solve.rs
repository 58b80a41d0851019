//! Two-stage inference.
//!
//! Stage one maximizes `⟨X, Y⟩` over `Y ⪰ 0, diag(Y) = 1` with a low-rank
//! factorization `Y = ZZᵀ` and block-coordinate (mixing) updates, rounds the
//! factor to a sign vector, and checks a dual certificate proving that the
//! rounded labeling is the unique optimum. Stage two picks between `ŷ` and
//! `-ŷ` using the node observations.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::observe::{Labeling, Observations};
use crate::rng;
use crate::spectral::{dot, symmetric_eigen, SymMatrix};

/// Largest problem accepted by [`brute_force_max`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Seeds the random initialization of the factor rows.
    pub seed: u64,
    pub max_sweeps: usize,
    /// Stop once no row moves farther than this in a sweep.
    pub tolerance: f64,
    /// Factorization rank; defaults to `ceil(sqrt(2n)) + 1`.
    pub rank: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seed: 0,
            max_sweeps: 2000,
            tolerance: 1e-7,
            rank: None,
        }
    }
}

impl SolverOptions {
    pub fn with_seed(seed: u64) -> Self {
        SolverOptions {
            seed,
            ..Self::default()
        }
    }
}

/// Rank for which every second-order critical point of the factored problem
/// is globally optimal for diagonal-constrained programs.
pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize) + 1
}

/// Low-rank factor `Z` (unit-norm rows) of the relaxed solution `Y = ZZᵀ`.
#[derive(Debug, Clone)]
pub struct GramSolution {
    pub factor: Vec<Vec<f64>>,
    /// `⟨X, ZZᵀ⟩ = Σ_(i,j)∈E 2 X_ij ⟨z_i, z_j⟩`.
    pub objective: f64,
    pub sweeps: usize,
    pub converged: bool,
    pub max_row_move: f64,
}

impl GramSolution {
    pub fn n(&self) -> usize {
        self.factor.len()
    }

    pub fn rank(&self) -> usize {
        self.factor.first().map_or(0, Vec::len)
    }
}

/// Mixing-method state. Each [`sweep`](Self::sweep) replaces every row by the
/// exact maximizer of the objective with the other rows held fixed, so the
/// objective never decreases.
pub struct MixingSolver {
    neighbors: Vec<Vec<(usize, f64)>>,
    z: Vec<Vec<f64>>,
    sweeps: usize,
}

impl MixingSolver {
    pub fn new(obs: &Observations, opts: &SolverOptions) -> Result<Self> {
        let n = obs.n();
        if n < 2 {
            return Err(Error::InvalidSize(format!(
                "the relaxation needs n >= 2, got {n}"
            )));
        }
        let k = opts.rank.unwrap_or_else(|| default_rank(n));
        if k == 0 {
            return Err(Error::InvalidParameters(
                "factorization rank must be positive".into(),
            ));
        }
        let mut rng = rng::seeded(opts.seed);
        let z = (0..n)
            .map(|_| loop {
                let row: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = dot(&row, &row).sqrt();
                if norm > 1e-12 {
                    break row.into_iter().map(|v| v / norm).collect();
                }
            })
            .collect();
        Ok(MixingSolver {
            neighbors: obs.signed_neighbors(),
            z,
            sweeps: 0,
        })
    }

    /// One cyclic pass over the rows; returns the largest row movement.
    pub fn sweep(&mut self) -> f64 {
        let k = self.z[0].len();
        let mut grad = vec![0.0; k];
        let mut max_move = 0.0f64;
        for i in 0..self.z.len() {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for &(j, x) in &self.neighbors[i] {
                for (g, zj) in grad.iter_mut().zip(&self.z[j]) {
                    *g += x * zj;
                }
            }
            let norm = dot(&grad, &grad).sqrt();
            if norm <= f64::MIN_POSITIVE {
                continue;
            }
            let mut moved = 0.0;
            for (zi, g) in self.z[i].iter_mut().zip(&grad) {
                let new = g / norm;
                moved += (new - *zi) * (new - *zi);
                *zi = new;
            }
            max_move = max_move.max(moved.sqrt());
        }
        self.sweeps += 1;
        max_move
    }

    pub fn objective(&self) -> f64 {
        gram_objective(&self.neighbors, &self.z)
    }

    pub fn factor(&self) -> &[Vec<f64>] {
        &self.z
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }
}

fn gram_objective(neighbors: &[Vec<(usize, f64)>], z: &[Vec<f64>]) -> f64 {
    // Each edge appears in both endpoint lists, which supplies the factor 2.
    neighbors
        .iter()
        .enumerate()
        .map(|(i, list)| {
            list.iter()
                .map(|&(j, x)| x * dot(&z[i], &z[j]))
                .sum::<f64>()
        })
        .sum()
}

/// `⟨X, ZZᵀ⟩` recomputed from a factor.
pub fn factor_objective(obs: &Observations, factor: &[Vec<f64>]) -> f64 {
    obs.x_edges()
        .iter()
        .map(|(&(i, j), &s)| 2.0 * f64::from(s) * dot(&factor[i], &factor[j]))
        .sum()
}

/// Solves the relaxation by mixing sweeps until rows stop moving or the sweep
/// cap is hit. Hitting the cap is reported through `converged`, not an error.
pub fn solve_sdp(obs: &Observations, opts: &SolverOptions) -> Result<GramSolution> {
    let mut solver = MixingSolver::new(obs, opts)?;
    let mut converged = false;
    let mut max_row_move = f64::INFINITY;
    while solver.sweeps() < opts.max_sweeps {
        max_row_move = solver.sweep();
        if max_row_move < opts.tolerance {
            converged = true;
            break;
        }
    }
    Ok(GramSolution {
        objective: solver.objective(),
        sweeps: solver.sweeps(),
        converged,
        max_row_move,
        factor: solver.z,
    })
}

/// Signs of the factor rows projected on the leading right-singular direction
/// of `Z`. The direction is oriented so vertex 0 gets `+1`; zero projections
/// map to `+1`.
pub fn round_to_labels(sol: &GramSolution) -> Result<Labeling> {
    let k = sol.rank();
    let gram = SymMatrix::from_upper(k, |a, b| sol.factor.iter().map(|row| row[a] * row[b]).sum());
    let eig = symmetric_eigen(&gram)?;
    let lead = eig.vector(k - 1);
    let proj: Vec<f64> = sol.factor.iter().map(|row| dot(row, lead)).collect();
    let orient = match proj.iter().find(|v| **v != 0.0) {
        Some(v) if *v < 0.0 => -1.0,
        _ => 1.0,
    };
    let labels = proj
        .iter()
        .map(|v| if orient * v < 0.0 { -1 } else { 1 })
        .collect();
    Labeling::new(labels)
}

/// Eigenvalue evidence that `yyᵀ` is the unique optimum of the relaxation.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub certified: bool,
    pub tolerance: f64,
    /// `V_ii = Σ_j X_ij y_i y_j`.
    pub v_diagonal: Vec<f64>,
    /// `‖(V - X) y‖_∞`, zero up to rounding by construction.
    pub null_residual: f64,
}

/// Builds the diagonal dual candidate `V_ii = y_i (Xy)_i` and tests
/// `λ1(V - X) >= -τ` and `λ2(V - X) >= τ`, with `τ = 1e-7 · max(1, Δmax)`
/// unless `tolerance` overrides it.
pub fn build_certificate(
    obs: &Observations,
    y: &Labeling,
    tolerance: Option<f64>,
) -> Result<CertificateReport> {
    let n = obs.n();
    if y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "labeling has {} entries for {n} vertices",
            y.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidSize("certificate needs n >= 2".into()));
    }
    let neighbors = obs.signed_neighbors();
    let dmax = neighbors.iter().map(Vec::len).max().unwrap_or(0);
    let tau = tolerance.unwrap_or(1e-7 * (dmax.max(1) as f64));

    let yf = y.as_f64();
    let v_diagonal: Vec<f64> = neighbors
        .iter()
        .enumerate()
        .map(|(i, list)| list.iter().map(|&(j, x)| x * yf[i] * yf[j]).sum())
        .collect();
    let mut slack = obs.dense_x();
    for (i, &v) in v_diagonal.iter().enumerate() {
        slack.set(i, i, v);
        for j in (i + 1)..n {
            let x = slack.get(i, j);
            slack.set(i, j, -x);
        }
    }
    let null_residual = slack
        .mul_vec(&yf)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let eig = symmetric_eigen(&slack)?;
    let (lambda1, lambda2) = (eig.value(0), eig.value(1));
    Ok(CertificateReport {
        lambda1,
        lambda2,
        certified: lambda1 >= -tau && lambda2 >= tau,
        tolerance: tau,
        v_diagonal,
        null_residual,
    })
}

/// Exhaustive maximizer of `½ yᵀXy` over sign vectors with `y_0 = +1`.
///
/// Among maximizers the lexicographically smallest (with `-1 < +1`) wins.
pub fn brute_force_max(obs: &Observations) -> Result<(Labeling, f64)> {
    let n = obs.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
            hint: "rely on the certificate for larger instances",
        });
    }
    if n == 0 {
        return Err(Error::InvalidSize("empty problem".into()));
    }
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (&(i, j), &s) in obs.x_edges() {
        nbrs[i].push((j, i64::from(s)));
        nbrs[j].push((i, i64::from(s)));
    }
    let mut y: Vec<i64> = (0..n).map(|i| if i == 0 { 1 } else { -1 }).collect();
    let mut value: i64 = obs
        .x_edges()
        .iter()
        .map(|(&(i, j), &s)| i64::from(s) * y[i] * y[j])
        .sum();
    // Lexicographic key: vertex 1 is the most significant position, +1 sets the bit.
    let mut key: u64 = 0;
    let (mut best_value, mut best_key, mut best_y) = (value, key, y.clone());

    for step in 1u64..(1u64 << (n - 1)) {
        let v = 1 + step.trailing_zeros() as usize;
        let field: i64 = nbrs[v].iter().map(|&(j, x)| x * y[j]).sum();
        value -= 2 * y[v] * field;
        y[v] = -y[v];
        key ^= 1 << (n - 1 - v);
        if value > best_value || (value == best_value && key < best_key) {
            best_value = value;
            best_key = key;
            best_y.clone_from(&y);
        }
    }
    let labels = Labeling::new(best_y.into_iter().map(|v| v as i8).collect())?;
    Ok((labels, best_value as f64))
}

/// Returns `y` or `-y`, whichever has the larger `cᵀy`. A tie goes to the
/// candidate agreeing with `c` at vertex 0. The flag reports choosing `-y`.
pub fn stage2_select(y: &Labeling, obs: &Observations) -> (Labeling, bool) {
    let c = obs.c();
    let score: i64 = c
        .iter()
        .zip(y.iter())
        .map(|(&c, &y)| i64::from(c * y))
        .sum();
    let flip = match score.signum() {
        1 => false,
        -1 => true,
        _ => y.first().zip(c.first()).is_some_and(|(a, b)| a != b),
    };
    if flip {
        (y.negated(), true)
    } else {
        (y.clone(), false)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RecoverOptions {
    pub solver: SolverOptions,
    /// Certificate tolerance override.
    pub tolerance: Option<f64>,
    /// Ground truth, used only to report the Hamming distance.
    pub truth: Option<Labeling>,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    /// Final labels after sign selection.
    pub labels: Labeling,
    /// Rounded stage-one labels, before sign selection.
    pub stage1_labels: Labeling,
    pub certified: bool,
    pub certificate: CertificateReport,
    pub stage2_flipped: bool,
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
    /// Distance from `labels` to the supplied truth.
    pub hamming: Option<usize>,
}

/// Relaxation, rounding, certificate, then sign selection.
pub fn recover(
    g: &crate::graph::Graph,
    obs: &Observations,
    opts: &RecoverOptions,
) -> Result<PipelineResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !obs.has_support(g) {
        return Err(Error::InvalidArgument(
            "edge observations are not supported exactly on the graph's edges".into(),
        ));
    }
    if let Some(t) = &opts.truth {
        if t.len() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "truth has {} entries for {} vertices",
                t.len(),
                g.n()
            )));
        }
    }
    let sol = solve_sdp(obs, &opts.solver)?;
    let stage1 = round_to_labels(&sol)?;
    let certificate = build_certificate(obs, &stage1, opts.tolerance)?;
    let (labels, stage2_flipped) = stage2_select(&stage1, obs);
    let hamming = opts.truth.as_ref().map(|t| labels.hamming(t));
    Ok(PipelineResult {
        labels,
        stage1_labels: stage1,
        certified: certificate.certified,
        certificate,
        stage2_flipped,
        objective: sol.objective,
        converged: sol.converged,
        sweeps: sol.sweeps,
        hamming,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, Graph};
    use crate::observe::{generate_observations, score_quadratic, NoiseParams};

    fn k3(flip12: bool) -> Observations {
        let s = if flip12 { -1 } else { 1 };
        Observations::new(3, [((0, 1), 1), ((0, 2), 1), ((1, 2), s)], vec![1; 3]).unwrap()
    }

    fn single_column(y: &[i8]) -> GramSolution {
        GramSolution {
            factor: y.iter().map(|&v| vec![f64::from(v)]).collect(),
            objective: 0.0,
            sweeps: 0,
            converged: true,
            max_row_move: 0.0,
        }
    }

    #[test]
    fn noiseless_triangle() {
        let obs = k3(false);
        let sol = solve_sdp(&obs, &SolverOptions::with_seed(3)).unwrap();
        assert!(sol.converged);
        assert!((sol.objective - 6.0).abs() < 1e-9);
        assert_eq!(sol.rank(), default_rank(3));
        for row in &sol.factor {
            assert!((dot(row, row).sqrt() - 1.0).abs() < 1e-9);
        }
        assert!((factor_objective(&obs, &sol.factor) - sol.objective).abs() < 1e-9);
    }

    #[test]
    fn single_edge_aligns() {
        let obs = Observations::new(2, [((0, 1), 1)], vec![1, 1]).unwrap();
        let sol = solve_sdp(&obs, &SolverOptions::with_seed(1)).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-12);
        for (a, b) in sol.factor[0].iter().zip(&sol.factor[1]) {
            assert!((a - b).abs() < 1e-7);
        }
        assert!(solve_sdp(
            &Observations::new(1, [], vec![1]).unwrap(),
            &SolverOptions::default()
        )
        .is_err());
    }

    #[test]
    fn frustrated_triangle_relaxation_exceeds_combinatorial() {
        let obs = k3(true);
        let (_, best) = brute_force_max(&obs).unwrap();
        assert_eq!(best, 1.0);
        let sol = solve_sdp(&obs, &SolverOptions::with_seed(4)).unwrap();
        // Optimum places the three rows at 120° apart with one sign flipped: 3.
        assert!(sol.objective >= 2.0 * best - 1e-6);
        assert!(sol.objective > 2.0 * best + 0.5);
    }

    #[test]
    fn rounding_cases() {
        let y = [1i8, -1, -1, 1];
        let l = round_to_labels(&single_column(&y)).unwrap();
        assert_eq!(&l[..], &y);
        let neg: Vec<i8> = y.iter().map(|v| -v).collect();
        let l2 = round_to_labels(&single_column(&neg)).unwrap();
        assert!(l.same_sign_class(&l2));

        let g = cycle(8).unwrap();
        let truth = Labeling::new(vec![1, -1, 1, 1, -1, -1, 1, -1]).unwrap();
        let obs =
            generate_observations(&g, &truth, NoiseParams::new(0.0, 0.0).unwrap(), 2).unwrap();
        let sol = solve_sdp(&obs, &SolverOptions::with_seed(5)).unwrap();
        let l = round_to_labels(&sol).unwrap();
        assert!(l.same_sign_class(&truth));
        let (bf, _) = brute_force_max(&obs).unwrap();
        assert!(bf.same_sign_class(&l));
    }

    #[test]
    fn certificate_noiseless_triangle() {
        let obs = k3(false);
        let rep = build_certificate(&obs, &Labeling::all_ones(3), None).unwrap();
        assert_eq!(rep.v_diagonal, vec![2.0; 3]);
        assert!(rep.lambda1.abs() < 1e-12);
        assert!((rep.lambda2 - 3.0).abs() < 1e-12);
        assert!(rep.certified);
        assert_eq!(rep.null_residual, 0.0);
        assert!((rep.tolerance - 2e-7).abs() < 1e-20);
    }

    #[test]
    fn certificate_rejects_degenerate_optimum() {
        let obs = k3(true);
        let (y, _) = brute_force_max(&obs).unwrap();
        let rep = build_certificate(&obs, &y, None).unwrap();
        assert!(rep.lambda2.abs() < 1e-9, "{rep:?}");
        assert!(!rep.certified);
        assert!(rep.null_residual < 1e-12);
    }

    #[test]
    fn brute_force_cases() {
        let (y, v) = brute_force_max(&k3(false)).unwrap();
        assert_eq!((&y[..], v), (&[1i8, 1, 1][..], 3.0));
        let (y, v) = brute_force_max(&k3(true)).unwrap();
        assert_eq!(v, 1.0);
        // Maximizers with y_0 = +1: (+,+,+), (+,-,+), (+,+,-); the smallest is (+,-,+).
        assert_eq!(&y[..], &[1, -1, 1]);
        let empty = Observations::new(4, [], vec![1; 4]).unwrap();
        let (y, v) = brute_force_max(&empty).unwrap();
        assert_eq!((&y[..], v), (&[1i8, -1, -1, -1][..], 0.0));
        let big = Observations::new(21, [], vec![1; 21]).unwrap();
        assert!(matches!(brute_force_max(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn brute_force_value_matches_score() {
        let g = complete(9).unwrap();
        for seed in 0..10 {
            let mut r = rng::seeded(seed);
            let truth = Labeling::random(9, &mut r);
            let obs = generate_observations(&g, &truth, NoiseParams::new(0.3, 0.1).unwrap(), seed)
                .unwrap();
            let (y, v) = brute_force_max(&obs).unwrap();
            assert_eq!(score_quadratic(&y, &obs), v);
            assert_eq!(y[0], 1);
        }
    }

    #[test]
    fn stage2_cases() {
        let y = Labeling::new(vec![1, -1, 1]).unwrap();
        let same = Observations::new(3, [], y.to_vec()).unwrap();
        assert_eq!(stage2_select(&y, &same), (y.clone(), false));
        let opposite = Observations::new(3, [], y.negated().to_vec()).unwrap();
        assert_eq!(stage2_select(&y, &opposite), (y.negated(), true));
        // cᵀy = 0: agree with c at vertex 0.
        let y4 = Labeling::new(vec![1, 1, -1, -1]).unwrap();
        let tie = Observations::new(4, [], vec![-1, 1, 1, -1]).unwrap();
        assert_eq!(stage2_select(&y4, &tie), (y4.negated(), true));
        let tie2 = Observations::new(4, [], vec![1, -1, 1, -1]).unwrap();
        assert_eq!(stage2_select(&y4, &tie2), (y4.clone(), false));
    }

    #[test]
    fn pipeline_noiseless() {
        let g = complete(7).unwrap();
        let truth = Labeling::new(vec![1, -1, -1, 1, 1, -1, 1]).unwrap();
        let obs =
            generate_observations(&g, &truth, NoiseParams::new(0.0, 0.0).unwrap(), 1).unwrap();
        let opts = RecoverOptions {
            truth: Some(truth.clone()),
            ..Default::default()
        };
        let res = recover(&g, &obs, &opts).unwrap();
        assert_eq!(res.labels, truth);
        assert!(res.certified);
        assert_eq!(res.hamming, Some(0));

        let adversarial =
            Observations::new(7, obs.x_edges().clone(), truth.negated().to_vec()).unwrap();
        let res = recover(&g, &adversarial, &opts).unwrap();
        assert_eq!(res.labels, truth.negated());
        assert_eq!(res.hamming, Some(7));
    }

    #[test]
    fn pipeline_rejects_bad_inputs() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let obs = Observations::new(4, [((0, 1), 1), ((2, 3), 1)], vec![1; 4]).unwrap();
        assert!(matches!(
            recover(&g, &obs, &RecoverOptions::default()),
            Err(Error::Disconnected)
        ));
        let c4 = cycle(4).unwrap();
        assert!(recover(&c4, &obs, &RecoverOptions::default()).is_err());
    }
}
