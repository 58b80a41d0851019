//! Simple undirected graphs, the generator families used in experiments, and
//! exhaustive edge expansion.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

/// Largest graph accepted by [`cheeger_exact`].
pub const CHEEGER_EXACT_LIMIT: usize = 24;

/// Consecutive configuration-model samples rejected before giving up.
pub const REGULAR_MAX_ATTEMPTS: usize = 1000;

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically and free
/// of duplicates. Adjacency lists are derived from the edge list and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list in any order and orientation.
    ///
    /// Self-loops, out-of-range endpoints and repeated edges are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(
                "a graph needs at least one vertex".into(),
            ));
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) has an endpoint outside [0, {n})"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, normalized))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (i, j) = (a.min(b), a.max(b));
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Union of the two edge sets on the same vertex set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!(
                "cannot union graphs on {} and {} vertices",
                self.n, other.n
            )));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted(self.n, edges))
    }

    /// Number of edges with exactly one endpoint in `set`.
    pub fn cut_size(&self, set: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(i, j)| inside[i] != inside[j])
            .count()
    }

    /// Serializes to the text format: `n m`, then one `i j` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    /// Parses the text format. Edges must already be normalized and sorted.
    pub fn parse(text: &str, origin: &str) -> Result<Graph> {
        let perr = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing `n m` header".into()))?;
        let (n, m) = parse_pair(header).map_err(|e| perr(hline, e))?;
        if n == 0 {
            return Err(perr(hline, "vertex count must be at least 1".into()));
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
        for (line, content) in lines.by_ref() {
            if edges.len() == m {
                return Err(perr(line, format!("more than the declared {m} edges")));
            }
            let (i, j) = parse_pair(content).map_err(|e| perr(line, e))?;
            if i >= j {
                return Err(perr(line, format!("edge ({i}, {j}) must satisfy i < j")));
            }
            if j >= n {
                return Err(perr(line, format!("vertex {j} out of range for n = {n}")));
            }
            if let Some(&prev) = edges.last() {
                if prev >= (i, j) {
                    return Err(perr(
                        line,
                        format!("edge ({i}, {j}) is duplicated or out of sorted order"),
                    ));
                }
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(perr(
                text.lines().count().max(1),
                format!("expected {m} edges, found {}", edges.len()),
            ));
        }
        Ok(Self::from_sorted(n, edges))
    }

    pub fn read(path: &Path) -> Result<Graph> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

fn parse_pair(line: &str) -> std::result::Result<(usize, usize), String> {
    let mut it = line.split_whitespace();
    let mut next = || -> std::result::Result<usize, String> {
        let tok = it.next().ok_or("expected two integers")?;
        tok.parse::<usize>()
            .map_err(|_| format!("`{tok}` is not a non-negative integer"))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err("expected exactly two integers".into());
    }
    Ok((a, b))
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let edges = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    Ok(Graph::from_sorted(n, edges))
}

/// Cycle `C_n`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `rows x cols` lattice with 4-neighborhoods and no wraparound. Vertex
/// `r * cols + c` sits at row `r`, column `c`.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(Error::InvalidSize(format!(
            "grid needs rows * cols >= 2, got {rows} x {cols}"
        )));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges)
}

/// Uniform-ish simple connected `d`-regular graph via the configuration model.
///
/// Stub pairings containing a self-loop or a repeated edge, or producing a
/// disconnected graph, are rejected and redrawn from the same stream.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "no simple {d}-regular graph on {n} vertices (need d < n and n*d even)"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..REGULAR_MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue 'attempt;
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = Graph::from_sorted(n, edges);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailure {
        attempts: REGULAR_MAX_ATTEMPTS,
        reason: format!("no simple connected {d}-regular graph on {n} vertices sampled"),
    })
}

/// Erdős–Rényi `G(n, prob)`. Pairs are visited in lexicographic order, one
/// draw each. The result may be disconnected.
pub fn erdos_renyi(n: usize, prob: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize(
            "a graph needs at least one vertex".into(),
        ));
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameters(format!(
            "edge probability {prob} outside [0, 1]"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng::bernoulli(&mut rng, prob) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_sorted(n, edges))
}

/// Adds an independent `ER(n, epsilon / n)` edge set to `base`.
pub fn smooth(base: &Graph, epsilon: f64, seed: u64) -> Result<Graph> {
    let n = base.n();
    let prob = epsilon / n as f64;
    if epsilon.is_nan() || epsilon < 0.0 || prob > 1.0 {
        return Err(Error::InvalidParameters(format!(
            "smoothing epsilon {epsilon} must lie in [0, n = {n}]"
        )));
    }
    base.union(&erdos_renyi(n, prob, seed)?)
}

/// Free-function form of [`Graph::is_connected`].
pub fn is_connected(g: &Graph) -> bool {
    g.is_connected()
}

/// Free-function form of [`Graph::max_degree`].
pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

/// Minimizing set of an edge-expansion search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    /// Sorted vertices of the minimizing set, `1 <= |S| <= n / 2`.
    pub best_set: Vec<usize>,
    /// Edges leaving `best_set`.
    pub cut_edges: usize,
}

impl CutReport {
    /// Expansion as a reduced fraction `(numerator, denominator)`.
    pub fn ratio(&self) -> (usize, usize) {
        let size = self.best_set.len();
        let g = gcd(self.cut_edges, size);
        (self.cut_edges / g, size / g)
    }

    pub fn expansion(&self) -> f64 {
        self.cut_edges as f64 / self.best_set.len() as f64
    }

    /// `2`, or `2/3` for non-integral expansions.
    pub fn ratio_string(&self) -> String {
        match self.ratio() {
            (num, 1) => num.to_string(),
            (num, den) => format!("{num}/{den}"),
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exact edge expansion `min |E(S, S^C)| / |S|` over `1 <= |S| <= n/2`.
///
/// Ties prefer the smaller set, then the lexicographically smaller one.
/// Disconnected graphs return their smallest component with expansion zero.
pub fn cheeger_exact(g: &Graph) -> Result<CutReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidSize(
            "edge expansion needs at least two vertices".into(),
        ));
    }
    if !g.is_connected() {
        let mut comps = g.components();
        // components() is ordered by smallest vertex, and a stable sort keeps
        // that order among equal sizes.
        comps.sort_by_key(Vec::len);
        let best_set = comps.swap_remove(0);
        return Ok(CutReport {
            best_set,
            cut_edges: 0,
        });
    }
    if n > CHEEGER_EXACT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: CHEEGER_EXACT_LIMIT,
            hint: "use cheeger_bounds_spectral for larger graphs",
        });
    }

    let adj_mask: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let deg: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    let full: u32 = (1u32 << n) - 1;
    let half = n / 2;

    let mut best = Candidate {
        mask: 0,
        size: 0,
        cut: 0,
    };
    let mut consider = |c: Candidate| {
        if best.size == 0 || c.beats(&best) {
            best = c;
        }
    };

    // Gray-code walk over subsets of the first n-1 vertices; each subset S
    // stands for both S and its complement (which holds vertex n-1).
    let (mut mask, mut size, mut cut) = (0u32, 0usize, 0i64);
    for k in 1u64..(1u64 << (n - 1)) {
        let v = k.trailing_zeros() as usize;
        let bit = 1u32 << v;
        let inside = (adj_mask[v] & mask).count_ones() as i64;
        if mask & bit == 0 {
            cut += deg[v] - 2 * inside;
            size += 1;
        } else {
            cut -= deg[v] - 2 * inside;
            size -= 1;
        }
        mask ^= bit;
        if size <= half {
            consider(Candidate { mask, size, cut });
        }
        if n - size <= half {
            consider(Candidate {
                mask: full ^ mask,
                size: n - size,
                cut,
            });
        }
    }

    let best_set = (0..n).filter(|&v| best.mask & (1 << v) != 0).collect();
    Ok(CutReport {
        best_set,
        cut_edges: best.cut as usize,
    })
}

#[derive(Clone, Copy)]
struct Candidate {
    mask: u32,
    size: usize,
    cut: i64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        let lhs = self.cut * other.size as i64;
        let rhs = other.cut * self.size as i64;
        if lhs != rhs {
            return lhs < rhs;
        }
        if self.size != other.size {
            return self.size < other.size;
        }
        // Equal sizes: the lowest differing vertex decides lexicographic order.
        let diff = self.mask ^ other.mask;
        diff != 0 && self.mask & (diff & diff.wrapping_neg()) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_expansion(g: &Graph) -> (usize, usize) {
        let n = g.n();
        let mut best: Option<(usize, usize)> = None;
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if set.len() > n / 2 {
                continue;
            }
            let cut = g.cut_size(&set);
            let better = match best {
                None => true,
                Some((c, s)) => cut * s < c * set.len(),
            };
            if better {
                best = Some((cut, set.len()));
            }
        }
        best.unwrap()
    }

    #[test]
    fn complete_graph_counts() {
        let k4 = complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.degrees().iter().all(|&d| d == 3));
        let k2 = complete(2).unwrap();
        assert_eq!(k2.edges(), &[(0, 1)]);
        let k12 = complete(12).unwrap();
        assert_eq!(k12.max_degree(), 11);
        assert_eq!(cheeger_exact(&k12).unwrap().ratio(), (6, 1));
        assert!(matches!(complete(1), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn grid_and_cycle_shapes() {
        assert_eq!(grid(2, 2).unwrap().edge_count(), 4);
        let g33 = grid(3, 3).unwrap();
        assert_eq!(g33.edge_count(), 12);
        assert_eq!(g33.max_degree(), 4);
        assert!(g33.is_connected());
        let c6 = cycle(6).unwrap();
        assert_eq!(c6.edge_count(), 6);
        assert!(c6.degrees().iter().all(|&d| d == 2));
        assert!(c6.is_connected());
        assert!(grid(1, 1).is_err());
        assert!(cycle(2).is_err());
    }

    #[test]
    fn connectivity() {
        let two_edges = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!is_connected(&two_edges));
        assert!(is_connected(&cycle(6).unwrap()));
        assert_eq!(max_degree(&grid(3, 3).unwrap()), 4);
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(0, []).is_err());
        let g = Graph::new(3, [(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn random_regular_cases() {
        let k4 = random_regular(4, 3, 5).unwrap();
        assert_eq!(k4, complete(4).unwrap());
        assert_eq!(
            random_regular(8, 3, 42).unwrap(),
            random_regular(8, 3, 42).unwrap()
        );
        let g = random_regular(10, 3, 3).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert!(matches!(
            random_regular(5, 3, 1),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            random_regular(4, 4, 1),
            Err(Error::InvalidParameters(_))
        ));
        // A perfect matching on 4 vertices is never connected.
        assert!(matches!(
            random_regular(4, 1, 1),
            Err(Error::GenerationFailure { .. })
        ));
    }

    #[test]
    fn erdos_renyi_extremes_and_count() {
        assert_eq!(erdos_renyi(5, 0.0, 3).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(5, 1.0, 3).unwrap(), complete(5).unwrap());
        let g = erdos_renyi(100, 0.05, 7).unwrap();
        let mean = 4950.0 * 0.05;
        let sd = (4950.0f64 * 0.05 * 0.95).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sd);
        assert!(erdos_renyi(5, 1.5, 3).is_err());
    }

    #[test]
    fn smoothing_cases() {
        let c = cycle(10).unwrap();
        assert_eq!(smooth(&c, 0.0, 1).unwrap(), c);
        let k5 = complete(5).unwrap();
        assert_eq!(smooth(&k5, 5.0, 2).unwrap(), k5);
        let c100 = cycle(100).unwrap();
        let eps = 100f64.ln().powi(8);
        assert!(smooth(&c100, eps, 9).is_err(), "log^8(100) exceeds n");
        let s = smooth(&c100, 8.0, 9).unwrap();
        assert!(c100.edges().iter().all(|&(i, j)| s.has_edge(i, j)));
        assert!(s.edge_count() > c100.edge_count());
        assert!(smooth(&c, 11.0, 1).is_err());
        assert!(smooth(&c, -1.0, 1).is_err());
    }

    #[test]
    fn cheeger_small_cases() {
        let k4 = cheeger_exact(&complete(4).unwrap()).unwrap();
        assert_eq!((k4.cut_edges, k4.best_set.len()), (4, 2));
        assert_eq!(k4.best_set, vec![0, 1]);
        let p2 = cheeger_exact(&complete(2).unwrap()).unwrap();
        assert_eq!(p2.ratio(), (1, 1));
        assert_eq!(p2.best_set, vec![0]);
        let c6 = cheeger_exact(&cycle(6).unwrap()).unwrap();
        assert_eq!(c6.ratio(), (2, 3));
        assert_eq!(c6.best_set, vec![0, 1, 2]);
        assert_eq!(c6.ratio_string(), "2/3");
    }

    #[test]
    fn cheeger_matches_plain_enumeration() {
        for seed in 0..40 {
            let n = 3 + (seed as usize % 8);
            let g = erdos_renyi(n, 0.5, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let fast = cheeger_exact(&g).unwrap();
            let (c, s) = brute_expansion(&g);
            assert_eq!(fast.cut_edges * s, c * fast.best_set.len(), "seed {seed}");
            assert_eq!(g.cut_size(&fast.best_set), fast.cut_edges);
            assert!(fast.best_set.len() <= n / 2);
        }
    }

    #[test]
    fn cheeger_disconnected_and_limits() {
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let r = cheeger_exact(&g).unwrap();
        assert_eq!(r.cut_edges, 0);
        assert_eq!(r.best_set, vec![3, 4]);
        assert!(matches!(
            cheeger_exact(&cycle(25).unwrap()),
            Err(Error::TooLarge { .. })
        ));
        assert!(cheeger_exact(&Graph::new(1, []).unwrap()).is_err());
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let g = grid(2, 3).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("6 7\n0 1\n"));
        assert_eq!(Graph::parse(&text, "mem").unwrap(), g);

        let err = Graph::parse("3 2\n0 1\n1 1\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = Graph::parse("3 2\n1 2\n0 1\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Graph::parse("3 2\n0 1\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Graph::parse("3 1\n0 5\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Graph::parse("3 x\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
