//! Generative model: a hidden ±1 labeling observed through independently
//! flipped edge products and node labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Deref;
use std::path::Path;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;
use crate::spectral::{check_signs, SymMatrix};

/// Vector of ±1 labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling(Vec<i8>);

impl Labeling {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        check_signs(&values, values.len())?;
        Ok(Labeling(values))
    }

    pub fn all_ones(n: usize) -> Self {
        Labeling(vec![1; n])
    }

    /// Uniform over `{±1}^n`, one draw per vertex.
    pub fn random(n: usize, rng: &mut impl RngCore) -> Self {
        Labeling((0..n).map(|_| sample_biased_rademacher(0.5, rng)).collect())
    }

    pub fn negated(&self) -> Self {
        Labeling(self.0.iter().map(|&v| -v).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| f64::from(v)).collect()
    }

    pub fn hamming(&self, other: &Labeling) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Equal to `other` or to `-other`.
    pub fn same_sign_class(&self, other: &Labeling) -> bool {
        let d = self.hamming(other);
        d == 0 || d == self.len()
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }

    pub fn to_text(&self) -> String {
        join_signs(&self.0)
    }

    /// Parses whitespace-separated `+1`, `1` or `-1` tokens.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let values = parse_signs(text.trim(), origin, 1)?;
        Ok(Labeling(values))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

impl Deref for Labeling {
    type Target = [i8];

    fn deref(&self) -> &[i8] {
        &self.0
    }
}

fn join_signs(values: &[i8]) -> String {
    let words: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    words.join(" ")
}

fn parse_signs(line: &str, origin: &str, lineno: usize) -> Result<Vec<i8>> {
    line.split_whitespace()
        .map(|tok| match tok {
            "1" | "+1" => Ok(1),
            "-1" => Ok(-1),
            other => Err(Error::Parse {
                path: origin.to_string(),
                line: lineno,
                message: format!("`{other}` is not +1 or -1"),
            }),
        })
        .collect()
}

/// Edge flip probability `p` and node flip probability `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub p: f64,
    pub q: f64,
}

impl NoiseParams {
    /// Accepts `0 <= p, q < 0.5`; zero noise is allowed for fixtures.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::InvalidParameters(format!(
                    "noise {name} = {v} outside [0, 0.5)"
                )));
            }
        }
        Ok(NoiseParams { p, q })
    }
}

/// Noisy edge products `X` (supported on the graph's edges) and node labels `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observations {
    n: usize,
    x_edges: BTreeMap<(usize, usize), i8>,
    c: Vec<i8>,
}

impl Observations {
    pub fn new(
        n: usize,
        x_edges: impl IntoIterator<Item = ((usize, usize), i8)>,
        c: Vec<i8>,
    ) -> Result<Self> {
        check_signs(&c, n)?;
        let mut map = BTreeMap::new();
        for ((i, j), s) in x_edges {
            if i >= j || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge key ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i}, {j}) observation {s} is not ±1"
                )));
            }
            if map.insert((i, j), s).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Observations { n, x_edges: map, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_edges(&self) -> &BTreeMap<(usize, usize), i8> {
        &self.x_edges
    }

    pub fn c(&self) -> &[i8] {
        &self.c
    }

    /// `X_ij`, zero off the support.
    pub fn x(&self, i: usize, j: usize) -> i8 {
        let key = (i.min(j), i.max(j));
        self.x_edges.get(&key).copied().unwrap_or(0)
    }

    /// Graph whose edge set is the support of `X`.
    pub fn support_graph(&self) -> Graph {
        Graph::new(self.n, self.x_edges.keys().copied())
            .expect("observation keys are validated on construction")
    }

    pub fn has_support(&self, g: &Graph) -> bool {
        g.n() == self.n
            && g.edge_count() == self.x_edges.len()
            && g.edges()
                .iter()
                .zip(self.x_edges.keys())
                .all(|(a, b)| a == b)
    }

    /// Per-vertex `(neighbor, X_ij)` lists.
    pub fn signed_neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut out = vec![Vec::new(); self.n];
        for (&(i, j), &s) in &self.x_edges {
            out[i].push((j, f64::from(s)));
            out[j].push((i, f64::from(s)));
        }
        out
    }

    /// Dense symmetric `X` with zero diagonal.
    pub fn dense_x(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.n);
        for (&(i, j), &s) in &self.x_edges {
            m.set(i, j, f64::from(s));
        }
        m
    }

    /// Text format: `n m`, `m` lines `i j s`, then one line holding `c`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.x_edges.len());
        for (&(i, j), &s) in &self.x_edges {
            let _ = writeln!(out, "{i} {j} {s}");
        }
        out.push_str(&join_signs(&self.c));
        out.push('\n');
        out
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let (hline, header) = *lines
            .first()
            .ok_or_else(|| perr(1, "missing `n m` header".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match head.as_slice() {
            [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(n), Ok(m)) => (n, m),
                _ => return Err(perr(hline, "header must be two integers `n m`".into())),
            },
            _ => return Err(perr(hline, "header must be two integers `n m`".into())),
        };
        if lines.len() != m + 2 {
            let last = lines.last().map_or(1, |l| l.0);
            return Err(perr(
                last,
                format!(
                    "expected {m} edge lines and one node line, found {} lines after the header",
                    lines.len() - 1
                ),
            ));
        }
        let mut edges = Vec::with_capacity(m);
        let mut prev: Option<(usize, usize)> = None;
        for &(line, content) in &lines[1..=m] {
            let toks: Vec<&str> = content.split_whitespace().collect();
            let [a, b, s] = toks.as_slice() else {
                return Err(perr(line, "edge line must be `i j s`".into()));
            };
            let (i, j) = match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(i), Ok(j)) => (i, j),
                _ => return Err(perr(line, "edge endpoints must be integers".into())),
            };
            if i >= j || j >= n {
                return Err(perr(
                    line,
                    format!("edge ({i}, {j}) must satisfy i < j < {n}"),
                ));
            }
            if prev.is_some_and(|p| p >= (i, j)) {
                return Err(perr(line, "edges must be sorted without duplicates".into()));
            }
            prev = Some((i, j));
            let sign = parse_signs(s, origin, line)?;
            edges.push(((i, j), sign[0]));
        }
        let (cline, ctext) = lines[m + 1];
        let c = parse_signs(ctext, origin, cline)?;
        if c.len() != n {
            return Err(perr(
                cline,
                format!("expected {n} node observations, found {}", c.len()),
            ));
        }
        Observations::new(n, edges, c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// `+1` with probability `1 - p`, `-1` with probability `p`. One draw.
pub fn sample_biased_rademacher(p: f64, rng: &mut impl RngCore) -> i8 {
    debug_assert!((0.0..=1.0).contains(&p));
    if rng::bernoulli(rng, p) {
        -1
    } else {
        1
    }
}

/// Samples `X_uv = y*_u y*_v z_p` on every edge and `c_u = y*_u z_q` on every
/// vertex. Edge draws come first in sorted edge order, then node draws.
pub fn generate_observations(
    g: &Graph,
    truth: &Labeling,
    params: NoiseParams,
    seed: u64,
) -> Result<Observations> {
    if truth.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "labeling has {} entries for {} vertices",
            truth.len(),
            g.n()
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut x_edges = BTreeMap::new();
    for &(u, v) in g.edges() {
        let z = sample_biased_rademacher(params.p, &mut rng);
        x_edges.insert((u, v), truth[u] * truth[v] * z);
    }
    let c = truth
        .iter()
        .map(|&y| y * sample_biased_rademacher(params.q, &mut rng))
        .collect();
    Ok(Observations {
        n: g.n(),
        x_edges,
        c,
    })
}

/// Weight of the node term in the likelihood score,
/// `log((1-q)/q) / log((1-p)/p)`.
pub fn alpha(params: NoiseParams) -> Result<f64> {
    let NoiseParams { p, q } = params;
    let open = |v: f64| v > 0.0 && v < 0.5;
    if !open(p) || !open(q) {
        return Err(Error::UndefinedAlpha { p, q });
    }
    Ok(((1.0 - q) / q).ln() / ((1.0 - p) / p).ln())
}

/// `Σ_(u,v)∈E X_uv y_u y_v`, i.e. `½ yᵀXy`.
pub fn score_quadratic(y: &[i8], obs: &Observations) -> f64 {
    assert_eq!(y.len(), obs.n(), "labeling size mismatch");
    obs.x_edges
        .iter()
        .map(|(&(u, v), &s)| f64::from(s * y[u] * y[v]))
        .sum()
}

/// `½ yᵀXy + a·cᵀy`.
pub fn score_full(y: &[i8], obs: &Observations, a: f64) -> f64 {
    let linear: f64 = obs.c.iter().zip(y).map(|(&c, &y)| f64::from(c * y)).sum();
    score_quadratic(y, obs) + a * linear
}
