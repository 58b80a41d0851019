//! Closed-form failure probabilities for the two inference stages and the
//! smoothed-expansion guarantee. Logarithms are natural throughout.

use serde::Serialize;

use crate::error::{Error, Result};

/// Failure-probability bound for stage one:
///
/// `2n · exp(-3(1-2p)²φ⁴ / (1536 Δ³ p(1-p) + 32 (1-2p)(1-p) φ² Δ))`.
pub fn eps1(phi: f64, dmax: usize, p: f64, n: usize) -> Result<f64> {
    if !phi.is_finite() || phi <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "phi = {phi} must be positive"
        )));
    }
    if dmax == 0 {
        return Err(Error::InvalidParameters(
            "max degree must be at least 1".into(),
        ));
    }
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidParameters(format!(
            "p = {p} outside (0, 0.5)"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let d = dmax as f64;
    let signal = 1.0 - 2.0 * p;
    let numerator = 3.0 * signal * signal * phi.powi(4);
    let denominator =
        1536.0 * d.powi(3) * p * (1.0 - p) + 32.0 * signal * (1.0 - p) * phi * phi * d;
    Ok(2.0 * n as f64 * (-numerator / denominator).exp())
}

/// Failure-probability bound for stage two: `exp(-(n/2)(1-2q)²)`.
pub fn eps2(n: usize, q: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    if !(q > 0.0 && q < 0.5) {
        return Err(Error::InvalidParameters(format!(
            "q = {q} outside (0, 0.5)"
        )));
    }
    let signal = 1.0 - 2.0 * q;
    Ok((-(n as f64) / 2.0 * signal * signal).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryBounds {
    pub eps1: f64,
    pub eps2: f64,
    /// `1 - eps1 - eps2`, unclamped.
    pub combined_success: f64,
    pub phi_used: f64,
    pub dmax_used: usize,
    /// The combined guarantee says nothing (`combined_success <= 0`).
    pub vacuous: bool,
}

/// Exact recovery probability lower bound `1 - ε1 - ε2`.
pub fn combined(phi: f64, dmax: usize, n: usize, p: f64, q: f64) -> Result<RecoveryBounds> {
    let e1 = eps1(phi, dmax, p, n)?;
    let e2 = eps2(n, q)?;
    let combined_success = 1.0 - e1 - e2;
    Ok(RecoveryBounds {
        eps1: e1,
        eps2: e2,
        combined_success,
        phi_used: phi,
        dmax_used: dmax,
        vacuous: combined_success <= 0.0,
    })
}

/// Edge expansion of `K_n`: `ceil(n/2)`.
pub fn complete_graph_phi(n: usize) -> f64 {
    n.div_ceil(2) as f64
}

/// Expansion floor `c·d` of a `d`-regular expander with constant `c`.
pub fn expander_phi(c: f64, d: usize) -> f64 {
    c * d as f64
}

/// Expansion lower bound after adding `ER(n, ε/n)` edges to a connected graph:
/// returns `(ε / (256 + 256 ln n), 1 - n^(-2.2 - ln(ε)/2))`.
///
/// `n` is real-valued so the formula can be probed at non-integer points.
pub fn smoothed_cheeger_bound(n: f64, epsilon: f64) -> Result<(f64, f64)> {
    if n.is_nan() || n < 1.0 {
        return Err(Error::InvalidParameters(format!(
            "n = {n} must be at least 1"
        )));
    }
    if !(epsilon >= 1.0 && epsilon <= n) {
        return Err(Error::InvalidParameters(format!(
            "epsilon = {epsilon} outside [1, n = {n}]"
        )));
    }
    let phi_lb = epsilon / (256.0 + 256.0 * n.ln());
    let prob_lb = 1.0 - n.powf(-2.2 - epsilon.ln() / 2.0);
    Ok((phi_lb, prob_lb))
}
