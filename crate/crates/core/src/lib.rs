//! Exact recovery of binary labels from noisy pairwise and unary observations
//! on a known graph.
//!
//! Stage one solves a semidefinite relaxation of the pairwise problem with a
//! low-rank mixing method and proves optimality of the rounded labeling with a
//! diagonal dual certificate. Stage two resolves the global sign with the node
//! observations. Around that pipeline sit the spectral tools (signed
//! Laplacians, Cheeger-type inequalities), exhaustive oracles, closed-form
//! failure bounds, and a seeded Monte Carlo harness.
//!
//! ```
//! use exact_recovery::graph::complete;
//! use exact_recovery::observe::{generate_observations, Labeling, NoiseParams};
//! use exact_recovery::solve::{recover, RecoverOptions};
//!
//! let g = complete(8).unwrap();
//! let truth = Labeling::new(vec![1, -1, 1, 1, -1, -1, 1, -1]).unwrap();
//! let obs = generate_observations(&g, &truth, NoiseParams::new(0.0, 0.0).unwrap(), 1).unwrap();
//! let result = recover(&g, &obs, &RecoverOptions::default()).unwrap();
//! assert!(result.certified);
//! assert_eq!(result.labels, truth);
//! ```

pub mod bounds;
pub mod cli;
pub mod error;
pub mod graph;
pub mod harness;
pub mod observe;
pub mod rng;
pub mod solve;
pub mod spectral;

pub use error::{Error, Result};
