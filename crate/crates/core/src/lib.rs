//! Hitting times of the simple random walk on the hypercube `{0,1}^n`.
//!
//! The crate covers exact single-point hitting quantities (Laplace
//! transforms, survival tables, inclusion-exclusion sums), Monte Carlo
//! hitting-time distributions with Kolmogorov-Smirnov comparison to the
//! exponential law, random target sets and the hypothesis checker for
//! exponential limits, and REM aging through the clock process.

// Guards like `!(x > 0.0)` are written that way so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod error;
pub mod exact_hitting;
pub mod random_sets;
pub mod rem_aging;
pub mod seeding;
pub mod vertex;
pub mod walk_mc;

pub use error::{Error, Result};
pub use vertex::Vertex;
