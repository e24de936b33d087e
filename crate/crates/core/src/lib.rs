//! Gradient dynamics in two-player differentiable games.
//!
//! * [`game`]: constructed games with closed-form losses, gradients and
//!   Hessians, plus critical-point classification.
//! * [`matrix`]: 2x2 linear algebra and the `S + A` / `H_d + H_o` splittings.
//! * [`algorithms`]: ten update rules of the form `θ ← θ − αG(θ)`.
//! * [`dynamics`]: trajectories, outcome classification and sweeps.
//! * [`certify`]: exact resultant + Sturm certificates of a unique
//!   critical point.
//! * [`io`]: CSV and JSON output formats.
//!
//! Sweeps run on rayon when the `parallel` feature (default) is enabled.

// `!(a < b)` is used on purpose throughout: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod certify;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod io;
pub mod matrix;

pub use algorithms::{AlgoId, AlgoState, HyperParams};
pub use dynamics::{Execution, Init, Outcome, OutcomeKind, RunConfig, SweepResult, Trajectory};
pub use error::{Error, Result};
pub use game::{CriticalClass, GameEval, GameId, Params};
pub use matrix::{DefinitenessReport, Matrix2};
