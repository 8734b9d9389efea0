//! Online maximization of non-monotone continuous DR-submodular reward
//! streams over down-closed polytopes.
//!
//! Three measured Frank-Wolfe variants cover the feedback spectrum:
//!
//! * [`meta::MetaMfw`] — full information, K stochastic gradients per round;
//! * [`mono::MonoMfw`] — one-shot, a single stochastic gradient per reward;
//! * [`bandit::BanditMfw`] — bandit feedback, one-point value probes only.
//!
//! Supporting machinery: a dense-simplex LP and Frank-Wolfe projection over
//! [`polytope::DownClosedPolytope`], a bank of projected online gradient
//! ascent oracles ([`online_linear::OracleBank`]), counting gradient/value
//! oracles with a one-point gradient estimator ([`oracles`]), the quadratic
//! and revenue objective families ([`objectives`]), and an experiment
//! harness with CSV/JSON reporting ([`harness`]).
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `mfw` binary exposes the same harness as `gen`/`run`/`reference`/
//! `report` subcommands.

pub mod bandit;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod meta;
pub mod mono;
pub mod objectives;
pub mod offline;
pub mod online_linear;
pub mod oracles;
pub mod polytope;
pub mod rng;
pub mod schedule;
pub mod simplex;

pub use error::{Error, Result};
