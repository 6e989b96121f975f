//! Core algorithms for operating an off-grid electricity–hydrogen–ammonia
//! microgrid under uncertainty.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`model`] turns a plant description ([`model::SystemConfig`],
//!    [`model::NetworkTopology`], [`model::SystemState`], forecasts) into a
//!    [`ir::ProblemIR`]: variables, linear constraints and tagged nonlinear
//!    atoms for one scheduling horizon.
//! 2. [`reform`] compiles the nonlinear atoms away — exact linearisations for
//!    binary products and one-hot selections, auxiliary-variable rewrites for
//!    reciprocals and quintic efficiency curves, and piecewise McCormick
//!    envelopes for whatever bilinear terms remain.
//! 3. [`solve`] is a deterministic branch-and-bound search over the
//!    reformulated problem with a pluggable convex conic subsolver (a small
//!    reference simplex/outer-approximation solver is built in).
//! 4. [`learn`] fits a Dirichlet-process Gaussian mixture to streaming
//!    disturbance data by online variational inference.
//! 5. [`dro`] builds moment ambiguity sets from the learned mixture and
//!    computes worst-case CVaR constraint-tightening margins as second-order
//!    cone programs, with a grid-LP primal oracle for cross-checking.
//! 6. [`control`] closes the loop: a state monitor with a predicted-risk
//!    flag switches each hourly solve between the deterministic problem and
//!    its distributionally robust tightened variant.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion harness
//! crate carries IO, file formats, the CLI and the Monte Carlo runner.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(rust_2018_idioms)]

extern crate alloc;

pub mod control;
pub mod dro;
pub mod ir;
pub mod learn;
pub(crate) mod math;
pub mod model;
pub mod reform;
pub mod solve;

pub use ir::{ProblemIR, Tag, VarId};
pub use solve::{SolveResult, SolveStatus, SolverOptions};
