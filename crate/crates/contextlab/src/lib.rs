//! Contextuality analysis for systems of context-indexed random variables.
//!
//! Every measured property (*content*) gets a separate random variable per
//! measurement arrangement (*context*). The variables of one context form a
//! jointly distributed *bunch*; the variables of one content across
//! contexts form a *connection*, stochastically unrelated by default. A
//! system is **contextual** when no single joint distribution (a coupling)
//! can reproduce every bunch while making each connection's variables agree
//! as often as their marginals allow. That feasibility question, along with
//! deterministic hidden-variable model searches and non-signaling
//! diagnostics, is decided here by exact rational linear programming — no
//! floating point, no tolerances.
//!
//! Start from a scenario builder or a system file:
//!
//! ```
//! use contextlab::{cbd_contextuality, is_consistently_connected, scenarios};
//!
//! let system = scenarios::specker_system();
//! assert!(is_consistently_connected(&system).consistent);
//! assert!(cbd_contextuality(&system).unwrap().contextual);
//! ```
//!
//! The `examples/` directory walks through each capability; the
//! `contextlab` binary exposes the same analyses on system files.

pub mod coupling;
pub mod format;
pub mod hidden;
pub mod lp;
pub mod model;
pub mod rational;
pub mod report;
pub mod scenarios;

pub use coupling::{
    cbd_contextuality, connected_coupling, is_consistently_connected, maximal_coupling,
    maximal_coupling_value, nonsignaling_report, ConnectednessReport, ContextualityVerdict,
    Coupling, CouplingError, MarginalComparison,
};
pub use hidden::{fine_model, octuple_model, octuple_model_unconstrained, HiddenVariableModel, HvVerdict};
pub use lp::{LinearProgram, LpError, LpResult};
pub use model::{
    Bunch, Connection, ContentId, Context, ContextId, Distribution, ModelError, OutcomeSpace,
    System, VariableId,
};
pub use rational::{format_rational, parse_rational, ratio, Rational};
pub use report::{run_checks, CheckOptions, Report};
