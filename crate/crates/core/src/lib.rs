//! Exact-rational tools for tripartite (and bipartite) binary correlation
//! tables: validation, membership in the local / no-signaling / time-ordered
//! bi-local sets, Hardy success-probability maximization, and exhaustive
//! audits of local wirings.

pub mod behavior;
pub mod cli;
pub mod decomposition;
pub mod hardy;
pub mod io;
pub mod lp;
pub mod polytopes;
pub mod rational;
pub mod reference;
pub mod reproduce;
pub mod wirings;

pub use behavior::{hardy_report, validate, Behavior, BehaviorError, HardySpec, Party};
pub use decomposition::{verify_decomposition, ToblDecomposition};
pub use hardy::{maximize_hardy, CorrelationSet, OptimizationRequest, Scenario};
pub use polytopes::{membership_local, membership_tobl, Bipartition, Direction};
pub use rational::Rational;
pub use wirings::{apply_wiring, audit_wirings, chsh_value, Pair, Wiring};
