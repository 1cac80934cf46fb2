//! Constraint networks, propagation to a fixpoint and search.

mod network;
mod propagate;
mod solve;

pub use network::{Constraint, Network, NetworkError, Operand, VarId, Variable};
pub use propagate::{propagate, Conflict, Filter, Projection, PropConfig, PropStats, TraceEvent, TraceHook};
pub use solve::{filter_root, solve, SolveConfig, SolveResult, SolveStats, UnknownReason, ValueOrder, Verdict};
