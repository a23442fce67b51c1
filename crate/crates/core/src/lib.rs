//! Markov models for gamma, the share of honest nodes that end up mining on
//! an attacker's fork.
//!
//! * [`partition`]: strategy partitions of `[0, 1]` and the midpoint metric.
//! * [`models`]: the midpoint and squared-exponential-kernel transition models.
//! * [`matrix`]: stochastic matrices and the stationary solve.
//! * [`network`]: the regional latency network simulator producing gamma series.
//! * [`inference`]: binning, transition counts and relative likelihood.

pub mod error;
pub mod fixtures;
pub mod inference;
pub mod matrix;
pub mod models;
pub mod network;
pub mod partition;
mod quadrature;

pub use error::{Error, Result};
pub use inference::{
    bin_gamma, count_transitions, empirical_transition_matrix, log_likelihood, occupancy_fractions,
    relative_likelihood, LikelihoodReport, TransitionCounts,
};
pub use matrix::{is_irreducible, stationary_distribution, stationary_residual, StateDistribution, TransitionMatrix};
pub use models::{
    build_model, model1_transition_matrix, model2_transition_matrix, model2_transition_matrix_with, sq_exp_kernel,
    Integration, KernelConfig, ModelKind,
};
pub use network::{GammaSeries, NetworkState, RegionConfig, SimulationConfig};
pub use partition::{default_partition, midpoint_distance, Interval, StrategyPartition};
