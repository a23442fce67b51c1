//! Stochastic latency network and the gamma time series it produces.

mod centrality;
mod paths;
mod region;
mod series;
mod skew_normal;
mod state;

pub use centrality::{centrality_from_adjacency, eigenvector_centrality, CentralityVector, MAX_ITER, TOL};
pub use paths::{gamma_of, shortest_latencies};
pub use region::RegionConfig;
pub use series::{moving_average, simulate_gamma_series, unit_schedule, GammaSeries, SimulationConfig};
pub use skew_normal::{sample_skew_normal, skew_normal_mean};
pub use state::{
    evolve_network, init_network, sample_adjacency, Adjacency, NetworkState, INACTIVE, MAX_LATENCY, MIN_LATENCY,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator every simulation run draws from.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
