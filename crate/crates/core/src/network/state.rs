use rand::Rng;

use super::centrality::centrality_from_adjacency;
use super::region::RegionConfig;
use super::skew_normal::sample_skew_normal;
use crate::error::{Error, Result};

/// Weight marking a link that does not exist at the moment.
pub const INACTIVE: f64 = 1e7;
/// Floor applied to every finite latency after a perturbation.
pub const MIN_LATENCY: f64 = 1.0;
/// Ceiling for finite latencies; keeps them strictly below [`INACTIVE`].
pub const MAX_LATENCY: f64 = INACTIVE - 1.0;

fn clamp_latency(w: f64) -> f64 {
    if w.is_nan() {
        MAX_LATENCY
    } else {
        w.clamp(MIN_LATENCY, MAX_LATENCY)
    }
}

/// Symmetric boolean adjacency with self-loops on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    bits: Vec<bool>,
}

impl Adjacency {
    /// Only the diagonal is set.
    pub fn empty(n: usize) -> Self {
        let mut bits = vec![false; n * n];
        for i in 0..n {
            bits[i * n + i] = true;
        }
        Self { n, bits }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = Self::empty(n);
        for &(i, j) in edges {
            adj.connect(i, j);
        }
        adj
    }

    pub fn connect(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = true;
        self.bits[j * self.n + i] = true;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.n..(i + 1) * self.n]
    }
}

/// Immutable snapshot of the latency network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    node_count: usize,
    weights: Vec<f64>,
    region_of: Vec<usize>,
}

impl NetworkState {
    /// Builds a state from a full row-major weight matrix.
    pub fn from_weights(weights: Vec<f64>, region_of: Vec<usize>) -> Result<Self> {
        let n = region_of.len();
        if weights.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: weights.len(),
            });
        }
        for i in 0..n {
            if weights[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("diagonal weight at node {i} is not zero")));
            }
            for j in i + 1..n {
                let w = weights[i * n + j];
                if w != weights[j * n + i] {
                    return Err(Error::InvalidParameter(format!("weights not symmetric at ({i}, {j})")));
                }
                if w.is_nan() || w <= 0.0 || (w > MAX_LATENCY && w != INACTIVE) {
                    return Err(Error::InvalidParameter(format!("invalid weight {w} at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            node_count: n,
            weights,
            region_of,
        })
    }

    /// All links INACTIVE; every node in region 0.
    pub fn disconnected(n: usize) -> Self {
        let mut weights = vec![INACTIVE; n * n];
        for i in 0..n {
            weights[i * n + i] = 0.0;
        }
        Self {
            node_count: n,
            weights,
            region_of: vec![0; n],
        }
    }

    /// Returns a copy with link `{i, j}` set to `w` (use [`INACTIVE`] to drop it).
    pub fn with_link(mut self, i: usize, j: usize, w: f64) -> Self {
        let n = self.node_count;
        self.weights[i * n + j] = w;
        self.weights[j * n + i] = w;
        self
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn region_of(&self, node: usize) -> usize {
        self.region_of[node]
    }

    pub fn is_active(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) < INACTIVE
    }

    /// `A_ij = 1` whenever the weight is below the sentinel (diagonal included).
    pub fn adjacency(&self) -> Adjacency {
        Adjacency {
            n: self.node_count,
            bits: self.weights.iter().map(|&w| w < INACTIVE).collect(),
        }
    }

    pub fn active_link_count(&self) -> usize {
        let n = self.node_count;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_active(i, j))
            .count()
    }
}

fn pair_mean(config: &RegionConfig, region_of: &[usize], i: usize, j: usize) -> f64 {
    config.mean_latency[region_of[i]][region_of[j]]
}

/// Draws the initial network.
///
/// Each link is dropped with probability `dropout`; otherwise its latency is
/// Pareto distributed as `scale / U^(1/shape)` with `shape = 0.2 mean` and
/// `scale = mean - 5`. Pairs are visited row-major (`i < j`), one uniform
/// for the dropout test and, if kept, one for the Pareto draw.
pub fn init_network<R: Rng + ?Sized>(config: &RegionConfig, dropout: f64, rng: &mut R) -> Result<NetworkState> {
    config.validate()?;
    if !(0.0..1.0).contains(&dropout) {
        return Err(Error::InvalidParameter(format!("dropout {dropout} outside [0, 1)")));
    }
    if let Some(m) = config.mean_latency.iter().flatten().find(|&&m| m <= 5.0) {
        return Err(Error::InvalidRegionConfig(format!(
            "mean latency {m} must exceed 5 for the initial Pareto draw"
        )));
    }
    let region_of = config.region_assignment();
    let n = region_of.len();
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let w = if rng.random::<f64>() < dropout {
                INACTIVE
            } else {
                let m = pair_mean(config, &region_of, i, j);
                let shape = 0.2 * m;
                let scale = m - 5.0;
                // U in (0, 1]
                let u = 1.0 - rng.random::<f64>();
                clamp_latency(scale / u.powf(1.0 / shape))
            };
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
    }
    Ok(NetworkState {
        node_count: n,
        weights,
        region_of,
    })
}

/// Random graph where each link exists independently with probability `activation`.
pub fn sample_adjacency<R: Rng + ?Sized>(n: usize, activation: f64, rng: &mut R) -> Adjacency {
    let mut adj = Adjacency::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < activation {
                adj.connect(i, j);
            }
        }
    }
    adj
}

/// Advances the network by `delta_t`.
///
/// A fresh adjacency is sampled, its eigenvector centrality `Ω` computed, and
/// each link `{i, j}` (regional mean `μ`, skew `α = 3(Ω_i + Ω_j)`) updated:
///
/// | previous | sampled | new weight |
/// |---|---|---|
/// | finite `w` | present | `w (1 + Δt S)` |
/// | finite `w` | absent | INACTIVE |
/// | INACTIVE | either | `μ (1 + Δt S)` |
///
/// with `S ~ SkewNormal(α)`. Finite results are clamped to
/// `[MIN_LATENCY, MAX_LATENCY]`.
pub fn evolve_network<R: Rng + ?Sized>(
    prev: &NetworkState,
    delta_t: f64,
    config: &RegionConfig,
    activation: f64,
    rng: &mut R,
) -> Result<NetworkState> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta_t must be positive, got {delta_t}")));
    }
    if !(0.0..=1.0).contains(&activation) {
        return Err(Error::InvalidParameter(format!("activation {activation} outside [0, 1]")));
    }
    let n = prev.node_count;
    if let Some(&r) = prev.region_of.iter().find(|&&r| r >= config.mean_latency.len()) {
        return Err(Error::InvalidRegionConfig(format!("node region {r} not in config")));
    }

    let adjacency = sample_adjacency(n, activation, rng);
    let omega = centrality_from_adjacency(&adjacency);

    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let alpha = 3.0 * (omega.scores[i] + omega.scores[j]);
            let old = prev.weight(i, j);
            let w = if old < INACTIVE {
                if adjacency.has_edge(i, j) {
                    clamp_latency(old * (1.0 + delta_t * sample_skew_normal(alpha, rng)))
                } else {
                    INACTIVE
                }
            } else {
                let mu = pair_mean(config, &prev.region_of, i, j);
                clamp_latency(mu * (1.0 + delta_t * sample_skew_normal(alpha, rng)))
            };
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
    }
    Ok(NetworkState {
        node_count: n,
        weights,
        region_of: prev.region_of.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{rng_from_seed, skew_normal_mean};

    fn check_invariants(s: &NetworkState) {
        let n = s.node_count();
        for i in 0..n {
            assert_eq!(s.weight(i, i), 0.0);
            for j in 0..n {
                let w = s.weight(i, j);
                assert_eq!(w, s.weight(j, i));
                if i != j && w != INACTIVE {
                    assert!((MIN_LATENCY..=MAX_LATENCY).contains(&w), "{w}");
                }
            }
        }
    }

    #[test]
    fn init_respects_invariants_and_pareto_floor() {
        let cfg = RegionConfig::default();
        let s = init_network(&cfg, 0.1, &mut rng_from_seed(11)).unwrap();
        check_invariants(&s);
        // EU nodes are 33..83; EU-EU scale is 11 - 5 = 6
        for i in 33..83 {
            for j in i + 1..83 {
                if s.is_active(i, j) {
                    assert!(s.weight(i, j) >= 6.0);
                }
            }
        }
        let total = 100 * 99 / 2;
        let dropped = total - s.active_link_count();
        // ~10% of 4950 dropped
        assert!((350..650).contains(&dropped), "{dropped}");
    }

    #[test]
    fn init_nearly_full_dropout() {
        let cfg = RegionConfig::default();
        let s = init_network(&cfg, 1.0 - 1e-12, &mut rng_from_seed(5)).unwrap();
        assert_eq!(s.active_link_count(), 0);
    }

    #[test]
    fn init_rejects_bad_parameters() {
        let cfg = RegionConfig::default();
        assert!(init_network(&cfg, 1.0, &mut rng_from_seed(0)).is_err());
        assert!(init_network(&cfg, -0.1, &mut rng_from_seed(0)).is_err());
        let mut low = cfg.clone();
        low.mean_latency[1][1] = 5.0;
        assert!(init_network(&low, 0.1, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn pareto_mean_for_mean_32() {
        // Region pair with mean 32: shape 6.4, scale 27, Pareto mean 27*6.4/5.4 = 32.
        let cfg = RegionConfig {
            region_names: vec!["NA".into()],
            node_counts: vec![2],
            mean_latency: vec![vec![32.0]],
        };
        let mut rng = rng_from_seed(99);
        let draws = 100_000;
        let total: f64 = (0..draws)
            .map(|_| init_network(&cfg, 0.0, &mut rng).unwrap().weight(0, 1))
            .sum();
        let mean = total / draws as f64;
        assert!((mean - 32.0).abs() < 0.2, "{mean}");
    }

    #[test]
    fn evolve_tiny_step_keeps_weights() {
        let cfg = RegionConfig::default();
        let mut rng = rng_from_seed(21);
        let s0 = init_network(&cfg, 0.0, &mut rng).unwrap();
        let s1 = evolve_network(&s0, 1e-9, &cfg, 1.0, &mut rng).unwrap();
        check_invariants(&s1);
        for (a, b) in s0.weights().iter().zip(s1.weights()) {
            assert!((a - b).abs() <= 1e-6 * a.max(1.0));
        }
    }

    #[test]
    fn evolve_zero_activation_drops_all_finite_links() {
        let cfg = RegionConfig::default();
        let mut rng = rng_from_seed(8);
        let s0 = init_network(&cfg, 0.0, &mut rng).unwrap();
        let s1 = evolve_network(&s0, 1.0, &cfg, 0.0, &mut rng).unwrap();
        assert_eq!(s1.active_link_count(), 0);
        // ... and the following step revives every link.
        let s2 = evolve_network(&s1, 1.0, &cfg, 0.0, &mut rng).unwrap();
        assert_eq!(s2.active_link_count(), 100 * 99 / 2);
        check_invariants(&s2);
    }

    #[test]
    fn evolve_rejects_non_positive_step() {
        let cfg = RegionConfig::default();
        let s0 = init_network(&cfg, 0.1, &mut rng_from_seed(1)).unwrap();
        for dt in [0.0, -1.0, f64::NAN] {
            assert!(evolve_network(&s0, dt, &cfg, 0.9, &mut rng_from_seed(1)).is_err());
        }
    }

    #[test]
    fn revived_link_expectation() {
        // Two EU nodes: centrality is (1/sqrt2, 1/sqrt2) whether or not the
        // link is sampled, so alpha = 3 sqrt2 and clamping is negligible.
        let cfg = RegionConfig {
            region_names: vec!["EU".into()],
            node_counts: vec![2],
            mean_latency: vec![vec![11.0]],
        };
        let prev = NetworkState::from_weights(vec![0.0, INACTIVE, INACTIVE, 0.0], vec![0, 0]).unwrap();
        let alpha = 3.0 * std::f64::consts::SQRT_2;
        let expected = 11.0 * (1.0 + skew_normal_mean(alpha));
        let mut rng = rng_from_seed(1234);
        let runs = 100_000;
        let mean = (0..runs)
            .map(|_| evolve_network(&prev, 1.0, &cfg, 0.9, &mut rng).unwrap().weight(0, 1))
            .sum::<f64>()
            / runs as f64;
        assert!((mean - expected).abs() < 0.1, "{mean} vs {expected}");
    }

    #[test]
    fn many_steps_keep_invariants() {
        let cfg = RegionConfig::default().with_total_nodes(30).unwrap();
        let mut rng = rng_from_seed(77);
        let mut s = init_network(&cfg, 0.1, &mut rng).unwrap();
        for _ in 0..300 {
            s = evolve_network(&s, 1.0, &cfg, 0.9, &mut rng).unwrap();
            check_invariants(&s);
        }
    }
}
