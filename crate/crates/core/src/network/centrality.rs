use super::state::{Adjacency, NetworkState};

/// Power-iteration cap.
pub const MAX_ITER: usize = 50;
/// Per-node tolerance on the L1 change between iterates.
pub const TOL: f64 = 1e-5;

/// Eigenvector centrality scores, L2-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Centrality of the graph whose links are the finite weights of `state`.
pub fn eigenvector_centrality(state: &NetworkState) -> CentralityVector {
    centrality_from_adjacency(&state.adjacency())
}

/// Power iteration `x <- A x / |A x|_2` from the uniform vector.
///
/// Stops once `sum |x - x_prev| < n * TOL` or after [`MAX_ITER`] rounds,
/// returning the last iterate either way. A zero iterate falls back to the
/// uniform unit vector.
pub fn centrality_from_adjacency(adj: &Adjacency) -> CentralityVector {
    let n = adj.size();
    if n == 0 {
        return CentralityVector {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let uniform_unit = vec![1.0 / (n as f64).sqrt(); n];
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for iter in 1..=MAX_ITER {
        for (i, out) in next.iter_mut().enumerate() {
            *out = adj
                .row(i)
                .iter()
                .zip(&x)
                .filter(|(&edge, _)| edge)
                .map(|(_, v)| v)
                .sum();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return CentralityVector {
                scores: uniform_unit,
                iterations: iter,
                converged: false,
            };
        }
        for v in &mut next {
            *v /= norm;
        }
        let err: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if err < n as f64 * TOL {
            return CentralityVector {
                scores: x,
                iterations: iter,
                converged: true,
            };
        }
    }
    CentralityVector {
        scores: x,
        iterations: MAX_ITER,
        converged: false,
    }
}
