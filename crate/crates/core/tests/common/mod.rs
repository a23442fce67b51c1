//! Independent oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use forkgamma::network::{NetworkState, INACTIVE};
use forkgamma::{StrategyPartition, TransitionCounts, TransitionMatrix};
use nalgebra::DMatrix;
use rand::Rng;

/// Shortest path by enumerating every simple path from `source`.
pub fn brute_force_distances(state: &NetworkState, source: usize) -> Vec<f64> {
    let n = state.node_count();
    let mut best = vec![f64::INFINITY; n];
    let mut visited = vec![false; n];
    fn walk(state: &NetworkState, at: usize, cost: f64, visited: &mut [bool], best: &mut [f64]) {
        if cost < best[at] {
            best[at] = cost;
        }
        visited[at] = true;
        for next in 0..state.node_count() {
            let w = state.weight(at, next);
            if !visited[next] && next != at && w < INACTIVE {
                walk(state, next, cost + w, visited, best);
            }
        }
        visited[at] = false;
    }
    walk(state, source, 0.0, &mut visited, &mut best);
    best.into_iter().map(|d| d.min(INACTIVE)).collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p_link: f64) -> NetworkState {
    let mut s = NetworkState::disconnected(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p_link {
                let w = rng.random_range(1.0..100.0);
                s = s.with_link(i, j, w);
            }
        }
    }
    s
}

pub fn is_connected(state: &NetworkState) -> bool {
    let n = state.node_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for (v, seen_v) in seen.iter_mut().enumerate() {
            if !*seen_v && state.is_active(u, v) {
                *seen_v = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Dominant eigenvector of the loop-free 0/1 adjacency, positive and unit length.
pub fn dense_dominant_eigenvector(state: &NetworkState) -> Vec<f64> {
    let n = state.node_count();
    let a = DMatrix::from_fn(n, n, |i, j| if i != j && state.is_active(i, j) { 1.0 } else { 0.0 });
    let eig = a.symmetric_eigen();
    let top = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a: &(usize, &f64), b: &(usize, &f64)| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let v = eig.eigenvectors.column(top);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = v.norm();
    v.iter().map(|x| sign * x / norm).collect()
}

/// Best row-stochastic 2x2 matrix on a grid of step `step` (rows searched independently).
pub fn grid_search_2x2(counts: &[[u64; 2]; 2], step: f64) -> (f64, [f64; 2]) {
    let steps = (1.0 / step).round() as usize;
    let mut total = 0.0;
    let mut argmax = [0.0; 2];
    for (r, row) in counts.iter().enumerate() {
        let mut best = f64::NEG_INFINITY;
        for s in 0..=steps {
            let p = s as f64 * step;
            let ll = xlogy(row[0], p) + xlogy(row[1], 1.0 - p);
            if ll > best {
                best = ll;
                argmax[r] = p;
            }
        }
        total += best;
    }
    (total, argmax)
}

fn xlogy(n: u64, p: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * p.ln()
    }
}

/// Walks a chain for `steps` transitions and returns the visited states.
pub fn sample_chain<R: Rng>(rng: &mut R, p: &TransitionMatrix, start: usize, steps: usize) -> Vec<usize> {
    let mut state = start;
    let mut path = Vec::with_capacity(steps + 1);
    path.push(state);
    for _ in 0..steps {
        let u: f64 = rng.random();
        let row = p.row(state);
        let mut acc = 0.0;
        let mut next = row.len() - 1;
        for (j, &pj) in row.iter().enumerate() {
            acc += pj;
            if u < acc {
                next = j;
                break;
            }
        }
        state = next;
        path.push(state);
    }
    path
}

/// Midpoint of each visited interval, i.e. a gamma series that bins back to `path`.
pub fn path_to_gamma(path: &[usize], partition: &StrategyPartition) -> Vec<f64> {
    path.iter().map(|&s| partition.intervals()[s].midpoint()).collect()
}

pub fn direct_counts(path: &[usize], partition: &StrategyPartition) -> TransitionCounts {
    let mut c = TransitionCounts::zeros(partition.clone());
    for w in path.windows(2) {
        c.increment(w[0], w[1]);
    }
    c
}

pub const P1_REFERENCE: [[f64; 4]; 4] = [
    [0.81, 0.06, 0.0, 0.13],
    [0.59, 0.12, 0.01, 0.28],
    [0.57, 0.12, 0.0, 0.31],
    [0.5, 0.11, 0.0, 0.39],
];
pub const PI1_REFERENCE: [f64; 4] = [0.73, 0.08, 0.0, 0.19];

pub const P2_REFERENCE: [[f64; 4]; 4] = [
    [0.84, 0.07, 0.0, 0.09],
    [0.50, 0.15, 0.002, 0.348],
    [0.43, 0.16, 0.002, 0.408],
    [0.32, 0.158, 0.002, 0.52],
];
pub const PI2_REFERENCE: [f64; 4] = [0.7, 0.1, 0.0, 0.2];

pub const P3_REFERENCE: [[f64; 4]; 4] = [
    [0.77, 0.05, 0.0, 0.18],
    [0.83, 0.036, 0.004, 0.13],
    [0.53, 0.07, 0.0, 0.4],
    [0.79, 0.05, 0.0, 0.16],
];
pub const PI3_REFERENCE: [f64; 4] = [0.78, 0.05, 0.0, 0.17];

pub const RL1_REFERENCE: f64 = 157.0;
pub const RL2_REFERENCE: f64 = 512.0;

pub fn to_rows(m: &[[f64; 4]; 4]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}
