//! Row-stochastic matrices, probability vectors and the stationary solve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row sums and distribution totals must match 1 within this tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Pivots smaller than this (relative to the matrix scale) count as zero.
const PIVOT_TOL: f64 = 1e-12;

fn default_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("S{i}")).collect()
}

/// Square row-stochastic matrix with state labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct TransitionMatrix {
    k: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for TransitionMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        Self::from_rows(r.matrix)?.with_labels(r.labels)
    }
}

impl From<TransitionMatrix> for MatrixRepr {
    fn from(m: TransitionMatrix) -> Self {
        MatrixRepr {
            matrix: m.rows(),
            labels: m.labels,
        }
    }
}

impl TransitionMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Self::from_entries(k, entries)
    }

    /// `entries` is row-major.
    pub fn from_entries(k: usize, entries: Vec<f64>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::InvalidMatrix(format!(
                "{} entries do not form a {k}x{k} matrix",
                entries.len()
            )));
        }
        for (idx, &p) in entries.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({}, {}) = {p} outside [0, 1]",
                    idx / k,
                    idx % k
                )));
            }
        }
        for (i, row) in entries.chunks(k).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidMatrix(format!("row {i} sums to {s}")));
            }
        }
        Ok(Self {
            k,
            entries,
            labels: default_labels(k),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                actual: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn identity(k: usize) -> Self {
        let mut entries = vec![0.0; k * k];
        for i in 0..k {
            entries[i * k + i] = 1.0;
        }
        Self::from_entries(k, entries).expect("identity is stochastic")
    }

    pub fn uniform(k: usize) -> Self {
        let entries = vec![1.0 / k as f64; k * k];
        Self::from_entries(k, entries).expect("uniform is stochastic")
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.k).map(<[f64]>::to_vec).collect()
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &[Vec<f64>]) -> f64 {
        self.rows()
            .iter()
            .zip(other)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Row vector times matrix.
    pub fn left_multiply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &p) in out.iter_mut().zip(self.row(i)) {
                *o += vi * p;
            }
        }
        out
    }

    /// Renders the matrix rounded to `decimals` places, one row per line.
    pub fn render(&self, decimals: usize) -> String {
        let width = self.labels.iter().map(String::len).max().unwrap_or(0);
        self.rows()
            .iter()
            .zip(&self.labels)
            .map(|(row, label)| {
                let cells: Vec<String> = row.iter().map(|p| format!("{p:.decimals$}")).collect();
                format!("{label:>width$}  [{}]", cells.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Probability vector over the states of a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct StateDistribution {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for StateDistribution {
    type Error = Error;
    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<StateDistribution> for Vec<f64> {
    fn from(d: StateDistribution) -> Self {
        d.weights
    }
}

impl StateDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidDistribution(format!("weight {w} outside [0, 1]")));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {s}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// True when every state can reach every other state through positive entries.
pub fn is_irreducible(p: &TransitionMatrix) -> bool {
    let k = p.size();
    let reaches = |from: usize| -> Vec<bool> {
        let mut seen = vec![false; k];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(i) = stack.pop() {
            for (j, &pij) in p.row(i).iter().enumerate() {
                if pij > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    // Strongly connected iff state 0 reaches everything and everything reaches state 0.
    if !reaches(0).into_iter().all(|b| b) {
        return false;
    }
    (1..k).all(|i| reaches(i)[0])
}

/// Solves `pi = pi P` with `sum(pi) = 1` for an irreducible chain.
///
/// The balance equations `(P^T - I) pi = 0` have rank `k - 1`; the last one
/// is replaced by the normalization row and the square system is solved by
/// Gaussian elimination with partial pivoting.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<StateDistribution> {
    if !is_irreducible(p) {
        return Err(Error::NotIrreducible);
    }
    let k = p.size();
    let mut a = vec![vec![0.0; k]; k];
    for (r, row) in a.iter_mut().enumerate().take(k - 1) {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = p.get(c, r) - if r == c { 1.0 } else { 0.0 };
        }
    }
    a[k - 1].fill(1.0);
    let mut b = vec![0.0; k];
    b[k - 1] = 1.0;

    let mut pi = solve_dense(a.clone(), b.clone())?;
    // One round of iterative refinement.
    let residual: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(row, bi)| bi - row.iter().zip(&pi).map(|(x, y)| x * y).sum::<f64>())
        .collect();
    let correction = solve_dense(a, residual)?;
    for (x, c) in pi.iter_mut().zip(correction) {
        *x += c;
    }

    for x in &mut pi {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    for x in &mut pi {
        *x /= total;
    }
    StateDistribution::new(pi)
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot][col].abs() < PIVOT_TOL * scale {
            return Err(Error::Singular);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(r);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// `max_i |(pi P)_i - pi_i|`.
pub fn stationary_residual(p: &TransitionMatrix, pi: &StateDistribution) -> f64 {
    p.left_multiply(pi.weights())
        .iter()
        .zip(pi.weights())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
