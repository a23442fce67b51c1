//! Binning gamma into strategy states, transition counts, and likelihood
//! scoring of candidate transition matrices.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{StateDistribution, TransitionMatrix};
use crate::network::GammaSeries;
use crate::partition::StrategyPartition;

/// State index of a gamma value.
pub fn bin_gamma(value: f64, partition: &StrategyPartition) -> Result<usize> {
    partition.locate(value)
}

/// Observed transition frequencies between partition states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CountsRepr", into = "CountsRepr")]
pub struct TransitionCounts {
    k: usize,
    counts: Vec<u64>,
    partition: StrategyPartition,
}

#[derive(Serialize, Deserialize)]
struct CountsRepr {
    partition: StrategyPartition,
    counts: Vec<Vec<u64>>,
}

impl TryFrom<CountsRepr> for TransitionCounts {
    type Error = Error;
    fn try_from(r: CountsRepr) -> Result<Self> {
        Self::from_rows(r.counts, r.partition)
    }
}

impl From<TransitionCounts> for CountsRepr {
    fn from(c: TransitionCounts) -> Self {
        CountsRepr {
            counts: c.rows(),
            partition: c.partition,
        }
    }
}

impl TransitionCounts {
    pub fn zeros(partition: StrategyPartition) -> Self {
        let k = partition.len();
        Self {
            k,
            counts: vec![0; k * k],
            partition,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, partition: StrategyPartition) -> Result<Self> {
        let k = partition.len();
        if rows.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: rows.len(),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: row.len(),
            });
        }
        Ok(Self {
            k,
            counts: rows.into_iter().flatten().collect(),
            partition,
        })
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn partition(&self) -> &StrategyPartition {
        &self.partition
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.counts[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.k).map(<[u64]>::to_vec).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn increment(&mut self, from: usize, to: usize) {
        self.counts[from * self.k + to] += 1;
    }

    /// Element-wise sum; both sides must share a partition.
    pub fn merge(&mut self, other: &TransitionCounts) -> Result<()> {
        if other.partition != self.partition {
            return Err(Error::InvalidPartition("cannot merge counts over different partitions".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// `k` lines of `k` comma-separated integers, no header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in self.counts.chunks(self.k) {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(r: R, partition: StrategyPartition) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(r);
        let rows = reader
            .deserialize::<Vec<u64>>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::from_rows(rows, partition)
    }
}

/// Counts consecutive state pairs of a binned series.
pub fn count_transitions(series: &GammaSeries, partition: &StrategyPartition) -> Result<TransitionCounts> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            actual: series.len(),
        });
    }
    let states = series
        .values()
        .iter()
        .map(|&v| bin_gamma(v, partition))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = TransitionCounts::zeros(partition.clone());
    for w in states.windows(2) {
        counts.increment(w[0], w[1]);
    }
    Ok(counts)
}

/// Row-normalized counts; a row with no observations becomes uniform.
pub fn empirical_transition_matrix(counts: &TransitionCounts) -> TransitionMatrix {
    let k = counts.size();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        let row = counts.row(i);
        let total: u64 = row.iter().sum();
        if total == 0 {
            entries.extend(std::iter::repeat_n(1.0 / k as f64, k));
        } else {
            entries.extend(row.iter().map(|&c| c as f64 / total as f64));
        }
    }
    TransitionMatrix::from_entries(k, entries)
        .and_then(|m| m.with_labels(counts.partition().labels()))
        .expect("normalized counts are stochastic")
}

/// Fraction of samples falling in each state.
pub fn occupancy_fractions(series: &GammaSeries, partition: &StrategyPartition) -> Result<StateDistribution> {
    if series.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, actual: 0 });
    }
    let mut hits = vec![0usize; partition.len()];
    for &v in series.values() {
        hits[bin_gamma(v, partition)?] += 1;
    }
    let n = series.len() as f64;
    StateDistribution::new(hits.into_iter().map(|h| h as f64 / n).collect())
}

fn check_dims(model: &TransitionMatrix, counts: &TransitionCounts) -> Result<()> {
    if model.size() != counts.size() {
        return Err(Error::DimensionMismatch {
            expected: counts.size(),
            actual: model.size(),
        });
    }
    Ok(())
}

/// `sum N_ij log θ_ij` with `0 log 0 = 0`; an observed transition the model
/// forbids yields `-inf`.
pub fn log_likelihood(model: &TransitionMatrix, counts: &TransitionCounts) -> Result<f64> {
    check_dims(model, counts)?;
    let k = counts.size();
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            let n = counts.get(i, j);
            if n == 0 {
                continue;
            }
            let p = model.get(i, j);
            if p == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            total += n as f64 * p.ln();
        }
    }
    Ok(total)
}

/// Log-likelihood gap to the maximum-likelihood matrix; `0` at the MLE,
/// `+inf` when the model forbids an observed transition.
pub fn relative_likelihood(model: &TransitionMatrix, counts: &TransitionCounts) -> Result<f64> {
    check_dims(model, counts)?;
    let mle = empirical_transition_matrix(counts);
    let k = counts.size();
    let mut gap = 0.0;
    for i in 0..k {
        for j in 0..k {
            let n = counts.get(i, j);
            if n == 0 {
                continue;
            }
            let p = model.get(i, j);
            if p == 0.0 {
                return Ok(f64::INFINITY);
            }
            gap += n as f64 * (mle.get(i, j).ln() - p.ln());
        }
    }
    // Non-negative by Gibbs' inequality; guard against rounding.
    Ok(gap.max(0.0))
}

/// Score of one model against a set of counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodReport {
    pub model_name: String,
    #[serde(with = "extended_real")]
    pub relative_likelihood: f64,
    #[serde(with = "extended_real")]
    pub log_likelihood: f64,
}

impl LikelihoodReport {
    pub fn evaluate(model_name: impl Into<String>, model: &TransitionMatrix, counts: &TransitionCounts) -> Result<Self> {
        Ok(Self {
            model_name: model_name.into(),
            relative_likelihood: relative_likelihood(model, counts)?,
            log_likelihood: log_likelihood(model, counts)?,
        })
    }
}

/// JSON has no infinities: non-finite values travel as `"inf"` / `"-inf"`.
pub mod extended_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("not an extended real: {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::default_partition;

    fn series(values: &[f64]) -> GammaSeries {
        GammaSeries::from_values(values.to_vec()).unwrap()
    }

    fn counts(rows: Vec<Vec<u64>>) -> TransitionCounts {
        let k = rows.len();
        let bounds: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
        let labels: Vec<String> = (0..k).map(|i| format!("S{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        TransitionCounts::from_rows(rows, StrategyPartition::from_boundaries(&bounds, &refs).unwrap()).unwrap()
    }

    #[test]
    fn binning_examples() {
        let p = default_partition();
        assert_eq!(bin_gamma(0.5, &p).unwrap(), 0);
        assert_eq!(bin_gamma(0.675, &p).unwrap(), 1);
        assert_eq!(bin_gamma(1.0, &p).unwrap(), 3);
        assert!(bin_gamma(1.01, &p).is_err());
    }

    #[test]
    fn count_examples() {
        let p = default_partition();
        let c = count_transitions(&series(&[0.1, 0.2, 0.7, 0.9]), &p).unwrap();
        assert_eq!(
            c.rows(),
            vec![vec![1, 1, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 0, 0], vec![0, 0, 0, 0]]
        );
        let c = count_transitions(&series(&[0.5, 0.9, 0.5]), &p).unwrap();
        assert_eq!(c.get(0, 3), 1);
        assert_eq!(c.get(3, 0), 1);
        assert_eq!(c.total(), 2);
        let c = count_transitions(&series(&[0.8; 10]), &p).unwrap();
        assert_eq!(c.get(3, 3), 9);
        assert_eq!(c.total(), 9);
        assert!(count_transitions(&series(&[0.8]), &p).is_err());
    }

    #[test]
    fn empirical_matrix_examples() {
        let id = empirical_transition_matrix(&counts(vec![vec![4, 0], vec![0, 4]]));
        assert_eq!(id.rows(), TransitionMatrix::identity(2).rows());
        let zero = empirical_transition_matrix(&counts(vec![vec![0; 3]; 3]));
        assert_eq!(zero.rows(), TransitionMatrix::uniform(3).rows());
    }

    #[test]
    fn occupancy_examples() {
        let p = default_partition();
        let occ = occupancy_fractions(&series(&[0.1, 0.7, 0.9, 0.9]), &p).unwrap();
        assert_eq!(occ.weights(), &[0.25, 0.25, 0.0, 0.5]);
        let occ = occupancy_fractions(&series(&[0.7605; 3]), &p).unwrap();
        assert_eq!(occ.weights(), &[0.0, 0.0, 1.0, 0.0]);
        assert!(occupancy_fractions(&series(&[]), &p).is_err());
    }

    #[test]
    fn likelihood_conventions() {
        let m = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(log_likelihood(&m, &counts(vec![vec![0, 0], vec![0, 0]])).unwrap(), 0.0);
        let forbidden = counts(vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(log_likelihood(&m, &forbidden).unwrap(), f64::NEG_INFINITY);
        assert_eq!(relative_likelihood(&m, &forbidden).unwrap(), f64::INFINITY);
        // zero model entry on an unobserved cell is harmless
        let ok = counts(vec![vec![3, 0], vec![1, 1]]);
        assert!(log_likelihood(&m, &ok).unwrap().is_finite());
        assert!(log_likelihood(&TransitionMatrix::uniform(3), &ok).is_err());
        assert!(relative_likelihood(&TransitionMatrix::uniform(3), &ok).is_err());
    }

    #[test]
    fn mle_has_zero_relative_likelihood() {
        let c = counts(vec![vec![5, 2, 1], vec![0, 3, 3], vec![1, 1, 7]]);
        let mle = empirical_transition_matrix(&c);
        assert_eq!(relative_likelihood(&mle, &c).unwrap(), 0.0);
    }

    #[test]
    fn counts_csv_round_trip() {
        let c = counts(vec![vec![1, 2], vec![30, 4]]);
        let text = c.to_csv_string().unwrap();
        assert_eq!(text, "1,2\n30,4\n");
        let back = TransitionCounts::read_csv(text.as_bytes(), c.partition().clone()).unwrap();
        assert_eq!(back, c);
        assert!(TransitionCounts::read_csv("1,2,3\n4,5,6\n".as_bytes(), c.partition().clone()).is_err());
        assert!(TransitionCounts::read_csv("1,-2\n4,5\n".as_bytes(), c.partition().clone()).is_err());
    }

    #[test]
    fn report_json_encodes_infinities() {
        let r = LikelihoodReport {
            model_name: "m".into(),
            relative_likelihood: f64::INFINITY,
            log_likelihood: f64::NEG_INFINITY,
        };
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"inf\"") && json.contains("\"-inf\""));
        assert_eq!(serde_json::from_str::<LikelihoodReport>(&json).unwrap(), r);
    }
}
