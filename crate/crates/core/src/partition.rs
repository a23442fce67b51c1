//! Strategy partitions of the unit interval.
//!
//! A partition splits `[0, 1]` into consecutive intervals, each labelled with
//! the mining strategy that is optimal while gamma lies inside it. Intervals
//! are half-open `[lower, upper)` except the last one, which is closed at 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking that consecutive boundaries meet.
const BOUNDARY_TOL: f64 = 1e-12;

/// A sub-interval of `[0, 1]` with a strategy label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub label: String,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, label: impl Into<String>) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower > upper {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            label: label.into(),
        })
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        self.lower + (self.upper - self.lower) / 2.0
    }
}

/// Distance between the midpoints of two intervals.
pub fn midpoint_distance(a: &Interval, b: &Interval) -> Result<f64> {
    for iv in [a, b] {
        if iv.lower > iv.upper || iv.lower < 0.0 || iv.upper > 1.0 {
            return Err(Error::InvalidInterval {
                lower: iv.lower,
                upper: iv.upper,
            });
        }
    }
    Ok((a.midpoint() - b.midpoint()).abs())
}

/// Ordered, gap-free decomposition of `[0, 1]` into labelled intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StrategyPartition {
    intervals: Vec<Interval>,
}

impl StrategyPartition {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let first = intervals
            .first()
            .ok_or_else(|| Error::InvalidPartition("no intervals".into()))?;
        if first.lower != 0.0 {
            return Err(Error::InvalidPartition(format!(
                "first interval starts at {} instead of 0",
                first.lower
            )));
        }
        let last = intervals.last().expect("non-empty");
        if last.upper != 1.0 {
            return Err(Error::InvalidPartition(format!(
                "last interval ends at {} instead of 1",
                last.upper
            )));
        }
        for (i, iv) in intervals.iter().enumerate() {
            if iv.length().is_nan() || iv.length() <= 0.0 {
                return Err(Error::InvalidPartition(format!(
                    "interval {i} ({}) has non-positive length",
                    iv.label
                )));
            }
            if intervals[..i].iter().any(|other| other.label == iv.label) {
                return Err(Error::InvalidPartition(format!(
                    "duplicate label {:?}",
                    iv.label
                )));
            }
        }
        for pair in intervals.windows(2) {
            if (pair[0].upper - pair[1].lower).abs() > BOUNDARY_TOL {
                return Err(Error::InvalidPartition(format!(
                    "gap or overlap between {} and {}",
                    pair[0].label, pair[1].label
                )));
            }
        }
        Ok(Self { intervals })
    }

    /// Builds a partition from interior boundaries and labels.
    /// `boundaries` must include 0 and 1; `labels.len() == boundaries.len() - 1`.
    pub fn from_boundaries(boundaries: &[f64], labels: &[&str]) -> Result<Self> {
        if boundaries.len() != labels.len() + 1 {
            return Err(Error::InvalidPartition(format!(
                "{} boundaries for {} labels",
                boundaries.len(),
                labels.len()
            )));
        }
        let intervals = boundaries
            .windows(2)
            .zip(labels)
            .map(|(w, label)| Interval::new(w[0], w[1], *label))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidPartition(e.to_string()))?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.intervals.iter().map(|iv| iv.label.clone()).collect()
    }

    /// Index of the interval containing `value`.
    pub fn locate(&self, value: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange(value));
        }
        let last = self.intervals.len() - 1;
        Ok(self.intervals[..last]
            .iter()
            .position(|iv| value < iv.upper)
            .unwrap_or(last))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let intervals: Vec<Interval> = serde_json::from_str(json)?;
        Self::new(intervals)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<'de> Deserialize<'de> for StrategyPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let intervals = Vec::<Interval>::deserialize(d)?;
        Self::new(intervals).map_err(serde::de::Error::custom)
    }
}

/// Honest / selfish / lead-stubborn / equal-fork-stubborn mining regions for
/// an attacker holding 20% of the hash rate.
pub fn default_partition() -> StrategyPartition {
    StrategyPartition::from_boundaries(&[0.0, 0.675, 0.76, 0.761, 1.0], &["HM", "SM", "LSM", "EFSM"])
        .expect("default partition is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b, "x").unwrap()
    }

    #[test]
    fn default_partition_shape() {
        let p = default_partition();
        assert_eq!(p.labels(), vec!["HM", "SM", "LSM", "EFSM"]);
        let lengths: Vec<f64> = p.intervals().iter().map(Interval::length).collect();
        for (got, want) in lengths.iter().zip([0.675, 0.085, 0.001, 0.239]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let bounds: Vec<(f64, f64)> = p.intervals().iter().map(|i| (i.lower, i.upper)).collect();
        assert_eq!(
            bounds,
            vec![(0.0, 0.675), (0.675, 0.76), (0.76, 0.761), (0.761, 1.0)]
        );
    }

    #[test]
    fn midpoint_distance_examples() {
        assert_eq!(midpoint_distance(&iv(0.0, 0.675), &iv(0.0, 0.675)).unwrap(), 0.0);
        let d = midpoint_distance(&iv(0.675, 0.76), &iv(0.0, 0.675)).unwrap();
        assert!((d - 0.38).abs() < 1e-12);
        let d = midpoint_distance(&iv(0.76, 0.761), &iv(0.675, 0.76)).unwrap();
        assert!((d - 0.043).abs() < 1e-12);
    }

    #[test]
    fn midpoint_distance_rejects_reversed() {
        let bad = Interval {
            lower: 0.6,
            upper: 0.4,
            label: "bad".into(),
        };
        assert!(midpoint_distance(&bad, &iv(0.0, 1.0)).is_err());
        assert!(Interval::new(0.6, 0.4, "bad").is_err());
    }

    #[test]
    fn rejects_malformed_partitions() {
        assert!(StrategyPartition::new(vec![]).is_err());
        assert!(StrategyPartition::from_boundaries(&[0.1, 1.0], &["A"]).is_err());
        assert!(StrategyPartition::from_boundaries(&[0.0, 0.9], &["A"]).is_err());
        assert!(StrategyPartition::from_boundaries(&[0.0, 0.5, 0.5, 1.0], &["A", "B", "C"]).is_err());
        assert!(StrategyPartition::from_boundaries(&[0.0, 0.5, 1.0], &["A", "A"]).is_err());
        let gap = vec![iv(0.0, 0.4), iv(0.5, 1.0)];
        assert!(StrategyPartition::new(gap).is_err());
    }

    #[test]
    fn locate_uses_half_open_intervals() {
        let p = default_partition();
        assert_eq!(p.locate(0.5).unwrap(), 0);
        assert_eq!(p.locate(0.0).unwrap(), 0);
        assert_eq!(p.locate(0.675).unwrap(), 1);
        assert_eq!(p.locate(0.76).unwrap(), 2);
        assert_eq!(p.locate(0.7605).unwrap(), 2);
        assert_eq!(p.locate(0.761).unwrap(), 3);
        assert_eq!(p.locate(1.0).unwrap(), 3);
        assert!(p.locate(1.0 + 1e-9).is_err());
        assert!(p.locate(-0.1).is_err());
        assert!(p.locate(f64::NAN).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = default_partition();
        let json = p.to_json().unwrap();
        assert_eq!(StrategyPartition::from_json(&json).unwrap(), p);
        assert!(StrategyPartition::from_json(r#"[{"lower":0,"upper":0.5,"label":"A"}]"#).is_err());
    }
}
