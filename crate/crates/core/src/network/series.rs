use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::paths::gamma_of;
use super::region::RegionConfig;
use super::state::{evolve_network, init_network};
use super::{rng_from_seed, SimRng};
use crate::error::{Error, Result};

/// Sampled gamma values and the times they were taken at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr")]
pub struct GammaSeries {
    pub(crate) seed: Option<u64>,
    pub(crate) times: Vec<f64>,
    pub(crate) values: Vec<f64>,
}

#[derive(Deserialize)]
struct SeriesRepr {
    seed: Option<u64>,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<SeriesRepr> for GammaSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        Self::new(r.times, r.values, r.seed)
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    time: f64,
    gamma: f64,
}

impl GammaSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, seed: Option<u64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                actual: values.len(),
            });
        }
        check_schedule(&times)?;
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange(v));
        }
        Ok(Self { seed, times, values })
    }

    /// Series sampled at `0, 1, 2, ...`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(unit_schedule(values.len()), values, None)
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `time,gamma` header followed by one row per sample.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["time", "gamma"])?;
        for (t, v) in self.times.iter().zip(&self.values) {
            out.write_record([t.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let mut times = Vec::new();
        let mut values = Vec::new();
        for row in reader.deserialize() {
            let row: CsvRow = row?;
            times.push(row.time);
            values.push(row.gamma);
        }
        Self::new(times, values, None)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }
}

fn check_schedule(times: &[f64]) -> Result<()> {
    if let Some(i) = times.iter().position(|t| !t.is_finite()) {
        return Err(Error::NonIncreasingTimes(i));
    }
    match times.windows(2).position(|w| w[1] <= w[0]) {
        Some(i) => Err(Error::NonIncreasingTimes(i + 1)),
        None => Ok(()),
    }
}

/// `{0, 1, ..., steps - 1}`
pub fn unit_schedule(steps: usize) -> Vec<f64> {
    (0..steps).map(|t| t as f64).collect()
}

/// Cumulative mean of the series; value `n` is the mean of samples `0..=n`.
pub fn moving_average(series: &GammaSeries) -> Result<GammaSeries> {
    if series.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, actual: 0 });
    }
    let mut sum = 0.0;
    let values = series
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            sum += v;
            (sum / (n + 1) as f64).clamp(0.0, 1.0)
        })
        .collect();
    Ok(GammaSeries {
        seed: series.seed,
        times: series.times.clone(),
        values,
    })
}

/// Everything a simulation run needs besides the seed and schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub regions: RegionConfig,
    /// Probability that a link starts out INACTIVE.
    pub dropout: f64,
    /// Probability that a link is present in each freshly sampled adjacency.
    pub activation: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            regions: RegionConfig::default(),
            dropout: 0.1,
            activation: 0.9,
        }
    }
}

fn draw_pair(rng: &mut SimRng, n: usize) -> (usize, usize) {
    let attacker = rng.random_range(0..n);
    let mut honest = rng.random_range(0..n);
    while honest == attacker {
        honest = rng.random_range(0..n);
    }
    (attacker, honest)
}

/// Simulates gamma at each time in `schedule`.
///
/// Draw order on the single seeded generator: the initial network, then for
/// each sample the evolution step (skipped for the first sample) followed by
/// the attacker/honest node pair.
pub fn simulate_gamma_series(schedule: &[f64], seed: u64, config: &SimulationConfig) -> Result<GammaSeries> {
    if schedule.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, actual: 0 });
    }
    check_schedule(schedule)?;
    if !(0.0..=1.0).contains(&config.activation) {
        return Err(Error::InvalidParameter(format!(
            "activation {} outside [0, 1]",
            config.activation
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut state = init_network(&config.regions, config.dropout, &mut rng)?;
    let n = state.node_count();
    let mut values = Vec::with_capacity(schedule.len());
    for (step, &t) in schedule.iter().enumerate() {
        if step > 0 {
            let delta_t = t - schedule[step - 1];
            state = evolve_network(&state, delta_t, &config.regions, config.activation, &mut rng)?;
        }
        let (attacker, honest) = draw_pair(&mut rng, n);
        values.push(gamma_of(&state, attacker, honest)?);
    }
    Ok(GammaSeries {
        seed: Some(seed),
        times: schedule.to_vec(),
        values,
    })
}
