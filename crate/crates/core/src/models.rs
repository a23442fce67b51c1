//! Analytical transition models over a strategy partition.
//!
//! * The midpoint model weights a target interval by its length times one
//!   minus the midpoint distance to the source interval.
//! * The kernel model weights a target interval by the squared-exponential
//!   kernel integrated over source x target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;
use crate::partition::{midpoint_distance, Interval, StrategyPartition};
use crate::quadrature;

/// Absolute tolerance handed to the adaptive quadrature path.
pub const QUADRATURE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    length_scale: f64,
}

impl KernelConfig {
    pub const DEFAULT_LENGTH_SCALE: f64 = 0.25;

    pub fn new(length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::InvalidLengthScale(length_scale));
        }
        Ok(Self { length_scale })
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            length_scale: Self::DEFAULT_LENGTH_SCALE,
        }
    }
}

/// Which of the two analytical models to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Midpoint,
    Kernel,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Midpoint => "midpoint",
            ModelKind::Kernel => "kernel",
        }
    }
}

/// How the double integrals of the kernel model are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integration {
    #[default]
    ClosedForm,
    Quadrature,
}

/// `exp(-((x - y) / l)^2 / 2)`
pub fn sq_exp_kernel(x: f64, y: f64, config: KernelConfig) -> f64 {
    let z = (x - y) / config.length_scale;
    (-0.5 * z * z).exp()
}

pub fn model1_transition_matrix(partition: &StrategyPartition) -> Result<TransitionMatrix> {
    let intervals = partition.intervals();
    let k = intervals.len();
    let mut entries = Vec::with_capacity(k * k);
    for source in intervals {
        let weights = intervals
            .iter()
            .map(|target| Ok(target.length() * (1.0 - midpoint_distance(target, source)?)))
            .collect::<Result<Vec<f64>>>()?;
        let total: f64 = weights.iter().sum();
        entries.extend(weights.iter().map(|w| w / total));
    }
    TransitionMatrix::from_entries(k, entries)?.with_labels(partition.labels())
}

/// Second antiderivative of the kernel in the separation `t`, so that the
/// rectangle integral is a signed sum of four evaluations. The constant term
/// cancels in that sum and is dropped.
fn kernel_antiderivative(t: f64, l: f64) -> f64 {
    let sqrt2l = std::f64::consts::SQRT_2 * l;
    t * (std::f64::consts::PI / 2.0).sqrt() * l * libm::erf(t / sqrt2l) + l * l * (-(t * t) / (2.0 * l * l)).exp()
}

/// `∫_{x in target} ∫_{y in source} κ(x, y) dy dx` by the error-function closed form.
pub fn kernel_mass_closed_form(target: (f64, f64), source: (f64, f64), config: KernelConfig) -> f64 {
    let l = config.length_scale;
    let (a, b) = target;
    let (c, d) = source;
    let g = |t| kernel_antiderivative(t, l);
    // Cancellation can leave a tiny negative value for distant intervals.
    ((g(b - c) - g(b - d)) - (g(a - c) - g(a - d))).max(0.0)
}

/// Same integral as [`kernel_mass_closed_form`] by adaptive quadrature.
pub fn kernel_mass_quadrature(target: (f64, f64), source: (f64, f64), config: KernelConfig) -> f64 {
    quadrature::integrate_2d(
        |x, y| sq_exp_kernel(x, y, config),
        target,
        source,
        QUADRATURE_TOL,
    )
}

pub fn model2_transition_matrix(
    partition: &StrategyPartition,
    config: KernelConfig,
) -> Result<TransitionMatrix> {
    model2_transition_matrix_with(partition, config, Integration::ClosedForm)
}

pub fn model2_transition_matrix_with(
    partition: &StrategyPartition,
    config: KernelConfig,
    integration: Integration,
) -> Result<TransitionMatrix> {
    // Re-validate: a KernelConfig can only be built positive, but a
    // deserialized one bypasses `new`.
    let config = KernelConfig::new(config.length_scale)?;
    let mass = |target: &Interval, source: &Interval| {
        let t = (target.lower, target.upper);
        let s = (source.lower, source.upper);
        match integration {
            Integration::ClosedForm => kernel_mass_closed_form(t, s, config),
            Integration::Quadrature => kernel_mass_quadrature(t, s, config),
        }
    };
    let whole = Interval::new(0.0, 1.0, "all")?;
    let intervals = partition.intervals();
    let k = intervals.len();
    let mut entries = Vec::with_capacity(k * k);
    for source in intervals {
        let denominator = mass(&whole, source);
        entries.extend(intervals.iter().map(|target| mass(target, source) / denominator));
    }
    TransitionMatrix::from_entries(k, entries)?.with_labels(partition.labels())
}

pub fn build_model(
    kind: ModelKind,
    partition: &StrategyPartition,
    config: KernelConfig,
) -> Result<TransitionMatrix> {
    match kind {
        ModelKind::Midpoint => model1_transition_matrix(partition),
        ModelKind::Kernel => model2_transition_matrix(partition, config),
    }
}
