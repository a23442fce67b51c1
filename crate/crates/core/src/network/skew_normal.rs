use rand::Rng;
use rand_distr::StandardNormal;

/// One draw from the standard skew-normal distribution with shape `alpha`.
///
/// Uses the two-normal construction `delta |u0| + sqrt(1 - delta^2) u1`
/// with `delta = alpha / sqrt(1 + alpha^2)`.
pub fn sample_skew_normal<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let norm = (1.0 + alpha * alpha).sqrt();
    let delta = alpha / norm;
    // sqrt(1 - delta^2) == 1 / sqrt(1 + alpha^2), without the cancellation.
    let tail = 1.0 / norm;
    let u0: f64 = rng.sample(StandardNormal);
    let u1: f64 = rng.sample(StandardNormal);
    delta * u0.abs() + tail * u1
}

/// `E[S] = delta * sqrt(2 / pi)`.
pub fn skew_normal_mean(alpha: f64) -> f64 {
    let delta = alpha / (1.0 + alpha * alpha).sqrt();
    delta * (2.0 / std::f64::consts::PI).sqrt()
}
