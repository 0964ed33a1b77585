//! Closed-form soundness parameters of the repeated construction.

use serde::Serialize;

use super::ReduceError;

/// Evaluated soundness constants for repetition count `ell`, amplification
/// exponent `alpha`, and selection size `k`.
///
/// `t` is `None` when its denominator `1 - 2e1 - 2e2 - 2^(1 - alpha*ell)`
/// is not positive (small `alpha * ell`); the condition is reported rather
/// than returned as a non-finite number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessParameters {
    pub ell: usize,
    pub alpha: f64,
    pub k: u64,
    /// `1 / (3 * 5^(ell+1))`.
    pub c: f64,
    /// `3^-(ell+1) * ((3/5)^ell + (3/5)^(2*ell))`.
    pub epsilon1: f64,
    /// `3^-(ell+1) * ((3/5)^ell + 1)`.
    pub epsilon2: f64,
    /// `4 * 5^ell / (1 - 2e1 - 2e2 - 2^(1 - alpha*ell))`, when defined.
    pub t: Option<f64>,
    /// Smallest integer with `2^(1 - alpha*ell') <= 11/27`.
    pub ell_prime: u64,
    /// `2^(-c * k)`.
    pub volume_bound: f64,
}

pub fn compute_soundness_parameters(
    ell: usize,
    alpha: f64,
    k: u64,
) -> Result<SoundnessParameters, ReduceError> {
    if ell == 0 {
        return Err(ReduceError::BadParameters("ell must be >= 1".into()));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(ReduceError::BadParameters(format!(
            "alpha must be a positive real, got {alpha}"
        )));
    }
    let ell_i = ell as i32;
    let c = 1.0 / (3.0 * 5.0f64.powi(ell_i + 1));
    let three_fifths = 0.6f64;
    let epsilon1 =
        3.0f64.powi(-(ell_i + 1)) * (three_fifths.powi(ell_i) + three_fifths.powi(2 * ell_i));
    let epsilon2 = 3.0f64.powi(-(ell_i + 1)) * (three_fifths.powi(ell_i) + 1.0);
    let denominator = 1.0 - 2.0 * epsilon1 - 2.0 * epsilon2 - (1.0 - alpha * ell as f64).exp2();
    let t = if denominator > 0.0 {
        Some(4.0 * 5.0f64.powi(ell_i) / denominator)
    } else {
        None
    };
    let ell_prime = ((54.0f64 / 11.0).log2() / alpha).ceil() as u64;
    let volume_bound = (-c * k as f64).exp2();
    Ok(SoundnessParameters {
        ell,
        alpha,
        k,
        c,
        epsilon1,
        epsilon2,
        t,
        ell_prime,
        volume_bound,
    })
}
