//! Plug-in estimators for the coefficients, the variance scales and the
//! centering constant.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::moments::{e_n, EForm};
use crate::statistics::{plugin_coeffs, TwoSampleCounts, Weights};

/// Everything the decision rules need to studentize a statistic, estimated
/// from the counts alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedScale {
    /// `sigmahat_1n^2 = 2 m^2 sum (rhat_j + a shat_j)^2`
    pub sigma1_sq: f64,
    /// `sigmahat_2n^2 = 2 sum g_j^2 p_j^{-2} (rhat_j + a shat_j)^2`
    pub sigma2_sq: f64,
    /// Plug-in centering `ehat_n`
    pub e_hat: f64,
    /// `thetahat_j = rhat_j / p_j - 1`
    pub theta_hat: Vec<f64>,
    /// `tauhat_j = shat_j / p_j - 1`
    pub tau_hat: Vec<f64>,
    /// Set when either sample concentrates in a single cell; the estimates
    /// are still finite (cell widths are bounded away from zero).
    pub degenerate: bool,
}

/// Estimate the scales with the exact centering form.
pub fn estimate_scales(counts: &TwoSampleCounts, w: &Weights) -> Result<EstimatedScale> {
    estimate_scales_with(counts, w, EForm::Exact)
}

/// Estimate the scales, choosing the centering form explicitly.
pub fn estimate_scales_with(
    counts: &TwoSampleCounts,
    w: &Weights,
    e_form: EForm,
) -> Result<EstimatedScale> {
    w.check_len(counts.m())?;
    let part = counts.partition();
    let p = part.widths();
    let m = counts.m() as f64;
    let a = counts.a();
    let r_hat = counts.r_hat();
    let s_hat = counts.s_hat();
    let theta_hat = plugin_coeffs(&r_hat, p);
    let tau_hat = plugin_coeffs(&s_hat, p);

    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for j in 0..counts.m() {
        let d = r_hat[j] + a * s_hat[j];
        s1 += d * d;
        let gp = w.g()[j] / p[j];
        s2 += gp * gp * d * d;
    }
    let degenerate = counts.cx.iter().filter(|&&c| c > 0).count() <= 1
        || counts.cy.iter().filter(|&&c| c > 0).count() <= 1;

    Ok(EstimatedScale {
        sigma1_sq: 2.0 * m * m * s1,
        sigma2_sq: 2.0 * s2,
        e_hat: e_n(&theta_hat, &tau_hat, p, w.g(), a, e_form),
        theta_hat,
        tau_hat,
        degenerate,
    })
}
