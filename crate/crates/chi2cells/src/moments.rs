//! Exact single-observation moments of the basis functions and the
//! theoretical mean/variance expansions of the test statistics.
//!
//! The single-observation formulas are exact (they follow from direct
//! calculation over the cell outcomes and are pinned against an enumeration
//! oracle); the per-statistic reports are leading-order expansions whose
//! `o(1)` factors are dropped.

use serde::{Deserialize, Serialize};

use crate::density::{AlternativePair, CellDensity};
use crate::error::Result;
use crate::statistics::Weights;

/// Moments of `phi_j(X)` for one observation of a cell density, where the
/// cell has width `p` and coefficient `theta` (so mass `r = p (1 + theta)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiMoments {
    /// `E phi_j = theta p`
    pub mean: f64,
    /// `E phi_j^2 = p (1 - p + theta (1 - 2p))`
    pub second: f64,
    /// `E (phi_j - E phi_j)^4 = r (1 - 4r + 6r^2 - 3r^3)`
    pub fourth_central: f64,
}

/// Mixed moments of `phi_{j1}(X) phi_{j2}(X)` for distinct cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCrossMoments {
    /// `E phi_{j1} phi_{j2} = -p1 p2 (1 + theta1 + theta2)`
    pub product: f64,
    /// `E phibar_{j1}^2 phibar_{j2}^2 = r1 r2 (r1 + r2 - 3 r1 r2)`
    pub centered_square_product: f64,
}

/// Exact moments of a single centered indicator.
pub fn phi_moments(p: f64, theta: f64) -> PhiMoments {
    let r = p * (1.0 + theta);
    PhiMoments {
        mean: theta * p,
        second: p * (1.0 - p + theta * (1.0 - 2.0 * p)),
        fourth_central: r * (1.0 - 4.0 * r + 6.0 * r * r - 3.0 * r * r * r),
    }
}

/// Exact mixed moments of two distinct centered indicators.
///
/// `phi_{j1} phi_{j2}` takes three values (in cell `j1`, in cell `j2`,
/// in neither); summing over them gives `-p1 p2 (1 + theta1 + theta2)`.
pub fn phi_cross_moments(p1: f64, theta1: f64, p2: f64, theta2: f64) -> PhiCrossMoments {
    let r1 = p1 * (1.0 + theta1);
    let r2 = p2 * (1.0 + theta2);
    PhiCrossMoments {
        product: -p1 * p2 * (1.0 + theta1 + theta2),
        centered_square_product: r1 * r2 * (r1 + r2 - 3.0 * r1 * r2),
    }
}

/// Which form of the centering constant `e_n` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EForm {
    /// The exact single-observation form
    /// `sum g_j ((1-p) + theta (1-2p) - p theta^2 + a ((1-p) + tau (1-2p) - p tau^2))`.
    #[default]
    Exact,
    /// The first-order form `sum g_j (1 + a + theta_j + tau_j)`, which
    /// discards an `O(1)` constant.
    FirstOrder,
}

/// Theoretical mean and variance summary of a statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// Leading-order mean, `centering + shift`.
    pub mean: f64,
    /// Leading-order variance, equal to `full_sigma_sq`.
    pub variance: f64,
    /// Variance under the hypothesis-side expansion (`sigma_1n^2` or
    /// `sigma_2n^2`).
    pub leading_sigma_sq: f64,
    /// Variance including the alternative addendum (`sigma_11n^2` or
    /// `sigma_21n^2`); equals `leading_sigma_sq` when `eta = 0`.
    pub full_sigma_sq: f64,
    /// The population separation (`M_1n(eta)` or `M_2n(eta)`).
    pub shift: f64,
    /// The centering constant (`(m-1)(1+a)` or `e_n`).
    pub centering: f64,
}

/// Mean/variance expansion of `T1`.
///
/// The variance addendum under alternatives is
/// `4 n m^2 sum p^3 (1 + theta + a + a tau) eta^2`: the cross term of a
/// squared shifted variable contributes `Var[(w + mu)^2] ∋ 4 mu^2 Var w`,
/// which fixes the constant.
pub fn t1_theory(pair: &AlternativePair, n: usize, l: usize) -> MomentReport {
    let part = pair.partition();
    let m = part.m() as f64;
    let nf = n as f64;
    let a = nf / l as f64;
    let eta = pair.eta();
    let theta = pair.f.theta();
    let tau = pair.g.theta();
    let p = part.widths();

    let mut shift = 0.0;
    let mut leading = 0.0;
    let mut addendum = 0.0;
    for j in 0..part.m() {
        let w = 1.0 + theta[j] + a + a * tau[j];
        shift += p[j] * p[j] * eta[j] * eta[j];
        leading += p[j] * p[j] * w * w;
        addendum += p[j] * p[j] * p[j] * w * eta[j] * eta[j];
    }
    let shift = nf * m * shift;
    let leading = 2.0 * m * m * leading;
    let full = leading + 4.0 * nf * m * m * addendum;
    let centering = (m - 1.0) * (1.0 + a);
    MomentReport {
        mean: centering + shift,
        variance: full,
        leading_sigma_sq: leading,
        full_sigma_sq: full,
        shift,
        centering,
    }
}

/// Mean/variance expansion of `T2` (and of `T3` up to the centering).
pub fn t2_theory(
    pair: &AlternativePair,
    n: usize,
    l: usize,
    w: &Weights,
    e_form: EForm,
) -> Result<MomentReport> {
    let part = pair.partition();
    w.check_len(part.m())?;
    let nf = n as f64;
    let a = nf / l as f64;
    let eta = pair.eta();
    let theta = pair.f.theta();
    let tau = pair.g.theta();
    let p = part.widths();
    let g = w.g();

    let mut shift = 0.0;
    let mut leading = 0.0;
    let mut addendum = 0.0;
    for j in 0..part.m() {
        let v = 1.0 + theta[j] + a + a * tau[j];
        shift += g[j] * p[j] * eta[j] * eta[j];
        leading += g[j] * g[j] * v * v;
        addendum += g[j] * g[j] * p[j] * v * eta[j] * eta[j];
    }
    let shift = nf * shift;
    let leading = 2.0 * leading;
    let full = leading + 4.0 * nf * addendum;
    let centering = e_n(theta, tau, p, g, a, e_form);
    Ok(MomentReport {
        mean: centering + shift,
        variance: full,
        leading_sigma_sq: leading,
        full_sigma_sq: full,
        shift,
        centering,
    })
}

/// The centering constant `e_n = E[W]`.
pub fn e_n(theta: &[f64], tau: &[f64], p: &[f64], g: &[f64], a: f64, form: EForm) -> f64 {
    match form {
        EForm::Exact => (0..theta.len())
            .map(|j| {
                let x = (1.0 - p[j]) + theta[j] * (1.0 - 2.0 * p[j]) - p[j] * theta[j] * theta[j];
                let y = (1.0 - p[j]) + tau[j] * (1.0 - 2.0 * p[j]) - p[j] * tau[j] * tau[j];
                g[j] * (x + a * y)
            })
            .sum(),
        EForm::FirstOrder => (0..theta.len())
            .map(|j| g[j] * (1.0 + a + theta[j] + tau[j]))
            .sum(),
    }
}

/// Exact finite-sample mean of `T1`:
/// `m sum r_j (1 - r_j) + a m sum s_j (1 - s_j) + M_1n(eta)`.
///
/// Under the homogeneity hypothesis with uniform marginals this is exactly
/// `(m - 1)(1 + a)`.
pub fn t1_exact_mean(pair: &AlternativePair, n: usize, l: usize) -> f64 {
    let m = pair.partition().m() as f64;
    let a = n as f64 / l as f64;
    let r = pair.f.cell_masses();
    let s = pair.g.cell_masses();
    let x: f64 = r.iter().map(|&r| r * (1.0 - r)).sum();
    let y: f64 = s.iter().map(|&s| s * (1.0 - s)).sum();
    let shift: f64 = n as f64
        * m
        * r.iter()
            .zip(s)
            .map(|(&r, &s)| (r - s) * (r - s))
            .sum::<f64>();
    m * x + a * m * y + shift
}

/// Mean/scale summary for the one-sample goodness-of-fit statistic:
/// centering `m - 1`, scale `sqrt(2m)`, shift `n sum p theta^2`.
pub fn gof_theory(density: &CellDensity, n: usize) -> MomentReport {
    let m = density.partition().m() as f64;
    let shift = n as f64 * density.norms().centered_l2_sq;
    let scale_sq = 2.0 * m;
    MomentReport {
        mean: (m - 1.0) + shift,
        variance: scale_sq,
        leading_sigma_sq: scale_sq,
        full_sigma_sq: scale_sq,
        shift,
        centering: m - 1.0,
    }
}
