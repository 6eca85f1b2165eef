//! Cell counts and the homogeneity test statistics.
//!
//! Everything here is a pure function of the per-cell counts: the unweighted
//! statistic `T1 = n m sum (rhat_j - shat_j)^2`, the weighted statistic
//! `T2 = n sum g_j (rhat_j - shat_j)^2 / p_j`, the diagonal term `W` of its
//! Hoeffding-style decomposition and the bias-corrected `T3 = T2 - W`.

use serde::{Deserialize, Serialize};

use crate::density::AlternativePair;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Which population functional a separation target refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    /// `n m sum p_j^2 eta_j^2`
    T1,
    /// `n sum g_j p_j eta_j^2`
    T2,
    /// `n sum p_j eta_j^2` (unit weights)
    T,
}

/// Per-cell weights `g_j` for the weighted statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    g: Vec<f64>,
}

impl Weights {
    pub const DEFAULT_LOWER: f64 = 0.1;
    pub const DEFAULT_UPPER: f64 = 10.0;

    pub fn new(g: Vec<f64>) -> Result<Self> {
        Self::with_limits(g, Self::DEFAULT_LOWER, Self::DEFAULT_UPPER)
    }

    pub fn with_limits(g: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        for (j, &w) in g.iter().enumerate() {
            if !(w > lower && w < upper) {
                return Err(Error::InvalidArgument(format!(
                    "weight g[{j}] = {w} outside ({lower}, {upper})"
                )));
            }
        }
        Ok(Weights { g })
    }

    /// `g ≡ 1`.
    pub fn unit(m: usize) -> Self {
        Weights { g: vec![1.0; m] }
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub(crate) fn check_len(&self, m: usize) -> Result<()> {
        if self.g.len() != m {
            return Err(Error::InvalidArgument(format!(
                "weights have length {}, partition has {m} cells",
                self.g.len()
            )));
        }
        Ok(())
    }
}

/// Per-cell counts of two samples sharing one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleCounts {
    part: Partition,
    /// First sample size `n`.
    pub nx: usize,
    /// Second sample size `l`.
    pub ny: usize,
    /// Counts of the first sample per cell.
    pub cx: Vec<u64>,
    /// Counts of the second sample per cell.
    pub cy: Vec<u64>,
}

impl TwoSampleCounts {
    pub fn from_counts(part: Partition, cx: Vec<u64>, cy: Vec<u64>) -> Result<Self> {
        if cx.len() != part.m() || cy.len() != part.m() {
            return Err(Error::InvalidArgument(
                "count vectors must have one entry per cell".into(),
            ));
        }
        let nx: u64 = cx.iter().sum();
        let ny: u64 = cy.iter().sum();
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("both samples must be nonempty".into()));
        }
        Ok(TwoSampleCounts {
            part,
            nx: nx as usize,
            ny: ny as usize,
            cx,
            cy,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn m(&self) -> usize {
        self.part.m()
    }

    /// Sample size ratio `a = n / l`.
    pub fn a(&self) -> f64 {
        self.nx as f64 / self.ny as f64
    }

    /// Empirical cell frequencies of the first sample, `rhat_j = cx_j / n`.
    pub fn r_hat(&self) -> Vec<f64> {
        self.cx.iter().map(|&c| c as f64 / self.nx as f64).collect()
    }

    /// Empirical cell frequencies of the second sample, `shat_j = cy_j / l`.
    pub fn s_hat(&self) -> Vec<f64> {
        self.cy.iter().map(|&c| c as f64 / self.ny as f64).collect()
    }

    /// `T1 = n m sum_j (rhat_j - shat_j)^2`.
    pub fn t1_stat(&self) -> f64 {
        let n = self.nx as f64;
        let m = self.m() as f64;
        let sum: f64 = self
            .r_hat()
            .iter()
            .zip(self.s_hat())
            .map(|(r, s)| (r - s) * (r - s))
            .sum();
        n * m * sum
    }

    /// `T2 = n sum_j g_j (rhat_j - shat_j)^2 / p_j`.
    pub fn t2_stat(&self, w: &Weights) -> Result<f64> {
        w.check_len(self.m())?;
        let n = self.nx as f64;
        let sum: f64 = self
            .r_hat()
            .iter()
            .zip(self.s_hat())
            .zip(self.part.widths())
            .zip(w.g())
            .map(|(((r, s), p), g)| g * (r - s) * (r - s) / p)
            .sum();
        Ok(n * sum)
    }

    /// `T2` with unit weights.
    pub fn t_stat(&self) -> f64 {
        self.t2_stat(&Weights::unit(self.m()))
            .expect("unit weights always match")
    }

    /// The diagonal term of the decomposition of `T2`, centered at the
    /// plug-in coefficients `theta_hat`, `tau_hat`.
    ///
    /// `W = n^{-1} sum_j g_j p_j^{-1} sum_i phibar_j^2(X_i)
    ///    + n l^{-2} sum_j g_j p_j^{-1} sum_i phitilde_j^2(Y_i)`,
    /// where `phibar_j(x) = phi_j(x) - theta_j p_j` and likewise for
    /// `phitilde`. With plug-in centering this collapses to
    /// `sum_j g_j (rhat_j (1 - rhat_j) + a shat_j (1 - shat_j)) / p_j`.
    pub fn w_term(&self, w: &Weights) -> Result<f64> {
        let theta_hat = plugin_coeffs(&self.r_hat(), self.part.widths());
        let tau_hat = plugin_coeffs(&self.s_hat(), self.part.widths());
        self.w_term_centered(w, &theta_hat, &tau_hat)
    }

    /// `W` with explicit centering coefficients, e.g. the true `theta`,
    /// `tau` when they are known to a simulation harness.
    pub fn w_term_centered(&self, w: &Weights, theta: &[f64], tau: &[f64]) -> Result<f64> {
        w.check_len(self.m())?;
        if theta.len() != self.m() || tau.len() != self.m() {
            return Err(Error::InvalidArgument(
                "centering coefficients must have one entry per cell".into(),
            ));
        }
        let n = self.nx as f64;
        let l = self.ny as f64;
        let mut x_part = 0.0;
        let mut y_part = 0.0;
        for j in 0..self.m() {
            let p = self.part.widths()[j];
            let g = w.g()[j];
            // phibar_j takes the value `1 - b` on cell j and `-b` elsewhere,
            // with b = p (1 + theta_j)
            let b = p * (1.0 + theta[j]);
            let cx = self.cx[j] as f64;
            x_part += g * (cx * (1.0 - b) * (1.0 - b) + (n - cx) * b * b) / p;
            let c = p * (1.0 + tau[j]);
            let cy = self.cy[j] as f64;
            y_part += g * (cy * (1.0 - c) * (1.0 - c) + (l - cy) * c * c) / p;
        }
        Ok(x_part / n + y_part * n / (l * l))
    }

    /// `T3 = T2 - W`; may be negative.
    pub fn t3_stat(&self, w: &Weights) -> Result<f64> {
        Ok(self.t2_stat(w)? - self.w_term(w)?)
    }
}

pub(crate) fn plugin_coeffs(freq: &[f64], widths: &[f64]) -> Vec<f64> {
    freq.iter().zip(widths).map(|(f, p)| f / p - 1.0).collect()
}

/// Count both samples into the cells of `part`.
pub fn tally(part: &Partition, xs: &[f64], ys: &[f64]) -> Result<TwoSampleCounts> {
    let cx = tally_one(part, xs, "first sample")?;
    let cy = tally_one(part, ys, "second sample")?;
    TwoSampleCounts::from_counts(part.clone(), cx, cy)
}

/// Count a single sample; reports the index of an out-of-range value.
pub fn tally_one(part: &Partition, xs: &[f64], label: &str) -> Result<Vec<u64>> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument(format!("{label} is empty")));
    }
    let mut counts = vec![0u64; part.m()];
    for (i, &x) in xs.iter().enumerate() {
        let j = part
            .cell_of(x)
            .map_err(|_| Error::Domain(format!("{label}[{i}] = {x} outside [0,1]")))?;
        counts[j] += 1;
    }
    Ok(counts)
}

/// Population counterpart of the statistics, evaluated on true densities.
///
/// Zero exactly when `eta = 0`; depends on the pair only through `eta`.
pub fn population_t(
    pair: &AlternativePair,
    n: usize,
    functional: Functional,
    weights: Option<&Weights>,
) -> Result<f64> {
    let part = pair.partition();
    let eta = pair.eta();
    let nf = n as f64;
    let p = part.widths();
    Ok(match functional {
        Functional::T1 => {
            let m = part.m() as f64;
            nf * m
                * p.iter()
                    .zip(&eta)
                    .map(|(p, e)| p * p * e * e)
                    .sum::<f64>()
        }
        Functional::T2 => {
            let unit = Weights::unit(part.m());
            let w = weights.unwrap_or(&unit);
            w.check_len(part.m())?;
            nf * p
                .iter()
                .zip(&eta)
                .zip(w.g())
                .map(|((p, e), g)| g * p * e * e)
                .sum::<f64>()
        }
        Functional::T => nf * p.iter().zip(&eta).map(|(p, e)| p * e * e).sum::<f64>(),
    })
}

/// One-sample goodness-of-fit statistic `n sum_j (rhat_j - p_j)^2 / p_j`
/// against the uniform distribution.
pub fn gof_stat(part: &Partition, cx: &[u64], n: usize) -> f64 {
    let nf = n as f64;
    part.widths()
        .iter()
        .zip(cx)
        .map(|(p, &c)| {
            let d = c as f64 / nf - p;
            d * d / p
        })
        .sum::<f64>()
        * nf
}
