//! Piecewise-constant density models on a cell partition.
//!
//! A [`CellDensity`] is `f(x) = 1 + sum_j theta_j phi_j(x)`, constrained by
//! `sum_j theta_j p_j = 0` so that `f` integrates to one, and by
//! `1 + theta_j >= 0` so that `f` is nonnegative. Under the constraint the
//! value on cell `j` is exactly `1 + theta_j` and the mass of cell `j` is
//! `r_j = p_j (1 + theta_j)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::statistics::{population_t, Functional, Weights};

const CONSTRAINT_TOL: f64 = 1e-10;

/// A density `1 + sum theta_j phi_j` on some partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDensity {
    part: Partition,
    theta: Vec<f64>,
    /// Cell masses `r_j`, precomputed at construction.
    masses: Vec<f64>,
    /// Cumulative masses, length `m + 1`.
    cum: Vec<f64>,
}

/// L2-type norms of a density, used for the nuisance-parameter classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    /// `int f^2 = sum p_j (1 + theta_j)^2`
    pub l2_sq: f64,
    /// `int (f-1)^2 = sum p_j theta_j^2`
    pub centered_l2_sq: f64,
    /// `sup f = max_j (1 + theta_j)`
    pub sup: f64,
}

impl CellDensity {
    /// The uniform density (`theta = 0`).
    pub fn uniform(part: Partition) -> Self {
        let m = part.m();
        Self::new(part, vec![0.0; m]).expect("uniform coefficients are valid")
    }

    /// Build from coefficients that already satisfy the constraints.
    pub fn new(part: Partition, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != part.m() {
            return Err(Error::InvalidArgument(format!(
                "theta has length {}, partition has {} cells",
                theta.len(),
                part.m()
            )));
        }
        let weighted: f64 = theta.iter().zip(part.widths()).map(|(t, p)| t * p).sum();
        if weighted.abs() > CONSTRAINT_TOL {
            return Err(Error::InvalidModel(format!(
                "sum theta_j p_j = {weighted:e} violates the centering constraint"
            )));
        }
        for (j, &t) in theta.iter().enumerate() {
            if 1.0 + t < -1e-9 {
                return Err(Error::InvalidModel(format!(
                    "density is negative on cell {j}: 1 + theta = {}",
                    1.0 + t
                )));
            }
        }
        let masses: Vec<f64> = theta
            .iter()
            .zip(part.widths())
            .map(|(t, p)| (p * (1.0 + t)).max(0.0))
            .collect();
        let mut cum = Vec::with_capacity(masses.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for &r in &masses {
            acc += r;
            cum.push(acc);
        }
        Ok(CellDensity {
            part,
            theta,
            masses,
            cum,
        })
    }

    /// Project raw coefficients onto the constraint `sum theta_j p_j = 0`
    /// by subtracting their width-weighted mean.
    ///
    /// Fails if the projected coefficients would make the density negative
    /// somewhere.
    pub fn project(part: Partition, raw: &[f64]) -> Result<Self> {
        if raw.len() != part.m() {
            return Err(Error::InvalidArgument(format!(
                "raw coefficients have length {}, partition has {} cells",
                raw.len(),
                part.m()
            )));
        }
        let mean: f64 = raw.iter().zip(part.widths()).map(|(t, p)| t * p).sum();
        let theta: Vec<f64> = raw.iter().map(|t| t - mean).collect();
        Self::new(part, theta)
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Cell masses `r_j = p_j (1 + theta_j)`.
    pub fn cell_masses(&self) -> &[f64] {
        &self.masses
    }

    /// Density value at `x`.
    pub fn value(&self, x: f64) -> Result<f64> {
        let j = self.part.cell_of(x)?;
        Ok(1.0 + self.theta[j])
    }

    /// Distribution function; continuous, piecewise linear with slope
    /// `1 + theta_j` on cell `j`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let j = self.part.cell_of(x)?;
        Ok(self.cum[j] + (x - self.part.edges()[j]) * (1.0 + self.theta[j]))
    }

    /// Draw `count` i.i.d. values: a cell chosen with probability `r_j`,
    /// then a uniform position inside it. Deterministic given `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        let total = *self.cum.last().unwrap();
        let edges = self.part.edges();
        let widths = self.part.widths();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let target = rng.random::<f64>() * total;
            let j = (self.cum.partition_point(|&c| c <= target) - 1).min(self.part.m() - 1);
            out.push(edges[j] + rng.random::<f64>() * widths[j]);
        }
        out
    }

    pub fn norms(&self) -> Norms {
        let mut l2 = 0.0;
        let mut centered = 0.0;
        let mut sup = f64::NEG_INFINITY;
        for (&t, &p) in self.theta.iter().zip(self.part.widths()) {
            l2 += p * (1.0 + t) * (1.0 + t);
            centered += p * t * t;
            sup = sup.max(1.0 + t);
        }
        Norms {
            l2_sq: l2,
            centered_l2_sq: centered,
            sup,
        }
    }

    /// Membership in the L2-bounded nuisance class: `||f||^2 < c`.
    pub fn in_l2_class(&self, c: f64) -> bool {
        self.norms().l2_sq < c
    }

    /// Membership in the sup-bounded class: `sup f < c_n * sqrt(m)`.
    pub fn in_sup_class(&self, c_n: f64) -> bool {
        self.norms().sup < c_n * (self.part.m() as f64).sqrt()
    }

    /// Cell-averaged projection of this density onto another partition.
    ///
    /// Exact for the piecewise model: new masses come from cdf differences.
    pub fn project_onto(&self, part: Partition) -> Result<Self> {
        let mut theta = Vec::with_capacity(part.m());
        for j in 0..part.m() {
            let lo = part.edges()[j];
            let hi = part.edges()[j + 1];
            let mass = self.cdf(hi)? - self.cdf(lo)?;
            theta.push(mass / part.widths()[j] - 1.0);
        }
        // re-center to absorb floating point drift
        Self::project(part, &theta)
    }
}

/// A pair of densities `(f, g)` on a shared partition; the difference
/// `eta = theta - tau` is what every homogeneity statistic responds to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativePair {
    pub f: CellDensity,
    pub g: CellDensity,
}

impl AlternativePair {
    pub fn new(f: CellDensity, g: CellDensity) -> Result<Self> {
        if f.partition() != g.partition() {
            return Err(Error::PartitionMismatch(
                "alternative pair must share one partition".into(),
            ));
        }
        Ok(AlternativePair { f, g })
    }

    /// The null pair: both samples uniform.
    pub fn null(part: Partition) -> Self {
        AlternativePair {
            f: CellDensity::uniform(part.clone()),
            g: CellDensity::uniform(part),
        }
    }

    pub fn partition(&self) -> &Partition {
        self.f.partition()
    }

    /// `eta_j = theta_j - tau_j`.
    pub fn eta(&self) -> Vec<f64> {
        self.f
            .theta()
            .iter()
            .zip(self.g.theta())
            .map(|(t, u)| t - u)
            .collect()
    }
}

/// Build a pair `(f, g)` separated by exactly `target` in the population
/// functional: `tau = theta - s * d` with the centered direction `d` scaled
/// so that the functional of `eta = s * d` equals `target`.
pub fn make_alternative(
    part: &Partition,
    direction: &[f64],
    target: f64,
    n: usize,
    functional: Functional,
    weights: Option<&Weights>,
    base_theta: Option<&[f64]>,
) -> Result<AlternativePair> {
    if target < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "target separation must be nonnegative, got {target}"
        )));
    }
    let f = match base_theta {
        Some(raw) => CellDensity::project(part.clone(), raw)?,
        None => CellDensity::uniform(part.clone()),
    };
    if direction.len() != part.m() {
        return Err(Error::InvalidArgument(format!(
            "direction has length {}, partition has {} cells",
            direction.len(),
            part.m()
        )));
    }
    let mean: f64 = direction
        .iter()
        .zip(part.widths())
        .map(|(d, p)| d * p)
        .sum();
    let centered: Vec<f64> = direction.iter().map(|d| d - mean).collect();
    let scale_sq = centered.iter().map(|d| d * d).fold(0.0, f64::max);
    if scale_sq < 1e-24 {
        return Err(Error::InvalidArgument(
            "direction projects to zero under the centering constraint".into(),
        ));
    }

    let s = if target == 0.0 {
        0.0
    } else {
        let probe = probe_functional(part, &centered, n, functional, weights)?;
        (target / probe).sqrt()
    };

    let tau: Vec<f64> = f
        .theta()
        .iter()
        .zip(&centered)
        .map(|(t, d)| t - s * d)
        .collect();
    let g = CellDensity::new(part.clone(), tau).map_err(|e| {
        Error::InfeasibleTarget(format!(
            "no nonnegative density reaches the target separation {target}: {e}"
        ))
    })?;
    AlternativePair::new(f, g)
}

/// Population functional of a unit-scale displacement `eta = d`.
fn probe_functional(
    part: &Partition,
    d: &[f64],
    n: usize,
    functional: Functional,
    weights: Option<&Weights>,
) -> Result<f64> {
    let nf = n as f64;
    let m = part.m() as f64;
    let p = part.widths();
    Ok(match functional {
        Functional::T1 => nf * m * p.iter().zip(d).map(|(p, d)| p * p * d * d).sum::<f64>(),
        Functional::T2 => {
            let w = match weights {
                Some(w) => {
                    w.check_len(part.m())?;
                    w.g().to_vec()
                }
                None => vec![1.0; part.m()],
            };
            nf * p
                .iter()
                .zip(d)
                .zip(&w)
                .map(|((p, d), g)| g * p * d * d)
                .sum::<f64>()
        }
        Functional::T => nf * p.iter().zip(d).map(|(p, d)| p * d * d).sum::<f64>(),
    })
}

/// Re-export used by [`make_alternative`] callers; the population value of a
/// constructed pair is always available through [`population_t`].
pub use crate::statistics::population_t as pair_population_t;
