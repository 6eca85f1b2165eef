//! Cell partitions of `[0,1]` and the centered indicator basis.
//!
//! A [`Partition`] splits `[0,1]` into `m` half-open cells
//! `I_j = [e_j, e_{j+1})`, the last cell additionally owning the right
//! endpoint `x = 1`. On top of a partition lives the centered indicator
//! basis `phi_j(x) = 1{x in I_j} - p_j`, which integrates to zero on every
//! cell and encodes deviations from the uniform distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bounds for the cell balance condition `c < m * p_j < C`.
///
/// The theory only requires that such constants exist; the defaults are a
/// pragmatic choice and can be overridden per partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceLimits {
    pub lower: f64,
    pub upper: f64,
}

impl Default for BalanceLimits {
    fn default() -> Self {
        BalanceLimits {
            lower: 0.5,
            upper: 2.0,
        }
    }
}

/// An ordered partition of `[0,1]` into `m >= 2` cells of positive width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    edges: Vec<f64>,
    widths: Vec<f64>,
}

impl Partition {
    /// `m` cells of equal width `1/m`.
    pub fn equal(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "partition needs at least 2 cells, got {m}"
            )));
        }
        let edges: Vec<f64> = (0..=m).map(|j| j as f64 / m as f64).collect();
        Ok(Self::from_edges_unchecked(edges))
    }

    /// A partition from explicit edges; validated against the default
    /// balance limits.
    pub fn custom(edges: &[f64]) -> Result<Self> {
        Self::custom_with_limits(edges, BalanceLimits::default())
    }

    /// A partition from explicit edges, validated against `limits`.
    pub fn custom_with_limits(edges: &[f64], limits: BalanceLimits) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 edges for 2 cells, got {}",
                edges.len()
            )));
        }
        if edges[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "first edge must be 0, got {}",
                edges[0]
            )));
        }
        if *edges.last().unwrap() != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "last edge must be 1, got {}",
                edges.last().unwrap()
            )));
        }
        for w in edges.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(format!(
                    "edges must be strictly increasing, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let part = Self::from_edges_unchecked(edges.to_vec());
        let m = part.m() as f64;
        for (j, &p) in part.widths.iter().enumerate() {
            let scaled = m * p;
            if scaled <= limits.lower || scaled >= limits.upper {
                return Err(Error::InvalidArgument(format!(
                    "cell {j} violates balance: m*p = {scaled:.6} outside ({}, {})",
                    limits.lower, limits.upper
                )));
            }
        }
        Ok(part)
    }

    fn from_edges_unchecked(edges: Vec<f64>) -> Self {
        let widths = edges.windows(2).map(|w| w[1] - w[0]).collect();
        Partition { edges, widths }
    }

    /// Number of cells.
    pub fn m(&self) -> usize {
        self.widths.len()
    }

    /// Cell edges `e_0 = 0, ..., e_m = 1`.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Cell widths `p_j = e_{j+1} - e_j`.
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// `max_j(m p_j) / min_j(m p_j)`, the observed balance ratio.
    pub fn balance_ratio(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &p in &self.widths {
            lo = lo.min(p);
            hi = hi.max(p);
        }
        hi / lo
    }

    /// Index of the cell containing `x` (zero-based).
    ///
    /// Cells are half-open on the right; `x = 1` belongs to the last cell.
    pub fn cell_of(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0,1]")));
        }
        let idx = self.edges.partition_point(|&e| e <= x);
        // idx counts edges <= x, at least 1 since e_0 = 0.
        Ok((idx - 1).min(self.m() - 1))
    }

    /// The centered indicator `phi_j(x) = 1{x in I_j} - p_j`.
    pub fn phi(&self, j: usize, x: f64) -> Result<f64> {
        if j >= self.m() {
            return Err(Error::InvalidArgument(format!(
                "cell index {j} out of range for m = {}",
                self.m()
            )));
        }
        let cell = self.cell_of(x)?;
        Ok(if cell == j {
            1.0 - self.widths[j]
        } else {
            -self.widths[j]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn equal_partition_edges_and_widths() {
        let p = Partition::equal(4).unwrap();
        assert_eq!(p.edges(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(p.widths(), &[0.25, 0.25, 0.25, 0.25]);
        assert_relative_eq!(p.balance_ratio(), 1.0);

        let p2 = Partition::equal(2).unwrap();
        assert_eq!(p2.widths(), &[0.5, 0.5]);
    }

    #[test]
    fn degenerate_partition_rejected() {
        assert!(Partition::equal(1).is_err());
        assert!(Partition::equal(0).is_err());
    }

    #[test]
    fn custom_partition_widths() {
        let p = Partition::custom(&[0.0, 0.3, 1.0]).unwrap();
        assert_relative_eq!(p.widths()[0], 0.3);
        assert_relative_eq!(p.widths()[1], 0.7);
    }

    #[test]
    fn custom_partition_rejects_bad_edges() {
        // zero-width cell
        assert!(Partition::custom(&[0.0, 0.5, 0.5, 1.0]).is_err());
        // first edge not 0
        assert!(Partition::custom(&[0.1, 0.5, 1.0]).is_err());
        // last edge not 1
        assert!(Partition::custom(&[0.0, 0.5, 0.9]).is_err());
        // decreasing
        assert!(Partition::custom(&[0.0, 0.7, 0.3, 1.0]).is_err());
    }

    #[test]
    fn custom_partition_balance_enforced() {
        // m*p = (0.02, 1.98) breaks the default lower bound 0.5
        assert!(Partition::custom(&[0.0, 0.01, 1.0]).is_err());
        let loose = BalanceLimits {
            lower: 0.01,
            upper: 100.0,
        };
        assert!(Partition::custom_with_limits(&[0.0, 0.01, 1.0], loose).is_ok());
    }

    #[test]
    fn cell_of_boundaries() {
        let p = Partition::equal(4).unwrap();
        assert_eq!(p.cell_of(0.0).unwrap(), 0);
        // half-open cells: a boundary belongs to the right cell
        assert_eq!(p.cell_of(0.25).unwrap(), 1);
        // the right endpoint is folded into the last cell
        assert_eq!(p.cell_of(1.0).unwrap(), 3);
        assert!(p.cell_of(-0.1).is_err());
        assert!(p.cell_of(1.1).is_err());
    }

    #[test]
    fn phi_values() {
        let p = Partition::equal(2).unwrap();
        assert_relative_eq!(p.phi(0, 0.3).unwrap(), 0.5);
        assert_relative_eq!(p.phi(1, 0.3).unwrap(), -0.5);
        assert!(p.phi(2, 0.3).is_err());
    }

    #[test]
    fn phi_integrates_to_zero_by_quadrature() {
        let p = Partition::custom(&[0.0, 0.3, 0.75, 1.0]).unwrap();
        let steps = 200_000;
        for j in 0..p.m() {
            // midpoint rule; phi is piecewise constant so this is exact up to
            // the cells cut by the grid
            let mut sum = 0.0;
            for i in 0..steps {
                let x = (i as f64 + 0.5) / steps as f64;
                sum += p.phi(j, x).unwrap();
            }
            assert!((sum / steps as f64).abs() < 1e-5);
        }
    }

    proptest! {
        #[test]
        fn widths_sum_to_one(m in 2usize..60) {
            let p = Partition::equal(m).unwrap();
            let s: f64 = p.widths().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn phi_sums_to_zero_pointwise(m in 2usize..40, x in 0.0f64..=1.0) {
            let p = Partition::equal(m).unwrap();
            let s: f64 = (0..m).map(|j| p.phi(j, x).unwrap()).sum();
            prop_assert!(s.abs() < 1e-12);
        }

        #[test]
        fn cell_of_inverts_construction(m in 2usize..40, j in 0usize..40, frac in 0.0f64..1.0) {
            let j = j % m;
            let p = Partition::equal(m).unwrap();
            let x = p.edges()[j] + frac * p.widths()[j];
            if x < 1.0 {
                prop_assert_eq!(p.cell_of(x).unwrap(), j);
            }
        }
    }
}
