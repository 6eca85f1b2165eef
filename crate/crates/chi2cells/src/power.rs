//! Asymptotic type II error predictions.
//!
//! For a pair of densities separated by `M` in the population functional,
//! the predicted type II error of an upper-tail test with hypothesis-side
//! scale `sigma` and alternative-side scale `sigma_full` is
//! `beta = Phi(sigma_full^{-1} (sigma x_alpha - M))`.

use serde::{Deserialize, Serialize};

use crate::density::AlternativePair;
use crate::error::{Error, Result};
use crate::hypothesis::TestKind;
use crate::moments::{gof_theory, t1_theory, t2_theory, EForm};
use crate::normal;
use crate::statistics::Weights;

/// Predicted type II error and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPrediction {
    pub beta: f64,
    pub power: f64,
    /// Population separation `M`.
    pub shift: f64,
    /// Hypothesis-side scale `sigma`.
    pub leading_scale: f64,
    /// Alternative-side scale `sigma_full >= sigma`.
    pub full_scale: f64,
}

/// Options for the weighted-test prediction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PredictOptions {
    /// Evaluate the `K2` prediction with the unweighted separation `M_1n`
    /// instead of the weighted `M_2n`. The weighted form is dimensionally
    /// consistent with the `sigma_2n` scales and is the default.
    pub k2_unweighted_shift: bool,
}

/// Predict the type II error of `kind` against the given pair.
pub fn predict_beta(
    pair: &AlternativePair,
    n: usize,
    l: usize,
    kind: TestKind,
    weights: Option<&Weights>,
    alpha: f64,
) -> Result<PowerPrediction> {
    predict_beta_with(pair, n, l, kind, weights, alpha, PredictOptions::default())
}

/// [`predict_beta`] with explicit options.
pub fn predict_beta_with(
    pair: &AlternativePair,
    n: usize,
    l: usize,
    kind: TestKind,
    weights: Option<&Weights>,
    alpha: f64,
    opts: PredictOptions,
) -> Result<PowerPrediction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} outside (0,1)"
        )));
    }
    let x_alpha = normal::upper_critical(alpha)?;
    let unit = Weights::unit(pair.partition().m());
    let w = weights.unwrap_or(&unit);

    let (shift, leading_sq, full_sq) = match kind {
        TestKind::K1 => {
            let rep = t1_theory(pair, n, l);
            (rep.shift, rep.leading_sigma_sq, rep.full_sigma_sq)
        }
        TestKind::K2 | TestKind::K3 => {
            let rep = t2_theory(pair, n, l, w, EForm::Exact)?;
            let shift = if opts.k2_unweighted_shift && kind == TestKind::K2 {
                t1_theory(pair, n, l).shift
            } else {
                rep.shift
            };
            (shift, rep.leading_sigma_sq, rep.full_sigma_sq)
        }
        TestKind::Gof => {
            let rep = gof_theory(&pair.f, n);
            (rep.shift, rep.leading_sigma_sq, rep.full_sigma_sq)
        }
    };

    let leading = leading_sq.sqrt();
    let full = full_sq.sqrt();
    let beta = normal::cdf((leading * x_alpha - shift) / full);
    Ok(PowerPrediction {
        beta,
        power: 1.0 - beta,
        shift,
        leading_scale: leading,
        full_scale: full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{make_alternative, AlternativePair};
    use crate::partition::Partition;
    use crate::statistics::Functional;
    use approx::assert_relative_eq;

    #[test]
    fn null_pair_has_power_alpha() {
        let pair = AlternativePair::null(Partition::equal(10).unwrap());
        for kind in [TestKind::K1, TestKind::K2, TestKind::K3, TestKind::Gof] {
            let pred = predict_beta(&pair, 200, 200, kind, None, 0.05).unwrap();
            assert_relative_eq!(pred.beta, 0.95, epsilon = 1e-9);
            assert_relative_eq!(pred.power, 0.05, epsilon = 1e-9);
        }
    }

    #[test]
    fn centering_case_is_one_half_in_the_limit() {
        // when M = sigma x_alpha and the scales coincide, beta = Phi(0);
        // a tiny separation at large n keeps the addendum negligible
        let part = Partition::equal(400).unwrap();
        let n = 100_000_000;
        let dir: Vec<f64> = (0..400).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let sigma = (8.0 * 400.0f64).sqrt();
        let x_alpha = normal::upper_critical(0.05).unwrap();
        let pair =
            make_alternative(&part, &dir, sigma * x_alpha, n, Functional::T1, None, None).unwrap();
        let pred = predict_beta(&pair, n, n, TestKind::K1, None, 0.05).unwrap();
        assert!((pred.beta - 0.5).abs() < 0.01, "beta = {}", pred.beta);
    }

    #[test]
    fn monotone_decreasing_in_shift() {
        let part = Partition::equal(20).unwrap();
        let dir: Vec<f64> = (0..20).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut last = 1.0;
        for target in [0.0, 5.0, 10.0, 20.0, 40.0] {
            let pair =
                make_alternative(&part, &dir, target, 2000, Functional::T1, None, None).unwrap();
            let pred = predict_beta(&pair, 2000, 2000, TestKind::K1, None, 0.05).unwrap();
            assert!(pred.beta <= last + 1e-12);
            last = pred.beta;
        }
    }

    #[test]
    fn k2_and_k3_predictions_agree() {
        let part = Partition::equal(12).unwrap();
        let dir: Vec<f64> = (0..12).map(|j| if j % 3 == 0 { 1.0 } else { -0.5 }).collect();
        let pair =
            make_alternative(&part, &dir, 12.0, 1000, Functional::T2, None, None).unwrap();
        let k2 = predict_beta(&pair, 1000, 1000, TestKind::K2, None, 0.05).unwrap();
        let k3 = predict_beta(&pair, 1000, 1000, TestKind::K3, None, 0.05).unwrap();
        assert_relative_eq!(k2.beta, k3.beta, epsilon = 1e-14);
    }

    #[test]
    fn unweighted_shift_option_changes_k2_only() {
        let part = Partition::custom(&[0.0, 0.2, 0.5, 1.0]).unwrap();
        let pair =
            make_alternative(&part, &[1.0, -1.0, 0.3], 5.0, 500, Functional::T2, None, None)
                .unwrap();
        let opts = PredictOptions {
            k2_unweighted_shift: true,
        };
        let base = predict_beta(&pair, 500, 500, TestKind::K2, None, 0.05).unwrap();
        let flagged =
            predict_beta_with(&pair, 500, 500, TestKind::K2, None, 0.05, opts).unwrap();
        // unequal cells: M_1n differs from M_2n
        assert!((base.shift - flagged.shift).abs() > 1e-9);
        let k3 = predict_beta_with(&pair, 500, 500, TestKind::K3, None, 0.05, opts).unwrap();
        assert_relative_eq!(k3.shift, base.shift, epsilon = 1e-12);
    }

    #[test]
    fn invariant_beta_formula() {
        let part = Partition::equal(6).unwrap();
        let dir = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let pair = make_alternative(&part, &dir, 3.0, 300, Functional::T1, None, None).unwrap();
        let pred = predict_beta(&pair, 300, 300, TestKind::K1, None, 0.1).unwrap();
        let x_alpha = normal::upper_critical(0.1).unwrap();
        assert_relative_eq!(
            pred.beta,
            normal::cdf((pred.leading_scale * x_alpha - pred.shift) / pred.full_scale),
            epsilon = 1e-14
        );
        assert_relative_eq!(pred.beta + pred.power, 1.0, epsilon = 1e-14);
    }
}
