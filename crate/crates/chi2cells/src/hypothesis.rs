//! Decision rules for the homogeneity tests and the one-sample
//! goodness-of-fit test.
//!
//! All tests are one-sided upper-tail: reject when the studentized value
//! exceeds the critical value `x_alpha` with `alpha = 1 - Phi(x_alpha)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_scales_with, EstimatedScale};
use crate::moments::EForm;
use crate::normal;
use crate::partition::Partition;
use crate::statistics::{gof_stat, tally_one, TwoSampleCounts, Weights};

/// The available decision rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    /// Unweighted statistic `T1`, centered at `m (1 + a)`, scaled by
    /// `sigmahat_1n`.
    K1,
    /// Weighted statistic `T2`, centered at the estimated `ehat_n`, scaled
    /// by `sigmahat_2n`.
    K2,
    /// Bias-corrected statistic `T3 = T2 - W`, centered at zero.
    K3,
    /// One-sample chi-squared test against the uniform distribution.
    Gof,
}

impl TestKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TestKind::K1 => "k1",
            TestKind::K2 => "k2",
            TestKind::K3 => "k3",
            TestKind::Gof => "gof",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k1" => Ok(TestKind::K1),
            "k2" => Ok(TestKind::K2),
            "k3" => Ok(TestKind::K3),
            "gof" => Ok(TestKind::Gof),
            other => Err(Error::InvalidArgument(format!(
                "unknown test kind '{other}' (expected k1, k2, k3 or gof)"
            ))),
        }
    }
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one test application.
///
/// Serializes with exactly the fields
/// `statistic, centering, scale, z, alpha, x_alpha, reject, p_value, kind,
/// m, n, l, a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub centering: f64,
    pub scale: f64,
    pub z: f64,
    pub alpha: f64,
    pub x_alpha: f64,
    pub reject: bool,
    pub p_value: f64,
    pub kind: TestKind,
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub a: f64,
    /// Set when the inputs could not support a meaningful scale; the report
    /// is still well-formed. Not part of the serialized format.
    #[serde(skip)]
    pub degenerate: bool,
}

fn build_report(
    kind: TestKind,
    statistic: f64,
    centering: f64,
    scale: f64,
    alpha: f64,
    m: usize,
    n: usize,
    l: usize,
    degenerate: bool,
) -> Result<TestReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} outside (0,1)"
        )));
    }
    let x_alpha = normal::upper_critical(alpha)?;
    let (z, degenerate) = if scale > 1e-300 && scale.is_finite() {
        ((statistic - centering) / scale, degenerate)
    } else {
        (0.0, true)
    };
    Ok(TestReport {
        statistic,
        centering,
        scale,
        z,
        alpha,
        x_alpha,
        reject: z > x_alpha,
        p_value: 1.0 - normal::cdf(z),
        kind,
        m,
        n,
        l,
        a: n as f64 / l as f64,
        degenerate,
    })
}

/// Apply one of the homogeneity decision rules to tallied counts.
pub fn run_test(
    counts: &TwoSampleCounts,
    kind: TestKind,
    w: &Weights,
    alpha: f64,
) -> Result<TestReport> {
    run_test_with(counts, kind, w, alpha, EForm::Exact)
}

/// Same as [`run_test`], choosing the centering form for `K2`.
pub fn run_test_with(
    counts: &TwoSampleCounts,
    kind: TestKind,
    w: &Weights,
    alpha: f64,
    e_form: EForm,
) -> Result<TestReport> {
    let est: EstimatedScale = estimate_scales_with(counts, w, e_form)?;
    let m = counts.m();
    let (n, l, a) = (counts.nx, counts.ny, counts.a());
    match kind {
        TestKind::K1 => build_report(
            kind,
            counts.t1_stat(),
            m as f64 * (1.0 + a),
            est.sigma1_sq.sqrt(),
            alpha,
            m,
            n,
            l,
            est.degenerate,
        ),
        TestKind::K2 => build_report(
            kind,
            counts.t2_stat(w)?,
            est.e_hat,
            est.sigma2_sq.sqrt(),
            alpha,
            m,
            n,
            l,
            est.degenerate,
        ),
        TestKind::K3 => build_report(
            kind,
            counts.t3_stat(w)?,
            0.0,
            est.sigma2_sq.sqrt(),
            alpha,
            m,
            n,
            l,
            est.degenerate,
        ),
        TestKind::Gof => Err(Error::InvalidArgument(
            "the goodness-of-fit test takes one sample; use gof_test".into(),
        )),
    }
}

/// One-sample chi-squared goodness-of-fit test against uniformity:
/// statistic `n sum (rhat_j - p_j)^2 / p_j`, centered at `m - 1`, scaled by
/// `sqrt(2m)`.
pub fn gof_test(part: &Partition, xs: &[f64], alpha: f64) -> Result<TestReport> {
    let cx = tally_one(part, xs, "sample")?;
    let n = xs.len();
    gof_test_from_counts(part, &cx, n, alpha)
}

/// Goodness-of-fit test when the per-cell counts are already available.
pub fn gof_test_from_counts(
    part: &Partition,
    cx: &[u64],
    n: usize,
    alpha: f64,
) -> Result<TestReport> {
    let m = part.m();
    build_report(
        TestKind::Gof,
        gof_stat(part, cx, n),
        m as f64 - 1.0,
        (2.0 * m as f64).sqrt(),
        alpha,
        m,
        n,
        n,
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::tally;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn part(m: usize) -> Partition {
        Partition::equal(m).unwrap()
    }

    #[test]
    fn identical_samples_accept() {
        let xs = [0.1, 0.3, 0.6, 0.9];
        let counts = tally(&part(2), &xs, &xs).unwrap();
        let rep = run_test(&counts, TestKind::K1, &Weights::unit(2), 0.05).unwrap();
        assert_relative_eq!(rep.statistic, 0.0);
        assert!(rep.z < 0.0);
        assert!(!rep.reject);
        assert!(rep.p_value > 0.5);
    }

    #[test]
    fn k3_z_is_t3_over_scale() {
        let counts = tally(
            &part(3),
            &[0.05, 0.1, 0.4, 0.5, 0.62, 0.73],
            &[0.9, 0.95, 0.99, 0.2],
        )
        .unwrap();
        let w = Weights::unit(3);
        let rep = run_test(&counts, TestKind::K3, &w, 0.05).unwrap();
        assert_relative_eq!(rep.centering, 0.0);
        assert_relative_eq!(
            rep.z,
            counts.t3_stat(&w).unwrap() / rep.scale,
            epsilon = 1e-12
        );
    }

    #[test]
    fn k2_and_k3_coincide_under_exact_centering() {
        // ehat with the exact form equals the plug-in W, so the two rules
        // produce the same studentized value
        let counts = tally(
            &part(4),
            &[0.1, 0.2, 0.3, 0.4, 0.55, 0.66, 0.8],
            &[0.15, 0.35, 0.77, 0.9, 0.05],
        )
        .unwrap();
        let w = Weights::unit(4);
        let k2 = run_test(&counts, TestKind::K2, &w, 0.05).unwrap();
        let k3 = run_test(&counts, TestKind::K3, &w, 0.05).unwrap();
        assert_relative_eq!(k2.z, k3.z, epsilon = 1e-12);
    }

    #[test]
    fn gof_proportional_counts_score_zero() {
        let xs = [0.1, 0.6, 0.3, 0.8];
        let rep = gof_test(&part(2), &xs, 0.05).unwrap();
        assert_relative_eq!(rep.statistic, 0.0);
        assert!(!rep.reject);
        assert_relative_eq!(rep.scale, 2.0);
        assert_relative_eq!(rep.centering, 1.0);
    }

    #[test]
    fn gof_rejects_empty() {
        assert!(gof_test(&part(2), &[], 0.05).is_err());
    }

    #[test]
    fn alpha_validation() {
        let counts = tally(&part(2), &[0.1], &[0.9]).unwrap();
        for bad in [0.0, 1.0, -0.2, 1.5] {
            assert!(run_test(&counts, TestKind::K1, &Weights::unit(2), bad).is_err());
        }
    }

    #[test]
    fn report_json_field_names() {
        let counts = tally(&part(2), &[0.1, 0.6], &[0.4, 0.9]).unwrap();
        let rep = run_test(&counts, TestKind::K1, &Weights::unit(2), 0.05).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        let mut expected = vec![
            "statistic", "centering", "scale", "z", "alpha", "x_alpha", "reject", "p_value",
            "kind", "m", "n", "l", "a",
        ];
        expected.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(obj["kind"], serde_json::json!("k1"));
    }

    proptest! {
        #[test]
        fn decision_monotone_in_alpha(
            xs in proptest::collection::vec(0.0f64..1.0, 4..40),
            ys in proptest::collection::vec(0.0f64..1.0, 4..40),
        ) {
            let counts = tally(&part(3), &xs, &ys).unwrap();
            let w = Weights::unit(3);
            let mut rejected = false;
            // increasing alpha can only flip accept -> reject
            for alpha in [0.001, 0.01, 0.05, 0.2, 0.5, 0.9] {
                let rep = run_test(&counts, TestKind::K1, &w, alpha).unwrap();
                prop_assert!(!rejected || rep.reject);
                rejected = rep.reject;
            }
        }

        #[test]
        fn scale_positive_on_nondegenerate_input(
            xs in proptest::collection::vec(0.0f64..1.0, 2..30),
            ys in proptest::collection::vec(0.0f64..1.0, 2..30),
        ) {
            let counts = tally(&part(4), &xs, &ys).unwrap();
            for kind in [TestKind::K1, TestKind::K2, TestKind::K3] {
                let rep = run_test(&counts, kind, &Weights::unit(4), 0.05).unwrap();
                prop_assert!(rep.scale > 0.0);
                prop_assert!((0.0..=1.0).contains(&rep.p_value));
                prop_assert_eq!(rep.reject, rep.z > rep.x_alpha);
            }
        }
    }
}
