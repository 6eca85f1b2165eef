//! Standard normal distribution function, density and quantile.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};

fn standard() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal parameters are valid")
}

/// Standard normal distribution function `Phi(x)`.
pub fn cdf(x: f64) -> f64 {
    standard().cdf(x)
}

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    standard().pdf(x)
}

/// Inverse of `Phi`, defined for `q` strictly inside `(0,1)`.
///
/// One Newton step on top of the library inverse keeps the functional
/// inverse property `|Phi(x_q) - q|` at machine-precision level.
pub fn quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!(
            "quantile level {q} outside the open interval (0,1)"
        )));
    }
    let n = standard();
    let mut x = n.inverse_cdf(q);
    let d = n.pdf(x);
    if d > 0.0 {
        x -= (n.cdf(x) - q) / d;
    }
    Ok(x)
}

/// Upper critical value `x_alpha` with `alpha = 1 - Phi(x_alpha)`.
pub fn upper_critical(alpha: f64) -> Result<f64> {
    quantile(1.0 - alpha)
}
