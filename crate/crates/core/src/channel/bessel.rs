//! Modified Bessel functions of the first kind for nonnegative arguments.

use crate::error::{Error, Result};

/// Above this argument the exponentially scaled functions switch from the
/// power series to the large-argument expansion.
const ASYMPTOTIC_FROM: f64 = 50.0;

const MAX_TERMS: usize = 10_000;

/// `I_ν(x)` by its power series `Σ (x/2)^{2k+ν} / (k! (k+ν)!)`.
///
/// All terms are positive, so the sum has no cancellation; it is accurate to
/// a few ulps wherever it does not overflow (x ≲ 700).
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(power_series(order, x))
}

/// `e^{−x} I_ν(x)`, finite for all `x ≥ 0`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x <= ASYMPTOTIC_FROM {
        Ok(power_series(order, x) * (-x).exp())
    } else {
        Ok(large_argument_scaled(order, x))
    }
}

fn check_arg(x: f64) -> Result<()> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::domain(format!(
            "modified Bessel function needs finite x ≥ 0, got {x}"
        )));
    }
    Ok(())
}

fn power_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let nu = f64::from(order);
    // (x/2)^ν / ν!
    let mut term = (1..=order).fold(1.0, |acc, j| acc * half / f64::from(j));
    if term == 0.0 {
        return 0.0;
    }
    let quarter_sq = half * half;
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= quarter_sq / (kf * (kf + nu));
        sum += term;
        if term < f64::EPSILON * 0.25 * sum && kf > half {
            break;
        }
    }
    sum
}

/// `e^{−x} I_ν(x) ≈ (2πx)^{−1/2} Σ_k (−1)^k a_k(ν) / x^k` with
/// `a_k = Π_{j=1..k} (4ν² − (2j−1)²) / (k! 8^k)`, summed until the terms
/// stop shrinking.
fn large_argument_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(order).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}
