//! Fixed-attenuation and fading Earth–satellite channels, and the average
//! key rate over a fading distribution.
//!
//! The average `K_avg = ∫ p(η) K(η²) dη` is taken in the cumulative
//! probability `u = F(η)`, which turns it into `∫₀¹ K(η(u)²) du` with the
//! exact inverse CDF and removes the endpoint behaviour of the density.

mod bessel;
mod fading;

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use fading::{distance_to_transmissivity, weibull_params, FadingModel};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fock::SchemeConfig;
use crate::keyrate::{key_rate, KeyRatePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub node_count: usize,
    /// Integrate `max(K, 0)` instead of `K`: instances with a negative
    /// bound contribute no key.
    pub clamp_negative: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            node_count: 200,
            clamp_negative: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(Error::Config(format!(
                "quadrature needs at least 2 nodes, got {}",
                self.node_count
            )));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights mapped to `(0, 1)`, ascending in `u`.
pub fn unit_interval_rule(nodes: usize) -> Result<Vec<(f64, f64)>> {
    let degree = NonZeroUsize::new(nodes).ok_or_else(|| Error::Config("zero quadrature nodes".into()))?;
    let rule = GaussLegendre::new(degree);
    let mut out: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Fading-averaged rates for one scheme and channel model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AveragedRate {
    /// Bits per source pulse.
    pub k_avg: f64,
    /// Average of the memory-assisted (normalized) rate.
    pub k_avg_normalized: f64,
    /// `E[η²]`
    pub mean_transmissivity: f64,
}

/// `K_avg` with the default executor.
pub fn average_key_rate(cfg: &SchemeConfig, model: &FadingModel, quad: &QuadratureSpec) -> Result<f64> {
    Ok(average_key_rates(cfg, model, quad, Executor::default())?.k_avg)
}

/// Averages the per-instance rate over the fading distribution. Nodes are
/// evaluated through `exec`; the weighted sums run in ascending node order.
///
/// With clamping, `max(K, 0)` has a kink where the rate changes sign, which
/// would limit the rule to algebraic convergence. When the node grid shows a
/// single sign change the crossing is located by bisection in `u` and the
/// rule is re-applied to the positive segment alone.
///
/// The subtraction probability is re-evaluated at every node, which is
/// where R-PS picks up its dependence on `T_E = η²`.
pub fn average_key_rates(
    cfg: &SchemeConfig,
    model: &FadingModel,
    quad: &QuadratureSpec,
    exec: Executor,
) -> Result<AveragedRate> {
    quad.validate()?;
    cfg.validate()?;
    let rule = unit_interval_rule(quad.node_count)?;
    let points = rates_at(cfg, model, &rule, exec)?;

    let mut out = AveragedRate {
        k_avg: 0.0,
        k_avg_normalized: 0.0,
        mean_transmissivity: 0.0,
    };
    for (&(_, weight), p) in rule.iter().zip(&points) {
        out.mean_transmissivity += weight * p.t_e;
    }

    if !quad.clamp_negative {
        for (&(_, weight), p) in rule.iter().zip(&points) {
            out.k_avg += weight * p.rate;
            out.k_avg_normalized += weight * p.rate_normalized;
        }
        return Ok(out);
    }

    let positive: Vec<bool> = points.iter().map(|p| p.rate > 0.0).collect();
    let changes = positive.windows(2).filter(|w| w[0] != w[1]).count();
    let first_positive = positive.iter().position(|&b| b);
    match first_positive {
        None => return Ok(out),
        Some(i) if changes == 1 && i > 0 => {
            let u0 = crossing(cfg, model, i, rule[i - 1].0, rule[i].0)?;
            let segment: Vec<(f64, f64)> = rule
                .iter()
                .map(|&(u, w)| (u0 + (1.0 - u0) * u, (1.0 - u0) * w))
                .collect();
            let seg_points = rates_at(cfg, model, &segment, exec)?;
            for (&(_, weight), p) in segment.iter().zip(&seg_points) {
                out.k_avg += weight * p.rate.max(0.0);
                out.k_avg_normalized += weight * p.rate_normalized.max(0.0);
            }
            return Ok(out);
        }
        Some(_) if changes > 1 => {
            log::warn!("key rate changes sign {changes} times over the fading nodes; using the plain clamped sum");
        }
        Some(_) => {}
    }
    for (&(_, weight), p) in rule.iter().zip(&points) {
        out.k_avg += weight * p.rate.max(0.0);
        out.k_avg_normalized += weight * p.rate_normalized.max(0.0);
    }
    Ok(out)
}

fn rate_at_u(cfg: &SchemeConfig, model: &FadingModel, u: f64) -> Result<KeyRatePoint> {
    let eta = model.inverse_cdf(u)?;
    key_rate(cfg, (eta * eta).min(1.0))
}

fn rates_at(
    cfg: &SchemeConfig,
    model: &FadingModel,
    nodes: &[(f64, f64)],
    exec: Executor,
) -> Result<Vec<KeyRatePoint>> {
    exec.try_map(nodes, |index, &(u, _)| {
        rate_at_u(cfg, model, u).map_err(|e| Error::AtNode {
            index,
            u,
            source: Box::new(e),
        })
    })
}

/// Bisects for the sign change of the rate between `lo` (rate ≤ 0) and
/// `hi` (rate > 0). The integrand vanishes linearly at the crossing, so an
/// error `δ` in its location only costs `O(δ²)` in the integral. Failures
/// are reported against the upper bracketing node `index`.
fn crossing(cfg: &SchemeConfig, model: &FadingModel, index: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    const TOL: f64 = 1e-12;
    while hi - lo > TOL * hi {
        let mid = 0.5 * (lo + hi);
        let p = rate_at_u(cfg, model, mid).map_err(|e| Error::AtNode {
            index,
            u: mid,
            source: Box::new(e),
        })?;
        if p.rate > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = unit_interval_rule(6).unwrap();
        for p in 0..12 {
            let q: f64 = rule.iter().map(|(u, w)| w * u.powi(p)).sum();
            assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}");
        }
        assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(rule.iter().all(|&(u, _)| u > 0.0 && u < 1.0));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec {
            node_count: 1,
            clamp_negative: false
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec::default().validate().is_ok());
    }

    #[test]
    fn node_errors_are_located() {
        let cfg = SchemeConfig {
            alpha_sq: 0.0,
            beta_sq: 0.0,
            ..SchemeConfig::default().with_scheme(crate::fock::Scheme::Tps)
        };
        let model = FadingModel::new(1.0, 1.0, 1.0).unwrap();
        let quad = QuadratureSpec {
            node_count: 4,
            clamp_negative: false,
        };
        match average_key_rates(&cfg, &model, &quad, Executor::Sequential) {
            Err(Error::AtNode { index, .. }) => assert_eq!(index, 0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
