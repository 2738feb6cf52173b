//! Beam-wander fading: the log-negative Weibull distribution of the
//! amplitude transmission coefficient η.

use crate::error::{Error, Result};

use super::bessel::bessel_i_scaled;

/// Parameters of the fading distribution for one aperture and beam geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingModel {
    /// Beam-wander standard deviation, in the same length unit as `beta_r`.
    pub sigma_b: f64,
    /// Aperture radius.
    pub beta_r: f64,
    /// Beam-spot radius.
    pub w: f64,
    /// `(beta_r / w)²`
    pub h: f64,
    /// Maximum transmission coefficient.
    pub eta0: f64,
    /// Weibull shape parameter λ.
    pub lambda_shape: f64,
    /// Weibull scale parameter L.
    pub l_scale: f64,
}

/// Derives the shape, scale and maximum transmission from the geometry.
///
/// ```text
/// η₀² = 1 − e^{−2h}
/// λ   = 8h · e^{−4h}I₁(4h) / (1 − e^{−4h}I₀(4h)) · [ln(2η₀² / (1 − e^{−4h}I₀(4h)))]⁻¹
/// L   = β_r · [ln(2η₀² / (1 − e^{−4h}I₀(4h)))]^{−1/λ}
/// ```
pub fn weibull_params(sigma_b: f64, beta_r: f64, w: f64) -> Result<FadingModel> {
    for (name, v) in [("sigma_b", sigma_b), ("beta_r", beta_r), ("w", w)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} = {v} must be finite and > 0")));
        }
    }
    let h = (beta_r / w).powi(2);
    let eta0_sq = -(-2.0 * h).exp_m1();
    let i0 = bessel_i_scaled(0, 4.0 * h)?;
    let i1 = bessel_i_scaled(1, 4.0 * h)?;
    let one_minus_i0 = 1.0 - i0;
    let log_term = (2.0 * eta0_sq / one_minus_i0).ln();
    let lambda_shape = 8.0 * h * i1 / one_minus_i0 / log_term;
    let l_scale = beta_r * log_term.powf(-1.0 / lambda_shape);

    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !(ok(lambda_shape) && ok(l_scale) && eta0_sq > 0.0 && eta0_sq < 1.0) {
        return Err(Error::domain(format!(
            "degenerate fading geometry h = (beta_r/w)² = {h:.3e}: \
             the beam is too wide relative to the aperture for the Weibull fit"
        )));
    }
    Ok(FadingModel {
        sigma_b,
        beta_r,
        w,
        h,
        eta0: eta0_sq.sqrt(),
        lambda_shape,
        l_scale,
    })
}

impl FadingModel {
    pub fn new(sigma_b: f64, beta_r: f64, w: f64) -> Result<Self> {
        weibull_params(sigma_b, beta_r, w)
    }

    /// Same geometry with a different beam-wander deviation.
    pub fn with_sigma_b(&self, sigma_b: f64) -> Result<Self> {
        weibull_params(sigma_b, self.beta_r, self.w)
    }

    /// `L² / (2 σ_b²)`
    fn rate(&self) -> f64 {
        self.l_scale.powi(2) / (2.0 * self.sigma_b.powi(2))
    }

    /// Probability density of η; zero outside `(0, η₀)`.
    pub fn pdf(&self, eta: f64) -> f64 {
        if !(eta > 0.0 && eta < self.eta0) {
            return 0.0;
        }
        // Log space: for subnormal η the prefactor alone would overflow.
        let y = 2.0 * (self.eta0 / eta).ln();
        let shape = 2.0 / self.lambda_shape;
        let log_prefactor = (2.0 * self.l_scale.powi(2) / (self.sigma_b.powi(2) * self.lambda_shape)).ln();
        (log_prefactor - eta.ln() + (shape - 1.0) * y.ln() - self.rate() * y.powf(shape)).exp()
    }

    /// `F(η) = exp(−(L²/2σ_b²) (2 ln(η₀/η))^{2/λ})` on `(0, η₀]`.
    pub fn cdf(&self, eta: f64) -> f64 {
        if eta <= 0.0 {
            0.0
        } else if eta >= self.eta0 {
            1.0
        } else {
            let y = 2.0 * (self.eta0 / eta).ln();
            (-self.rate() * y.powf(2.0 / self.lambda_shape)).exp()
        }
    }

    /// Inverse of [`FadingModel::cdf`]:
    /// `η(u) = η₀ exp(−½ (2σ_b² (−ln u) / L²)^{λ/2})`. Under strong wander
    /// small `u` maps below the f64 range and returns 0.
    pub fn inverse_cdf(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::domain(format!("inverse_cdf needs u in (0, 1], got {u}")));
        }
        let y = (-u.ln() / self.rate()).powf(self.lambda_shape / 2.0);
        Ok(self.eta0 * (-0.5 * y).exp())
    }

    /// `E[η²]` by Gauss–Legendre quadrature over the unit interval.
    pub fn mean_transmissivity(&self, nodes: usize) -> Result<f64> {
        let rule = super::unit_interval_rule(nodes)?;
        let mut total = 0.0;
        for &(u, weight) in &rule {
            total += weight * self.inverse_cdf(u)?.powi(2);
        }
        Ok(total)
    }

    /// `−10 log₁₀ E[η²]`
    pub fn mean_loss_db(&self, nodes: usize) -> Result<f64> {
        Ok(-10.0 * self.mean_transmissivity(nodes)?.log10())
    }
}

/// Transmissivity of a fiber-like channel with fixed attenuation.
pub fn distance_to_transmissivity(d_km: f64, atten_db_per_km: f64) -> Result<f64> {
    if !(d_km >= 0.0) || !(atten_db_per_km >= 0.0) {
        return Err(Error::domain(format!(
            "distance {d_km} km and attenuation {atten_db_per_km} dB/km must be ≥ 0"
        )));
    }
    Ok(10f64.powf(-d_km * atten_db_per_km / 10.0))
}
