//! Gaussian lower bound on the reverse-reconciliation key rate
//!
//! ```text
//! K(T_E) ≥ P · [ f · I_G(A:B2) − χ_G(B2:EF) ]
//! ```
//!
//! computed from the covariance matrix of the (generally non-Gaussian)
//! post-channel state.

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fock::{build_state, SchemeConfig};
use crate::moments::{covariance_summary, CovarianceSummary};
use crate::sweep::format_number;

/// Symplectic eigenvalues this far below 1 are attributed to truncation and
/// snapped to 1.
pub const EIGEN_CLAMP_TOL: f64 = 1e-7;

/// Most negative discriminant accepted before a matrix is declared
/// non-physical.
pub const DISCRIMINANT_TOL: f64 = 1e-6;

/// One quadrature (x or p) of a two-mode covariance matrix:
/// `[[v1, c], [c, v2]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureBlock {
    pub v1: f64,
    pub v2: f64,
    pub c: f64,
}

impl QuadratureBlock {
    pub fn new(v1: f64, v2: f64, c: f64) -> Self {
        QuadratureBlock { v1, v2, c }
    }

    pub fn det(&self) -> f64 {
        self.v1 * self.v2 - self.c * self.c
    }
}

/// Sign pattern of the correlation block between two modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationSign {
    /// `C · diag(1, 1)`, from `⟨a†b⟩`-type correlations.
    Identity,
    /// `C · diag(1, −1)`, from `⟨ab⟩`-type correlations.
    Sigma,
}

/// Two-mode covariance matrix without x–p cross terms, stored as its x and
/// p blocks. Conditioning on a homodyne outcome changes only the x block,
/// so the two blocks are kept separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeCov {
    pub x: QuadratureBlock,
    pub p: QuadratureBlock,
}

impl TwoModeCov {
    /// Block form `[[v_x I, c S], [c S, v_y I]]` with `S` chosen by `sign`.
    pub fn new(v_x: f64, v_y: f64, c: f64, sign: CorrelationSign) -> Self {
        let pc = match sign {
            CorrelationSign::Identity => c,
            CorrelationSign::Sigma => -c,
        };
        TwoModeCov {
            x: QuadratureBlock::new(v_x, v_y, c),
            p: QuadratureBlock::new(v_x, v_y, pc),
        }
    }

    /// Full matrix in `(x1, p1, x2, p2)` ordering.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let (x, p) = (&self.x, &self.p);
        [
            [x.v1, 0.0, x.c, 0.0],
            [0.0, p.v1, 0.0, p.c],
            [x.c, 0.0, x.v2, 0.0],
            [0.0, p.c, 0.0, p.v2],
        ]
    }

    /// `det A + det B + 2 det C` of the block form `[[A, C], [Cᵀ, B]]`.
    pub fn seralian(&self) -> f64 {
        self.x.v1 * self.p.v1 + self.x.v2 * self.p.v2 + 2.0 * self.x.c * self.p.c
    }

    pub fn det(&self) -> f64 {
        self.x.det() * self.p.det()
    }
}

/// Symplectic eigenvalues `(ν₊, ν₋)` with `ν₊ ≥ ν₋`.
///
/// Values within [`EIGEN_CLAMP_TOL`] below 1 are returned as exactly 1.
pub fn symplectic_eigenvalues(m: &TwoModeCov) -> Result<(f64, f64)> {
    let delta = m.seralian();
    let det = m.det();
    let disc = delta * delta - 4.0 * det;
    if !disc.is_finite() || disc < -DISCRIMINANT_TOL {
        return Err(Error::numerical(format!(
            "non-physical covariance matrix (Δ² − 4 det M = {disc:.3e})"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let nu_plus = ((delta + root) / 2.0).max(0.0).sqrt();
    let nu_minus = ((delta - root) / 2.0).max(0.0).sqrt();
    if !(nu_minus >= 1.0 - EIGEN_CLAMP_TOL) {
        return Err(Error::numerical(format!(
            "symplectic eigenvalue {nu_minus:.6e} violates the uncertainty relation"
        )));
    }
    Ok((clamp_unit(nu_plus), clamp_unit(nu_minus)))
}

fn clamp_unit(nu: f64) -> f64 {
    if (1.0 - EIGEN_CLAMP_TOL..1.0).contains(&nu) {
        1.0
    } else {
        nu
    }
}

/// Entropy in bits of a thermal mode with symplectic eigenvalue `v`:
/// `((v+1)/2) log₂((v+1)/2) − ((v−1)/2) log₂((v−1)/2)`, with `g(1) = 0`.
pub fn von_neumann_g(v: f64) -> Result<f64> {
    if !(v >= 1.0 - EIGEN_CLAMP_TOL) {
        return Err(Error::domain(format!("g(v) needs v ≥ 1, got {v}")));
    }
    if v <= 1.0 {
        return Ok(0.0);
    }
    let plus = (v + 1.0) / 2.0;
    let minus = (v - 1.0) / 2.0;
    Ok(plus * plus.log2() - minus * minus.log2())
}

/// `I_G(A:B2) = ½ log₂(V_B2 / V_B2|A)` with `V_B2|A = V_B2 − C²/V_A`.
pub fn mutual_information(v_a: f64, v_b2: f64, c_ab2: f64) -> Result<f64> {
    if !(v_a > 0.0 && v_b2 > 0.0) {
        return Err(Error::domain(format!(
            "mutual_information needs positive variances (v_a = {v_a}, v_b2 = {v_b2})"
        )));
    }
    let conditional = v_b2 - c_ab2 * c_ab2 / v_a;
    if !(conditional > 0.0) {
        return Err(Error::numerical(format!(
            "conditional variance V_B2|A = {conditional:.3e} is not positive"
        )));
    }
    Ok(0.5 * (v_b2 / conditional).log2())
}

/// Eve's covariance matrix conditioned on Bob's x-homodyne outcome:
/// `M_EF − (1/V_B2) u uᵀ` on the x block with `u = (C_EB2, C_FB2)`; the p
/// block is unchanged.
pub fn conditional_cov_ef_given_b2(s: &CovarianceSummary) -> Result<TwoModeCov> {
    if !(s.v_b2 > 0.0) {
        return Err(Error::domain(format!("V_B2 = {} must be positive", s.v_b2)));
    }
    let m = s.m_ef();
    let inv = s.v_b2.recip();
    Ok(TwoModeCov {
        x: QuadratureBlock {
            v1: m.x.v1 - s.c_eb2 * s.c_eb2 * inv,
            v2: m.x.v2 - s.c_fb2 * s.c_fb2 * inv,
            c: m.x.c - s.c_eb2 * s.c_fb2 * inv,
        },
        p: m.p,
    })
}

fn entropy_of(m: &TwoModeCov) -> Result<f64> {
    let (a, b) = symplectic_eigenvalues(m)?;
    Ok(von_neumann_g(a)? + von_neumann_g(b)?)
}

/// Gaussian entropy `Σ g(ν)` of a two-mode covariance matrix.
pub fn gaussian_entropy(m: &TwoModeCov) -> Result<f64> {
    entropy_of(m)
}

/// `χ_G(B2:EF) = Σ g(ν^{EF}) − Σ g(ν^{EF|B2})`.
pub fn holevo_bound(s: &CovarianceSummary) -> Result<f64> {
    Ok(entropy_of(&s.m_ef())? - entropy_of(&conditional_cov_ef_given_b2(s)?)?)
}

/// Result for one channel instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyRatePoint {
    pub t_e: f64,
    /// Mutual information between Alice and Bob, bits per use.
    pub i_g: f64,
    /// Holevo bound on Eve's information, bits per use.
    pub chi_g: f64,
    pub p_sub: f64,
    /// `f · i_g − chi_g`, bits per successfully conditioned use.
    pub rate_raw: f64,
    /// `p_sub · rate_raw`, bits per source pulse.
    pub rate: f64,
    /// Rate per pulse when the subtraction probability is offset by a
    /// quantum memory; equal to `rate_raw`.
    pub rate_normalized: f64,
}

impl KeyRatePoint {
    pub const CSV_HEADER: &'static str = "t_e,i_g,chi_g,p_sub,rate_raw,rate,rate_normalized";
    pub const CSV_FIELDS: usize = 7;

    pub fn values(&self) -> [f64; 7] {
        [
            self.t_e,
            self.i_g,
            self.chi_g,
            self.p_sub,
            self.rate_raw,
            self.rate,
            self.rate_normalized,
        ]
    }

    pub fn csv_row(&self) -> String {
        self.values()
            .iter()
            .map(|v| format_number(*v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Rate bound from an already extracted summary.
pub fn key_rate_from_summary(recon_eff: f64, t_e: f64, s: &CovarianceSummary) -> Result<KeyRatePoint> {
    let i_g = mutual_information(s.v_a, s.v_b2, s.c_ab2)?;
    let chi_g = holevo_bound(s)?;
    let rate_raw = recon_eff * i_g - chi_g;
    Ok(KeyRatePoint {
        t_e,
        i_g,
        chi_g,
        p_sub: s.p_sub,
        rate_raw,
        rate: s.p_sub * rate_raw,
        rate_normalized: rate_raw,
    })
}

/// Builds the state for `cfg` at transmissivity `t_e` and evaluates the
/// rate bound. Negative rates are returned unchanged.
pub fn key_rate(cfg: &SchemeConfig, t_e: f64) -> Result<KeyRatePoint> {
    let at = |e: Error| Error::AtTransmissivity {
        t_e,
        source: Box::new(e),
    };
    let state = build_state(cfg, t_e).map_err(at)?;
    let summary = covariance_summary(&state).map_err(at)?;
    key_rate_from_summary(cfg.recon_eff, t_e, &summary).map_err(at)
}

/// Evaluates [`key_rate`] over many points; output order follows input
/// order.
pub fn evaluate_batch(points: &[(SchemeConfig, f64)], exec: Executor) -> Result<Vec<KeyRatePoint>> {
    exec.try_map(points, |_, (cfg, t_e)| key_rate(cfg, *t_e))
}
