//! Second moments of the four-mode states in shot-noise units (vacuum
//! variance 1), with quadratures `x = a + a†` and `p = −i(a − a†)`.
//!
//! All amplitudes are real and every constructed state has vanishing first
//! moments, so a variance is `1 + 2⟨n⟩`. A covariance between two distinct
//! modes has a phase-sensitive part `⟨ab + a†b†⟩`, which enters the x and
//! p blocks with opposite signs (σ-type block), and a phase-insensitive part
//! `⟨a†b + ab†⟩`, which enters both with the same sign (identity-type block).
//! Photon-number bookkeeping of the states makes each pair purely one kind:
//! Alice–Bob, Eve–F and F–Bob are σ-type, Eve–Bob is identity-type.

use crate::error::{Error, Result};
use crate::fock::{FockKet4, Mode, SparseFourModeState};
use crate::keyrate::{QuadratureBlock, TwoModeCov};

/// `Σ |amp|² · n_mode`.
pub fn mean_occupation(state: &SparseFourModeState, mode: Mode) -> f64 {
    state
        .iter()
        .map(|(ket, a)| a * a * f64::from(ket.occupation(mode)))
        .sum()
}

pub fn variance(state: &SparseFourModeState, mode: Mode) -> f64 {
    1.0 + 2.0 * mean_occupation(state, mode)
}

/// `⟨a + a†⟩` for the given mode.
pub fn first_moment(state: &SparseFourModeState, mode: Mode) -> f64 {
    2.0 * state
        .iter()
        .filter_map(|(ket, a)| {
            let raised = ket.shifted(mode, 1)?;
            let n = f64::from(ket.occupation(mode));
            Some(a * state.amplitude(&raised) * (n + 1.0).sqrt())
        })
        .sum::<f64>()
}

/// Both parts of the correlation between two distinct modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCorrelation {
    /// `⟨ab + a†b†⟩`
    pub phase_sensitive: f64,
    /// `⟨a†b + ab†⟩`
    pub phase_insensitive: f64,
}

impl PairCorrelation {
    /// Covariance of the two x quadratures.
    pub fn x(&self) -> f64 {
        self.phase_sensitive + self.phase_insensitive
    }

    /// Covariance of the two p quadratures.
    pub fn p(&self) -> f64 {
        self.phase_insensitive - self.phase_sensitive
    }
}

/// Pairs each ket with the ket raised in `x` and in `y` (phase-sensitive)
/// and with the ket raised in `x` and lowered in `y` (phase-insensitive).
/// Absent kets contribute nothing.
pub fn pair_correlation(state: &SparseFourModeState, x: Mode, y: Mode) -> Result<PairCorrelation> {
    if x == y {
        return Err(Error::domain(format!("covariance of mode {x} with itself")));
    }
    let mut sensitive = 0.0;
    let mut insensitive = 0.0;
    for (ket, a) in state.iter() {
        let nx = f64::from(ket.occupation(x));
        let ny = f64::from(ket.occupation(y));
        let up_x = raise(&ket, x);
        let both = raise(&up_x, y);
        sensitive += a * state.amplitude(&both) * ((nx + 1.0) * (ny + 1.0)).sqrt();
        if let Some(swap) = up_x.shifted(y, -1) {
            insensitive += a * state.amplitude(&swap) * ((nx + 1.0) * ny).sqrt();
        }
    }
    Ok(PairCorrelation {
        phase_sensitive: 2.0 * sensitive,
        phase_insensitive: 2.0 * insensitive,
    })
}

fn raise(ket: &FockKet4, mode: Mode) -> FockKet4 {
    ket.shifted(mode, 1).expect("raising an occupation cannot underflow")
}

/// x-quadrature covariance of two distinct modes. Symmetric in its
/// arguments.
pub fn cross_covariance(state: &SparseFourModeState, x: Mode, y: Mode) -> Result<f64> {
    Ok(pair_correlation(state, x, y)?.x())
}

/// Two-mode covariance matrix of the pair `(x, y)`.
pub fn two_mode_block(state: &SparseFourModeState, x: Mode, y: Mode) -> Result<TwoModeCov> {
    let corr = pair_correlation(state, x, y)?;
    let (vx, vy) = (variance(state, x), variance(state, y));
    Ok(TwoModeCov {
        x: QuadratureBlock::new(vx, vy, corr.x()),
        p: QuadratureBlock::new(vx, vy, corr.p()),
    })
}

/// The second-moment data consumed by the key-rate bound.
///
/// `c_*` fields are x-quadrature covariances; `pc_*` are the matching
/// p-quadrature covariances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceSummary {
    pub v_a: f64,
    pub v_b2: f64,
    pub v_e: f64,
    pub v_f: f64,
    pub c_ab2: f64,
    pub c_ef: f64,
    pub c_eb2: f64,
    pub c_fb2: f64,
    pub pc_ab2: f64,
    pub pc_ef: f64,
    pub pc_eb2: f64,
    pub pc_fb2: f64,
    /// Subtraction probability carried from the state.
    pub p_sub: f64,
}

impl CovarianceSummary {
    pub const CSV_HEADER: &'static str = "v_a,v_b2,v_e,v_f,c_ab2,c_ef,c_eb2,c_fb2,p_sub";

    pub fn csv_row(&self) -> String {
        [
            self.v_a, self.v_b2, self.v_e, self.v_f, self.c_ab2, self.c_ef, self.c_eb2, self.c_fb2, self.p_sub,
        ]
        .iter()
        .map(|v| crate::sweep::format_number(*v))
        .collect::<Vec<_>>()
        .join(",")
    }

    /// Covariance matrix of Eve's two modes.
    pub fn m_ef(&self) -> TwoModeCov {
        TwoModeCov {
            x: QuadratureBlock::new(self.v_e, self.v_f, self.c_ef),
            p: QuadratureBlock::new(self.v_e, self.v_f, self.pc_ef),
        }
    }

    /// Covariance matrix of Alice's and Bob's modes.
    pub fn m_ab2(&self) -> TwoModeCov {
        TwoModeCov {
            x: QuadratureBlock::new(self.v_a, self.v_b2, self.c_ab2),
            p: QuadratureBlock::new(self.v_a, self.v_b2, self.pc_ab2),
        }
    }
}

pub fn covariance_summary(state: &SparseFourModeState) -> Result<CovarianceSummary> {
    let ab2 = pair_correlation(state, Mode::A, Mode::B2)?;
    let ef = pair_correlation(state, Mode::E, Mode::F)?;
    let eb2 = pair_correlation(state, Mode::E, Mode::B2)?;
    let fb2 = pair_correlation(state, Mode::F, Mode::B2)?;
    Ok(CovarianceSummary {
        v_a: variance(state, Mode::A),
        v_b2: variance(state, Mode::B2),
        v_e: variance(state, Mode::E),
        v_f: variance(state, Mode::F),
        c_ab2: ab2.x(),
        c_ef: ef.x(),
        c_eb2: eb2.x(),
        c_fb2: fb2.x(),
        pc_ab2: ab2.p(),
        pc_ef: ef.p(),
        pc_eb2: eb2.p(),
        pc_fb2: fb2.p(),
        p_sub: state.subtraction_probability(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_state, Scheme, SchemeConfig};

    fn nops(beta_sq: f64) -> SchemeConfig {
        SchemeConfig {
            beta_sq,
            ..SchemeConfig::default()
        }
    }

    #[test]
    fn tmsv_moments() {
        let st = build_state(&nops(0.0), 1.0).unwrap();
        assert!((mean_occupation(&st, Mode::A) - 1.3).abs() < 2e-4);
        assert!((variance(&st, Mode::A) - 3.6).abs() < 4e-4);
        assert_eq!(mean_occupation(&st, Mode::F), 0.0);
        let c = cross_covariance(&st, Mode::A, Mode::B2).unwrap();
        assert!((c - 2.0 * (1.3f64 * 2.3).sqrt()).abs() < 5e-4);
        assert!((c - 3.458323).abs() < 5e-4);
    }

    #[test]
    fn full_loss_leaves_vacuum_at_bob() {
        let st = build_state(&nops(0.0), 0.0).unwrap();
        assert!((variance(&st, Mode::B2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_eve_has_no_ef_correlation() {
        for scheme in Scheme::ALL {
            let st = build_state(&nops(0.0).with_scheme(scheme), 0.4).unwrap();
            assert_eq!(cross_covariance(&st, Mode::E, Mode::F).unwrap(), 0.0);
        }
    }

    #[test]
    fn covariance_is_symmetric() {
        let st = build_state(&SchemeConfig::default().with_scheme(Scheme::Rps), 0.6).unwrap();
        for x in Mode::ALL {
            for y in Mode::ALL {
                if x != y {
                    let a = pair_correlation(&st, x, y).unwrap();
                    let b = pair_correlation(&st, y, x).unwrap();
                    assert!((a.x() - b.x()).abs() < 1e-12 * (1.0 + a.x().abs()));
                    assert!((a.p() - b.p()).abs() < 1e-12 * (1.0 + a.p().abs()));
                }
            }
        }
        assert!(cross_covariance(&st, Mode::E, Mode::E).is_err());
    }

    #[test]
    fn each_pair_is_single_kind() {
        let st = build_state(&SchemeConfig::default().with_scheme(Scheme::Tps), 0.5).unwrap();
        let sigma = [
            (Mode::A, Mode::B2),
            (Mode::E, Mode::F),
            (Mode::F, Mode::B2),
            (Mode::A, Mode::E),
        ];
        for (x, y) in sigma {
            let c = pair_correlation(&st, x, y).unwrap();
            assert_eq!(c.phase_insensitive, 0.0, "{x}-{y}");
        }
        for (x, y) in [(Mode::E, Mode::B2), (Mode::A, Mode::F)] {
            let c = pair_correlation(&st, x, y).unwrap();
            assert_eq!(c.phase_sensitive, 0.0, "{x}-{y}");
        }
    }

    #[test]
    fn first_moments_vanish() {
        for scheme in Scheme::ALL {
            let st = build_state(&SchemeConfig::default().with_scheme(scheme), 0.3).unwrap();
            for mode in Mode::ALL {
                assert!(first_moment(&st, mode).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_channel_decouples_eve() {
        let st = build_state(&nops(0.001), 1.0).unwrap();
        let s = covariance_summary(&st).unwrap();
        assert!(s.c_eb2.abs() < 1e-9);
        assert!(s.c_fb2.abs() < 1e-9);
        assert_eq!(s.p_sub, 1.0);
    }

    #[test]
    fn csv_row_has_nine_fields() {
        let st = build_state(&nops(0.001), 0.5).unwrap();
        let row = covariance_summary(&st).unwrap().csv_row();
        assert_eq!(row.split(',').count(), 9);
        assert_eq!(CovarianceSummary::CSV_HEADER.split(',').count(), 9);
    }
}
