//! Lower bounds on the secret key rate of entanglement-based CV-QKD with
//! single-photon subtraction at the transmitter (T-PS), at the receiver
//! (R-PS), or absent (No-PS).
//!
//! The pipeline for one channel instance is
//! [`fock::build_state`] → [`moments::covariance_summary`] →
//! [`keyrate::key_rate`]. Fading Earth–satellite channels are handled in
//! [`channel`], which averages the per-instance rate over the
//! log-negative Weibull distribution of transmission coefficients.
//! [`sweep`] drives the parameter sweeps and writes CSV tables.

// `!(x >= 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod exec;
pub mod fock;
pub mod keyrate;
pub mod moments;
pub mod sweep;

pub use channel::{average_key_rate, FadingModel, QuadratureSpec};
pub use error::{Error, Result};
pub use exec::Executor;
pub use fock::{build_state, FockKet4, Mode, Scheme, SchemeConfig, SparseFourModeState};
pub use keyrate::{key_rate, KeyRatePoint, TwoModeCov};
pub use moments::{covariance_summary, CovarianceSummary};
