//! Truncated four-mode Fock-space states |n_A, n_B2, n_E, n_F⟩ after the
//! channel, for the three photon-subtraction schemes.
//!
//! Alice's TMSV (mean photon number `alpha_sq`) and Eve's TMSV (`beta_sq`)
//! are expanded up to `trunc_n` photons each. Eve's channel is a beam
//! splitter of transmissivity `t_e` mixing Bob's incoming mode with her
//! mode E₀; photon subtraction taps Bob's mode with a beam splitter of
//! transmissivity `t_s` and post-selects one reflected photon.
//!
//! Beam-splitter conventions: a photon entering on Bob's port leaves towards
//! Bob with amplitude `√T` and towards Eve with `−√(1−T)`; a photon entering
//! on Eve's port leaves towards Eve with `√T` and towards Bob with `+√(1−T)`.
//! The global `−1/√P` phase of the subtracted states is dropped.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative norm deficit above which a truncation warning is raised.
pub const TRUNCATION_WARN_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// No photon subtraction.
    NoPs,
    /// Subtraction at the transmitter, before the channel.
    Tps,
    /// Subtraction at the receiver, after the channel.
    Rps,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::NoPs, Scheme::Tps, Scheme::Rps];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::NoPs => "nops",
            Scheme::Tps => "tps",
            Scheme::Rps => "rps",
        }
    }

    pub fn is_subtracted(self) -> bool {
        !matches!(self, Scheme::NoPs)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "").as_str() {
            "nops" => Ok(Scheme::NoPs),
            "tps" => Ok(Scheme::Tps),
            "rps" => Ok(Scheme::Rps),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected nops, tps or rps)"
            ))),
        }
    }
}

/// One of the four modes retained after the channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B2,
    E,
    F,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::A, Mode::B2, Mode::E, Mode::F];

    fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B2 => 1,
            Mode::E => 2,
            Mode::F => 3,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::A => "A",
            Mode::B2 => "B2",
            Mode::E => "E",
            Mode::F => "F",
        })
    }
}

/// Occupation numbers of the four modes, ordered (A, B2, E, F).
///
/// Ordering is lexicographic in that mode order, which fixes the iteration
/// order of every reduction over a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockKet4(pub [u32; 4]);

impl FockKet4 {
    pub fn new(n_a: u32, n_b2: u32, n_e: u32, n_f: u32) -> Self {
        FockKet4([n_a, n_b2, n_e, n_f])
    }

    pub fn occupation(&self, mode: Mode) -> u32 {
        self.0[mode.index()]
    }

    /// The ket with `mode`'s occupation shifted by `delta`, or `None` if it
    /// would become negative.
    pub fn shifted(&self, mode: Mode, delta: i32) -> Option<Self> {
        let mut out = *self;
        let slot = &mut out.0[mode.index()];
        *slot = slot.checked_add_signed(delta)?;
        Some(out)
    }
}

impl fmt::Display for FockKet4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, e, ff] = self.0;
        write!(f, "|{a},{b},{e},{ff}⟩")
    }
}

/// Scheme selector plus the physical parameters of one protocol instance.
///
/// The squeezing phase is fixed at zero, so all amplitudes are real; the
/// squeezing parameter is `asinh(√alpha_sq)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Mean photon number of Alice's mode.
    pub alpha_sq: f64,
    /// Mean photon number of Eve's injected mode (channel noise).
    pub beta_sq: f64,
    /// Transmissivity of the photon-subtraction beam splitter.
    pub t_s: f64,
    /// Reconciliation efficiency.
    pub recon_eff: f64,
    /// Upper bound on the photon numbers of both source TMSVs.
    pub trunc_n: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            scheme: Scheme::NoPs,
            alpha_sq: 1.3,
            beta_sq: 0.001,
            t_s: 0.9,
            recon_eff: 0.95,
            trunc_n: 20,
        }
    }
}

impl SchemeConfig {
    pub fn with_scheme(self, scheme: Scheme) -> Self {
        SchemeConfig { scheme, ..self }
    }

    pub fn squeezing(&self) -> f64 {
        self.alpha_sq.sqrt().asinh()
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_nonneg(self.alpha_sq) {
            return Err(Error::domain(format!("alpha_sq = {} must be ≥ 0", self.alpha_sq)));
        }
        if !finite_nonneg(self.beta_sq) {
            return Err(Error::domain(format!("beta_sq = {} must be ≥ 0", self.beta_sq)));
        }
        if !(0.0..=1.0).contains(&self.t_s) {
            return Err(Error::domain(format!("t_s = {} outside [0, 1]", self.t_s)));
        }
        if !(0.0..=1.0).contains(&self.recon_eff) {
            return Err(Error::domain(format!("recon_eff = {} outside [0, 1]", self.recon_eff)));
        }
        if self.trunc_n < 1 {
            return Err(Error::domain("trunc_n must be ≥ 1"));
        }
        Ok(())
    }
}

/// Fock coefficient of a TMSV with the given mean photon number:
/// `√(μⁿ / (1+μ)ⁿ⁺¹)`.
pub fn tmsv_coefficient(mean_photon: f64, n: u32) -> Result<f64> {
    if !(mean_photon >= 0.0) || !mean_photon.is_finite() {
        return Err(Error::domain(format!(
            "mean photon number {mean_photon} must be finite and ≥ 0"
        )));
    }
    Ok(tmsv_unchecked(mean_photon, n))
}

fn tmsv_unchecked(mu: f64, n: u32) -> f64 {
    let ratio = mu / (1.0 + mu);
    (powi_u(ratio, n) / (1.0 + mu)).sqrt()
}

fn powi_u(x: f64, n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        x.powi(n as i32)
    }
}

/// Beam-splitter amplitude for `k` of `n` photons being reflected:
/// `√C(n,k) · √Tⁿ⁻ᵏ · √(1−T)ᵏ`.
pub fn bs_coefficient(n: u32, k: u32, t: f64) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!("bs_coefficient: k = {k} > n = {n}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("bs_coefficient: T = {t} outside [0, 1]")));
    }
    Ok(binomial(n, k).sqrt() * powi_u(t.sqrt(), n - k) * powi_u((1.0 - t).sqrt(), k))
}

/// `√C(n−k+l, l) · √C(k+m−l, k)`, the normalization picked up when Bob's and
/// Eve's photons are re-grouped in the two output arms.
pub fn pairing_factor(n: u32, k: u32, m: u32, l: u32) -> Result<f64> {
    if l > m || k > n {
        return Err(Error::domain(format!(
            "pairing_factor: malformed indices (n={n}, k={k}, m={m}, l={l})"
        )));
    }
    Ok((binomial(n - k + l, l) * binomial(k + m - l, k)).sqrt())
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `r_{j,1}^{T} / √(1−T) = √j · √T^{j−1}`; zero for `j = 0` since no photon
/// can be taken from vacuum. Keeping the `√(1−T)` factor out lets the
/// normalized state stay well defined at `T = 1`.
fn reduced_subtraction_amplitude(j: u32, t_s: f64) -> f64 {
    if j == 0 {
        0.0
    } else {
        f64::from(j).sqrt() * powi_u(t_s.sqrt(), j - 1)
    }
}

/// Precomputed factors shared by all index tuples of one build.
struct Tables {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `channel[n][k] = r_{n,k}^{t_e}`
    channel: Vec<Vec<f64>>,
    /// `sqrt_binom[n][k] = √C(n,k)` for `n ≤ 2N`.
    sqrt_binom: Vec<Vec<f64>>,
}

impl Tables {
    fn new(cfg: &SchemeConfig, t_e: f64) -> Self {
        let n_max = cfg.trunc_n as u32;
        let sqrt_binom: Vec<Vec<f64>> = (0..=2 * n_max + 1)
            .map(|n| (0..=n).map(|k| binomial(n, k).sqrt()).collect())
            .collect();
        let (st, sr) = (t_e.sqrt(), (1.0 - t_e).sqrt());
        let channel = (0..=n_max)
            .map(|n| {
                (0..=n)
                    .map(|k| sqrt_binom[n as usize][k as usize] * powi_u(st, n - k) * powi_u(sr, k))
                    .collect()
            })
            .collect();
        Tables {
            alpha: (0..=n_max).map(|n| tmsv_unchecked(cfg.alpha_sq, n)).collect(),
            beta: (0..=n_max).map(|m| tmsv_unchecked(cfg.beta_sq, m)).collect(),
            channel,
            sqrt_binom,
        }
    }

    fn pairing(&self, n: u32, k: u32, m: u32, l: u32) -> f64 {
        self.sqrt_binom[(n - k + l) as usize][l as usize] * self.sqrt_binom[(k + m - l) as usize][k as usize]
    }
}

/// Sends a photon-number-correlated source `Σ_n c_n |n, n⟩` through Eve's
/// beam splitter together with her TMSV and reports every resulting term
/// `(n_A, n_Bout, n_E, n_F, coefficient)` in loop order.
fn channel_terms(
    tables: &Tables,
    n_max: u32,
    source: impl Fn(u32) -> Option<(f64, u32)>,
    mut emit: impl FnMut(FockKet4, f64),
) {
    for n_a in 0..=n_max {
        // `source` maps Alice's n to (amplitude, photons sent into the channel).
        let Some((amp_n, sent)) = source(n_a) else {
            continue;
        };
        if amp_n == 0.0 {
            continue;
        }
        for k in 0..=sent {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let c1 = amp_n * sign * tables.channel[sent as usize][k as usize];
            if c1 == 0.0 {
                continue;
            }
            for m in 0..=n_max {
                let c2 = c1 * tables.beta[m as usize];
                if c2 == 0.0 {
                    continue;
                }
                for l in 0..=m {
                    let c = c2 * tables.channel[m as usize][l as usize] * tables.pairing(sent, k, m, l);
                    if c == 0.0 {
                        continue;
                    }
                    emit(FockKet4::new(n_a, sent - k + l, k + m - l, m), c);
                }
            }
        }
    }
}

/// Visits every un-accumulated coefficient of the pre-normalization table in
/// loop order. For the subtracted schemes the coefficients carry the
/// reduced subtraction amplitude (the common `√(1−T_S)` factor is omitted).
fn for_each_term(cfg: &SchemeConfig, t_e: f64, mut emit: impl FnMut(FockKet4, f64)) {
    let tables = Tables::new(cfg, t_e);
    let n_max = cfg.trunc_n as u32;
    match cfg.scheme {
        Scheme::NoPs => channel_terms(&tables, n_max, |n| Some((tables.alpha[n as usize], n)), emit),
        Scheme::Tps => channel_terms(
            &tables,
            n_max,
            |n| {
                (n >= 1).then(|| {
                    (
                        tables.alpha[n as usize] * reduced_subtraction_amplitude(n, cfg.t_s),
                        n - 1,
                    )
                })
            },
            emit,
        ),
        Scheme::Rps => channel_terms(
            &tables,
            n_max,
            |n| Some((tables.alpha[n as usize], n)),
            |ket, c| {
                let j = ket.occupation(Mode::B2);
                if j >= 1 {
                    let [a, _, e, f] = ket.0;
                    emit(
                        FockKet4::new(a, j - 1, e, f),
                        c * reduced_subtraction_amplitude(j, cfg.t_s),
                    );
                }
            },
        ),
    }
}

/// All raw `(ket, coefficient)` terms of the pre-normalization table, in
/// enumeration order and before any accumulation. Several terms may share
/// a ket.
pub fn raw_terms(cfg: &SchemeConfig, t_e: f64) -> Result<Vec<(FockKet4, f64)>> {
    validate_inputs(cfg, t_e)?;
    let mut out = Vec::new();
    for_each_term(cfg, t_e, |ket, c| out.push((ket, c)));
    Ok(out)
}

fn validate_inputs(cfg: &SchemeConfig, t_e: f64) -> Result<()> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&t_e) {
        return Err(Error::domain(format!("t_e = {t_e} outside [0, 1]")));
    }
    Ok(())
}

/// Closed-form single-photon subtraction probability at the transmitter,
/// `μ(1−T_S) / ((1+α²)(1−μT_S)²)` with `μ = α²/(1+α²)`.
pub fn tps_probability_closed_form(alpha_sq: f64, t_s: f64) -> f64 {
    (1.0 - t_s) * tps_reduced_closed_form(alpha_sq, t_s)
}

fn tps_reduced_closed_form(alpha_sq: f64, t_s: f64) -> f64 {
    let mu = alpha_sq / (1.0 + alpha_sq);
    mu / ((1.0 + alpha_sq) * (1.0 - mu * t_s).powi(2))
}

/// Probability weight of the scheme: 1 without subtraction, `P₁` for T-PS
/// (a truncated sum, independent of `t_e`), and `P′₁` for R-PS (the squared
/// norm of the receiver-side coefficient table, dependent on `t_e` and `β²`).
pub fn subtraction_probability(cfg: &SchemeConfig, t_e: f64) -> Result<f64> {
    validate_inputs(cfg, t_e)?;
    Ok(match cfg.scheme {
        Scheme::NoPs => 1.0,
        Scheme::Tps => tps_probability_truncated(cfg),
        Scheme::Rps => (1.0 - cfg.t_s) * sum_sq(&accumulate(cfg, t_e).1),
    })
}

fn tps_probability_truncated(cfg: &SchemeConfig) -> f64 {
    (1..=cfg.trunc_n as u32)
        .map(|n| {
            let r = tmsv_unchecked(cfg.alpha_sq, n) * reduced_subtraction_amplitude(n, cfg.t_s);
            r * r
        })
        .sum::<f64>()
        * (1.0 - cfg.t_s)
}

fn sum_sq(values: &[f64]) -> f64 {
    values.iter().map(|a| a * a).sum()
}

/// Dense indexing of every ket a build can reach. Photon bookkeeping fixes
/// `n_E = n_A + n_F − n_B2 − lost`, so `(n_A, n_B2, n_F)` is a complete
/// index, and walking it in order visits kets in lexicographic order.
#[derive(Clone, Copy, Debug)]
struct KetLayout {
    n: u32,
    /// Photons removed by subtraction (0 or 1).
    lost: u32,
}

impl KetLayout {
    fn new(cfg: &SchemeConfig) -> Self {
        KetLayout {
            n: cfg.trunc_n as u32,
            lost: u32::from(cfg.scheme.is_subtracted()),
        }
    }

    fn bob_slots(&self) -> usize {
        2 * self.n as usize + 1
    }

    fn len(&self) -> usize {
        let side = self.n as usize + 1;
        side * self.bob_slots() * side
    }

    fn index(&self, ket: &FockKet4) -> Option<usize> {
        let [a, b, e, f] = ket.0;
        if a > self.n || f > self.n || b as usize >= self.bob_slots() || b + e + self.lost != a + f {
            return None;
        }
        let side = self.n as usize + 1;
        Some((a as usize * self.bob_slots() + b as usize) * side + f as usize)
    }

    fn ket(&self, idx: usize) -> Option<FockKet4> {
        let side = self.n as usize + 1;
        let f = (idx % side) as u32;
        let rest = idx / side;
        let b = (rest % self.bob_slots()) as u32;
        let a = (rest / self.bob_slots()) as u32;
        let e = (a + f).checked_sub(b + self.lost)?;
        Some(FockKet4::new(a, b, e, f))
    }
}

/// Sums the terms of [`for_each_term`] per ket, in enumeration order.
fn accumulate(cfg: &SchemeConfig, t_e: f64) -> (KetLayout, Vec<f64>) {
    let layout = KetLayout::new(cfg);
    let mut acc = vec![0.0; layout.len()];
    for_each_term(cfg, t_e, |ket, c| {
        let i = layout.index(&ket).expect("emitted ket lies in the layout");
        acc[i] += c;
    });
    (layout, acc)
}

/// Normalized real amplitude table for one scheme and channel instance.
#[derive(Clone, Debug)]
pub struct SparseFourModeState {
    kets: Vec<FockKet4>,
    amps: Vec<f64>,
    layout: KetLayout,
    /// Normalized amplitudes at every layout position, zeros included.
    dense: Vec<f64>,
    norm_constant: f64,
    p_sub: f64,
    truncation_deficit: f64,
    config: SchemeConfig,
    t_e: f64,
}

impl SparseFourModeState {
    pub fn scheme(&self) -> Scheme {
        self.config.scheme
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn t_e(&self) -> f64 {
        self.t_e
    }

    /// Squared norm of the coefficient table before normalization: `P₁` for
    /// T-PS, `P′₁` for R-PS, and one minus the truncation tail for No-PS.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    /// Probability weight of the scheme, as in [`subtraction_probability`].
    pub fn subtraction_probability(&self) -> f64 {
        self.p_sub
    }

    /// Relative deficit of the pre-normalization norm against its
    /// untruncated value (closed-form `P₁` for T-PS, 1 otherwise).
    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn len(&self) -> usize {
        self.kets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kets.is_empty()
    }

    pub fn amplitude(&self, ket: &FockKet4) -> f64 {
        self.layout.index(ket).map_or(0.0, |i| self.dense[i])
    }

    /// Kets with nonzero amplitude in lexicographic order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (FockKet4, f64)> + '_ {
        self.kets.iter().copied().zip(self.amps.iter().copied())
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Debug dump, one `n_A n_B2 n_E n_F amplitude` line per ket, sorted.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.len() * 40);
        for (ket, amp) in self.iter() {
            let [a, b, e, f] = ket.0;
            let _ = writeln!(out, "{a} {b} {e} {f} {amp:.17e}");
        }
        out
    }
}

/// Parses the output of [`SparseFourModeState::dump`].
pub fn parse_dump(text: &str) -> Result<Vec<(FockKet4, f64)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bad = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let mut occ = [0u32; 4];
            for (slot, f) in occ.iter_mut().zip(&fields[..4]) {
                *slot = f.parse().map_err(|_| bad("bad occupation"))?;
            }
            let amp = fields[4].parse().map_err(|_| bad("bad amplitude"))?;
            Ok((FockKet4(occ), amp))
        })
        .collect()
}

/// Builds the normalized post-channel state for `cfg.scheme` at channel
/// transmissivity `t_e`.
///
/// Terms landing on the same ket are summed. For R-PS the four-mode state
/// before subtraction is built first and the subtraction beam splitter is
/// then applied to Bob's mode with one reflected photon post-selected.
pub fn build_state(cfg: &SchemeConfig, t_e: f64) -> Result<SparseFourModeState> {
    validate_inputs(cfg, t_e)?;

    let (layout, mut dense) = accumulate(cfg, t_e);
    let reduced_norm_sq = sum_sq(&dense);
    if !(reduced_norm_sq > 0.0) {
        return Err(Error::domain(format!(
            "{} state has zero norm (alpha_sq = {}, beta_sq = {}, t_e = {t_e}): nothing to subtract",
            cfg.scheme, cfg.alpha_sq, cfg.beta_sq
        )));
    }

    let (norm_constant, truncation_deficit) = match cfg.scheme {
        Scheme::NoPs => (reduced_norm_sq, (1.0 - reduced_norm_sq).abs()),
        Scheme::Tps => {
            let exact = tps_reduced_closed_form(cfg.alpha_sq, cfg.t_s);
            ((1.0 - cfg.t_s) * reduced_norm_sq, (1.0 - reduced_norm_sq / exact).abs())
        }
        Scheme::Rps => {
            // The deficit is measured on the table before subtraction, whose
            // norm the channel preserves: it is that of the truncated sources.
            let tail = |mu: f64| {
                (0..=cfg.trunc_n as u32)
                    .map(|n| tmsv_unchecked(mu, n).powi(2))
                    .sum::<f64>()
            };
            let pre_norm = tail(cfg.alpha_sq) * tail(cfg.beta_sq);
            ((1.0 - cfg.t_s) * reduced_norm_sq, (1.0 - pre_norm).abs())
        }
    };
    if truncation_deficit > TRUNCATION_WARN_THRESHOLD {
        log::warn!(
            "{} state at t_e = {t_e}: truncation at N = {} leaves a relative norm deficit of {truncation_deficit:.3e}",
            cfg.scheme,
            cfg.trunc_n
        );
    }

    let scale = reduced_norm_sq.sqrt().recip();
    let mut kets = Vec::new();
    let mut amps = Vec::new();
    for (i, a) in dense.iter_mut().enumerate() {
        if *a != 0.0 {
            *a *= scale;
            kets.push(layout.ket(i).expect("nonzero entries are valid kets"));
            amps.push(*a);
        }
    }

    let p_sub = match cfg.scheme {
        Scheme::NoPs => 1.0,
        Scheme::Tps => tps_probability_truncated(cfg),
        Scheme::Rps => norm_constant,
    };

    Ok(SparseFourModeState {
        kets,
        amps,
        layout,
        dense,
        norm_constant,
        p_sub,
        truncation_deficit,
        config: *cfg,
        t_e,
    })
}
