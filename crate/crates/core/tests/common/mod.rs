//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the crate's numerics: states are built by dense
//! linear algebra, and rates are computed from a full covariance matrix.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use psqkd::{FockKet4, Scheme, SchemeConfig};

/// Dense multi-mode register with per-mode dimensions.
struct Register {
    dims: Vec<usize>,
    amp: DVector<f64>,
}

impl Register {
    fn index(&self, occ: &[usize]) -> usize {
        occ.iter().zip(&self.dims).fold(0, |acc, (&n, &d)| acc * d + n)
    }

    fn occupations(&self, mut idx: usize) -> Vec<usize> {
        let mut occ = vec![0; self.dims.len()];
        for (slot, &d) in occ.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        occ
    }

    /// Applies a two-mode operator given on the `dims[i] × dims[j]` space.
    fn apply_pair(&mut self, i: usize, j: usize, u: &DMatrix<f64>) {
        let (di, dj) = (self.dims[i], self.dims[j]);
        let mut out = DVector::zeros(self.amp.len());
        for idx in 0..self.amp.len() {
            let a = self.amp[idx];
            if a == 0.0 {
                continue;
            }
            let occ = self.occupations(idx);
            let col = occ[i] * dj + occ[j];
            for ni in 0..di {
                for nj in 0..dj {
                    let v = u[(ni * dj + nj, col)];
                    if v != 0.0 {
                        let mut o = occ.clone();
                        o[i] = ni;
                        o[j] = nj;
                        out[self.index(&o)] += v * a;
                    }
                }
            }
        }
        self.amp = out;
    }
}

fn lowering(d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

/// Beam splitter on modes of dimension `d1 × d2` mapping a single photon in
/// the first mode to `√T |1,0⟩ − √(1−T) |0,1⟩`, built as a matrix
/// exponential of the photon-hopping generator. Number conservation keeps it
/// exact on every total-photon sector that fits in both dimensions.
pub fn beam_splitter(d1: usize, d2: usize, t: f64) -> DMatrix<f64> {
    let a = lowering(d1).kronecker(&DMatrix::identity(d2, d2));
    let b = DMatrix::identity(d1, d1).kronecker(&lowering(d2));
    let gen = a.transpose() * &b - &a * b.transpose();
    let theta = t.sqrt().acos();
    let mut u = (&gen * theta).exp();
    // |1,0⟩ has index d2, |0,1⟩ has index 1.
    if u[(1, d2)] > 0.0 {
        u = (&gen * -theta).exp();
    }
    u
}

fn tmsv(mean: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| (mean.powi(k as i32) / (1.0 + mean).powi(k as i32 + 1)).sqrt())
        .collect()
}

/// Conditioned one-photon subtraction on mode `m` through an ancilla.
fn subtract(reg: &mut Register, m: usize, t_s: f64, max_photons: usize) {
    let dims_before = reg.dims.clone();
    let dc = max_photons + 2;
    let mut dims = reg.dims.clone();
    dims.push(dc);
    let mut ext = Register {
        amp: DVector::zeros(dims.iter().product()),
        dims,
    };
    for idx in 0..reg.amp.len() {
        let mut occ = reg.occupations(idx);
        occ.push(0);
        let j = ext.index(&occ);
        ext.amp[j] = reg.amp[idx];
    }
    let last = ext.dims.len() - 1;
    let u = beam_splitter(ext.dims[m], dc, t_s);
    ext.apply_pair(m, last, &u);
    let mut out = DVector::zeros(reg.amp.len());
    for idx in 0..ext.amp.len() {
        let occ = ext.occupations(idx);
        if occ[last] == 1 {
            out[reg.index(&occ[..last])] = ext.amp[idx];
        }
    }
    reg.dims = dims_before;
    reg.amp = out;
}

/// Normalized state over `(A, B2, E, F)` by dense simulation of the optical
/// circuit, with both sources truncated at `cfg.trunc_n` photons. Amplitudes
/// below `1e-15` are dropped; sign is fixed so the largest amplitude is
/// positive.
pub fn dense_state(cfg: &SchemeConfig, t_e: f64) -> HashMap<FockKet4, f64> {
    let n = cfg.trunc_n;
    let d = 2 * n + 2;
    let mut reg = Register {
        dims: vec![n + 1, d, d, n + 1],
        amp: DVector::zeros((n + 1) * d * d * (n + 1)),
    };
    let (a, b) = (tmsv(cfg.alpha_sq, n), tmsv(cfg.beta_sq, n));
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let idx = reg.index(&[i, i, j, j]);
            reg.amp[idx] = ai * bj;
        }
    }
    if cfg.scheme == Scheme::Tps {
        subtract(&mut reg, 1, cfg.t_s, n);
    }
    let u = beam_splitter(d, d, t_e);
    reg.apply_pair(1, 2, &u);
    if cfg.scheme == Scheme::Rps {
        subtract(&mut reg, 1, cfg.t_s, 2 * n);
    }
    let norm = reg.amp.norm();
    let (mut big, mut sign) = (0.0, 1.0);
    for &v in reg.amp.iter() {
        if v.abs() > big {
            big = v.abs();
            sign = v.signum();
        }
    }
    let mut out = HashMap::new();
    for idx in 0..reg.amp.len() {
        let v = reg.amp[idx] * sign / norm;
        if v.abs() > 1e-15 {
            let o = reg.occupations(idx);
            out.insert(FockKet4::new(o[0] as u32, o[1] as u32, o[2] as u32, o[3] as u32), v);
        }
    }
    out
}

/// The eight covariance scalars in output order
/// `v_a, v_b2, v_e, v_f, c_ab2, c_ef, c_eb2, c_fb2`.
pub type Covs = [f64; 8];

/// Input moments of a TMSV: `(⟨n⟩, ⟨a b⟩)`, either exact or for the state
/// truncated at `n` photons and renormalized.
fn tmsv_moments(mean: f64, trunc: Option<usize>) -> (f64, f64) {
    match trunc {
        None => (mean, (mean * (1.0 + mean)).sqrt()),
        Some(n) => {
            let c = tmsv(mean, n);
            let z: f64 = c.iter().map(|v| v * v).sum();
            let occ: f64 = c.iter().enumerate().map(|(k, v)| k as f64 * v * v).sum::<f64>() / z;
            let pair: f64 = (0..n).map(|k| c[k] * c[k + 1] * (k as f64 + 1.0)).sum::<f64>() / z;
            (occ, pair)
        }
    }
}

/// Gaussian channel algebra for the unsubtracted protocol. With `trunc` the
/// inputs are the truncated sources, which linear optics then maps exactly.
pub fn gaussian_covs(alpha_sq: f64, beta_sq: f64, t: f64, trunc: Option<usize>) -> Covs {
    let (na, sa) = tmsv_moments(alpha_sq, trunc);
    let (nb, sb) = tmsv_moments(beta_sq, trunc);
    let (va, vf) = (1.0 + 2.0 * na, 1.0 + 2.0 * nb);
    let (rt, rr) = (t.sqrt(), (1.0 - t).sqrt());
    [
        va,
        t * va + (1.0 - t) * vf,
        (1.0 - t) * va + t * vf,
        vf,
        rt * 2.0 * sa,
        rt * 2.0 * sb,
        rt * rr * (vf - va),
        rr * 2.0 * sb,
    ]
}

/// Full 8×8 covariance matrix in `(x_A, p_A, x_B2, p_B2, x_E, p_E, x_F, p_F)`
/// order from a list of real amplitudes, with no structural assumptions.
pub fn full_covariance(kets: &[(FockKet4, f64)]) -> DMatrix<f64> {
    let map: HashMap<FockKet4, f64> = kets.iter().copied().collect();
    let norm: f64 = kets.iter().map(|(_, a)| a * a).sum();
    // ⟨ψ| O |ψ⟩ for O = op_i op_j with op ∈ {a, a†}.
    let apply = |ket: FockKet4, mode: usize, raise: bool| -> Option<(FockKet4, f64)> {
        let mut occ = ket.0;
        if raise {
            occ[mode] += 1;
            Some((FockKet4(occ), (occ[mode] as f64).sqrt()))
        } else if occ[mode] == 0 {
            None
        } else {
            let f = (occ[mode] as f64).sqrt();
            occ[mode] -= 1;
            Some((FockKet4(occ), f))
        }
    };
    let expect = |i: usize, ri: bool, j: usize, rj: bool| -> f64 {
        let mut total = 0.0;
        for (ket, amp) in kets {
            if let Some((k1, f1)) = apply(*ket, j, rj) {
                if let Some((k2, f2)) = apply(k1, i, ri) {
                    if let Some(b) = map.get(&k2) {
                        total += b * f1 * f2 * amp;
                    }
                }
            }
        }
        total / norm
    };
    // ⟨x⟩ = 2⟨a⟩; ⟨p⟩ vanishes for real amplitudes.
    let mean_x = |i: usize| -> f64 {
        let mut lower = 0.0;
        for (ket, amp) in kets {
            if let Some((k, f)) = apply(*ket, i, false) {
                if let Some(b) = map.get(&k) {
                    lower += b * f * amp;
                }
            }
        }
        2.0 * lower / norm
    };
    let mut m = DMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            // Real amplitudes: ⟨a_i a_j⟩ and ⟨a_i† a_j⟩ are real.
            let aa = expect(i, false, j, false);
            let ad_a = expect(i, true, j, false);
            let (xi, xj) = (mean_x(i), mean_x(j));
            if i == j {
                m[(2 * i, 2 * i)] = 1.0 + 2.0 * ad_a + 2.0 * aa - xi * xi;
                m[(2 * i + 1, 2 * i + 1)] = 1.0 + 2.0 * ad_a - 2.0 * aa;
            } else {
                m[(2 * i, 2 * j)] = 2.0 * aa + 2.0 * ad_a - xi * xj;
                m[(2 * i + 1, 2 * j + 1)] = -2.0 * aa + 2.0 * ad_a;
            }
        }
    }
    m
}

/// Rows/columns of the given modes (0 = A, 1 = B2, 2 = E, 3 = F).
pub fn sub_modes(m: &DMatrix<f64>, modes: &[usize]) -> DMatrix<f64> {
    let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Symplectic eigenvalues as the singular values of `√M Ω √M`, ascending.
pub fn symplectic_spectrum(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let omega = DMatrix::from_fn(n, n, |r, c| match (r % 2, c) {
        (0, c) if c == r + 1 => 1.0,
        (1, c) if c + 1 == r => -1.0,
        _ => 0.0,
    });
    let k = &sqrt * omega * &sqrt;
    let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv.into_iter().step_by(2).collect()
}

pub fn g(v: f64) -> f64 {
    if v <= 1.0 {
        return 0.0;
    }
    let (p, q) = ((v + 1.0) / 2.0, (v - 1.0) / 2.0);
    p * p.log2() - q * q.log2()
}

pub fn entropy(m: &DMatrix<f64>) -> f64 {
    symplectic_spectrum(m).into_iter().map(g).sum()
}

/// `(I_G, χ_G, f·I_G − χ_G)` from a full covariance matrix.
pub fn pipeline_rate(m: &DMatrix<f64>, recon_eff: f64) -> (f64, f64, f64) {
    let (va, vb, c) = (m[(0, 0)], m[(2, 2)], m[(0, 2)]);
    let i_g = 0.5 * (vb / (vb - c * c / va)).log2();
    let ef = sub_modes(m, &[2, 3]);
    // Homodyne on x_B2: subtract the Schur complement of that single entry.
    let col = DVector::from_iterator(4, [4, 5, 6, 7].iter().map(|&r| m[(r, 2)]));
    let cond = &ef - &col * col.transpose() / vb;
    let chi = entropy(&ef) - entropy(&cond);
    (i_g, chi, recon_eff * i_g - chi)
}
