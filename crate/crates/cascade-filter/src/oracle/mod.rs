//! Brute-force density-matrix oracle in a truncated Fock space.
//!
//! Independent of the moment engine: the cascaded master equation is built
//! from explicit operators, its steady state is found by preconditioned GMRES
//! and two-time correlations are evolved on the reduced space that the
//! observable actually touches. Intended for small banks (N <= 1).

pub mod gmres;
pub mod sparse;

use std::collections::HashMap;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::cascade::SystemDescriptor;
use crate::error::{Error, Result};
use sparse::{trace, Csr};

/// Largest full Hilbert-space dimension the oracle accepts.
pub const DIMENSION_BOUND: usize = 20_000;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

/// How the photon number of each bank is capped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Each mode holds at most `n` photons.
    PerMode(usize),
    /// Each bank holds at most `n` photons in total.
    PerBankTotal(usize),
}

impl Truncation {
    pub fn cutoff(self) -> usize {
        match self {
            Truncation::PerMode(n) | Truncation::PerBankTotal(n) => n,
        }
    }

    fn bank_dim(self, modes: usize) -> Option<usize> {
        match self {
            Truncation::PerMode(n) => (n + 1).checked_pow(modes as u32),
            Truncation::PerBankTotal(n) => {
                // C(modes + n, n)
                let mut c: u128 = 1;
                for i in 1..=n as u128 {
                    c = c * (modes as u128 + i) / i;
                    if c > usize::MAX as u128 {
                        return None;
                    }
                }
                Some(c as usize)
            }
        }
    }
}

/// Truncated basis of atom (2 levels) times bank A times bank B.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    pub modes_per_bank: usize,
    pub truncation: Truncation,
    bank_states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl FockBasis {
    pub fn new(modes_per_bank: usize, truncation: Truncation) -> Result<Self> {
        if modes_per_bank == 0 {
            return Err(Error::Parameter("oracle needs at least one mode per bank".into()));
        }
        let nb = truncation.bank_dim(modes_per_bank);
        let dim = nb.and_then(|b| b.checked_mul(b)).and_then(|b| b.checked_mul(2));
        match dim {
            Some(d) if d <= DIMENSION_BOUND => {}
            _ => return Err(Error::DimensionBound { dim: dim.unwrap_or(usize::MAX), bound: DIMENSION_BOUND }),
        }
        let mut bank_states = Vec::new();
        let mut cur = vec![0u8; modes_per_bank];
        enumerate(&mut cur, 0, truncation, &mut bank_states);
        let index = bank_states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self { modes_per_bank, truncation, bank_states, index })
    }

    pub fn n_modes(&self) -> usize {
        2 * self.modes_per_bank
    }

    pub fn photon_cutoff(&self) -> usize {
        self.truncation.cutoff()
    }

    pub fn bank_dim(&self) -> usize {
        self.bank_states.len()
    }

    pub fn total_dim(&self) -> usize {
        2 * self.bank_dim() * self.bank_dim()
    }

    /// Single-bank annihilation operator for mode `j`.
    fn bank_lowering(&self, j: usize) -> Vec<(usize, usize, f64)> {
        let mut t = Vec::new();
        for (c, s) in self.bank_states.iter().enumerate() {
            if s[j] > 0 {
                let mut lower = s.clone();
                lower[j] -= 1;
                t.push((self.index[&lower], c, f64::from(s[j]).sqrt()));
            }
        }
        t
    }
}

fn enumerate(cur: &mut Vec<u8>, pos: usize, tr: Truncation, out: &mut Vec<Vec<u8>>) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    let used: usize = cur[..pos].iter().map(|&x| x as usize).sum();
    let max = match tr {
        Truncation::PerMode(n) => n,
        Truncation::PerBankTotal(n) => n - used,
    };
    for k in 0..=max {
        cur[pos] = k as u8;
        enumerate(cur, pos + 1, tr, out);
    }
    cur[pos] = 0;
}

/// Which factors of atom x A x B a Liouvillian acts on. Tracing out either
/// bank leaves a closed equation for the rest because neither bank feeds
/// back on the atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Full,
    AtomA,
    AtomB,
}

/// Generator of the cascaded master equation on one of the spaces.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub space: Space,
    dim: usize,
    heff: Csr,
    jumps: Vec<Csr>,
    sigma_minus: Csr,
    a: Vec<Csr>,
    b: Vec<Csr>,
    gamma: f64,
    omega: f64,
}

/// Builds the generator on the full space.
pub fn build_liouvillian(sys: &SystemDescriptor<f64>, basis: &FockBasis) -> Result<Liouvillian> {
    build_on(sys, basis, Space::Full)
}

pub fn build_on(sys: &SystemDescriptor<f64>, basis: &FockBasis, space: Space) -> Result<Liouvillian> {
    let n = sys.n_modes();
    if sys.coupling != crate::config::Coupling::TwoFilter {
        return Err(Error::Parameter("the oracle models the two-filter cascade only".into()));
    }
    if n != basis.modes_per_bank {
        return Err(Error::Parameter(format!("basis has {} modes per bank, system has {n}", basis.modes_per_bank)));
    }
    let nb = basis.bank_dim();
    let (na, nbb) = match space {
        Space::Full => (nb, nb),
        Space::AtomA => (nb, 1),
        Space::AtomB => (1, nb),
    };
    let dim = 2 * na * nbb;
    let at = |s: usize, fa: usize, fb: usize| s * na * nbb + fa * nbb + fb;
    let lift_a = |j: usize| {
        let low = basis.bank_lowering(j);
        let mut t = Vec::new();
        for s in 0..2 {
            for fb in 0..nbb {
                for &(r, c, v) in &low {
                    t.push((at(s, r, fb), at(s, c, fb), C::new(v, 0.0)));
                }
            }
        }
        Csr::from_triplets(dim, t)
    };
    let lift_b = |j: usize| {
        let low = basis.bank_lowering(j);
        let mut t = Vec::new();
        for s in 0..2 {
            for fa in 0..na {
                for &(r, c, v) in &low {
                    t.push((at(s, fa, r), at(s, fa, c), C::new(v, 0.0)));
                }
            }
        }
        Csr::from_triplets(dim, t)
    };
    let keep_a = space != Space::AtomB;
    let keep_b = space != Space::AtomA;
    let a: Vec<Csr> = if keep_a { (0..n).map(lift_a).collect() } else { Vec::new() };
    let b: Vec<Csr> = if keep_b { (0..n).map(lift_b).collect() } else { Vec::new() };
    // sigma_- = |g><e| with g = 0, e = 1
    let sm = Csr::from_triplets(dim, (0..na * nbb).map(|f| (f, na * nbb + f, ONE)).collect());
    let sp = sm.adjoint();

    let gamma = sys.gamma();
    let omega = sys.atom.omega_rabi;
    let kappa = sys.kappa();
    let mut h = sp.add(&sm).scale(C::new(omega / 2.0, 0.0));
    let mut jumps = Vec::new();
    let sqk = C::new(kappa.sqrt(), 0.0);
    for j in 0..n {
        let e = sys.couplings[j];
        // the jump sqrt(kappa) x + c sigma_- carries the cascade coupling c sqrt(kappa) = E_j
        let atom_part = sm.scale(e / kappa.sqrt());
        let banks: [(bool, &[Csr], f64); 2] = [(keep_a, &a, sys.detunings_a[j]), (keep_b, &b, sys.detunings_b[j])];
        for (keep, ops, det) in banks {
            if keep {
                let x = &ops[j];
                let xd = x.adjoint();
                h = h.add(&xd.mul(x).scale(C::new(det, 0.0)));
                h = h.add(&x.mul(&sp).scale(I * 0.5 * e.conj()));
                h = h.add(&xd.mul(&sm).scale(-I * 0.5 * e));
                jumps.push(x.scale(sqk));
                jumps.push(atom_part.add(&x.scale(sqk)));
            } else {
                jumps.push(atom_part.clone());
            }
        }
    }
    let mut heff = h;
    for jmp in &jumps {
        heff = heff.add(&jmp.adjoint().mul(jmp).scale(C::new(0.0, -0.5)));
    }
    Ok(Liouvillian { space, dim, heff, jumps, sigma_minus: sm, a, b, gamma, omega })
}

impl Liouvillian {
    /// Hilbert-space dimension; operators act on `dim x dim` matrices.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma_minus(&self) -> &Csr {
        &self.sigma_minus
    }

    /// Mode annihilation operators of bank A (empty when traced out).
    pub fn modes_a(&self) -> &[Csr] {
        &self.a
    }

    pub fn modes_b(&self) -> &[Csr] {
        &self.b
    }

    pub fn collective_a(&self) -> Csr {
        sum_ops(&self.a, self.dim)
    }

    pub fn collective_b(&self) -> Csr {
        sum_ops(&self.b, self.dim)
    }

    /// out = L(x) for a row-major `dim x dim` matrix x.
    pub fn apply(&self, x: &[C], out: &mut [C]) {
        let d = self.dim;
        out.iter_mut().for_each(|o| *o = ZERO);
        self.heff.left_mul_acc(x, -I, out);
        let mut tmp = vec![ZERO; d * d];
        self.heff.right_mul_adj(x, &mut tmp);
        out.par_iter_mut().zip(&tmp).for_each(|(o, t)| *o += I * t);
        for j in &self.jumps {
            j.right_mul_adj(x, &mut tmp);
            j.left_mul_acc(&tmp, ONE, out);
        }
    }

    /// Dense superoperator on row-major vectorized matrices; small spaces only.
    pub fn to_dense(&self) -> Result<DMatrix<C>> {
        let d2 = self.dim * self.dim;
        if d2 > 4096 {
            return Err(Error::DimensionBound { dim: d2, bound: 4096 });
        }
        let mut m = DMatrix::zeros(d2, d2);
        let mut e = vec![ZERO; d2];
        let mut col = vec![ZERO; d2];
        for k in 0..d2 {
            e[k] = ONE;
            self.apply(&e, &mut col);
            m.column_mut(k).iter_mut().zip(&col).for_each(|(a, b)| *a = *b);
            e[k] = ZERO;
        }
        Ok(m)
    }

    /// Block-Jacobi inverse: for each filter pair, the atomic 4x4 generator
    /// shifted by the diagonal filter rates.
    fn preconditioner(&self) -> Vec<Matrix4<C>> {
        let h = self.dim / 2;
        let diag = self.heff.diagonal();
        let filt = &diag[..h];
        let (g, o) = (self.gamma, self.omega);
        let la = atom_superoperator(g, o);
        (0..h * h)
            .into_par_iter()
            .map(|p| {
                let (f, fp) = (p / h, p % h);
                let shift = -I * filt[f] + I * filt[fp].conj();
                let extra = if shift.norm() < 1e-9 { ONE } else { ZERO };
                let m = la + Matrix4::identity() * (shift + extra);
                m.try_inverse().unwrap_or_else(Matrix4::identity)
            })
            .collect()
    }
}

fn sum_ops(ops: &[Csr], dim: usize) -> Csr {
    ops.iter().fold(Csr::zeros(dim), |s, o| s.add(o))
}

/// Resonant two-level atom generator on row-major vec(rho), index 2s + s'.
fn atom_superoperator(gamma: f64, omega: f64) -> Matrix4<C> {
    let mut m = Matrix4::zeros();
    let hx = C::new(omega / 2.0, 0.0);
    let ham = [[ZERO, hx], [hx, ZERO]];
    let sm = [[ZERO, ONE], [ZERO, ZERO]];
    for k in 0..4 {
        let mut r = [[ZERO; 2]; 2];
        r[k / 2][k % 2] = ONE;
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut v = ZERO;
                for l in 0..2 {
                    v += -I * (ham[i][l] * r[l][j] - r[i][l] * ham[l][j]);
                }
                // gamma (s- r s+ - {s+ s-, r}/2), s+ s- = |e><e|
                let mut jump = ZERO;
                for l in 0..2 {
                    for q in 0..2 {
                        jump += sm[i][l] * r[l][q] * sm[j][q].conj();
                    }
                }
                let ee = |x: usize| if x == 1 { ONE } else { ZERO };
                v += gamma * (jump - 0.5 * (ee(i) * r[i][j] + r[i][j] * ee(j)));
                out[i][j] = v;
            }
        }
        for q in 0..4 {
            m[(q, k)] = out[q / 2][q % 2];
        }
    }
    m
}

/// Steady-state density matrix with its diagnostics.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub dim: usize,
    pub data: Vec<C>,
    /// Max entry of |L(rho)|.
    pub residual: f64,
    pub gmres_iterations: usize,
}

impl DensityMatrix {
    pub fn trace(&self) -> C {
        trace(&self.data, self.dim)
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.data, self.dim)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.data, self.dim)
    }

    /// tr(X rho).
    pub fn expect(&self, x: &Csr) -> C {
        x.trace_with(&self.data)
    }
}

fn hermiticity_error(x: &[C], n: usize) -> f64 {
    let mut e = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            e = e.max((x[i * n + j] - x[j * n + i].conj()).norm());
        }
    }
    e
}

fn min_eigenvalue(x: &[C], n: usize) -> f64 {
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (x[i * n + j] + x[j * n + i].conj()));
    m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Solves L(rho) = 0 with tr(rho) = 1 as L(x) + tr(x) I/D = I/D.
pub fn oracle_steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.dim;
    let minv = l.preconditioner();
    let h = d / 2;
    let r0 = 1.0 / d as f64;
    let rhs: Vec<C> = (0..d * d).map(|k| if k / d == k % d { C::new(r0, 0.0) } else { ZERO }).collect();
    let apply = |x: &[C], out: &mut [C]| {
        l.apply(x, out);
        let t = trace(x, d) * r0;
        for i in 0..d {
            out[i * d + i] += t;
        }
    };
    let prec = |x: &[C], out: &mut [C]| {
        let at = |s: usize, f: usize, sp: usize, fp: usize| (s * h + f) * d + sp * h + fp;
        let cells: Vec<(usize, [C; 4])> = (0..h * h)
            .into_par_iter()
            .map(|p| {
                let (f, fp) = (p / h, p % h);
                let v = nalgebra::Vector4::new(x[at(0, f, 0, fp)], x[at(0, f, 1, fp)], x[at(1, f, 0, fp)], x[at(1, f, 1, fp)]);
                let y = minv[p] * v;
                (p, [y[0], y[1], y[2], y[3]])
            })
            .collect();
        for (p, y) in cells {
            let (f, fp) = (p / h, p % h);
            out[at(0, f, 0, fp)] = y[0];
            out[at(0, f, 1, fp)] = y[1];
            out[at(1, f, 0, fp)] = y[2];
            out[at(1, f, 1, fp)] = y[3];
        }
    };
    let sol = gmres::gmres(apply, prec, &rhs, 40, 6000, 1e-13);
    let tr = trace(&sol.x, d);
    if tr.norm() < 1e-300 {
        return Err(Error::Tolerance("oracle steady state has zero trace".into()));
    }
    let mut data: Vec<C> = sol.x.iter().map(|v| v / tr).collect();
    let herm = hermiticity_error(&data, d);
    if herm > 1e-8 {
        return Err(Error::Tolerance(format!("oracle steady state not Hermitian ({herm:e})")));
    }
    for i in 0..d {
        for j in 0..i {
            let m = 0.5 * (data[i * d + j] + data[j * d + i].conj());
            data[i * d + j] = m;
            data[j * d + i] = m.conj();
        }
        data[i * d + i] = C::new(data[i * d + i].re, 0.0);
    }
    let mut lr = vec![ZERO; d * d];
    l.apply(&data, &mut lr);
    let residual = lr.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if residual > 1e-10 {
        return Err(Error::Tolerance(format!(
            "oracle steady state residual {residual:e} after {} GMRES iterations",
            sol.iterations
        )));
    }
    Ok(DensityMatrix { dim: d, data, residual, gmres_iterations: sol.iterations })
}

/// Which two-time correlation to evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sandwich {
    /// <A^dag(tau) A(0)> / <A^dag A>.
    G1,
    /// <A^dag(0) B^dag B(tau) A(0)> / (<A^dag A> <B^dag B>).
    G2,
}

/// Partial trace of a full-space matrix over one bank.
fn trace_out(x: &[C], nb: usize, keep: Space) -> Vec<C> {
    let d = 2 * nb * nb;
    let r = 2 * nb;
    let full = |s: usize, fa: usize, fb: usize| s * nb * nb + fa * nb + fb;
    let mut out = vec![ZERO; r * r];
    for s in 0..2 {
        for sp in 0..2 {
            for f in 0..nb {
                for fp in 0..nb {
                    let mut acc = ZERO;
                    for q in 0..nb {
                        let (row, col) = match keep {
                            Space::AtomA => (full(s, f, q), full(sp, fp, q)),
                            _ => (full(s, q, f), full(sp, q, fp)),
                        };
                        acc += x[row * d + col];
                    }
                    out[(s * nb + f) * r + sp * nb + fp] = acc;
                }
            }
        }
    }
    out
}

/// Normalized two-time correlation at ascending delays `taus` (>= 0).
pub fn oracle_two_time(
    sys: &SystemDescriptor<f64>,
    basis: &FockBasis,
    rho: &DensityMatrix,
    which: Sandwich,
    taus: &[f64],
) -> Result<Vec<C>> {
    if taus.iter().any(|t| !(*t >= 0.0)) || taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("delays must be ascending and nonnegative".into()));
    }
    let full = build_liouvillian(sys, basis)?;
    let d = full.dim;
    let nb = basis.bank_dim();
    let a = full.collective_a();
    let b = full.collective_b();
    let n_a = rho.expect(&a.adjoint().mul(&a)).re;
    let n_b = rho.expect(&b.adjoint().mul(&b)).re;
    let mut arho = vec![ZERO; d * d];
    a.left_mul_acc(&rho.data, ONE, &mut arho);
    let (space, chi0, obs, norm) = match which {
        Sandwich::G1 => (Space::AtomA, trace_out(&arho, nb, Space::AtomA), None, n_a),
        Sandwich::G2 => {
            let mut sand = vec![ZERO; d * d];
            a.right_mul_adj(&arho, &mut sand);
            (Space::AtomB, trace_out(&sand, nb, Space::AtomB), Some(()), n_a * n_b)
        }
    };
    if norm < crate::correlations::DARK_THRESHOLD {
        return Err(Error::DarkSource { which: "oracle photon number", value: norm, threshold: crate::correlations::DARK_THRESHOLD });
    }
    let red = build_on(sys, basis, space)?;
    let observable = match which {
        Sandwich::G1 => red.collective_a().adjoint(),
        Sandwich::G2 => {
            let bb = red.collective_b();
            bb.adjoint().mul(&bb)
        }
    };
    let r = red.dim;
    let scale = red.heff.diagonal().iter().map(|v| v.norm()).fold(0.0, f64::max) * 2.0 + red.omega + red.gamma;
    let h_max = 0.05 / scale;
    let trace0 = trace(&chi0, r);
    let mut chi = chi0;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(taus.len());
    let mut k = [vec![ZERO; r * r], vec![ZERO; r * r], vec![ZERO; r * r], vec![ZERO; r * r]];
    let mut stage = vec![ZERO; r * r];
    for &tau in taus {
        let steps = ((tau - t) / h_max).ceil() as usize;
        if steps > 0 {
            let hs = (tau - t) / steps as f64;
            for _ in 0..steps {
                red.apply(&chi, &mut k[0]);
                for (s, (c, k0)) in stage.iter_mut().zip(chi.iter().zip(&k[0])) {
                    *s = c + k0 * (hs / 2.0);
                }
                red.apply(&stage, &mut k[1]);
                for (s, (c, k1)) in stage.iter_mut().zip(chi.iter().zip(&k[1])) {
                    *s = c + k1 * (hs / 2.0);
                }
                red.apply(&stage, &mut k[2]);
                for (s, (c, k2)) in stage.iter_mut().zip(chi.iter().zip(&k[2])) {
                    *s = c + k2 * hs;
                }
                red.apply(&stage, &mut k[3]);
                for (i, c) in chi.iter_mut().enumerate() {
                    *c += (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]) * (hs / 6.0);
                }
            }
            t = tau;
        }
        if obs.is_some() {
            // A rho A^dag stays a positive operator with conserved trace
            let tr = trace(&chi, r);
            let scale = trace0.norm();
            if (tr - trace0).norm() > 1e-8 * scale
                || hermiticity_error(&chi, r) > 1e-8 * scale
                || min_eigenvalue(&chi, r) < -1e-8 * scale
            {
                return Err(Error::Tolerance(format!("oracle sandwich lost trace, Hermiticity or positivity at tau = {tau}")));
            }
        }
        out.push(observable.trace_with(&chi) / norm);
    }
    Ok(out)
}

/// Steady state plus the handles needed to query it.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub sys: SystemDescriptor<f64>,
    pub basis: FockBasis,
    pub liouvillian: Liouvillian,
    pub rho: DensityMatrix,
}

impl Oracle {
    pub fn solve(sys: &SystemDescriptor<f64>, truncation: Truncation) -> Result<Self> {
        let basis = FockBasis::new(sys.n_modes(), truncation)?;
        let liouvillian = build_liouvillian(sys, &basis)?;
        let rho = oracle_steady_state(&liouvillian)?;
        Ok(Self { sys: sys.clone(), basis, liouvillian, rho })
    }

    pub fn expect(&self, x: &Csr) -> C {
        self.rho.expect(x)
    }

    pub fn sigma_z(&self) -> f64 {
        let sm = self.liouvillian.sigma_minus();
        let ee = sm.adjoint().mul(sm);
        2.0 * self.expect(&ee).re - 1.0
    }

    pub fn sigma_minus(&self) -> C {
        self.expect(self.liouvillian.sigma_minus())
    }

    pub fn collective_aa(&self) -> f64 {
        let a = self.liouvillian.collective_a();
        self.expect(&a.adjoint().mul(&a)).re
    }

    pub fn collective_bb(&self) -> f64 {
        let b = self.liouvillian.collective_b();
        self.expect(&b.adjoint().mul(&b)).re
    }

    /// <A^dag B^dag B A>.
    pub fn fourth_order(&self) -> C {
        let a = self.liouvillian.collective_a();
        let b = self.liouvillian.collective_b();
        let ba = b.mul(&a);
        self.expect(&ba.adjoint().mul(&ba))
    }

    pub fn g1(&self, taus: &[f64]) -> Result<Vec<C>> {
        oracle_two_time(&self.sys, &self.basis, &self.rho, Sandwich::G1, taus)
    }

    pub fn g2(&self, taus: &[f64]) -> Result<Vec<f64>> {
        let v = oracle_two_time(&self.sys, &self.basis, &self.rho, Sandwich::G2, taus)?;
        v.into_iter()
            .map(|z| {
                if z.im.abs() > 1e-9 * z.re.abs().max(1.0) {
                    Err(Error::Tolerance(format!("oracle g2 imaginary part {:e}", z.im)))
                } else {
                    Ok(z.re)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::bloch_steady_state;
    use crate::cascade::{build_two_filter_system, solve_steady_moments, Depth};
    use crate::config::{AtomParams, BankLabel, FilterBank, KappaRule, TwoFilterConfig};

    fn system(n: usize, omega: f64) -> SystemDescriptor<f64> {
        let atom = AtomParams::new(1.0, omega).unwrap();
        let bank = FilterBank::from_halfwidth(n, 1.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A).unwrap();
        build_two_filter_system(&TwoFilterConfig::auto(atom, bank).unwrap()).unwrap()
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(FockBasis::new(1, Truncation::PerMode(4)).unwrap().total_dim(), 50);
        assert_eq!(FockBasis::new(3, Truncation::PerBankTotal(3)).unwrap().total_dim(), 800);
        assert_eq!(FockBasis::new(3, Truncation::PerMode(1)).unwrap().n_modes(), 6);
        // 2 * 5^6 exceeds the bound
        assert!(matches!(
            FockBasis::new(3, Truncation::PerMode(4)),
            Err(Error::DimensionBound { dim: 31250, bound: DIMENSION_BOUND })
        ));
        assert!(matches!(FockBasis::new(40, Truncation::PerMode(4)), Err(Error::DimensionBound { .. })));
    }

    #[test]
    fn superoperator_preserves_trace() {
        let sys = system(0, 2.0);
        let basis = FockBasis::new(1, Truncation::PerMode(2)).unwrap();
        let l = build_liouvillian(&sys, &basis).unwrap();
        let m = l.to_dense().unwrap();
        let d = l.dim();
        // tr(L(x)) = 0 for every x: the row-sum over diagonal positions vanishes
        for k in 0..d * d {
            let s: C = (0..d).map(|i| m[(i * d + i, k)]).sum();
            assert!(s.norm() < 1e-12, "column {k}: {s}");
        }
        // and L maps Hermitian to Hermitian
        let x: Vec<C> = (0..d * d).map(|k| {
            let (i, j) = (k / d, k % d);
            if i == j { C::new(1.0 + i as f64, 0.0) } else { C::new((i + 2 * j) as f64, i as f64 - j as f64) }
        }).collect();
        let xh: Vec<C> = (0..d * d).map(|k| 0.5 * (x[k] + x[(k % d) * d + k / d].conj())).collect();
        let mut y = vec![ZERO; d * d];
        l.apply(&xh, &mut y);
        assert!(hermiticity_error(&y, d) < 1e-12);
    }

    #[test]
    fn atom_block_matches_bloch() {
        let la = atom_superoperator(1.0, 2.0);
        let s = bloch_steady_state(&AtomParams::new(1.0, 2.0).unwrap());
        // vec index 2s + s': rho_gg, <sigma_+>, <sigma_->, rho_ee
        let pe = 0.5 * (1.0 + s.s_z.re);
        let v = nalgebra::Vector4::new(C::new(1.0 - pe, 0.0), s.s_plus, s.s_minus, C::new(pe, 0.0));
        assert!((la * v).norm() < 1e-14);
    }

    #[test]
    fn undriven_steady_state_is_vacuum() {
        let sys = system(0, 0.0);
        let o = Oracle::solve(&sys, Truncation::PerMode(2)).unwrap();
        assert!((o.rho.data[0] - ONE).norm() < 1e-10);
        assert!(o.collective_aa() < 1e-12);
    }

    #[test]
    fn steady_state_matches_moments_single_mode() {
        let sys = system(0, 2.0);
        let o = Oracle::solve(&sys, Truncation::PerMode(4)).unwrap();
        assert!((o.rho.trace() - ONE).norm() < 1e-12);
        assert!(o.rho.hermiticity_error() < 1e-14);
        assert!(o.rho.min_eigenvalue() > -1e-10);
        assert!(o.rho.residual <= 1e-10);
        let bloch = bloch_steady_state(&AtomParams::new(1.0, 2.0).unwrap());
        assert!((o.sigma_z() - bloch.s_z.re).abs() < 1e-8);
        assert!((o.sigma_minus() - bloch.s_minus).norm() < 1e-8);
        let h = solve_steady_moments(&sys, Depth::Full);
        let aa = h.collective_aa().re;
        assert!((o.collective_aa() / aa - 1.0).abs() < 1e-4, "{} vs {aa}", o.collective_aa());
        let g2 = (h.level4_sum().unwrap() / (aa * h.collective_bb().unwrap().re)).re;
        let g2o = o.fourth_order().re / (o.collective_aa() * o.collective_bb());
        assert!((g2o / g2 - 1.0).abs() < 1e-3, "{g2o} vs {g2}");
    }

    #[test]
    fn two_time_matches_regression_single_mode() {
        let sys = system(0, 2.0);
        let o = Oracle::solve(&sys, Truncation::PerMode(4)).unwrap();
        let taus: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let h = solve_steady_moments(&sys, Depth::Full);
        let g2m = crate::correlations::g2_cross(&sys, &h, &taus).unwrap();
        let g2o = o.g2(&taus).unwrap();
        let g1m = crate::correlations::g1_filtered(&sys, &h, &taus, crate::correlations::G1Method::Numeric).unwrap();
        let g1o = o.g1(&taus).unwrap();
        let g2r = g2m.real().unwrap();
        let g1r = g1m.complex().unwrap();
        for i in 0..taus.len() {
            assert!((g2o[i] - g2r[i]).abs() < 2e-3 * g2r[i].abs().max(0.1), "tau {}: {} vs {}", taus[i], g2o[i], g2r[i]);
            assert!((g1o[i] - g1r[i]).norm() < 1e-3, "tau {}: {} vs {}", taus[i], g1o[i], g1r[i]);
        }
    }

    #[test]
    fn rejects_bad_delays() {
        let sys = system(0, 1.0);
        let o = Oracle::solve(&sys, Truncation::PerMode(1)).unwrap();
        assert!(o.g2(&[1.0, 0.5]).is_err());
        assert!(o.g1(&[-1.0]).is_err());
    }
}
