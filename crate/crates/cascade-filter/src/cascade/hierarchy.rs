//! Steady-state solution of the moment hierarchy.
//!
//! A moment is a normally ordered product of at most one operator from each
//! slot a_j^dag, b_k^dag, b_l, a_m, optionally followed by sigma_-, sigma_+ or
//! sigma_z. Moments sharing the same set of slots form a family, addressed by
//! a bit mask over the slots and stored densely in row-major index order.
//!
//! For X with creation operators c and annihilation operators a:
//!
//!   d<X>/dt      = -lambda <X> - sum_c E_c^* <X\c sigma_+> - sum_a E_a <X\a sigma_->
//!   d<X sig>/dt  = (M - lambda) <X sig> + B <X>
//!                  - sum_c E_c^* <X\c sigma_+ sig> - sum_a E_a <X\a sig sigma_->
//!
//! with lambda the sum of kappa - i Dw over creation and kappa + i Dw over
//! annihilation operators, and the Pauli products reduced with
//! sigma_+ sigma_- = (1 + sigma_z)/2, sigma_+ sigma_z = -sigma_+, sigma_z sigma_- = -sigma_-.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use super::SystemDescriptor;
use crate::atom::{bloch_generator, bloch_steady_state, BlochState};
use crate::scalar::{cone, czero, lit, Cplx, Real};

/// <X>, <X sigma_->, <X sigma_+>, <X sigma_z>.
pub type Mom<T> = [Cplx<T>; 4];

/// A filter operator in a normally ordered product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Ad(usize),
    Bd(usize),
    B(usize),
    A(usize),
}

impl Op {
    fn slot(self) -> usize {
        match self {
            Op::Ad(_) => 0,
            Op::Bd(_) => 1,
            Op::B(_) => 2,
            Op::A(_) => 3,
        }
    }

    fn index(self) -> usize {
        match self {
            Op::Ad(j) | Op::Bd(j) | Op::B(j) | Op::A(j) => j,
        }
    }
}

pub(crate) const AD: u8 = 1;
pub(crate) const BD: u8 = 2;
pub(crate) const B: u8 = 4;
pub(crate) const A: u8 = 8;
const FULL: u8 = AD | BD | B | A;

/// How much of the hierarchy to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Moments of bank A up to <a_j^dag a_k sigma>: enough for g1, spectra and intensities.
    BankA,
    /// Every family through third order with sigma, plus the streamed fourth-order sums.
    Full,
}

/// Solved steady-state moments, immutable once built.
#[derive(Debug, Clone)]
pub struct MomentHierarchy<T: Real> {
    n: usize,
    depth: Depth,
    families: Vec<Vec<Mom<T>>>,
    /// Sum over (p, q) of <a_p^dag b_j^dag b_k a_q>, row-major in (j, k).
    level4_partial: Vec<Cplx<T>>,
    level4_sum: Option<Cplx<T>>,
}

pub(crate) struct Engine<T: Real> {
    n: usize,
    m: Matrix3<Cplx<T>>,
    bz: Cplx<T>,
    shift: [Vec<Cplx<T>>; 4],
    e: Vec<Cplx<T>>,
}

impl<T: Real> Engine<T> {
    pub(crate) fn new(sys: &SystemDescriptor<T>) -> Self {
        let gen = bloch_generator(&sys.atom);
        let k = sys.kappa();
        let cre = |d: &Vec<T>| d.iter().map(|&w| Cplx::new(k, -w)).collect::<Vec<_>>();
        let ann = |d: &Vec<T>| d.iter().map(|&w| Cplx::new(k, w)).collect::<Vec<_>>();
        Self {
            n: sys.n_modes(),
            m: gen.m_sigma,
            bz: gen.b_vec[2],
            shift: [cre(&sys.detunings_a), cre(&sys.detunings_b), ann(&sys.detunings_b), ann(&sys.detunings_a)],
            e: sys.couplings.clone(),
        }
    }

    pub(crate) fn flat(&self, mask: u8, ids: &[usize; 4]) -> usize {
        let mut idx = 0;
        for s in 0..4 {
            if mask & (1 << s) != 0 {
                idx = idx * self.n + ids[s];
            }
        }
        idx
    }

    fn decode(&self, mask: u8, mut idx: usize) -> [usize; 4] {
        let mut ids = [0; 4];
        for s in (0..4).rev() {
            if mask & (1 << s) != 0 {
                ids[s] = idx % self.n;
                idx /= self.n;
            }
        }
        ids
    }

    /// Steady state of one moment given every lower family.
    fn cell(&self, fams: &[Vec<Mom<T>>], mask: u8, ids: &[usize; 4], with_sigma: bool) -> Mom<T> {
        let half = lit::<T>(0.5);
        let mut lam = czero::<T>();
        let mut s0 = czero::<T>();
        let mut sv = Vector3::new(czero::<T>(), czero(), czero());
        for s in 0..4 {
            if mask & (1 << s) == 0 {
                continue;
            }
            lam += self.shift[s][ids[s]];
            let lower = mask & !(1 << s);
            let y = &fams[lower as usize][self.flat(lower, ids)];
            let pair = (y[0] + y[3]) * half;
            if s < 2 {
                let c = -self.e[ids[s]].conj();
                s0 += c * y[2];
                if with_sigma {
                    sv[0] += c * pair;
                    sv[2] -= c * y[2];
                }
            } else {
                let c = -self.e[ids[s]];
                s0 += c * y[1];
                if with_sigma {
                    sv[1] += c * pair;
                    sv[2] -= c * y[1];
                }
            }
        }
        let x0 = s0 / lam;
        if !with_sigma {
            return [x0, czero(), czero(), czero()];
        }
        sv[2] += self.bz * x0;
        let v = solve_shifted(&self.m, lam, &(-sv));
        [x0, v[0], v[1], v[2]]
    }

    fn solve_family(&self, fams: &[Vec<Mom<T>>], mask: u8) -> Vec<Mom<T>> {
        let len = self.n.pow(mask.count_ones());
        (0..len)
            .into_par_iter()
            .map(|i| self.cell(fams, mask, &self.decode(mask, i), true))
            .collect()
    }

    /// Fourth-order partial sums over the outer (a^dag, a) indices.
    fn fourth_partials(&self, fams: &[Vec<Mom<T>>]) -> Vec<Cplx<T>> {
        let n = self.n;
        let per_j: Vec<Vec<Cplx<T>>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut acc = vec![czero::<T>(); n * n];
                for k in 0..n {
                    for l in 0..n {
                        let mut s = czero::<T>();
                        for m in 0..n {
                            s += self.cell(fams, FULL, &[j, k, l, m], false)[0];
                        }
                        acc[k * n + l] = s;
                    }
                }
                acc
            })
            .collect();
        // sequential reduction keeps the result independent of scheduling
        let mut out = vec![czero::<T>(); n * n];
        for part in per_j {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }
}

/// Solves (M - lam I) v = rhs by cofactor expansion.
pub(crate) fn solve_shifted<T: Real>(m: &Matrix3<Cplx<T>>, lam: Cplx<T>, rhs: &Vector3<Cplx<T>>) -> Vector3<Cplx<T>> {
    let mut a = *m;
    for i in 0..3 {
        a[(i, i)] -= lam;
    }
    let c00 = a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)];
    let c01 = a[(1, 2)] * a[(2, 0)] - a[(1, 0)] * a[(2, 2)];
    let c02 = a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)];
    let det = a[(0, 0)] * c00 + a[(0, 1)] * c01 + a[(0, 2)] * c02;
    let c10 = a[(0, 2)] * a[(2, 1)] - a[(0, 1)] * a[(2, 2)];
    let c11 = a[(0, 0)] * a[(2, 2)] - a[(0, 2)] * a[(2, 0)];
    let c12 = a[(0, 1)] * a[(2, 0)] - a[(0, 0)] * a[(2, 1)];
    let c20 = a[(0, 1)] * a[(1, 2)] - a[(0, 2)] * a[(1, 1)];
    let c21 = a[(0, 2)] * a[(1, 0)] - a[(0, 0)] * a[(1, 2)];
    let c22 = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    // inverse = adjugate / det, adjugate = cofactor^T
    Vector3::new(
        (c00 * rhs[0] + c10 * rhs[1] + c20 * rhs[2]) / det,
        (c01 * rhs[0] + c11 * rhs[1] + c21 * rhs[2]) / det,
        (c02 * rhs[0] + c12 * rhs[1] + c22 * rhs[2]) / det,
    )
}

fn masks_for(depth: Depth) -> Vec<u8> {
    let mut masks: Vec<u8> = match depth {
        Depth::BankA => vec![AD, A, AD | A],
        Depth::Full => (1..FULL).collect(),
    };
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Solves the hierarchy level by level.
pub fn solve_steady_moments<T: Real>(sys: &SystemDescriptor<T>, depth: Depth) -> MomentHierarchy<T> {
    let eng = Engine::new(sys);
    let s = bloch_steady_state(&sys.atom);
    let mut fams: Vec<Vec<Mom<T>>> = vec![Vec::new(); 16];
    fams[0] = vec![[cone(), s.s_minus, s.s_plus, s.s_z]];
    for mask in masks_for(depth) {
        let f = eng.solve_family(&fams, mask);
        fams[mask as usize] = f;
    }
    let (level4_partial, level4_sum) = match depth {
        Depth::BankA => (Vec::new(), None),
        Depth::Full => {
            let p = eng.fourth_partials(&fams);
            let total = p.iter().fold(czero::<T>(), |a, b| a + b);
            (p, Some(total))
        }
    };
    MomentHierarchy { n: sys.n_modes(), depth, families: fams, level4_partial, level4_sum }
}

/// Sum over all (j, k, l, m) of <a_j^dag b_k^dag b_l a_m>, streamed without
/// storing the four-index tensor.
pub fn accumulate_fourth_order<T: Real>(sys: &SystemDescriptor<T>, h: &MomentHierarchy<T>) -> Cplx<T> {
    assert_eq!(h.depth, Depth::Full, "fourth order needs the full hierarchy");
    let eng = Engine::new(sys);
    let n = eng.n;
    let per_j: Vec<Cplx<T>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut s = czero::<T>();
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        s += eng.cell(&h.families, FULL, &[j, k, l, m], false)[0];
                    }
                }
            }
            s
        })
        .collect();
    per_j.into_iter().fold(czero(), |a, b| a + b)
}

impl<T: Real> MomentHierarchy<T> {
    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn level0(&self) -> BlochState<T> {
        let f = &self.families[0][0];
        BlochState { s_minus: f[1], s_plus: f[2], s_z: f[3] }
    }

    fn locate(&self, ops: &[Op]) -> Option<(u8, usize)> {
        let mut mask = 0u8;
        let mut ids = [0usize; 4];
        for op in ops {
            let s = op.slot();
            if mask & (1 << s) != 0 || op.index() >= self.n {
                return None;
            }
            mask |= 1 << s;
            ids[s] = op.index();
        }
        let fam = self.families.get(mask as usize)?;
        if fam.is_empty() {
            return None;
        }
        let mut idx = 0;
        for (s, id) in ids.iter().enumerate() {
            if mask & (1 << s) != 0 {
                idx = idx * self.n + id;
            }
        }
        Some((mask, idx))
    }

    /// Moment of the normally ordered product of `ops` (creation operators to
    /// the left), with and without each trailing atomic operator.
    pub fn get(&self, ops: &[Op]) -> Option<Mom<T>> {
        self.locate(ops).map(|(m, i)| self.families[m as usize][i])
    }

    pub fn moment(&self, ops: &[Op]) -> Option<Cplx<T>> {
        self.get(ops).map(|m| m[0])
    }

    /// (<X sigma_->, <X sigma_+>, <X sigma_z>).
    pub fn moment_sigma(&self, ops: &[Op]) -> Option<Vector3<Cplx<T>>> {
        self.get(ops).map(|m| Vector3::new(m[1], m[2], m[3]))
    }

    pub(crate) fn family(&self, mask: u8) -> &[Mom<T>] {
        &self.families[mask as usize]
    }

    /// <A^dag A> = sum_jk <a_j^dag a_k>.
    pub fn collective_aa(&self) -> Cplx<T> {
        self.family(AD | A).iter().fold(czero(), |s, m| s + m[0])
    }

    /// <B^dag B>; requires the full hierarchy.
    pub fn collective_bb(&self) -> Option<Cplx<T>> {
        let f = self.family(BD | B);
        (!f.is_empty()).then(|| f.iter().fold(czero(), |s, m| s + m[0]))
    }

    /// <A>.
    pub fn collective_a(&self) -> Cplx<T> {
        self.family(A).iter().fold(czero(), |s, m| s + m[0])
    }

    /// <A^dag B^dag B A>.
    pub fn level4_sum(&self) -> Option<Cplx<T>> {
        self.level4_sum
    }

    /// Sum over (p, q) of <a_p^dag b_j^dag b_k a_q>.
    pub fn level4_partial(&self, j: usize, k: usize) -> Option<Cplx<T>> {
        self.level4_partial.get(j * self.n + k).copied()
    }

    /// Hermitian matrix <x_j^dag x_k> for bank A (`true`) or B.
    pub fn number_matrix(&self, bank_a: bool) -> Option<nalgebra::DMatrix<Cplx<T>>> {
        let f = self.family(if bank_a { AD | A } else { BD | B });
        if f.is_empty() {
            return None;
        }
        Some(nalgebra::DMatrix::from_fn(self.n, self.n, |j, k| f[j * self.n + k][0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::build_two_filter_system;
    use crate::scalar::re;
    use crate::config::{AtomParams, BankLabel, FilterBank, KappaRule, TwoFilterConfig};

    fn system(n: usize, omega: f64, k: f64, ca: f64, cb: f64) -> SystemDescriptor<f64> {
        let atom = AtomParams::new(1.0, omega).unwrap();
        let a = FilterBank::from_halfwidth(n, k, 1, ca, KappaRule::Overlapping, BankLabel::A).unwrap();
        let cfg = TwoFilterConfig::new(atom, a, a.with_center(cb).with_label(BankLabel::B)).unwrap();
        build_two_filter_system(&cfg).unwrap()
    }

    #[test]
    fn shifted_solve_matches_lu() {
        let sys = system(1, 2.3, 1.0, 0.0, 0.0);
        let eng = Engine::new(&sys);
        let lam = Cplx::new(1.7, -0.4);
        let rhs = Vector3::new(Cplx::new(1.0, 2.0), Cplx::new(-0.5, 0.1), Cplx::new(0.3, -0.9));
        let v = solve_shifted(&eng.m, lam, &rhs);
        let mut a = eng.m;
        for i in 0..3 {
            a[(i, i)] -= lam;
        }
        assert!((a * v - rhs).norm() < 1e-14);
    }

    #[test]
    fn dark_atom_has_no_photons() {
        let sys = system(1, 0.0, 1.0, 0.3, -0.2);
        let h = solve_steady_moments(&sys, Depth::Full);
        assert!((h.level0().s_z - re(-1.0)).norm() < 1e-15);
        for mask in 1..FULL {
            for m in h.family(mask) {
                assert!(m[0].norm() < 1e-15 && m[1].norm() < 1e-15 && m[2].norm() < 1e-15);
            }
        }
        assert_eq!(h.level4_sum().unwrap(), czero());
        assert_eq!(accumulate_fourth_order(&sys, &h), czero());
    }

    #[test]
    fn reference_single_mode_values() {
        // independent prototype values at gamma = 1, Omega = 2, K = 1, N = 0
        let sys = system(0, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        assert!((h.collective_aa().re - 0.1375661375661376).abs() < 1e-14);
        assert!((h.level4_sum().unwrap().re - 0.014071371973373353).abs() < 1e-15);
        let g2 = h.level4_sum().unwrap().re / (h.collective_aa().re * h.collective_bb().unwrap().re);
        assert!((g2 - 0.7435554412143038).abs() < 1e-13);
        assert!((h.collective_a() - Cplx::new(0.0, 0.15713484)).norm() < 1e-8);
    }

    #[test]
    fn reference_three_mode_values() {
        let sys = system(1, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        assert!((h.collective_aa().re - 0.016032574553160674).abs() < 1e-14);
        let g2 = h.level4_sum().unwrap().re / (h.collective_aa().re * h.collective_bb().unwrap().re);
        assert!((g2 - 0.07061242587347322).abs() < 1e-12);
        let nm = h.number_matrix(true).unwrap();
        for (j, want) in [0.0228258, 0.0248616, 0.0228258].iter().enumerate() {
            assert!((nm[(j, j)].re - want).abs() < 1e-7);
        }
    }

    #[test]
    fn streamed_sum_equals_partials() {
        let sys = system(2, 3.0, 2.0, 1.0, -0.5);
        let h = solve_steady_moments(&sys, Depth::Full);
        let s = accumulate_fourth_order(&sys, &h);
        assert!((s - h.level4_sum().unwrap()).norm() < 1e-14 * s.norm());
        assert!(s.re > 0.0 && s.im.abs() <= 1e-9 * s.re);
    }

    #[test]
    fn bank_a_depth_matches_full() {
        let sys = system(2, 3.0, 2.0, 1.0, -0.5);
        let full = solve_steady_moments(&sys, Depth::Full);
        let part = solve_steady_moments(&sys, Depth::BankA);
        assert_eq!(full.collective_aa(), part.collective_aa());
        assert!(part.collective_bb().is_none());
        assert!(part.moment(&[Op::B(0)]).is_none());
    }

    #[test]
    fn accessors_follow_normal_order() {
        let sys = system(1, 2.0, 1.0, 0.4, -0.7);
        let h = solve_steady_moments(&sys, Depth::Full);
        let x = h.moment(&[Op::Ad(0), Op::B(2), Op::A(1)]).unwrap();
        let y = h.moment(&[Op::A(1), Op::B(2), Op::Ad(0)]).unwrap();
        assert_eq!(x, y);
        assert!(h.moment(&[Op::A(0), Op::A(1)]).is_none());
        assert!(h.moment(&[Op::A(3)]).is_none());
        let a = h.moment(&[Op::A(2)]).unwrap();
        let ad = h.moment(&[Op::Ad(2)]).unwrap();
        assert!((a.conj() - ad).norm() < 1e-15);
    }
}
