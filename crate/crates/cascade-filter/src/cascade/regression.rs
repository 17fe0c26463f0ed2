//! Quantum-regression propagation of the operator sets behind g1 and g2.
//!
//! Both sets are block-triangular: the atomic block drives the filter blocks
//! and nothing feeds back. The g2 observable sum_jk <b_j^dag b_k>(tau) is
//! split into independent 13-dimensional subsystems (one per pair j, k),
//! each propagated exactly with a cached matrix exponential per step size.

use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;

use super::hierarchy::{Depth, MomentHierarchy, Op};
use super::SystemDescriptor;
use crate::atom::{bloch_generator, rk4};
use crate::error::{Error, Result};
use crate::scalar::{cabs, czero, lit, re, to_f64, Cplx, Real};

/// Initial values and state for the first-order correlation
/// G(tau) = <dA^dag(tau) dA(0)>.
#[derive(Debug, Clone, PartialEq)]
pub struct G1State<T: Real> {
    /// <d sigma dA> as (sigma_-, sigma_+, sigma_z).
    pub sigma: Vector3<Cplx<T>>,
    /// <d a_j^dag dA>.
    pub x: Vec<Cplx<T>>,
}

/// State of the second-order regression set, each entry standing for
/// sum_pq <a_p^dag X a_q>.
#[derive(Debug, Clone, PartialEq)]
pub struct G2State<T: Real> {
    /// <A^dag A>, the constant that the atomic inhomogeneity multiplies.
    pub norm: Cplx<T>,
    pub sigma: Vector3<Cplx<T>>,
    pub b: Vec<Cplx<T>>,
    pub b_dag: Vec<Cplx<T>>,
    pub b_sigma: Vec<Vector3<Cplx<T>>>,
    pub b_dag_sigma: Vec<Vector3<Cplx<T>>>,
    /// <b_j^dag b_k>, row-major in (j, k).
    pub b_dag_b: Vec<Cplx<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegressionState<T: Real> {
    G1(G1State<T>),
    G2(G2State<T>),
}

impl<T: Real> G1State<T> {
    pub fn dim(&self) -> usize {
        3 + self.x.len()
    }

    /// G(tau) at this state: sum_j x_j.
    pub fn observable(&self) -> Cplx<T> {
        g1_sum(&self.x)
    }
}

impl<T: Real> G2State<T> {
    pub fn n_modes(&self) -> usize {
        self.b.len()
    }

    /// Dimension excluding the constant `norm`.
    pub fn dim(&self) -> usize {
        let n = self.n_modes();
        3 + 2 * n + 6 * n + n * n
    }

    /// sum_jk <b_j^dag b_k>.
    pub fn observable(&self) -> Cplx<T> {
        self.b_dag_b.iter().fold(czero(), |a, b| a + b)
    }

    fn to_vector(&self) -> DVector<Cplx<T>> {
        let mut v = Vec::with_capacity(1 + self.dim());
        v.push(self.norm);
        v.extend(self.sigma.iter());
        v.extend(&self.b);
        v.extend(&self.b_dag);
        for s in &self.b_sigma {
            v.extend(s.iter());
        }
        for s in &self.b_dag_sigma {
            v.extend(s.iter());
        }
        v.extend(&self.b_dag_b);
        DVector::from_vec(v)
    }

    fn from_vector(n: usize, v: &DVector<Cplx<T>>) -> Self {
        let v = v.as_slice();
        let take3 = |o: usize| Vector3::new(v[o], v[o + 1], v[o + 2]);
        let (ob, obd, obs, obds, obb) = (4, 4 + n, 4 + 2 * n, 4 + 5 * n, 4 + 8 * n);
        Self {
            norm: v[0],
            sigma: take3(1),
            b: v[ob..ob + n].to_vec(),
            b_dag: v[obd..obd + n].to_vec(),
            b_sigma: (0..n).map(|k| take3(obs + 3 * k)).collect(),
            b_dag_sigma: (0..n).map(|k| take3(obds + 3 * k)).collect(),
            b_dag_b: v[obb..obb + n * n].to_vec(),
        }
    }
}

impl<T: Real> RegressionState<T> {
    pub fn dim(&self) -> usize {
        match self {
            RegressionState::G1(s) => s.dim(),
            RegressionState::G2(s) => s.dim(),
        }
    }

    pub fn observable(&self) -> Cplx<T> {
        match self {
            RegressionState::G1(s) => s.observable(),
            RegressionState::G2(s) => s.observable(),
        }
    }
}

pub fn g1_sum<T: Real>(x: &[Cplx<T>]) -> Cplx<T> {
    x.iter().fold(czero(), |a, b| a + b)
}

/// Fluctuation initials <d sigma dA>, <d a_j^dag dA> from the steady state.
pub fn g1_initials<T: Real>(h: &MomentHierarchy<T>) -> G1State<T> {
    let n = h.n_modes();
    let a_tot = h.collective_a();
    let s = h.level0().to_vector();
    let mut sig = Vector3::new(czero::<T>(), czero(), czero());
    for k in 0..n {
        sig += h.moment_sigma(&[Op::A(k)]).expect("bank A solved");
    }
    let sigma = sig - s * a_tot;
    let x = (0..n)
        .map(|j| {
            let row = (0..n).fold(czero::<T>(), |acc, k| acc + h.moment(&[Op::Ad(j), Op::A(k)]).expect("bank A solved"));
            row - h.moment(&[Op::Ad(j)]).expect("bank A solved") * a_tot
        })
        .collect();
    G1State { sigma, x }
}

/// Initials sum_pq <a_p^dag X a_q> of the second-order set.
pub fn g2_initials<T: Real>(h: &MomentHierarchy<T>) -> G2State<T> {
    assert_eq!(h.depth(), Depth::Full, "g2 initials need the full hierarchy");
    let n = h.n_modes();
    let zero3 = Vector3::new(czero::<T>(), czero(), czero());
    let sandwich = |mid: Option<Op>| {
        let mut x = czero::<T>();
        let mut v = zero3;
        for p in 0..n {
            for q in 0..n {
                let m = match mid {
                    Some(op) => h.get(&[Op::Ad(p), op, Op::A(q)]),
                    None => h.get(&[Op::Ad(p), Op::A(q)]),
                }
                .expect("full hierarchy");
                x += m[0];
                v += Vector3::new(m[1], m[2], m[3]);
            }
        }
        (x, v)
    };
    let (norm, sigma) = sandwich(None);
    let (b, b_sigma): (Vec<_>, Vec<_>) = (0..n).map(|k| sandwich(Some(Op::B(k)))).unzip();
    let (b_dag, b_dag_sigma): (Vec<_>, Vec<_>) = (0..n).map(|j| sandwich(Some(Op::Bd(j)))).unzip();
    let b_dag_b = (0..n * n)
        .map(|i| h.level4_partial(i / n, i % n).expect("full hierarchy"))
        .collect();
    G2State { norm, sigma, b, b_dag, b_sigma, b_dag_sigma, b_dag_b }
}

/// Index layout of one (j, k) subsystem.
const N0: usize = 0;
const S: usize = 1;
const BK: usize = 4;
const BDJ: usize = 5;
const BSK: usize = 6;
const BDSJ: usize = 9;
const X: usize = 12;
const SUB: usize = 13;

struct Coeffs<T: Real> {
    m: nalgebra::Matrix3<Cplx<T>>,
    gamma: T,
    kappa: T,
}

impl<T: Real> Coeffs<T> {
    fn new(sys: &SystemDescriptor<T>) -> Self {
        Self { m: bloch_generator(&sys.atom).m_sigma, gamma: sys.gamma(), kappa: sys.kappa() }
    }

    fn put_m(&self, g: &mut DMatrix<Cplx<T>>, at: usize, shift: Cplx<T>) {
        for r in 0..3 {
            for c in 0..3 {
                g[(at + r, at + c)] = self.m[(r, c)];
            }
            g[(at + r, at + r)] -= shift;
        }
    }
}

/// Generator of the (j, k) subsystem
/// [norm, sigma, b_k, b_j^dag, b_k sigma, b_j^dag sigma, b_j^dag b_k].
fn g2_subsystem<T: Real>(c: &Coeffs<T>, sys: &SystemDescriptor<T>, j: usize, k: usize) -> DMatrix<Cplx<T>> {
    let mut g = DMatrix::from_element(SUB, SUB, czero::<T>());
    let half = re(lit::<T>(0.5));
    let gm = re(c.gamma);
    let (ek, ejc) = (sys.couplings[k], sys.couplings[j].conj());
    let (wk, wj) = (sys.detunings_b[k], sys.detunings_b[j]);
    let lk = Cplx::new(c.kappa, wk);
    let lj = Cplx::new(c.kappa, -wj);

    c.put_m(&mut g, S, czero());
    g[(S + 2, N0)] = -gm;

    g[(BK, BK)] = -lk;
    g[(BK, S)] = -ek;
    g[(BDJ, BDJ)] = -lj;
    g[(BDJ, S + 1)] = -ejc;

    c.put_m(&mut g, BSK, lk);
    g[(BSK + 2, BK)] -= gm;
    g[(BSK + 1, N0)] -= ek * half;
    g[(BSK + 1, S + 2)] -= ek * half;
    g[(BSK + 2, S)] += ek;

    c.put_m(&mut g, BDSJ, lj);
    g[(BDSJ + 2, BDJ)] -= gm;
    g[(BDSJ, N0)] -= ejc * half;
    g[(BDSJ, S + 2)] -= ejc * half;
    g[(BDSJ + 2, S + 1)] += ejc;

    g[(X, X)] = -(lk + lj);
    g[(X, BSK + 1)] = -ejc;
    g[(X, BDSJ)] = -ek;
    g
}

fn g2_sub_initial<T: Real>(st: &G2State<T>, j: usize, k: usize) -> DVector<Cplx<T>> {
    let n = st.n_modes();
    let mut v = DVector::from_element(SUB, czero::<T>());
    v[N0] = st.norm;
    for r in 0..3 {
        v[S + r] = st.sigma[r];
        v[BSK + r] = st.b_sigma[k][r];
        v[BDSJ + r] = st.b_dag_sigma[j][r];
    }
    v[BK] = st.b[k];
    v[BDJ] = st.b_dag[j];
    v[X] = st.b_dag_b[j * n + k];
    v
}

/// Generator of the per-mode g1 subsystem [d sigma, x_j].
fn g1_subsystem<T: Real>(c: &Coeffs<T>, sys: &SystemDescriptor<T>, j: usize) -> DMatrix<Cplx<T>> {
    let mut g = DMatrix::from_element(4, 4, czero::<T>());
    c.put_m(&mut g, 0, czero());
    g[(3, 3)] = -Cplx::new(c.kappa, -sys.detunings_a[j]);
    g[(3, 1)] = -sys.couplings[j].conj();
    g
}

/// Propagates x' = G x across `taus` by exact steps, reusing the exponential
/// for steps that agree to rounding.
fn propagate<T: Real>(g: &DMatrix<Cplx<T>>, x0: DVector<Cplx<T>>, taus: &[T], mut record: impl FnMut(usize, &DVector<Cplx<T>>)) {
    let mut cache: Vec<(T, DMatrix<Cplx<T>>)> = Vec::new();
    let mut x = x0;
    let mut t_prev = T::zero();
    for (i, &t) in taus.iter().enumerate() {
        let h = t - t_prev;
        if h > T::zero() {
            let tol = lit::<T>(1e-13) * h.max(T::one());
            let pos = cache.iter().position(|(hc, _)| (*hc - h).abs() <= tol);
            let idx = match pos {
                Some(p) => p,
                None => {
                    cache.push((h, (g * re(h)).exp()));
                    cache.len() - 1
                }
            };
            x = &cache[idx].1 * x;
        }
        t_prev = t;
        record(i, &x);
    }
}

fn check_grid<T: Real>(taus: &[T]) -> Result<()> {
    if taus.first().is_some_and(|t| *t < T::zero()) || taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("tau grid must be nondecreasing and start at tau >= 0".into()));
    }
    Ok(())
}

/// Designated observable along `taus`: G(tau) for the g1 set and
/// sum_jk <b_j^dag b_k>(tau) for the g2 set.
pub fn regression_evolve<T: Real>(sys: &SystemDescriptor<T>, state: &RegressionState<T>, taus: &[T]) -> Result<Vec<Cplx<T>>> {
    check_grid(taus)?;
    let c = Coeffs::new(sys);
    let n = sys.n_modes();
    let parts: Vec<Vec<Cplx<T>>> = match state {
        RegressionState::G1(st) => (0..n)
            .into_par_iter()
            .map(|j| {
                let mut out = vec![czero::<T>(); taus.len()];
                let x0 = DVector::from_vec(vec![st.sigma[0], st.sigma[1], st.sigma[2], st.x[j]]);
                propagate(&g1_subsystem(&c, sys, j), x0, taus, |i, x| out[i] = x[3]);
                out
            })
            .collect(),
        RegressionState::G2(st) => (0..n * n)
            .into_par_iter()
            .map(|p| {
                let (j, k) = (p / n, p % n);
                let mut out = vec![czero::<T>(); taus.len()];
                propagate(&g2_subsystem(&c, sys, j, k), g2_sub_initial(st, j, k), taus, |i, x| out[i] = x[X]);
                out
            })
            .collect(),
    };
    let mut total = vec![czero::<T>(); taus.len()];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    Ok(total)
}

/// Full g2 state at a single delay, assembled from the exact subsystems.
pub fn regression_evolve_state<T: Real>(sys: &SystemDescriptor<T>, st: &G2State<T>, tau: T) -> G2State<T> {
    let c = Coeffs::new(sys);
    let n = sys.n_modes();
    let evolved: Vec<DVector<Cplx<T>>> = (0..n * n)
        .into_par_iter()
        .map(|p| {
            let (j, k) = (p / n, p % n);
            (g2_subsystem(&c, sys, j, k) * re(tau)).exp() * g2_sub_initial(st, j, k)
        })
        .collect();
    let at = |j: usize, k: usize| &evolved[j * n + k];
    let three = |v: &DVector<Cplx<T>>, o: usize| Vector3::new(v[o], v[o + 1], v[o + 2]);
    G2State {
        norm: st.norm,
        sigma: three(at(0, 0), S),
        b: (0..n).map(|k| at(0, k)[BK]).collect(),
        b_dag: (0..n).map(|j| at(j, 0)[BDJ]).collect(),
        b_sigma: (0..n).map(|k| three(at(0, k), BSK)).collect(),
        b_dag_sigma: (0..n).map(|j| three(at(j, 0), BDSJ)).collect(),
        b_dag_b: evolved.iter().map(|v| v[X]).collect(),
    }
}

fn g2_rhs<T: Real>(c: &Coeffs<T>, sys: &SystemDescriptor<T>, st: &G2State<T>) -> G2State<T> {
    let n = st.n_modes();
    let half = lit::<T>(0.5);
    let gm = re(c.gamma);
    let zero = czero::<T>();
    let shifted = |v: &Vector3<Cplx<T>>, l: Cplx<T>| c.m * v - v * l;
    let sigma = c.m * st.sigma + Vector3::new(zero, zero, -gm * st.norm);
    let pair = (st.norm + st.sigma[2]) * half;
    let mut out = G2State {
        norm: zero,
        sigma,
        b: vec![zero; n],
        b_dag: vec![zero; n],
        b_sigma: vec![Vector3::zeros(); n],
        b_dag_sigma: vec![Vector3::zeros(); n],
        b_dag_b: vec![zero; n * n],
    };
    for k in 0..n {
        let (e, ec) = (sys.couplings[k], sys.couplings[k].conj());
        let l = Cplx::new(c.kappa, sys.detunings_b[k]);
        let ld = Cplx::new(c.kappa, -sys.detunings_b[k]);
        out.b[k] = -l * st.b[k] - e * st.sigma[0];
        out.b_dag[k] = -ld * st.b_dag[k] - ec * st.sigma[1];
        out.b_sigma[k] = shifted(&st.b_sigma[k], l)
            + Vector3::new(zero, -e * pair, -gm * st.b[k] + e * st.sigma[0]);
        out.b_dag_sigma[k] = shifted(&st.b_dag_sigma[k], ld)
            + Vector3::new(-ec * pair, zero, -gm * st.b_dag[k] + ec * st.sigma[1]);
    }
    for j in 0..n {
        for k in 0..n {
            let l = Cplx::new(lit::<T>(2.0) * c.kappa, sys.detunings_b[k] - sys.detunings_b[j]);
            out.b_dag_b[j * n + k] = -l * st.b_dag_b[j * n + k]
                - sys.couplings[j].conj() * st.b_sigma[k][1]
                - sys.couplings[k] * st.b_dag_sigma[j][0];
        }
    }
    out
}

fn rk4_step_limit<T: Real>(sys: &SystemDescriptor<T>) -> T {
    let fast = sys.dominant_rate().max(lit::<T>(2.0) * sys.kappa());
    (lit::<T>(0.01) / sys.gamma()).min(lit::<T>(0.02) / fast)
}

/// Same observable as [`regression_evolve`] by classical RK4 on the whole set.
pub fn regression_evolve_rk4<T: Real>(sys: &SystemDescriptor<T>, state: &RegressionState<T>, taus: &[T]) -> Result<Vec<Cplx<T>>> {
    check_grid(taus)?;
    let c = Coeffs::new(sys);
    let h_max = rk4_step_limit(sys);
    let n = sys.n_modes();
    let mut out = Vec::with_capacity(taus.len());
    let mut t_prev = T::zero();
    match state {
        RegressionState::G1(st) => {
            let mut v: Vec<Cplx<T>> = st.sigma.iter().copied().chain(st.x.iter().copied()).collect();
            let f = |v: &DVector<Cplx<T>>| {
                let s = Vector3::new(v[0], v[1], v[2]);
                let ds = c.m * s;
                let mut d = DVector::from_element(v.len(), czero::<T>());
                d[0] = ds[0];
                d[1] = ds[1];
                d[2] = ds[2];
                for j in 0..n {
                    d[3 + j] = -Cplx::new(c.kappa, -sys.detunings_a[j]) * v[3 + j] - sys.couplings[j].conj() * v[1];
                }
                d
            };
            for &t in taus {
                let x = rk4(&f, DVector::from_vec(v), t - t_prev, h_max);
                out.push(g1_sum(&x.as_slice()[3..]));
                v = x.as_slice().to_vec();
                t_prev = t;
            }
        }
        RegressionState::G2(st) => {
            let mut v = st.to_vector();
            let f = |v: &DVector<Cplx<T>>| g2_rhs(&c, sys, &G2State::from_vector(n, v)).to_vector();
            for &t in taus {
                v = rk4(&f, v, t - t_prev, h_max);
                out.push(G2State::from_vector(n, &v).observable());
                t_prev = t;
            }
        }
    }
    Ok(out)
}

/// Exact propagation, cross-checked against RK4; fails with a tolerance
/// error if the two differ by more than `1e-5` relative to the series scale.
pub fn regression_evolve_checked<T: Real>(
    sys: &SystemDescriptor<T>,
    state: &RegressionState<T>,
    taus: &[T],
) -> Result<Vec<Cplx<T>>> {
    let exact = regression_evolve(sys, state, taus)?;
    let check = regression_evolve_rk4(sys, state, taus)?;
    let scale = exact.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
    let dev = exact.iter().zip(&check).fold(T::zero(), |a, (x, y)| a.max(cabs(*x - *y)));
    let rel = if scale > T::zero() { dev / scale } else { dev };
    if rel > lit::<T>(1e-5) {
        return Err(Error::Tolerance(format!("regression propagators disagree by {:.3e}", to_f64(rel))));
    }
    Ok(exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{build_two_filter_system, solve_steady_moments};
    use crate::config::{AtomParams, BankLabel, FilterBank, KappaRule, TwoFilterConfig};

    fn system(n: usize, omega: f64, k: f64, ca: f64, cb: f64) -> SystemDescriptor<f64> {
        let atom = AtomParams::new(1.0, omega).unwrap();
        let a = FilterBank::from_halfwidth(n, k, 1, ca, KappaRule::Overlapping, BankLabel::A).unwrap();
        let cfg = TwoFilterConfig::new(atom, a, a.with_center(cb).with_label(BankLabel::B)).unwrap();
        build_two_filter_system(&cfg).unwrap()
    }

    fn grid(t: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn dimensions() {
        let sys = system(2, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        assert_eq!(g1_initials(&h).dim(), 3 + 5);
        assert_eq!(RegressionState::G2(g2_initials(&h)).dim(), 3 + 10 + 30 + 25);
    }

    #[test]
    fn exact_and_rk4_agree() {
        let sys = system(1, 2.5, 1.5, 1.0, -0.5);
        let h = solve_steady_moments(&sys, Depth::Full);
        let taus = grid(4.0, 41);
        for st in [RegressionState::G1(g1_initials(&h)), RegressionState::G2(g2_initials(&h))] {
            let a = regression_evolve(&sys, &st, &taus).unwrap();
            let b = regression_evolve_rk4(&sys, &st, &taus).unwrap();
            let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() <= 1e-7 * scale, "{x} {y}");
            }
            assert!(regression_evolve_checked(&sys, &st, &taus).is_ok());
        }
    }

    #[test]
    fn zero_delay_is_the_initial_value() {
        let sys = system(1, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        let st = g2_initials(&h);
        let v = regression_evolve(&sys, &RegressionState::G2(st.clone()), &[0.0]).unwrap();
        assert_eq!(v[0], st.observable());
        assert_eq!(v[0], h.level4_sum().unwrap());
    }

    #[test]
    fn long_delay_factorizes() {
        let sys = system(1, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        let v = regression_evolve(&sys, &RegressionState::G2(g2_initials(&h)), &[0.0, 40.0, 80.0]).unwrap();
        let want = h.collective_aa() * h.collective_bb().unwrap();
        assert!((v[2] - want).norm() < 1e-10 * want.norm());
        let g = regression_evolve(&sys, &RegressionState::G1(g1_initials(&h)), &[0.0, 40.0]).unwrap();
        assert!(g[1].norm() < 1e-10);
    }

    #[test]
    fn dark_atom_filter_amplitudes_decay_freely() {
        let sys = system(1, 0.0, 1.0, 0.7, -0.3);
        let st = G2State {
            norm: czero(),
            sigma: Vector3::zeros(),
            b: vec![Cplx::new(1.0, 0.5), Cplx::new(-0.2, 0.1), Cplx::new(0.3, -0.8)],
            b_dag: vec![czero(); 3],
            b_sigma: vec![Vector3::zeros(); 3],
            b_dag_sigma: vec![Vector3::zeros(); 3],
            b_dag_b: vec![czero(); 9],
        };
        let tau = 1.3;
        let out = regression_evolve_state(&sys, &st, tau);
        for k in 0..3 {
            let want = st.b[k] * Cplx::new(-sys.kappa() * tau, -sys.detunings_b[k] * tau).exp();
            assert!((out.b[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn state_evolution_matches_observable_series() {
        let sys = system(1, 3.0, 2.0, 1.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::Full);
        let st = g2_initials(&h);
        let series = regression_evolve(&sys, &RegressionState::G2(st.clone()), &[0.0, 0.7]).unwrap();
        let at = regression_evolve_state(&sys, &st, 0.7);
        assert!((at.observable() - series[1]).norm() < 1e-12);
        let n = st.n_modes();
        for j in 0..n {
            for k in 0..n {
                assert!((st.b_dag_b[j * n + k] - st.b_dag_b[k * n + j].conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_decreasing_grid() {
        let sys = system(0, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&sys, Depth::BankA);
        let st = RegressionState::G1(g1_initials(&h));
        assert!(regression_evolve(&sys, &st, &[0.0, 1.0, 0.5]).is_err());
    }
}
