//! Optical Bloch equations and the dressed-state (secular) closed forms.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;

use crate::config::AtomParams;
use crate::scalar::{czero, im, lit, re, Cplx, Real};

/// Atomic moments <sigma_->, <sigma_+>, <sigma_z>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState<T> {
    pub s_minus: Cplx<T>,
    pub s_plus: Cplx<T>,
    pub s_z: Cplx<T>,
}

impl<T: Real> BlochState<T> {
    pub fn ground() -> Self {
        Self { s_minus: czero(), s_plus: czero(), s_z: re(-T::one()) }
    }

    pub fn excited() -> Self {
        Self { s_minus: czero(), s_plus: czero(), s_z: re(T::one()) }
    }

    pub fn to_vector(&self) -> Vector3<Cplx<T>> {
        Vector3::new(self.s_minus, self.s_plus, self.s_z)
    }

    pub fn from_vector(v: &Vector3<Cplx<T>>) -> Self {
        Self { s_minus: v[0], s_plus: v[1], s_z: v[2] }
    }
}

/// d<sigma>/dt = M <sigma> + B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochGenerator<T: Real> {
    pub m_sigma: Matrix3<Cplx<T>>,
    pub b_vec: Vector3<Cplx<T>>,
}

pub fn bloch_generator<T: Real>(atom: &AtomParams<T>) -> BlochGenerator<T> {
    let g = atom.gamma;
    let o = atom.omega_rabi;
    let half = lit::<T>(0.5);
    let z = czero::<T>();
    #[rustfmt::skip]
    let m = Matrix3::new(
        re(-half * g), z,             im(half * o),
        z,             re(-half * g), im(-half * o),
        im(o),         im(-o),        re(-g),
    );
    BlochGenerator { m_sigma: m, b_vec: Vector3::new(z, z, re(-g)) }
}

pub fn bloch_steady_state<T: Real>(atom: &AtomParams<T>) -> BlochState<T> {
    let gen = bloch_generator(atom);
    let x = gen
        .m_sigma
        .lu()
        .solve(&(-gen.b_vec))
        .expect("Bloch matrix is invertible for gamma > 0");
    BlochState::from_vector(&x)
}

/// Closed-form steady state: s_z = -g^2/(g^2 + 2 W^2), s_- = i W s_z / g.
pub fn bloch_steady_state_closed<T: Real>(atom: &AtomParams<T>) -> BlochState<T> {
    let g = atom.gamma;
    let o = atom.omega_rabi;
    let sz = -g * g / (g * g + lit::<T>(2.0) * o * o);
    let sm = Complex::new(T::zero(), o * sz / g);
    BlochState { s_minus: sm, s_plus: sm.conj(), s_z: re(sz) }
}

/// Propagates the Bloch vector by `t` with the dense exponential of M.
pub fn bloch_evolve<T: Real>(state0: &BlochState<T>, atom: &AtomParams<T>, t: T) -> BlochState<T> {
    let gen = bloch_generator(atom);
    let ss = bloch_steady_state(atom).to_vector();
    let prop = (gen.m_sigma * re(t)).exp();
    BlochState::from_vector(&(prop * (state0.to_vector() - ss) + ss))
}

/// RK4 reference integrator with step h = min(0.01/g, 0.02/max(W, g)).
pub fn bloch_evolve_rk4<T: Real>(state0: &BlochState<T>, atom: &AtomParams<T>, t: T) -> BlochState<T> {
    let gen = bloch_generator(atom);
    let rate = atom.omega_rabi.max(atom.gamma);
    let h_max = (lit::<T>(0.01) / atom.gamma).min(lit::<T>(0.02) / rate);
    let f = |x: &Vector3<Cplx<T>>| gen.m_sigma * x + gen.b_vec;
    let x = rk4(f, state0.to_vector(), t, h_max);
    BlochState::from_vector(&x)
}

/// Classic fourth-order Runge-Kutta over [0, t] with steps no larger than `h_max`.
pub(crate) fn rk4<T: Real, V, F>(f: F, mut x: V, t: T, h_max: T) -> V
where
    V: Clone
        + std::ops::Add<Output = V>
        + std::ops::Mul<Cplx<T>, Output = V>,
    F: Fn(&V) -> V,
{
    if t <= T::zero() {
        return x;
    }
    let steps = (t / h_max).ceil().to_usize().unwrap_or(1).max(1);
    let h = t / lit::<T>(steps as f64);
    let (h2, h6) = (re(h * lit::<T>(0.5)), re(h / lit::<T>(6.0)));
    let two = re(lit::<T>(2.0));
    for _ in 0..steps {
        let k1 = f(&x);
        let k2 = f(&(x.clone() + k1.clone() * h2));
        let k3 = f(&(x.clone() + k2.clone() * h2));
        let k4 = f(&(x.clone() + k3.clone() * re(h)));
        x = x + (k1 + k2 * two + k3 * two + k4) * h6;
    }
    x
}

/// Eigenvalue parameter delta = sqrt((g/4)^2 - W^2), principal branch.
pub fn delta<T: Real>(atom: &AtomParams<T>) -> Cplx<T> {
    let q = atom.gamma / lit::<T>(4.0);
    crate::scalar::csqrt(re(q * q - atom.omega_rabi * atom.omega_rabi))
}

/// The three eigenvalues {-g/2, -3g/4 + delta, -3g/4 - delta} of M.
pub fn bloch_eigenvalues<T: Real>(atom: &AtomParams<T>) -> [Cplx<T>; 3] {
    let d = delta(atom);
    let c = re(-lit::<T>(0.75) * atom.gamma);
    [re(-atom.gamma * lit::<T>(0.5)), c + d, c - d]
}

/// Mollow triplet component selected by a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Peak {
    Left,
    Central,
    Right,
}

impl Peak {
    /// Filter centre for this peak: -W, 0 or +W.
    pub fn detuning<T: Real>(self, atom: &AtomParams<T>) -> T {
        match self {
            Peak::Left => -atom.omega_rabi,
            Peak::Central => T::zero(),
            Peak::Right => atom.omega_rabi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossKind {
    /// Right peak then central peak.
    RC,
    /// Right peak then left peak.
    RL,
}

/// Secular auto-correlations: central 1, sidebands 1 - e^{-g tau/2}.
pub fn secular_g2_auto<T: Real>(peak: Peak, atom: &AtomParams<T>, tau: T) -> T {
    match peak {
        Peak::Central => T::one(),
        Peak::Left | Peak::Right => T::one() - (-atom.gamma * tau * lit::<T>(0.5)).exp(),
    }
}

/// Finite-bandwidth cross-correlations for the ideally separated triplet.
pub fn secular_g2_cross<T: Real>(kind: CrossKind, atom: &AtomParams<T>, k_eff: T, tau: T) -> T {
    let ek = (-k_eff * tau).exp();
    match kind {
        CrossKind::RC => T::one() - ek,
        CrossKind::RL => {
            let half = lit::<T>(0.5);
            let two = lit::<T>(2.0);
            (-atom.gamma * tau * half).exp() - T::one()
                + half * (two - ek) * (two - ek)
                + half * (-two * k_eff * tau).exp()
        }
    }
}

/// Long-time dressed-state cross-correlations: RC = 1, RL = 1 + e^{-g tau/2}.
pub fn secular_g2_cross_longtime<T: Real>(kind: CrossKind, atom: &AtomParams<T>, tau: T) -> T {
    match kind {
        CrossKind::RC => T::one(),
        CrossKind::RL => T::one() + (-atom.gamma * tau * lit::<T>(0.5)).exp(),
    }
}
