//! Classical amplitude response of single-mode and multi-mode array filters.
//!
//! Frequency responses are stationary amplitudes with the e^{-i w t} carrier
//! removed. The bank's `center_detuning` plays the role of the central mode
//! frequency w_c.

use num_complex::Complex;

use crate::config::{mode_detunings, mode_phase, FilterBank};
use crate::scalar::{cexp, cln, czero, lit, re, Cplx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    Temporal,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    PeakNormalized,
}

/// Sampled response on a strictly increasing axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve<T> {
    pub axis: Vec<T>,
    pub values: Vec<Cplx<T>>,
    pub kind: ResponseKind,
    pub normalization: Normalization,
}

impl<T: Real> ResponseCurve<T> {
    /// Rescales so the largest magnitude is one.
    pub fn peak_normalized(&self) -> Self {
        let peak = self
            .values
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a.max(b))
            .sqrt();
        let values = if peak > T::zero() {
            self.values.iter().map(|z| *z / peak).collect()
        } else {
            self.values.clone()
        };
        Self { axis: self.axis.clone(), values, kind: self.kind, normalization: Normalization::PeakNormalized }
    }

    pub fn abs2(&self) -> Vec<T> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpulseMethod {
    /// Explicit sum over the 2N+1 decaying modes.
    ModeSum,
    /// Continuum (integral) approximation: a delayed, damped, positive-sided sinc.
    Analytic,
}

/// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < lit::<T>(1e-8) {
        T::one() - x * x / lit::<T>(6.0)
    } else {
        x.sin() / x
    }
}

/// Heaviside step with theta(0) = 0.
fn theta<T: Real>(t: T) -> bool {
    t > T::zero()
}

/// Steady single-mode amplitude E_d / (kappa - i (w - w_c)).
pub fn lorentzian_amplitude<T: Real>(drive: Cplx<T>, kappa: T, omega_c: T, omega: T) -> Cplx<T> {
    drive / Complex::new(kappa, -(omega - omega_c))
}

/// Per-mode drive amplitudes E_d e^{i m j pi/N} / sqrt(2N+1).
pub fn drive_amplitudes<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>) -> Vec<Cplx<T>> {
    let norm = lit::<T>(bank.n_modes() as f64).sqrt();
    bank.indices()
        .map(|j| drive * mode_phase::<T>(bank.n_side, bank.phase_index, j) / norm)
        .collect()
}

/// Collective amplitude after an impulse at t = 0.
pub fn impulse_response<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>, t: T, method: ImpulseMethod) -> Cplx<T> {
    if !theta(t) {
        return czero();
    }
    let n_modes = lit::<T>(bank.n_modes() as f64);
    match method {
        ImpulseMethod::ModeSum => {
            let e = drive_amplitudes(bank, drive);
            let w = mode_detunings(bank);
            let sum = e
                .iter()
                .zip(&w)
                .fold(czero::<T>(), |acc, (ej, wj)| acc + *ej * cexp(Complex::new(-bank.mode_halfwidth * t, -*wj * t)));
            sum / n_modes.sqrt()
        }
        ImpulseMethod::Analytic => {
            let n = lit::<T>(bank.n_side as f64);
            let m = lit::<T>(bank.phase_index as f64);
            let two_n = lit::<T>(2.0) * n;
            let envelope = cexp(Complex::new(-bank.mode_halfwidth * t, -bank.center_detuning * t));
            let s = if bank.n_side == 0 { T::one() } else { sinc(n * bank.mode_spacing * t - m * T::pi()) };
            // the single-mode limit has no continuum; the prefactor 2N/(2N+1) is replaced by 1
            let pre = if bank.n_side == 0 { T::one() } else { two_n / n_modes };
            drive * envelope * pre * s
        }
    }
}

/// Collective steady amplitude under continuous driving at frequency `omega`.
pub fn frequency_response<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>, omega: T) -> Cplx<T> {
    let e = drive_amplitudes(bank, drive);
    let w = mode_detunings(bank);
    let norm = lit::<T>(bank.n_modes() as f64).sqrt();
    let sum = e
        .iter()
        .zip(&w)
        .fold(czero::<T>(), |acc, (ej, wj)| acc + *ej / Complex::new(bank.mode_halfwidth, -(omega - *wj)));
    sum / norm
}

/// Continuum approximation of |A(w)|^2 for an unmodulated (m = 0) array.
/// Ignores `bank.phase_index`.
pub fn frequency_response_m0_closed<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>, omega: T) -> T {
    let n = lit::<T>(bank.n_side as f64);
    let n_modes = lit::<T>(bank.n_modes() as f64);
    let wc = bank.center_detuning;
    let (w_hi, w_lo) = (wc + n * bank.mode_spacing, wc - n * bank.mode_spacing);
    let k = bank.mode_halfwidth;
    let ratio = Complex::new(k, omega - w_hi) / Complex::new(k, omega - w_lo);
    let l = cln(ratio);
    let dw = bank.mode_spacing;
    drive.norm_sqr() / (dw * dw * n_modes * n_modes) * l.norm_sqr()
}

pub fn sample_impulse_response<T: Real>(
    bank: &FilterBank<T>,
    drive: Cplx<T>,
    times: &[T],
    method: ImpulseMethod,
) -> ResponseCurve<T> {
    ResponseCurve {
        axis: times.to_vec(),
        values: times.iter().map(|&t| impulse_response(bank, drive, t, method)).collect(),
        kind: ResponseKind::Temporal,
        normalization: Normalization::Raw,
    }
}

pub fn sample_frequency_response<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>, omegas: &[T]) -> ResponseCurve<T> {
    ResponseCurve {
        axis: omegas.to_vec(),
        values: omegas.iter().map(|&w| frequency_response(bank, drive, w)).collect(),
        kind: ResponseKind::Spectral,
        normalization: Normalization::Raw,
    }
}

/// sup |mode sum - analytic| / sup |analytic| over the given times.
pub fn impulse_discrepancy<T: Real>(bank: &FilterBank<T>, drive: Cplx<T>, times: &[T]) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for &t in times {
        let a = impulse_response(bank, drive, t, ImpulseMethod::Analytic);
        let s = impulse_response(bank, drive, t, ImpulseMethod::ModeSum);
        num = num.max((a - s).norm_sqr().sqrt());
        den = den.max(a.norm_sqr().sqrt());
    }
    num / den
}

/// Amplitude of a unit drive for the given centre, used by scalar tests.
pub fn unit_drive<T: Real>() -> Cplx<T> {
    re(T::one())
}
