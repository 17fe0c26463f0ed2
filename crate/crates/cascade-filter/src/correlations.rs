//! Spectra and photon correlations built on the moment engine.
//!
//! Spectra follow the convention S(w) = (1/pi) Re int_0^inf <dA^dag(0) dA(tau)> e^{i w tau} dtau,
//! which puts a filter centred at +w0 at positive frequency. With
//! G(tau) = <dA^dag(tau) dA(0)> = sum_k c_k e^{l_k tau} this becomes
//! S(w) = (1/pi) Re sum_k -c_k / (l_k - i w).

use nalgebra::{DMatrix, Matrix3, Vector3};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::atom::{bloch_eigenvalues, bloch_generator, bloch_steady_state, delta};
use crate::cascade::{
    build_two_filter_system, g1_initials, g2_initials, regression_evolve, solve_steady_moments, Depth,
    MomentHierarchy, RegressionState, SystemDescriptor,
};
use crate::config::{AtomParams, BankLabel, Coupling, FilterBank, KappaRule, TwoFilterConfig};
use crate::error::{Error, Result};
use crate::scalar::{cabs, cexp, czero, im, lit, re, to_f64, Cplx, Real};

/// Below this intensity a source counts as dark.
pub const DARK_THRESHOLD: f64 = 1e-14;
/// Largest imaginary part tolerated on a g2 sample before it is cast to real.
pub const G2_IMAG_TOL: f64 = 1e-9;

/// Parameters a series was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesMeta<T> {
    pub atom: AtomParams<T>,
    pub banks: Option<TwoFilterConfig<T>>,
    pub coupling: Option<Coupling>,
}

impl<T: Real> SeriesMeta<T> {
    fn of(sys: &SystemDescriptor<T>) -> Self {
        Self { atom: sys.atom, banks: Some(sys.banks), coupling: Some(sys.coupling) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesValues<T> {
    Complex(Vec<Cplx<T>>),
    Real(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries<T> {
    pub tau: Vec<T>,
    pub values: SeriesValues<T>,
    pub normalized: bool,
    pub meta: SeriesMeta<T>,
}

impl<T: Real> CorrelationSeries<T> {
    pub fn real(&self) -> Option<&[T]> {
        match &self.values {
            SeriesValues::Real(v) => Some(v),
            SeriesValues::Complex(_) => None,
        }
    }

    pub fn complex(&self) -> Option<&[Cplx<T>]> {
        match &self.values {
            SeriesValues::Complex(v) => Some(v),
            SeriesValues::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Incoherent,
    CoherentWeight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries<T> {
    pub omega: Vec<T>,
    pub values: Vec<T>,
    pub kind: SpectrumKind,
    /// Weight of the delta peak at w = 0, as a fraction of the total intensity.
    pub coherent_weight: T,
    pub meta: SeriesMeta<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid2D<T: Real> {
    pub alpha_detunings: Vec<T>,
    pub beta_detunings: Vec<T>,
    /// Rows follow alpha, columns follow beta.
    pub g2_initial: DMatrix<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G1Method {
    Numeric,
    Analytic,
}

fn dark_check<T: Real>(which: &'static str, value: T) -> Result<T> {
    if value < lit::<T>(DARK_THRESHOLD) {
        return Err(Error::DarkSource { which, value: to_f64(value), threshold: DARK_THRESHOLD });
    }
    Ok(value)
}

fn photons_a<T: Real>(h: &MomentHierarchy<T>) -> Result<T> {
    dark_check("<A^dag A>", h.collective_aa().re)
}

fn photons_b<T: Real>(h: &MomentHierarchy<T>) -> Result<T> {
    let bb = h
        .collective_bb()
        .ok_or_else(|| Error::Parameter("g2 needs the full moment hierarchy".into()))?;
    dark_check("<B^dag B>", bb.re)
}

/// Incoherent resonance-fluorescence spectrum normalized to the total
/// intensity <sigma_+ sigma_->.
pub fn unfiltered_spectrum<T: Real>(atom: &AtomParams<T>, omegas: &[T]) -> Result<SpectrumSeries<T>> {
    atom.validate()?;
    let s = bloch_steady_state(atom);
    let half = lit::<T>(0.5);
    let pop = (T::one() + s.s_z.re) * half;
    dark_check("<sigma_+ sigma_->", pop)?;
    // <sigma_+ x> - <sigma_+><x> for x = sigma_-, sigma_+, sigma_z
    let y0 = Vector3::new(
        (re(T::one()) + s.s_z) * re(half) - s.s_plus * s.s_minus,
        -s.s_plus * s.s_plus,
        -s.s_plus - s.s_plus * s.s_z,
    );
    let m = bloch_generator(atom).m_sigma;
    let values = omegas
        .iter()
        .map(|&w| {
            let a = -(m + Matrix3::identity() * im(w));
            let v = a.lu().solve(&y0).expect("M + i w is invertible for real w");
            v[0].re / (T::pi() * pop)
        })
        .collect();
    Ok(SpectrumSeries {
        omega: omegas.to_vec(),
        values,
        kind: SpectrumKind::Incoherent,
        coherent_weight: s.s_plus.norm_sqr() / pop,
        meta: SeriesMeta { atom: *atom, banks: None, coupling: None },
    })
}

/// Exponential decomposition G(tau) = sum_k c_k e^{l_k tau} of the filtered
/// first-order correlation, as (l_k, c_k). The first three terms carry the
/// atomic rates -g/2 and -3g/4 +- delta, the rest one per filter mode.
pub fn g1_decomposition<T: Real>(sys: &SystemDescriptor<T>, h: &MomentHierarchy<T>) -> Result<Vec<(Cplx<T>, Cplx<T>)>> {
    let st = g1_initials(h);
    let g = sys.gamma();
    let w = sys.atom.omega_rabi;
    let d = delta(&sys.atom);
    let scale = g.max(w);
    if cabs(d) <= lit::<T>(1e-9) * scale {
        return Err(Error::Singular("delta = 0: atomic rates -3g/4 +- delta coincide".into()));
    }
    let (u, v, z) = (st.sigma[0], st.sigma[1], st.sigma[2]);
    let half = re(lit::<T>(0.5));
    let quarter = re(lit::<T>(0.25));
    // sigma_- + sigma_+ relaxes alone; (sigma_- - sigma_+, sigma_z) mix
    let d0 = u - v;
    let mix = (re(g) * quarter * d0 + im(w) * z) / d;
    let p = [(u + v) * half, -(d0 + mix) * quarter, -(d0 - mix) * quarter];
    let lam = bloch_eigenvalues(&sys.atom);

    let mut out = Vec::with_capacity(3 + sys.n_modes());
    let mut atomic = [czero::<T>(); 3];
    for j in 0..sys.n_modes() {
        let l = Cplx::new(sys.kappa(), -sys.detunings_a[j]);
        let ec = sys.couplings[j].conj();
        let mut own = st.x[j];
        for k in 0..3 {
            let den = lam[k] + l;
            if cabs(den) <= lit::<T>(1e-9) * scale {
                return Err(Error::Singular(format!("filter rate of mode {j} coincides with an atomic rate")));
            }
            let c = ec * p[k] / den;
            atomic[k] -= c;
            own += c;
        }
        out.push((-l, own));
    }
    let mut all: Vec<_> = (0..3).map(|k| (lam[k], atomic[k])).collect();
    all.extend(out);
    Ok(all)
}

/// Normalized first-order correlation <A^dag(tau) A(0)> / <A^dag A>.
pub fn g1_filtered<T: Real>(
    sys: &SystemDescriptor<T>,
    h: &MomentHierarchy<T>,
    taus: &[T],
    method: G1Method,
) -> Result<CorrelationSeries<T>> {
    let n0 = photons_a(h)?;
    let coh = h.collective_a().norm_sqr();
    let raw = match method {
        G1Method::Numeric => regression_evolve(sys, &RegressionState::G1(g1_initials(h)), taus)?,
        G1Method::Analytic => {
            let terms = g1_decomposition(sys, h)?;
            taus.iter()
                .map(|&t| terms.iter().fold(czero::<T>(), |a, (l, c)| a + *c * cexp(*l * re(t))))
                .collect()
        }
    };
    let values = raw.into_iter().map(|gv| (gv + re(coh)) / re(n0)).collect();
    Ok(CorrelationSeries { tau: taus.to_vec(), values: SeriesValues::Complex(values), normalized: true, meta: SeriesMeta::of(sys) })
}

/// Incoherent part of the filtered spectrum normalized by <A^dag A>, from the
/// exponential decomposition. Where the decomposition degenerates the
/// resolvent of the regression system is used instead.
pub fn filtered_spectrum<T: Real>(sys: &SystemDescriptor<T>, h: &MomentHierarchy<T>, omegas: &[T]) -> Result<SpectrumSeries<T>> {
    let n0 = photons_a(h)?;
    let values = match g1_decomposition(sys, h) {
        Ok(terms) => omegas
            .iter()
            .map(|&w| {
                let s = terms.iter().fold(czero::<T>(), |a, (l, c)| a - *c / (*l - im(w)));
                s.re / (T::pi() * n0)
            })
            .collect(),
        Err(Error::Singular(_)) => filtered_spectrum_resolvent(sys, h, omegas)?.values,
        Err(e) => return Err(e),
    };
    Ok(SpectrumSeries {
        omega: omegas.to_vec(),
        values,
        kind: SpectrumKind::Incoherent,
        coherent_weight: h.collective_a().norm_sqr() / n0,
        meta: SeriesMeta::of(sys),
    })
}

/// Same spectrum by solving the Laplace-transformed regression equations.
pub fn filtered_spectrum_resolvent<T: Real>(
    sys: &SystemDescriptor<T>,
    h: &MomentHierarchy<T>,
    omegas: &[T],
) -> Result<SpectrumSeries<T>> {
    let n0 = photons_a(h)?;
    let st = g1_initials(h);
    let m = bloch_generator(&sys.atom).m_sigma;
    let values = omegas
        .iter()
        .map(|&w| {
            // conj of int_0^inf G(tau) e^{-i w tau}: the transform at s = i w
            let s = im(w);
            let r = (Matrix3::identity() * s - m).lu().solve(&st.sigma).expect("s - M invertible for real w");
            let mut tot = czero::<T>();
            for j in 0..sys.n_modes() {
                let l = Cplx::new(sys.kappa(), -sys.detunings_a[j]);
                tot += (st.x[j] - sys.couplings[j].conj() * r[1]) / (s + l);
            }
            // S = (1/pi) Re int G^* e^{i w tau} = (1/pi) Re int G e^{-i w tau}
            tot.re / (T::pi() * n0)
        })
        .collect();
    Ok(SpectrumSeries {
        omega: omegas.to_vec(),
        values,
        kind: SpectrumKind::Incoherent,
        coherent_weight: h.collective_a().norm_sqr() / n0,
        meta: SeriesMeta::of(sys),
    })
}

/// Discrete Fourier transform of the numerically regressed G(tau) on
/// [0, t_max] with `samples` trapezoid nodes, zero-padded to `padded` points.
/// Returns the spectrum on the transform's own frequency grid, sorted.
pub fn filtered_spectrum_fft(
    sys: &SystemDescriptor<f64>,
    h: &MomentHierarchy<f64>,
    t_max: f64,
    samples: usize,
    padded: usize,
) -> Result<SpectrumSeries<f64>> {
    if samples < 2 || padded < samples {
        return Err(Error::Parameter("need samples >= 2 and padded >= samples".into()));
    }
    let n0 = photons_a(h)?;
    let dt = t_max / (samples - 1) as f64;
    let taus: Vec<f64> = (0..samples).map(|i| i as f64 * dt).collect();
    let g = regression_evolve(sys, &RegressionState::G1(g1_initials(h)), &taus)?;
    // trapezoid sum of conj(G) e^{i w tau} via an inverse (positive-exponent) transform
    let mut buf = vec![czero::<f64>(); padded];
    for (i, v) in g.iter().enumerate() {
        let wgt = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
        buf[i] = v.conj() * wgt * dt;
    }
    FftPlanner::new().plan_fft_inverse(padded).process(&mut buf);
    let dw = 2.0 * std::f64::consts::PI / (padded as f64 * dt);
    let mut pts: Vec<(f64, f64)> = buf
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let kk = if k < padded.div_ceil(2) { k as f64 } else { k as f64 - padded as f64 };
            (kk * dw, z.re / (std::f64::consts::PI * n0))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SpectrumSeries {
        omega: pts.iter().map(|p| p.0).collect(),
        values: pts.iter().map(|p| p.1).collect(),
        kind: SpectrumKind::Incoherent,
        coherent_weight: h.collective_a().norm_sqr() / n0,
        meta: SeriesMeta::of(sys),
    })
}

/// Normalized cross-correlation g2(alpha, 0; beta, tau).
pub fn g2_cross<T: Real>(sys: &SystemDescriptor<T>, h: &MomentHierarchy<T>, taus: &[T]) -> Result<CorrelationSeries<T>> {
    let na = photons_a(h)?;
    let nb = photons_b(h)?;
    let raw = regression_evolve(sys, &RegressionState::G2(g2_initials(h)), taus)?;
    let norm = na * nb;
    let tol = lit::<T>(G2_IMAG_TOL);
    let mut values = Vec::with_capacity(raw.len());
    for (t, z) in taus.iter().zip(raw) {
        let v = z / re(norm);
        if v.im.abs() > tol * T::one().max(v.re.abs()) || v.re < -tol {
            return Err(Error::Tolerance(format!("g2 at tau = {t} is not a nonnegative real: {v}")));
        }
        values.push(v.re);
    }
    Ok(CorrelationSeries { tau: taus.to_vec(), values: SeriesValues::Real(values), normalized: true, meta: SeriesMeta::of(sys) })
}

/// Auto-correlation; both banks must be the same filter.
pub fn g2_auto<T: Real>(sys: &SystemDescriptor<T>, h: &MomentHierarchy<T>, taus: &[T]) -> Result<CorrelationSeries<T>> {
    let (a, b) = (&sys.banks.bank_a, &sys.banks.bank_b.with_label(BankLabel::A));
    if a != b {
        return Err(Error::Parameter("auto-correlation needs identical banks".into()));
    }
    g2_cross(sys, h, taus)
}

/// g2(alpha, 0; beta, 0) from the steady state alone.
pub fn g2_initial<T: Real>(h: &MomentHierarchy<T>) -> Result<T> {
    let na = photons_a(h)?;
    let nb = photons_b(h)?;
    let x = h
        .level4_sum()
        .ok_or_else(|| Error::Parameter("g2 needs the full moment hierarchy".into()))?;
    Ok((x / re(na * nb)).re)
}

/// g2(0) of equal filters centred on `peak_detuning` for each effective
/// halfwidth in `k_list`, with phase index m = 1.
pub fn scan_halfwidth<T: Real>(
    atom: &AtomParams<T>,
    peak_detuning: T,
    k_list: &[T],
    n_side: usize,
    rule: KappaRule,
) -> Result<Vec<(T, T)>> {
    k_list
        .iter()
        .map(|&k| {
            let bank = FilterBank::from_halfwidth(n_side, k, 1, peak_detuning, rule, BankLabel::A)?;
            let sys = build_two_filter_system(&TwoFilterConfig::auto(*atom, bank)?)?;
            let h = solve_steady_moments(&sys, Depth::Full);
            Ok((k, g2_initial(&h)?))
        })
        .collect()
}

/// g2(alpha, 0; beta, 0) over every pair of centre detunings. Cells are
/// computed in parallel and stored by index, so the result does not depend on
/// scheduling.
pub fn scan_initial_grid<T: Real>(
    atom: &AtomParams<T>,
    template: &FilterBank<T>,
    alphas: &[T],
    betas: &[T],
) -> Result<ScanGrid2D<T>> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::Parameter("scan grids must be nonempty".into()));
    }
    let nb = betas.len();
    let cells: Vec<Result<T>> = (0..alphas.len() * nb)
        .into_par_iter()
        .map(|i| {
            let a = template.with_center(alphas[i / nb]).with_label(BankLabel::A);
            let b = template.with_center(betas[i % nb]).with_label(BankLabel::B);
            let sys = build_two_filter_system(&TwoFilterConfig::new(*atom, a, b)?)?;
            g2_initial(&solve_steady_moments(&sys, Depth::Full))
        })
        .collect();
    let mut m = DMatrix::from_element(alphas.len(), nb, T::zero());
    for (i, c) in cells.into_iter().enumerate() {
        m[(i / nb, i % nb)] = c?;
    }
    Ok(ScanGrid2D { alpha_detunings: alphas.to_vec(), beta_detunings: betas.to_vec(), g2_initial: m })
}

/// Incoherent-to-coherent intensity ratio <A^dag A> / |<A>|^2 - 1.
pub fn intensity_ratio<T: Real>(h: &MomentHierarchy<T>) -> Result<T> {
    let n0 = photons_a(h)?;
    let coh = h.collective_a().norm_sqr();
    if coh <= lit::<T>(DARK_THRESHOLD) * n0 {
        return Err(Error::CoherentZero);
    }
    Ok(n0 / coh - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::build_one_filter_system;

    fn sys(n: usize, omega: f64, k: f64, ca: f64, cb: f64) -> SystemDescriptor<f64> {
        let atom = AtomParams::new(1.0, omega).unwrap();
        let a = FilterBank::from_halfwidth(n, k, 1, ca, KappaRule::Overlapping, BankLabel::A).unwrap();
        let cfg = TwoFilterConfig::new(atom, a, a.with_center(cb).with_label(BankLabel::B)).unwrap();
        build_two_filter_system(&cfg).unwrap()
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn weak_drive_spectrum_is_a_squared_lorentzian() {
        // incoherent weak-drive scattering goes as 1/(w^2 + g^2/4)^2
        let atom = AtomParams::new(1.0, 0.01).unwrap();
        let w = grid(-3.0, 3.0, 601);
        let s = unfiltered_spectrum(&atom, &w).unwrap();
        let peak = s.values[300];
        for (x, v) in w.iter().zip(&s.values) {
            let shape = 1.0 / (1.0 + 4.0 * x * x).powi(2);
            assert!((v / peak - shape).abs() < 1e-3);
        }
        for i in 0..300 {
            assert!((s.values[i] - s.values[600 - i]).abs() < 1e-14);
        }
    }

    #[test]
    fn unfiltered_spectrum_integrates_to_incoherent_fraction() {
        let atom = AtomParams::new(1.0, 1.3).unwrap();
        let w = grid(-400.0, 400.0, 160_001);
        let s = unfiltered_spectrum(&atom, &w).unwrap();
        let dw = w[1] - w[0];
        let integral: f64 = s.values.iter().sum::<f64>() * dw;
        assert!((integral - (1.0 - s.coherent_weight)).abs() < 2e-3);
        assert!(unfiltered_spectrum(&AtomParams::new(1.0, 0.0).unwrap(), &w[..3]).is_err());
    }

    #[test]
    fn g1_methods_agree_and_start_at_one() {
        let s = sys(1, 2.0, 1.0, 0.3, 0.3);
        let h = solve_steady_moments(&s, Depth::BankA);
        let taus = grid(0.0, 10.0, 201);
        let a = g1_filtered(&s, &h, &taus, G1Method::Numeric).unwrap();
        let b = g1_filtered(&s, &h, &taus, G1Method::Analytic).unwrap();
        let (a, b) = (a.complex().unwrap(), b.complex().unwrap());
        assert!((a[0] - re(1.0)).norm() < 1e-14);
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < 1e-10);
            assert!(x.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn spectrum_decomposition_matches_resolvent() {
        let s = sys(2, 3.0, 2.0, 1.0, 1.0);
        let h = solve_steady_moments(&s, Depth::BankA);
        let w = grid(-8.0, 8.0, 81);
        let a = filtered_spectrum(&s, &h, &w).unwrap();
        let b = filtered_spectrum_resolvent(&s, &h, &w).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
            assert!(*x > -1e-12);
        }
    }

    #[test]
    fn one_filter_g1_matches_two_filter() {
        let atom = AtomParams::new(1.0f64, 2.0).unwrap();
        let bank = FilterBank::from_halfwidth(0, 1.5, 1, 0.5, KappaRule::Overlapping, BankLabel::A).unwrap();
        let one = build_one_filter_system(&atom, &bank).unwrap();
        let two = build_two_filter_system(&TwoFilterConfig::auto(atom, bank).unwrap()).unwrap();
        let (h1, h2) = (solve_steady_moments(&one, Depth::BankA), solve_steady_moments(&two, Depth::BankA));
        assert!((h1.collective_aa().re - 2.0 * h2.collective_aa().re).abs() < 1e-14);
        let taus = grid(0.0, 5.0, 26);
        let a = g1_filtered(&one, &h1, &taus, G1Method::Numeric).unwrap();
        let b = g1_filtered(&two, &h2, &taus, G1Method::Numeric).unwrap();
        for (x, y) in a.complex().unwrap().iter().zip(b.complex().unwrap()) {
            assert!((x - y).norm() < 1e-8);
        }
        let w = grid(-5.0, 5.0, 21);
        let sa = filtered_spectrum(&one, &h1, &w).unwrap();
        let sb = filtered_spectrum(&two, &h2, &w).unwrap();
        for (x, y) in sa.values.iter().zip(&sb.values) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn g2_zero_delay_and_dark_errors() {
        let s = sys(1, 2.0, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&s, Depth::Full);
        let series = g2_auto(&s, &h, &[0.0, 1.0]).unwrap();
        assert_eq!(series.real().unwrap()[0], g2_initial(&h).unwrap());
        assert!((g2_initial(&h).unwrap() - 0.07061242587347322).abs() < 1e-12);
        let dark = sys(1, 0.0, 1.0, 0.0, 0.0);
        let hd = solve_steady_moments(&dark, Depth::Full);
        assert!(matches!(g2_initial(&hd), Err(Error::DarkSource { .. })));
        assert!(matches!(intensity_ratio(&hd), Err(Error::DarkSource { .. })));
        let cross = sys(1, 2.0, 1.0, 1.0, 0.0);
        let hc = solve_steady_moments(&cross, Depth::Full);
        assert!(g2_auto(&cross, &hc, &[0.0]).is_err());
        assert!(g2_cross(&cross, &hc, &[0.0]).is_ok());
    }

    #[test]
    fn grid_is_symmetric() {
        let atom = AtomParams::new(1.0, 3.0).unwrap();
        let t = FilterBank::from_halfwidth(1, 1.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A).unwrap();
        let a = grid(-4.0, 4.0, 5);
        let g = scan_initial_grid(&atom, &t, &a, &a).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((g.g2_initial[(i, j)] - g.g2_initial[(j, i)]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn intensity_ratio_weak_drive() {
        let s = sys(0, 0.05, 1.0, 0.0, 0.0);
        let h = solve_steady_moments(&s, Depth::BankA);
        let r = intensity_ratio(&h).unwrap();
        assert!(r >= 0.0 && r < 0.1);
    }
}
