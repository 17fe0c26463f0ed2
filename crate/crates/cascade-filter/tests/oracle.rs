//! Moment engine against the brute-force density-matrix oracle.

use cascade_filter::cascade::{build_two_filter_system, solve_steady_moments, Depth};
use cascade_filter::config::{BankLabel, KappaRule};
use cascade_filter::correlations::{g1_filtered, g2_cross, G1Method};
use cascade_filter::oracle::{Oracle, Truncation};
use cascade_filter::{AtomParams, FilterBank, SystemDescriptor, TwoFilterConfig};

fn system(n: usize, omega: f64, center_b: f64) -> SystemDescriptor {
    let atom = AtomParams::new(1.0, omega).unwrap();
    let a = FilterBank::from_halfwidth(n, 1.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A).unwrap();
    let b = a.with_center(center_b).with_label(BankLabel::B);
    build_two_filter_system(&TwoFilterConfig::new(atom, a, b).unwrap()).unwrap()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y.abs().max(1e-3)).fold(0.0, f64::max)
}

#[test]
fn three_mode_banks_agree_with_oracle() {
    let sys = system(1, 2.0, 0.0);
    let o = Oracle::solve(&sys, Truncation::PerBankTotal(3)).unwrap();
    assert_eq!(o.basis.total_dim(), 800);
    assert!(o.rho.residual <= 1e-10);
    assert!(o.rho.min_eigenvalue() > -1e-10);
    let h = solve_steady_moments(&sys, Depth::Full);
    let aa = h.collective_aa().re;
    assert!((o.collective_aa() / aa - 1.0).abs() < 1e-4, "{} vs {aa}", o.collective_aa());

    let taus: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let g2m = g2_cross(&sys, &h, &taus).unwrap();
    let g2o = o.g2(&taus).unwrap();
    let err = max_rel(&g2o, g2m.real().unwrap());
    assert!(err < 1e-4, "g2 relative error {err:e}");

    let g1m = g1_filtered(&sys, &h, &taus, G1Method::Analytic).unwrap();
    let g1o = o.g1(&taus).unwrap();
    let err = g1o.iter().zip(g1m.complex().unwrap()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-4, "g1 error {err:e}");
}

#[test]
fn detuned_single_modes_agree_with_oracle() {
    let sys = system(0, 3.0, -2.0);
    let o = Oracle::solve(&sys, Truncation::PerMode(4)).unwrap();
    let h = solve_steady_moments(&sys, Depth::Full);
    let taus: Vec<f64> = (0..=30).map(|i| i as f64 * 0.2).collect();
    let g2m = g2_cross(&sys, &h, &taus).unwrap();
    let err = max_rel(&o.g2(&taus).unwrap(), g2m.real().unwrap());
    assert!(err < 1e-3, "g2 relative error {err:e}");
}
