use std::sync::Arc;

use fdrates_core::numerics::forms::{assemble_sector_forms, OuterBoundary};
use fdrates_core::spectral::{self, exact, GapSource};
use fdrates_core::{Grading, RadialField, RadialGrid};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[test]
fn branches_join_continuously() {
    for d in 3..=8u32 {
        let df = d as f64;
        for edge in [-(df + 2.0) / 2.0, -df] {
            let at = spectral::sharp_constant(d, edge).unwrap();
            for h in [1e-6, 1e-8] {
                let left = spectral::sharp_constant(d, edge - h).unwrap();
                let right = spectral::sharp_constant(d, edge + h).unwrap();
                assert!((left - at).abs() < 10.0 * h * df, "d={d} edge={edge}");
                assert!((right - at).abs() < 10.0 * h * df, "d={d} edge={edge}");
            }
        }
    }
    assert_eq!(spectral::sharp_constant(5, -3.5).unwrap(), 4.0);
    assert_eq!(spectral::sharp_constant(5, -5.0).unwrap(), 10.0);
    // the sweep itself: no jumps on a fine alpha grid away from alpha_*
    let grid: Vec<f64> = (1..4000).map(|i| -12.0 + 12.0 * i as f64 / 4000.0).collect();
    for w in grid.windows(2) {
        if (w[0] + 1.5).abs() < 0.01 || (w[1] + 1.5).abs() < 0.01 {
            continue;
        }
        let (a, b) = (spectral::sharp_constant(5, w[0]).unwrap(), spectral::sharp_constant(5, w[1]).unwrap());
        assert!((a - b).abs() < 0.05, "jump between {} and {}", w[0], w[1]);
    }
}

#[test]
fn critical_exponent_has_no_gap() {
    assert!(spectral::sharp_constant(5, -1.5).is_err());
    assert!(spectral::sharp_constant(2, -1.0).is_ok());
}

/// Harmonic polynomials of degree l: dim P_l - dim P_{l-2}, with
/// dim P_l = C(l+d-1, d-1).
fn harmonic_dimension(d: u64, l: u64) -> u64 {
    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }
    let hom = |l: u64| binom(l + d - 1, d - 1);
    if l < 2 {
        hom(l)
    } else {
        hom(l) - hom(l - 2)
    }
}

#[test]
fn multiplicities_match_harmonic_polynomial_count() {
    for l in 0..=10u32 {
        assert_eq!(spectral::multiplicity(3, l), 2 * l as u64 + 1);
    }
    for d in 2..=9u32 {
        for l in 0..=8u32 {
            assert_eq!(spectral::multiplicity(d, l), harmonic_dimension(d as u64, l as u64), "d={d} l={l}");
        }
    }
}

/// `L f = -(1+|x|^2)^{1-alpha} div((1+|x|^2)^alpha grad f)` by nested
/// central differences in Cartesian coordinates.
fn apply_operator(d: usize, alpha: f64, f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
    let h = 1e-4;
    let weight = |y: &[f64]| (1.0 + y.iter().map(|v| v * v).sum::<f64>()).powf(alpha);
    let flux = |y: &[f64], j: usize| {
        let (mut p, mut m) = (y.to_vec(), y.to_vec());
        p[j] += h;
        m[j] -= h;
        weight(y) * (f(&p) - f(&m)) / (2.0 * h)
    };
    let mut div = 0.0;
    for j in 0..d {
        let (mut p, mut m) = (x.to_vec(), x.to_vec());
        p[j] += h;
        m[j] -= h;
        div += (flux(&p, j) - flux(&m, j)) / (2.0 * h);
    }
    let s = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
    -s.powf(1.0 - alpha) * div
}

#[test]
fn modes_are_eigenfunctions_of_the_cartesian_operator() {
    let points: [[f64; 5]; 3] =
        [[0.3, -0.2, 0.5, 0.1, 0.7], [1.1, 0.4, -0.6, 0.2, 0.0], [-0.5, 0.9, 0.3, -1.2, 0.4]];
    for alpha in [-10.0, -6.0, -3.25] {
        for (l, k) in [(1, 0), (0, 1), (1, 1), (0, 2), (2, 0)] {
            let mode = spectral::discrete_mode(5, alpha, l, k);
            let poly = mode.radial_poly.clone();
            // r^l Y_l with Y_1 = x_1 / r and Y_2 = (x_1 x_2) / r^2
            let f = move |x: &[f64]| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let p = poly.iter().rev().fold(0.0, |acc, &c| acc * r2 + c);
                let harmonic = match l {
                    0 => 1.0,
                    1 => x[0],
                    _ => x[0] * x[1],
                };
                harmonic * p
            };
            for x in &points {
                let lhs = apply_operator(5, alpha, &f, x);
                let rhs = mode.lambda * f(x);
                assert!(
                    (lhs - rhs).abs() <= 1e-5 * mode.lambda.abs().max(1.0) * f(x).abs().max(1e-2),
                    "alpha={alpha} (l,k)=({l},{k}) at {x:?}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn translation_mode_eigenvalue() {
    for alpha in [-0.5, -2.0, -10.0] {
        let mode = spectral::discrete_mode(5, alpha, 1, 0);
        assert_eq!(mode.lambda, -2.0 * alpha);
        assert_eq!(mode.radial_poly, vec![1.0]);
    }
    let m01 = spectral::discrete_mode(5, -6.0, 0, 1);
    assert_eq!(m01.lambda, 14.0);
    assert!((m01.radial_poly[1] - (-12.0 + 5.0) / 5.0).abs() < 1e-15);
}

#[test]
fn rayleigh_quotients_of_polynomial_modes() {
    let grid = Arc::new(RadialGrid::new(1e4, 4000, Grading::default(), 5).unwrap());
    let forms1 = assemble_sector_forms(grid.clone(), -6.0, 1.0, 1, OuterBoundary::Natural).unwrap();
    let f = RadialField::from_fn(grid.clone(), 1, |r| r);
    assert!((forms1.rayleigh_quotient(&f).unwrap() - 12.0).abs() < 1e-3 * 12.0);
    let forms0 = assemble_sector_forms(grid.clone(), -6.0, 1.0, 0, OuterBoundary::Natural).unwrap();
    let mode = spectral::discrete_mode(5, -6.0, 0, 1);
    let g = RadialField::from_fn(grid, 0, |r| mode.eval(r));
    assert!((forms0.rayleigh_quotient(&g).unwrap() - 14.0).abs() < 1e-3 * 14.0);
}

#[test]
fn report_examples() {
    let r = spectral::spectrum_report(5, -6.0, 3, 3).unwrap();
    assert_eq!(r.gap_source, GapSource::Mode { l: 1, k: 0 });
    assert_eq!(r.sharp_constant, 12.0);
    assert_eq!(r.improved_constant.unwrap().value, 14.0);
    let r = spectral::spectrum_report(5, -4.0, 3, 3).unwrap();
    assert_eq!(r.gap_source, GapSource::Mode { l: 0, k: 1 });
    assert_eq!(r.sharp_constant, 6.0);
    let m10 = r.modes.iter().find(|m| (m.l, m.k) == (1, 0)).unwrap();
    assert_eq!(m10.lambda, 8.0);
    assert!(!m10.below_continuum);
    let r = spectral::spectrum_report(5, -1.0, 3, 3).unwrap();
    assert_eq!(r.gap_source, GapSource::Continuum);
    assert_eq!(r.sharp_constant, 0.25);
}

#[test]
fn one_dimensional_spectrum() {
    assert_eq!(spectral::sharp_constant(1, -2.0).unwrap(), 4.0);
    assert_eq!(spectral::sharp_constant(1, -0.25).unwrap(), 0.5625);
    // j = l + 2k in 1..=5/2 for alpha = -2: j = 1, 2
    let js: Vec<(u32, u32)> =
        (0..2).flat_map(|l| (0..3).map(move |k| (l, k))).filter(|&(l, k)| spectral::admissible(1, -2.0, l, k)).collect();
    assert_eq!(js, vec![(0, 1), (1, 0)]);
    assert_eq!(spectral::discrete_mode(1, -2.0, 1, 0).lambda, 4.0);
    assert_eq!(spectral::discrete_mode(1, -2.0, 0, 1).lambda, 6.0);
}

#[test]
fn figure_rows_cover_every_curve() {
    let rows = spectral::figure_rows(5, &[-6.0, -1.5, -1.0], 1, 1);
    // continuum + sharp + 4 modes, sharp omitted at alpha_*
    assert_eq!(rows.len(), 6 + 5 + 6);
}

fn residual_vanishes(d: u32, alpha: &BigRational, l: u32, k: u32) -> bool {
    let lam = exact::eigenvalue(d, alpha, l, k);
    let poly = exact::radial_poly(d, alpha, l, k);
    exact::is_zero_polynomial(&exact::ode_residual(d, alpha, &lam, l, &poly))
}

#[test]
fn exact_residuals_vanish_and_detect_wrong_eigenvalues() {
    let a = rat(-13, 2);
    for l in 0..=4 {
        for k in 0..=4 {
            assert!(residual_vanishes(5, &a, l, k));
        }
    }
    let poly = exact::radial_poly(5, &a, 0, 1);
    let wrong = exact::eigenvalue(5, &a, 0, 1) + rat(1, 1_000_000);
    let res = exact::ode_residual(5, &a, &wrong, 0, &poly);
    assert!(!exact::is_zero_polynomial(&res));
    let at = exact::ode_residual_at(&res, &rat(3, 2));
    assert!(exact::magnitude(&at) > BigRational::zero());
}

proptest! {
    #[test]
    fn continuum_minus_first_radial_mode_is_a_square(p in -4000i64..-1, q in 1i64..200, d in 1u32..=12) {
        let a = rat(p, q);
        let lhs = exact::continuum_bottom(d, &a) - exact::eigenvalue(d, &a, 0, 1);
        let s = &a + rat(d as i64 + 2, 2);
        prop_assert_eq!(&lhs, &(&s * &s));
        prop_assert!(!lhs.is_negative());
        prop_assert_eq!(lhs.is_zero(), a == rat(-(d as i64 + 2), 2));
    }

    #[test]
    fn exact_and_float_agree(p in -400i64..-1, q in 1i64..20, l in 0u32..4, k in 0u32..4) {
        let a = rat(p, q);
        let af = p as f64 / q as f64;
        let lam = exact::eigenvalue(5, &a, l, k);
        let lf = spectral::eigenvalue(5, af, l, k);
        let le: f64 = num_traits::ToPrimitive::to_f64(&lam).unwrap();
        prop_assert!((le - lf).abs() <= 1e-12 * lf.abs().max(1.0));
        prop_assert_eq!(exact::admissible(5, &a, l, k), spectral::admissible(5, af, l, k));
        prop_assert!(residual_vanishes(5, &a, l, k));
    }

    #[test]
    fn sharp_constant_is_the_spectral_minimum(alpha in -20.0f64..-0.01, d in 3u32..=8) {
        prop_assume!((alpha + (d as f64 - 2.0) / 2.0).abs() > 1e-6);
        let r = spectral::spectrum_report(d, alpha, 4, 4);
        prop_assert!(r.is_ok());
    }
}
