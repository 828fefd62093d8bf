use std::f64::consts::PI;

use proptest::prelude::*;

use tricomi::propagator::duhamel_solve;
use tricomi::strichartz::{
    band_duhamel, check_inhomogeneous_indices, empirical_homogeneous_ratio, mixed_norm,
    slice_norm, square_function_constants, theory_slope, time_norm, BandSource, EnsembleSpec,
    KnappConfig, LittlewoodPaleyBank, MixedNormSpec,
};
use tricomi::strichartz::knapp::knapp_experiment;
use tricomi::strichartz::operator::ModelAmplitude;
use tricomi::{Error, Field, GridSpec};

fn gaussian(grid: GridSpec, c: f64) -> Field {
    Field::from_fn(grid, |x| c * (-(x[0] * x[0] + x[1] * x[1])).exp())
}

#[test]
fn radial_gaussian_mixed_norm() {
    // Angular L² of e^{−ρ²} is √(2π)e^{−ρ²}; its L^r(dρ) norm on [0, ∞) is
    // √(2π)(√π/(2√r))^{1/r}.
    let grid = GridSpec::new(2, 8.0, 256).unwrap();
    let u = gaussian(grid, 1.0);
    for &r in &[2.0, 3.0, 4.5] {
        let spec = MixedNormSpec::new(4.0, r, 7.0).unwrap().with_nodes(1401, 128).unwrap();
        let expected = (2.0 * PI).sqrt() * (PI.sqrt() / (2.0 * f64::sqrt(r))).powf(1.0 / r);
        let got = slice_norm(&u, &spec).unwrap();
        assert!((got - expected).abs() < 1e-5 * expected, "r = {r}: {got} vs {expected}");
        let times: Vec<f64> = (0..9).map(|k| 0.25 * k as f64).collect();
        let slices = vec![u.clone(); times.len()];
        let total = mixed_norm(&slices, &times, &spec).unwrap();
        assert!((total - 2f64.powf(0.25) * got).abs() < 1e-12 * total);
    }
}

#[test]
fn polar_norm_rejects_bad_layouts() {
    let grid = GridSpec::new(2, 4.0, 32).unwrap();
    let u = gaussian(grid, 1.0);
    let wide = MixedNormSpec::new(2.0, 2.0, 5.0).unwrap();
    assert!(matches!(slice_norm(&u, &wide), Err(Error::Range(_))));
    assert!(MixedNormSpec::new(0.5, 2.0, 1.0).is_err());
    assert!(time_norm(&[1.0, 2.0], &[0.0], 2.0).is_err());
    let cube = GridSpec::new(3, 4.0, 8).unwrap();
    let spec = MixedNormSpec::new(2.0, 2.0, 3.0).unwrap();
    assert!(matches!(slice_norm(&Field::zeros(cube), &spec), Err(Error::Precondition(_))));
}

#[test]
fn band_duhamel_matches_the_generic_solver() {
    let grid = GridSpec::new(2, 8.0 * PI, 64).unwrap();
    let src = BandSource::random(grid, 3, 11, 0);
    let times = [0.0, 0.5, 1.5, 2.5];
    let fast = band_duhamel(&src, &times).unwrap();
    for (k, &t) in times.iter().enumerate().skip(1) {
        let slow = duhamel_solve(&src, t).unwrap();
        let scale = slow.sup_norm();
        assert!(scale > 0.0);
        assert!(fast[k].max_abs_diff(&slow).unwrap() < 1e-6 * scale, "t = {t}");
    }
    assert_eq!(fast[0].sup_norm(), 0.0);
    assert!(band_duhamel(&src, &[0.5, 1.0]).is_err());
}

#[test]
fn partition_of_unity() {
    let bank = LittlewoodPaleyBank::new(-14, 14).unwrap();
    for k in 0..=2000 {
        let tau = 2f64.powf(-10.0 + 20.0 * k as f64 / 2000.0);
        assert!((bank.partition_sum(tau) - 1.0).abs() < 1e-12, "τ = {tau}");
    }
}

#[test]
fn square_function_constants_are_stable() {
    let coarse = square_function_constants(GridSpec::new(2, PI, 64).unwrap(), 6, 3, 4.0, 1.5).unwrap();
    let fine = square_function_constants(GridSpec::new(2, PI, 128).unwrap(), 6, 3, 4.0, 1.5).unwrap();
    for (a, b) in [(coarse.upper, fine.upper), (coarse.lower, fine.lower)] {
        assert!(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0);
        assert!(a.max(b) / a.min(b) <= 2.0);
    }
}

#[test]
fn ensembles_are_reproducible() {
    let spec = EnsembleSpec {
        members: 2,
        seed: 9,
        resolutions: vec![128],
        ..EnsembleSpec::default()
    };
    let a = empirical_homogeneous_ratio(&spec, 4.0, 4.0).unwrap();
    let b = empirical_homogeneous_ratio(&spec, 4.0, 4.0).unwrap();
    assert_eq!(a, b);
    let m = a.per_resolution[0].max_ratio;
    assert!(m.is_finite() && m > 0.0);
}

#[test]
fn inhomogeneous_indices_must_balance() {
    assert!(check_inhomogeneous_indices(4.0, 4.0, 4.0, 4.0).is_ok());
    assert!(matches!(check_inhomogeneous_indices(4.0, 4.0, 8.0, 4.0), Err(Error::Config(_))));
    assert!(check_inhomogeneous_indices(1.5, 4.0, 1.5, 4.0).is_err());
}

#[test]
fn knapp_config_is_validated() {
    let amp = ModelAmplitude;
    let short = KnappConfig::dyadic(4.0, 4.0, 3, 5);
    assert!(matches!(knapp_experiment(&short, &amp), Err(Error::Config(_))));
    let uneven = KnappConfig::new(4.0, 4.0, vec![0.25, 0.125, 0.1, 0.05, 0.025]);
    assert!(knapp_experiment(&uneven, &amp).is_err());
    assert!((theory_slope(4.0, 4.0) - (2.0 / 3.0 - 1.0 / 6.0 - 0.25)).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mixed_norm_is_absolutely_homogeneous(c in -5.0f64..5.0, q in 1.0f64..8.0, r in 1.0f64..8.0) {
        let grid = GridSpec::new(2, 4.0, 32).unwrap();
        let spec = MixedNormSpec::new(q, r, 3.5).unwrap().with_nodes(65, 32).unwrap();
        let u = gaussian(grid, 1.0);
        let cu = gaussian(grid, c);
        let times = [0.0, 1.0, 2.0];
        let base = mixed_norm(&[u.clone(), u.clone(), u], &times, &spec).unwrap();
        let scaled = mixed_norm(&[cu.clone(), cu.clone(), cu], &times, &spec).unwrap();
        prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn mixed_norm_triangle_inequality(a in -2.0f64..2.0, s in 0.3f64..2.0, q in 1.0f64..6.0, r in 1.0f64..6.0) {
        let grid = GridSpec::new(2, 4.0, 32).unwrap();
        let spec = MixedNormSpec::new(q, r, 3.5).unwrap().with_nodes(65, 32).unwrap();
        let f = Field::from_fn(grid, |x| (-(x[0] - 0.5).powi(2) - x[1] * x[1]).exp());
        let g = Field::from_fn(grid, |x| a * x[1] * (-s * (x[0] * x[0] + x[1] * x[1])).exp());
        let sum = f.add_scaled(1.0, &g).unwrap();
        let times = [0.0, 0.5];
        let n = |u: &Field| mixed_norm(&[u.clone(), u.clone()], &times, &spec).unwrap();
        prop_assert!(n(&sum) <= n(&f) + n(&g) + 1e-12);
    }
}
