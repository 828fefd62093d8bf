use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tricomi::blowup::{
    c0_estimate, chain_witness, g_functional, jensen_check, radon_radial, riccati_on_floor, sigma,
    spherical_mean, spherical_mean_at, t_operator, t_operator_norm, RadialProfile, RiccatiConfig,
};
use tricomi::nonlinear::{compact_bump, evolve, SimulationConfig};
use tricomi::{Error, Field, GridSpec};

fn gaussian_profile() -> RadialProfile {
    RadialProfile::from_fn(9.0, 9001, |r| (-r * r).exp()).unwrap()
}

#[test]
fn radon_of_gaussians() {
    let prof = gaussian_profile();
    for k in 0..40 {
        let rho = 0.1 * k as f64;
        let three = radon_radial(&prof, 3, rho).unwrap();
        assert!((three - PI * (-rho * rho).exp()).abs() < 1e-6, "n = 3, ρ = {rho}");
        let two = radon_radial(&prof, 2, rho).unwrap();
        assert!((two - PI.sqrt() * (-rho * rho).exp()).abs() < 1e-6, "n = 2, ρ = {rho}");
        assert_eq!(radon_radial(&prof, 3, -rho).unwrap(), three);
    }
}

#[test]
fn unit_disc_chords() {
    let prof = RadialProfile::new(vec![0.0, 1.0, 1.0, 2.0], vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    for k in 0..50 {
        let rho = k as f64 / 50.0;
        let v = radon_radial(&prof, 2, rho).unwrap();
        assert!((v - 2.0 * (1.0 - rho * rho).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn profiles_are_validated() {
    assert!(RadialProfile::new(vec![0.0, 1.0], vec![1.0]).is_err());
    assert!(RadialProfile::new(vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
    assert!(RadialProfile::new(vec![0.0, 1.0, 1.0, 1.0], vec![1.0; 4]).is_err());
}

#[test]
fn spherical_mean_of_radial_fields() {
    let grid = GridSpec::new(2, 6.0, 64).unwrap();
    let u = Field::from_fn(grid, |x| (-(x[0] * x[0] + x[1] * x[1])).exp());
    let prof = spherical_mean(&u).unwrap();
    for (r, v) in prof.radii.iter().zip(&prof.values) {
        assert!((v - (-r * r).exp()).abs() < 2e-3, "r = {r}");
    }
    let grid3 = GridSpec::new(3, 6.0, 32).unwrap();
    let u3 = Field::from_fn(grid3, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp());
    let prof3 = spherical_mean_at(&u3, &[0.0, 1.0, 2.5]).unwrap();
    for (r, v) in prof3.radii.iter().zip(&prof3.values) {
        assert!((v - (-r * r / 2.0).exp()).abs() < 5e-3, "r = {r}");
    }
    assert!(matches!(spherical_mean_at(&u3, &[6.5]), Err(Error::Range(_))));
    let line = GridSpec::new(1, 6.0, 32).unwrap();
    assert!(spherical_mean(&Field::zeros(line)).is_err());
}

#[test]
fn t_operator_fixes_constants_and_is_bounded() {
    let out = t_operator(&vec![1.0; 65], 3, 2.0, 1.0, 3.0).unwrap();
    assert!(out.values.iter().all(|v| (v - 1.0).abs() < 1e-10));
    // For n = 2 a constant maps to 2·(1 − ρ/L)^{−1/2}·… , bounded by 2 at ρ = L.
    let two = t_operator(&vec![1.0; 65], 2, 2.0, 1.0, 3.0).unwrap();
    assert!((two.values.last().unwrap() - 2.0).abs() < 1e-12);
    assert!((two.values[0] - 2.0).abs() < 1e-12);
    let coarse = t_operator_norm(3, 2.0, 1.0, 2.0, 257, 8, 5).unwrap();
    let fine = t_operator_norm(3, 2.0, 1.0, 2.0, 513, 8, 5).unwrap();
    assert!(coarse.measured_norm.is_finite() && coarse.measured_norm >= 1.0 - 1e-6);
    assert!((coarse.measured_norm - fine.measured_norm).abs() < 1e-2 * fine.measured_norm);
}

#[test]
fn riccati_blowup_time_decreases_with_k0() {
    let base = RiccatiConfig { p: 2.0, a: 1.0, q: 3.0, k0: 1.0, k1: 1.0, m: 1.0, t0: 1.0, horizon: 1e6 };
    let times: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&k0| riccati_on_floor(&RiccatiConfig { k0, ..base }).unwrap().blowup_time().unwrap())
        .collect();
    assert!(times.windows(2).all(|w| w[1] < w[0]), "{times:?}");
}

#[test]
fn riccati_matches_the_autonomous_reduction() {
    // With p = 2, a = 1, q = 3 and w(s) = G/(t + M), s = ln(t + M), the ODE
    // becomes w'' + w' = K1 w², integrated here in s by a fine RK4.
    let (k0, k1) = (1.0, 1.0);
    let cfg = RiccatiConfig { p: 2.0, a: 1.0, q: 3.0, k0, k1, m: 1.0, t0: 1.0, horizon: 1e6 };
    let t_star = riccati_on_floor(&cfg).unwrap().blowup_time().unwrap();
    let f = |y: [f64; 2]| [y[1], k1 * y[0] * y[0] - y[1]];
    let (mut s, mut y, h) = (2f64.ln(), [k0, 0.0], 1e-5);
    while y[0] < 1e8 {
        let a = f(y);
        let b = f([y[0] + 0.5 * h * a[0], y[1] + 0.5 * h * a[1]]);
        let c = f([y[0] + 0.5 * h * b[0], y[1] + 0.5 * h * b[1]]);
        let d = f([y[0] + h * c[0], y[1] + h * c[1]]);
        y = [y[0] + h / 6.0 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]), y[1] + h / 6.0 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1])];
        s += h;
    }
    let t_oracle = s.exp() - 1.0;
    assert!((t_star - t_oracle).abs() < 1e-3 * t_oracle, "{t_star} vs {t_oracle}");
}

#[test]
fn c0_brackets() {
    let est = c0_estimate(2.0, 1.0, 3.0, 1.0, 1.0, 1.0, 1e6).unwrap();
    assert!(est.relative_width <= 1e-3);
    assert!(est.survive < est.blowup);
    let cfg = |k0| RiccatiConfig { p: 2.0, a: 1.0, q: 3.0, k0, k1: 1.0, m: 1.0, t0: 1.0, horizon: 1e6 };
    assert!(riccati_on_floor(&cfg(est.survive)).unwrap().blowup_time().is_none());
    assert!(riccati_on_floor(&cfg(est.blowup)).unwrap().blowup_time().is_some());
    assert!(matches!(c0_estimate(2.0, 1.0, 3.5, 1.0, 1.0, 1.0, 1e6), Err(Error::Config(_))));
}

#[test]
fn g_functional_needs_support() {
    let grid = GridSpec::new(2, 8.0, 64).unwrap();
    let u = compact_bump(grid, 2.0);
    let rep = g_functional(&u, 2.0, 3.0).unwrap();
    assert!(rep.holder_ratio >= 1.0);
    assert!(matches!(g_functional(&u, 2.0, 9.0), Err(Error::SupportViolation(_))));
    let wide = Field::from_fn(grid, |_| 1.0);
    assert!(matches!(g_functional(&wide, 2.0, 3.0), Err(Error::SupportViolation(_))));
    let zero = g_functional(&Field::zeros(grid), 2.0, 3.0).unwrap();
    assert!(zero.holder_ratio.is_infinite());
}

#[test]
fn chain_witness_on_a_small_solution() {
    let grid = GridSpec::new(2, 8.0, 64).unwrap();
    let p = (3.0 + 33f64.sqrt()) / 4.0;
    let mut cfg = SimulationConfig::new(p, grid, 0.05, 4.0);
    cfg.data_amplitude = 0.1;
    cfg.store_fields = true;
    cfg.output_every = 5;
    let f = compact_bump(grid, 1.0);
    let trace = evolve(&f, &Field::zeros(grid), &cfg).unwrap();
    let rep = chain_witness(&trace, p, 2, 1.0).unwrap();
    assert!((rep.sigma - (3.0 - 33f64.sqrt()) / 4.0).abs() < 1e-12);
    assert!(rep.sigma_above_minus_one);
    assert!(rep.min_growth_ratio > 0.0 && rep.min_power_integral_ratio > 0.0);
    assert!(rep.samples.iter().all(|s| s.radon > 0.0));

    let mut short = cfg.clone();
    short.horizon = 1.0;
    let trace = evolve(&f, &Field::zeros(grid), &short).unwrap();
    assert!(matches!(chain_witness(&trace, p, 2, 1.0), Err(Error::EmptyReport(_))));
}

#[test]
fn sigma_in_three_dimensions() {
    let p = tricomi::critical_exponent(3).unwrap();
    assert!(sigma(3, p) > -0.75);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jensen_holds_for_random_fields(seed in any::<u64>(), p in 1.1f64..4.0) {
        let grid = GridSpec::new(2, 4.0, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Field::new(grid, (0..grid.len()).map(|_| rng.gen_range(-0.5..0.5)).collect()).unwrap();
        let rep = jensen_check(&u, p).unwrap();
        prop_assert!(rep.holds, "excess {}", rep.worst_excess);
    }

    #[test]
    fn holder_ratio_is_at_least_one(c in 0.2f64..3.0, w in 0.5f64..1.5, p in 1.1f64..4.0) {
        let grid = GridSpec::new(2, 8.0, 32).unwrap();
        let u = Field::from_fn(grid, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 < 9.0 { (c + x[0] * w).max(0.0) * (1.0 - r2 / 9.0) } else { 0.0 }
        });
        let rep = g_functional(&u, p, 3.5).unwrap();
        prop_assert!(rep.holder_ratio >= 1.0 - 1e-12);
    }

    #[test]
    fn radon_is_linear(a in -3.0f64..3.0, rho in 0.0f64..4.0) {
        let g = gaussian_profile();
        let h = RadialProfile::from_fn(9.0, 9001, |r| 1.0 / (1.0 + r * r)).unwrap();
        let sum = RadialProfile::new(g.radii.clone(), g.values.iter().zip(&h.values).map(|(x, y)| x + a * y).collect()).unwrap();
        for n in [2, 3] {
            let lhs = radon_radial(&sum, n, rho).unwrap();
            let rhs = radon_radial(&g, n, rho).unwrap() + a * radon_radial(&h, n, rho).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }
}
