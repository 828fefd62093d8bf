mod common;

use std::f64::consts::PI;

use tricomi::specfun::{
    airy, gamma, hypergeom_f16, hypergeom_f16_at_one, phi, tricomi_multipliers,
};

#[test]
fn airy_matches_fixed_point_series() {
    let mut x = -10.0;
    while x <= 10.0 {
        let a = airy(x).unwrap();
        let (ai, aip, bi, bip) = common::airy_series(x);
        assert!((a.ai - ai).abs() < 1e-12, "Ai({x}): {} vs {ai}", a.ai);
        assert!((a.ai_prime - aip).abs() < 1e-11, "Ai'({x})");
        assert!((a.bi - bi).abs() < 1e-12 * bi.abs().max(1.0), "Bi({x})");
        assert!((a.bi_prime - bip).abs() < 1e-12 * bip.abs().max(1.0), "Bi'({x})");
        x += 0.173;
    }
}

#[test]
fn airy_at_origin() {
    let a = airy(0.0).unwrap();
    assert!((a.ai - 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0)).abs() < 1e-14);
    assert!((a.ai_prime + 3f64.powf(-1.0 / 3.0) / gamma(1.0 / 3.0)).abs() < 1e-14);
}

#[test]
fn airy_positive_tail_matches_bessel_k() {
    let mut x = 0.5;
    while x <= 40.0 {
        let a = airy(x).unwrap();
        let (ai, aip) = common::airy_positive_k(x);
        assert!((a.ai - ai).abs() <= 1e-10 && (a.ai - ai).abs() <= 1e-9 * ai, "Ai({x})");
        assert!((a.ai_prime - aip).abs() <= 1e-10, "Ai'({x})");
        x += 0.61;
    }
}

#[test]
fn airy_negative_tail_matches_rk() {
    // Integrate from the series oracle at −8 outward.
    let (ai, aip, bi, bip) = common::airy_series(-8.0);
    for &x in &[-9.0, -12.5, -20.0, -31.0, -40.0] {
        let steps = ((8.0 - x) as f64).abs() as usize * 4000;
        let a = common::rk4_richardson(ai, aip, -8.0, x, steps, |s, w| s * w);
        let b = common::rk4_richardson(bi, bip, -8.0, x, steps, |s, w| s * w);
        let got = airy(x).unwrap();
        assert!((got.ai - a.0).abs() < 1e-10, "Ai({x}): {} vs {}", got.ai, a.0);
        assert!((got.bi - b.0).abs() < 1e-10, "Bi({x})");
        assert!((got.ai_prime - a.1).abs() < 1e-9, "Ai'({x})");
        assert!((got.bi_prime - b.1).abs() < 1e-9, "Bi'({x})");
    }
}

#[test]
fn airy_minus_five_against_rk_from_origin() {
    let a0 = airy(0.0).unwrap();
    let coarse = common::rk4_second_order(a0.ai, a0.ai_prime, 0.0, -5.0, 20_000, |s, w| s * w);
    let fine = common::rk4_second_order(a0.ai, a0.ai_prime, 0.0, -5.0, 40_000, |s, w| s * w);
    assert!((coarse.0 - fine.0).abs() < 1e-12);
    let got = airy(-5.0).unwrap();
    assert!((got.ai - fine.0).abs() < 1e-10);
    assert!((got.ai_prime - fine.1).abs() < 1e-10);
}

#[test]
fn multipliers_match_mode_ode() {
    for &(t, l) in &[(1.0, 2.0), (0.3, 7.5), (2.5, 0.4), (4.0, 3.0), (5.0, 8.0)] {
        let m = tricomi_multipliers(t, l).unwrap();
        let a = common::forced_mode(t, l, 1.0, 0.0, |_| 0.0);
        let b = common::forced_mode(t, l, 0.0, 1.0, |_| 0.0);
        assert!((m.v1 - a.0).abs() < 1e-8, "v1({t},{l})");
        assert!((m.v1_dt - a.1).abs() < 1e-8 * (1.0 + l));
        assert!((m.v2 - b.0).abs() < 1e-8, "v2({t},{l})");
        assert!((m.v2_dt - b.1).abs() < 1e-8 * (1.0 + l));
    }
}

#[test]
fn multipliers_match_confluent_series() {
    for i in 0..30 {
        let t = 5.0 * ((i * 7 + 3) % 30) as f64 / 29.0;
        let l = 8.0 * ((i * 11 + 5) % 30) as f64 / 29.0;
        let m = tricomi_multipliers(t, l).unwrap();
        let oracle = common::confluent_v1(t, l);
        assert!((m.v1 - oracle).abs() < 1e-7, "({t}, {l}): {} vs {oracle}", m.v1);
        assert!((m.z.im - 2.0 * phi(t) * l).abs() < 1e-12);
    }
}

#[test]
fn v1_decay_constant_is_stable() {
    // sup |v1|(1+φλ)^{1/6} over a grid, and over a twice finer grid.
    let fit = |n: usize| {
        let mut c: f64 = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let t = 5.0 * i as f64 / n as f64;
                let l = 8.0 * j as f64 / n as f64;
                let m = tricomi_multipliers(t, l).unwrap();
                c = c.max(m.v1.abs() * (1.0 + phi(t) * l).powf(1.0 / 6.0));
            }
        }
        c
    };
    let (a, b) = (fit(40), fit(80));
    assert!(a.is_finite() && b <= 2.0 * a && a <= 2.0 * b);
}

#[test]
fn hypergeometric_against_series() {
    for i in 1..=18 {
        let z = 0.05 * i as f64;
        let v = hypergeom_f16(z).unwrap();
        assert!((v - common::f16_series(z)).abs() < 1e-12, "z = {z}");
    }
    let near = hypergeom_f16(1.0 - 1e-10).unwrap();
    assert!((near - hypergeom_f16_at_one()).abs() < 1e-6);
    // Gauss summation, independently of the library's gamma.
    let g = |x: f64| -> f64 {
        // Γ(x) = Γ(x+12)/(x(x+1)…(x+11)) with Stirling for Γ(x+12)
        let y = x + 12.0;
        let series = 1.0 / (12.0 * y) - 1.0 / (360.0 * y.powi(3)) + 1.0 / (1260.0 * y.powi(5))
            - 1.0 / (1680.0 * y.powi(7));
        let lg = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series;
        lg.exp() / (0..12).map(|k| x + k as f64).product::<f64>()
    };
    let gauss = g(2.0 / 3.0) / g(5.0 / 6.0).powi(2);
    assert!((hypergeom_f16_at_one() - gauss).abs() < 1e-12);
}
