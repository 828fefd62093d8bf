use std::f64::consts::PI;

use serde::Serialize;

use crate::quadrature::tanh_sinh_unit;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    a
}

/// Gamma function for real arguments (Lanczos, with reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::NAN;
        }
        return PI / (s * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument");
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// Beta function by tanh-sinh quadrature of the Euler integral.
///
/// Independent of [`gamma`], so the two can check each other.
pub fn beta_quadrature(a: f64, b: f64) -> f64 {
    tanh_sinh_unit(|x, y| x.powf(a - 1.0) * y.powf(b - 1.0), 8)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub error: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub(crate) fn new(name: &str, value: f64, expected: f64, tol: f64) -> Self {
        let error = (value - expected).abs();
        Self {
            name: name.to_string(),
            value,
            expected,
            error,
            pass: error <= tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaBetaReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// `B(1/6, 5/6) = Γ(1/6)Γ(5/6) = 2π` and `Γ(1) = 1`.
pub fn gamma_beta_identities() -> GammaBetaReport {
    let b = beta_quadrature(1.0 / 6.0, 5.0 / 6.0);
    let gg = gamma(1.0 / 6.0) * gamma(5.0 / 6.0);
    let checks = vec![
        IdentityCheck::new("B(1/6,5/6)/(Γ(1/6)Γ(5/6))", b / gg, 1.0, 1e-10),
        IdentityCheck::new("B(1/6,5/6)", b, 2.0 * PI, 1e-10),
        IdentityCheck::new("Γ(1)", gamma(1.0), 1.0, 1e-15),
    ];
    let pass = checks.iter().all(|c| c.pass);
    GammaBetaReport { checks, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(5.0), 24.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.0 / 3.0) - 2.678_938_534_707_747_6).abs() < 1e-13);
        assert!((gamma(2.0 / 3.0) - 1.354_117_939_426_400_4).abs() < 1e-13);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((ln_gamma(10.5) - gamma(10.5).ln()).abs() < 1e-12);
        assert!((ln_gamma(0.2) - gamma(0.2).ln()).abs() < 1e-13);
    }

    #[test]
    fn identities_hold() {
        let r = gamma_beta_identities();
        for c in &r.checks {
            assert!(c.pass, "{} off by {}", c.name, c.error);
        }
        assert!((beta_quadrature(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-14);
    }
}
