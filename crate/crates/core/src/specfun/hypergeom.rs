use std::sync::OnceLock;

use super::gamma::gamma;
use crate::error::{domain, Result};
use crate::quadrature::{gauss_jacobi, GaussRule};

const NODES: usize = 40;

/// Euler integral `Γ(c)/(Γ(b)Γ(c−b)) ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−zt)^{−a} dt`
/// with its Gauss–Jacobi rule and normalization fixed up front.
struct EulerIntegral {
    a: f64,
    rule: GaussRule,
    scale: f64,
}

impl EulerIntegral {
    fn new(a: f64, b: f64, c: f64) -> Self {
        let alpha = c - b - 1.0;
        let beta = b - 1.0;
        let rule = gauss_jacobi(NODES, alpha, beta);
        let norm = gamma(c) / (gamma(b) * gamma(c - b));
        Self {
            a,
            rule,
            scale: norm * 2f64.powf(-(alpha + beta + 1.0)),
        }
    }

    fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for (u, w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let t = 0.5 * (1.0 + u);
            acc += w * (1.0 - z * t).powf(-self.a);
        }
        acc * self.scale
    }
}

struct F16Tables {
    direct: EulerIntegral,
    near_one_a: EulerIntegral,
    near_one_b: EulerIntegral,
    c_a: f64,
    c_b: f64,
}

fn tables() -> &'static F16Tables {
    static T: OnceLock<F16Tables> = OnceLock::new();
    T.get_or_init(|| {
        let g16 = gamma(1.0 / 6.0);
        let g56 = gamma(5.0 / 6.0);
        F16Tables {
            direct: EulerIntegral::new(1.0 / 6.0, 1.0 / 6.0, 1.0),
            near_one_a: EulerIntegral::new(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0),
            near_one_b: EulerIntegral::new(5.0 / 6.0, 5.0 / 6.0, 5.0 / 3.0),
            c_a: gamma(2.0 / 3.0) / (g56 * g56),
            c_b: -1.5 * gamma(1.0 / 3.0) / (g16 * g16),
        }
    })
}

/// `lim_{z→1⁻} F(1/6, 1/6; 1; z) = Γ(2/3)/Γ(5/6)²`.
pub fn hypergeom_f16_at_one() -> f64 {
    tables().c_a
}

/// Gauss hypergeometric `F(1/6, 1/6; 1; z)` on `[0, 1)`.
///
/// For `z > 1/2` the value is assembled from the expansion about `z = 1`,
/// where the logarithm-free connection applies because `c − a − b = 2/3`.
pub fn hypergeom_f16(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("F(1/6,1/6;1;z) needs 0 ≤ z < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let t = tables();
    if z <= 0.5 {
        return Ok(t.direct.eval(z));
    }
    let w = 1.0 - z;
    Ok(t.c_a * t.near_one_a.eval(w) + t.c_b * w.powf(2.0 / 3.0) * t.near_one_b.eval(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(z: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..20000 {
            let kf = k as f64;
            term *= (kf + 1.0 / 6.0).powi(2) / (kf + 1.0).powi(2) * z;
            sum += term;
            if term < 1e-18 {
                break;
            }
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        assert_eq!(hypergeom_f16(0.0).unwrap(), 1.0);
        for &z in &[0.01, 0.2, 0.5, 0.51, 0.7, 0.9, 0.97] {
            let v = hypergeom_f16(z).unwrap();
            assert!((v - series(z)).abs() < 1e-12, "z = {z}: {v} vs {}", series(z));
        }
    }

    #[test]
    fn limit_at_one() {
        let lim = hypergeom_f16_at_one();
        assert!((lim - 1.062_753_320_279).abs() < 1e-12);
        let v = hypergeom_f16(1.0 - 1e-12).unwrap();
        assert!((v - lim).abs() < 1e-7);
    }

    #[test]
    fn rejects_outside_unit_interval() {
        assert!(hypergeom_f16(1.0).is_err());
        assert!(hypergeom_f16(-0.1).is_err());
        assert!(hypergeom_f16(f64::NAN).is_err());
    }
}
