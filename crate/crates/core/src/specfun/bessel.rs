use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `J_k(y) = (−i)^k/(2π) ∫₀^{2π} e^{iy cos θ − ikθ} dθ` by the trapezoid rule.
///
/// The integrand is periodic and entire, so the rule converges geometrically
/// once the node count exceeds `|y| + |k|`.
pub fn bessel_j(k: i32, y: f64) -> Result<f64> {
    if k.unsigned_abs() > 256 || !y.is_finite() || y.abs() > 1e4 {
        return Err(Error::Range(format!(
            "bessel_j supports |k| ≤ 256 and |y| ≤ 1e4, got ({k}, {y})"
        )));
    }
    // Aliased coefficients are J_{k±m}(y); past the turning point they decay
    // on the scale |y|^{1/3}.
    let m = (y.abs() + f64::from(k.unsigned_abs()) + 10.0 * y.abs().cbrt()) as usize + 64;
    let h = 2.0 * PI / m as f64;
    // Real part of (−i)^k e^{i(y cos θ − kθ)} is cos(y cos θ − kθ − kπ/2).
    let shift = f64::from(k) * PI / 2.0;
    let kf = f64::from(k);
    let mut acc = 0.0;
    for j in 0..m {
        let th = h * j as f64;
        acc += (y * th.cos() - kf * th - shift).cos();
    }
    Ok(acc / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(k: u32, y: f64) -> f64 {
        let mut term = (0.5 * y).powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= -(0.25 * y * y) / (f64::from(m) * f64::from(m + k));
            sum += term;
            if term.abs() < 1e-20 {
                break;
            }
        }
        sum
    }

    #[test]
    fn trivial_values() {
        assert!((bessel_j(0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(bessel_j(1, 0.0).unwrap().abs() < 1e-15);
        assert!(bessel_j(0, 2.404_826).unwrap().abs() < 1e-5);
    }

    #[test]
    fn agrees_with_series() {
        for k in 0..8u32 {
            for &y in &[0.3, 1.0, 4.5, 9.0] {
                let a = bessel_j(k as i32, y).unwrap();
                assert!((a - series(k, y)).abs() < 1e-12, "J_{k}({y})");
                let neg = bessel_j(-(k as i32), y).unwrap();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((neg - sign * a).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn range_checks() {
        assert!(bessel_j(257, 1.0).is_err());
        assert!(bessel_j(0, 2e4).is_err());
        // Large-argument asymptotics: J_0(y) ≈ √(2/(πy)) cos(y − π/4).
        let y = 5000.0;
        let approx = (2.0 / (PI * y)).sqrt() * (y - PI / 4.0).cos();
        assert!((bessel_j(0, y).unwrap() - approx).abs() < 1e-5);
    }
}
