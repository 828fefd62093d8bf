//! The oscillatory operator `A` with a model amplitude, and angular Fourier
//! coefficients of `f̂` in polar frequency coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::grid::{inverse_transform_complex, transform, transform_complex, ComplexField, Field};
use crate::quadrature::gauss_legendre;
use crate::specfun::phi;

use super::littlewood_paley::smooth_step;

/// `a₂(t, ξ) = (1 + φ(t)|ξ|)^{−1/6} χ(|ξ|)`, where `χ` is a smooth bump equal
/// to 1 on `[1/2, 1]` and vanishing outside `(1/4, 2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ModelAmplitude;

impl ModelAmplitude {
    pub const INNER: f64 = 0.25;
    pub const OUTER: f64 = 2.0;

    /// `χ(ρ) = S(4ρ − 1)(1 − S(ρ − 1))`.
    pub fn annulus(&self, rho: f64) -> f64 {
        smooth_step(4.0 * rho - 1.0) * (1.0 - smooth_step(rho - 1.0))
    }

    pub fn eval(&self, t: f64, rho: f64) -> f64 {
        let chi = self.annulus(rho);
        if chi == 0.0 {
            return 0.0;
        }
        (1.0 + phi(t) * rho).powf(-1.0 / 6.0) * chi
    }

    /// `sup ρᵏ |∂ᵏ_ρ a₂| (1 + φ(t)ρ)^{1/6}` for `k = 0, 1, 2`, by central
    /// differences on the given times.
    pub fn derivative_constants(&self, times: &[f64], samples: usize) -> [f64; 3] {
        let h = 1e-4;
        let mut c = [0.0f64; 3];
        for &t in times {
            for i in 0..samples {
                let rho = Self::INNER + (Self::OUTER - Self::INNER) * (i as f64 + 0.5) / samples as f64;
                let (m, a, p) = (self.eval(t, rho - h), self.eval(t, rho), self.eval(t, rho + h));
                let w = (1.0 + phi(t) * rho).powf(1.0 / 6.0);
                c[0] = c[0].max(a.abs() * w);
                c[1] = c[1].max(((p - m) / (2.0 * h)).abs() * rho * w);
                c[2] = c[2].max(((p - 2.0 * a + m) / (h * h)).abs() * rho * rho * w);
            }
        }
        c
    }
}

/// `(Af)(t) = F⁻¹[e^{−iφ(t)|ξ|} a₂(t, ξ) f̂]`.
///
/// The amplitude cuts `f̂` to its annulus, so no separate projection is
/// needed. With `a₂ ≡ 1` this would be the identity at `t = 0`.
pub fn apply_a(f: &Field, t: f64, amp: &ModelAmplitude) -> Result<ComplexField> {
    if !(t >= 0.0) {
        return Err(domain(format!("time {t} must be nonnegative")));
    }
    let grid = *f.grid();
    let mut spec = transform(f);
    let ph = phi(t);
    for (k, c) in spec.coeffs_mut().iter_mut().enumerate() {
        let xi = grid.frequency_norm(k);
        *c *= Complex64::from_polar(amp.eval(t, xi), -ph * xi);
    }
    Ok(inverse_transform_complex(&spec))
}

/// Same as [`apply_a`] for complex input.
pub fn apply_a_complex(f: &ComplexField, t: f64, amp: &ModelAmplitude) -> Result<ComplexField> {
    if !(t >= 0.0) {
        return Err(domain(format!("time {t} must be nonnegative")));
    }
    let grid = *f.grid();
    let mut spec = transform_complex(f);
    let ph = phi(t);
    for (k, c) in spec.coeffs_mut().iter_mut().enumerate() {
        let xi = grid.frequency_norm(k);
        *c *= Complex64::from_polar(amp.eval(t, xi), -ph * xi);
    }
    Ok(inverse_transform_complex(&spec))
}

/// Polar layout of the frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarFrequencySpec {
    /// Gauss–Legendre nodes in `ρ`.
    pub radial_nodes: usize,
    /// Uniform angles `ω`, even.
    pub angular_nodes: usize,
    /// Outer radius; `None` takes the axis Nyquist frequency `π/h`.
    pub rho_max: Option<f64>,
}

impl Default for PolarFrequencySpec {
    fn default() -> Self {
        Self {
            radial_nodes: 64,
            angular_nodes: 64,
            rho_max: None,
        }
    }
}

/// `c_k(ρ) = (2π)^{−1} ∫ f̂(ρ, ω) e^{−ikω} dω`, with `f̂(ξ) = ∫ f e^{−ix·ξ} dx`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularCoefficients {
    pub rho: Vec<f64>,
    pub weights: Vec<f64>,
    /// `coeffs[i][k]` in FFT order: `k = 0, 1, …, K/2−1, −K/2, …, −1`.
    pub coeffs: Vec<Vec<Complex64>>,
    /// `‖f‖₂²` on the grid.
    pub norm_sq: f64,
    /// `(2π)^{−1} Σ_k ∫ |c_k(ρ)|² ρ dρ`; equals `norm_sq` by Plancherel.
    pub plancherel: f64,
}

impl AngularCoefficients {
    /// Signed angular index of column `col`.
    pub fn index(&self, col: usize) -> i64 {
        let n = self.coeffs.first().map_or(0, |c| c.len()) as i64;
        let c = col as i64;
        if c < n / 2 {
            c
        } else {
            c - n
        }
    }

    /// `Σ_i w_i ρ_i |c_k(ρ_i)|²` for one angular index.
    pub fn energy(&self, k: i64) -> f64 {
        let n = self.coeffs.first().map_or(0, |c| c.len()) as i64;
        if k.abs() >= n / 2 {
            return 0.0;
        }
        let col = k.rem_euclid(n) as usize;
        self.coeffs
            .iter()
            .zip(self.rho.iter().zip(&self.weights))
            .map(|(c, (r, w))| w * r * c[col].norm_sqr())
            .sum()
    }

    pub fn plancherel_defect(&self) -> f64 {
        (self.plancherel - self.norm_sq).abs() / self.norm_sq.max(f64::MIN_POSITIVE)
    }
}

pub fn angular_coefficients(f: &Field, spec: &PolarFrequencySpec) -> Result<AngularCoefficients> {
    angular_coefficients_complex(&f.to_complex(), spec)
}

/// Angular coefficients of a complex field, with `f̂` evaluated exactly on
/// the polar nodes as the trigonometric sum `h² Σ f(x_j) e^{−ix_j·ξ}`.
pub fn angular_coefficients_complex(
    f: &ComplexField,
    spec: &PolarFrequencySpec,
) -> Result<AngularCoefficients> {
    let grid = *f.grid();
    if grid.dim() != 2 {
        return Err(Error::Precondition(format!(
            "angular coefficients need n = 2, got n = {}",
            grid.dim()
        )));
    }
    if spec.angular_nodes < 2 || spec.angular_nodes % 2 != 0 || spec.radial_nodes == 0 {
        return Err(crate::error::config("angular nodes must be even, radial nodes positive"));
    }
    let h = grid.spacing();
    let nyquist = PI / h;
    let rho_max = spec.rho_max.unwrap_or(nyquist);
    if !(rho_max > 0.0) || rho_max > nyquist * (1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "polar radius {rho_max} exceeds the grid's frequency range {nyquist}"
        )));
    }
    let n = grid.points();
    let values = f.values();
    let axis: Vec<f64> = (0..n).map(|i| grid.axis_coordinate(i)).collect();
    let (rho, weights) = gauss_legendre(spec.radial_nodes).mapped(0.0, rho_max);
    let m = spec.angular_nodes;
    let fft = FftPlanner::new().plan_fft_forward(m);
    let cell = grid.cell_volume();

    let coeffs: Vec<Vec<Complex64>> = rho
        .iter()
        .map(|&r| {
            let mut ring: Vec<Complex64> = (0..m)
                .map(|j| {
                    let (s, c) = (2.0 * PI * j as f64 / m as f64).sin_cos();
                    let (x1, x2) = (r * c, r * s);
                    let e2: Vec<Complex64> = axis.iter().map(|&y| Complex64::from_polar(1.0, -x2 * y)).collect();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i1, &y1) in axis.iter().enumerate() {
                        let row = &values[i1 * n..(i1 + 1) * n];
                        let inner: Complex64 = row.iter().zip(&e2).map(|(v, e)| v * e).sum();
                        acc += inner * Complex64::from_polar(1.0, -x1 * y1);
                    }
                    acc * cell
                })
                .collect();
            fft.process(&mut ring);
            ring.iter_mut().for_each(|c| *c /= m as f64);
            ring
        })
        .collect();

    let norm_sq = f.l2_norm().powi(2);
    let plancherel = coeffs
        .iter()
        .zip(rho.iter().zip(&weights))
        .map(|(c, (r, w))| w * r * c.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        / (2.0 * PI);
    Ok(AngularCoefficients {
        rho,
        weights,
        coeffs,
        norm_sq,
        plancherel,
    })
}
