//! Knapp-type scaling experiment for `A` with `f̂ = χ_D`,
//! `D = {|ξ₁ − 1| < 1/2, |ξ₂| < δ}`.
//!
//! `Af(t, x) = ∫_D e^{i(x·ξ − φ(t)|ξ|)} a₂(t, ξ) dξ` is evaluated by a midpoint
//! sum over cells tiling `D`, which an inverse FFT turns into samples on an
//! anisotropic periodic `x` grid. The carrier `e^{ix₁}` and the half-cell
//! phases have unit modulus and are dropped, since only `|Af|` is needed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::quadrature::{cubic_weights, trapezoid_weights};
use crate::specfun::{phi, phi_inverse};

use super::kernel::least_squares_slope;
use super::norms::lebesgue_sum;
use super::operator::ModelAmplitude;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnappConfig {
    pub deltas: Vec<f64>,
    pub q: f64,
    pub r: f64,
    /// Implicit constant in the tube `R`.
    pub region_constant: f64,
    pub time_nodes: usize,
    /// Radial spacing of the polar norm.
    pub radial_step: f64,
    /// Arc length between angular samples.
    pub arc_step: f64,
    /// Largest admissible `N₁·N₂`.
    pub max_fft_points: usize,
    /// Use `r dr` in the radial integral.
    pub weighted: bool,
}

impl KnappConfig {
    pub fn new(q: f64, r: f64, deltas: Vec<f64>) -> Self {
        Self {
            deltas,
            q,
            r,
            region_constant: 0.25,
            time_nodes: 33,
            radial_step: 0.25,
            arc_step: 0.25,
            max_fft_points: 1 << 23,
            weighted: false,
        }
    }

    /// `δ = 2^{−k}` for `k` in `first..=last`.
    pub fn dyadic(q: f64, r: f64, first: i32, last: i32) -> Self {
        Self::new(q, r, (first..=last).map(|k| 2f64.powi(-k)).collect())
    }

    fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0 && self.r >= 1.0) {
            return Err(config(format!("indices ({}, {}) must be ≥ 1", self.q, self.r)));
        }
        if self.deltas.len() < 5 {
            return Err(config("the Knapp fit needs at least five values of δ"));
        }
        if self.deltas.iter().any(|&d| !(d > 0.0 && d <= 0.25)) {
            return Err(config("every δ must lie in (0, 1/4]"));
        }
        let ratio = self.deltas[1] / self.deltas[0];
        if !(ratio > 0.0 && ratio != 1.0)
            || self
                .deltas
                .windows(2)
                .any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9)
        {
            return Err(config("δ values must form a geometric sequence"));
        }
        if self.time_nodes < 2 || !(self.radial_step > 0.0) || !(self.arc_step > 0.0) {
            return Err(config("invalid Knapp quadrature layout"));
        }
        if !(self.region_constant > 0.0 && self.region_constant <= 0.5) {
            return Err(config("region constant must lie in (0, 1/2]"));
        }
        Ok(())
    }
}

pub fn theory_slope(q: f64, r: f64) -> f64 {
    2.0 / 3.0 - 2.0 / (3.0 * q) - 1.0 / r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnappPoint {
    pub delta: f64,
    /// `‖Af‖ / ‖f‖₂`.
    pub ratio: f64,
    pub mixed_norm: f64,
    pub l2_norm: f64,
    /// `min_R |Af| / (|D| δ^{1/6})`.
    pub lower_bound_constant: f64,
    pub fft_shape: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnappReport {
    pub q: f64,
    pub r: f64,
    pub points: Vec<KnappPoint>,
    pub fitted_slope: f64,
    pub theory_slope: f64,
}

/// Samples of `Af(t, ·)` on one period of the anisotropic grid.
struct SlabField {
    n1: usize,
    n2: usize,
    /// Periods in `x₁` and `x₂`.
    p1: f64,
    p2: f64,
    values: Vec<Complex64>,
}

impl SlabField {
    fn modulus_sq(&self, x1: f64, x2: f64) -> f64 {
        let s1 = (x1 / self.p1).rem_euclid(1.0) * self.n1 as f64;
        let s2 = (x2 / self.p2).rem_euclid(1.0) * self.n2 as f64;
        let (i1, i2) = (s1.floor() as usize, s2.floor() as usize);
        let (w1, w2) = (cubic_weights(s1 - i1 as f64), cubic_weights(s2 - i2 as f64));
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, wa) in w1.iter().enumerate() {
            let r = (i1 + self.n1 + a - 1) % self.n1;
            let row = &self.values[r * self.n2..(r + 1) * self.n2];
            let mut inner = Complex64::new(0.0, 0.0);
            for (b, wb) in w2.iter().enumerate() {
                inner += row[(i2 + self.n2 + b - 1) % self.n2] * wb;
            }
            acc += inner * wa;
        }
        acc.norm_sqr()
    }
}

struct SlabLayout {
    m1: usize,
    m2: usize,
    n1: usize,
    n2: usize,
    d1: f64,
    d2: f64,
}

impl SlabLayout {
    fn new(delta: f64, max_points: usize) -> Result<Self> {
        // Period in x₁ at least 8/δ; sample spacing in x₁ at most 1/2 and in x₂ at most 1/(4δ).
        let m1 = (8.0 / (2.0 * PI * delta)).ceil() as usize;
        let m2 = 16;
        let d1 = 1.0 / m1 as f64;
        let d2 = 2.0 * delta / m2 as f64;
        let p1 = 2.0 * PI / d1;
        let p2 = 2.0 * PI / d2;
        let n1 = ((p1 / 0.5).ceil() as usize).next_power_of_two();
        let n2 = ((p2 * 4.0 * delta).ceil() as usize).next_power_of_two();
        if n1.saturating_mul(n2) > max_points {
            return Err(Error::Resolution(format!(
                "δ = {delta} needs a {n1}×{n2} grid, above the limit of {max_points} points"
            )));
        }
        Ok(Self { m1, m2, n1, n2, d1, d2 })
    }

    fn field(&self, t: f64, amp: &ModelAmplitude, fft: &dyn rustfft::Fft<f64>, fft2: &dyn rustfft::Fft<f64>) -> SlabField {
        let (n1, n2) = (self.n1, self.n2);
        let mut buf = vec![Complex64::new(0.0, 0.0); n1 * n2];
        let ph = phi(t);
        let c1 = self.m1 / 2;
        let c2 = self.m2 / 2;
        let cell = self.d1 * self.d2;
        for i in 0..self.m1 {
            let xi1 = 1.0 + (i as f64 - c1 as f64 + 0.5) * self.d1;
            let row = (i + n1 - c1) % n1;
            for j in 0..self.m2 {
                let xi2 = (j as f64 - c2 as f64 + 0.5) * self.d2;
                let rho = xi1.hypot(xi2);
                let col = (j + n2 - c2) % n2;
                buf[row * n2 + col] = Complex64::from_polar(cell * amp.eval(t, rho), -ph * rho);
            }
        }
        // Inverse (positive exponent) transforms along both axes, unnormalized.
        for r in buf.chunks_mut(n2) {
            fft2.process(r);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n1];
        for c in 0..n2 {
            for r in 0..n1 {
                col[r] = buf[r * n2 + c];
            }
            fft.process(&mut col);
            for r in 0..n1 {
                buf[r * n2 + c] = col[r];
            }
        }
        SlabField {
            n1,
            n2,
            p1: 2.0 * PI / self.d1,
            p2: 2.0 * PI / self.d2,
            values: buf,
        }
    }
}

/// Ratio and lower-bound constant for one `δ`.
pub fn knapp_point(delta: f64, cfg: &KnappConfig, amp: &ModelAmplitude) -> Result<KnappPoint> {
    let layout = SlabLayout::new(delta, cfg.max_fft_points)?;
    let mut planner = FftPlanner::new();
    let fft1 = planner.plan_fft_inverse(layout.n1);
    let fft2 = planner.plan_fft_inverse(layout.n2);

    let t_max = phi_inverse(1.0 / delta);
    let times: Vec<f64> = (0..cfg.time_nodes)
        .map(|k| t_max * k as f64 / (cfg.time_nodes - 1) as f64)
        .collect();
    let rho_max = 2.0 / delta;
    let n_r = (rho_max / cfg.radial_step).ceil() as usize + 1;
    let radii: Vec<f64> = (0..n_r).map(|i| rho_max * i as f64 / (n_r - 1) as f64).collect();
    let mut rw = trapezoid_weights(&radii);
    if cfg.weighted {
        rw.iter_mut().zip(&radii).for_each(|(w, r)| *w *= r);
    }
    let area = 2.0 * delta;
    let floor = area * delta.powf(1.0 / 6.0);
    let c = cfg.region_constant;

    let mut slice_norms = Vec::with_capacity(times.len());
    let mut lower = f64::INFINITY;
    for &t in &times {
        let field = layout.field(t, amp, fft1.as_ref(), fft2.as_ref());
        let angular: Vec<f64> = radii
            .iter()
            .map(|&rho| {
                let m = ((2.0 * PI * rho / cfg.arc_step).ceil() as usize).max(16);
                let m = m + m % 2;
                let dth = 2.0 * PI / m as f64;
                let s: f64 = (0..m)
                    .map(|j| {
                        let (sn, cs) = (dth * j as f64).sin_cos();
                        field.modulus_sq(rho * cs, rho * sn)
                    })
                    .sum();
                (s * dth).sqrt()
            })
            .collect();
        slice_norms.push(lebesgue_sum(&angular, &rw, cfg.r));
        // Samples of the tube R at this time.
        let centre = phi(t);
        for a in 0..5 {
            let x1 = centre + c * (a as f64 / 2.0 - 1.0);
            for b in 0..9 {
                let x2 = c / delta * (b as f64 / 4.0 - 1.0);
                lower = lower.min(field.modulus_sq(x1, x2).sqrt() / floor);
            }
        }
    }
    let mixed = if cfg.q.is_infinite() {
        lebesgue_sum(&slice_norms, &[], cfg.q)
    } else {
        lebesgue_sum(&slice_norms, &trapezoid_weights(&times), cfg.q)
    };
    let l2 = area.sqrt() / (2.0 * PI);
    if !mixed.is_finite() {
        return Err(Error::Numerical(format!("non-finite Knapp norm at δ = {delta}")));
    }
    Ok(KnappPoint {
        delta,
        ratio: mixed / l2,
        mixed_norm: mixed,
        l2_norm: l2,
        lower_bound_constant: lower,
        fft_shape: [layout.n1, layout.n2],
    })
}

/// Runs every `δ` and fits `log ratio` against `log δ`.
pub fn knapp_experiment(cfg: &KnappConfig, amp: &ModelAmplitude) -> Result<KnappReport> {
    cfg.validate()?;
    let points = cfg
        .deltas
        .iter()
        .map(|&d| knapp_point(d, cfg, amp))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = points.iter().map(|p| (p.delta.ln(), p.ratio.ln())).collect();
    Ok(KnappReport {
        q: cfg.q,
        r: cfg.r,
        fitted_slope: least_squares_slope(&pts),
        theory_slope: theory_slope(cfg.q, cfg.r),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_exponent() {
        assert!((theory_slope(7.5, 2.5) - 0.177_777_777_777_777_8).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_or_non_geometric_ladders() {
        let mut cfg = KnappConfig::dyadic(7.5, 2.5, 3, 6);
        assert!(cfg.validate().is_err());
        cfg.deltas = vec![0.25, 0.125, 0.1, 0.05, 0.025];
        assert!(cfg.validate().is_err());
        assert!(KnappConfig::dyadic(7.5, 2.5, 3, 7).validate().is_ok());
    }

    #[test]
    fn resolution_limit() {
        let mut cfg = KnappConfig::dyadic(7.5, 2.5, 3, 7);
        cfg.max_fft_points = 1 << 10;
        assert!(matches!(
            knapp_point(0.125, &cfg, &ModelAmplitude),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn slab_matches_direct_sum() {
        let delta = 0.25;
        let layout = SlabLayout::new(delta, 1 << 22).unwrap();
        let mut planner = FftPlanner::new();
        let f1 = planner.plan_fft_inverse(layout.n1);
        let f2 = planner.plan_fft_inverse(layout.n2);
        let t = 1.5;
        let field = layout.field(t, &ModelAmplitude, f1.as_ref(), f2.as_ref());
        let (c1, c2) = (layout.m1 / 2, layout.m2 / 2);
        let direct = |x1: f64, x2: f64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..layout.m1 {
                let xi1 = 1.0 + (i as f64 - c1 as f64 + 0.5) * layout.d1;
                for j in 0..layout.m2 {
                    let xi2 = (j as f64 - c2 as f64 + 0.5) * layout.d2;
                    let rho = xi1.hypot(xi2);
                    acc += Complex64::from_polar(
                        layout.d1 * layout.d2 * ModelAmplitude.eval(t, rho),
                        x1 * xi1 + x2 * xi2 - phi(t) * rho,
                    );
                }
            }
            acc.norm()
        };
        for &(x1, x2) in &[(0.0, 0.0), (1.3, 2.0), (-4.1, 9.5), (phi(t), -3.0)] {
            let got = field.modulus_sq(x1, x2).sqrt();
            let want = direct(x1, x2);
            assert!((got - want).abs() < 2e-3 * want.max(1e-2), "({x1}, {x2}): {got} vs {want}");
        }
    }
}
