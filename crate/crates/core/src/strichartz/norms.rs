//! Mixed angular norms `L^q_t L^r_{|x|} L²_θ` and homogeneous Sobolev norms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::grid::{transform, ComplexField, Field, GridSpec};
use crate::quadrature::trapezoid_weights;

/// Polar quadrature layout for the mixed norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub q: f64,
    pub r: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Outer radius of the radial integral.
    pub radius: f64,
    /// Use `r dr` instead of the plain `dr`.
    pub weighted: bool,
}

impl MixedNormSpec {
    pub fn new(q: f64, r: f64, radius: f64) -> Result<Self> {
        Self {
            q,
            r,
            radial_nodes: 129,
            angular_nodes: 128,
            radius,
            weighted: false,
        }
        .validated()
    }

    pub fn with_nodes(mut self, radial: usize, angular: usize) -> Result<Self> {
        self.radial_nodes = radial;
        self.angular_nodes = angular;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.q >= 1.0) || !(self.r >= 1.0) {
            return Err(config(format!(
                "mixed-norm indices must be ≥ 1, got ({}, {})",
                self.q, self.r
            )));
        }
        if self.angular_nodes < 2 || self.angular_nodes % 2 != 0 {
            return Err(config("the number of angles must be even and ≥ 2"));
        }
        if self.radial_nodes < 2 {
            return Err(config("need at least two radial nodes"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(config(format!("radius {} must be positive", self.radius)));
        }
        Ok(self)
    }

    fn radial_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let nodes: Vec<f64> = (0..self.radial_nodes)
            .map(|i| self.radius * i as f64 / (self.radial_nodes - 1) as f64)
            .collect();
        let mut w = trapezoid_weights(&nodes);
        if self.weighted {
            w.iter_mut().zip(&nodes).for_each(|(w, r)| *w *= r);
        }
        (nodes, w)
    }
}

/// `(∫ v^s dμ)^{1/s}` for nonnegative samples, or the maximum when `s = ∞`.
pub fn lebesgue_sum(values: &[f64], weights: &[f64], s: f64) -> f64 {
    if s.is_infinite() {
        return values.iter().fold(0.0, |m, &v| m.max(v));
    }
    let acc: f64 = values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| w * v.powf(s))
        .sum();
    acc.powf(1.0 / s)
}

/// `L^r_{|x|} L²_θ` of a function given through `|u(x, y)|²`.
pub(crate) fn polar_norm(spec: &MixedNormSpec, modulus_sq: impl Fn(f64, f64) -> f64 + Sync) -> f64 {
    let (nodes, weights) = spec.radial_weights();
    let n = spec.angular_nodes;
    let dtheta = 2.0 * PI / n as f64;
    let trig: Vec<(f64, f64)> = (0..n).map(|j| (dtheta * j as f64).sin_cos()).collect();
    let angular: Vec<f64> = nodes
        .iter()
        .map(|&rad| {
            let s: f64 = trig
                .iter()
                .map(|&(sn, cs)| modulus_sq(rad * cs, rad * sn))
                .sum();
            (s * dtheta).sqrt()
        })
        .collect();
    lebesgue_sum(&angular, &weights, spec.r)
}

fn check_polar(grid: &GridSpec, spec: &MixedNormSpec) -> Result<()> {
    if grid.dim() != 2 {
        return Err(Error::Precondition(format!(
            "angular mixed norms need a two-dimensional grid, got n = {}",
            grid.dim()
        )));
    }
    if spec.radius > grid.half_width() * (1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "polar radius {} exceeds the box half width {}",
            spec.radius,
            grid.half_width()
        )));
    }
    Ok(())
}

/// `‖u(t)‖_{L^r_{|x|} L²_θ}` of one real slice.
pub fn slice_norm(u: &Field, spec: &MixedNormSpec) -> Result<f64> {
    check_polar(u.grid(), spec)?;
    check_finite(u.values().iter().copied())?;
    Ok(polar_norm(spec, |x, y| u.interpolate(&[x, y]).powi(2)))
}

pub fn slice_norm_complex(u: &ComplexField, spec: &MixedNormSpec) -> Result<f64> {
    check_polar(u.grid(), spec)?;
    check_finite(u.values().iter().flat_map(|c| [c.re, c.im]))?;
    Ok(polar_norm(spec, |x, y| u.interpolate(&[x, y]).norm_sqr()))
}

fn check_finite(mut it: impl Iterator<Item = f64>) -> Result<()> {
    if it.any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite samples in a mixed norm".into()));
    }
    Ok(())
}

/// Time norm of per-slice norms with trapezoid weights in `t`.
pub fn time_norm(slice_norms: &[f64], times: &[f64], q: f64) -> Result<f64> {
    if slice_norms.len() != times.len() {
        return Err(Error::GridMismatch(format!(
            "{} slice norms for {} times",
            slice_norms.len(),
            times.len()
        )));
    }
    if q.is_infinite() {
        return Ok(lebesgue_sum(slice_norms, &[], q));
    }
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition(
            "a finite time index needs at least two increasing time nodes".into(),
        ));
    }
    Ok(lebesgue_sum(slice_norms, &trapezoid_weights(times), q))
}

/// `(∫(∫(∫|u|² dθ)^{r/2} dr)^{q/r} dt)^{1/q}` over the given slices.
pub fn mixed_norm(slices: &[Field], times: &[f64], spec: &MixedNormSpec) -> Result<f64> {
    let norms = slices
        .iter()
        .map(|u| slice_norm(u, spec))
        .collect::<Result<Vec<_>>>()?;
    time_norm(&norms, times, spec.q)
}

pub fn mixed_norm_complex(slices: &[ComplexField], times: &[f64], spec: &MixedNormSpec) -> Result<f64> {
    let norms = slices
        .iter()
        .map(|u| slice_norm_complex(u, spec))
        .collect::<Result<Vec<_>>>()?;
    time_norm(&norms, times, spec.q)
}

/// `Ḣˢ` norm with an optional note about a dropped mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevNorm {
    pub value: f64,
    pub warning: Option<String>,
}

/// `‖|ξ|ˢ f̂‖₂` over the discrete frequencies, normalized so that `s = 0`
/// gives the `L²` norm of `f`.
pub fn hdot_norm(f: &Field, s: f64) -> Result<SobolevNorm> {
    if !s.is_finite() {
        return Err(config(format!("Sobolev index {s} must be finite")));
    }
    let grid = f.grid();
    let spec = transform(f);
    let mut acc = 0.0;
    let mut warning = None;
    for (k, c) in spec.coeffs().iter().enumerate() {
        let xi = grid.frequency_norm(k);
        if xi == 0.0 {
            if s < 0.0 {
                if c.norm() > 1e-12 * grid.len() as f64 * f.sup_norm().max(f64::MIN_POSITIVE) {
                    warning = Some(format!(
                        "nonzero mean {:.3e} dropped for s = {s}",
                        c.re / grid.len() as f64
                    ));
                }
                continue;
            }
            if s > 0.0 {
                continue;
            }
        }
        acc += xi.powf(2.0 * s) * c.norm_sqr();
    }
    let scale = grid.cell_volume() / grid.len() as f64;
    Ok(SobolevNorm {
        value: (acc * scale).sqrt(),
        warning,
    })
}
