//! Dyadic Littlewood–Paley bank built from a smoothstep in `log₂`.
//!
//! With `S(x) = e^{−1/x}/(e^{−1/x} + e^{−1/(1−x)})` on `(0, 1)` (0 below, 1
//! above) the low-pass profile is `m(τ) = 1 − S(log₂ τ)` and the bump is
//! `β(τ) = m(τ) − m(2τ)`, supported in `(1/2, 2)`. The partial sums
//! `Σ_{j=a}^{b} β(2^{−j}τ)` telescope to `m(2^{−b}τ) − m(2^{1−a}τ)`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, Error, Result};
use crate::grid::{inverse_transform, transform, Field, GridSpec};

use super::member_rng;

/// Smooth transition from 0 at `x ≤ 0` to 1 at `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// `m(τ)`: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn low_pass(tau: f64) -> f64 {
    if tau <= 0.0 {
        1.0
    } else {
        1.0 - smooth_step(tau.log2())
    }
}

/// `β(τ) = m(τ) − m(2τ)`.
pub fn bump(tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let l = tau.log2();
    smooth_step(l + 1.0) - smooth_step(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LittlewoodPaleyBank {
    pub j_min: i32,
    pub j_max: i32,
}

impl LittlewoodPaleyBank {
    pub fn new(j_min: i32, j_max: i32) -> Result<Self> {
        if j_min > j_max {
            return Err(config(format!("empty bank [{j_min}, {j_max}]")));
        }
        Ok(Self { j_min, j_max })
    }

    /// Smallest bank whose partition covers every nonzero grid frequency.
    pub fn covering(grid: &GridSpec) -> Self {
        let lo = grid.frequency_unit();
        let hi = lo * (grid.dim() as f64).sqrt() * (grid.points() / 2) as f64;
        Self {
            j_min: lo.log2().floor() as i32,
            j_max: hi.log2().ceil() as i32,
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn len(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Σ_j β(2^{−j}τ)` summed term by term.
    pub fn partition_sum(&self, tau: f64) -> f64 {
        self.indices().map(|j| bump(tau * 2f64.powi(-j))).sum()
    }

    fn check(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::Range(format!(
                "band {j} outside the bank [{}, {}]",
                self.j_min, self.j_max
            )));
        }
        Ok(())
    }
}

/// `P_j f`: multiplies `f̂` by `β(2^{−j}|ξ|)`.
pub fn lp_project(f: &Field, j: i32, bank: &LittlewoodPaleyBank) -> Result<Field> {
    bank.check(j)?;
    let grid = *f.grid();
    let mut spec = transform(f);
    let scale = 2f64.powi(-j);
    for (k, c) in spec.coeffs_mut().iter_mut().enumerate() {
        *c *= bump(scale * grid.frequency_norm(k));
    }
    Ok(inverse_transform(&spec))
}

/// All projections of `f`, one per band of the bank.
pub fn lp_decompose(f: &Field, bank: &LittlewoodPaleyBank) -> Vec<Field> {
    let grid = *f.grid();
    let spec = transform(f);
    bank.indices()
        .map(|j| {
            let mut s = spec.clone();
            let scale = 2f64.powi(-j);
            for (k, c) in s.coeffs_mut().iter_mut().enumerate() {
                *c *= bump(scale * grid.frequency_norm(k));
            }
            inverse_transform(&s)
        })
        .collect()
}

/// Both sides of the square-function comparison for one `f`.
///
/// `upper = ‖f‖_q / (Σ_j ‖P_j f‖_q²)^{1/2}` with `q ≥ 2`, and
/// `lower = (Σ_j ‖P_j f‖_p²)^{1/2} / ‖f‖_p` with `1 < p ≤ 2`.
pub fn square_function_ratios(
    f: &Field,
    bank: &LittlewoodPaleyBank,
    q: f64,
    p: f64,
) -> Result<Option<(f64, f64)>> {
    if !(q >= 2.0) || !(p > 1.0 && p <= 2.0) {
        return Err(config(format!(
            "square-function exponents need q ≥ 2 and 1 < p ≤ 2, got q = {q}, p = {p}"
        )));
    }
    let pieces = lp_decompose(f, bank);
    let fq = f.lp_norm(q);
    let fp = f.lp_norm(p);
    if fq == 0.0 || fp == 0.0 {
        return Ok(None);
    }
    let sq: f64 = pieces.iter().map(|g| g.lp_norm(q).powi(2)).sum();
    let sp: f64 = pieces.iter().map(|g| g.lp_norm(p).powi(2)).sum();
    Ok(Some((fq / sq.sqrt(), sp.sqrt() / fp)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareFunctionConstants {
    pub points: usize,
    pub members: usize,
    pub q: f64,
    pub p: f64,
    /// Largest `upper` ratio over the ensemble.
    pub upper: f64,
    /// Largest `lower` ratio over the ensemble.
    pub lower: f64,
}

/// Random real trigonometric polynomial with integer wave vectors `|k_a| ≤ max_index`.
pub fn random_trig_field(grid: GridSpec, modes: usize, max_index: i64, seed: u64, member: u64) -> Field {
    let mut rng = member_rng(seed, member);
    let dim = grid.dim();
    let unit = grid.frequency_unit();
    let terms: Vec<([f64; 3], f64, f64)> = (0..modes)
        .map(|_| {
            let mut xi = [0.0; 3];
            for x in xi.iter_mut().take(dim) {
                *x = unit * rng.gen_range(-max_index..=max_index) as f64;
            }
            (xi, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    Field::from_fn(grid, |x| {
        terms
            .iter()
            .map(|(xi, a, ph)| {
                let dot: f64 = xi.iter().zip(x).map(|(k, y)| k * y).sum();
                a * (dot + ph).cos()
            })
            .sum()
    })
}

/// Measured square-function constants over a random ensemble.
///
/// The ensemble is defined by continuum wave vectors, so runs at different
/// `N` on the same box see the same functions.
pub fn square_function_constants(
    grid: GridSpec,
    members: usize,
    seed: u64,
    q: f64,
    p: f64,
) -> Result<SquareFunctionConstants> {
    let bank = LittlewoodPaleyBank::covering(&grid);
    let max_index = ((grid.points() / 2) as i64 - 1).min(20);
    let ratios = (0..members)
        .into_par_iter()
        .map(|m| {
            let f = random_trig_field(grid, 24, max_index, seed, m as u64);
            square_function_ratios(&f, &bank, q, p)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut upper, mut lower) = (0.0f64, 0.0f64);
    for (u, l) in ratios.into_iter().flatten() {
        upper = upper.max(u);
        lower = lower.max(l);
    }
    Ok(SquareFunctionConstants {
        points: grid.points(),
        members,
        q,
        p,
        upper,
        lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bump_support_and_telescoping() {
        assert_eq!(bump(0.5), 0.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.0) - 1.0).abs() < 1e-15);
        let bank = LittlewoodPaleyBank::new(-10, 10).unwrap();
        let mut tau = 2f64.powi(-10);
        while tau <= 1024.0 {
            assert!((bank.partition_sum(tau) - 1.0).abs() <= 1e-12, "τ = {tau}");
            tau *= 1.0137;
        }
    }

    #[test]
    fn single_annulus_projects_to_one_band() {
        let grid = GridSpec::new(2, PI, 32).unwrap();
        // |ξ| = 3 sits where β(τ/2) = 1 only if 3/2 ∈ [1/2, 1]: use 2^j = 4, τ = 3/4.
        let f = Field::from_fn(grid, |x| (3.0 * x[0]).cos());
        let bank = LittlewoodPaleyBank::covering(&grid);
        let mut total = Field::zeros(grid);
        for j in bank.indices() {
            let pj = lp_project(&f, j, &bank).unwrap();
            total = total.add_scaled(1.0, &pj).unwrap();
            let expect = bump(3.0 * 2f64.powi(-j));
            assert!((pj.sup_norm() - expect).abs() < 1e-12, "j = {j}");
        }
        assert!(total.max_abs_diff(&f).unwrap() < 1e-12);
        assert!(lp_project(&f, bank.j_max + 1, &bank).is_err());
    }
}
