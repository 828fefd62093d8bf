//! Periodic boxes, real and complex fields, and their discrete Fourier transforms.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::cubic_weights;

/// The box `[−L, L)ⁿ` sampled at `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("grid dimension {dim} not in {{1, 2, 3}}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Config(format!("half width {half_width} must be positive")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::Config(format!(
                "points per axis {points} must be a power of two ≥ 8"
            )));
        }
        Ok(Self {
            dim,
            half_width,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Total number of samples `Nⁿ`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `hⁿ`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// `(2L)ⁿ`.
    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    /// Fundamental wavenumber `π/L`.
    pub fn frequency_unit(&self) -> f64 {
        PI / self.half_width
    }

    pub fn axis_coordinate(&self, i: usize) -> f64 {
        -self.half_width + self.spacing() * i as f64
    }

    /// Signed integer wavenumber of FFT bin `i`.
    pub fn wave_index(&self, i: usize) -> i64 {
        if i < self.points / 2 {
            i as i64
        } else {
            i as i64 - self.points as i64
        }
    }

    /// Multi-index of a flat (row-major) position; unused axes are 0.
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.dim]
            .iter()
            .fold(0usize, |acc, &i| acc * self.points + i)
    }

    pub fn coordinates(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.axis_coordinate(idx[a]);
        }
        x
    }

    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let unit = self.frequency_unit();
        let mut k = [0.0; 3];
        for a in 0..self.dim {
            k[a] = unit * self.wave_index(idx[a]) as f64;
        }
        k
    }

    /// `Σ kₐ²` in integer units.
    pub fn wave_index_norm_sq(&self, flat: usize) -> u64 {
        let idx = self.unflatten(flat);
        (0..self.dim)
            .map(|a| {
                let k = self.wave_index(idx[a]);
                (k * k) as u64
            })
            .sum()
    }

    /// `|ξ|` of the mode at `flat`.
    pub fn frequency_norm(&self, flat: usize) -> f64 {
        self.frequency_unit() * (self.wave_index_norm_sq(flat) as f64).sqrt()
    }

    /// Frequencies kept by the 2/3 rule.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let cut = self.points as i64 / 3;
        (0..self.len())
            .map(|flat| {
                let idx = self.unflatten(flat);
                (0..self.dim).all(|a| self.wave_index(idx[a]).abs() <= cut)
            })
            .collect()
    }

    /// Groups modes by `|ξ|` so radial multipliers are evaluated once per shell.
    pub fn shells(&self) -> ModeShells {
        let max = self.dim as u64 * (self.points as u64 / 2).pow(2);
        let mut slot = vec![u32::MAX; max as usize + 1];
        let mut lambdas = Vec::new();
        let mut shell_of = Vec::with_capacity(self.len());
        for flat in 0..self.len() {
            let k2 = self.wave_index_norm_sq(flat) as usize;
            if slot[k2] == u32::MAX {
                slot[k2] = lambdas.len() as u32;
                lambdas.push(self.frequency_unit() * (k2 as f64).sqrt());
            }
            shell_of.push(slot[k2]);
        }
        ModeShells { shell_of, lambdas }
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Mode-to-shell map for radial multipliers.
#[derive(Debug, Clone)]
pub struct ModeShells {
    pub shell_of: Vec<u32>,
    pub lambdas: Vec<f64>,
}

/// Real samples on a grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("field has non-finite samples".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at the grid points; the slice holds `dim` coordinates.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.coordinates(i);
                f(&x[..grid.dim()])
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `∫u dx` by the (spectrally accurate) periodic trapezoid rule.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let s: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn scale(&mut self, a: f64) {
        self.values.iter_mut().for_each(|v| *v *= a);
    }

    /// `self + a·other`.
    pub fn add_scaled(&self, a: f64, other: &Field) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + a * y)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Periodic tensor-cubic interpolation at a point.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        interpolate_periodic(&self.grid, x, |i| self.values[i])
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Complex samples on a grid, e.g. the output of a non-symmetric multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn real_part(&self) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v.re).collect(),
        }
    }

    pub fn modulus(&self) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm()).collect(),
        }
    }

    pub fn interpolate(&self, x: &[f64]) -> Complex64 {
        let re = interpolate_periodic(&self.grid, x, |i| self.values[i].re);
        let im = interpolate_periodic(&self.grid, x, |i| self.values[i].im);
        Complex64::new(re, im)
    }
}

/// Unnormalized DFT coefficients `ĉ_k = Σ_j u_j e^{−2πi k·j/N}`.
///
/// The physical box offset only contributes a sign per mode, which radial
/// multipliers never see, so it is not folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a grid of {}",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }
}

/// Forward transform of a real field.
pub fn transform(field: &Field) -> Spectrum {
    let mut data: Vec<Complex64> = field
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft_nd(&field.grid, &mut data, false);
    Spectrum {
        grid: field.grid,
        coeffs: data,
    }
}

pub fn transform_complex(field: &ComplexField) -> Spectrum {
    let mut data = field.values.clone();
    fft_nd(&field.grid, &mut data, false);
    Spectrum {
        grid: field.grid,
        coeffs: data,
    }
}

/// Inverse transform, keeping the real part.
pub fn inverse_transform(spec: &Spectrum) -> Field {
    inverse_transform_complex(spec).real_part()
}

pub fn inverse_transform_complex(spec: &Spectrum) -> ComplexField {
    let mut data = spec.coeffs.clone();
    inverse_in_place(&spec.grid, &mut data);
    ComplexField {
        grid: spec.grid,
        values: data,
    }
}

/// Normalized inverse transform of a raw coefficient buffer.
pub(crate) fn inverse_in_place(grid: &GridSpec, data: &mut [Complex64]) {
    fft_nd(grid, data, true);
    let scale = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|v| *v *= scale);
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized multi-dimensional FFT over a row-major buffer.
fn fft_nd(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let n = grid.points();
    let dim = grid.dim();
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // The last axis is contiguous.
    fft.process_with_scratch(data, &mut scratch);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim.saturating_sub(1) {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

fn interpolate_periodic(grid: &GridSpec, x: &[f64], at: impl Fn(usize) -> f64) -> f64 {
    let n = grid.points() as i64;
    let h = grid.spacing();
    let dim = grid.dim();
    let mut base = [0i64; 3];
    let mut w = [[0.0; 4]; 3];
    for a in 0..dim {
        let u = (x[a] + grid.half_width()) / h;
        let fl = u.floor();
        base[a] = fl as i64;
        w[a] = cubic_weights(u - fl);
    }
    let wrap = |i: i64| -> usize { i.rem_euclid(n) as usize };
    let np = n as usize;
    match dim {
        1 => (0..4)
            .map(|i| w[0][i] * at(wrap(base[0] - 1 + i as i64)))
            .sum(),
        2 => {
            let mut acc = 0.0;
            for i in 0..4 {
                let row = wrap(base[0] - 1 + i as i64) * np;
                let mut s = 0.0;
                for j in 0..4 {
                    s += w[1][j] * at(row + wrap(base[1] - 1 + j as i64));
                }
                acc += w[0][i] * s;
            }
            acc
        }
        _ => {
            let mut acc = 0.0;
            for i in 0..4 {
                let plane = wrap(base[0] - 1 + i as i64) * np * np;
                for j in 0..4 {
                    let row = plane + wrap(base[1] - 1 + j as i64) * np;
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += w[2][k] * at(row + wrap(base[2] - 1 + k as i64));
                    }
                    acc += w[0][i] * w[1][j] * s;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Field::new(grid, (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(4, 1.0, 16).is_err());
        assert!(GridSpec::new(2, 0.0, 16).is_err());
        assert!(GridSpec::new(2, 1.0, 12).is_err());
        assert!(GridSpec::new(2, 1.0, 4).is_err());
        let g = GridSpec::new(2, 1.0, 8).unwrap();
        assert!(Field::new(g, vec![0.0; 10]).is_err());
        assert!(Spectrum::new(g, vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn constant_field_has_only_zero_mode() {
        for dim in 1..=3 {
            let g = GridSpec::new(dim, 2.0, 8).unwrap();
            let f = Field::from_fn(g, |_| 3.5);
            let s = transform(&f);
            assert!((s.coeffs()[0].re - 3.5 * g.len() as f64).abs() < 1e-12);
            for c in &s.coeffs()[1..] {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        for dim in 1..=3 {
            let g = GridSpec::new(dim, 3.0, 16).unwrap();
            let f = random_field(g, 7 + dim as u64);
            let s = transform(&f);
            let back = inverse_transform(&s);
            let scale = f.sup_norm();
            assert!(f.max_abs_diff(&back).unwrap() <= 1e-12 * scale);
            let direct: f64 = f.values().iter().map(|v| v * v).sum();
            let spectral: f64 =
                s.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() / g.len() as f64;
            assert!((direct - spectral).abs() <= 1e-10 * direct);
        }
    }

    #[test]
    fn transform_matches_direct_sum() {
        let g = GridSpec::new(2, 1.0, 8).unwrap();
        let f = random_field(g, 3);
        let s = transform(&f);
        for flat in [0, 5, 17, 63] {
            let [k0, k1, _] = g.unflatten(flat);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..g.len() {
                let [j0, j1, _] = g.unflatten(j);
                let ph = -2.0 * PI * ((k0 * j0 + k1 * j1) as f64) / 8.0;
                acc += f.values()[j] * Complex64::from_polar(1.0, ph);
            }
            assert!((acc - s.coeffs()[flat]).norm() < 1e-12);
        }
    }

    #[test]
    fn shells_group_equal_norms() {
        let g = GridSpec::new(2, PI, 16).unwrap();
        let sh = g.shells();
        for flat in 0..g.len() {
            let lam = sh.lambdas[sh.shell_of[flat] as usize];
            assert!((lam - g.frequency_norm(flat)).abs() < 1e-12);
        }
        assert_eq!(sh.lambdas[sh.shell_of[0] as usize], 0.0);
    }

    #[test]
    fn interpolation_is_exact_for_trig_low_modes_approximately() {
        let g = GridSpec::new(2, PI, 64).unwrap();
        let f = Field::from_fn(g, |x| (x[0]).sin() * (2.0 * x[1]).cos());
        let p = [0.123f64, -1.7];
        let exact = p[0].sin() * (2.0 * p[1]).cos();
        assert!((f.interpolate(&p) - exact).abs() < 1e-5);
        // Wrap-around across the periodic boundary.
        let q = [PI - 0.01, 0.3];
        let exact = q[0].sin() * (2.0 * q[1]).cos();
        assert!((f.interpolate(&q) - exact).abs() < 1e-5);
    }

    #[test]
    fn norms() {
        let g = GridSpec::new(1, 1.0, 8).unwrap();
        let f = Field::from_fn(g, |_| 2.0);
        assert!((f.integral() - 4.0).abs() < 1e-14);
        assert!((f.lp_norm(3.0) - 2.0 * 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert!((f.l2_norm() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }
}
