//! Empirical Strichartz ratios over random ensembles, the causal truncation
//! check and the angular Sobolev embedding.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::grid::{inverse_transform, inverse_transform_complex, transform, Field, GridSpec, Spectrum};
use crate::propagator::Source;
use crate::quadrature::gauss_legendre;
use crate::specfun::{multipliers_raw, phi};

use super::member_rng;
use super::norms::{lebesgue_sum, MixedNormSpec};

/// Annulus that carries the spectrum of every ensemble member.
pub const BAND: (f64, f64) = (0.5, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub members: usize,
    pub seed: u64,
    pub half_width: f64,
    /// Grid points per axis, one run per entry.
    pub resolutions: Vec<usize>,
    pub horizon: f64,
    pub time_nodes: usize,
    /// Outer radius of the polar norm.
    pub radius: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Wave packets per member.
    pub packets: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            members: 100,
            seed: 0,
            half_width: 16.0 * PI,
            resolutions: vec![128, 256],
            horizon: 8.0,
            time_nodes: 17,
            radius: 40.0,
            radial_nodes: 161,
            angular_nodes: 128,
            packets: 3,
        }
    }
}

impl EnsembleSpec {
    fn validate(&self) -> Result<()> {
        if self.resolutions.is_empty() {
            return Err(config("at least one resolution is required"));
        }
        if self.time_nodes < 2 || !(self.horizon > 0.0) {
            return Err(config("need a positive horizon and two time nodes"));
        }
        if !(self.radius > 0.0 && self.radius <= self.half_width) {
            return Err(config("polar radius must lie inside the box"));
        }
        Ok(())
    }

    fn times(&self) -> Vec<f64> {
        (0..self.time_nodes)
            .map(|k| self.horizon * k as f64 / (self.time_nodes - 1) as f64)
            .collect()
    }

    fn polar(&self, q: f64, r: f64) -> Result<MixedNormSpec> {
        MixedNormSpec {
            q,
            r,
            radial_nodes: self.radial_nodes,
            angular_nodes: self.angular_nodes,
            radius: self.radius,
            weighted: false,
        }
        .validated()
    }
}

/// Maxima of one ratio family at one resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionMax {
    pub points: usize,
    pub max_ratio: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    /// `(q, r)` of the solution norm.
    pub q: f64,
    pub r: f64,
    /// Source-side `(q̃, r̃)`; `None` for the homogeneous ratio.
    pub tilde: Option<(f64, f64)>,
    pub per_resolution: Vec<ResolutionMax>,
}

impl RatioReport {
    /// Largest over smallest maximum across resolutions.
    pub fn drift(&self) -> f64 {
        let vals: Vec<f64> = self.per_resolution.iter().map(|r| r.max_ratio).collect();
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    }
}

fn in_band(xi: f64) -> bool {
    xi >= BAND.0 - 1e-12 && xi <= BAND.1 + 1e-12
}

/// Random sum of Gaussian wave packets with frequencies in `[0.6, 0.9]`,
/// centred within radius 6 of the origin. Packets are defined in continuum
/// coordinates, so the same member is produced at every resolution of a
/// given box.
pub fn random_packets(grid: GridSpec, packets: usize, seed: u64, member: u64) -> Field {
    let mut rng = member_rng(seed, member);
    let params: Vec<[f64; 6]> = (0..packets)
        .map(|_| {
            let (cr, ca) = (6.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            let (k, ka) = (rng.gen_range(0.6..0.9), rng.gen_range(0.0..2.0 * PI));
            [
                cr * ca.cos(),
                cr * ca.sin(),
                k * ka.cos(),
                k * ka.sin(),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.0..2.0 * PI),
            ]
        })
        .collect();
    Field::from_fn(grid, |x| {
        params
            .iter()
            .map(|p| {
                let (dx, dy) = (x[0] - p[0], x[1] - p[1]);
                p[4] * (-(dx * dx + dy * dy) / 25.0).exp() * (p[2] * dx + p[3] * dy + p[5]).cos()
            })
            .sum()
    })
}

/// [`random_packets`] cut to the band `[1/2, 1]` in frequency.
pub fn random_localized_field(grid: GridSpec, packets: usize, seed: u64, member: u64) -> Field {
    band_limit(&random_packets(grid, packets, seed, member))
}

/// Removes every mode outside the band.
pub fn band_limit(f: &Field) -> Field {
    let grid = *f.grid();
    let mut spec = transform(f);
    for (k, c) in spec.coeffs_mut().iter_mut().enumerate() {
        if !in_band(grid.frequency_norm(k)) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    inverse_transform(&spec)
}

/// Fails unless the spectrum of `f` lies in the band to relative energy 1e−10.
pub fn check_localized(spec: &Spectrum) -> Result<()> {
    let grid = spec.grid();
    let (mut inside, mut outside) = (0.0, 0.0);
    for (k, c) in spec.coeffs().iter().enumerate() {
        if in_band(grid.frequency_norm(k)) {
            inside += c.norm_sqr();
        } else {
            outside += c.norm_sqr();
        }
    }
    if outside > 1e-10 * (inside + outside) {
        return Err(Error::Precondition(format!(
            "spectrum not localized in [1/2, 1]: {:.3e} of the energy lies outside",
            outside / (inside + outside)
        )));
    }
    Ok(())
}

fn check_homogeneous_pair(q: f64, r: f64) -> Result<()> {
    match crate::exponents::admissible_check(q, r) {
        Ok(true) => Ok(()),
        Ok(false) => Err(config(format!("(q, r) = ({q}, {r}) is not admissible"))),
        Err(e) => Err(config(e.to_string())),
    }
}

/// Checks `q, r, q̃, r̃ ≥ 2`, `1/q + 3/r = 1/q̃ + 3/r̃` and admissibility of both pairs.
pub fn check_inhomogeneous_indices(q: f64, r: f64, qt: f64, rt: f64) -> Result<()> {
    check_homogeneous_pair(q, r)?;
    check_homogeneous_pair(qt, rt)?;
    let lhs = 1.0 / q + 3.0 / r;
    let rhs = 1.0 / qt + 3.0 / rt;
    if (lhs - rhs).abs() > 1e-9 {
        return Err(config(format!(
            "1/q + 3/r = {lhs} differs from 1/q̃ + 3/r̃ = {rhs}"
        )));
    }
    Ok(())
}

fn dual(s: f64) -> f64 {
    if s.is_infinite() {
        1.0
    } else {
        s / (s - 1.0)
    }
}

/// Angular `L²` profiles of one slice at the polar nodes, so several `r`
/// can reuse one resampling.
fn slice_profile(values: impl Fn(f64, f64) -> f64, spec: &MixedNormSpec) -> Vec<f64> {
    let n = spec.angular_nodes;
    let dth = 2.0 * PI / n as f64;
    (0..spec.radial_nodes)
        .map(|i| {
            let rad = spec.radius * i as f64 / (spec.radial_nodes - 1) as f64;
            let s: f64 = (0..n)
                .map(|j| {
                    let (sn, cs) = (dth * j as f64).sin_cos();
                    values(rad * cs, rad * sn)
                })
                .sum();
            (s * dth).sqrt()
        })
        .collect()
}

fn radial_weights(spec: &MixedNormSpec) -> Vec<f64> {
    let nodes: Vec<f64> = (0..spec.radial_nodes)
        .map(|i| spec.radius * i as f64 / (spec.radial_nodes - 1) as f64)
        .collect();
    crate::quadrature::trapezoid_weights(&nodes)
}

fn nested_norm(profiles: &[Vec<f64>], rw: &[f64], tw: &[f64], q: f64, r: f64) -> f64 {
    let slices: Vec<f64> = profiles.iter().map(|p| lebesgue_sum(p, rw, r)).collect();
    lebesgue_sum(&slices, tw, q)
}

/// `‖Af‖_{L^q L^r L²_θ} / ‖f‖₂` for several index pairs, or `None` when `f = 0`.
pub fn homogeneous_ratios(
    f: &Field,
    pairs: &[(f64, f64)],
    spec: &EnsembleSpec,
) -> Result<Option<Vec<f64>>> {
    let grid = *f.grid();
    let fhat = transform(f);
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Ok(None);
    }
    check_localized(&fhat)?;
    let times = spec.times();
    let tw = crate::quadrature::trapezoid_weights(&times);
    let polar = spec.polar(2.0, 2.0)?;
    let amp = super::operator::ModelAmplitude;
    let profiles: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| {
            let mut s = fhat.clone();
            let ph = phi(t);
            for (k, c) in s.coeffs_mut().iter_mut().enumerate() {
                let xi = grid.frequency_norm(k);
                *c *= Complex64::from_polar(amp.eval(t, xi), -ph * xi);
            }
            let u = inverse_transform_complex(&s);
            slice_profile(|x, y| u.interpolate(&[x, y]).norm_sqr(), &polar)
        })
        .collect();
    let rw = radial_weights(&polar);
    Ok(Some(
        pairs
            .iter()
            .map(|&(q, r)| nested_norm(&profiles, &rw, &tw, q, r) / norm)
            .collect(),
    ))
}

/// Per-resolution maxima of the homogeneous ratio for each index pair.
pub fn empirical_homogeneous_ratios(spec: &EnsembleSpec, pairs: &[(f64, f64)]) -> Result<Vec<RatioReport>> {
    spec.validate()?;
    for &(q, r) in pairs {
        check_homogeneous_pair(q, r)?;
    }
    let mut reports: Vec<RatioReport> = pairs
        .iter()
        .map(|&(q, r)| RatioReport {
            q,
            r,
            tilde: None,
            per_resolution: Vec::new(),
        })
        .collect();
    for &n in &spec.resolutions {
        let grid = GridSpec::new(2, spec.half_width, n)?;
        let results = (0..spec.members)
            .into_par_iter()
            .map(|m| {
                let f = random_localized_field(grid, spec.packets, spec.seed, m as u64);
                homogeneous_ratios(&f, pairs, spec)
            })
            .collect::<Result<Vec<_>>>()?;
        push_maxima(&mut reports, n, &results);
    }
    Ok(reports)
}

pub fn empirical_homogeneous_ratio(spec: &EnsembleSpec, q: f64, r: f64) -> Result<RatioReport> {
    Ok(empirical_homogeneous_ratios(spec, &[(q, r)])?.remove(0))
}

fn push_maxima(reports: &mut [RatioReport], points: usize, results: &[Option<Vec<f64>>]) {
    for (i, rep) in reports.iter_mut().enumerate() {
        let vals: Vec<f64> = results.iter().flatten().map(|v| v[i]).collect();
        rep.per_resolution.push(ResolutionMax {
            points,
            max_ratio: vals.iter().cloned().fold(0.0, f64::max),
            evaluated: vals.len(),
            skipped: results.len() - vals.len(),
        });
    }
}

/// Separable source `F(τ, x) = Σ_i c_i(τ) F_i(x)`, each `F_i` band limited.
#[derive(Debug, Clone)]
pub struct BandSource {
    pub profiles: Vec<Field>,
    /// `c_i(τ) = a_i + b_i sin(ω_i τ + θ_i)`.
    pub modulations: Vec<[f64; 4]>,
}

impl BandSource {
    pub fn random(grid: GridSpec, packets: usize, seed: u64, member: u64) -> Self {
        let profiles = (0..2)
            .map(|i| random_localized_field(grid, packets, seed ^ 0x5eed_0000, 2 * member + i))
            .collect();
        let mut rng = member_rng(seed ^ 0x7175_6c73, member);
        let modulations = (0..2)
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.2..2.0),
                    rng.gen_range(0.0..2.0 * PI),
                ]
            })
            .collect();
        Self { profiles, modulations }
    }

    fn weight(m: &[f64; 4], tau: f64) -> f64 {
        m[0] + m[1] * (m[2] * tau + m[3]).sin()
    }

    pub fn at(&self, tau: f64) -> Field {
        let grid = *self.profiles[0].grid();
        let mut out = Field::zeros(grid);
        for (p, m) in self.profiles.iter().zip(&self.modulations) {
            out = out.add_scaled(Self::weight(m, tau), p).expect("same grid");
        }
        out
    }
}

impl Source for BandSource {
    fn grid(&self) -> &GridSpec {
        self.profiles[0].grid()
    }

    fn horizon(&self) -> f64 {
        f64::INFINITY
    }

    fn spectrum_at(&self, tau: f64) -> Result<Spectrum> {
        Ok(transform(&self.at(tau)))
    }
}

/// Per-shell multipliers at the Duhamel quadrature nodes of a time ladder.
struct BandKernel {
    /// `|ξ|²` in integer units → shell slot.
    slot: BTreeMap<u64, usize>,
    /// `[interval][node] → (τ, w)`.
    nodes: Vec<Vec<(f64, f64)>>,
    /// `[shell][interval][node] → (v1(τ), v2(τ))`.
    inner: Vec<Vec<Vec<(f64, f64)>>>,
    /// `[shell][time] → (v1(t), v2(t))`.
    outer: Vec<Vec<(f64, f64)>>,
}

impl BandKernel {
    fn new(grid: &GridSpec, times: &[f64]) -> Self {
        let mut slot = BTreeMap::new();
        let mut lambdas = Vec::new();
        for k in 0..grid.len() {
            if in_band(grid.frequency_norm(k)) {
                let k2 = grid.wave_index_norm_sq(k);
                slot.entry(k2).or_insert_with(|| {
                    lambdas.push(grid.frequency_norm(k));
                    lambdas.len() - 1
                });
            }
        }
        let rule = gauss_legendre(12);
        let nodes: Vec<Vec<(f64, f64)>> = times
            .windows(2)
            .map(|w| {
                let (x, ww) = rule.mapped(w[0], w[1]);
                x.into_iter().zip(ww).collect()
            })
            .collect();
        let inner = lambdas
            .iter()
            .map(|&l| {
                nodes
                    .iter()
                    .map(|iv| {
                        iv.iter()
                            .map(|&(tau, _)| {
                                let m = multipliers_raw(tau, l);
                                (m[0], m[1])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let outer = lambdas
            .iter()
            .map(|&l| {
                times
                    .iter()
                    .map(|&t| {
                        let m = multipliers_raw(t, l);
                        (m[0], m[1])
                    })
                    .collect()
            })
            .collect();
        Self { slot, nodes, inner, outer }
    }

    /// `D(t_k, λ) = ∫₀^{t_k} (v2(t)v1(τ) − v1(t)v2(τ)) c(τ) dτ` for every shell and time.
    fn responses(&self, c: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
        self.inner
            .iter()
            .zip(&self.outer)
            .map(|(inner, outer)| {
                let (mut j1, mut j2) = (0.0, 0.0);
                let mut out = vec![0.0];
                for (iv, vals) in self.nodes.iter().zip(inner) {
                    for (&(tau, w), &(v1, v2)) in iv.iter().zip(vals) {
                        let cw = w * c(tau);
                        j1 += cw * v1;
                        j2 += cw * v2;
                    }
                    let (v1t, v2t) = outer[out.len()];
                    out.push(v2t * j1 - v1t * j2);
                }
                out
            })
            .collect()
    }
}

fn duhamel_slices(
    src: &BandSource,
    spectra: &[Spectrum],
    kernel: &BandKernel,
    count: usize,
) -> Result<Vec<Field>> {
    let grid = *spectra[0].grid();
    let responses: Vec<Vec<Vec<f64>>> = src
        .modulations
        .iter()
        .map(|m| kernel.responses(|tau| BandSource::weight(m, tau)))
        .collect();
    (0..count)
        .map(|ti| {
            let mut acc = Spectrum::new(grid, vec![Complex64::new(0.0, 0.0); grid.len()])?;
            for (i, s) in spectra.iter().enumerate() {
                for (k, (a, c)) in acc.coeffs_mut().iter_mut().zip(s.coeffs()).enumerate() {
                    if let Some(&sl) = kernel.slot.get(&grid.wave_index_norm_sq(k)) {
                        *a += c * responses[i][sl][ti];
                    }
                }
            }
            Ok(inverse_transform(&acc))
        })
        .collect()
}

/// Zero-data solution driven by `src`, sampled at `times` (which must start at 0).
pub fn band_duhamel(src: &BandSource, times: &[f64]) -> Result<Vec<Field>> {
    if times.first() != Some(&0.0) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config("times must start at 0 and increase"));
    }
    let grid = *src.profiles[0].grid();
    let kernel = BandKernel::new(&grid, times);
    let spectra: Vec<Spectrum> = src.profiles.iter().map(transform).collect();
    duhamel_slices(src, &spectra, &kernel, times.len())
}

/// `mixed(w; q, r) / mixed(F; q̃′, r̃′)` for several index tuples, or `None`
/// when the source vanishes.
fn inhomogeneous_ratios_with(
    src: &BandSource,
    kernel: &BandKernel,
    tuples: &[(f64, f64, f64, f64)],
    spec: &EnsembleSpec,
) -> Result<Option<Vec<f64>>> {
    let spectra: Vec<Spectrum> = src.profiles.iter().map(transform).collect();
    for s in &spectra {
        check_localized(s)?;
    }
    let times = spec.times();
    let tw = crate::quadrature::trapezoid_weights(&times);
    let polar = spec.polar(2.0, 2.0)?;
    let rw = radial_weights(&polar);

    let w_slices = duhamel_slices(src, &spectra, kernel, times.len())?;
    let mut w_profiles = Vec::with_capacity(times.len());
    let mut f_profiles = Vec::with_capacity(times.len());
    for (w, &t) in w_slices.iter().zip(&times) {
        w_profiles.push(slice_profile(|x, y| w.interpolate(&[x, y]).powi(2), &polar));
        let f = src.at(t);
        f_profiles.push(slice_profile(|x, y| f.interpolate(&[x, y]).powi(2), &polar));
    }
    let mut out = Vec::with_capacity(tuples.len());
    for &(q, r, qt, rt) in tuples {
        let den = nested_norm(&f_profiles, &rw, &tw, dual(qt), dual(rt));
        if den == 0.0 {
            return Ok(None);
        }
        out.push(nested_norm(&w_profiles, &rw, &tw, q, r) / den);
    }
    Ok(Some(out))
}

/// Ratios for one source, building the per-shell kernel on the fly.
pub fn inhomogeneous_ratios(
    src: &BandSource,
    tuples: &[(f64, f64, f64, f64)],
    spec: &EnsembleSpec,
) -> Result<Option<Vec<f64>>> {
    let grid = *src.profiles[0].grid();
    let kernel = BandKernel::new(&grid, &spec.times());
    inhomogeneous_ratios_with(src, &kernel, tuples, spec)
}

/// Per-resolution maxima of `‖w‖_{L^q L^r L²_θ} / ‖F‖_{L^{q̃′} L^{r̃′} L²_θ}`.
pub fn empirical_inhomogeneous_ratios(
    spec: &EnsembleSpec,
    tuples: &[(f64, f64, f64, f64)],
) -> Result<Vec<RatioReport>> {
    spec.validate()?;
    for &(q, r, qt, rt) in tuples {
        check_inhomogeneous_indices(q, r, qt, rt)?;
    }
    let mut reports: Vec<RatioReport> = tuples
        .iter()
        .map(|&(q, r, qt, rt)| RatioReport {
            q,
            r,
            tilde: Some((qt, rt)),
            per_resolution: Vec::new(),
        })
        .collect();
    for &n in &spec.resolutions {
        let grid = GridSpec::new(2, spec.half_width, n)?;
        let kernel = BandKernel::new(&grid, &spec.times());
        let results = (0..spec.members)
            .into_par_iter()
            .map(|m| {
                let src = BandSource::random(grid, spec.packets, spec.seed, m as u64);
                inhomogeneous_ratios_with(&src, &kernel, tuples, spec)
            })
            .collect::<Result<Vec<_>>>()?;
        push_maxima(&mut reports, n, &results);
    }
    Ok(reports)
}

pub fn empirical_inhomogeneous_ratio(
    spec: &EnsembleSpec,
    q: f64,
    r: f64,
    qt: f64,
    rt: f64,
) -> Result<RatioReport> {
    Ok(empirical_inhomogeneous_ratios(spec, &[(q, r, qt, rt)])?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChristKiselevReport {
    pub p: f64,
    pub q: f64,
    pub members: usize,
    /// Estimated `‖T‖_{L^p → L^q}`.
    pub full_norm: f64,
    /// Estimated norm of the causal truncation.
    pub truncated_norm: f64,
    pub ratio: f64,
}

fn discrete_norm(v: &[f64], h: f64, s: f64) -> f64 {
    lebesgue_sum(&v.iter().map(|x| x.abs()).collect::<Vec<_>>(), &vec![h; v.len()], s)
}

fn duality_map(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x.signum() * x.abs().powf(s - 1.0)).collect()
}

/// Largest `‖Kf‖_q / ‖f‖_p` seen along a nonlinear power iteration from `start`.
fn operator_norm_from(k: &DMatrix<f64>, h: f64, p: f64, q: f64, start: &[f64]) -> f64 {
    let pd = dual(p);
    let mut f = start.to_vec();
    let mut best: f64 = 0.0;
    for _ in 0..30 {
        let nf = discrete_norm(&f, h, p);
        if nf == 0.0 {
            break;
        }
        f.iter_mut().for_each(|x| *x /= nf);
        let tf: Vec<f64> = (k * nalgebra::DVector::from_column_slice(&f) * h).iter().copied().collect();
        let val = discrete_norm(&tf, h, q);
        best = best.max(val);
        if val == 0.0 {
            break;
        }
        let g = duality_map(&tf, q);
        let back: Vec<f64> = (k.transpose() * nalgebra::DVector::from_column_slice(&g) * h)
            .iter()
            .copied()
            .collect();
        f = duality_map(&back, pd);
    }
    best
}

/// Compares `T f(x) = ∫ K(x, y) f(y) dy` with `T̃ f(x) = ∫_{y ≤ x} K(x, y) f(y) dy`
/// as maps `L^p → L^q` on a uniform 1-D grid with spacing `h`.
pub fn christ_kiselev_check(
    kernel: &DMatrix<f64>,
    h: f64,
    p: f64,
    q: f64,
    members: usize,
    seed: u64,
) -> Result<ChristKiselevReport> {
    if !(p >= 1.0 && q > p) {
        return Err(config(format!("the truncation lemma needs 1 ≤ p < q, got p = {p}, q = {q}")));
    }
    if !kernel.is_square() || kernel.nrows() == 0 || !(h > 0.0) {
        return Err(config("kernel must be a nonempty square sample matrix with h > 0"));
    }
    let n = kernel.nrows();
    let truncated = DMatrix::from_fn(n, n, |i, j| if j <= i { kernel[(i, j)] } else { 0.0 });
    let starts: Vec<Vec<f64>> = (0..members.max(1))
        .map(|m| {
            let mut rng = member_rng(seed, m as u64);
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        })
        .collect();
    let full = starts
        .par_iter()
        .map(|s| operator_norm_from(kernel, h, p, q, s))
        .reduce(|| 0.0, f64::max);
    let trunc = starts
        .par_iter()
        .map(|s| operator_norm_from(&truncated, h, p, q, s))
        .reduce(|| 0.0, f64::max);
    if !(full.is_finite() && trunc.is_finite()) {
        return Err(Error::Numerical("operator norm estimate is not finite".into()));
    }
    Ok(ChristKiselevReport {
        p,
        q,
        members,
        full_norm: full,
        truncated_norm: trunc,
        ratio: if full == 0.0 { 1.0 } else { trunc / full },
    })
}

/// `‖v‖_∞ / (‖v‖_{L²_θ} + ‖∂_θ v‖_{L²_θ})` for uniform samples on `[0, 2π)`,
/// with the derivative taken spectrally. `None` for `v = 0`.
pub fn angular_sobolev_ratio(v: &[f64]) -> Option<f64> {
    let n = v.len();
    let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if sup == 0.0 || n == 0 {
        return None;
    }
    let dth = 2.0 * PI / n as f64;
    let l2 = (v.iter().map(|x| x * x).sum::<f64>() * dth).sqrt();
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // Parseval: ∫|v′|² = (2π/n²) Σ k²|v̂_k|², dropping the unpaired Nyquist mode.
    let d2: f64 = buf
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = if i < n / 2 {
                i as f64
            } else if i == n / 2 && n % 2 == 0 {
                0.0
            } else {
                i as f64 - n as f64
            };
            k * k * c.norm_sqr()
        })
        .sum::<f64>()
        * 2.0
        * PI
        / (n * n) as f64;
    Some(sup / (l2 + d2.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularSobolevReport {
    pub degree: usize,
    pub members: usize,
    /// `(samples per circle, largest ratio)`.
    pub per_resolution: Vec<(usize, f64)>,
}

/// Largest ratio over random trigonometric polynomials of the given degree.
pub fn angular_sobolev_check(
    members: usize,
    degree: usize,
    resolutions: &[usize],
    seed: u64,
) -> Result<AngularSobolevReport> {
    if resolutions.iter().any(|&n| n <= 2 * degree) {
        return Err(config("every resolution must exceed twice the degree"));
    }
    let polys: Vec<Vec<(f64, f64)>> = (0..members)
        .map(|m| {
            let mut rng = member_rng(seed, m as u64);
            (0..=degree)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let per_resolution = resolutions
        .iter()
        .map(|&n| {
            let worst = polys
                .iter()
                .filter_map(|c| {
                    let v: Vec<f64> = (0..n)
                        .map(|j| {
                            let th = 2.0 * PI * j as f64 / n as f64;
                            c.iter()
                                .enumerate()
                                .map(|(k, (a, b))| a * (k as f64 * th).cos() + b * (k as f64 * th).sin())
                                .sum()
                        })
                        .collect();
                    angular_sobolev_ratio(&v)
                })
                .fold(0.0, f64::max);
            (n, worst)
        })
        .collect();
    Ok(AngularSobolevReport {
        degree,
        members,
        per_resolution,
    })
}
