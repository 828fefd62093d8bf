//! Spherical means, the radial Radon transform, the functional `G(t) = ∫u`,
//! the Riccati comparison ODE and lower-bound witnesses on simulated solutions.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::grid::Field;
use crate::nonlinear::SimulationTrace;
use crate::quadrature::{gauss_legendre, trapezoid_weights};
use crate::specfun::phi;

/// Samples of a radial function. Radii are nondecreasing; a repeated radius
/// marks a jump, and the function is linear between consecutive samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(config("a radial profile needs matching radii and values, at least two"));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| w[1] < w[0]) {
            return Err(config("profile radii must be nonnegative and nondecreasing"));
        }
        if radii.windows(3).any(|w| w[0] == w[2]) {
            return Err(config("a radius may appear at most twice"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite profile value".into()));
        }
        Ok(Self { radii, values })
    }

    /// `count` uniform samples of `f` on `[0, r_max]`.
    pub fn from_fn(r_max: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let radii: Vec<f64> = (0..count)
            .map(|i| r_max * i as f64 / (count.max(2) - 1) as f64)
            .collect();
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::new(radii, values)
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    /// Linear interpolation; 0 beyond the last radius. At a jump the outer value wins.
    pub fn eval(&self, r: f64) -> f64 {
        if r > self.r_max() || r < self.radii[0] {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x <= r);
        if i == 0 {
            return self.values[0];
        }
        if i == self.radii.len() {
            return *self.values.last().expect("nonempty");
        }
        let (r0, r1) = (self.radii[i - 1], self.radii[i]);
        let s = (r - r0) / (r1 - r0);
        self.values[i - 1] + s * (self.values[i] - self.values[i - 1])
    }
}

/// Quadrature nodes on the unit sphere with weights summing to 1.
fn sphere_rule(dim: usize, r: f64, h: f64) -> Vec<([f64; 3], f64)> {
    match dim {
        2 => {
            let m = (4.0 * (PI * r / h).ceil()).max(64.0) as usize;
            (0..m)
                .map(|j| {
                    let (s, c) = (2.0 * PI * j as f64 / m as f64).sin_cos();
                    ([c, s, 0.0], 1.0 / m as f64)
                })
                .collect()
        }
        _ => {
            let polar = ((PI * r / h).ceil() as usize).max(16);
            let az = 2 * polar;
            let rule = gauss_legendre(polar);
            let mut out = Vec::with_capacity(polar * az);
            for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
                let rho = (1.0 - z * z).sqrt();
                for k in 0..az {
                    let (s, c) = (2.0 * PI * k as f64 / az as f64).sin_cos();
                    out.push(([rho * c, rho * s, z], 0.5 * w / az as f64));
                }
            }
            out
        }
    }
}

fn check_sphere_dim(u: &Field) -> Result<()> {
    let d = u.grid().dim();
    if d != 2 && d != 3 {
        return Err(Error::Precondition(format!("spherical means need n ∈ {{2, 3}}, got {d}")));
    }
    Ok(())
}

fn sphere_samples(u: &Field, r: f64) -> (Vec<f64>, Vec<f64>) {
    let grid = u.grid();
    sphere_rule(grid.dim(), r, grid.spacing())
        .into_iter()
        .map(|(w, wt)| (u.interpolate(&[r * w[0], r * w[1], r * w[2]]), wt))
        .unzip()
}

/// `ū(r)` at the given radii.
pub fn spherical_mean_at(u: &Field, radii: &[f64]) -> Result<RadialProfile> {
    check_sphere_dim(u)?;
    let l = u.grid().half_width();
    if let Some(&r) = radii.iter().find(|&&r| !(0.0..=l).contains(&r)) {
        return Err(Error::Range(format!("radius {r} outside [0, {l}]")));
    }
    let values = radii
        .par_iter()
        .map(|&r| {
            let (v, w) = sphere_samples(u, r);
            v.iter().zip(&w).map(|(a, b)| a * b).sum()
        })
        .collect();
    RadialProfile::new(radii.to_vec(), values)
}

/// `ū` at spacing `h` on `[0, L]`.
pub fn spherical_mean(u: &Field) -> Result<RadialProfile> {
    let g = u.grid();
    let count = g.points() / 2 + 1;
    let radii: Vec<f64> = (0..count).map(|i| g.spacing() * i as f64).collect();
    spherical_mean_at(u, &radii)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenReport {
    pub p: f64,
    pub radii: Vec<f64>,
    /// `|ū(r)|ᵖ`.
    pub lhs: Vec<f64>,
    /// Spherical mean of `|u|ᵖ`.
    pub rhs: Vec<f64>,
    /// Largest `(lhs − rhs)/max(rhs, tiny)`; nonpositive up to rounding.
    pub worst_excess: f64,
    pub holds: bool,
}

/// `|ū(r)|ᵖ ≤ mean of |u|ᵖ` on spheres, both sides from the same nodes.
pub fn jensen_check(u: &Field, p: f64) -> Result<JensenReport> {
    if !(p > 1.0) {
        return Err(config(format!("p = {p} must exceed 1")));
    }
    check_sphere_dim(u)?;
    let g = u.grid();
    let radii: Vec<f64> = (0..g.points() / 2 + 1).map(|i| g.spacing() * i as f64).collect();
    let pairs: Vec<(f64, f64)> = radii
        .par_iter()
        .map(|&r| {
            let (v, w) = sphere_samples(u, r);
            let mean: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let pmean: f64 = v.iter().zip(&w).map(|(a, b)| a.abs().powf(p) * b).sum();
            (mean.abs().powf(p), pmean)
        })
        .collect();
    let (lhs, rhs): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let worst_excess = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| if *l == 0.0 && *r == 0.0 { 0.0 } else { (l - r) / r.max(f64::MIN_POSITIVE) })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(JensenReport {
        p,
        radii,
        lhs,
        rhs,
        worst_excess,
        holds: worst_excess <= 1e-12,
    })
}

/// `|S^{n−2}|`: 2 for `n = 2`, `2π` for `n = 3`.
pub fn radon_constant(n: usize) -> f64 {
    if n == 2 {
        2.0
    } else {
        2.0 * PI
    }
}

/// Antiderivatives of `w(r)` and `r·w(r)` for the weight `w = r(r² − ρ²)^{(n−3)/2}`.
fn radon_moments(n: usize, rho: f64, r: f64) -> (f64, f64) {
    if n == 2 {
        let s = (r * r - rho * rho).max(0.0).sqrt();
        let log = if r + s > 0.0 { (r + s).ln() } else { 0.0 };
        (s, 0.5 * (r * s + rho * rho * log))
    } else {
        (0.5 * r * r, r * r * r / 3.0)
    }
}

/// `c_n ∫_{|ρ|}^∞ u(r)(r² − ρ²)^{(n−3)/2} r dr`, integrating the piecewise-linear
/// profile exactly against the weight. Zero for `|ρ|` beyond the profile.
pub fn radon_radial(profile: &RadialProfile, n: usize, rho: f64) -> Result<f64> {
    if n != 2 && n != 3 {
        return Err(Error::Precondition(format!("radial Radon transform needs n ∈ {{2, 3}}, got {n}")));
    }
    let rho = rho.abs();
    if rho >= profile.r_max() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for i in 0..profile.radii.len() - 1 {
        let (r0, r1) = (profile.radii[i], profile.radii[i + 1]);
        if r1 <= rho || r1 == r0 {
            continue;
        }
        let (v0, v1) = (profile.values[i], profile.values[i + 1]);
        let slope = (v1 - v0) / (r1 - r0);
        let base = v0 - slope * r0;
        let a = r0.max(rho);
        let (m0a, m1a) = radon_moments(n, rho, a);
        let (m0b, m1b) = radon_moments(n, rho, r1);
        total += base * (m0b - m0a) + slope * (m1b - m1a);
    }
    Ok(radon_constant(n) * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GReport {
    /// `G = ∫u dx`.
    pub g: f64,
    /// `∫|u|ᵖ dx`.
    pub gpp: f64,
    /// `∫|u|ᵖ / (|B|^{−(p−1)} |G|ᵖ)`, `+∞` when `G = 0`.
    pub holder_ratio: f64,
    /// Measure of the ball: cell volume times the grid points inside it.
    pub ball_volume: f64,
}

/// `G`, `G″ = ∫|u|ᵖ` and the Hölder ratio on the ball of radius `radius`
/// (the cone `M + φ(t)` for a solution).
pub fn g_functional(u: &Field, p: f64, radius: f64) -> Result<GReport> {
    if !(p > 1.0) {
        return Err(config(format!("p = {p} must exceed 1")));
    }
    let grid = *u.grid();
    if !(radius > 0.0) || radius >= grid.half_width() {
        return Err(Error::SupportViolation(format!(
            "ball of radius {radius} does not fit inside the box of half width {}",
            grid.half_width()
        )));
    }
    let sup = u.sup_norm();
    let edge = (0..grid.len())
        .filter(|&k| {
            let idx = grid.unflatten(k);
            idx[..grid.dim()].iter().any(|&i| i == 0 || i + 1 == grid.points())
        })
        .map(|k| u.values()[k].abs())
        .fold(0.0, f64::max);
    if sup > 0.0 && edge > 1e-10 * sup {
        return Err(Error::SupportViolation(format!(
            "field reaches the box boundary: edge value {edge:.3e} against sup {sup:.3e}"
        )));
    }
    let inside = (0..grid.len())
        .filter(|&k| {
            let x = grid.coordinates(k);
            x.iter().map(|v| v * v).sum::<f64>() <= radius * radius
        })
        .count();
    let ball_volume = inside as f64 * grid.cell_volume();
    let g = u.integral();
    let gpp = u.values().iter().map(|v| v.abs().powf(p)).sum::<f64>() * grid.cell_volume();
    let holder_ratio = if g == 0.0 {
        f64::INFINITY
    } else {
        gpp / (ball_volume.powf(-(p - 1.0)) * g.abs().powf(p))
    };
    Ok(GReport {
        g,
        gpp,
        holder_ratio,
        ball_volume,
    })
}

/// `G″ = K₁(t + M)^{−q} Gᵖ` from `T₀`, under the growth floor `G ≥ K₀(t + M)^a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiccatiConfig {
    pub p: f64,
    pub a: f64,
    pub q: f64,
    pub k0: f64,
    pub k1: f64,
    pub m: f64,
    pub t0: f64,
    /// Runs that reach this time count as surviving.
    pub horizon: f64,
}

impl RiccatiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) {
            return Err(config(format!("p = {} must exceed 1", self.p)));
        }
        if !(self.a >= 1.0) {
            return Err(config(format!("a = {} must be at least 1", self.a)));
        }
        if ((self.p - 1.0) * self.a - (self.q - 2.0)).abs() > 1e-12 {
            return Err(config(format!(
                "(p − 1)a = {} differs from q − 2 = {}",
                (self.p - 1.0) * self.a,
                self.q - 2.0
            )));
        }
        if !(self.k0 > 0.0 && self.k1 > 0.0 && self.m > 0.0 && self.t0 > 0.0) {
            return Err(config("K0, K1, M and T0 must be positive"));
        }
        if !(self.horizon > self.t0) || !self.horizon.is_finite() {
            return Err(config("horizon must be finite and exceed T0"));
        }
        Ok(())
    }

    /// `K₀(T₀ + M)^a`.
    pub fn floor(&self) -> f64 {
        self.k0 * (self.t0 + self.m).powf(self.a)
    }

    /// Derivative of the floor at `T₀`.
    pub fn floor_slope(&self) -> f64 {
        self.a * self.k0 * (self.t0 + self.m).powf(self.a - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RiccatiOutcome {
    BlowUp { time: f64 },
    Survived { horizon: f64 },
}

impl RiccatiOutcome {
    pub fn blowup_time(&self) -> Option<f64> {
        match self {
            RiccatiOutcome::BlowUp { time } => Some(*time),
            RiccatiOutcome::Survived { .. } => None,
        }
    }
}

fn riccati_rhs(cfg: &RiccatiConfig, t: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], cfg.k1 * (t + cfg.m).powf(-cfg.q) * y[0].max(0.0).powf(cfg.p)]
}

fn rk4(cfg: &RiccatiConfig, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let add = |y: [f64; 2], k: [f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
    let k1 = riccati_rhs(cfg, t, y);
    let k2 = riccati_rhs(cfg, t + 0.5 * h, add(y, k1, 0.5 * h));
    let k3 = riccati_rhs(cfg, t + 0.5 * h, add(y, k2, 0.5 * h));
    let k4 = riccati_rhs(cfg, t + h, add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

const RICCATI_TOL: f64 = 1e-10;

/// One adaptive run with step doubling; blowup is a step below 1e−12 while
/// `G > 1e12`, or `G` leaving the floating-point range.
fn riccati_run(cfg: &RiccatiConfig, g0: f64, g1: f64, first_step: f64) -> Result<RiccatiOutcome> {
    let mut t = cfg.t0;
    let mut y = [g0, g1];
    let mut h = first_step;
    let mut steps = 0usize;
    while t < cfg.horizon {
        steps += 1;
        if steps > 50_000_000 {
            return Err(Error::Numerical("Riccati integration exceeded its step budget".into()));
        }
        let h_try = h.min(cfg.horizon - t);
        let big = rk4(cfg, t, y, h_try);
        let half = rk4(cfg, t, y, 0.5 * h_try);
        let fine = rk4(cfg, t + 0.5 * h_try, half, 0.5 * h_try);
        let finite = fine.iter().chain(&big).all(|v| v.is_finite()) && fine[0] < 1e250;
        let err = if finite {
            ((fine[0] - big[0]).abs() / (1.0 + fine[0].abs()))
                .max((fine[1] - big[1]).abs() / (1.0 + fine[1].abs()))
                / 15.0
        } else {
            f64::INFINITY
        };
        if err <= RICCATI_TOL {
            t += h_try;
            y = fine;
            let grow = if err == 0.0 { 4.0 } else { (0.9 * (RICCATI_TOL / err).powf(0.2)).clamp(0.2, 4.0) };
            h = h_try * grow;
        } else {
            h = h_try * if err.is_finite() { (0.9 * (RICCATI_TOL / err).powf(0.2)).clamp(0.1, 0.9) } else { 0.25 };
            if h < 1e-12 {
                if y[0] > 1e12 || !finite {
                    return Ok(RiccatiOutcome::BlowUp { time: t });
                }
                return Err(Error::Numerical(format!("step collapse at t = {t} with G = {}", y[0])));
            }
        }
    }
    Ok(RiccatiOutcome::Survived { horizon: cfg.horizon })
}

/// Integrates the comparison ODE from `T₀` with `G(T₀) = g0`, `G′(T₀) = g1`.
/// A blowup is accepted only if a rerun with half the initial step agrees.
pub fn riccati_integrate(cfg: &RiccatiConfig, g0: f64, g1: f64) -> Result<RiccatiOutcome> {
    cfg.validate()?;
    if !(g0 >= cfg.floor() * (1.0 - 1e-14)) {
        return Err(Error::Precondition(format!(
            "G(T0) = {g0} is below the floor K0(T0 + M)^a = {}",
            cfg.floor()
        )));
    }
    if !g1.is_finite() {
        return Err(config("initial slope must be finite"));
    }
    let h0 = 1e-3 * (cfg.t0 + cfg.m);
    let first = riccati_run(cfg, g0, g1, h0)?;
    let second = riccati_run(cfg, g0, g1, 0.5 * h0)?;
    match (first, second) {
        (RiccatiOutcome::BlowUp { time: a }, RiccatiOutcome::BlowUp { time: b }) => {
            if (a - b).abs() > 1e-6 * a.abs().max(1.0) {
                return Err(Error::Numerical(format!("blowup times {a} and {b} disagree")));
            }
            Ok(RiccatiOutcome::BlowUp { time: a.min(b) })
        }
        (RiccatiOutcome::Survived { .. }, RiccatiOutcome::Survived { .. }) => Ok(first),
        _ => Err(Error::Numerical("blowup not confirmed at half the initial step".into())),
    }
}

/// Blowup outcome with data on the floor: `G(T₀) = K₀(T₀+M)^a`, `G′(T₀) = aK₀(T₀+M)^{a−1}`.
pub fn riccati_on_floor(cfg: &RiccatiConfig) -> Result<RiccatiOutcome> {
    riccati_integrate(cfg, cfg.floor(), cfg.floor_slope())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C0Estimate {
    /// Largest `K₀` seen to survive.
    pub survive: f64,
    /// Smallest `K₀` seen to blow up.
    pub blowup: f64,
    pub relative_width: f64,
    pub runs: usize,
}

impl C0Estimate {
    pub fn value(&self) -> f64 {
        (self.survive * self.blowup).sqrt()
    }
}

/// Bisection in `K₀` for the smallest floor that blows up before `horizon`.
pub fn c0_estimate(p: f64, a: f64, q: f64, k1: f64, m: f64, t0: f64, horizon: f64) -> Result<C0Estimate> {
    let base = RiccatiConfig { p, a, q, k0: 1.0, k1, m, t0, horizon };
    base.validate()?;
    let blows = |k0: f64| -> Result<bool> {
        Ok(riccati_on_floor(&RiccatiConfig { k0, ..base })?.blowup_time().is_some())
    };
    let mut runs = 0usize;
    let (mut lo, mut hi);
    runs += 1;
    if blows(1.0)? {
        hi = 1.0;
        lo = 0.5;
        loop {
            runs += 1;
            if !blows(lo)? {
                break;
            }
            hi = lo;
            lo *= 0.5;
            if lo < 1e-12 {
                return Err(Error::Bracket("every K0 down to 1e−12 blows up".into()));
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        loop {
            runs += 1;
            if blows(hi)? {
                break;
            }
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Bracket("no blowup for K0 up to 1e12".into()));
            }
        }
    }
    while hi / lo - 1.0 > 1e-3 {
        let mid = (lo * hi).sqrt();
        runs += 1;
        if blows(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(C0Estimate {
        survive: lo,
        blowup: hi,
        relative_width: hi / lo - 1.0,
        runs,
    })
}

/// `(T f)(ρ) = |L − ρ|^{−(n−1)/2} ∫_ρ^L f(r)|r − ρ|^{(n−3)/2} dr` on `[0, L]`,
/// `L = φ(t) + M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TOperatorOutput {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// `‖Tf‖_p / ‖f‖_p` for this `f`; `None` when `f = 0`.
    pub ratio: Option<f64>,
}

fn t_apply_at(nodes: &[f64], f: &[f64], n: usize, rho: f64) -> f64 {
    let l = *nodes.last().expect("nonempty");
    let e = (n as f64 - 3.0) / 2.0;
    if rho >= l {
        // Limit of the average as ρ → L.
        return f.last().copied().unwrap_or(0.0) / (e + 1.0);
    }
    let mut total = 0.0;
    for i in 0..nodes.len() - 1 {
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        if r1 <= rho {
            continue;
        }
        let slope = (f[i + 1] - f[i]) / (r1 - r0);
        let a = r0.max(rho);
        // f = f(ρ′) + slope (r − ρ) on the piece, with f(ρ′) the linear extension at ρ.
        let at_rho = f[i] + slope * (rho - r0);
        let prim = |r: f64| {
            let d = r - rho;
            at_rho * d.powf(e + 1.0) / (e + 1.0) + slope * d.powf(e + 2.0) / (e + 2.0)
        };
        total += prim(r1) - prim(a);
    }
    total / (l - rho).powf((n as f64 - 1.0) / 2.0)
}

fn lp_trapezoid(nodes: &[f64], v: &[f64], p: f64) -> f64 {
    trapezoid_weights(nodes)
        .iter()
        .zip(v)
        .map(|(w, x)| w * x.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `T` applied to uniform samples `f` of `[0, φ(t) + M]`.
pub fn t_operator(f: &[f64], n: usize, t: f64, m: f64, p: f64) -> Result<TOperatorOutput> {
    if n != 2 && n != 3 {
        return Err(Error::Precondition(format!("T needs n ∈ {{2, 3}}, got {n}")));
    }
    if f.len() < 2 {
        return Err(config("need at least two samples"));
    }
    if !(p >= 1.0) {
        return Err(config(format!("p = {p} must be at least 1")));
    }
    let l = phi(t) + m;
    let nodes: Vec<f64> = (0..f.len()).map(|i| l * i as f64 / (f.len() - 1) as f64).collect();
    let values: Vec<f64> = nodes.par_iter().map(|&r| t_apply_at(&nodes, f, n, r)).collect();
    let fn_norm = lp_trapezoid(&nodes, f, p);
    let ratio = (fn_norm > 0.0).then(|| lp_trapezoid(&nodes, &values, p) / fn_norm);
    Ok(TOperatorOutput { nodes, values, ratio })
}

/// `(T f)(ρ)` at a single point.
pub fn t_operator_at(f: &[f64], n: usize, t: f64, m: f64, rho: f64) -> Result<f64> {
    let l = phi(t) + m;
    if !(0.0..=l).contains(&rho) {
        return Err(Error::Range(format!("ρ = {rho} outside [0, {l}]")));
    }
    if n != 2 && n != 3 {
        return Err(Error::Precondition(format!("T needs n ∈ {{2, 3}}, got {n}")));
    }
    let nodes: Vec<f64> = (0..f.len()).map(|i| l * i as f64 / (f.len() - 1) as f64).collect();
    Ok(t_apply_at(&nodes, f, n, rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TNormEstimate {
    pub samples: usize,
    pub members: usize,
    pub measured_norm: f64,
}

/// Largest `‖Tf‖_p/‖f‖_p` over random nonnegative `f`: sums of bumps with
/// random centers, widths and heights on `[0, L]`, defined independently of
/// the sampling so refinements see the same functions.
pub fn t_operator_norm(
    n: usize,
    t: f64,
    m: f64,
    p: f64,
    samples: usize,
    members: usize,
    seed: u64,
) -> Result<TNormEstimate> {
    let l = phi(t) + m;
    let ratios = (0..members)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            let bumps: Vec<[f64; 3]> = (0..4)
                .map(|_| [rng.gen_range(0.0..l), rng.gen_range(0.02..0.3) * l, rng.gen_range(0.0..1.0)])
                .collect();
            let f: Vec<f64> = (0..samples)
                .map(|i| {
                    let r = l * i as f64 / (samples - 1) as f64;
                    bumps.iter().map(|b| b[2] * (-((r - b[0]) / b[1]).powi(2)).exp()).sum()
                })
                .collect();
            t_operator(&f, n, t, m, p).map(|o| o.ratio.unwrap_or(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TNormEstimate {
        samples,
        members,
        measured_norm: ratios.into_iter().fold(0.0, f64::max),
    })
}

/// `(3/2)(n − 1 − np/2 + p/3)`.
pub fn sigma(n: usize, p: f64) -> f64 {
    let n = n as f64;
    1.5 * (n - 1.0 - n * p / 2.0 + p / 3.0)
}

/// One sampled point of the lower-bound chain; each ratio is left side over
/// right side with every generic constant set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSample {
    pub t: f64,
    pub rho: f64,
    /// `R(u)(t, ρ)`.
    pub radon: f64,
    /// Against the space-time integral of `R(|u|ᵖ)` with kernel `((φ(t)+φ(s))² − (ρ−ρ₁)²)^{−1/6}`.
    pub duhamel_ratio: f64,
    /// Against `(φ−ρ)^{−1/6} φ^{−1/6} (φ−ρ−M)^{n−1−np/2+(p+2)/3}`.
    pub radon_power_ratio: f64,
    /// `∫|u|ᵖ` against `φ^{n−1−np/2+p/3} ln(φ − M + 1)`.
    pub power_integral_ratio: f64,
    /// `G(t)` against `(t + M)^{p/2 + 2 + (3/2)(n−1−np/2)}`.
    pub growth_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainWitnessReport {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub samples: Vec<ChainSample>,
    pub min_duhamel_ratio: f64,
    pub min_radon_power_ratio: f64,
    pub min_power_integral_ratio: f64,
    pub min_growth_ratio: f64,
    pub sigma: f64,
    pub sigma_above_minus_one: bool,
}

fn abs_pow(u: &Field, p: f64) -> Field {
    let mut out = u.clone();
    out.values_mut().iter_mut().for_each(|v| *v = v.abs().powf(p));
    out
}

/// Evaluates the lower-bound chain on stored slices of a simulation with
/// nonnegative data supported in `|x| ≤ m`, at times with `φ(t) > 2(M+1)` and
/// radii `0 ≤ ρ < φ(t) − M − 1`.
pub fn chain_witness(trace: &SimulationTrace, p: f64, n: usize, m: f64) -> Result<ChainWitnessReport> {
    if trace.fields.len() != trace.times.len() || trace.fields.is_empty() {
        return Err(Error::Precondition("the trace must store a field at every recorded time".into()));
    }
    if !(p > 1.0 && m > 0.0) {
        return Err(config("need p > 1 and M > 0"));
    }
    let grid = *trace.fields[0].grid();
    if grid.dim() != n {
        return Err(Error::GridMismatch(format!("trace is {}-dimensional, n = {n}", grid.dim())));
    }
    let times = &trace.times;
    let means: Vec<(RadialProfile, RadialProfile)> = trace
        .fields
        .iter()
        .map(|u| Ok((spherical_mean(u)?, spherical_mean(&abs_pow(u, p))?)))
        .collect::<Result<_>>()?;
    // R(|u|ᵖ)(s, ·) tabulated on the profile radii.
    let power_radon: Vec<RadialProfile> = means
        .iter()
        .map(|(_, up)| {
            let vals = up
                .radii
                .iter()
                .map(|&r| radon_radial(up, n, r))
                .collect::<Result<Vec<_>>>()?;
            RadialProfile::new(up.radii.clone(), vals)
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let e_radon = nf - 1.0 - nf * p / 2.0 + (p + 2.0) / 3.0;
    let e_power = nf - 1.0 - nf * p / 2.0 + p / 3.0;
    let e_growth = p / 2.0 + 2.0 + 1.5 * (nf - 1.0 - nf * p / 2.0);
    let rule = gauss_legendre(8);

    let mut samples = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let ph = phi(t);
        if !(ph > 2.0 * (m + 1.0)) || ph + m >= grid.half_width() {
            continue;
        }
        let u = &trace.fields[i];
        let gpp = abs_pow(u, p).integral();
        let g = u.integral();
        let s_nodes = &times[..=i];
        let s_weights = trapezoid_weights(s_nodes);
        for k in 0..5 {
            let rho = (ph - m - 1.0) * k as f64 / 5.0;
            let radon = radon_radial(&means[i].0, n, rho)?;
            let duhamel: f64 = s_nodes
                .iter()
                .zip(&s_weights)
                .enumerate()
                .map(|(j, (&s, &ws))| {
                    let ps = phi(s);
                    let half = ph - ps;
                    if half <= 0.0 {
                        return 0.0;
                    }
                    let (lo, hi) = (rho - half, rho + half);
                    let panels = 64;
                    let width = (hi - lo) / panels as f64;
                    let mut acc = 0.0;
                    for q in 0..panels {
                        let a = lo + width * q as f64;
                        let (x, w) = rule.mapped(a, a + width);
                        for (r1, w1) in x.into_iter().zip(w) {
                            let d = rho - r1;
                            let ker = ((ph + ps).powi(2) - d * d).max(0.0).powf(-1.0 / 6.0);
                            acc += w1 * ker * power_radon[j].eval(r1.abs());
                        }
                    }
                    ws * acc
                })
                .sum();
            let radon_power = (ph - rho).powf(-1.0 / 6.0) * ph.powf(-1.0 / 6.0) * (ph - rho - m).powf(e_radon);
            let power_integral = ph.powf(e_power) * (ph - m + 1.0).ln();
            let growth = (t + m).powf(e_growth);
            samples.push(ChainSample {
                t,
                rho,
                radon,
                duhamel_ratio: radon / duhamel,
                radon_power_ratio: radon / radon_power,
                power_integral_ratio: gpp / power_integral,
                growth_ratio: g / growth,
            });
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyReport(format!(
            "no stored time has φ(t) > 2(M + 1) = {} inside the box",
            2.0 * (m + 1.0)
        )));
    }
    let min = |f: fn(&ChainSample) -> f64| samples.iter().map(f).fold(f64::INFINITY, f64::min);
    let s = sigma(n, p);
    Ok(ChainWitnessReport {
        n,
        p,
        m,
        min_duhamel_ratio: min(|c| c.duhamel_ratio),
        min_radon_power_ratio: min(|c| c.radon_power_ratio),
        min_power_integral_ratio: min(|c| c.power_integral_ratio),
        min_growth_ratio: min(|c| c.growth_ratio),
        samples,
        sigma: s,
        sigma_above_minus_one: s > -1.0,
    })
}
