//! Angular integrals of `α̂_t`, where `α(t, ρ) = ρ β(ρ) a₂(t, ρ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{config, Error, Result};
use crate::quadrature::{gauss_legendre, trapezoid_weights};
use crate::specfun::phi;

use super::littlewood_paley::bump;
use super::operator::ModelAmplitude;

/// `α̂_t(ξ) = ∫ e^{−iρξ} α(t, ρ) dρ` on the support `[1/2, 2]`.
#[derive(Debug, Clone)]
pub struct AlphaTransform {
    t: f64,
    nodes: Vec<f64>,
    weighted: Vec<f64>,
}

impl AlphaTransform {
    pub fn new(t: f64, amp: &ModelAmplitude) -> Self {
        let rule = gauss_legendre(24);
        let panels = 48;
        let (a, b) = (0.5, 2.0);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * 24);
        let mut weighted = Vec::with_capacity(panels * 24);
        for p in 0..panels {
            let lo = a + width * p as f64;
            let (x, w) = rule.mapped(lo, lo + width);
            for (x, w) in x.into_iter().zip(w) {
                weighted.push(w * x * bump(x) * amp.eval(t, x));
                nodes.push(x);
            }
        }
        Self { t, nodes, weighted }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weighted)
            .map(|(&r, &w)| Complex64::from_polar(w, -r * xi))
            .sum()
    }

    /// Cubic table of `α̂_t` on `[−x, x]` with spacing `step`.
    fn table(&self, x: f64, step: f64) -> Table {
        let count = (2.0 * x / step).ceil() as usize + 1;
        let values = (0..count).map(|i| self.eval(-x + step * i as f64)).collect();
        Table { x0: -x, step, values }
    }
}

struct Table {
    x0: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl Table {
    fn modulus(&self, x: f64) -> f64 {
        let s = (x - self.x0) / self.step;
        let n = self.values.len();
        if s < 1.0 || s > (n - 3) as f64 {
            return 0.0;
        }
        let i = s.floor() as usize;
        let w = crate::quadrature::cubic_weights(s - i as f64);
        (0..4).map(|k| self.values[i - 1 + k] * w[k]).sum::<Complex64>().norm()
    }
}

/// Gauss–Legendre nodes on `[0, π]`; the integrand in `θ` is even.
fn theta_rule() -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre(16);
    let panels = 64;
    let mut th = Vec::new();
    let mut w = Vec::new();
    for p in 0..panels {
        let lo = PI * p as f64 / panels as f64;
        let (x, ww) = rule.mapped(lo, lo + PI / panels as f64);
        th.extend(x);
        w.extend(ww.into_iter().map(|v| 2.0 * v));
    }
    (th, w)
}

/// `∫₀^{2π} |α̂_t(b − r cos θ)| dθ`.
pub fn angular_integral(alpha: &AlphaTransform, r: f64, b: f64) -> f64 {
    let (th, w) = theta_rule();
    th.iter()
        .zip(&w)
        .map(|(&t, &w)| w * alpha.eval(b - r * t.cos()).norm())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelRegime {
    /// `r ≤ 1` or `|b| ≥ 2r`: envelope `⟨b⟩^{−N}(1+φ)^{−1/6}`.
    Decaying,
    /// `r > 1`, `|b| ≤ 2r`: envelope `(r^{−1} + r^{−1/2}⟨r−|b|⟩^{−1/2})(1+φ)^{−1/6}`.
    Shell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBoundReport {
    pub t: f64,
    pub r: f64,
    pub b: f64,
    pub integral: f64,
    pub regime: KernelRegime,
    /// Right-hand side without its constant.
    pub envelope: f64,
    /// `integral / envelope`, the constant this point requires.
    pub ratio: f64,
    /// Decay order used for the decaying envelope.
    pub order: u32,
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

pub fn kernel_envelope(t: f64, r: f64, b: f64, order: u32) -> (KernelRegime, f64) {
    let damp = (1.0 + phi(t)).powf(-1.0 / 6.0);
    if r <= 1.0 || b.abs() >= 2.0 * r {
        (KernelRegime::Decaying, bracket(b).powi(-(order as i32)) * damp)
    } else {
        let env = 1.0 / r + r.powf(-0.5) * bracket(r - b.abs()).powf(-0.5);
        (KernelRegime::Shell, env * damp)
    }
}

/// Evaluates the angular integral at `(t, r, b)` against its envelope.
pub fn kernel_bound_check(t: f64, r: f64, b: f64, amp: &ModelAmplitude) -> Result<KernelBoundReport> {
    if !(t >= 0.0 && r >= 0.0 && b.is_finite() && t.is_finite() && r.is_finite()) {
        return Err(config(format!("invalid kernel point (t, r, b) = ({t}, {r}, {b})")));
    }
    let alpha = AlphaTransform::new(t, amp);
    let integral = angular_integral(&alpha, r, b);
    if !integral.is_finite() {
        return Err(Error::Numerical("angular integral did not converge".into()));
    }
    let order = 3;
    let (regime, envelope) = kernel_envelope(t, r, b, order);
    Ok(KernelBoundReport {
        t,
        r,
        b,
        integral,
        regime,
        envelope,
        ratio: integral / envelope,
        order,
    })
}

/// Fitted constants of both envelopes: the largest ratio per regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelConstants {
    pub decaying: f64,
    pub shell: f64,
}

pub fn fit_kernel_constants(
    times: &[f64],
    radii: &[f64],
    offsets: &[f64],
    amp: &ModelAmplitude,
) -> Result<KernelConstants> {
    let mut c = KernelConstants {
        decaying: 0.0,
        shell: 0.0,
    };
    for &t in times {
        let alpha = AlphaTransform::new(t, amp);
        for &r in radii {
            for &b in offsets {
                let i = angular_integral(&alpha, r, b);
                let (regime, env) = kernel_envelope(t, r, b, 3);
                let slot = match regime {
                    KernelRegime::Decaying => &mut c.decaying,
                    KernelRegime::Shell => &mut c.shell,
                };
                *slot = slot.max(i / env);
            }
        }
    }
    if !(c.decaying.is_finite() && c.shell.is_finite()) {
        return Err(Error::Numerical("non-finite kernel ratio".into()));
    }
    Ok(c)
}

/// Least-squares slope of `−log I` against `log⟨b⟩` for fixed `(t, r)`.
pub fn fit_decay_order(t: f64, r: f64, offsets: &[f64], amp: &ModelAmplitude) -> Result<f64> {
    if offsets.len() < 2 {
        return Err(config("need at least two offsets for a decay fit"));
    }
    let alpha = AlphaTransform::new(t, amp);
    let pts: Vec<(f64, f64)> = offsets
        .iter()
        .map(|&b| (bracket(b).ln(), angular_integral(&alpha, r, b).ln()))
        .collect();
    Ok(-least_squares_slope(&pts))
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `∫(∫₀^{2π} (1+φ)^{1/6} ⟨σ⟩^{1/2−δ} |α̂_t(σ − r cos θ)| dθ)² dσ` over `σ ∈ ℝ`,
/// with `σ = φ(t) − s`.
pub fn claim_integral(t: f64, r: f64, delta: f64, amp: &ModelAmplitude) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(config(format!("δ = {delta} must lie in (0, 1/2)")));
    }
    if !(t >= 0.0 && r >= 0.0) {
        return Err(config(format!("invalid (t, r) = ({t}, {r})")));
    }
    let alpha = AlphaTransform::new(t, amp);
    // |α̂| has fallen below 1e−9 of its peak beyond this tail.
    let tail = 200.0;
    let reach = r + tail;
    let table = alpha.table(reach + r + 1.0, 0.02);
    let (th, w) = theta_rule();
    let cos: Vec<f64> = th.iter().map(|t| t.cos()).collect();
    let damp = (1.0 + phi(t)).powf(1.0 / 6.0);
    let step = 0.05;
    let count = (2.0 * reach / step).ceil() as usize + 1;
    let sigma: Vec<f64> = (0..count).map(|i| -reach + step * i as f64).collect();
    let vals: Vec<f64> = sigma
        .iter()
        .map(|&s| {
            let inner: f64 = cos
                .iter()
                .zip(&w)
                .map(|(c, w)| w * table.modulus(s - r * c))
                .sum();
            (damp * bracket(s).powf(0.5 - delta) * inner).powi(2)
        })
        .collect();
    let total: f64 = trapezoid_weights(&sigma).iter().zip(&vals).map(|(w, v)| w * v).sum();
    if !total.is_finite() {
        return Err(Error::Numerical("claim integral did not converge".into()));
    }
    Ok(total)
}
