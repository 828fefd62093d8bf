//! Solvers for `∂²ₜu − tΔu = |u|ᵖ`: Picard iteration on the Duhamel form and
//! a split-step integrator, plus the blowup verdict built on their traces.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};
use crate::exponents::global_indices;
use crate::grid::{inverse_transform, transform, Field, GridSpec, Spectrum};
use crate::propagator::{duhamel_trajectory, Propagator, SampledSource, Source, SpectralState};
use crate::strichartz::norms::{mixed_norm, time_norm, MixedNormSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Picard,
    #[default]
    Stepper,
}

fn one() -> f64 {
    1.0
}

fn ten() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub p: f64,
    pub grid: GridSpec,
    pub dt: f64,
    pub horizon: f64,
    #[serde(default)]
    pub dealias: bool,
    /// Sup-norm cap; crossing it ends the run.
    pub blowup_threshold: f64,
    #[serde(default)]
    pub method: Method,
    /// `ε`: the data are `(εf, εg)`.
    #[serde(default = "one")]
    pub data_amplitude: f64,
    /// Multiplies `|u|ᵖ`; 0 gives the linear problem.
    #[serde(default = "one")]
    pub nonlinearity_coefficient: f64,
    /// Steps between trace records.
    #[serde(default = "ten")]
    pub output_every: usize,
    /// `(q, r)` of the recorded mixed norm; see [`SimulationConfig::indices`].
    #[serde(default)]
    pub mixed_indices: Option<[f64; 2]>,
    /// Keep the recorded slices in the trace.
    #[serde(default)]
    pub store_fields: bool,
}

impl SimulationConfig {
    pub fn new(p: f64, grid: GridSpec, dt: f64, horizon: f64) -> Self {
        Self {
            p,
            grid,
            dt,
            horizon,
            dealias: true,
            blowup_threshold: 1e6,
            method: Method::Stepper,
            data_amplitude: 1.0,
            nonlinearity_coefficient: 1.0,
            output_every: 10,
            mixed_indices: None,
            store_fields: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.grid.dim(), self.grid.half_width(), self.grid.points())?;
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(config(format!("p = {} must exceed 1", self.p)));
        }
        if !(self.dt > 0.0 && self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(config("dt and horizon must be positive"));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(config("blowup threshold must be positive"));
        }
        if self.output_every == 0 {
            return Err(config("output_every must be at least 1"));
        }
        if !self.data_amplitude.is_finite() || !self.nonlinearity_coefficient.is_finite() {
            return Err(config("amplitudes must be finite"));
        }
        if let Some([q, r]) = self.mixed_indices {
            if !(q >= 1.0 && r >= 1.0) {
                return Err(config(format!("mixed indices ({q}, {r}) must be ≥ 1")));
            }
        }
        Ok(())
    }

    /// Number of steps; the horizon must be a whole multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let n = self.horizon / self.dt;
        let k = n.round();
        if (n - k).abs() > 1e-9 * n.max(1.0) || k < 1.0 {
            return Err(config(format!(
                "horizon {} is not a multiple of dt = {}",
                self.horizon, self.dt
            )));
        }
        Ok(k as usize)
    }

    /// The explicit indices, else the global-existence indices for `p` in two
    /// dimensions, else `(∞, p)`.
    pub fn indices(&self) -> (f64, f64) {
        if let Some([q, r]) = self.mixed_indices {
            return (q, r);
        }
        match global_indices(self.p) {
            Ok(ix) => (ix.q, ix.r),
            Err(_) => (f64::INFINITY, self.p),
        }
    }

    fn with_dt(&self, dt: f64) -> Self {
        Self { dt, ..self.clone() }
    }
}

/// `exp(1 − 1/(1 − |x|²/R²))` inside the ball of radius `R`, 0 outside.
pub fn compact_bump(grid: GridSpec, radius: f64) -> Field {
    Field::from_fn(grid, |x| {
        let s: f64 = x[..grid.dim()].iter().map(|v| v * v).sum::<f64>() / (radius * radius);
        if s < 1.0 {
            (1.0 - 1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    })
}

/// `c|u|ᵖ`, with `|u|` floored at 1e−300 before the logarithm.
pub fn power_source(u: &Field, p: f64, coefficient: f64) -> Field {
    let mut out = u.clone();
    out.values_mut()
        .par_iter_mut()
        .for_each(|v| *v = coefficient * (p * v.abs().max(1e-300).ln()).exp());
    out
}

fn source_spectrum(
    u: &Field,
    cfg: &SimulationConfig,
    mask: Option<&[bool]>,
    forcing: Option<&dyn Source>,
    tau: f64,
) -> Result<Spectrum> {
    let mut s = if cfg.nonlinearity_coefficient == 0.0 {
        Spectrum::new(cfg.grid, vec![Complex64::new(0.0, 0.0); cfg.grid.len()])?
    } else {
        transform(&power_source(u, cfg.p, cfg.nonlinearity_coefficient))
    };
    if let Some(mask) = mask {
        for (c, keep) in s.coeffs_mut().iter_mut().zip(mask) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
    if let Some(f) = forcing {
        let extra = f.spectrum_at(tau)?;
        cfg.grid.check_same(extra.grid())?;
        for (c, e) in s.coeffs_mut().iter_mut().zip(extra.coeffs()) {
            *c += e;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    pub sup_norm: Vec<f64>,
    /// `G(t) = ∫u dx`.
    pub integral: Vec<f64>,
    /// `‖u(t)‖_p`.
    pub lp_norm: Vec<f64>,
    /// Mixed norm of the recorded slices with [`SimulationConfig::indices`].
    pub mixed_norm: Option<f64>,
    pub mixed_indices: (f64, f64),
    /// Recorded slices when `store_fields` is set.
    #[serde(skip)]
    pub fields: Vec<Field>,
    /// First time the sup norm exceeded the threshold.
    pub crossing: Option<f64>,
    /// True if the run reached the horizon.
    pub completed: bool,
    pub dt: f64,
    pub horizon: f64,
    /// `ε·max(‖f‖∞, ‖g‖∞)`.
    pub data_scale: f64,
}

impl SimulationTrace {
    pub fn max_sup_norm(&self) -> f64 {
        self.sup_norm.iter().cloned().fold(0.0, f64::max)
    }
}

/// Mixed norm of slices: the angular norm in two dimensions, `L^q_t L^r_x`
/// otherwise. `None` with fewer than two slices.
pub fn slices_mixed_norm(slices: &[Field], times: &[f64], q: f64, r: f64) -> Result<Option<f64>> {
    if slices.len() < 2 {
        return Ok(None);
    }
    let grid = *slices[0].grid();
    if grid.dim() == 2 {
        let spec = MixedNormSpec::new(q, r, grid.half_width())?;
        Ok(Some(mixed_norm(slices, times, &spec)?))
    } else {
        let norms: Vec<f64> = slices.iter().map(|u| u.lp_norm(r)).collect();
        Ok(Some(time_norm(&norms, times, q)?))
    }
}

struct Recorder {
    every: usize,
    keep: bool,
    trace: SimulationTrace,
    slices: Vec<Field>,
}

impl Recorder {
    fn record(&mut self, t: f64, u: &Field, p: f64) {
        self.trace.times.push(t);
        self.trace.sup_norm.push(u.sup_norm());
        self.trace.integral.push(u.integral());
        self.trace.lp_norm.push(u.lp_norm(p));
        self.slices.push(u.clone());
    }

    fn finish(mut self) -> Result<SimulationTrace> {
        let (q, r) = self.trace.mixed_indices;
        if self.trace.completed {
            self.trace.mixed_norm = slices_mixed_norm(&self.slices, &self.trace.times, q, r)?;
        }
        if self.keep {
            self.trace.fields = self.slices;
        }
        Ok(self.trace)
    }
}

fn check_data(f: &Field, g: &Field, cfg: &SimulationConfig) -> Result<()> {
    cfg.grid.check_same(f.grid())?;
    cfg.grid.check_same(g.grid())?;
    let scale = cfg.data_amplitude.abs() * f.sup_norm().max(g.sup_norm());
    if !(scale < cfg.blowup_threshold) {
        return Err(config(format!(
            "initial sup norm {scale} is not below the blowup threshold {}",
            cfg.blowup_threshold
        )));
    }
    Ok(())
}

/// Split-step solution without extra forcing.
pub fn evolve(f: &Field, g: &Field, cfg: &SimulationConfig) -> Result<SimulationTrace> {
    evolve_forced(f, g, cfg, None)
}

/// Split-step solution of `∂²ₜu − tΔu = c|u|ᵖ + F` with `u(0) = εf`, `∂ₜu(0) = εg`.
///
/// Each step propagates the linear part exactly over half a step, kicks the
/// velocity by `dt` times the source at the midpoint, and propagates the
/// second half. The scheme is second order in `dt`.
pub fn evolve_forced(
    f: &Field,
    g: &Field,
    cfg: &SimulationConfig,
    forcing: Option<&dyn Source>,
) -> Result<SimulationTrace> {
    cfg.validate()?;
    check_data(f, g, cfg)?;
    let steps = cfg.steps()?;
    let grid = cfg.grid;
    let prop = Propagator::new(grid);
    let mask = cfg.dealias.then(|| grid.dealias_mask());
    let eps = cfg.data_amplitude;

    let mut state = SpectralState {
        u: transform(f),
        u_dt: transform(g),
    };
    for c in state.u.coeffs_mut().iter_mut().chain(state.u_dt.coeffs_mut()) {
        *c *= eps;
    }
    let mut rec = Recorder {
        every: cfg.output_every,
        keep: cfg.store_fields,
        trace: SimulationTrace {
            times: Vec::new(),
            sup_norm: Vec::new(),
            integral: Vec::new(),
            lp_norm: Vec::new(),
            mixed_norm: None,
            mixed_indices: cfg.indices(),
            fields: Vec::new(),
            crossing: None,
            completed: false,
            dt: cfg.dt,
            horizon: cfg.horizon,
            data_scale: eps.abs() * f.sup_norm().max(g.sup_norm()),
        },
        slices: Vec::new(),
    };
    rec.record(0.0, &state.field(), cfg.p);

    let mut m_now = prop.multipliers(0.0)?;
    for step in 0..steps {
        let t = cfg.dt * step as f64;
        let t_mid = t + 0.5 * cfg.dt;
        let t_next = cfg.dt * (step + 1) as f64;
        let m_mid = prop.multipliers(t_mid)?;
        let m_next = prop.multipliers(t_next)?;
        prop.apply(&mut state, &prop.transfers(&m_now, &m_mid));
        let u_mid = state.field();
        let src = source_spectrum(&u_mid, cfg, mask.as_deref(), forcing, t_mid)?;
        for (v, s) in state.u_dt.coeffs_mut().iter_mut().zip(src.coeffs()) {
            *v += cfg.dt * s;
        }
        prop.apply(&mut state, &prop.transfers(&m_mid, &m_next));
        m_now = m_next;

        let u = state.field();
        let sup = u.sup_norm();
        if !sup.is_finite() {
            return Err(Error::Numerical(format!("non-finite solution at t = {t_next}")));
        }
        if sup > cfg.blowup_threshold {
            rec.record(t_next, &u, cfg.p);
            rec.trace.crossing = Some(t_next);
            return rec.finish();
        }
        if (step + 1) % rec.every == 0 || step + 1 == steps {
            rec.record(t_next, &u, cfg.p);
        }
    }
    rec.trace.completed = true;
    rec.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BlowupVerdict {
    BlewUp { time: f64 },
    Survived { horizon: f64 },
    Inconclusive { reason: String },
}

/// Classifies a run. A threshold crossing counts only if `refined`, the same
/// problem at `dt/2`, crosses as well; survival needs the horizon reached with
/// the sup norm at most ten times the data scale.
pub fn detect_blowup(trace: &SimulationTrace, refined: Option<&SimulationTrace>) -> BlowupVerdict {
    if trace.crossing.is_some() {
        let Some(fine) = refined else {
            return BlowupVerdict::Inconclusive {
                reason: "threshold crossing without a dt/2 confirmation run".into(),
            };
        };
        if (fine.dt - 0.5 * trace.dt).abs() > 1e-12 * trace.dt {
            return BlowupVerdict::Inconclusive {
                reason: format!("confirmation run used dt = {}, expected {}", fine.dt, 0.5 * trace.dt),
            };
        }
        return match fine.crossing {
            Some(time) => BlowupVerdict::BlewUp { time },
            None => BlowupVerdict::Inconclusive {
                reason: "threshold crossing not reproduced at dt/2".into(),
            },
        };
    }
    if !trace.completed {
        return BlowupVerdict::Inconclusive {
            reason: "run stopped before the horizon".into(),
        };
    }
    let peak = trace.max_sup_norm();
    if peak <= 10.0 * trace.data_scale {
        BlowupVerdict::Survived {
            horizon: trace.horizon,
        }
    } else {
        BlowupVerdict::Inconclusive {
            reason: format!(
                "sup norm grew to {peak:.3e}, more than ten times the data scale {:.3e}",
                trace.data_scale
            ),
        }
    }
}

/// A run at `dt`, its `dt/2` rerun when the threshold is crossed, and the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationOutcome {
    pub trace: SimulationTrace,
    pub refined: Option<SimulationTrace>,
    pub verdict: BlowupVerdict,
}

pub fn simulate(f: &Field, g: &Field, cfg: &SimulationConfig) -> Result<SimulationOutcome> {
    let trace = evolve(f, g, cfg)?;
    let refined = if trace.crossing.is_some() {
        Some(evolve(f, g, &cfg.with_dt(0.5 * cfg.dt))?)
    } else {
        None
    };
    let verdict = detect_blowup(&trace, refined.as_ref());
    Ok(SimulationOutcome {
        trace,
        refined,
        verdict,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PicardDiagnostics {
    /// `M_k`: mixed norm plus `max_t ‖u_k(t)‖₂`, for `k = 0, 1, …`.
    pub m: Vec<f64>,
    /// `A_k`: the same norm of `u_k − u_{k−1}`, for `k ≥ 1` (`a[0]` is `A_1`).
    pub a: Vec<f64>,
    pub converged: bool,
    pub indices: (f64, f64),
}

impl PicardDiagnostics {
    /// `A_{k+1}/A_k` for every recorded pair.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.a.windows(2).map(|w| w[1] / w[0]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PicardOutcome {
    /// `t_j = j·dt`.
    pub times: Vec<f64>,
    /// Final iterate at every `t_j`.
    pub iterate: Vec<Field>,
    pub diagnostics: PicardDiagnostics,
}

fn diagnostic_norm(slices: &[Field], times: &[f64], every: usize, q: f64, r: f64) -> Result<f64> {
    let mut picked: Vec<Field> = Vec::new();
    let mut at: Vec<f64> = Vec::new();
    let last = slices.len() - 1;
    for (j, u) in slices.iter().enumerate() {
        if j % every == 0 || j == last {
            picked.push(u.clone());
            at.push(times[j]);
        }
    }
    let mixed = slices_mixed_norm(&picked, &at, q, r)?.unwrap_or(0.0);
    let energy = slices.iter().map(|u| u.l2_norm()).fold(0.0, f64::max);
    Ok(mixed + energy)
}

fn difference(a: &[Field], b: &[Field]) -> Result<Vec<Field>> {
    a.iter().zip(b).map(|(x, y)| x.add_scaled(-1.0, y)).collect()
}

/// Picard iteration `u_k = u_lin + D(c|u_{k−1}|ᵖ + F)` on the time grid `j·dt`,
/// where `D` is the zero-data Duhamel operator. Stops after `k_max` iterates or
/// once `A_k ≤ 1e−10·M_0`.
pub fn picard_iterate(
    f: &Field,
    g: &Field,
    cfg: &SimulationConfig,
    k_max: usize,
    forcing: Option<&dyn Source>,
) -> Result<PicardOutcome> {
    cfg.validate()?;
    if cfg.method != Method::Picard {
        return Err(Error::Precondition("picard_iterate needs method = picard".into()));
    }
    if k_max < 1 {
        return Err(config("need at least one Picard iterate"));
    }
    check_data(f, g, cfg)?;
    let steps = cfg.steps()?;
    if steps < 3 {
        return Err(config("Picard iteration needs at least three time steps"));
    }
    let grid = cfg.grid;
    let prop = Propagator::new(grid);
    let mask = cfg.dealias.then(|| grid.dealias_mask());
    let times: Vec<f64> = (0..=steps).map(|j| cfg.dt * j as f64).collect();
    let (q, r) = cfg.indices();

    let mut state = SpectralState {
        u: transform(f),
        u_dt: transform(g),
    };
    for c in state.u.coeffs_mut().iter_mut().chain(state.u_dt.coeffs_mut()) {
        *c *= cfg.data_amplitude;
    }
    let mut linear = Vec::with_capacity(times.len());
    let mut m_prev = prop.multipliers(0.0)?;
    linear.push(state.field());
    for &t in &times[1..] {
        let m = prop.multipliers(t)?;
        prop.apply(&mut state, &prop.transfers(&m_prev, &m));
        linear.push(state.field());
        m_prev = m;
    }

    let every = cfg.output_every;
    let mut diag = PicardDiagnostics {
        indices: (q, r),
        ..Default::default()
    };
    diag.m.push(diagnostic_norm(&linear, &times, every, q, r)?);
    let mut current = linear.clone();
    for k in 1..=k_max {
        let spectra = current
            .iter()
            .zip(&times)
            .map(|(u, &t)| source_spectrum(u, cfg, mask.as_deref(), forcing, t))
            .collect::<Result<Vec<_>>>()?;
        let states = duhamel_trajectory(&SampledSource::new(cfg.dt, spectra)?)?;
        let next: Vec<Field> = linear
            .iter()
            .zip(&states)
            .map(|(l, s)| l.add_scaled(1.0, &inverse_transform(&s.u)))
            .collect::<Result<_>>()?;
        if next.iter().any(|u| !u.sup_norm().is_finite()) {
            return Err(Error::IterationDiverged { last_finite: k - 1 });
        }
        let a = diagnostic_norm(&difference(&next, &current)?, &times, every, q, r)?;
        let m = diagnostic_norm(&next, &times, every, q, r)?;
        if !(a.is_finite() && m.is_finite()) {
            return Err(Error::IterationDiverged { last_finite: k - 1 });
        }
        diag.a.push(a);
        diag.m.push(m);
        current = next;
        if a <= 1e-10 * diag.m[0] {
            diag.converged = true;
            break;
        }
    }
    Ok(PicardOutcome {
        times,
        iterate: current,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec::new(2, 8.0, 32).unwrap()
    }

    #[test]
    fn zero_data_gives_zero_trace() {
        let grid = small_grid();
        let z = Field::zeros(grid);
        let cfg = SimulationConfig::new(3.0, grid, 0.05, 1.0);
        let tr = evolve(&z, &z, &cfg).unwrap();
        assert!(tr.completed);
        assert!(tr.sup_norm.iter().all(|&s| s == 0.0));
        assert_eq!(detect_blowup(&tr, None), BlowupVerdict::Survived { horizon: 1.0 });
    }

    #[test]
    fn power_source_is_nonnegative_at_zeros() {
        let grid = small_grid();
        let u = Field::from_fn(grid, |x| x[0]);
        let s = power_source(&u, 1.8, 1.0);
        assert!(s.values().iter().all(|v| *v >= 0.0 && v.is_finite()));
        let i = grid.flatten(&[16, 3, 0]);
        assert_eq!(s.values()[i], 0.0);
    }

    #[test]
    fn linear_picard_stops_at_first_iterate() {
        let grid = small_grid();
        let f = compact_bump(grid, 2.0);
        let z = Field::zeros(grid);
        let mut cfg = SimulationConfig::new(3.0, grid, 0.05, 0.5);
        cfg.method = Method::Picard;
        cfg.nonlinearity_coefficient = 0.0;
        let out = picard_iterate(&f, &z, &cfg, 4, None).unwrap();
        assert_eq!(out.diagnostics.a, vec![0.0]);
        assert!(out.diagnostics.converged);
    }

    #[test]
    fn horizon_must_be_a_multiple_of_dt() {
        let cfg = SimulationConfig::new(3.0, small_grid(), 0.3, 1.0);
        assert!(cfg.steps().is_err());
    }

    #[test]
    fn crossing_needs_confirmation() {
        let base = SimulationTrace {
            times: vec![0.0, 1.0],
            sup_norm: vec![1.0, 2e6],
            integral: vec![0.0; 2],
            lp_norm: vec![0.0; 2],
            mixed_norm: None,
            mixed_indices: (4.0, 4.0),
            fields: Vec::new(),
            crossing: Some(1.0),
            completed: false,
            dt: 0.1,
            horizon: 1.0,
            data_scale: 1.0,
        };
        let mut fine = base.clone();
        fine.dt = 0.05;
        fine.crossing = None;
        fine.completed = true;
        assert!(matches!(detect_blowup(&base, Some(&fine)), BlowupVerdict::Inconclusive { .. }));
        fine.crossing = Some(0.95);
        assert_eq!(detect_blowup(&base, Some(&fine)), BlowupVerdict::BlewUp { time: 0.95 });
    }
}
