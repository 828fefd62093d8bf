use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tricomi::blowup::{
    c0_estimate, chain_witness, radon_radial, riccati_integrate, sigma, RadialProfile, RiccatiConfig,
    RiccatiOutcome,
};
use tricomi::exponents::{exponent_report, Case};
use tricomi::nonlinear::{compact_bump, picard_iterate, simulate, BlowupVerdict, Method, SimulationConfig, SimulationTrace};
use tricomi::propagator::homogeneous_solve;
use tricomi::specfun::{airy, gamma_beta_identities, hypergeom_f16, hypergeom_f16_at_one, IdentityCheck};
use tricomi::strichartz::{
    empirical_homogeneous_ratios, empirical_inhomogeneous_ratios, knapp_experiment, EnsembleSpec,
    KnappConfig, ModelAmplitude, RatioReport,
};
use tricomi::{classify_regime, global_indices, tricomi_multipliers, Field, GridSpec};

use crate::config::{load, require, DataPair, GridSection};
use crate::output::{num, prepare_dir, write_metadata, Csv};
use crate::{Cli, CliError, Command};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let cfg = g.config.as_deref();
    match &cli.command {
        Command::Exponents { n, p } => exponents(*n, *p),
        Command::SpecfunTest => specfun_test(&g.out, g.seed),
        Command::Propagate => propagate(require(cfg, "propagate")?, &g.out, g.seed),
        Command::Simulate => simulate_cmd(require(cfg, "simulate")?, &g.out, g.seed),
        Command::Riccati => riccati(require(cfg, "riccati")?, &g.out, g.seed),
        Command::BlowupScan { n, p_grid } => blowup_scan(*n, p_grid, cfg, &g.out, g.seed),
        Command::Strichartz => strichartz(require(cfg, "strichartz")?, &g.out, g.seed),
        Command::Knapp { q, r, deltas, weighted } => knapp(*q, *r, deltas, *weighted, &g.out, g.seed),
        Command::Radon { n, profile, radius, samples } => radon(*n, profile, *radius, *samples, &g.out, g.seed),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn exponents(n: u32, p: Option<f64>) -> Result<(), CliError> {
    let rep = exponent_report(n)?;
    let mut out = json!({ "n": n, "p_crit": rep.p_crit, "p_conf": rep.p_conf, "residual": rep.residual });
    if let Some(p) = p {
        out["p"] = json!(p);
        out["regime"] = serde_json::to_value(classify_regime(n, p)?).expect("serializable");
        if n == 2 {
            if let Ok(ix) = global_indices(p) {
                let case = match ix.case {
                    Some(Case::I) => "I",
                    Some(Case::II) => "II",
                    Some(Case::III) => "III",
                    None => "none",
                };
                out["indices"] = json!({
                    "case": case, "q": ix.q, "r": ix.r,
                    "q_tilde_prime": ix.q_tilde_prime, "r_tilde_prime": ix.r_tilde_prime, "s": ix.s,
                });
            }
        }
    }
    print_json(&out);
    Ok(())
}

fn specfun_test(out: &Path, seed: u64) -> Result<(), CliError> {
    let mut checks: Vec<IdentityCheck> = gamma_beta_identities().checks;
    let check = |name: &str, value: f64, expected: f64, tol: f64| {
        let error = (value - expected).abs();
        IdentityCheck { name: name.into(), value, expected, error, pass: error <= tol }
    };
    // Airy Wronskian Ai·Bi′ − Ai′·Bi = 1/π.
    let mut worst: f64 = 0.0;
    for k in 0..=200 {
        let x = -20.0 + 0.15 * k as f64;
        let a = airy(x)?;
        worst = worst.max((a.ai * a.bi_prime - a.ai_prime * a.bi - 1.0 / PI).abs() * PI);
    }
    checks.push(check("Airy Wronskian on [-20, 10]", worst, 0.0, 1e-10));
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        for j in 0..=40 {
            let m = tricomi_multipliers(5.0 * i as f64 / 40.0, 8.0 * j as f64 / 40.0)?;
            worst = worst.max((m.wronskian() - 1.0).abs());
        }
    }
    checks.push(check("multiplier Wronskian on [0,5]x[0,8]", worst, 0.0, 1e-9));
    let mut prev = 0.0;
    let mut monotone = true;
    for i in 0..1000 {
        let v = hypergeom_f16((1.0 - 1e-6) * i as f64 / 999.0)?;
        monotone &= v >= prev;
        prev = v;
    }
    checks.push(check("F(1/6,1/6;1;z) nondecreasing", if monotone { 1.0 } else { 0.0 }, 1.0, 0.0));
    checks.push(check("F(1/6,1/6;1;1-1e-10) vs F(1)", hypergeom_f16(1.0 - 1e-10)?, hypergeom_f16_at_one(), 1e-6));
    let pass = checks.iter().all(|c| c.pass);
    let report = json!({ "pass": pass, "checks": checks });
    prepare_dir(out)?;
    write_metadata(out, "specfun-test", seed, &json!({}), report.clone())?;
    print_json(&report);
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("special-function identities failed".into()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropagateConfig {
    times: Vec<f64>,
    grid: GridSection,
    #[serde(default)]
    data: DataPair,
}

fn field_csv(u: &Field) -> Csv {
    let grid = u.grid();
    let names = ["x", "y", "z"];
    let mut header: Vec<&str> = names[..grid.dim()].to_vec();
    header.push("u");
    let mut csv = Csv::new(&header);
    for (k, v) in u.values().iter().enumerate() {
        let x = grid.coordinates(k);
        let mut row: Vec<_> = x[..grid.dim()].iter().map(|&c| c.into()).collect();
        row.push((*v).into());
        csv.row(row);
    }
    csv
}

fn propagate(path: &Path, out: &Path, seed: u64) -> Result<(), CliError> {
    let cfg: PropagateConfig = load(path)?;
    if cfg.times.is_empty() || cfg.times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(CliError::Input("times must be a nonempty list of finite t ≥ 0".into()));
    }
    let grid = cfg.grid.build()?;
    let (f, g) = cfg.data.build(grid, seed)?;
    prepare_dir(out)?;
    let mut slices = Vec::new();
    for (k, &t) in cfg.times.iter().enumerate() {
        let u = homogeneous_solve(&f, &g, t)?;
        let name = format!("propagate_{k:03}.csv");
        field_csv(&u).write(out, &name)?;
        slices.push(json!({
            "t": t, "file": name, "sup_norm": num(u.sup_norm()),
            "l2_norm": num(u.l2_norm()), "integral": num(u.integral()),
        }));
    }
    write_metadata(out, "propagate", seed, &cfg, json!({ "grid": grid, "slices": slices }))?;
    Ok(())
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    p: f64,
    dt: f64,
    horizon: f64,
    #[serde(default = "default_true")]
    dealias: bool,
    #[serde(default)]
    blowup_threshold: Option<f64>,
    #[serde(default)]
    method: Method,
    #[serde(default)]
    data_amplitude: Option<f64>,
    #[serde(default)]
    nonlinearity_coefficient: Option<f64>,
    #[serde(default)]
    output_every: Option<usize>,
    #[serde(default)]
    mixed_indices: Option<[f64; 2]>,
    /// Picard iterates when `method = "picard"`.
    #[serde(default)]
    picard_iterates: Option<usize>,
    grid: GridSection,
    #[serde(default)]
    data: DataPair,
}

impl SimulateConfig {
    fn resolve(&self, grid: GridSpec) -> SimulationConfig {
        let mut c = SimulationConfig::new(self.p, grid, self.dt, self.horizon);
        c.dealias = self.dealias;
        c.method = self.method;
        if let Some(v) = self.blowup_threshold {
            c.blowup_threshold = v;
        }
        if let Some(v) = self.data_amplitude {
            c.data_amplitude = v;
        }
        if let Some(v) = self.nonlinearity_coefficient {
            c.nonlinearity_coefficient = v;
        }
        if let Some(v) = self.output_every {
            c.output_every = v;
        }
        c.mixed_indices = self.mixed_indices;
        c
    }
}

fn trace_csv(trace: &SimulationTrace) -> Csv {
    let mut csv = Csv::new(&["t", "sup_norm", "G", "Lp_norm"]);
    for k in 0..trace.times.len() {
        csv.row(vec![
            trace.times[k].into(),
            trace.sup_norm[k].into(),
            trace.integral[k].into(),
            trace.lp_norm[k].into(),
        ]);
    }
    csv
}

fn verdict_fields(v: &BlowupVerdict) -> (&'static str, f64) {
    match v {
        BlowupVerdict::BlewUp { time } => ("blew_up", *time),
        BlowupVerdict::Survived { .. } => ("survived", f64::NAN),
        BlowupVerdict::Inconclusive { .. } => ("inconclusive", f64::NAN),
    }
}

fn simulate_cmd(path: &Path, out: &Path, seed: u64) -> Result<(), CliError> {
    let file: SimulateConfig = load(path)?;
    let grid = file.grid.build()?;
    let cfg = file.resolve(grid);
    cfg.validate()?;
    let (f, g) = file.data.build(grid, seed)?;
    prepare_dir(out)?;
    let results = match cfg.method {
        Method::Stepper => {
            let outcome = simulate(&f, &g, &cfg)?;
            trace_csv(&outcome.trace).write(out, "trace.csv")?;
            if let Some(r) = &outcome.refined {
                trace_csv(r).write(out, "trace_refined.csv")?;
            }
            json!({
                "verdict": outcome.verdict,
                "crossing": outcome.trace.crossing,
                "completed": outcome.trace.completed,
                "max_sup_norm": num(outcome.trace.max_sup_norm()),
                "data_scale": num(outcome.trace.data_scale),
                "mixed_norm": outcome.trace.mixed_norm.map(num),
                "mixed_indices": [num(outcome.trace.mixed_indices.0), num(outcome.trace.mixed_indices.1)],
            })
        }
        Method::Picard => {
            let k_max = file.picard_iterates.unwrap_or(20);
            let outcome = picard_iterate(&f, &g, &cfg, k_max, None)?;
            let mut csv = Csv::new(&["t", "sup_norm", "G", "Lp_norm"]);
            for (t, u) in outcome.times.iter().zip(&outcome.iterate) {
                csv.row(vec![(*t).into(), u.sup_norm().into(), u.integral().into(), u.lp_norm(cfg.p).into()]);
            }
            csv.write(out, "trace.csv")?;
            let d = &outcome.diagnostics;
            let mut it = Csv::new(&["k", "M_k", "A_k"]);
            for (k, m) in d.m.iter().enumerate() {
                let a = if k == 0 { f64::NAN } else { d.a[k - 1] };
                it.row(vec![k.into(), (*m).into(), a.into()]);
            }
            it.write(out, "picard.csv")?;
            json!({
                "converged": d.converged,
                "iterates": d.m.len() - 1,
                "contraction_ratios": d.contraction_ratios().into_iter().map(num).collect::<Vec<_>>(),
            })
        }
    };
    write_metadata(out, "simulate", seed, &json!({ "file": file, "resolved": cfg }), results)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RiccatiFile {
    p: f64,
    a: f64,
    q: f64,
    k1: f64,
    m: f64,
    t0: f64,
    horizon: f64,
    /// Floors to integrate from, each with data on the floor.
    #[serde(default)]
    k0_values: Vec<f64>,
    /// Explicit `G(T0)` and `G'(T0)` for a single run with `k0_values[0]`.
    #[serde(default)]
    g0: Option<f64>,
    #[serde(default)]
    g1: Option<f64>,
    #[serde(default = "default_true")]
    estimate_c0: bool,
}

fn riccati(path: &Path, out: &Path, seed: u64) -> Result<(), CliError> {
    let file: RiccatiFile = load(path)?;
    let base = RiccatiConfig {
        p: file.p,
        a: file.a,
        q: file.q,
        k0: 1.0,
        k1: file.k1,
        m: file.m,
        t0: file.t0,
        horizon: file.horizon,
    };
    base.validate()?;
    if (file.g0.is_some() || file.g1.is_some()) && file.k0_values.len() != 1 {
        return Err(CliError::Input("explicit g0/g1 need exactly one entry in k0_values".into()));
    }
    let rows: Vec<(f64, RiccatiOutcome)> = file
        .k0_values
        .par_iter()
        .map(|&k0| {
            let cfg = RiccatiConfig { k0, ..base };
            let g0 = file.g0.unwrap_or(cfg.floor());
            let g1 = file.g1.unwrap_or(cfg.floor_slope());
            riccati_integrate(&cfg, g0, g1).map(|o| (k0, o))
        })
        .collect::<Result<_, _>>()?;
    prepare_dir(out)?;
    let mut csv = Csv::new(&["k0", "verdict", "t_star"]);
    for (k0, o) in &rows {
        let (verdict, t) = match o {
            RiccatiOutcome::BlowUp { time } => ("blew_up", *time),
            RiccatiOutcome::Survived { .. } => ("survived", f64::NAN),
        };
        csv.row(vec![(*k0).into(), verdict.into(), t.into()]);
    }
    csv.write(out, "riccati.csv")?;
    let c0 = if file.estimate_c0 {
        let e = c0_estimate(file.p, file.a, file.q, file.k1, file.m, file.t0, file.horizon)?;
        json!({ "survive": e.survive, "blowup": e.blowup, "estimate": e.value(), "relative_width": e.relative_width, "runs": e.runs })
    } else {
        Value::Null
    };
    let results = json!({ "c0": c0, "initial_slope": "a*K0*(T0+M)^(a-1) unless g1 is given" });
    write_metadata(out, "riccati", seed, &file, results)?;
    Ok(())
}

fn parse_p_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("invalid p grid `{spec}`: use start:stop:count or a comma list"));
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        match n {
            0 => return Err(bad()),
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.iter().any(|p| !(*p > 1.0) || !p.is_finite()) {
        return Err(CliError::Input(format!("every p in `{spec}` must be finite and > 1")));
    }
    Ok(values)
}

fn scan_amplitude() -> f64 {
    1.0
}
fn scan_radius() -> f64 {
    1.0
}
fn scan_half_width() -> f64 {
    16.0
}
fn scan_dt() -> f64 {
    0.02
}
fn scan_horizon() -> f64 {
    8.0
}
fn scan_threshold() -> f64 {
    1e4
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanConfig {
    #[serde(default)]
    points: Option<usize>,
    #[serde(default = "scan_half_width")]
    half_width: f64,
    #[serde(default = "scan_dt")]
    dt: f64,
    #[serde(default = "scan_horizon")]
    horizon: f64,
    #[serde(default = "scan_amplitude")]
    amplitude: f64,
    /// Radius `M` of the bump data.
    #[serde(default = "scan_radius")]
    radius: f64,
    #[serde(default = "scan_threshold")]
    blowup_threshold: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

fn blowup_scan(n: usize, p_grid: &str, cfg: Option<&Path>, out: &Path, seed: u64) -> Result<(), CliError> {
    if n != 2 && n != 3 {
        return Err(CliError::Input(format!("blowup-scan supports n = 2 or 3, got {n}")));
    }
    let ps = parse_p_grid(p_grid)?;
    let scan: ScanConfig = match cfg {
        Some(p) => load(p)?,
        None => ScanConfig::default(),
    };
    let points = scan.points.unwrap_or(if n == 2 { 64 } else { 32 });
    let grid = GridSpec::new(n, scan.half_width, points)?;
    let mut f = compact_bump(grid, scan.radius);
    crate::config::check_support(&f)?;
    f.scale(scan.amplitude);
    let g = Field::zeros(grid);
    let rows = ps
        .par_iter()
        .map(|&p| {
            let mut c = SimulationConfig::new(p, grid, scan.dt, scan.horizon);
            c.blowup_threshold = scan.blowup_threshold;
            c.store_fields = true;
            let outcome = simulate(&f, &g, &c)?;
            let witness = chain_witness(&outcome.trace, p, n, scan.radius).ok();
            Ok((p, outcome.verdict, witness))
        })
        .collect::<Result<Vec<_>, tricomi::Error>>()?;
    prepare_dir(out)?;
    let mut csv = Csv::new(&["p", "verdict", "t_star", "sigma", "min_growth_ratio", "min_power_integral_ratio"]);
    for (p, verdict, w) in &rows {
        let (v, t) = verdict_fields(verdict);
        csv.row(vec![
            (*p).into(),
            v.into(),
            t.into(),
            sigma(n, *p).into(),
            w.as_ref().map(|w| w.min_growth_ratio).into(),
            w.as_ref().map(|w| w.min_power_integral_ratio).into(),
        ]);
    }
    csv.write(out, "blowup_scan.csv")?;
    let verdicts: Vec<Value> = rows.iter().map(|(p, v, _)| json!({ "p": p, "verdict": v })).collect();
    write_metadata(
        out,
        "blowup-scan",
        seed,
        &json!({ "n": n, "p_grid": ps, "points": points, "scan": scan }),
        json!({ "verdicts": verdicts }),
    )?;
    Ok(())
}

fn ens_members() -> usize {
    100
}
fn ens_half_width() -> f64 {
    16.0 * PI
}
fn ens_resolutions() -> Vec<usize> {
    vec![128, 256]
}
fn ens_horizon() -> f64 {
    8.0
}
fn ens_time_nodes() -> usize {
    17
}
fn ens_radius() -> f64 {
    40.0
}
fn ens_radial() -> usize {
    161
}
fn ens_angular() -> usize {
    128
}
fn ens_packets() -> usize {
    3
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrichartzFile {
    #[serde(default = "ens_members")]
    members: usize,
    #[serde(default = "ens_half_width")]
    half_width: f64,
    #[serde(default = "ens_resolutions")]
    resolutions: Vec<usize>,
    #[serde(default = "ens_horizon")]
    horizon: f64,
    #[serde(default = "ens_time_nodes")]
    time_nodes: usize,
    #[serde(default = "ens_radius")]
    radius: f64,
    #[serde(default = "ens_radial")]
    radial_nodes: usize,
    #[serde(default = "ens_angular")]
    angular_nodes: usize,
    #[serde(default = "ens_packets")]
    packets: usize,
    /// Exponents whose global-existence indices are tested.
    #[serde(default)]
    p_values: Vec<f64>,
    /// Extra homogeneous `[q, r]` pairs.
    #[serde(default)]
    homogeneous: Vec<[f64; 2]>,
    /// Extra inhomogeneous `[q, r, q_tilde, r_tilde]` tuples.
    #[serde(default)]
    inhomogeneous: Vec<[f64; 4]>,
}

fn strichartz(path: &Path, out: &Path, seed: u64) -> Result<(), CliError> {
    let file: StrichartzFile = load(path)?;
    let spec = EnsembleSpec {
        members: file.members,
        seed,
        half_width: file.half_width,
        resolutions: file.resolutions.clone(),
        horizon: file.horizon,
        time_nodes: file.time_nodes,
        radius: file.radius,
        radial_nodes: file.radial_nodes,
        angular_nodes: file.angular_nodes,
        packets: file.packets,
    };
    let mut hom: Vec<(f64, f64)> = file.homogeneous.iter().map(|v| (v[0], v[1])).collect();
    let mut inh: Vec<(f64, f64, f64, f64)> = file.inhomogeneous.iter().map(|v| (v[0], v[1], v[2], v[3])).collect();
    for &p in &file.p_values {
        let ix = global_indices(p)?;
        hom.push((ix.q, ix.r));
        inh.push((ix.q, ix.r, ix.q, ix.r));
    }
    if hom.is_empty() && inh.is_empty() {
        return Err(CliError::Input("nothing to evaluate: set p_values, homogeneous or inhomogeneous".into()));
    }
    let mut reports: Vec<RatioReport> = Vec::new();
    if !hom.is_empty() {
        reports.extend(empirical_homogeneous_ratios(&spec, &hom)?);
    }
    if !inh.is_empty() {
        reports.extend(empirical_inhomogeneous_ratios(&spec, &inh)?);
    }
    prepare_dir(out)?;
    let mut csv = Csv::new(&["kind", "q", "r", "q_tilde", "r_tilde", "resolution", "max_ratio", "evaluated", "skipped"]);
    for rep in &reports {
        let (kind, qt, rt) = match rep.tilde {
            Some((a, b)) => ("inhomogeneous", a, b),
            None => ("homogeneous", f64::NAN, f64::NAN),
        };
        for res in &rep.per_resolution {
            csv.row(vec![
                kind.into(),
                rep.q.into(),
                rep.r.into(),
                qt.into(),
                rt.into(),
                res.points.into(),
                res.max_ratio.into(),
                res.evaluated.into(),
                res.skipped.into(),
            ]);
        }
    }
    csv.write(out, "strichartz.csv")?;
    let drifts: Vec<Value> = reports.iter().map(|r| json!({ "q": r.q, "r": r.r, "tilde": r.tilde, "drift": num(r.drift()) })).collect();
    write_metadata(out, "strichartz", seed, &json!({ "file": file, "ensemble": spec }), json!({ "drifts": drifts }))?;
    Ok(())
}

fn knapp(q: f64, r: f64, deltas: &str, weighted: bool, out: &Path, seed: u64) -> Result<(), CliError> {
    let ds: Vec<f64> = deltas
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("invalid δ list `{deltas}`")))?;
    let mut cfg = KnappConfig::new(q, r, ds);
    cfg.weighted = weighted;
    let rep = knapp_experiment(&cfg, &ModelAmplitude)?;
    prepare_dir(out)?;
    let mut csv = Csv::new(&["delta", "ratio", "fitted_slope", "theory_slope"]);
    for p in &rep.points {
        csv.row(vec![p.delta.into(), p.ratio.into(), rep.fitted_slope.into(), rep.theory_slope.into()]);
    }
    csv.write(out, "knapp.csv")?;
    write_metadata(out, "knapp", seed, &cfg, json!({ "fitted_slope": rep.fitted_slope, "theory_slope": rep.theory_slope, "points": rep.points }))?;
    Ok(())
}

fn radon(n: usize, profile: &str, radius: f64, samples: usize, out: &Path, seed: u64) -> Result<(), CliError> {
    if !(radius > 0.0) || samples < 2 {
        return Err(CliError::Input("need radius > 0 and at least two samples".into()));
    }
    let (prof, exact): (RadialProfile, Box<dyn Fn(f64) -> f64>) = match profile {
        "ball" => {
            let p = RadialProfile::new(vec![0.0, radius, radius, 2.0 * radius], vec![1.0, 1.0, 0.0, 0.0])?;
            let e: Box<dyn Fn(f64) -> f64> = match n {
                2 => Box::new(move |rho: f64| 2.0 * (radius * radius - rho * rho).max(0.0).sqrt()),
                3 => Box::new(move |rho: f64| PI * (radius * radius - rho * rho).max(0.0)),
                _ => Box::new(|_| f64::NAN),
            };
            (p, e)
        }
        "gaussian" => {
            let w = radius;
            let p = RadialProfile::from_fn(12.0 * w, 12001, |r| (-(r / w).powi(2)).exp())?;
            let e: Box<dyn Fn(f64) -> f64> = match n {
                2 => Box::new(move |rho: f64| PI.sqrt() * w * (-(rho / w).powi(2)).exp()),
                3 => Box::new(move |rho: f64| PI * w * w * (-(rho / w).powi(2)).exp()),
                _ => Box::new(|_| f64::NAN),
            };
            (p, e)
        }
        other => return Err(CliError::Input(format!("unknown profile `{other}`: use ball or gaussian"))),
    };
    prepare_dir(out)?;
    let mut csv = Csv::new(&["rho", "radon", "exact"]);
    for k in 0..samples {
        let rho = radius * k as f64 / (samples - 1) as f64;
        csv.row(vec![rho.into(), radon_radial(&prof, n, rho)?.into(), exact(rho).into()]);
    }
    csv.write(out, "radon.csv")?;
    write_metadata(out, "radon", seed, &json!({ "n": n, "profile": profile, "radius": radius, "samples": samples }), json!({}))?;
    Ok(())
}
