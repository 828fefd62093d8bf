use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::dd::Dd;
use crate::error::{domain, Error, Result};

/// `Ai(0)`.
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// `−Ai′(0)`.
pub const NEG_AIP0: f64 = 0.258_819_403_792_806_8;
const SQRT3: f64 = 1.732_050_807_568_877_2;
// Low parts of the two constants; positive x needs them because Ai is a
// small difference of exponentially large series there.
const AI0_DD: Dd = Dd { hi: AI0, lo: 2.052_336_324_362_12e-17 };
const NEG_AIP0_DD: Dd = Dd { hi: NEG_AIP0, lo: -2.522_243_111_610_832e-17 };

/// Largest `|x|` accepted by [`airy`].
pub const AIRY_RANGE: f64 = 40.0;
/// Below this `|x|` the power series is summed in double-double arithmetic.
pub(crate) const SERIES_LIMIT: f64 = 8.0;
/// Largest `μt` accepted by [`tricomi_multipliers`].
pub const MULTIPLIER_RANGE: f64 = 1.0e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AiryPair {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryPair {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Airy functions and derivatives on `|x| ≤ 40`.
pub fn airy(x: f64) -> Result<AiryPair> {
    if !x.is_finite() || x.abs() > AIRY_RANGE {
        return Err(Error::Range(format!(
            "Airy argument {x} outside [−{AIRY_RANGE}, {AIRY_RANGE}]"
        )));
    }
    Ok(airy_unchecked(x))
}

pub(crate) fn airy_unchecked(x: f64) -> AiryPair {
    if x.abs() <= SERIES_LIMIT {
        let s = Maclaurin::new(x);
        let f = s.f;
        let g = s.g_over_x.mul_f64(x);
        let c1f = f.mul(AI0_DD);
        let c2g = g.mul(NEG_AIP0_DD);
        let c1fp = s.f_prime.mul(AI0_DD);
        let c2gp = s.g_prime.mul(NEG_AIP0_DD);
        AiryPair {
            ai: c1f.sub(c2g).to_f64(),
            bi: SQRT3 * c1f.add(c2g).to_f64(),
            ai_prime: c1fp.sub(c2gp).to_f64(),
            bi_prime: SQRT3 * c1fp.add(c2gp).to_f64(),
        }
    } else if x < 0.0 {
        asymptotic_negative(-x)
    } else {
        asymptotic_positive(x)
    }
}

/// The two canonical Maclaurin solutions of `w″ = xw`:
/// `f = 1 + x³/6 + …` and `g = x + x⁴/12 + …`, with derivatives.
/// `g` is stored divided by `x`.
pub(crate) struct Maclaurin {
    pub f: Dd,
    pub f_prime: Dd,
    pub g_over_x: Dd,
    pub g_prime: Dd,
}

impl Maclaurin {
    pub fn new(x: f64) -> Self {
        let x2 = Dd::from_f64(x).mul_f64(x);
        let y = x2.mul_f64(x);
        let mut ta = Dd::from_f64(1.0);
        let mut tb = Dd::from_f64(1.0);
        let mut f = ta;
        let mut fp_inner = Dd::ZERO;
        let mut gt = tb;
        let mut gp = tb;
        let mut scale: f64 = 1.0;
        for k in 1..400 {
            let kf = k as f64;
            // f′ = x² Σ_{k≥1} a_{k−1} y^{k−1}/(3k−1)
            fp_inner = fp_inner.add(ta.div_f64(3.0 * kf - 1.0));
            ta = ta.mul(y).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
            tb = tb.mul(y).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
            f = f.add(ta);
            gt = gt.add(tb);
            gp = gp.add(tb.mul_f64(3.0 * kf + 1.0));
            let mag = ta.abs_hi().max(tb.abs_hi() * (3.0 * kf + 1.0));
            scale = scale.max(mag);
            if mag < 1e-34 * scale && k > 2 {
                break;
            }
        }
        Maclaurin {
            f,
            f_prime: fp_inner.mul(x2),
            g_over_x: gt,
            g_prime: gp,
        }
    }
}

const ASYM_TERMS: usize = 60;

fn asymptotic_coefficients() -> &'static ([f64; ASYM_TERMS], [f64; ASYM_TERMS]) {
    use std::sync::OnceLock;
    static COEFFS: OnceLock<([f64; ASYM_TERMS], [f64; ASYM_TERMS])> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut u = [0.0; ASYM_TERMS];
        let mut v = [0.0; ASYM_TERMS];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..ASYM_TERMS {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Sums `Σ_k sign_k c_k ζ^{−k}` over the index set `start, start+2, …`
/// with alternating signs when `alternate`, stopping at the smallest term.
fn asym_sum(c: &[f64], zeta: f64, start: usize, step: usize, alternate: bool) -> f64 {
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < c.len() {
        let term = c[k] * zeta.powi(-(k as i32));
        if term.abs() >= prev {
            break;
        }
        acc += sign * term;
        prev = term.abs();
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
        if alternate {
            sign = -sign;
        }
        k += step;
    }
    acc
}

fn asymptotic_negative(z: f64) -> AiryPair {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let p = asym_sum(u, zeta, 0, 2, true);
    let q = asym_sum(u, zeta, 1, 2, true);
    let r = asym_sum(v, zeta, 0, 2, true);
    let s = asym_sum(v, zeta, 1, 2, true);
    let chi = zeta - FRAC_PI_4;
    let (sn, cs) = chi.sin_cos();
    let z4 = z.sqrt().sqrt();
    let amp = 1.0 / (PI.sqrt() * z4);
    let ampd = z4 / PI.sqrt();
    AiryPair {
        ai: amp * (cs * p + sn * q),
        bi: amp * (-sn * p + cs * q),
        ai_prime: ampd * (sn * r - cs * s),
        bi_prime: ampd * (cs * r + sn * s),
    }
}

fn asymptotic_positive(x: f64) -> AiryPair {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let x4 = x.sqrt().sqrt();
    let decay = (-zeta).exp();
    let grow = zeta.exp();
    let sp = PI.sqrt();
    AiryPair {
        ai: decay / (2.0 * sp * x4) * asym_sum(u, zeta, 0, 1, true),
        bi: grow / (sp * x4) * asym_sum(u, zeta, 0, 1, false),
        ai_prime: -x4 * decay / (2.0 * sp) * asym_sum(v, zeta, 0, 1, true),
        bi_prime: x4 * grow / sp * asym_sum(v, zeta, 0, 1, false),
    }
}

/// `φ(t) = (2/3)t^{3/2}`.
#[inline]
pub fn phi(t: f64) -> f64 {
    2.0 / 3.0 * t * t.sqrt()
}

/// Inverse of [`phi`].
#[inline]
pub fn phi_inverse(s: f64) -> f64 {
    (1.5 * s).powf(2.0 / 3.0)
}

/// Fundamental solutions of `w″ + tλ²w = 0` at `(t, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierValue {
    pub v1: f64,
    pub v2: f64,
    pub v1_dt: f64,
    pub v2_dt: f64,
    /// `2iφ(t)λ`.
    #[serde(skip)]
    pub z: Complex64,
}

impl MultiplierValue {
    pub fn wronskian(&self) -> f64 {
        self.v1 * self.v2_dt - self.v2 * self.v1_dt
    }
}

/// `V₁`, `V₂` and their time derivatives.
///
/// With `μ = λ^{2/3}` and `x = −μt`, `V₁(t) = f(x)` and `V₂(t) = −g(x)/μ`
/// where `f`, `g` are the Maclaurin solutions of the Airy equation.
/// For `μt > 8` the same functions are assembled from `Ai` and `Bi`.
pub fn tricomi_multipliers(t: f64, lambda: f64) -> Result<MultiplierValue> {
    if !(t >= 0.0) || !t.is_finite() || !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain(format!(
            "multipliers need finite t ≥ 0 and λ ≥ 0, got ({t}, {lambda})"
        )));
    }
    let mu = lambda.powf(2.0 / 3.0);
    if mu * t > MULTIPLIER_RANGE {
        return Err(Error::Range(format!(
            "μt = {} exceeds the supported range {MULTIPLIER_RANGE}",
            mu * t
        )));
    }
    let [v1, v2, v1_dt, v2_dt] = multipliers_raw(t, lambda);
    Ok(MultiplierValue {
        v1,
        v2,
        v1_dt,
        v2_dt,
        z: Complex64::new(0.0, 2.0 * phi(t) * lambda),
    })
}

/// `[v1, v2, v1_dt, v2_dt]` without argument checks.
pub(crate) fn multipliers_raw(t: f64, lambda: f64) -> [f64; 4] {
    if lambda == 0.0 || t == 0.0 {
        return [1.0, t, 0.0, 1.0];
    }
    let mu = lambda.powf(2.0 / 3.0);
    let x = -mu * t;
    if x.abs() <= SERIES_LIMIT {
        let s = Maclaurin::new(x);
        [
            s.f.to_f64(),
            t * s.g_over_x.to_f64(),
            -mu * s.f_prime.to_f64(),
            s.g_prime.to_f64(),
        ]
    } else {
        let a = airy_unchecked(x);
        let c1 = PI * NEG_AIP0;
        let c2 = PI * AI0;
        [
            c1 * (SQRT3 * a.ai + a.bi),
            c2 / mu * (SQRT3 * a.ai - a.bi),
            -mu * c1 * (SQRT3 * a.ai_prime + a.bi_prime),
            -c2 * (SQRT3 * a.ai_prime - a.bi_prime),
        ]
    }
}
