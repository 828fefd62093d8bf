//! Reference implementations used only by the integration tests.
//!
//! Nothing here shares code with the library: series are summed in
//! big-integer fixed point and ODEs are integrated with classical RK4.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fixed-point scale in bits.
const SCALE: u32 = 700;

fn one() -> BigInt {
    BigInt::one() << SCALE
}

fn fixed_from_f64(x: f64) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant) * sign;
    let shift = e + SCALE as i64;
    if shift >= 0 {
        m << shift as u32
    } else {
        m >> (-shift) as u32
    }
}

fn fixed_from_decimal(digits: &str) -> BigInt {
    // "0.ddd…" only.
    let frac = digits.trim_start_matches("0.");
    let num: BigInt = frac.parse().unwrap();
    let den = BigInt::from(10).pow(frac.len() as u32);
    (num << SCALE) / den
}

fn fixed_to_f64(x: &BigInt) -> f64 {
    // Keep 64 significant bits before converting.
    let bits = x.bits() as i64;
    let drop = (bits - 64).max(0);
    let top = (x >> drop as u32).to_f64().unwrap();
    top * 2f64.powi((drop - SCALE as i64) as i32)
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> SCALE
}

const AI0_DIGITS: &str = "0.355028053887817239260063186004";
const NEG_AIP0_DIGITS: &str = "0.258819403792806798405183560189";

/// `(Ai, Ai′, Bi, Bi′)` from the Maclaurin series in 700-bit fixed point.
///
/// Trustworthy to about 1e−20 relative to `max(Bi, 1)` for `|x| ≤ 10`.
pub fn airy_series(x: f64) -> (f64, f64, f64, f64) {
    let xf = fixed_from_f64(x);
    let x2 = mul(&xf, &xf);
    let x3 = mul(&x2, &xf);
    let mut ta = one();
    let mut tb = xf.clone();
    let mut f = ta.clone();
    let mut g = tb.clone();
    let mut fp = BigInt::zero();
    let mut gp = one();
    let tiny = BigInt::one() << 20;
    let mut k: i64 = 0;
    loop {
        k += 1;
        // f = Σ a_k x^{3k}, a_k = a_{k−1}/((3k−1)3k)
        ta = mul(&ta, &x3) / BigInt::from((3 * k - 1) * (3 * k));
        tb = mul(&tb, &x3) / BigInt::from((3 * k) * (3 * k + 1));
        f += &ta;
        g += &tb;
        // derivatives: d/dx x^{3k} = 3k x^{3k−1}; computed as 3k·term/x
        if x != 0.0 {
            fp += ((&ta * BigInt::from(3 * k)) << SCALE) / &xf;
            gp += ((&tb * BigInt::from(3 * k + 1)) << SCALE) / &xf;
        }
        if k > 5 && ta.abs() < tiny && tb.abs() < tiny {
            break;
        }
    }
    let c1 = fixed_from_decimal(AI0_DIGITS);
    let c2 = fixed_from_decimal(NEG_AIP0_DIGITS);
    let ai = mul(&c1, &f) - mul(&c2, &g);
    let aip = mul(&c1, &fp) - mul(&c2, &gp);
    let bi_half = mul(&c1, &f) + mul(&c2, &g);
    let bip_half = mul(&c1, &fp) + mul(&c2, &gp);
    let s3 = 3f64.sqrt();
    (
        fixed_to_f64(&ai),
        fixed_to_f64(&aip),
        s3 * fixed_to_f64(&bi_half),
        s3 * fixed_to_f64(&bip_half),
    )
}

/// `K_ν(ζ) = ∫₀^∞ e^{−ζ cosh s} cosh(νs) ds` by the trapezoid rule.
pub fn bessel_k(nu: f64, zeta: f64) -> f64 {
    let h: f64 = 0.01;
    let mut acc = 0.5 * (-zeta).exp();
    let mut s: f64 = h;
    loop {
        let term = (-zeta * s.cosh()).exp() * (nu * s).cosh();
        acc += term;
        if term < 1e-300 || term < 1e-22 * acc {
            break;
        }
        s += h;
    }
    acc * h
}

/// `(Ai, Ai′)` for `x > 0` through `K_{1/3}` and `K_{2/3}`.
pub fn airy_positive_k(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let pi = std::f64::consts::PI;
    (
        (x / 3.0).sqrt() / pi * bessel_k(1.0 / 3.0, zeta),
        -x / (pi * 3f64.sqrt()) * bessel_k(2.0 / 3.0, zeta),
    )
}

/// Classical RK4 for a second-order ODE `w″ = a(s, w)` written as a system.
pub fn rk4_second_order(
    mut w: f64,
    mut wp: f64,
    s0: f64,
    s1: f64,
    steps: usize,
    acc: impl Fn(f64, f64) -> f64,
) -> (f64, f64) {
    let h = (s1 - s0) / steps as f64;
    for i in 0..steps {
        let s = s0 + h * i as f64;
        let k1 = (wp, acc(s, w));
        let k2 = (wp + 0.5 * h * k1.1, acc(s + 0.5 * h, w + 0.5 * h * k1.0));
        let k3 = (wp + 0.5 * h * k2.1, acc(s + 0.5 * h, w + 0.5 * h * k2.0));
        let k4 = (wp + h * k3.1, acc(s + h, w + h * k3.0));
        w += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        wp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (w, wp)
}

/// RK4 with one Richardson step: `(16·fine − coarse)/15`.
pub fn rk4_richardson(
    w: f64,
    wp: f64,
    s0: f64,
    s1: f64,
    steps: usize,
    acc: impl Fn(f64, f64) -> f64 + Copy,
) -> (f64, f64) {
    let c = rk4_second_order(w, wp, s0, s1, steps, acc);
    let f = rk4_second_order(w, wp, s0, s1, 2 * steps, acc);
    ((16.0 * f.0 - c.0) / 15.0, (16.0 * f.1 - c.1) / 15.0)
}

/// Solution of `w″ + sλ²w = c(s)` at `t` from `(w0, w0′)` at 0.
pub fn forced_mode(
    t: f64,
    lambda: f64,
    w0: f64,
    wp0: f64,
    source: impl Fn(f64) -> f64 + Copy,
) -> (f64, f64) {
    let steps = ((t * (1.0 + lambda * t.sqrt())) * 400.0).ceil() as usize + 200;
    let l2 = lambda * lambda;
    rk4_richardson(w0, wp0, 0.0, t, steps, move |s, w| source(s) - s * l2 * w)
}

/// `Re(e^{−z/2} Φ(1/6, 1/3; z))` with `z = 2iφ(t)λ`, summed in fixed point.
pub fn confluent_v1(t: f64, lambda: f64) -> f64 {
    let y = 2.0 * (2.0 / 3.0) * t.powf(1.5) * lambda;
    let yf = fixed_from_f64(y);
    let mut re = one();
    let mut im = BigInt::zero();
    let mut sre = re.clone();
    let mut sim = im.clone();
    let tiny = BigInt::one() << 40;
    let mut k: i64 = 0;
    loop {
        // T_{k+1} = T_k · iy · (6k+1)/((6k+2)(k+1))
        let nre = -mul(&im, &yf);
        let nim = mul(&re, &yf);
        let num = BigInt::from(6 * k + 1);
        let den = BigInt::from((6 * k + 2) * (k + 1));
        re = nre * &num / &den;
        im = nim * &num / &den;
        sre += &re;
        sim += &im;
        k += 1;
        if (k as f64) > y && re.abs() < tiny && im.abs() < tiny {
            break;
        }
    }
    let (s, c) = (0.5 * y).sin_cos();
    c * fixed_to_f64(&sre) + s * fixed_to_f64(&sim)
}

/// `F(1/6, 1/6; 1; z)` by its power series in fixed point, for `z ≤ 0.9`.
pub fn f16_series(z: f64) -> f64 {
    let zf = fixed_from_f64(z);
    let mut term = one();
    let mut sum = term.clone();
    let tiny = BigInt::one() << 30;
    let mut k: i64 = 0;
    loop {
        // ((k+1/6)/(k+1))² z = (6k+1)²/(36(k+1)²) z
        term = mul(&term, &zf) * BigInt::from((6 * k + 1) * (6 * k + 1))
            / BigInt::from(36 * (k + 1) * (k + 1));
        sum += &term;
        k += 1;
        if term.abs() < tiny {
            break;
        }
    }
    fixed_to_f64(&sum)
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
