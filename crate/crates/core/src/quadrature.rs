//! Quadrature rules and small interpolation helpers shared by the kernels.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::specfun::ln_gamma;

/// Nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Integrate `f` over `[a, b]` with the rule mapped affinely.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        (
            self.nodes.iter().map(|x| mid + half * x).collect(),
            self.weights.iter().map(|w| w * half).collect(),
        )
    }
}

/// Gauss–Legendre rule with `n` nodes (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Jacobi rule for the weight `(1−x)^α (1+x)^β` on `[−1, 1]`.
///
/// Built with the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> GaussRule {
    assert!(n >= 1 && alpha > -1.0 && beta > -1.0);
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let b2 = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + alpha) * (m + beta) * (m + ab)
                    / ((2.0 * m + ab).powi(2) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0))
            };
            let off = b2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` split into `panels`.
pub fn composite_gauss(
    rule: &GaussRule,
    a: f64,
    b: f64,
    panels: usize,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + width * k as f64;
            rule.integrate(lo, lo + width, &mut f)
        })
        .sum()
}

/// Tanh-sinh integral of `f(x, 1−x)` over `(0, 1)`.
///
/// The integrand receives both `x` and `1 − x` so endpoint singularities can
/// be evaluated without cancellation.
pub fn tanh_sinh_unit(mut f: impl FnMut(f64, f64) -> f64, level: u32) -> f64 {
    let h = 2f64.powi(-(level as i32));
    let mut acc = 0.0;
    let kmax = (6.5 / h).ceil() as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let cu = u.cosh();
        // x = (1 + tanh u)/2 and 1 − x = (1 − tanh u)/2, written through exp
        // to keep full relative accuracy near either endpoint.
        let e = (-2.0 * u.abs()).exp();
        let small = e / (1.0 + e);
        let (x, y) = if u >= 0.0 { (1.0 - small, small) } else { (small, 1.0 - small) };
        if x <= 0.0 || y <= 0.0 {
            continue;
        }
        let w = 0.25 * PI * t.cosh() / (cu * cu);
        acc += w * f(x, y);
    }
    acc * h
}

/// Lagrange weights for the four nodes `−1, 0, 1, 2` at offset `s ∈ [0, 1]`.
#[inline]
pub fn cubic_weights(s: f64) -> [f64; 4] {
    let sm1 = s - 1.0;
    let sm2 = s - 2.0;
    let sp1 = s + 1.0;
    [
        -s * sm1 * sm2 / 6.0,
        sp1 * sm1 * sm2 / 2.0,
        -sp1 * s * sm2 / 2.0,
        sp1 * s * sm1 / 6.0,
    ]
}

/// Uniformly sampled function on `[x0, x0 + (len−1)·dx]` with cubic interpolation.
///
/// Values outside the sampled interval are zero, which matches the compact
/// support convention of the data it stores.
#[derive(Debug, Clone)]
pub struct UniformSamples {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl UniformSamples {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        assert!(dx > 0.0 && values.len() >= 4);
        Self { x0, dx, values }
    }

    pub fn tabulate(x0: f64, x1: f64, count: usize, f: impl Fn(f64) -> f64) -> Self {
        let dx = (x1 - x0) / (count - 1) as f64;
        Self::new(x0, dx, (0..count).map(|i| f(x0 + dx * i as f64)).collect())
    }

    pub fn end(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let u = (x - self.x0) / self.dx;
        if !(u >= 0.0) || u > (n - 1) as f64 {
            return 0.0;
        }
        let i = (u.floor() as usize).clamp(1, n - 3);
        let s = u - i as f64;
        let w = cubic_weights(s);
        w[0] * self.values[i - 1]
            + w[1] * self.values[i]
            + w[2] * self.values[i + 1]
            + w[3] * self.values[i + 2]
    }
}

/// Trapezoid weights for a (possibly nonuniform) increasing node list.
pub fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = nodes[i + 1] - nodes[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre(10);
        for k in 0..20 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k = {k}");
        }
        assert!((gauss_legendre(1).nodes[0]).abs() < 1e-300);
        let w: f64 = gauss_legendre(7).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        let a = gauss_jacobi(12, 0.0, 0.0);
        let b = gauss_legendre(12);
        for i in 0..12 {
            assert!((a.nodes[i] - b.nodes[i]).abs() < 1e-13);
            assert!((a.weights[i] - b.weights[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_moments() {
        // ∫(1−x)^α(1+x)^β dx = 2^{α+β+1} B(α+1, β+1)
        let (alpha, beta) = (-1.0 / 6.0, -5.0 / 6.0);
        let rule = gauss_jacobi(20, alpha, beta);
        let total: f64 = rule.weights.iter().sum();
        let exact = (ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(alpha + beta + 2.0)
            + (alpha + beta + 1.0) * std::f64::consts::LN_2)
            .exp();
        assert!((total - exact).abs() < 1e-13 * exact);
        // With α = β = −1/2 the nodes are Chebyshev points.
        let cheb = gauss_jacobi(8, -0.5, -0.5);
        for (i, x) in cheb.nodes.iter().enumerate() {
            let expect = -((2 * i + 1) as f64 * PI / 16.0).cos();
            assert!((x - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // ∫₀¹ x^{−1/2} dx = 2
        let v = tanh_sinh_unit(|x, _| x.powf(-0.5), 6);
        assert!((v - 2.0).abs() < 1e-12);
        let v = tanh_sinh_unit(|_, y| y.powf(-5.0 / 6.0), 7);
        assert!((v - 6.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_interpolation_exact_on_cubics() {
        let s = UniformSamples::tabulate(-1.0, 2.0, 31, |x| x * x * x - 2.0 * x + 0.5);
        for &x in &[-0.93, 0.0, 0.51, 1.77, 1.999] {
            assert!((s.eval(x) - (x * x * x - 2.0 * x + 0.5)).abs() < 1e-12);
        }
        assert_eq!(s.eval(2.5), 0.0);
        assert_eq!(s.eval(-1.5), 0.0);
        let w = cubic_weights(0.3);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
