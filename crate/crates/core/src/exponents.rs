//! Exponent relations for `∂²ₜu − tΔu = |u|ᵖ` and Strichartz index algebra.

use serde::Serialize;

use crate::error::{domain, Result};

/// Band around `p_crit` that is classified as critical.
pub const REGIME_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentReport {
    pub n: u32,
    pub p_crit: f64,
    pub p_conf: f64,
    /// `(3n−2)p² − 3np − 6` evaluated at `p_crit`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subcritical,
    Critical,
    SupercriticalSubconformal,
    ConformalOrAbove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    I,
    II,
    III,
}

/// Lebesgue and Sobolev indices of a Strichartz estimate.
///
/// `q_tilde_prime`/`r_tilde_prime` are the source-side indices paired with
/// `(q, r)` by the nonlinear estimate (`q/p`, `r/p`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrichartzIndices {
    pub q: f64,
    pub r: f64,
    pub q_tilde_prime: f64,
    pub r_tilde_prime: f64,
    pub s: f64,
    pub case: Option<Case>,
}

impl StrichartzIndices {
    /// `1/q + 3/r − (3/2)(1 − s)`.
    pub fn scaling_defect(&self) -> f64 {
        recip(self.q) + 3.0 / self.r - 1.5 * (1.0 - self.s)
    }

    pub fn is_admissible(&self) -> bool {
        recip(self.q) <= 1.0 - 1.5 / self.r + 1e-12
    }
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("dimension n = {n} must be at least 2")));
    }
    Ok(())
}

/// `(3n−2)p² − 3np − 6`.
pub fn critical_residual(n: u32, p: f64) -> f64 {
    let n = f64::from(n);
    (3.0 * n - 2.0) * p * p - 3.0 * n * p - 6.0
}

/// Positive root of `(3n−2)p² − 3np − 6 = 0`.
pub fn critical_exponent(n: u32) -> Result<f64> {
    check_dimension(n)?;
    let a = 3.0 * f64::from(n) - 2.0;
    let b = -3.0 * f64::from(n);
    let c = -6.0;
    // b < 0, so the + branch has no cancellation.
    Ok((-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a))
}

/// `(3n+6)/(3n−2)`.
pub fn conformal_exponent(n: u32) -> Result<f64> {
    check_dimension(n)?;
    let n = f64::from(n);
    Ok((3.0 * n + 6.0) / (3.0 * n - 2.0))
}

pub fn exponent_report(n: u32) -> Result<ExponentReport> {
    let p_crit = critical_exponent(n)?;
    Ok(ExponentReport {
        n,
        p_crit,
        p_conf: conformal_exponent(n)?,
        residual: critical_residual(n, p_crit),
    })
}

pub fn classify_regime(n: u32, p: f64) -> Result<Regime> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(domain(format!("exponent p = {p} must be finite and > 1")));
    }
    let p_crit = critical_exponent(n)?;
    let p_conf = conformal_exponent(n)?;
    Ok(if (p - p_crit).abs() <= REGIME_TOLERANCE {
        Regime::Critical
    } else if p < p_crit {
        Regime::Subcritical
    } else if p < p_conf - REGIME_TOLERANCE {
        Regime::SupercriticalSubconformal
    } else {
        Regime::ConformalOrAbove
    })
}

/// Upper end of Case I.
pub const CASE_I_UPPER: f64 = 7.0 / 3.0;

/// Upper end of Case II, `(4+√17)/3`.
pub fn case_ii_upper() -> f64 {
    (4.0 + 17f64.sqrt()) / 3.0
}

/// The three closed parameter ranges on which each case's index choice is valid.
///
/// Case I opens at `p_crit(2)`, which is excluded; the returned lower end is
/// that endpoint.
pub fn case_ranges() -> [(Case, f64, f64); 3] {
    let p_crit = critical_exponent(2).expect("n = 2 is valid");
    [
        (Case::I, p_crit, CASE_I_UPPER),
        (Case::II, (7.0 + 409f64.sqrt()) / 12.0, case_ii_upper()),
        (Case::III, (5.0 + 33f64.sqrt()) / 4.0, 3.0),
    ]
}

/// Strichartz indices used for global existence in two dimensions.
///
/// Case II uses `q = (3p+1)(p−1)/(11−3p)`, the solution of
/// `1/q + 3/r = 2/(p−1)` with `r = p + 1/3`.
pub fn global_indices(p: f64) -> Result<StrichartzIndices> {
    let p_crit = critical_exponent(2)?;
    if !(p > p_crit && p <= 3.0) {
        return Err(domain(format!(
            "p = {p} outside the global-existence range ({p_crit}, 3]"
        )));
    }
    let s = 1.0 - 4.0 / (3.0 * (p - 1.0));
    let (case, q, r) = if p <= CASE_I_UPPER {
        (Case::I, p * (p - 1.0) / (3.0 - p), p)
    } else if p <= case_ii_upper() {
        (
            Case::II,
            (3.0 * p + 1.0) * (p - 1.0) / (11.0 - 3.0 * p),
            p + 1.0 / 3.0,
        )
    } else {
        (Case::III, (p * p - 1.0) / (5.0 - p), p + 1.0)
    };
    Ok(StrichartzIndices {
        q,
        r,
        q_tilde_prime: q / p,
        r_tilde_prime: r / p,
        s,
        case: Some(case),
    })
}

/// `1/q ≤ 1 − (3/2)(1/r)`. Infinite indices are allowed.
pub fn admissible_check(q: f64, r: f64) -> Result<bool> {
    check_lebesgue_pair(q, r)?;
    Ok(recip(q) <= 1.0 - 1.5 * recip(r))
}

/// `2(1/2 − 1/r) − (2/3)(1/q)`.
pub fn strichartz_regularity(q: f64, r: f64) -> Result<f64> {
    check_lebesgue_pair(q, r)?;
    Ok(2.0 * (0.5 - recip(r)) - 2.0 / 3.0 * recip(q))
}

fn check_lebesgue_pair(q: f64, r: f64) -> Result<()> {
    if !(q >= 2.0) || !(r >= 2.0) {
        return Err(domain(format!("indices (q, r) = ({q}, {r}) must be ≥ 2")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bisect_root(n: u32) -> f64 {
        let (mut lo, mut hi) = (1.0, 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if critical_residual(n, mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn critical_exponent_closed_forms() {
        let p2 = critical_exponent(2).unwrap();
        assert!((p2 - (3.0 + 33f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((p2 - 2.186140662).abs() < 1e-9);
        let p3 = critical_exponent(3).unwrap();
        assert!((p3 - (9.0 + 249f64.sqrt()) / 14.0).abs() < 1e-15);
        assert!((p3 - bisect_root(3)).abs() < 1e-13);
        assert!((p3 - 1.769_980_988_432_821_5).abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_for_many_dimensions() {
        for n in 2..=50 {
            let r = exponent_report(n).unwrap();
            assert!(r.residual.abs() <= 1e-12, "n = {n}: {}", r.residual);
            assert!((r.p_crit - bisect_root(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn conformal_values() {
        assert_eq!(conformal_exponent(2).unwrap(), 3.0);
        assert!((conformal_exponent(3).unwrap() - 15.0 / 7.0).abs() < 1e-15);
        assert!((conformal_exponent(4).unwrap() - 1.8).abs() < 1e-15);
    }

    #[test]
    fn small_dimension_rejected() {
        assert!(matches!(critical_exponent(1), Err(crate::Error::Domain(_))));
        assert!(matches!(conformal_exponent(0), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn exponents_ordered_and_decreasing() {
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for n in 2..=20 {
            let c = critical_exponent(n).unwrap();
            let f = conformal_exponent(n).unwrap();
            assert!(1.0 < c && c < f);
            assert!(c < prev.0 && f < prev.1);
            prev = (c, f);
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_regime(2, 1.5).unwrap(), Regime::Subcritical);
        let pc = (3.0 + 33f64.sqrt()) / 4.0;
        assert_eq!(classify_regime(2, pc).unwrap(), Regime::Critical);
        assert_eq!(classify_regime(2, 2.5).unwrap(), Regime::SupercriticalSubconformal);
        assert_eq!(classify_regime(2, 3.0).unwrap(), Regime::ConformalOrAbove);
        assert_eq!(classify_regime(2, 4.0).unwrap(), Regime::ConformalOrAbove);
        assert!(classify_regime(2, 1.0).is_err());
        assert!(classify_regime(2, f64::NAN).is_err());
    }

    #[test]
    fn index_examples() {
        let i = global_indices(2.2).unwrap();
        assert_eq!(i.case, Some(Case::I));
        assert!((i.q - 3.3).abs() < 1e-12 && (i.r - 2.2).abs() < 1e-15);

        let i = global_indices(3.0).unwrap();
        assert_eq!(i.case, Some(Case::III));
        assert!((i.q - 4.0).abs() < 1e-12 && (i.r - 4.0).abs() < 1e-15);

        let i = global_indices(2.5).unwrap();
        assert_eq!(i.case, Some(Case::II));
        assert!((i.q - 8.5 * 1.5 / 3.5).abs() < 1e-12);
        assert!((1.0 / i.q + 3.0 / i.r - 2.0 / 1.5).abs() < 1e-12);

        assert!(global_indices(2.0).is_err());
        assert!(global_indices(3.01).is_err());
        assert!(global_indices(critical_exponent(2).unwrap()).is_err());
    }

    #[test]
    fn case_boundaries_pick_smallest_index() {
        assert_eq!(global_indices(7.0 / 3.0).unwrap().case, Some(Case::I));
        assert_eq!(global_indices(case_ii_upper()).unwrap().case, Some(Case::II));
        let ranges = case_ranges();
        // Each case's lower end sits inside the previous range.
        assert!(ranges[1].1 < ranges[0].2);
        assert!(ranges[2].1 < ranges[1].2);
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible_check(f64::INFINITY, 2.0).unwrap());
        assert!(!admissible_check(2.0, 2.0).unwrap());
        assert!(admissible_check(4.0, 4.0).unwrap());
        assert!(admissible_check(1.5, 4.0).is_err());
    }

    #[test]
    fn regularity_examples() {
        assert!((strichartz_regularity(f64::INFINITY, 5.0).unwrap() - 0.6).abs() < 1e-15);
        assert!((strichartz_regularity(3.0, 2.0).unwrap() + 2.0 / 9.0).abs() < 1e-15);
        assert!((strichartz_regularity(7.5, 2.5).unwrap() - 0.111_111_111_111).abs() < 1e-11);
    }

    proptest! {
        #[test]
        fn indices_satisfy_relations(t in 0.0f64..1.0) {
            let lo = critical_exponent(2).unwrap();
            let p = lo + (3.0 - lo) * (1e-9 + (1.0 - 1e-9) * t);
            let i = global_indices(p).unwrap();
            prop_assert!((1.0 / i.q + 3.0 / i.r - 2.0 / (p - 1.0)).abs() <= 1e-12);
            prop_assert!(1.0 / i.q + 1.5 / i.r <= 1.0 + 1e-12);
            prop_assert!(i.scaling_defect().abs() <= 1e-12);
            prop_assert!(i.is_admissible());
            prop_assert!(i.q >= 2.0);
        }

        #[test]
        fn regimes_partition(p in 1.0001f64..10.0, n in 2u32..20) {
            let reg = classify_regime(n, p).unwrap();
            let c = critical_exponent(n).unwrap();
            let f = conformal_exponent(n).unwrap();
            let expected = if (p - c).abs() <= REGIME_TOLERANCE {
                Regime::Critical
            } else if p < c {
                Regime::Subcritical
            } else if p < f {
                Regime::SupercriticalSubconformal
            } else {
                Regime::ConformalOrAbove
            };
            prop_assert_eq!(reg, expected);
        }
    }
}
