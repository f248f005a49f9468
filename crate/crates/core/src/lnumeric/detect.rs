//! Algebraicity detection: recover a small-height rational or quadratic
//! irrationality from a numeric value with a stated uncertainty.
//!
//! Detection follows the continued-fraction quality-gap rule: a candidate is
//! the convergent right before an exploding partial quotient, it must agree
//! with the input to the stated measurement uncertainty, and any second
//! quality candidate inside the uniqueness radius `tol` makes the answer
//! ambiguous (more precision is needed, not more search). A transcendental
//! input produces no gap and comes back `NotFound`.

use crate::mp;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rug::Complex;

#[derive(Clone, Debug, PartialEq)]
pub enum DetectField {
    Rationals,
    /// Q(√d) for squarefree d
    Quadratic(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DetectOutcome {
    /// the detected element; for quadratic fields (a + b√d)/c
    Found {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        approx: f64,
    },
    NotFound,
}

#[derive(Debug, thiserror::Error)]
pub enum DetectError {
    #[error("two candidates within tol; tighter precision required")]
    AmbiguousMatch,
    #[error("uncertainty {eps:.2e} is not below tol/10³ = {lim:.2e}")]
    UncertaintyTooLarge { eps: f64, lim: f64 },
}

/// Snap a float to an exact dyadic rational.
fn float_to_rational(x: &rug::Float) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let (m, e) = x.to_integer_exp().expect("finite float");
    let m: BigInt = m.to_string().parse().unwrap();
    if e >= 0 {
        BigRational::from_integer(m * BigInt::from(2).pow(e as u32))
    } else {
        BigRational::new(m, BigInt::from(2).pow((-e) as u32))
    }
}

/// Rational reconstruction by continued fractions with the quality-gap rule.
fn detect_rational(
    x: &BigRational,
    eps: f64,
    height_bound: u64,
    tol: f64,
) -> Result<DetectOutcome, DetectError> {
    let h_big = BigInt::from(height_bound);
    // partial quotient considered an explosion: well beyond any plausible
    // accidental quotient, scaled to stay meaningful near the noise floor
    let gap_threshold = BigInt::from(10_000u64);
    let mut candidates: Vec<(BigInt, BigInt, f64)> = vec![];
    // continued fraction of x with convergents p/q
    let mut a = x.clone();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a.floor().to_integer(), BigInt::one());
    let mut frac = &a - a.floor();
    let mut prev_quot: Option<BigInt> = None;
    for _ in 0..200 {
        // the convergent p1/q1 is a candidate when the NEXT quotient explodes
        let err = (x - BigRational::new(p1.clone(), q1.clone()))
            .abs()
            .to_f64_lossy();
        if q1 <= h_big {
            if frac.is_zero() {
                // exact termination: x itself is the last convergent
                candidates.push((p1.clone(), q1.clone(), err));
                break;
            }
            let next_quot = frac.clone().recip().floor().to_integer();
            if next_quot >= gap_threshold {
                candidates.push((p1.clone(), q1.clone(), err));
            }
        } else {
            break;
        }
        if frac.is_zero() {
            break;
        }
        a = frac.clone().recip();
        let quot = a.floor().to_integer();
        frac = &a - a.floor();
        let (p2, q2) = (&quot * &p1 + &p0, &quot * &q1 + &q0);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        prev_quot = Some(quot);
    }
    let _ = prev_quot;
    resolve_candidates(candidates, eps, tol)
}

fn resolve_candidates(
    mut candidates: Vec<(BigInt, BigInt, f64)>,
    eps: f64,
    tol: f64,
) -> Result<DetectOutcome, DetectError> {
    // measurement-consistent candidates match to ~eps; anything else inside
    // tol keeps the answer ambiguous
    candidates.retain(|(_, _, err)| *err <= tol);
    if candidates.is_empty() {
        return Ok(DetectOutcome::NotFound);
    }
    candidates.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap());
    let distinct: Vec<&(BigInt, BigInt, f64)> = {
        let mut seen: Vec<&(BigInt, BigInt, f64)> = vec![];
        for c in &candidates {
            if !seen
                .iter()
                .any(|s| s.0 == c.0 && s.1 == c.1)
            {
                seen.push(c);
            }
        }
        seen
    };
    if distinct.len() > 1 {
        return Err(DetectError::AmbiguousMatch);
    }
    let (p, q, err) = distinct[0];
    if *err > 4.0 * eps {
        // a gap exists but the candidate does not match the measurement
        return Ok(DetectOutcome::NotFound);
    }
    Ok(DetectOutcome::Found {
        a: p.clone(),
        b: BigInt::zero(),
        c: q.clone(),
        approx: *err,
    })
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}
impl ToF64Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        let n: f64 = self.numer().to_string().parse().unwrap_or(f64::INFINITY);
        let d: f64 = self.denom().to_string().parse().unwrap_or(f64::INFINITY);
        if d.is_infinite() || n.is_infinite() {
            // fall back through a scaled quotient
            let scale = BigInt::from(10).pow(18);
            let q = (self * BigRational::from_integer(scale)).to_integer();
            let qf: f64 = q.to_string().parse().unwrap_or(0.0);
            qf / 1e18
        } else {
            n / d
        }
    }
}

/// Search the unique field element of height ≤ H within tol of x, honouring
/// the stated uncertainty eps (which must be below tol/10³). For quadratic
/// fields the element is (a + b√d)/c with max(|a|, |b|, c) ≤ H.
pub fn detect_algebraic(
    x: &Complex,
    eps: f64,
    field: &DetectField,
    height_bound: u64,
    tol: f64,
) -> Result<DetectOutcome, DetectError> {
    if eps >= tol / 1_000.0 {
        return Err(DetectError::UncertaintyTooLarge {
            eps,
            lim: tol / 1_000.0,
        });
    }
    let re = float_to_rational(x.real());
    let im_mag = x.imag().to_f64().abs();
    match field {
        DetectField::Rationals => {
            if im_mag > tol {
                return Ok(DetectOutcome::NotFound);
            }
            detect_rational(&re, eps + im_mag, height_bound, tol)
        }
        DetectField::Quadratic(d) => {
            let prec = x.prec().0;
            let sqrt_d = mp::sqrt_i64(*d, prec);
            // real quadratic: match re against (a + b√d)/c; imaginary
            // quadratic: match re against a/c and im against b√|d|/c
            let xr = x.real().to_f64();
            let xi = x.imag().to_f64();
            let mut hits: Vec<((BigInt, BigInt, BigInt), f64)> = vec![];
            let h = height_bound.min(4000) as i64;
            for c in 1..=h {
                for b in -h..=h {
                    let (target_a, err_extra) = if *d > 0 {
                        let bv = sqrt_d.real().to_f64() * b as f64;
                        (c as f64 * xr - bv, (c as f64 * xi).abs())
                    } else {
                        let bv = sqrt_d.imag().to_f64() * b as f64;
                        (c as f64 * xr, (c as f64 * xi - bv).abs())
                    };
                    let a = target_a.round();
                    if a.abs() > h as f64 {
                        continue;
                    }
                    let err = ((target_a - a).abs() + err_extra) / c as f64;
                    if err <= tol {
                        // normalise by gcd so duplicates collapse
                        let (mut aa, mut bb, mut cc) =
                            (BigInt::from(a as i64), BigInt::from(b), BigInt::from(c));
                        let g = num::integer::gcd(
                            num::integer::gcd(aa.clone(), bb.clone()),
                            cc.clone(),
                        );
                        if !g.is_zero() {
                            aa /= &g;
                            bb /= &g;
                            cc /= &g;
                        }
                        hits.push(((aa, bb, cc), err));
                    }
                }
            }
            hits.sort_by(|p, r| p.1.partial_cmp(&r.1).unwrap());
            let mut distinct: Vec<&((BigInt, BigInt, BigInt), f64)> = vec![];
            for hcand in &hits {
                if !distinct.iter().any(|s| s.0 == hcand.0) {
                    distinct.push(hcand);
                }
            }
            match distinct.len() {
                0 => Ok(DetectOutcome::NotFound),
                1 => {
                    let ((a, b, c), err) = distinct[0];
                    if *err > 200.0 * eps {
                        return Ok(DetectOutcome::NotFound);
                    }
                    Ok(DetectOutcome::Found {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        approx: *err,
                    })
                }
                _ => Err(DetectError::AmbiguousMatch),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, prec: u32) -> Complex {
        Complex::with_val(prec, (re, 0.0))
    }

    #[test]
    fn rational_one_third() {
        let x = cx(0.333333333333, 192);
        let out = detect_algebraic(&x, 1e-12, &DetectField::Rationals, 100, 1e-6).unwrap();
        match out {
            DetectOutcome::Found { a, b, c, .. } => {
                assert_eq!((a, b, c), (1.into(), 0.into(), 3.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn golden_ratio_in_q_sqrt5() {
        let x = cx(1.6180339887, 192);
        let out = detect_algebraic(&x, 1e-10, &DetectField::Quadratic(5), 10, 1e-6).unwrap();
        match out {
            DetectOutcome::Found { a, b, c, .. } => {
                assert_eq!((a, b, c), (1.into(), 1.into(), 2.into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pi_is_not_rational() {
        let prec = 256;
        let x = Complex::with_val(prec, (mp::pi(prec), rug::Float::new(prec)));
        let out =
            detect_algebraic(&x, 1e-12, &DetectField::Rationals, 1_000_000, 1e-9).unwrap();
        assert_eq!(out, DetectOutcome::NotFound);
    }

    #[test]
    fn exact_small_rationals_roundtrip() {
        for (num, den) in [(22i64, 7i64), (-355, 113), (5, 1), (0, 1), (123456, 789)] {
            let v = num as f64 / den as f64;
            let x = cx(v, 192);
            let out = detect_algebraic(&x, 1e-13, &DetectField::Rationals, 10_000_000, 1e-7)
                .unwrap();
            match out {
                DetectOutcome::Found { a, c, .. } => {
                    let g = num::integer::gcd(num.abs().max(1), den);
                    assert_eq!(a, BigInt::from(num / g));
                    assert_eq!(c, BigInt::from(den / g));
                }
                other => panic!("{num}/{den}: {other:?}"),
            }
        }
    }

    #[test]
    fn ambiguous_needs_precision() {
        // x sits near 1/2 but is measurably a different exact fraction
        let x = cx(0.5 + 1e-7, 192);
        let r = detect_algebraic(&x, 1e-13, &DetectField::Rationals, 100_000_000, 1e-5);
        assert!(matches!(r, Err(DetectError::AmbiguousMatch)), "{r:?}");
    }
}
