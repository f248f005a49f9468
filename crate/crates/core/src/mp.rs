//! Multiprecision floating-point support shared by the embedding machinery
//! and the L-value engine.
//!
//! Thin layer over MPFR/MPC reals and complexes: conversion from exact
//! rationals, the complex log-gamma by shifted Stirling series (MPC has no
//! gamma), and a polynomial root finder used for embeddings of opaque number
//! fields. Precision is given in bits everywhere; [`bits_for_digits`] maps
//! decimal digits to a working precision with guard bits.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rug::ops::CompleteRound;
use rug::{Complex, Float};
use std::sync::Mutex;

/// Working precision in bits for a target number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * 3.3219672).ceil() as u32 + 48
}

fn bigint_to_float(x: &BigInt, prec: u32) -> Float {
    Float::with_val(prec, rug::Integer::from_str_radix(&x.to_string(), 10).unwrap())
}

/// Exact rational to MPFR real at the given precision.
pub fn rat_to_float(x: &BigRational, prec: u32) -> Float {
    let n = bigint_to_float(x.numer(), prec + 8);
    let d = bigint_to_float(x.denom(), prec + 8);
    Float::with_val(prec, n / d)
}

/// Exact rational to complex.
pub fn rat_to_complex(x: &BigRational, prec: u32) -> Complex {
    Complex::with_val(prec, (rat_to_float(x, prec), Float::with_val(prec, 0)))
}

pub fn c_from_f64(re: f64, im: f64, prec: u32) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// π at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// n^{-s} for a machine integer n ≥ 1.
pub fn n_pow_minus_s(n: u64, s: &Complex) -> Complex {
    let prec = s.prec().0;
    let ln_n = Float::with_val(prec, n).ln();
    (-(s * &ln_n).complete((prec, prec))).exp()
}

/// Bernoulli numbers B_0, B_2, B_4, ... (even index only), exact, cached.
static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// B_{2k} as an exact rational.
pub fn bernoulli_even(k: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigRational::one()); // B_0
    }
    while cache.len() <= k {
        // recurrence: sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, with the
        // odd Bernoulli numbers beyond B_1 = -1/2 vanishing
        let m = 2 * cache.len(); // computing B_m, m even
        let mut acc = BigRational::zero();
        // j = 0 term
        acc += binom(m + 1, 0);
        // j = 1 term: B_1 = -1/2
        acc += binom(m + 1, 1) * BigRational::new(BigInt::from(-1), BigInt::from(2));
        for j in (2..m).step_by(2) {
            acc += binom(m + 1, j) * &cache[j / 2];
        }
        let bm = -acc / binom(m + 1, m);
        cache.push(bm);
    }
    cache[k].clone()
}

fn binom(n: usize, k: usize) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// Complex log-gamma by the Stirling series after shifting the argument to
/// |z| large enough for the target precision. The branch is whatever the
/// shift recurrence produces; callers exponentiate, so only exp(lnΓ) is
/// promised. Arguments on the nonpositive real axis are rejected.
pub fn lngamma(z: &Complex, prec: u32) -> Complex {
    let wp = prec + 32;
    let mut z = Complex::with_val(wp, z);
    assert!(
        !(z.imag().is_zero() && (z.real().is_sign_negative() || z.real().is_zero())
            && z.real().clone().fract().is_zero()),
        "lngamma pole at {z}"
    );
    // shift until |z| >= L; L scales with precision for the Stirling tail
    let l_target = 8.0_f64.max(wp as f64 * 0.135);
    let mut shift_log = Complex::with_val(wp, 0);
    loop {
        let a = z.clone().abs().real().to_f64();
        if a >= l_target {
            break;
        }
        shift_log += z.clone().ln();
        z += 1u32;
    }
    // Stirling: (z - 1/2) ln z - z + ln(2π)/2 + Σ B_{2n} / (2n(2n-1) z^{2n-1})
    let half = Float::with_val(wp, 0.5);
    let ln2pi = (pi(wp) * 2u32).ln();
    let mut acc = (z.clone() - &half) * z.clone().ln() - &z + ln2pi / 2u32;
    let z2 = z.clone().square();
    let mut zpow = z.clone(); // z^{2n-1}
    let mut n = 1usize;
    loop {
        let b = bernoulli_even(n);
        let coeff = rat_to_float(
            &(b / BigRational::from_integer(BigInt::from((2 * n) * (2 * n - 1)))),
            wp,
        );
        let term = zpow.clone().recip() * &coeff;
        let tnorm = term.clone().abs().real().to_f64();
        acc += term;
        if tnorm < 0.5f64.powi(wp as i32) * acc.clone().abs().real().to_f64().max(1e-300) || n > 200
        {
            break;
        }
        zpow *= &z2;
        n += 1;
    }
    acc -= shift_log;
    Complex::with_val(prec, acc)
}

/// Γ(z) = exp(lnΓ(z)).
pub fn gamma(z: &Complex, prec: u32) -> Complex {
    Complex::with_val(prec, lngamma(z, prec + 16).exp())
}

/// All complex roots of a rational-coefficient polynomial by Durand–Kerner
/// iteration with Newton polish. Deterministic: fixed starting points, roots
/// sorted by (re, im) at the end.
pub fn poly_roots(coeffs: &[BigRational], prec: u32) -> Vec<Complex> {
    let deg = coeffs.len().saturating_sub(1);
    assert!(deg >= 1, "constant polynomial has no roots");
    let wp = prec + 64;
    let lead = coeffs.last().unwrap();
    let monic: Vec<Float> = coeffs[..deg]
        .iter()
        .map(|c| rat_to_float(&(c / lead), wp))
        .collect();
    // Cauchy bound for |roots|
    let bound: f64 = 1.0
        + monic
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max);
    // starting points on a circle with an irrational-angle offset
    let mut xs: Vec<Complex> = (0..deg)
        .map(|i| {
            let ang = 2.0 * std::f64::consts::PI * (i as f64) / (deg as f64) + 0.4;
            Complex::with_val(wp, (bound * 0.8 * ang.cos(), bound * 0.8 * ang.sin()))
        })
        .collect();
    let eval = |x: &Complex| -> Complex {
        let mut acc = Complex::with_val(wp, 1);
        for c in monic.iter().rev() {
            acc.mul_add_mut(x, &Complex::with_val(wp, (c, &Float::with_val(wp, 0))));
        }
        acc
    };
    for _ in 0..200 {
        let mut done = true;
        for i in 0..deg {
            let num = eval(&xs[i]);
            let mut den = Complex::with_val(wp, 1);
            for j in 0..deg {
                if j != i {
                    den *= xs[i].clone() - &xs[j];
                }
            }
            let delta = num / den;
            let dn = delta.clone().abs().real().to_f64();
            if dn > 0.5f64.powi(prec as i32 + 16) {
                done = false;
            }
            xs[i] -= delta;
        }
        if done {
            break;
        }
    }
    xs.sort_by(|a, b| {
        let (ar, ai) = (a.real().to_f64(), a.imag().to_f64());
        let (br, bi) = (b.real().to_f64(), b.imag().to_f64());
        ar.partial_cmp(&br)
            .unwrap()
            .then(ai.partial_cmp(&bi).unwrap())
    });
    xs.into_iter()
        .map(|x| Complex::with_val(prec, x))
        .collect()
}

/// √d with the principal branch (positive real, or i·√|d| for d < 0).
pub fn sqrt_i64(d: i64, prec: u32) -> Complex {
    if d >= 0 {
        Complex::with_val(prec, (Float::with_val(prec, d).sqrt(), Float::with_val(prec, 0)))
    } else {
        Complex::with_val(prec, (Float::with_val(prec, 0), Float::with_val(prec, -d).sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, re: f64, im: f64, tol: f64) -> bool {
        (a.real().to_f64() - re).abs() < tol && (a.imag().to_f64() - im).abs() < tol
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_even(1), crate::rat::q(1, 6));
        assert_eq!(bernoulli_even(2), crate::rat::q(-1, 30));
        assert_eq!(bernoulli_even(3), crate::rat::q(1, 42));
        assert_eq!(bernoulli_even(6), crate::rat::q(-691, 2730));
    }

    #[test]
    fn gamma_known_values() {
        let prec = 200;
        // Γ(1/2) = √π
        let g = gamma(&Complex::with_val(prec, 0.5), prec);
        let sp = pi(prec).sqrt();
        assert!((g.real().clone() - sp).abs().to_f64() < 1e-50);
        // Γ(5) = 24
        let g5 = gamma(&Complex::with_val(prec, 5), prec);
        assert!(close(&g5, 24.0, 0.0, 1e-45));
        // |Γ(1+it)|² = πt/sinh(πt) at t = 1.25
        let t = 1.25f64;
        let g1 = gamma(&Complex::with_val(prec, (1.0, t)), prec);
        let lhs = g1.clone().abs().real().to_f64().powi(2);
        let pit = std::f64::consts::PI * t;
        let rhs = pit / pit.sinh();
        assert!((lhs - rhs).abs() < 1e-12);
        // reflection at a complex point: Γ(z)Γ(1−z) = π/sin(πz), with z built
        // from exact dyadic parts so the identity is tested at full precision
        let z = Complex::with_val(prec, (0.3125, 0.75));
        let one_minus = Complex::with_val(prec, (1.0 - 0.3125, -0.75));
        let prod = gamma(&z, prec) * gamma(&one_minus, prec);
        let s = (z.clone() * pi(prec)).sin();
        let expect = s.recip() * pi(prec);
        let diff = (prod - expect).abs().real().to_f64();
        assert!(diff < 1e-40, "reflection residual {diff}");
    }

    #[test]
    fn roots_of_cyclotomic() {
        // x⁴ + 1: the four primitive 8th roots of unity
        let coeffs = vec![
            crate::rat::qi(1),
            crate::rat::qi(0),
            crate::rat::qi(0),
            crate::rat::qi(0),
            crate::rat::qi(1),
        ];
        let roots = poly_roots(&coeffs, 128);
        assert_eq!(roots.len(), 4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // sorted by (re, im)
        assert!(close(&roots[0], -s, -s, 1e-20));
        assert!(close(&roots[1], -s, s, 1e-20));
        assert!(close(&roots[2], s, -s, 1e-20));
        assert!(close(&roots[3], s, s, 1e-20));
    }
}
