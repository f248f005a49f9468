//! Small helpers around `num`'s arbitrary-precision rationals.
//!
//! Rationals cross the serialization boundary as `"num/den"` strings (or a
//! bare integer string when the denominator is 1), so parsing and printing
//! live here next to a few arithmetic conveniences used all over the crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

/// Shorthand for a rational from two machine integers.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn qi(num: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// Parse `"3"`, `"-3"`, or `"3/4"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let den = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(BigRational::new(num, den))
    } else {
        let num = BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(BigRational::from_integer(num))
    }
}

/// Render a rational as `"num/den"`, or `"num"` when integral.
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact integer power of a rational, negative exponents allowed.
pub fn qpow(x: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let p = x.pow(e.unsigned_abs() as i32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `p^e` for a machine prime and signed exponent.
pub fn prime_power(p: u64, e: i64) -> BigRational {
    qpow(&BigRational::from_integer(BigInt::from(p)), e)
}

/// Height of a rational: max(|num|, den).
pub fn height(x: &BigRational) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "7", "-7", "3/4", "-22/7"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(rational_string(&x), s);
        }
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(qpow(&q(2, 3), -2), q(9, 4));
        assert_eq!(prime_power(5, 3), qi(125));
        assert_eq!(prime_power(5, -1), q(1, 5));
    }
}
