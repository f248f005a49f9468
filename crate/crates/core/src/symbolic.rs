//! Multivariate polynomials and their fraction field, for identity checks
//! with indeterminate eigenvalues.
//!
//! The spin-factorization identity is verified once and for all over
//! `Q(a_f, a_g, c)` rather than at sampled numeric inputs; the types here are
//! just big enough for that: sparse polynomials in a fixed variable set and
//! unreduced fractions compared by cross-multiplication.

use crate::ring::Ring;
use num::rational::BigRational;
use num::One;
use std::collections::BTreeMap;
use std::fmt;

/// Sparse multivariate polynomial over the rationals in `nvars` variables.
#[derive(Clone, PartialEq)]
pub struct MultiPoly {
    pub nvars: usize,
    /// exponent vector -> coefficient, zero coefficients absent
    pub terms: BTreeMap<Vec<u16>, BigRational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: String = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("v{i}")
                        } else {
                            format!("v{i}^{k}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{vars}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }
    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !num::Zero::is_zero(&c) {
            terms.insert(vec![0; nvars], c);
        }
        MultiPoly { nvars, terms }
    }
    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MultiPoly { nvars, terms }
    }
    fn insert(&mut self, e: Vec<u16>, c: BigRational) {
        if num::Zero::is_zero(&c) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if num::Zero::is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(self.nvars, BigRational::one())
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn inv(&self) -> Option<Self> {
        // only constants are invertible in the polynomial ring
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&k| k == 0) {
                return Some(MultiPoly::constant(self.nvars, c.recip()));
            }
        }
        None
    }
    fn from_i64_like(&self, v: i64) -> Self {
        MultiPoly::constant(self.nvars, BigRational::from_integer(v.into()))
    }
}

/// Unreduced fraction of multivariate polynomials. Equality is decided by
/// cross-multiplication, so skipping gcd reduction costs memory, not
/// correctness; the identities checked here stay tiny.
#[derive(Clone)]
pub struct Frac {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl Frac {
    pub fn from_poly(p: MultiPoly) -> Self {
        let den = p.one_like();
        Frac { num: p, den }
    }
    pub fn var(nvars: usize, i: usize) -> Self {
        Frac::from_poly(MultiPoly::var(nvars, i))
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Ring for Frac {
    fn zero_like(&self) -> Self {
        Frac::from_poly(self.num.zero_like())
    }
    fn one_like(&self) -> Self {
        Frac::from_poly(self.num.one_like())
    }
    fn add(&self, other: &Self) -> Self {
        Frac {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        Frac {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }
    fn neg(&self) -> Self {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Frac {
                num: self.den.clone(),
                den: self.num.clone(),
            })
        }
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Frac::from_poly(self.num.from_i64_like(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    #[test]
    fn frac_field_identities() {
        // (a² − b²)/(a − b) == a + b
        let a = Frac::var(2, 0);
        let b = Frac::var(2, 1);
        let lhs = a.mul(&a).sub(&b.mul(&b)).mul(&a.sub(&b).inv().unwrap());
        let rhs = a.add(&b);
        assert_eq!(lhs, rhs);
        assert!(a.sub(&a).is_zero());
        let c = a.from_i64_like(7);
        assert_eq!(c.mul(&c.inv().unwrap()), a.one_like());
        let _ = qi(0);
    }
}
