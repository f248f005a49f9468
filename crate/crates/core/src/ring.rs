//! Exact commutative-ring abstraction and the two formal extensions used by
//! the Satake dictionary.
//!
//! Eigenvalue formulas are homogeneous in `p^{1/2}`, so instead of adjoining a
//! real square root we compute in the graded ring `R + R·√p` ([`SqrtExt`]).
//! Satake parameters themselves are abstract roots of quadratics
//! `x² = s·x − n`; [`QuadExt`] is the rank-2 extension `R[x]/(x² − sx + n)`
//! carrying its defining data. Both are generic over [`Ring`], so the same
//! code runs over rationals, number fields, and rational function fields in
//! indeterminate eigenvalues.

use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// An exact commutative ring element. Contexts (parent field, variable count,
/// the prime under the radical) travel with the elements, so the neutral
/// elements are derived from an existing value rather than from the type.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` when the element is not invertible.
    fn inv(&self) -> Option<Self>;
    /// The image of a machine integer in this ring (same context as `self`).
    fn from_i64_like(&self, v: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn scale_i64(&self, v: i64) -> Self {
        self.mul(&self.from_i64_like(v))
    }
    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64_like(&self, v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

/// Element of the graded quadratic extension `R + R·√p` with `√p·√p = p`.
///
/// `p` is carried on every element; mixing distinct primes is a programming
/// error and panics.
#[derive(Clone, PartialEq)]
pub struct SqrtExt<R: Ring> {
    pub even: R,
    pub odd: R,
    pub p: u64,
}

impl<R: Ring> fmt::Debug for SqrtExt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}*sqrt({}))", self.even, self.odd, self.p)
    }
}

impl<R: Ring> SqrtExt<R> {
    pub fn new(even: R, odd: R, p: u64) -> Self {
        SqrtExt { even, odd, p }
    }
    pub fn from_even(even: R, p: u64) -> Self {
        let odd = even.zero_like();
        SqrtExt { even, odd, p }
    }
    pub fn from_odd(odd: R, p: u64) -> Self {
        let even = odd.zero_like();
        SqrtExt { even, odd, p }
    }
    /// `c · p^{h/2}` as a graded element (h may be negative).
    pub fn monomial(c: R, half_pow: i64, p: u64) -> Self {
        let int_part = half_pow.div_euclid(2);
        let frac = half_pow.rem_euclid(2);
        let scaled = if int_part >= 0 {
            c.mul(&c.from_i64_like(p as i64).pow_u(int_part as u64))
        } else {
            let inv = c
                .from_i64_like(p as i64)
                .pow_u((-int_part) as u64)
                .inv()
                .expect("prime is invertible");
            c.mul(&inv)
        };
        if frac == 0 {
            SqrtExt::from_even(scaled, p)
        } else {
            SqrtExt::from_odd(scaled, p)
        }
    }
    /// The purely even part, erroring if an odd component is present.
    pub fn expect_even(&self) -> &R {
        assert!(self.odd.is_zero(), "graded element has a sqrt(p) component");
        &self.even
    }
    fn chk(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed sqrt(p) primes");
    }
}

impl<R: Ring> Ring for SqrtExt<R> {
    fn zero_like(&self) -> Self {
        SqrtExt::new(self.even.zero_like(), self.even.zero_like(), self.p)
    }
    fn one_like(&self) -> Self {
        SqrtExt::new(self.even.one_like(), self.even.zero_like(), self.p)
    }
    fn add(&self, other: &Self) -> Self {
        self.chk(other);
        SqrtExt::new(self.even.add(&other.even), self.odd.add(&other.odd), self.p)
    }
    fn sub(&self, other: &Self) -> Self {
        self.chk(other);
        SqrtExt::new(self.even.sub(&other.even), self.odd.sub(&other.odd), self.p)
    }
    fn mul(&self, other: &Self) -> Self {
        self.chk(other);
        let p = self.even.from_i64_like(self.p as i64);
        let even = self
            .even
            .mul(&other.even)
            .add(&self.odd.mul(&other.odd).mul(&p));
        let odd = self.even.mul(&other.odd).add(&self.odd.mul(&other.even));
        SqrtExt::new(even, odd, self.p)
    }
    fn neg(&self) -> Self {
        SqrtExt::new(self.even.neg(), self.odd.neg(), self.p)
    }
    fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        // (e + o√p)(e − o√p) = e² − p·o²
        let p = self.even.from_i64_like(self.p as i64);
        let norm = self.even.mul(&self.even).sub(&self.odd.mul(&self.odd).mul(&p));
        let ninv = norm.inv()?;
        Some(SqrtExt::new(
            self.even.mul(&ninv),
            self.odd.mul(&ninv).neg(),
            self.p,
        ))
    }
    fn from_i64_like(&self, v: i64) -> Self {
        SqrtExt::from_even(self.even.from_i64_like(v), self.p)
    }
}

/// Element `a + b·x` of `R[x]/(x² − s·x + n)`: `x` is an abstract root of
/// `x² = s·x − n`, the shape in which Satake parameters are stored.
///
/// The defining pair `(s, n)` is carried on the element; arithmetic between
/// elements with different defining data panics.
#[derive(Clone, PartialEq)]
pub struct QuadExt<R: Ring> {
    pub a: R,
    pub b: R,
    pub s: R,
    pub n: R,
}

impl<R: Ring> fmt::Debug for QuadExt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}*x)", self.a, self.b)
    }
}

impl<R: Ring> QuadExt<R> {
    /// The root `x` itself.
    pub fn root(s: R, n: R) -> Self {
        QuadExt {
            a: s.zero_like(),
            b: s.one_like(),
            s,
            n,
        }
    }
    /// A base-ring constant in the extension defined by `(s, n)`.
    pub fn constant(c: R, s: R, n: R) -> Self {
        QuadExt {
            b: c.zero_like(),
            a: c,
            s,
            n,
        }
    }
    /// The conjugate root `s − x` (the other root of the quadratic).
    pub fn conj_root(&self) -> Self {
        // applies x ↦ s − x
        QuadExt {
            a: self.a.add(&self.b.mul(&self.s)),
            b: self.b.neg(),
            s: self.s.clone(),
            n: self.n.clone(),
        }
    }
    /// The base-ring part, erroring if the element genuinely involves the root.
    pub fn expect_constant(&self) -> &R {
        assert!(self.b.is_zero(), "element involves the abstract root");
        &self.a
    }
    fn chk(&self, other: &Self) {
        assert!(
            self.s == other.s && self.n == other.n,
            "mixed quadratic extensions"
        );
    }
}

impl<R: Ring> Ring for QuadExt<R> {
    fn zero_like(&self) -> Self {
        QuadExt::constant(self.a.zero_like(), self.s.clone(), self.n.clone())
    }
    fn one_like(&self) -> Self {
        QuadExt::constant(self.a.one_like(), self.s.clone(), self.n.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self.chk(other);
        QuadExt {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
            s: self.s.clone(),
            n: self.n.clone(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.chk(other);
        QuadExt {
            a: self.a.sub(&other.a),
            b: self.b.sub(&other.b),
            s: self.s.clone(),
            n: self.n.clone(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.chk(other);
        // (a1 + b1 x)(a2 + b2 x) with x² = s x − n
        let cross = self.a.mul(&other.b).add(&self.b.mul(&other.a));
        let bb = self.b.mul(&other.b);
        QuadExt {
            a: self.a.mul(&other.a).sub(&bb.mul(&self.n)),
            b: cross.add(&bb.mul(&self.s)),
            s: self.s.clone(),
            n: self.n.clone(),
        }
    }
    fn neg(&self) -> Self {
        QuadExt {
            a: self.a.neg(),
            b: self.b.neg(),
            s: self.s.clone(),
            n: self.n.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        // (a + b x)·((a + b s) − b x) = a² + s a b + n b²
        let norm = self
            .a
            .mul(&self.a)
            .add(&self.s.mul(&self.a).mul(&self.b))
            .add(&self.n.mul(&self.b).mul(&self.b));
        let ninv = norm.inv()?;
        let conj = QuadExt {
            a: self.a.add(&self.b.mul(&self.s)),
            b: self.b.neg(),
            s: self.s.clone(),
            n: self.n.clone(),
        };
        Some(QuadExt {
            a: conj.a.mul(&ninv),
            b: conj.b.mul(&ninv),
            s: self.s.clone(),
            n: self.n.clone(),
        })
    }
    fn from_i64_like(&self, v: i64) -> Self {
        QuadExt::constant(self.a.from_i64_like(v), self.s.clone(), self.n.clone())
    }
}

/// Dense univariate polynomial over a [`Ring`], used for Euler factors and
/// cyclotomic/defining-polynomial arithmetic. `coeffs[i]` multiplies `X^i`;
/// a context element is kept so the zero polynomial still knows its ring.
#[derive(Clone, PartialEq)]
pub struct Poly<R: Ring> {
    pub coeffs: Vec<R>,
    ctx: R,
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<R: Ring> Poly<R> {
    pub fn new(coeffs: Vec<R>, ctx: R) -> Self {
        let mut p = Poly { coeffs, ctx };
        p.trim();
        p
    }
    pub fn zero(ctx: R) -> Self {
        Poly {
            coeffs: vec![],
            ctx,
        }
    }
    pub fn one(ctx: R) -> Self {
        let one = ctx.one_like();
        Poly {
            coeffs: vec![one],
            ctx,
        }
    }
    pub fn constant(c: R) -> Self {
        let ctx = c.zero_like();
        Poly::new(vec![c], ctx)
    }
    /// The monomial `c·X^d`.
    pub fn monomial(c: R, d: usize) -> Self {
        let ctx = c.zero_like();
        let mut coeffs = vec![ctx.clone(); d];
        coeffs.push(c);
        Poly::new(coeffs, ctx)
    }
    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or(self.ctx.zero_like())
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::new(coeffs, self.ctx.clone())
    }
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::new(coeffs, self.ctx.clone())
    }
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ctx.clone());
        }
        let z = self.ctx.zero_like();
        let mut coeffs = vec![z; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::new(coeffs, self.ctx.clone())
    }
    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.ctx.clone())
    }
    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.neg()).collect(), self.ctx.clone())
    }
    /// Euclidean division by a polynomial with invertible leading coefficient.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        let d = div.degree().expect("division by zero polynomial");
        let lead_inv = div.coeffs[d].inv().expect("leading coefficient not invertible");
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.ctx.clone());
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let c = rem.coeffs[rd].mul(&lead_inv);
            let m = Poly::monomial(c, rd - d);
            quo = quo.add(&m);
            rem = rem.sub(&m.mul(div));
        }
        (quo, rem)
    }
    pub fn rem(&self, div: &Self) -> Self {
        self.div_rem(div).1
    }
    /// Evaluate by Horner's rule.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.ctx.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
    /// Product `∏ (1 − c_i X)` — the shape of every Euler factor.
    pub fn from_inverse_roots(cs: &[R], ctx: R) -> Self {
        let mut acc = Poly::one(ctx.clone());
        for c in cs {
            let lin = Poly::new(vec![ctx.one_like(), c.neg()], ctx.clone());
            acc = acc.mul(&lin);
        }
        acc
    }
}

/// Signed rational as `R`-element helper used by a few callers.
pub fn embed_rational<R: Ring>(ctx: &R, x: &BigRational) -> R {
    // num and den fit in i64 for every constant the crate feeds through here;
    // fall back to digit assembly when they do not.
    fn big_to_ring<R: Ring>(ctx: &R, n: &num::BigInt) -> R {
        if let Ok(v) = i64::try_from(n.clone()) {
            return ctx.from_i64_like(v);
        }
        let digits = n.abs().to_string();
        let mut acc = ctx.from_i64_like(0);
        let ten = ctx.from_i64_like(10);
        for d in digits.bytes() {
            acc = acc.mul(&ten).add(&ctx.from_i64_like((d - b'0') as i64));
        }
        if n.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }
    let num = big_to_ring(ctx, x.numer());
    let den = big_to_ring(ctx, x.denom());
    num.mul(&den.inv().expect("nonzero denominator"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    #[test]
    fn sqrt_ext_arithmetic() {
        // (1 + √2)(1 − √2) = −1
        let a = SqrtExt::new(qi(1), qi(1), 2);
        let b = SqrtExt::new(qi(1), qi(-1), 2);
        let prod = a.mul(&b);
        assert_eq!(prod, SqrtExt::from_even(qi(-1), 2));
        // inverse of √2 is √2/2
        let r = SqrtExt::from_odd(qi(1), 2);
        assert_eq!(r.inv().unwrap(), SqrtExt::from_odd(q(1, 2), 2));
        // monomial normalization: 3·p^{4/2} = 3p², 3·p^{−3/2} = (3/p²)·√p
        assert_eq!(SqrtExt::monomial(qi(3), 4, 5), SqrtExt::from_even(qi(75), 5));
        assert_eq!(
            SqrtExt::monomial(qi(3), -3, 5),
            SqrtExt::from_odd(q(3, 25), 5)
        );
    }

    #[test]
    fn quad_ext_roots() {
        // x² = x − 1 (primitive 6th root of unity shape): x³ = −1
        let x = QuadExt::root(qi(1), qi(1));
        let x3 = x.pow_u(3);
        assert_eq!(x3, x.from_i64_like(-1));
        // root times conjugate root equals the norm n
        let prod = x.mul(&x.conj_root());
        assert_eq!(prod, x.from_i64_like(1));
        // inverse: x·x^{−1} = 1
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).is_one());
    }

    #[test]
    fn poly_division() {
        let ctx = qi(0);
        // (X² − 1) / (X − 1) = X + 1
        let p = Poly::new(vec![qi(-1), qi(0), qi(1)], ctx.clone());
        let d = Poly::new(vec![qi(-1), qi(1)], ctx.clone());
        let (quo, rem) = p.div_rem(&d);
        assert!(rem.is_zero());
        assert_eq!(quo, Poly::new(vec![qi(1), qi(1)], ctx));
    }
}
