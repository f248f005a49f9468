//! Exact number fields with labelled embeddings, a finite model of the
//! Galois actions, and exact linear algebra over them.
//!
//! Everything in scope lives inside multiquadratic fields
//! `Q(√d₁, …, √d_r)` (r ≤ 3) or small opaque fields given by a defining
//! polynomial of degree ≤ 8. Multiquadratic structure is recognised at
//! construction and carries the full automorphism group (sign flips on the
//! radicals) exactly; opaque fields get arithmetic and numeric embeddings
//! but no Galois action.
//!
//! Elements are rational vectors on the power basis of the defining
//! polynomial. Cross-field arithmetic is intentionally absent: promotion
//! into a compositum is an explicit step (see [`Compositum`]), which keeps
//! equality tests honest.

use crate::charkit::CyclotomicElement;
use crate::mp;
use crate::rat::qi;
use crate::ring::Poly;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rug::ops::CompleteRound;
use rug::Complex;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree {0} exceeds the supported bound 8")]
    DegreeTooLarge(usize),
    #[error("polynomial is reducible: factor {0}")]
    Reducible(String),
    #[error("irreducibility could not be certified")]
    CannotCertify,
    #[error("elements belong to different fields ({0} vs {1})")]
    MixedParents(String, String),
    #[error("division by zero element")]
    DivisionByZero,
    #[error("unsupported for opaque fields: {0}")]
    OpaqueUnsupported(&'static str),
    #[error("compositum degree would exceed 8")]
    CompositumTooLarge,
    #[error("embedding index {0} out of range for degree {1}")]
    BadEmbedding(usize, usize),
}

/// σ has no assignment for this field.
#[derive(Debug, thiserror::Error)]
#[error("automorphism {sigma} is undefined on field {field}")]
pub struct UndefinedAction {
    pub sigma: String,
    pub field: String,
}

/// The span is not stable under an automorphism fixing the subfield.
#[derive(Debug, thiserror::Error)]
#[error("span not stable under {sigma}: generator {witness_index} leaves the span")]
pub struct StabilityFailure {
    pub sigma: String,
    pub witness_index: usize,
    pub witness: Vec<AlgebraicNumber>,
}

#[derive(Debug, thiserror::Error)]
pub enum GramSchmidtError {
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("pairing matrix is not hermitian")]
    NotHermitian,
    #[error("pairing is not positive definite under embedding {0}")]
    NotPositiveDefinite(usize),
    #[error("field has no complex-conjugation action")]
    NoConjugation,
}

// ---------------------------------------------------------------------------
// squarefree decomposition and small rational linear algebra
// ---------------------------------------------------------------------------

/// n = c²·s with s squarefree; returns (s, c). n must be nonzero.
pub fn squarefree_part(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut s = 1i64;
    let mut c = 1i64;
    let mut d = 2u64;
    while d * d <= m {
        let mut k = 0;
        while m % d == 0 {
            m /= d;
            k += 1;
        }
        if k % 2 == 1 {
            s *= d as i64;
        }
        c *= (d as i64).pow(k / 2);
        d += 1;
    }
    s *= m as i64;
    (s * sign, c)
}

fn mat_invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].clone().recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Number fields
// ---------------------------------------------------------------------------

/// Multiquadratic structure: the field is Q(√d₁, …, √d_r) and θ is a known
/// rational combination of the subset radicals.
#[derive(Clone, Debug)]
pub struct MultiQuadData {
    /// squarefree, multiplicatively independent generators
    pub gens: Vec<i64>,
    /// θ on the subset basis {√(∏_{i∈S} d_i)}_S, length 2^r
    pub theta_subset: Vec<BigRational>,
    /// row i = θ^i on the subset basis
    subset_of_power: Vec<Vec<BigRational>>,
    /// inverse matrix: subset basis → power basis
    power_of_subset: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug)]
pub enum Structure {
    MultiQuad(MultiQuadData),
    Opaque,
}

/// An exact number field of degree ≤ 8 with a distinguished embedding.
pub struct NumberField {
    pub label: String,
    /// monic defining polynomial, ascending coefficients, integer entries
    pub poly: Vec<BigInt>,
    pub degree: usize,
    pub structure: Structure,
    /// index of the distinguished embedding in [`Self::embeddings`]
    pub embedding_index: usize,
    /// set when the field is totally real or CM (conjugation-stable)
    pub cm_flag: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}, deg {})", self.label, self.degree)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.embedding_index == other.embedding_index
    }
}

fn subset_mul(gens: &[i64], a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let mut out = vec![BigRational::zero(); n];
    for s1 in 0..n {
        if a[s1].is_zero() {
            continue;
        }
        for s2 in 0..n {
            if b[s2].is_zero() {
                continue;
            }
            // √D_{S1}·√D_{S2} = (∏_{i∈S1∩S2} d_i) · √D_{S1 xor S2}
            let mut scale = BigInt::one();
            let both = s1 & s2;
            for (i, d) in gens.iter().enumerate() {
                if both >> i & 1 == 1 {
                    scale *= BigInt::from(*d);
                }
            }
            out[s1 ^ s2] += &a[s1] * &b[s2] * BigRational::from_integer(scale);
        }
    }
    out
}

impl MultiQuadData {
    fn build(gens: Vec<i64>, theta_subset: Vec<BigRational>) -> Option<(Self, Vec<BigInt>)> {
        let r = gens.len();
        let dim = 1usize << r;
        assert_eq!(theta_subset.len(), dim);
        // powers of θ in the subset basis
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(dim + 1);
        let mut cur = {
            let mut v = vec![BigRational::zero(); dim];
            v[0] = BigRational::one();
            v
        };
        rows.push(cur.clone());
        for _ in 0..dim {
            cur = subset_mul(&gens, &cur, &theta_subset);
            rows.push(cur.clone());
        }
        // θ must be primitive: the first dim powers linearly independent
        let basis: Vec<Vec<BigRational>> = rows[..dim].to_vec();
        let inv = mat_invert(&basis)?;
        // minimal polynomial: express θ^dim on the power basis
        let top = &rows[dim];
        let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); dim];
        for (j, c) in coeffs.iter_mut().enumerate() {
            for s in 0..dim {
                *c += &top[s] * &inv[s][j];
            }
        }
        // poly = x^dim − Σ coeffs_j x^j, must be integral for our constructors
        let mut poly: Vec<BigInt> = Vec::with_capacity(dim + 1);
        for c in &coeffs {
            if !c.denom().is_one() {
                return None;
            }
            poly.push(-c.numer().clone());
        }
        poly.push(BigInt::one());
        Some((
            MultiQuadData {
                gens,
                theta_subset,
                subset_of_power: basis,
                power_of_subset: inv,
            },
            poly,
        ))
    }

    /// power-basis coords → subset-basis coords
    pub fn to_subset(&self, coords: &[BigRational]) -> Vec<BigRational> {
        let dim = self.subset_of_power.len();
        let mut out = vec![BigRational::zero(); dim];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for s in 0..dim {
                out[s] += c * &self.subset_of_power[i][s];
            }
        }
        out
    }

    /// subset-basis coords → power-basis coords
    pub fn to_power(&self, subset: &[BigRational]) -> Vec<BigRational> {
        let dim = self.power_of_subset.len();
        let mut out = vec![BigRational::zero(); dim];
        for (s, c) in subset.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..dim {
                out[j] += c * &self.power_of_subset[s][j];
            }
        }
        out
    }
}

impl NumberField {
    /// The rational field Q (defining polynomial x).
    pub fn rationals() -> Arc<NumberField> {
        let (mq, poly) = MultiQuadData::build(vec![], vec![BigRational::zero()]).unwrap();
        Arc::new(NumberField {
            label: "Q".into(),
            poly,
            degree: 1,
            structure: Structure::MultiQuad(mq),
            embedding_index: 0,
            cm_flag: true,
        })
    }

    /// Q(√d) for squarefree d ≠ 0, 1, with θ = √d and the distinguished
    /// embedding sending θ to the principal square root.
    pub fn quadratic(d: i64) -> Arc<NumberField> {
        let (s, c) = squarefree_part(d);
        assert!(c == 1 && s != 1 && s != 0, "need a squarefree d ≠ 0, 1");
        let theta = vec![BigRational::zero(), BigRational::one()];
        let (mq, poly) = MultiQuadData::build(vec![s], theta).unwrap();
        Arc::new(NumberField {
            label: format!("Q(sqrt{s})"),
            poly,
            degree: 2,
            structure: Structure::MultiQuad(mq),
            embedding_index: 0,
            cm_flag: true,
        })
    }

    /// Q(√d₁, …, √d_r), r ≤ 3, with θ = √d₁ + … + √d_r.
    pub fn multiquadratic(ds: &[i64]) -> Result<Arc<NumberField>, FieldError> {
        let mut gens: Vec<i64> = vec![];
        for &d in ds {
            let (s, _) = squarefree_part(d);
            if s == 1 {
                continue;
            }
            // independence modulo squares against what we already have
            let mut dep = false;
            for mask in 1..(1u32 << gens.len()) {
                let mut prod = s;
                for (i, g) in gens.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        prod = prod.checked_mul(*g).expect("generator product overflow");
                    }
                }
                if squarefree_part(prod).0 == 1 {
                    dep = true;
                    break;
                }
            }
            if !dep {
                gens.push(s);
            }
        }
        gens.sort_unstable();
        let r = gens.len();
        if 1usize << r > 8 {
            return Err(FieldError::DegreeTooLarge(1 << r));
        }
        if r == 0 {
            return Ok(NumberField::rationals());
        }
        if r == 1 {
            return Ok(NumberField::quadratic(gens[0]));
        }
        let dim = 1usize << r;
        let mut theta = vec![BigRational::zero(); dim];
        for i in 0..r {
            theta[1 << i] = BigRational::one();
        }
        let (mq, poly) =
            MultiQuadData::build(gens.clone(), theta).ok_or(FieldError::CannotCertify)?;
        let label = format!(
            "Q({})",
            gens.iter()
                .map(|d| format!("sqrt{d}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(Arc::new(NumberField {
            label,
            poly,
            degree: dim,
            structure: Structure::MultiQuad(mq),
            embedding_index: 0,
            cm_flag: true,
        }))
    }

    /// Field from a monic integer polynomial (ascending coefficients).
    /// Degree ≤ 2 acquires multiquadratic structure; higher degrees stay
    /// opaque. Irreducibility is certified before the field is built.
    pub fn from_poly(
        label: &str,
        poly: Vec<BigInt>,
        embedding_index: usize,
    ) -> Result<Arc<NumberField>, FieldError> {
        let degree = poly.len().saturating_sub(1);
        if degree == 0 || !poly.last().unwrap().is_one() {
            return Err(FieldError::NotMonic);
        }
        if degree > 8 {
            return Err(FieldError::DegreeTooLarge(degree));
        }
        certify_irreducible(&poly)?;
        if embedding_index >= degree {
            return Err(FieldError::BadEmbedding(embedding_index, degree));
        }
        if degree == 1 {
            let theta = vec![BigRational::from_integer(-poly[0].clone())];
            let (mq, _) = MultiQuadData::build(vec![], theta).ok_or(FieldError::CannotCertify)?;
            return Ok(Arc::new(NumberField {
                label: label.to_string(),
                poly,
                degree: 1,
                structure: Structure::MultiQuad(mq),
                embedding_index: 0,
                cm_flag: true,
            }));
        }
        if degree == 2 {
            // x² + a1 x + a0: θ = (−a1 + c√s)/2 with a1² − 4a0 = c²·s
            let a1 = BigRational::from_integer(poly[1].clone());
            let a0 = BigRational::from_integer(poly[0].clone());
            let disc = &a1 * &a1 - qi(4) * &a0;
            let disc_int = disc.to_integer();
            let d64 = i64::try_from(disc_int.clone()).map_err(|_| FieldError::CannotCertify)?;
            let (s, c) = squarefree_part(d64);
            let theta = vec![-&a1 / qi(2), qi(c) / qi(2)];
            let (mq, derived) =
                MultiQuadData::build(vec![s], theta).ok_or(FieldError::CannotCertify)?;
            debug_assert_eq!(derived, poly);
            return Ok(Arc::new(NumberField {
                label: label.to_string(),
                poly,
                degree: 2,
                structure: Structure::MultiQuad(mq),
                // multiquad embeddings: index 0 = +√s, index 1 = −√s
                embedding_index,
                cm_flag: true,
            }));
        }
        // opaque: cm flag by numeric conjugation-closure of the root set
        let rats: Vec<BigRational> = poly
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let roots = mp::poly_roots(&rats, 192);
        let cm = roots.iter().all(|r| {
            roots.iter().any(|r2| {
                let d = (r.clone().conj() - r2).abs();
                d.real().to_f64() < 1e-40
            })
        });
        Ok(Arc::new(NumberField {
            label: label.to_string(),
            poly,
            degree,
            structure: Structure::Opaque,
            embedding_index,
            cm_flag: cm,
        }))
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree == 1
    }

    fn poly_rat(&self) -> Vec<BigRational> {
        self.poly
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Complex value of θ under each embedding, at the given precision.
    /// Multiquadratic embeddings are indexed by sign patterns on the
    /// radicals (bit i set = flip √dᵢ); opaque embeddings are the numeric
    /// roots sorted by (re, im).
    pub fn embeddings(&self, prec: u32) -> Vec<Complex> {
        match &self.structure {
            Structure::MultiQuad(mq) => {
                let r = mq.gens.len();
                (0..1usize << r)
                    .map(|pat| subset_value(mq, &mq.theta_subset, pat, prec))
                    .collect()
            }
            Structure::Opaque => mp::poly_roots(&self.poly_rat(), prec),
        }
    }

    /// Automorphism images of θ as exact field elements. For multiquadratic
    /// fields this is the full automorphism group; opaque fields yield only
    /// the identity.
    pub fn automorphism_images(self: &Arc<Self>) -> Vec<(String, AlgebraicNumber)> {
        match &self.structure {
            Structure::MultiQuad(mq) => {
                let r = mq.gens.len();
                (0..1usize << r)
                    .map(|pat| {
                        let mut flipped = mq.theta_subset.clone();
                        for (s, c) in flipped.iter_mut().enumerate() {
                            if (s & pat).count_ones() % 2 == 1 {
                                *c = -c.clone();
                            }
                        }
                        let coords = mq.to_power(&flipped);
                        let name = if pat == 0 {
                            "id".to_string()
                        } else {
                            let flips: Vec<String> = mq
                                .gens
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| pat >> i & 1 == 1)
                                .map(|(_, d)| format!("sqrt{d}"))
                                .collect();
                            format!("flip({})", flips.join(","))
                        };
                        (name, AlgebraicNumber::new(self.clone(), coords))
                    })
                    .collect()
            }
            Structure::Opaque => vec![("id".to_string(), AlgebraicNumber::theta(self))],
        }
    }

    /// The image of θ under complex conjugation in the distinguished
    /// embedding, when conjugation is an automorphism of the field.
    pub fn conjugation_image(self: &Arc<Self>) -> Option<AlgebraicNumber> {
        match &self.structure {
            Structure::MultiQuad(mq) => {
                // conjugation flips exactly the negative radicals
                let mut pat = 0usize;
                for (i, d) in mq.gens.iter().enumerate() {
                    if *d < 0 {
                        pat |= 1 << i;
                    }
                }
                let mut flipped = mq.theta_subset.clone();
                for (s, c) in flipped.iter_mut().enumerate() {
                    if (s & pat).count_ones() % 2 == 1 {
                        *c = -c.clone();
                    }
                }
                Some(AlgebraicNumber::new(self.clone(), mq.to_power(&flipped)))
            }
            Structure::Opaque => None,
        }
    }
}

fn subset_value(mq: &MultiQuadData, subset: &[BigRational], pat: usize, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, 0);
    for (s, c) in subset.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut radical = Complex::with_val(prec, 1);
        for (i, d) in mq.gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                radical *= mp::sqrt_i64(*d, prec);
            }
        }
        let sign = if (s & pat).count_ones() % 2 == 1 { -1 } else { 1 };
        acc += radical * mp::rat_to_complex(c, prec) * sign;
    }
    acc
}

// ---------------------------------------------------------------------------
// irreducibility certification
// ---------------------------------------------------------------------------

const WITNESS_PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn certify_irreducible(poly: &[BigInt]) -> Result<(), FieldError> {
    let deg = poly.len() - 1;
    if deg == 1 {
        return Ok(());
    }
    // integer root screen (monic: rational roots are integral, dividing a0)
    let a0 = &poly[0];
    if a0.is_zero() {
        return Err(FieldError::Reducible("x".into()));
    }
    if let Ok(a0_small) = i64::try_from(a0.abs()) {
        for d in 1..=a0_small.unsigned_abs() {
            if a0_small.unsigned_abs() % d == 0 {
                for root in [BigInt::from(d), BigInt::from(-(d as i64))] {
                    if eval_int(poly, &root).is_zero() {
                        return Err(FieldError::Reducible(format!("x - ({root})")));
                    }
                }
            }
        }
    }
    if deg == 2 || deg == 3 {
        // no rational root ⟹ irreducible
        return Ok(());
    }
    // positive certificate: irreducible mod p for some small prime
    for &p in &WITNESS_PRIMES {
        if irreducible_mod_p(poly, p) {
            return Ok(());
        }
    }
    // numeric factor search with exact verification
    let rats: Vec<BigRational> = poly
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let roots = mp::poly_roots(&rats, 320);
    let n = roots.len();
    for size in 1..=n / 2 {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if let Some(factor) = integer_factor_from_roots(&roots, &subset) {
                let frat: Vec<BigRational> = factor
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect();
                let fp = Poly::new(frat, BigRational::zero());
                let pp = Poly::new(rats.clone(), BigRational::zero());
                if fp.degree().map(|d| d >= 1).unwrap_or(false) {
                    let (_, rem) = pp.div_rem(&fp);
                    if rem.is_zero() {
                        return Err(FieldError::Reducible(format!("{factor:?}")));
                    }
                }
            }
            // next subset of the same size
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if subset[i] != i + n - size {
                    subset[i] += 1;
                    for j in i + 1..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(())
}

fn eval_int(poly: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn integer_factor_from_roots(roots: &[Complex], subset: &[usize]) -> Option<Vec<BigInt>> {
    let prec = roots[0].prec().0;
    let mut coeffs = vec![Complex::with_val(prec, 1)];
    for &i in subset {
        // multiply by (x − roots[i])
        let mut next = vec![Complex::with_val(prec, 0); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= (c * &roots[i]).complete((prec, prec));
        }
        coeffs = next;
    }
    let mut out = vec![];
    for c in &coeffs {
        if c.imag().clone().abs().to_f64() > 1e-12 {
            return None;
        }
        let re = c.real().to_f64();
        let rounded = re.round();
        if (re - rounded).abs() > 1e-10 || !rounded.is_finite() {
            return None;
        }
        out.push(BigInt::from(rounded as i64));
    }
    Some(out)
}

fn irreducible_mod_p(poly: &[BigInt], p: u64) -> bool {
    let n = poly.len() - 1;
    let f: Vec<u64> = poly
        .iter()
        .map(|c| {
            let m = c % BigInt::from(p);
            let m = if m.is_negative() { m + BigInt::from(p) } else { m };
            u64::try_from(m).unwrap()
        })
        .collect();
    if f[n] == 0 {
        return false;
    }
    // squarefree check: gcd(f, f') must be constant
    let fp: Vec<u64> = (1..=n).map(|i| f[i] as u128 as u64 * (i as u64) % p).collect();
    if poly_gcd_deg(&f, &fp, p) != 0 {
        return false;
    }
    // Frobenius powers g_k = x^{p^k} mod f by repeated composition
    let xp = poly_powmod_x(p, &f, p);
    let mut frob = vec![xp.clone()];
    for _ in 1..n {
        let g = poly_compose_mod(frob.last().unwrap(), &xp, &f, p);
        frob.push(g);
    }
    let x = vec![0, 1];
    if !poly_mod_eq(&frob[n - 1], &x, p) {
        return false;
    }
    for q in [2usize, 3, 5, 7] {
        if n % q == 0 && n / q >= 1 {
            let k = n / q;
            let diff = poly_sub(&frob[k - 1], &x, p);
            if poly_gcd_deg(&f, &diff, p) != 0 {
                return false;
            }
        }
    }
    true
}

fn poly_trim(a: &mut Vec<u64>) {
    while matches!(a.last(), Some(0)) {
        a.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

fn poly_mod_eq(a: &[u64], b: &[u64], p: u64) -> bool {
    poly_sub(a, b, p).is_empty()
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = (prod[i + j] as u128 + x as u128 * y as u128) % p as u128;
            prod[i + j] = t as u64;
        }
    }
    let mut prod = prod;
    poly_rem_full(&mut prod, f, p);
    prod
}

fn mod_inv(a: u64, p: u64) -> u64 {
    crate::charkit::pow_mod(a, p - 2, p)
}

fn poly_powmod_x(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    // x^e mod f
    let mut acc = vec![1u64];
    let mut base = vec![0u64, 1];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_compose_mod(g: &[u64], h: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    // g(h) mod f by Horner
    let mut acc: Vec<u64> = vec![];
    for &c in g.iter().rev() {
        acc = poly_mulmod(&acc, h, f, p);
        if c != 0 {
            if acc.is_empty() {
                acc = vec![c];
            } else {
                acc[0] = (acc[0] + c) % p;
            }
        }
    }
    poly_trim(&mut acc);
    acc
}

fn poly_gcd_deg(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        poly_rem_full(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn poly_rem_full(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let n = f.len() - 1;
    if n == 0 {
        a.clear();
        return;
    }
    let lead_inv = mod_inv(f[n], p);
    while a.len() > n {
        let d = a.len() - 1;
        let c = a[d] % p;
        if c != 0 {
            let q = c as u128 * lead_inv as u128 % p as u128;
            for i in 0..=n {
                let t = q * f[i] as u128 % p as u128;
                a[d - n + i] = ((a[d - n + i] as u128 + p as u128 - t) % p as u128) as u64;
            }
        }
        a.pop();
        poly_trim(a);
    }
    poly_trim(a);
}

// ---------------------------------------------------------------------------
// Algebraic numbers
// ---------------------------------------------------------------------------

/// Element of a [`NumberField`], as a rational vector on the power basis.
#[derive(Clone)]
pub struct AlgebraicNumber {
    pub field: Arc<NumberField>,
    pub coords: Vec<BigRational>,
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]@{}", parts.join(","), self.field.label)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coords == other.coords
    }
}

impl AlgebraicNumber {
    pub fn new(field: Arc<NumberField>, mut coords: Vec<BigRational>) -> Self {
        coords.resize(field.degree, BigRational::zero());
        AlgebraicNumber { field, coords }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        AlgebraicNumber::new(field.clone(), vec![])
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        AlgebraicNumber::new(field.clone(), vec![BigRational::one()])
    }

    pub fn from_rat(field: &Arc<NumberField>, x: BigRational) -> Self {
        AlgebraicNumber::new(field.clone(), vec![x])
    }

    /// The field generator θ.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        if field.degree == 1 {
            return AlgebraicNumber::new(
                field.clone(),
                vec![BigRational::from_integer(-field.poly[0].clone())],
            );
        }
        AlgebraicNumber::new(field.clone(), vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn chk(&self, other: &Self) {
        assert!(
            *self.field == *other.field,
            "mixed parents: {} vs {}",
            self.field.label,
            other.field.label
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.chk(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        AlgebraicNumber::new(self.field.clone(), coords)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.chk(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        AlgebraicNumber::new(self.field.clone(), coords)
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber::new(self.field.clone(), self.coords.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.chk(other);
        let n = self.field.degree;
        if n == 1 {
            return AlgebraicNumber::new(
                self.field.clone(),
                vec![&self.coords[0] * &other.coords[0]],
            );
        }
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        // reduce modulo the monic defining polynomial
        let fpoly = self.field.poly_rat();
        for d in (n..2 * n - 1).rev() {
            if prod[d].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[d], BigRational::zero());
            for i in 0..n {
                let t = &fpoly[i] * &c;
                prod[d - n + i] -= t;
            }
        }
        prod.truncate(n);
        AlgebraicNumber::new(self.field.clone(), prod)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.field.degree;
        if n == 1 {
            return Ok(AlgebraicNumber::new(
                self.field.clone(),
                vec![self.coords[0].clone().recip()],
            ));
        }
        // extended Euclid in Q[x] against the defining polynomial
        let zero = BigRational::zero();
        let f = Poly::new(self.field.poly_rat(), zero.clone());
        let a = Poly::new(self.coords.clone(), zero.clone());
        let (mut r0, mut r1) = (f, a);
        let (mut t0, mut t1) = (Poly::zero(zero.clone()), Poly::one(zero.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let tn = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = tn;
        }
        debug_assert_eq!(r0.degree(), Some(0));
        let cinv = r0.coeff(0).recip();
        let coords = (0..n).map(|i| t0.coeff(i) * &cinv).collect();
        Ok(AlgebraicNumber::new(self.field.clone(), coords))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = AlgebraicNumber::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        AlgebraicNumber::new(
            self.field.clone(),
            self.coords.iter().map(|x| x * c).collect(),
        )
    }

    /// Numeric value under the distinguished embedding.
    pub fn embed(&self, prec: u32) -> Complex {
        self.embed_at(self.field.embedding_index, prec)
    }

    /// Numeric value under embedding `idx`.
    pub fn embed_at(&self, idx: usize, prec: u32) -> Complex {
        match &self.field.structure {
            Structure::MultiQuad(mq) => {
                let subset = mq.to_subset(&self.coords);
                subset_value(mq, &subset, idx, prec)
            }
            Structure::Opaque => {
                let roots = mp::poly_roots(&self.field.poly_rat(), prec + 16);
                let theta = &roots[idx];
                let mut acc = Complex::with_val(prec + 16, 0);
                for c in self.coords.iter().rev() {
                    acc = acc * theta + mp::rat_to_complex(c, prec + 16);
                }
                Complex::with_val(prec, acc)
            }
        }
    }

    /// Values under all embeddings.
    pub fn embed_all(&self, prec: u32) -> Vec<Complex> {
        (0..self.field.degree)
            .map(|i| self.embed_at(i, prec))
            .collect()
    }

    /// Image under complex conjugation (error when the field has none).
    pub fn conj(&self) -> Result<Self, UndefinedAction> {
        let img = self.field.conjugation_image().ok_or_else(|| UndefinedAction {
            sigma: "conj".into(),
            field: self.field.label.clone(),
        })?;
        Ok(self.apply_generator_image(&img))
    }

    /// Evaluate the power-basis coordinates at a θ-image (ring morphism).
    pub fn apply_generator_image(&self, image: &AlgebraicNumber) -> Self {
        let mut acc = AlgebraicNumber::zero(&self.field);
        for c in self.coords.iter().rev() {
            acc = acc
                .mul(image)
                .add(&AlgebraicNumber::from_rat(&self.field, c.clone()));
        }
        acc
    }
}

impl crate::ring::Ring for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        AlgebraicNumber::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        AlgebraicNumber::one(&self.field)
    }
    fn add(&self, other: &Self) -> Self {
        AlgebraicNumber::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        AlgebraicNumber::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AlgebraicNumber::mul(self, other)
    }
    fn neg(&self) -> Self {
        AlgebraicNumber::neg(self)
    }
    fn is_zero(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        AlgebraicNumber::inv(self).ok()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        AlgebraicNumber::from_rat(&self.field, qi(v))
    }
}

// ---------------------------------------------------------------------------
// Galois elements
// ---------------------------------------------------------------------------

/// Action on roots of unity carried by a Galois element.
#[derive(Clone, Debug, PartialEq)]
pub enum CycAction {
    Identity,
    Conjugation,
    /// ζ_m ↦ ζ_m^a for every m dividing n (a coprime to n)
    Exponent { a: u64, n: u64 },
}

impl CycAction {
    pub fn apply(&self, x: &CyclotomicElement) -> CyclotomicElement {
        match self {
            CycAction::Identity => x.clone(),
            CycAction::Conjugation => x.conj(),
            CycAction::Exponent { a, n } => {
                let m = x.order.max(1);
                assert!(n % m == 0, "cyclotomic action undefined at order {m}");
                x.galois(a % m)
            }
        }
    }

    fn compose(&self, other: &CycAction) -> CycAction {
        use CycAction::*;
        match (self, other) {
            (Identity, x) | (x, Identity) => x.clone(),
            (Conjugation, Conjugation) => Identity,
            (a, b) => {
                let (aa, na) = a.as_exp();
                let (ab, nb) = b.as_exp();
                let n = num::integer::lcm(na.max(1), nb.max(1));
                let a1 = lift_exp(aa, n);
                let b1 = lift_exp(ab, n);
                let prod = (a1 as u128 * b1 as u128 % n as u128) as u64;
                if prod == 1 || n == 1 {
                    Identity
                } else if prod == n - 1 {
                    Conjugation
                } else {
                    Exponent { a: prod, n }
                }
            }
        }
    }

    fn as_exp(&self) -> (i64, u64) {
        match self {
            CycAction::Identity => (1, 1),
            CycAction::Conjugation => (-1, 1),
            CycAction::Exponent { a, n } => (*a as i64, *n),
        }
    }
}

fn lift_exp(a: i64, n_to: u64) -> u64 {
    if a >= 0 {
        (a as u64) % n_to
    } else {
        (n_to - ((-a) as u64 % n_to)) % n_to
    }
}

/// Finite model of an automorphism of C: per-field images of the generator
/// plus a cyclotomic exponent action.
#[derive(Clone, Debug)]
pub struct GaloisElement {
    pub name: String,
    pub cyc: CycAction,
    maps: BTreeMap<String, AlgebraicNumber>,
}

impl GaloisElement {
    pub fn identity() -> Self {
        GaloisElement {
            name: "id".into(),
            cyc: CycAction::Identity,
            maps: BTreeMap::new(),
        }
    }

    /// Complex conjugation restricted to the given fields.
    pub fn complex_conjugation(fields: &[&Arc<NumberField>]) -> Result<Self, UndefinedAction> {
        let mut maps = BTreeMap::new();
        for f in fields {
            let img = f.conjugation_image().ok_or_else(|| UndefinedAction {
                sigma: "conj".into(),
                field: f.label.clone(),
            })?;
            maps.insert(f.label.clone(), img);
        }
        Ok(GaloisElement {
            name: "conj".into(),
            cyc: CycAction::Conjugation,
            maps,
        })
    }

    /// Build from explicit generator images; each image is verified to be a
    /// root of its field's defining polynomial.
    pub fn from_images(
        name: &str,
        cyc: CycAction,
        images: Vec<(Arc<NumberField>, AlgebraicNumber)>,
    ) -> Self {
        let mut maps = BTreeMap::new();
        for (f, img) in images {
            let frat = Poly::new(
                f.poly
                    .iter()
                    .map(|c| AlgebraicNumber::from_rat(&img.field, BigRational::from_integer(c.clone())))
                    .collect(),
                AlgebraicNumber::zero(&img.field),
            );
            assert!(
                frat.eval(&img).is_zero(),
                "generator image is not a conjugate root"
            );
            maps.insert(f.label.clone(), img);
        }
        GaloisElement {
            name: name.into(),
            cyc,
            maps,
        }
    }

    pub fn is_identity_on(&self, field: &NumberField) -> bool {
        match self.maps.get(&field.label) {
            None => true,
            Some(img) => *img == AlgebraicNumber::theta(&img.field),
        }
    }

    /// Apply to a field element.
    pub fn apply(&self, x: &AlgebraicNumber) -> Result<AlgebraicNumber, UndefinedAction> {
        if x.field.is_rational_field() || x.is_rational() {
            return Ok(x.clone());
        }
        let img = self.maps.get(&x.field.label).ok_or_else(|| UndefinedAction {
            sigma: self.name.clone(),
            field: x.field.label.clone(),
        })?;
        Ok(x.apply_generator_image(img))
    }

    /// Apply to a cyclotomic number.
    pub fn apply_cyclo(&self, x: &CyclotomicElement) -> CyclotomicElement {
        self.cyc.apply(x)
    }

    /// Composition: (σ ∘ τ)(x) = σ(τ(x)).
    pub fn compose(&self, tau: &Self) -> Self {
        let mut maps = BTreeMap::new();
        let mut labels: Vec<&String> = self.maps.keys().chain(tau.maps.keys()).collect();
        labels.sort();
        labels.dedup();
        for label in labels {
            let timg = tau.maps.get(label);
            let simg = self.maps.get(label);
            let img = match (timg, simg) {
                (Some(t), Some(_)) => self.apply(t).expect("composable"),
                (Some(t), None) => t.clone(),
                (None, Some(s)) => s.clone(),
                (None, None) => unreachable!(),
            };
            maps.insert(label.clone(), img);
        }
        GaloisElement {
            name: format!("{}*{}", self.name, tau.name),
            cyc: self.cyc.compose(&tau.cyc),
            maps,
        }
    }

    /// The full automorphism group of a structured field, acting on that
    /// field only. The cyclotomic action is the identity except for the
    /// element matching complex conjugation.
    pub fn group_of(field: &Arc<NumberField>) -> Vec<GaloisElement> {
        let conj_img = field.conjugation_image();
        field
            .automorphism_images()
            .into_iter()
            .map(|(name, img)| {
                let is_conj = conj_img.as_ref() == Some(&img) && !field.is_rational_field();
                let mut maps = BTreeMap::new();
                maps.insert(field.label.clone(), img);
                GaloisElement {
                    name,
                    cyc: if is_conj {
                        CycAction::Conjugation
                    } else {
                        CycAction::Identity
                    },
                    maps,
                }
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Compositum
// ---------------------------------------------------------------------------

/// A multiquadratic field containing a given family of structured fields,
/// with the exact inclusion maps. Built once per computation session.
pub struct Compositum {
    pub field: Arc<NumberField>,
    /// member field label → image of its θ inside the compositum
    pub inclusions: BTreeMap<String, AlgebraicNumber>,
    members: Vec<Arc<NumberField>>,
}

impl Compositum {
    pub fn of(fields: &[&Arc<NumberField>]) -> Result<Compositum, FieldError> {
        let mut gens: Vec<i64> = vec![];
        for f in fields {
            match &f.structure {
                Structure::MultiQuad(mq) => gens.extend_from_slice(&mq.gens),
                Structure::Opaque => return Err(FieldError::OpaqueUnsupported("compositum")),
            }
        }
        let comp = NumberField::multiquadratic(&gens)?;
        let mut inclusions = BTreeMap::new();
        for f in fields {
            let img = include_into(f, &comp)?;
            inclusions.insert(f.label.clone(), img);
        }
        Ok(Compositum {
            field: comp,
            inclusions,
            members: fields.iter().map(|f| (*f).clone()).collect(),
        })
    }

    /// Promote an element of a member field into the compositum.
    pub fn promote(&self, x: &AlgebraicNumber) -> Result<AlgebraicNumber, FieldError> {
        if x.field.label == self.field.label && *x.field == *self.field {
            return Ok(x.clone());
        }
        let img = self.inclusions.get(&x.field.label).ok_or_else(|| {
            FieldError::MixedParents(x.field.label.clone(), self.field.label.clone())
        })?;
        let mut acc = AlgebraicNumber::zero(&self.field);
        for c in x.coords.iter().rev() {
            acc = acc
                .mul(img)
                .add(&AlgebraicNumber::from_rat(&self.field, c.clone()));
        }
        Ok(acc)
    }

    /// Automorphisms of the compositum, extended with their restrictions to
    /// every member field (multiquadratic Galois groups are abelian, so each
    /// member subfield is stabilized).
    pub fn automorphisms(&self) -> Vec<GaloisElement> {
        let mut out = GaloisElement::group_of(&self.field);
        for sigma in &mut out {
            for member in &self.members {
                if member.is_rational_field() || member.label == self.field.label {
                    continue;
                }
                let theta_in = &self.inclusions[&member.label];
                let img_in_comp = sigma.apply(theta_in).expect("defined on compositum");
                let img_in_member = self
                    .express_in_member(member, &img_in_comp)
                    .expect("abelian Galois group stabilizes subfields");
                sigma
                    .maps
                    .insert(member.label.clone(), img_in_member);
            }
        }
        out
    }

    /// Solve for the member-field coordinates of a compositum element lying
    /// in the image of the member (None when it does not).
    fn express_in_member(
        &self,
        member: &Arc<NumberField>,
        x: &AlgebraicNumber,
    ) -> Option<AlgebraicNumber> {
        let theta_in = &self.inclusions[&member.label];
        // basis of the member inside the compositum: θ^i promoted
        let mut pw = AlgebraicNumber::one(&self.field);
        let mut cols: Vec<Vec<BigRational>> = vec![];
        for _ in 0..member.degree {
            cols.push(pw.coords.clone());
            pw = pw.mul(theta_in);
        }
        // solve Σ c_i · cols[i] = x.coords over Q
        let n = self.field.degree;
        let m = member.degree;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..m).map(|c| cols[c][r].clone()).collect();
                row.push(x.coords[r].clone());
                row
            })
            .collect();
        // gaussian elimination on the n×(m+1) system
        let mut pivot_rows = vec![];
        let mut r0 = 0;
        for c in 0..m {
            let piv = (r0..n).find(|&r| !aug[r][c].is_zero())?;
            aug.swap(r0, piv);
            let inv = aug[r0][c].clone().recip();
            for v in aug[r0].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != r0 && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for j in 0..=m {
                        let t = &aug[r0][j] * &f;
                        aug[r][j] -= t;
                    }
                }
            }
            pivot_rows.push(r0);
            r0 += 1;
        }
        // consistency: remaining rows must have zero RHS
        for r in r0..n {
            if !aug[r][m].is_zero() {
                return None;
            }
        }
        let coords: Vec<BigRational> = (0..m).map(|c| aug[pivot_rows[c]][m].clone()).collect();
        Some(AlgebraicNumber::new(member.clone(), coords))
    }
}

fn include_into(
    member: &Arc<NumberField>,
    comp: &Arc<NumberField>,
) -> Result<AlgebraicNumber, FieldError> {
    let (mmq, cmq) = match (&member.structure, &comp.structure) {
        (Structure::MultiQuad(a), Structure::MultiQuad(b)) => (a, b),
        _ => return Err(FieldError::OpaqueUnsupported("inclusion")),
    };
    // θ_member = Σ_S c_S √D_S: rewrite each member radical in terms of the
    // compositum radicals (√D_S = t·√E with E squarefree)
    let dim = 1usize << cmq.gens.len();
    let mut subset = vec![BigRational::zero(); dim];
    for (s, c) in mmq.theta_subset.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut prod: i64 = 1;
        for (i, d) in mmq.gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                prod = prod.checked_mul(*d).expect("radical product overflow");
            }
        }
        let (sf, t) = squarefree_part(prod);
        let mut found = None;
        for cs in 0..dim {
            let mut p2: i64 = 1;
            for (i, d) in cmq.gens.iter().enumerate() {
                if cs >> i & 1 == 1 {
                    p2 = p2.checked_mul(*d).expect("overflow");
                }
            }
            if p2 == sf {
                found = Some(cs);
                break;
            }
        }
        let cs = found.ok_or(FieldError::CompositumTooLarge)?;
        subset[cs] += c * qi(t);
    }
    let coords = cmq.to_power(&subset);
    Ok(AlgebraicNumber::new(comp.clone(), coords))
}

// ---------------------------------------------------------------------------
// Exact matrices
// ---------------------------------------------------------------------------

/// Matrix of algebraic numbers over a common parent field.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix {
    pub field: Arc<NumberField>,
    pub rows: usize,
    pub cols: usize,
    data: Vec<AlgebraicNumber>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ExactMatrix {}x{} over {}",
            self.rows, self.cols, self.field.label
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format!("{:?}", self.at(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn new(
        field: Arc<NumberField>,
        rows: usize,
        cols: usize,
        data: Vec<AlgebraicNumber>,
    ) -> Self {
        assert_eq!(data.len(), rows * cols);
        for x in &data {
            assert!(*x.field == *field, "matrix entries share one ambient field");
        }
        ExactMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Arc<NumberField>, rows: Vec<Vec<AlgebraicNumber>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let data: Vec<AlgebraicNumber> = rows.into_iter().flatten().collect();
        ExactMatrix::new(field.clone(), r, c, data)
    }

    pub fn identity(field: &Arc<NumberField>, n: usize) -> Self {
        let mut data = vec![AlgebraicNumber::zero(field); n * n];
        for i in 0..n {
            data[i * n + i] = AlgebraicNumber::one(field);
        }
        ExactMatrix::new(field.clone(), n, n, data)
    }

    pub fn at(&self, r: usize, c: usize) -> &AlgebraicNumber {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: AlgebraicNumber) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<AlgebraicNumber> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&AlgebraicNumber) -> AlgebraicNumber) -> Self {
        ExactMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reduced row-echelon form with the pivot column list.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let piv = (row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(piv) = piv else { continue };
            for c in 0..m.cols {
                let tmp = m.at(row, c).clone();
                m.set(row, c, m.at(piv, c).clone());
                m.set(piv, c, tmp);
            }
            let inv = m.at(row, col).inv().expect("pivot invertible");
            for c in 0..m.cols {
                m.set(row, c, m.at(row, c).mul(&inv));
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c).sub(&f.mul(m.at(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by Gaussian elimination with exact field arithmetic.
    pub fn det(&self) -> AlgebraicNumber {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = AlgebraicNumber::one(&self.field);
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(piv) = piv else {
                return AlgebraicNumber::zero(&self.field);
            };
            if piv != col {
                for c in 0..n {
                    let tmp = m.at(col, c).clone();
                    m.set(col, c, m.at(piv, c).clone());
                    m.set(piv, c, tmp);
                }
                det = det.neg();
            }
            let d = m.at(col, col).clone();
            det = det.mul(&d);
            let dinv = d.inv().expect("pivot invertible");
            for r in col + 1..n {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).mul(&dinv);
                    for c in col..n {
                        let v = m.at(r, c).sub(&f.mul(m.at(col, c)));
                        m.set(r, c, v);
                    }
                }
            }
        }
        det
    }
}

// ---------------------------------------------------------------------------
// subfield_basis and gram_schmidt
// ---------------------------------------------------------------------------

/// Which subfield the basis must be rational over.
pub enum SubfieldSpec {
    Rationals,
    /// the full parent field: only the identity must fix it
    Whole,
    /// a subfield presented by the image of its generator inside the parent
    Embedded(AlgebraicNumber),
}

/// Returns the rref basis of the span when it is stable under every
/// automorphism of the parent fixing `subfield`; otherwise reports the
/// witness automorphism and the generator whose image leaves the span.
pub fn subfield_basis(
    generators: &[Vec<AlgebraicNumber>],
    field: &Arc<NumberField>,
    subfield: &SubfieldSpec,
) -> Result<Vec<Vec<AlgebraicNumber>>, StabilityFailure> {
    let m = ExactMatrix::from_rows(field, generators.to_vec());
    let (r, pivots) = m.rref();
    let basis: Vec<Vec<AlgebraicNumber>> = (0..pivots.len()).map(|i| r.row(i)).collect();
    let autos = GaloisElement::group_of(field);
    for sigma in &autos {
        let fixes = match subfield {
            SubfieldSpec::Rationals => true,
            SubfieldSpec::Whole => sigma.is_identity_on(field),
            SubfieldSpec::Embedded(theta_l) => sigma
                .apply(theta_l)
                .map(|img| img == *theta_l)
                .unwrap_or(false),
        };
        if !fixes {
            continue;
        }
        let conj = m.map(|x| sigma.apply(x).expect("automorphism defined on parent"));
        let (rc, _) = conj.rref();
        if rc != r {
            let witness_index = (0..generators.len())
                .find(|&i| {
                    let img: Vec<AlgebraicNumber> = generators[i]
                        .iter()
                        .map(|x| sigma.apply(x).unwrap())
                        .collect();
                    !in_span(&basis, &img, field)
                })
                .unwrap_or(0);
            return Err(StabilityFailure {
                sigma: sigma.name.clone(),
                witness_index,
                witness: generators[witness_index].clone(),
            });
        }
    }
    Ok(basis)
}

fn in_span(
    basis: &[Vec<AlgebraicNumber>],
    v: &[AlgebraicNumber],
    field: &Arc<NumberField>,
) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    let m = ExactMatrix::from_rows(field, rows);
    m.rank() == basis.len()
}

/// Pairing ⟨v, w⟩ = Σ v_i A_{ij} conj(w_j) for a hermitian matrix A.
pub fn pairing_value(
    a: &ExactMatrix,
    v: &[AlgebraicNumber],
    w: &[AlgebraicNumber],
) -> Result<AlgebraicNumber, UndefinedAction> {
    let field = &a.field;
    let mut acc = AlgebraicNumber::zero(field);
    for i in 0..a.rows {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..a.cols {
            if w[j].is_zero() {
                continue;
            }
            let term = v[i].mul(a.at(i, j)).mul(&w[j].conj()?);
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// Gram–Schmidt against a hermitian positive-definite pairing. The first
/// vector is returned unchanged and the output spans the same flag of
/// subspaces; pairwise pairings of the output vanish exactly.
pub fn gram_schmidt(
    vectors: &[Vec<AlgebraicNumber>],
    pairing: &ExactMatrix,
) -> Result<Vec<Vec<AlgebraicNumber>>, GramSchmidtError> {
    let field = &pairing.field;
    if field.conjugation_image().is_none() {
        return Err(GramSchmidtError::NoConjugation);
    }
    for i in 0..pairing.rows {
        for j in 0..pairing.cols {
            let aij = pairing.at(i, j).clone();
            let aji_bar = pairing
                .at(j, i)
                .conj()
                .map_err(|_| GramSchmidtError::NoConjugation)?;
            if aij != aji_bar {
                return Err(GramSchmidtError::NotHermitian);
            }
        }
    }
    // positive definite under every embedding: leading principal minors
    let val_prec = mp::bits_for_digits(50);
    for k in 1..=pairing.rows {
        let sub = ExactMatrix::new(
            field.clone(),
            k,
            k,
            (0..k)
                .flat_map(|r| (0..k).map(move |c| (r, c)))
                .map(|(r, c)| pairing.at(r, c).clone())
                .collect(),
        );
        let det = sub.det();
        for (e, val) in det.embed_all(val_prec).into_iter().enumerate() {
            if val.real().to_f64() <= 0.0 {
                return Err(GramSchmidtError::NotPositiveDefinite(e));
            }
        }
    }
    let m = ExactMatrix::from_rows(field, vectors.to_vec());
    if m.rank() != vectors.len() {
        return Err(GramSchmidtError::DependentInput);
    }
    let mut out: Vec<Vec<AlgebraicNumber>> = vec![];
    let mut norms: Vec<AlgebraicNumber> = vec![];
    for v in vectors {
        let mut u = v.clone();
        for (w, nw) in out.iter().zip(&norms) {
            let c = pairing_value(pairing, &u, w).map_err(|_| GramSchmidtError::NoConjugation)?;
            let coef = c.div(nw).expect("norm nonzero");
            u = u.iter().zip(w).map(|(x, y)| x.sub(&coef.mul(y))).collect();
        }
        let nu = pairing_value(pairing, &u, &u).map_err(|_| GramSchmidtError::NoConjugation)?;
        if nu.is_zero() {
            return Err(GramSchmidtError::DependentInput);
        }
        norms.push(nu);
        out.push(u);
    }
    Ok(out)
}

/// Apply a Galois element entrywise.
pub fn apply_galois_matrix(
    m: &ExactMatrix,
    sigma: &GaloisElement,
) -> Result<ExactMatrix, UndefinedAction> {
    let mut data = Vec::with_capacity(m.rows * m.cols);
    for r in 0..m.rows {
        for c in 0..m.cols {
            data.push(sigma.apply(m.at(r, c))?);
        }
    }
    Ok(ExactMatrix::new(m.field.clone(), m.rows, m.cols, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn qf(d: i64) -> Arc<NumberField> {
        NumberField::quadratic(d)
    }

    fn el(f: &Arc<NumberField>, a: i64, b: i64) -> AlgebraicNumber {
        AlgebraicNumber::new(f.clone(), vec![qi(a), qi(b)])
    }

    #[test]
    fn quadratic_arithmetic() {
        let f = qf(5);
        let r5 = AlgebraicNumber::theta(&f);
        assert_eq!(r5.mul(&r5), AlgebraicNumber::from_rat(&f, qi(5)));
        let x = el(&f, 1, 2); // 1 + 2√5
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi) == AlgebraicNumber::one(&f));
        // golden ratio satisfies φ² = φ + 1
        let phi = AlgebraicNumber::new(f.clone(), vec![q(1, 2), q(1, 2)]);
        assert_eq!(phi.mul(&phi), phi.add(&AlgebraicNumber::one(&f)));
    }

    #[test]
    fn from_poly_quadratic_structure() {
        // x² − x − 1: θ = (1 + √5)/2
        let poly = vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)];
        let f = NumberField::from_poly("F23", poly, 0).unwrap();
        let theta = AlgebraicNumber::theta(&f);
        assert_eq!(theta.mul(&theta), theta.add(&AlgebraicNumber::one(&f)));
        let v = theta.embed(96).real().to_f64();
        assert!((v - 1.618033988749895).abs() < 1e-12);
        // nontrivial automorphism sends θ to 1 − θ
        let autos = GaloisElement::group_of(&f);
        assert_eq!(autos.len(), 2);
        let sigma = autos.iter().find(|s| !s.is_identity_on(&f)).unwrap();
        let img = sigma.apply(&theta).unwrap();
        assert_eq!(img, AlgebraicNumber::one(&f).sub(&theta));
    }

    #[test]
    fn irreducibility_certificates() {
        // x⁴ + 1 is irreducible (though reducible mod every prime)
        let p = vec![
            BigInt::from(1),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(1),
        ];
        assert!(NumberField::from_poly("zeta8", p, 0).is_ok());
        // x² − 1 is reducible
        let p2 = vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)];
        assert!(matches!(
            NumberField::from_poly("bad", p2, 0),
            Err(FieldError::Reducible(_))
        ));
        // x⁴ − 4 = (x²−2)(x²+2): no rational root, caught by factor search
        let p3 = vec![
            BigInt::from(-4),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(1),
        ];
        assert!(matches!(
            NumberField::from_poly("bad4", p3, 0),
            Err(FieldError::Reducible(_))
        ));
    }

    #[test]
    fn gaussian_conjugation() {
        let f = qf(-1);
        let i = AlgebraicNumber::theta(&f);
        assert_eq!(i.conj().unwrap(), i.neg());
        let x = el(&f, 3, 4);
        assert_eq!(x.conj().unwrap(), el(&f, 3, -4));
        let y = el(&f, -2, 7);
        assert_eq!(
            x.mul(&y).conj().unwrap(),
            x.conj().unwrap().mul(&y.conj().unwrap())
        );
        assert!(f.cm_flag);
    }

    #[test]
    fn compositum_and_promotion() {
        let a = qf(-1);
        let b = qf(5);
        let comp = Compositum::of(&[&a, &b]).unwrap();
        assert_eq!(comp.field.degree, 4);
        let i_in = comp.promote(&AlgebraicNumber::theta(&a)).unwrap();
        let r5_in = comp.promote(&AlgebraicNumber::theta(&b)).unwrap();
        assert_eq!(
            i_in.mul(&i_in),
            AlgebraicNumber::from_rat(&comp.field, qi(-1))
        );
        assert_eq!(
            r5_in.mul(&r5_in),
            AlgebraicNumber::from_rat(&comp.field, qi(5))
        );
        assert_eq!(comp.automorphisms().len(), 4);
    }

    #[test]
    fn rref_examples() {
        let f = NumberField::rationals();
        let idn = ExactMatrix::identity(&f, 3);
        let (r, p) = idn.rref();
        assert_eq!(r, idn);
        assert_eq!(p, vec![0, 1, 2]);
        let zero = ExactMatrix::new(f.clone(), 2, 3, vec![AlgebraicNumber::zero(&f); 6]);
        let (rz, pz) = zero.rref();
        assert_eq!(rz, zero);
        assert!(pz.is_empty());
    }

    #[test]
    fn subfield_basis_examples() {
        // span{(1, i)} over Q(i) with L the whole field: stays
        let f = qf(-1);
        let i = AlgebraicNumber::theta(&f);
        let one = AlgebraicNumber::one(&f);
        let gens = vec![vec![one.clone(), i.clone()]];
        let basis = subfield_basis(&gens, &f, &SubfieldSpec::Whole).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![one.clone(), i.clone()]);

        // span{(1, √2)} with L = Q: unstable, witness flips √2
        let g = qf(2);
        let r2 = AlgebraicNumber::theta(&g);
        let fail = subfield_basis(
            &[vec![AlgebraicNumber::one(&g), r2.clone()]],
            &g,
            &SubfieldSpec::Rationals,
        )
        .unwrap_err();
        assert!(fail.sigma.contains("flip"));

        // span{(1, √2), (1, −√2)} with L = Q: stable, basis {(1,0),(0,1)}
        let ok = subfield_basis(
            &[
                vec![AlgebraicNumber::one(&g), r2.clone()],
                vec![AlgebraicNumber::one(&g), r2.neg()],
            ],
            &g,
            &SubfieldSpec::Rationals,
        )
        .unwrap();
        assert_eq!(ok.len(), 2);
        assert_eq!(
            ok[0],
            vec![AlgebraicNumber::one(&g), AlgebraicNumber::zero(&g)]
        );
        assert_eq!(
            ok[1],
            vec![AlgebraicNumber::zero(&g), AlgebraicNumber::one(&g)]
        );
    }

    #[test]
    fn gram_schmidt_examples() {
        let f = NumberField::rationals();
        let idn = ExactMatrix::identity(&f, 2);
        let e1 = vec![AlgebraicNumber::one(&f), AlgebraicNumber::zero(&f)];
        let e2 = vec![AlgebraicNumber::zero(&f), AlgebraicNumber::one(&f)];
        let out = gram_schmidt(&[e1.clone(), e2.clone()], &idn).unwrap();
        assert_eq!(out, vec![e1.clone(), e2.clone()]);
        // {(1,1),(1,0)} → {(1,1),(1/2,−1/2)}
        let one = AlgebraicNumber::one(&f);
        let v1 = vec![one.clone(), one.clone()];
        let v2 = vec![one.clone(), AlgebraicNumber::zero(&f)];
        let out2 = gram_schmidt(&[v1.clone(), v2], &idn).unwrap();
        assert_eq!(out2[0], v1);
        let half = AlgebraicNumber::from_rat(&f, q(1, 2));
        assert_eq!(out2[1], vec![half.clone(), half.neg()]);
        let dep = gram_schmidt(&[e1.clone(), e1.clone()], &idn);
        assert!(matches!(dep, Err(GramSchmidtError::DependentInput)));
    }

    #[test]
    fn opaque_field_embeddings() {
        // cubic field x³ − 2
        let p = vec![
            BigInt::from(-2),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(1),
        ];
        let f = NumberField::from_poly("cbrt2", p, 1).unwrap();
        assert_eq!(f.degree, 3);
        let theta = AlgebraicNumber::theta(&f);
        let cube = theta.pow(3);
        assert_eq!(cube, AlgebraicNumber::from_rat(&f, qi(2)));
        let vals = theta.embed_all(128);
        assert_eq!(vals.len(), 3);
        // root multiset is conjugation-stable, so the flag is set
        assert!(f.cm_flag);
    }
}
