//! The Hecke-eigenvalue/Satake-parameter dictionary for GL(2) and GSp(4),
//! the dual-group embedding, and Euler-factor constructors.
//!
//! A GL(2) Satake pair is stored through its symmetric functions: the
//! quadratic `X² − sX + n` whose abstract roots are the spin pair (α, β),
//! with `s = α + β = λ·p^{−1/2}` and `n = αβ = ω_p`. Half-integral powers of
//! p stay symbolic (see [`crate::ring::SqrtExt`]), so everything here is
//! exact and generic over the coefficient ring: number fields for numeric
//! work, rational function fields for the once-and-for-all symbolic
//! identities.
//!
//! Individual parameters are materialised as abstract roots
//! ([`crate::ring::QuadExt`]) only inside the operations that need them;
//! results always collapse back to the base ring, and the collapse is
//! asserted.

use crate::nfield::AlgebraicNumber;
use crate::ring::{QuadExt, Ring, SqrtExt};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SatakeError {
    #[error("similitude mismatch: α_f β_f ≠ α_g β_g")]
    SimilitudeMismatch,
    #[error("one input is tempered and the other is not")]
    TemperednessMismatch,
    #[error("central character value ω_p is zero")]
    OmegaZero,
    #[error("degree {0} is not supported (n ≤ 2)")]
    UnsupportedDegree(usize),
    #[error("inputs live at different primes")]
    PrimeMismatch,
}

/// Unramified GL(2) Satake data at p: the spin pair {α, β} as the roots of
/// `X² − sX + n`, up to the Weyl swap.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeGl2<R: Ring> {
    pub p: u64,
    /// α + β = λ^{(1)}(p) · p^{−1/2}
    pub s: R,
    /// αβ = ω_p (the central character value)
    pub n: R,
    pub tempered: bool,
}

/// Unramified GSp(4) Satake data at p.
#[derive(Clone, Debug, PartialEq)]
pub enum SatakeGsp4<R: Ring> {
    /// Image of a GL(2)×GL(2) pair under the dual-group embedding:
    /// the spin quadruple is {α_f, β_f, α_g, β_g} with the complementary
    /// pairing, concretely (b₀, b₁, b₂) = (α_f, α_g/α_f, β_g/α_f).
    Embedded {
        p: u64,
        f: (R, R),
        g: (R, R),
        tempered: bool,
    },
    /// Explicit Satake triple (b₀, b₁, b₂).
    Direct { p: u64, b: [R; 3], tempered: bool },
}

/// Local Euler factor: the polynomial ∏(1 − c_i X) with X = p^{−s}.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactor<R: Ring> {
    pub p: u64,
    /// ascending coefficients; constant term is 1
    pub coeffs: Vec<R>,
}

impl<R: Ring> EulerFactor<R> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let z = self.coeffs[0].zero_like();
        let mut coeffs = vec![z; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        EulerFactor { p: self.p, coeffs }
    }
}

/// Eigenvalue data recovered from Satake parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Gsp4Eigen<R: Ring> {
    /// λ^{(2)}(p) = p^{3/2} b₀ Σ_{S ⊆ {1,2}} ∏_{i∈S} b_i
    pub lambda: R,
    /// λ₁^{(2)}(p²); emitted only for embedded parameters, where the value
    /// is forced by the lift formulas
    pub lambda1: Option<R>,
    /// λ₂^{(2)}(p²) = b₀² b₁ b₂
    pub lambda2: R,
}

// ---------------------------------------------------------------------------
// GL(2) ops
// ---------------------------------------------------------------------------

/// Solve for the spin pair from the unitary eigenvalue and central character
/// value: α + β = λ·p^{−1/2}, αβ = ω. `sqrt_p` is the image of p^{1/2} in R.
pub fn gl2_satake_from_eigen<R: Ring>(
    lambda: &R,
    omega: &R,
    p: u64,
    sqrt_p: &R,
    tempered: bool,
) -> Result<SatakeGl2<R>, SatakeError> {
    let sp_inv = sqrt_p.inv().ok_or(SatakeError::OmegaZero)?;
    if omega.inv().is_none() {
        return Err(SatakeError::OmegaZero);
    }
    Ok(SatakeGl2 {
        p,
        s: lambda.mul(&sp_inv),
        n: omega.clone(),
        tempered,
    })
}

/// Recover (λ^{(1)}(p), λ₁^{(1)}(p²)) = (p^{1/2}(α+β), αβ).
pub fn gl2_eigen_from_satake<R: Ring>(s: &SatakeGl2<R>, sqrt_p: &R) -> (R, R) {
    (sqrt_p.mul(&s.s), s.n.clone())
}

/// The spin pair as abstract roots of X² − sX + n.
pub fn gl2_roots<R: Ring>(s: &SatakeGl2<R>) -> (QuadExt<R>, QuadExt<R>) {
    let alpha = QuadExt::root(s.s.clone(), s.n.clone());
    let beta = alpha.conj_root();
    (alpha, beta)
}

/// Degree-2 Euler factor (1 − αX)(1 − βX) = 1 − sX + nX².
pub fn gl2_euler_factor<R: Ring>(s: &SatakeGl2<R>) -> EulerFactor<R> {
    EulerFactor {
        p: s.p,
        coeffs: vec![s.s.one_like(), s.s.neg(), s.n.clone()],
    }
}

// ---------------------------------------------------------------------------
// the dual-group embedding
// ---------------------------------------------------------------------------

/// Embed a pair of GL(2) parameter sets with equal similitudes into GSp(4).
/// The spin quadruple of the output is {α_f, β_f, α_g, β_g} with the
/// complementary pairing B₀·(B₀B₁B₂) = α_fβ_f, (B₀B₁)(B₀B₂) = α_gβ_g.
pub fn embed_pair<R: Ring>(
    f: &SatakeGl2<R>,
    g: &SatakeGl2<R>,
) -> Result<SatakeGsp4<R>, SatakeError> {
    if f.p != g.p {
        return Err(SatakeError::PrimeMismatch);
    }
    if f.n != g.n {
        return Err(SatakeError::SimilitudeMismatch);
    }
    if f.tempered != g.tempered {
        return Err(SatakeError::TemperednessMismatch);
    }
    Ok(SatakeGsp4::Embedded {
        p: f.p,
        f: (f.s.clone(), f.n.clone()),
        g: (g.s.clone(), g.n.clone()),
        tempered: f.tempered,
    })
}

/// The four spin characters of an embedded parameter set, materialised in
/// the two-layer root tower: inner layer adjoins α_g, outer adjoins α_f.
fn embedded_spin_chars<R: Ring>(
    f: &(R, R),
    g: &(R, R),
) -> [QuadExt<QuadExt<R>>; 4] {
    let (sg, ng) = g;
    let alpha_g_inner = QuadExt::root(sg.clone(), ng.clone());
    let beta_g_inner = alpha_g_inner.conj_root();
    let sf2 = QuadExt::constant(f.0.clone(), sg.clone(), ng.clone());
    let nf2 = QuadExt::constant(f.1.clone(), sg.clone(), ng.clone());
    let alpha_f = QuadExt::root(sf2.clone(), nf2.clone());
    let beta_f = alpha_f.conj_root();
    let lift = |x: QuadExt<R>| QuadExt::constant(x, sf2.clone(), nf2.clone());
    // b₀ = α_f, b₁ = α_g/α_f, b₂ = β_g/α_f; spin characters are
    // {b₀, b₀b₁, b₀b₂, b₀b₁b₂} = {α_f, α_g, β_g, β_f}
    [alpha_f, lift(alpha_g_inner), lift(beta_g_inner), beta_f]
}

/// The Satake triple (b₀, b₁, b₂) of an embedded parameter set, in the
/// root tower.
pub fn embedded_triple<R: Ring>(f: &(R, R), g: &(R, R)) -> [QuadExt<QuadExt<R>>; 3] {
    let [alpha_f, alpha_g, beta_g, _] = embedded_spin_chars(f, g);
    let inv = alpha_f.inv().expect("spin character invertible");
    [alpha_f.clone(), alpha_g.mul(&inv), beta_g.mul(&inv)]
}

// ---------------------------------------------------------------------------
// Euler factors and eigenvalues at n = 2
// ---------------------------------------------------------------------------

fn collapse2<R: Ring>(x: &QuadExt<QuadExt<R>>) -> R {
    x.expect_constant().expect_constant().clone()
}

impl<R: Ring> SatakeGsp4<R> {
    pub fn p(&self) -> u64 {
        match self {
            SatakeGsp4::Embedded { p, .. } | SatakeGsp4::Direct { p, .. } => *p,
        }
    }

    pub fn tempered(&self) -> bool {
        match self {
            SatakeGsp4::Embedded { tempered, .. } | SatakeGsp4::Direct { tempered, .. } => {
                *tempered
            }
        }
    }

    /// Degree-4 spin Euler factor ∏(1 − cX) over the spin characters.
    pub fn spin_factor(&self) -> EulerFactor<R> {
        match self {
            SatakeGsp4::Embedded { p, f, g, .. } => {
                let chars = embedded_spin_chars(f, g);
                let one = chars[0].one_like();
                let mut coeffs = vec![one.clone()];
                for c in &chars {
                    // multiply by (1 − cX)
                    let mut next = vec![one.zero_like(); coeffs.len() + 1];
                    for (i, a) in coeffs.iter().enumerate() {
                        next[i] = next[i].add(a);
                        next[i + 1] = next[i + 1].sub(&a.mul(c));
                    }
                    coeffs = next;
                }
                EulerFactor {
                    p: *p,
                    coeffs: coeffs.iter().map(collapse2).collect(),
                }
            }
            SatakeGsp4::Direct { p, b, .. } => {
                let chars = direct_spin_chars(b);
                let z = b[0].zero_like();
                let mut coeffs = vec![z.one_like()];
                for c in &chars {
                    let mut next = vec![z.clone(); coeffs.len() + 1];
                    for (i, a) in coeffs.iter().enumerate() {
                        next[i] = next[i].add(a);
                        next[i + 1] = next[i + 1].sub(&a.mul(c));
                    }
                    coeffs = next;
                }
                EulerFactor { p: *p, coeffs }
            }
        }
    }

    /// (λ^{(2)}(p), λ₁^{(2)}(p²), λ₂^{(2)}(p²)). λ₁ is produced only for
    /// embedded parameters, where the value is pinned by the lift formulas;
    /// no general n = 2 inverse relation is assumed.
    pub fn eigen(&self, sqrt_p: &R) -> Gsp4Eigen<R> {
        let p_int = sqrt_p.mul(sqrt_p);
        match self {
            SatakeGsp4::Embedded { f, g, .. } => {
                // Σ spin = s_f + s_g; b₀²b₁b₂ = αβ = n
                let sum = f.0.add(&g.0);
                let lambda = sqrt_p.mul(&p_int).mul(&sum);
                // λ₁ = ω(p² − 1) + p·λ_f λ_g with λ = p^{1/2}s
                let p2 = p_int.mul(&p_int);
                let lambda1 = f
                    .1
                    .mul(&p2.sub(&p_int.one_like()))
                    .add(&p2.mul(&f.0).mul(&g.0));
                Gsp4Eigen {
                    lambda,
                    lambda1: Some(lambda1),
                    lambda2: f.1.clone(),
                }
            }
            SatakeGsp4::Direct { b, .. } => {
                let [b0, b1, b2] = b;
                let one = b0.one_like();
                let sum = one
                    .add(b1)
                    .add(b2)
                    .add(&b1.mul(b2));
                let lambda = sqrt_p.mul(&p_int).mul(b0).mul(&sum);
                let lambda2 = b0.mul(b0).mul(b1).mul(b2);
                Gsp4Eigen {
                    lambda,
                    lambda1: None,
                    lambda2,
                }
            }
        }
    }

    /// Equality modulo the Weyl action (group of order 8).
    pub fn eq_mod_weyl(&self, other: &Self) -> bool {
        if self.p() != other.p() {
            return false;
        }
        match (self, other) {
            (
                SatakeGsp4::Embedded { f: f1, g: g1, .. },
                SatakeGsp4::Embedded { f: f2, g: g2, .. },
            ) => {
                // the Weyl group permutes the two quadratics and swaps roots
                // within each; the quadratics themselves are Weyl-canonical
                (f1 == f2 && g1 == g2) || (f1 == g2 && g1 == f2)
            }
            (SatakeGsp4::Direct { b: b1, .. }, SatakeGsp4::Direct { b: b2, .. }) => {
                weyl_orbit2(b1).iter().any(|t| t == b2)
            }
            _ => false,
        }
    }
}

fn direct_spin_chars<R: Ring>(b: &[R; 3]) -> [R; 4] {
    [
        b[0].clone(),
        b[0].mul(&b[1]),
        b[0].mul(&b[2]),
        b[0].mul(&b[1]).mul(&b[2]),
    ]
}

/// The full Weyl orbit of a Satake triple (b₀, b₁, b₂); size 8 for generic
/// parameters. Generated by b₁ ↔ b₂ and b₀ ↦ b₀bᵢ, bᵢ ↦ bᵢ^{−1}.
pub fn weyl_orbit2<R: Ring>(b: &[R; 3]) -> Vec<[R; 3]> {
    let swap = |t: &[R; 3]| [t[0].clone(), t[2].clone(), t[1].clone()];
    let w1 = |t: &[R; 3]| {
        [
            t[0].mul(&t[1]),
            t[1].inv().expect("Satake parameter invertible"),
            t[2].clone(),
        ]
    };
    let w2 = |t: &[R; 3]| {
        [
            t[0].mul(&t[2]),
            t[1].clone(),
            t[2].inv().expect("Satake parameter invertible"),
        ]
    };
    let mut orbit: Vec<[R; 3]> = vec![b.clone()];
    let mut frontier = vec![b.clone()];
    while let Some(t) = frontier.pop() {
        for img in [swap(&t), w1(&t), w2(&t)] {
            if !orbit.contains(&img) {
                orbit.push(img.clone());
                frontier.push(img);
            }
        }
    }
    orbit
}

/// The Weyl orbit at n = 1: {(b₀, b₁), (b₀b₁, b₁^{−1})}.
pub fn weyl_orbit1<R: Ring>(b: &[R; 2]) -> Vec<[R; 2]> {
    let flipped = [
        b[0].mul(&b[1]),
        b[1].inv().expect("Satake parameter invertible"),
    ];
    if flipped == *b {
        vec![b.clone()]
    } else {
        vec![b.clone(), flipped]
    }
}

/// Degree-8 factor for GSp(4)×GL(2): ∏ (1 − c·d·X) over spin characters c
/// of the GSp(4) parameter and d ∈ {α_h, β_h}.
pub fn gsp4xgl2_factor<R: Ring>(s2: &SatakeGsp4<R>, h: &SatakeGl2<R>) -> EulerFactor<R> {
    assert_eq!(s2.p(), h.p, "factors live at one prime");
    match s2 {
        SatakeGsp4::Embedded { p, f, g, .. } => {
            // three-layer tower: α_g innermost, then α_f, then α_h
            type T1<R> = QuadExt<R>;
            type T2<R> = QuadExt<T1<R>>;
            type T3<R> = QuadExt<T2<R>>;
            let chars2: [T2<R>; 4] = embedded_spin_chars(f, g);
            let sh2: T2<R> = QuadExt::constant(
                QuadExt::constant(h.s.clone(), g.0.clone(), g.1.clone()),
                QuadExt::constant(f.0.clone(), g.0.clone(), g.1.clone()),
                QuadExt::constant(f.1.clone(), g.0.clone(), g.1.clone()),
            );
            let nh2: T2<R> = QuadExt::constant(
                QuadExt::constant(h.n.clone(), g.0.clone(), g.1.clone()),
                QuadExt::constant(f.0.clone(), g.0.clone(), g.1.clone()),
                QuadExt::constant(f.1.clone(), g.0.clone(), g.1.clone()),
            );
            let alpha_h: T3<R> = QuadExt::root(sh2.clone(), nh2.clone());
            let beta_h = alpha_h.conj_root();
            let lift3 = |x: &T2<R>| QuadExt::constant(x.clone(), sh2.clone(), nh2.clone());
            let mut coeffs: Vec<T3<R>> = vec![alpha_h.one_like()];
            for c in &chars2 {
                for d in [&alpha_h, &beta_h] {
                    let cd = lift3(c).mul(d);
                    let mut next = vec![alpha_h.zero_like(); coeffs.len() + 1];
                    for (i, a) in coeffs.iter().enumerate() {
                        next[i] = next[i].add(a);
                        next[i + 1] = next[i + 1].sub(&a.mul(&cd));
                    }
                    coeffs = next;
                }
            }
            EulerFactor {
                p: *p,
                coeffs: coeffs
                    .iter()
                    .map(|c| collapse2(c.expect_constant()))
                    .collect(),
            }
        }
        SatakeGsp4::Direct { p, b, .. } => {
            let chars = direct_spin_chars(b);
            let alpha_h = QuadExt::root(h.s.clone(), h.n.clone());
            let beta_h = alpha_h.conj_root();
            let lift = |x: &R| QuadExt::constant(x.clone(), h.s.clone(), h.n.clone());
            let mut coeffs = vec![alpha_h.one_like()];
            for c in &chars {
                for d in [&alpha_h, &beta_h] {
                    let cd = lift(c).mul(d);
                    let mut next = vec![alpha_h.zero_like(); coeffs.len() + 1];
                    for (i, a) in coeffs.iter().enumerate() {
                        next[i] = next[i].add(a);
                        next[i + 1] = next[i + 1].sub(&a.mul(&cd));
                    }
                    coeffs = next;
                }
            }
            EulerFactor {
                p: *p,
                coeffs: coeffs.iter().map(|c| c.expect_constant().clone()).collect(),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// concrete scalar type and temperedness
// ---------------------------------------------------------------------------

/// The workhorse scalar: a number-field element with a symbolic √p.
pub type ExactScalar = SqrtExt<AlgebraicNumber>;

/// p^{1/2} as an [`ExactScalar`] over the given field.
pub fn sqrt_p_scalar(field: &std::sync::Arc<crate::nfield::NumberField>, p: u64) -> ExactScalar {
    SqrtExt::from_odd(AlgebraicNumber::one(field), p)
}

/// Numeric temperedness check for a concrete GL(2) parameter set: both roots
/// of X² − sX + n have unit modulus in every embedding, within 10^{−20}.
pub fn gl2_is_tempered(s: &SatakeGl2<ExactScalar>, prec: u32) -> bool {
    let field = &s.s.even.field;
    let sqrt_p = rug::Float::with_val(prec, s.p).sqrt();
    for idx in 0..field.degree {
        let sv = s.s.even.embed_at(idx, prec)
            + s.s.odd.embed_at(idx, prec) * rug::Complex::with_val(prec, (&sqrt_p, &rug::Float::new(prec)));
        let nv = s.n.even.embed_at(idx, prec)
            + s.n.odd.embed_at(idx, prec) * rug::Complex::with_val(prec, (&sqrt_p, &rug::Float::new(prec)));
        // roots (s ± √(s² − 4n)) / 2
        let disc = (sv.clone().square() - 4u32 * nv).sqrt();
        for sign in [1i32, -1] {
            let root = (sv.clone() + disc.clone() * sign) / 2u32;
            let m = root.abs().real().to_f64();
            if (m - 1.0).abs() > 1e-20 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::NumberField;
    use crate::rat::{q, qi};
    use crate::ring::SqrtExt;
    use num::rational::BigRational;

    type S = SqrtExt<BigRational>;

    fn sc(even: BigRational, odd: BigRational, p: u64) -> S {
        SqrtExt::new(even, odd, p)
    }

    fn one(p: u64) -> S {
        SqrtExt::from_even(qi(1), p)
    }

    #[test]
    fn round_trip_exact() {
        // λ = −2, ω = 1 at p = 2 (the level-11 form)
        let p = 2;
        let sqrt_p = SqrtExt::from_odd(qi(1), p);
        let lam = sc(qi(-2), qi(0), p);
        let om = one(p);
        let sat = gl2_satake_from_eigen(&lam, &om, p, &sqrt_p, true).unwrap();
        // s = −2·p^{−1/2} = −√p ⇒ even part 0, odd part −1/p·p = −1
        assert_eq!(sat.s, sc(qi(0), qi(-1), p));
        let (lam2, om2) = gl2_eigen_from_satake(&sat, &sqrt_p);
        assert_eq!(lam2, lam);
        assert_eq!(om2, om);
        // αβ = n = 1 exactly
        let (a, b) = gl2_roots(&sat);
        assert!(a.mul(&b).expect_constant().is_one());
    }

    #[test]
    fn omega_zero_rejected() {
        let p = 3;
        let sqrt_p = SqrtExt::from_odd(qi(1), p);
        let lam = one(p);
        let zero = SqrtExt::from_even(qi(0), p);
        assert_eq!(
            gl2_satake_from_eigen(&lam, &zero, p, &sqrt_p, true).unwrap_err(),
            SatakeError::OmegaZero
        );
    }

    #[test]
    fn euler_degree2_shape() {
        let p = 5;
        let sat = SatakeGl2 {
            p,
            s: sc(qi(0), q(1, 5), p), // s = p^{−1/2}
            n: one(p),
            tempered: false,
        };
        let e = gl2_euler_factor(&sat);
        assert_eq!(e.coeffs.len(), 3);
        assert!(e.coeffs[0].is_one());
        assert_eq!(e.coeffs[1], sat.s.neg());
        assert_eq!(e.coeffs[2], sat.n);
    }

    #[test]
    fn embedding_factorization_and_eigen() {
        // rational sample values: λ_f = 3, λ_g = −1, ω = 1 at p = 3
        let p = 3;
        let sqrt_p: S = SqrtExt::from_odd(qi(1), p);
        let om = one(p);
        let f = gl2_satake_from_eigen(&sc(qi(3), qi(0), p), &om, p, &sqrt_p, false).unwrap();
        let g = gl2_satake_from_eigen(&sc(qi(-1), qi(0), p), &om, p, &sqrt_p, false).unwrap();
        let emb = embed_pair(&f, &g).unwrap();
        // spin factor equals the product of the two degree-2 factors
        let spin = emb.spin_factor();
        let prod = gl2_euler_factor(&f).mul(&gl2_euler_factor(&g));
        assert_eq!(spin, prod);
        // eigenvalues match the lift formulas
        let eig = emb.eigen(&sqrt_p);
        // λ^{(2)} = p(λ_f + λ_g) = 3·2 = 6
        assert_eq!(eig.lambda, sc(qi(6), qi(0), p));
        // λ₁ = ω(p²−1) + pλ_fλ_g = 8 + 3·(−3) = −1
        assert_eq!(eig.lambda1.unwrap(), sc(qi(-1), qi(0), p));
        assert_eq!(eig.lambda2, om);
    }

    #[test]
    fn similitude_mismatch_detected() {
        let p = 3;
        let sqrt_p: S = SqrtExt::from_odd(qi(1), p);
        let f = gl2_satake_from_eigen(&one(p), &one(p), p, &sqrt_p, false).unwrap();
        let m_om = SqrtExt::from_even(qi(-1), p);
        let g = gl2_satake_from_eigen(&one(p), &m_om, p, &sqrt_p, false).unwrap();
        assert_eq!(embed_pair(&f, &g).unwrap_err(), SatakeError::SimilitudeMismatch);
    }

    #[test]
    fn direct_triple_all_ones() {
        // b₀ = b₁ = b₂ = 1: λ^{(2)} = 4p^{3/2}, λ₂ = 1
        let p = 7;
        let sqrt_p: S = SqrtExt::from_odd(qi(1), p);
        let b = [one(p), one(p), one(p)];
        let s2: SatakeGsp4<S> = SatakeGsp4::Direct {
            p,
            b,
            tempered: false,
        };
        let eig = s2.eigen(&sqrt_p);
        // 4·p^{3/2} = 4p·√p = 28√p
        assert_eq!(eig.lambda, sc(qi(0), qi(28), p));
        assert!(eig.lambda1.is_none());
        assert!(eig.lambda2.is_one());
        // spin factor (1 − X)⁴
        let spin = s2.spin_factor();
        assert_eq!(
            spin.coeffs,
            vec![
                SqrtExt::from_even(qi(1), p),
                SqrtExt::from_even(qi(-4), p),
                SqrtExt::from_even(qi(6), p),
                SqrtExt::from_even(qi(-4), p),
                SqrtExt::from_even(qi(1), p)
            ]
        );
    }

    #[test]
    fn weyl_orbit_sizes_and_invariance() {
        let p = 5;
        let sqrt_p: S = SqrtExt::from_odd(qi(1), p);
        // generic rational triple
        let b = [sc(qi(2), qi(0), p), sc(qi(3), qi(0), p), sc(qi(5), qi(0), p)];
        let orbit = weyl_orbit2(&b);
        assert_eq!(orbit.len(), 8);
        let base: SatakeGsp4<S> = SatakeGsp4::Direct {
            p,
            b: b.clone(),
            tempered: false,
        };
        let eig0 = base.eigen(&sqrt_p);
        let spin0 = base.spin_factor();
        for t in &orbit {
            let s2: SatakeGsp4<S> = SatakeGsp4::Direct {
                p,
                b: t.clone(),
                tempered: false,
            };
            assert_eq!(s2.eigen(&sqrt_p).lambda, eig0.lambda);
            assert_eq!(s2.eigen(&sqrt_p).lambda2, eig0.lambda2);
            assert_eq!(s2.spin_factor(), spin0);
            assert!(base.eq_mod_weyl(&s2));
        }
        // n = 1 orbit
        let b1 = [sc(qi(2), qi(0), p), sc(qi(3), qi(0), p)];
        assert_eq!(weyl_orbit1(&b1).len(), 2);
    }

    #[test]
    fn degree8_factor_trivial_h() {
        // S_h with α_h = β_h = 1: the degree-8 factor is the spin factor squared
        let p = 3;
        let sqrt_p: S = SqrtExt::from_odd(qi(1), p);
        let om = one(p);
        let f = gl2_satake_from_eigen(&sc(qi(2), qi(0), p), &om, p, &sqrt_p, false).unwrap();
        let g = gl2_satake_from_eigen(&sc(qi(-1), qi(0), p), &om, p, &sqrt_p, false).unwrap();
        let emb = embed_pair(&f, &g).unwrap();
        let h = SatakeGl2 {
            p,
            s: sc(qi(2), qi(0), p), // α_h = β_h = 1: s = 2, n = 1
            n: one(p),
            tempered: false,
        };
        let d8 = gsp4xgl2_factor(&emb, &h);
        assert_eq!(d8.degree(), 8);
        let spin = emb.spin_factor();
        assert_eq!(d8, spin.mul(&spin));
    }

    #[test]
    fn tempered_check_level11_values() {
        // a_2(11a) = −2, weight 2: tempered (|a_p| ≤ 2√2)
        let field = NumberField::rationals();
        let p = 2;
        let sqrt_p = sqrt_p_scalar(&field, p);
        let lam = SqrtExt::from_even(AlgebraicNumber::from_rat(&field, qi(-2)), p);
        let om = SqrtExt::from_even(AlgebraicNumber::one(&field), p);
        let sat = gl2_satake_from_eigen(&lam, &om, p, &sqrt_p, true).unwrap();
        assert!(gl2_is_tempered(&sat, 256));
        // a_2 = 3 would violate the bound
        let bad = gl2_satake_from_eigen(
            &SqrtExt::from_even(AlgebraicNumber::from_rat(&field, qi(3)), p),
            &om,
            p,
            &sqrt_p,
            true,
        )
        .unwrap();
        assert!(!gl2_is_tempered(&bad, 256));
    }
}
