//! Synthesis and verification of Yoshida-lift eigenvalue systems from pairs
//! of classical newforms.
//!
//! A lift is never materialised as a Siegel Fourier expansion; the object
//! built here is the eigenvalue system the lifting theorems pin down at the
//! good primes, together with the set T of common discrete-series primes
//! and the count 2^{#T−1} of cuspidal representations in the packet:
//!
//! * λ^{(2)}(p)   = p(λ^{(1)}(f,p) + λ^{(1)}(g,p))
//! * λ₁^{(2)}(p²) = χ(p)(p² − 1) + p·λ^{(1)}(f,p)·λ^{(1)}(g,p)
//! * λ₂^{(2)}(p²) = χ(p)
//!
//! in the unitary normalization, with values in the compositum of the two
//! coefficient fields.

use crate::charkit::{self, DirichletCharacter};
use crate::newforms::NewformRecord;
use crate::nfield::{
    AlgebraicNumber, Compositum, CycAction, FieldError, GaloisElement, NumberField,
    UndefinedAction,
};
use crate::rat::{prime_power, qi};
use crate::ring::{Ring, SqrtExt};
use crate::satake::{
    embed_pair, gl2_euler_factor, gl2_satake_from_eigen, sqrt_p_scalar, ExactScalar, SatakeGl2,
};
use num::rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error("lifting conditions fail: {0:?}")]
    ConditionFailure(Box<ConditionReport>),
    #[error("cannot decide whether the forms are multiples from the stored data")]
    InsufficientData,
    #[error("character takes irrational values; lift arithmetic needs a real character")]
    UnsupportedCharacter,
    #[error("coefficient field problem: {0}")]
    Field(#[from] FieldError),
    #[error("galois action problem: {0}")]
    Galois(#[from] UndefinedAction),
}

/// Outcome of the four lifting conditions.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// (i) the two eigenvalue systems are not multiples of each other
    pub not_multiples: bool,
    /// (ii) the associated primitive characters are equal
    pub same_primitive_character: bool,
    /// (iii) one weight equals 2, the other is an even integer ≥ 2
    pub weight_shape: bool,
    /// (iv) primes where both local components are discrete series
    pub common_discrete_series: Vec<u64>,
}

impl ConditionReport {
    pub fn pass(&self) -> bool {
        self.not_multiples
            && self.same_primitive_character
            && self.weight_shape
            && !self.common_discrete_series.is_empty()
    }
}

/// The eigenvalue-system avatar of a Yoshida lift.
#[derive(Clone, Debug)]
pub struct YoshidaLiftData {
    pub f_label: String,
    pub g_label: String,
    /// k/2 + 1 for f of weight k (g has weight 2)
    pub siegel_weight: u32,
    /// the common primitive character
    pub character: DirichletCharacter,
    /// common field containing both coefficient fields
    pub compositum: Arc<NumberField>,
    /// p ↦ (λ^{(2)}(p), λ₁^{(2)}(p²), λ₂^{(2)}(p²))
    pub eigen: BTreeMap<u64, (AlgebraicNumber, AlgebraicNumber, AlgebraicNumber)>,
    /// primes where both forms are discrete series
    pub t_set: Vec<u64>,
    pub lift_count: u64,
}

/// χ(−1) = +1, the parity gate every lift character must satisfy.
pub fn parity_check(chi: &DirichletCharacter) -> bool {
    charkit::parity(chi) == 1
}

/// Evaluate the four lifting conditions on a pair of records.
pub fn check_conditions(
    f: &NewformRecord,
    g: &NewformRecord,
) -> Result<ConditionReport, LiftError> {
    // (i): weights differing or an eigenvalue disagreement decide "not
    // multiples"; identical records decide "multiples"; otherwise the labels
    // decide, and agreement everywhere under a shared label is undecidable
    let not_multiples = if f.weight != g.weight {
        true
    } else if eigenvalues_differ_somewhere(f, g)? {
        true
    } else if f.label == g.label {
        if f.ap == g.ap && f.level == g.level {
            false
        } else {
            return Err(LiftError::InsufficientData);
        }
    } else {
        true
    };
    let chi_f = charkit::primitive_character(&f.character);
    let chi_g = charkit::primitive_character(&g.character);
    let same_primitive_character = chi_f == chi_g;
    let (k1, k2) = (f.weight.max(g.weight), f.weight.min(g.weight));
    let weight_shape = k2 == 2 && k1 >= 2 && k1 % 2 == 0;
    let mut common_discrete_series = vec![];
    for p in f.local_types.keys().chain(g.local_types.keys()) {
        if common_discrete_series.contains(p) {
            continue;
        }
        let df = f.local_type(*p).map(|t| t.is_discrete_series());
        let dg = g.local_type(*p).map(|t| t.is_discrete_series());
        if df == Some(true) && dg == Some(true) {
            common_discrete_series.push(*p);
        }
    }
    common_discrete_series.sort_unstable();
    Ok(ConditionReport {
        not_multiples,
        same_primitive_character,
        weight_shape,
        common_discrete_series,
    })
}

fn eigenvalues_differ_somewhere(f: &NewformRecord, g: &NewformRecord) -> Result<bool, LiftError> {
    let comp = Compositum::of(&[&f.coeff_field, &g.coeff_field])?;
    for (p, af) in &f.ap {
        if let Some(ag) = g.ap.get(p) {
            if comp.promote(af)? != comp.promote(ag)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// χ(p) as a rational scalar; the lift arithmetic works over the coefficient
/// compositum and needs the character to be real-valued there.
fn chi_value(chi: &DirichletCharacter, p: u64) -> Result<BigRational, LiftError> {
    chi.eval(p)
        .as_rational()
        .ok_or(LiftError::UnsupportedCharacter)
}

/// Build the lift's eigenvalue system over every good prime both records
/// store, together with T and the packet count 2^{#T−1}.
pub fn build_lift(f: &NewformRecord, g: &NewformRecord) -> Result<YoshidaLiftData, LiftError> {
    let report = check_conditions(f, g)?;
    if !report.pass() {
        return Err(LiftError::ConditionFailure(Box::new(report)));
    }
    // orient the pair: f carries the even weight 2k, g the weight 2
    let (f, g) = if f.weight >= g.weight { (f, g) } else { (g, f) };
    let chi = charkit::primitive_character(&f.character);
    debug_assert!(parity_check(&chi), "lift character is even");
    let comp = Compositum::of(&[&f.coeff_field, &g.coeff_field])?;
    let mut eigen = BTreeMap::new();
    let pmax = f.max_prime().min(g.max_prime());
    for (&p, _) in f.ap.range(..=pmax) {
        if f.level % p == 0 || g.level % p == 0 || !g.ap.contains_key(&p) {
            continue;
        }
        let lf = comp.promote(&f.unitary_eigenvalue(p).expect("good prime"))?;
        let lg = comp.promote(&g.unitary_eigenvalue(p).expect("good prime"))?;
        let chi_p = AlgebraicNumber::from_rat(&comp.field, chi_value(&chi, p)?);
        let p_rat = AlgebraicNumber::from_rat(&comp.field, qi(p as i64));
        let p2_minus_1 =
            AlgebraicNumber::from_rat(&comp.field, prime_power(p, 2) - BigRational::from_integer(1.into()));
        let lam = p_rat.mul(&lf.add(&lg));
        let lam1 = chi_p.mul(&p2_minus_1).add(&p_rat.mul(&lf).mul(&lg));
        let lam2 = chi_p;
        eigen.insert(p, (lam, lam1, lam2));
    }
    let t_set = report.common_discrete_series.clone();
    let lift_count = 1u64 << (t_set.len() as u32 - 1);
    Ok(YoshidaLiftData {
        f_label: f.label.clone(),
        g_label: g.label.clone(),
        siegel_weight: f.weight / 2 + 1,
        character: chi,
        compositum: comp.field.clone(),
        eigen,
        t_set,
        lift_count,
    })
}

/// GL(2) Satake parameters of a record at a good prime, over the compositum.
fn satake_at(
    rec: &NewformRecord,
    comp: &Compositum,
    chi: &DirichletCharacter,
    p: u64,
) -> Result<SatakeGl2<ExactScalar>, LiftError> {
    let lam = comp.promote(&rec.unitary_eigenvalue(p).expect("good prime"))?;
    let om = AlgebraicNumber::from_rat(&comp.field, chi_value(chi, p)?);
    let sqrt_p = sqrt_p_scalar(&comp.field, p);
    gl2_satake_from_eigen(
        &SqrtExt::from_even(lam, p),
        &SqrtExt::from_even(om, p),
        p,
        &sqrt_p,
        true,
    )
    .map_err(|_| LiftError::UnsupportedCharacter)
}

/// Local check at p: the degree-4 spin factor of the embedded pair equals
/// the product of the two degree-2 factors, and the embedded Satake
/// parameters reproduce the lift's (λ^{(2)}, λ₁^{(2)}, λ₂^{(2)}). The lift
/// data is rebuilt from the records; a false means an implementation bug.
pub fn spin_factorization_check(
    f: &NewformRecord,
    g: &NewformRecord,
    p: u64,
) -> Result<bool, LiftError> {
    let lift = build_lift(f, g)?;
    spin_factorization_check_against(f, g, p, &lift)
}

/// The same local check against externally supplied lift data, so tampered
/// eigen systems are detected.
pub fn spin_factorization_check_against(
    f: &NewformRecord,
    g: &NewformRecord,
    p: u64,
    lift: &YoshidaLiftData,
) -> Result<bool, LiftError> {
    let (f, g) = if f.weight >= g.weight { (f, g) } else { (g, f) };
    let comp = Compositum::of(&[&f.coeff_field, &g.coeff_field])?;
    let chi = charkit::primitive_character(&f.character);
    let sf = satake_at(f, &comp, &chi, p)?;
    let sg = satake_at(g, &comp, &chi, p)?;
    let emb = embed_pair(&sf, &sg).map_err(|_| LiftError::UnsupportedCharacter)?;
    let spin = emb.spin_factor();
    let prod = gl2_euler_factor(&sf).mul(&gl2_euler_factor(&sg));
    if spin != prod {
        return Ok(false);
    }
    let sqrt_p = sqrt_p_scalar(&comp.field, p);
    let eig = emb.eigen(&sqrt_p);
    let Some((lam, lam1, lam2)) = lift.eigen.get(&p) else {
        return Ok(false);
    };
    let expect_lam = SqrtExt::from_even(lam.clone(), p);
    let expect_lam1 = SqrtExt::from_even(lam1.clone(), p);
    let expect_lam2 = SqrtExt::from_even(lam2.clone(), p);
    Ok(eig.lambda == expect_lam
        && eig.lambda1.as_ref() == Some(&expect_lam1)
        && eig.lambda2 == expect_lam2)
}

/// True iff the candidate matches the lift's (λ^{(2)}(p), λ₁^{(2)}(p²)) at
/// every supplied prime. "Almost all primes" in the membership lemma is
/// modelled as "all primes supplied by the caller".
pub fn weak_membership(
    candidate: &BTreeMap<u64, (AlgebraicNumber, AlgebraicNumber)>,
    f: &NewformRecord,
    g: &NewformRecord,
    prime_set: &[u64],
) -> Result<bool, LiftError> {
    let lift = build_lift(f, g)?;
    for p in prime_set {
        let Some((lam, lam1, _)) = lift.eigen.get(p) else {
            return Ok(false);
        };
        let Some((clam, clam1)) = candidate.get(p) else {
            return Ok(false);
        };
        if clam != lam || clam1 != lam1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conjugate a lift by a Galois element defined on the compositum: the
/// eigen map entrywise, the character through the cyclotomic action. Equals
/// build_lift of the conjugated pair.
pub fn conjugate_lift(
    lift: &YoshidaLiftData,
    sigma: &GaloisElement,
) -> Result<YoshidaLiftData, UndefinedAction> {
    let mut eigen = BTreeMap::new();
    for (p, (a, b, c)) in &lift.eigen {
        eigen.insert(*p, (sigma.apply(a)?, sigma.apply(b)?, sigma.apply(c)?));
    }
    let character = match &sigma.cyc {
        CycAction::Identity => lift.character.clone(),
        CycAction::Conjugation => charkit::conjugate_bar(&lift.character),
        CycAction::Exponent { a, n } => {
            let ord = lift.character.order().max(1);
            assert!(n % ord == 0, "cyclotomic action undefined on character");
            charkit::conjugate_character(&lift.character, a % ord)
        }
    };
    Ok(YoshidaLiftData {
        f_label: format!("{}^{}", lift.f_label, sigma.name),
        g_label: format!("{}^{}", lift.g_label, sigma.name),
        siegel_weight: lift.siegel_weight,
        character,
        compositum: lift.compositum.clone(),
        eigen,
        t_set: lift.t_set.clone(),
        lift_count: lift.lift_count,
    })
}

// ---------------------------------------------------------------------------
// serialization of lift data
// ---------------------------------------------------------------------------

/// JSON form of a lift: eigen map with exact field-element encoding.
pub fn lift_to_json(lift: &YoshidaLiftData) -> serde_json::Value {
    let coords = |x: &AlgebraicNumber| -> Vec<String> {
        x.coords.iter().map(crate::rat::rational_string).collect()
    };
    serde_json::json!({
        "f": lift.f_label,
        "g": lift.g_label,
        "siegel_weight": lift.siegel_weight,
        "character": lift.character.to_spec(),
        "field_poly": lift.compositum.poly.iter().map(|c| i64::try_from(c).expect("small poly")).collect::<Vec<i64>>(),
        "t_set": lift.t_set,
        "lift_count": lift.lift_count,
        "eigen": lift.eigen.iter().map(|(p, (a, b, c))| {
            serde_json::json!({"p": p, "lambda": coords(a), "lambda1": coords(b), "lambda2": coords(c)})
        }).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newforms::{delta_record, level11_record, level23_pair, LocalType, Provenance};
    use crate::rat::q;

    /// Synthetic record with chosen eigenvalues, trivial character.
    fn synthetic(
        label: &str,
        weight: u32,
        level: u64,
        field: &Arc<NumberField>,
        ap: Vec<(u64, AlgebraicNumber)>,
        steinberg_at: &[u64],
    ) -> NewformRecord {
        let mut local_types = BTreeMap::new();
        for p in steinberg_at {
            local_types.insert(*p, LocalType::Steinberg);
        }
        NewformRecord {
            label: label.into(),
            weight,
            level,
            character: DirichletCharacter::principal(level),
            coeff_field: field.clone(),
            ap: ap.into_iter().collect(),
            local_types,
            provenance: Provenance::Ingested,
        }
    }

    #[test]
    fn conditions_on_delta_and_11a() {
        let mut f = delta_record(50);
        // synthetic discrete-series tag at 11 to make the pair liftable
        f.level = 11;
        f.local_types.insert(11, LocalType::Steinberg);
        f.ap.remove(&11);
        let g = level11_record(50);
        let rep = check_conditions(&f, &g).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert_eq!(rep.common_discrete_series, vec![11]);
        // same record fails (i)
        let rep2 = check_conditions(&g, &g).unwrap();
        assert!(!rep2.not_multiples);
        // odd weight fails (iii)
        let mut f11 = f.clone();
        f11.weight = 11;
        let rep3 = check_conditions(&f11, &g).unwrap();
        assert!(!rep3.weight_shape);
    }

    #[test]
    fn lift_eigenvalues_delta_11a() {
        let mut f = delta_record(100);
        f.level = 11;
        f.local_types.insert(11, LocalType::Steinberg);
        f.ap.remove(&11);
        let g = level11_record(100);
        let lift = build_lift(&f, &g).unwrap();
        assert_eq!(lift.siegel_weight, 7);
        assert_eq!(lift.lift_count, 1);
        // λ^{(2)}(2) = 2(−24/32 + (−2)) = −11/2
        let (lam, lam1, lam2) = lift.eigen.get(&2).unwrap();
        assert_eq!(lam.as_rational().unwrap(), q(-11, 2));
        // λ₁^{(2)}(4) = 1·(4−1) + 2·(−3/4)(−2) = 3 + 3 = 6
        assert_eq!(lam1.as_rational().unwrap(), q(6, 1));
        assert_eq!(lam2.as_rational().unwrap(), q(1, 1));
    }

    #[test]
    fn zero_eigenvalue_plugin() {
        // λ_f = λ_g = 0, χ(p) = 1 at p = 3 → (0, 8, 1)
        let field = NumberField::rationals();
        let z = AlgebraicNumber::zero(&field);
        let f = synthetic("zf", 2, 11, &field, vec![(3, z.clone()), (5, z.clone())], &[11]);
        let g = synthetic("zg", 2, 11, &field, vec![(3, z.clone()), (5, AlgebraicNumber::one(&field))], &[11]);
        let lift = build_lift(&f, &g).unwrap();
        let (lam, lam1, lam2) = lift.eigen.get(&3).unwrap();
        assert!(lam.is_zero());
        assert_eq!(lam1.as_rational().unwrap(), q(8, 1));
        assert_eq!(lam2.as_rational().unwrap(), q(1, 1));
    }

    #[test]
    fn lift_counts() {
        let field = NumberField::rationals();
        let one = AlgebraicNumber::one(&field);
        let mk = |label: &str, weight: u32, level: u64, st: &[u64]| {
            synthetic(
                label,
                weight,
                level,
                &field,
                vec![(101, one.clone()), (103, one.clone().neg())],
                st,
            )
        };
        // #T = 1 → 1; #T = 2 → 2; #T = 3 → 4
        let f1 = mk("f1", 4, 6, &[2]);
        let g1 = mk("g1", 2, 6, &[2]);
        // different eigenvalues so (i) passes
        let mut g1 = g1;
        g1.ap.insert(101, one.neg());
        assert_eq!(build_lift(&f1, &g1).unwrap().lift_count, 1);
        let f2 = mk("f2", 4, 6, &[2, 3]);
        let mut g2 = mk("g2", 2, 6, &[2, 3]);
        g2.ap.insert(101, one.neg());
        assert_eq!(build_lift(&f2, &g2).unwrap().lift_count, 2);
        let f3 = mk("f3", 4, 30, &[2, 3, 5]);
        let mut g3 = mk("g3", 2, 30, &[2, 3, 5]);
        g3.ap.insert(101, one.neg());
        assert_eq!(build_lift(&f3, &g3).unwrap().lift_count, 4);
    }

    #[test]
    fn spin_check_delta_11a() {
        let mut f = delta_record(60);
        f.level = 11;
        f.local_types.insert(11, LocalType::Steinberg);
        f.ap.remove(&11);
        let g = level11_record(60);
        for p in [2u64, 3, 5, 7, 13] {
            assert!(spin_factorization_check(&f, &g, p).unwrap(), "p = {p}");
        }
        // a corrupted eigenvalue no longer reproduces the stored lift data
        let lift = build_lift(&f, &g).unwrap();
        let mut bad = f.clone();
        bad.ap.insert(3, AlgebraicNumber::one(&bad.coeff_field));
        assert!(!spin_factorization_check_against(&bad, &g, 3, &lift).unwrap());
    }

    #[test]
    fn weak_membership_examples() {
        let mut f = delta_record(60);
        f.level = 11;
        f.local_types.insert(11, LocalType::Steinberg);
        f.ap.remove(&11);
        let g = level11_record(60);
        let lift = build_lift(&f, &g).unwrap();
        let primes: Vec<u64> = lift.eigen.keys().copied().collect();
        let own: BTreeMap<u64, _> = lift
            .eigen
            .iter()
            .map(|(p, (a, b, _))| (*p, (a.clone(), b.clone())))
            .collect();
        assert!(weak_membership(&own, &f, &g, &primes).unwrap());
        let mut altered = own.clone();
        let (p0, (a0, b0)) = altered.iter().next().map(|(p, v)| (*p, v.clone())).unwrap();
        altered.insert(p0, (a0.add(&AlgebraicNumber::one(&lift.compositum)), b0));
        assert!(!weak_membership(&altered, &f, &g, &primes).unwrap());
    }

    #[test]
    fn galois_square_q5() {
        // Q(√5) pair: lift of (synthetic weight-4 form over Q(√5), 23a)
        let (h23, _) = level23_pair(60);
        let field = h23.coeff_field.clone();
        let theta = AlgebraicNumber::theta(&field);
        // synthetic eigenvalues a_p = θ − 1 (within the weight-4 bound)
        let mut ap = vec![];
        for p in crate::newforms::primes_upto(60) {
            if p != 23 {
                ap.push((p, theta.sub(&AlgebraicNumber::one(&field))));
            }
        }
        let f = synthetic("syn4", 4, 23, &field, ap, &[23]);
        let lift = build_lift(&f, &h23).unwrap();
        let comp = Compositum::of(&[&f.coeff_field, &h23.coeff_field]).unwrap();
        let autos = comp.automorphisms();
        for sigma in &autos {
            let lhs = conjugate_lift(&lift, sigma).unwrap();
            let fs = crate::newforms::conjugate_newform(&f, sigma).unwrap();
            let gs = crate::newforms::conjugate_newform(&h23, sigma).unwrap();
            let rhs = build_lift(&fs, &gs).unwrap();
            assert_eq!(lhs.eigen, rhs.eigen, "sigma = {}", sigma.name);
            assert_eq!(lhs.t_set, rhs.t_set);
            assert_eq!(lhs.lift_count, rhs.lift_count);
        }
    }

    #[test]
    fn parity_gate() {
        assert!(parity_check(&DirichletCharacter::principal(1)));
        assert!(parity_check(&DirichletCharacter::legendre(5)));
        assert!(!parity_check(&DirichletCharacter::odd_mod4()));
    }
}
