//! Constructors for the L-series specifications in scope: the degree-4
//! Rankin–Selberg convolution of two newforms, the degree-3 symmetric
//! square, and a degenerate degree-2 test harness.

use super::lseries::{LSeriesSpec, RootNumber};
use super::LnumError;
use crate::charkit;
use crate::newforms::{primes_upto, LocalType, NewformRecord};
use crate::nfield::{AlgebraicNumber, Compositum, NumberField, Structure};
use crate::rat::{q, qi};
use crate::ring::{Ring, SqrtExt};
use crate::satake::{embed_pair, gl2_satake_from_eigen, sqrt_p_scalar, ExactScalar};
use num::rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

fn is_totally_real(field: &Arc<NumberField>) -> bool {
    match &field.structure {
        Structure::MultiQuad(mq) => mq.gens.iter().all(|d| *d > 0),
        Structure::Opaque => false,
    }
}

/// The even (integral-grade) part of a graded scalar, asserted exact.
fn even_part(x: &ExactScalar) -> AlgebraicNumber {
    x.expect_even().clone()
}

/// GL(2) Satake data of a record at a good prime over a compositum.
fn satake_in(
    rec: &NewformRecord,
    comp: &Compositum,
    p: u64,
) -> Result<crate::satake::SatakeGl2<ExactScalar>, LnumError> {
    let lam = comp
        .promote(&rec.unitary_eigenvalue(p).expect("good prime"))
        .map_err(LnumError::Field)?;
    let chi_p = charkit::primitive_character(&rec.character)
        .eval(p)
        .as_rational()
        .ok_or_else(|| LnumError::Spec("character values must be real".into()))?;
    let om = AlgebraicNumber::from_rat(&comp.field, chi_p);
    let sqrt_p = sqrt_p_scalar(&comp.field, p);
    gl2_satake_from_eigen(
        &SqrtExt::from_even(lam, p),
        &SqrtExt::from_even(om, p),
        p,
        &sqrt_p,
        true,
    )
    .map_err(|e| LnumError::Spec(e.to_string()))
}

/// Degree-4 Rankin–Selberg spec for a pair of newforms in the analytic
/// normalization, with Euler factors for all p ≤ prime_bound.
///
/// Supported ramification: at each bad prime exactly one of the forms is
/// ramified, with Steinberg local type; the local factor there is the
/// degree-2 polynomial (1 − α u_p X)(1 − β u_p X) with u_p the unitary
/// Steinberg parameter of the ramified side, and the conductor picks up p².
pub fn rankin_selberg_spec(
    f: &NewformRecord,
    h: &NewformRecord,
    prime_bound: u64,
) -> Result<LSeriesSpec, LnumError> {
    let comp = Compositum::of(&[&f.coeff_field, &h.coeff_field]).map_err(LnumError::Field)?;
    let (k, l) = (f.weight as i64, h.weight as i64);
    if f.max_prime() < prime_bound || h.max_prime() < prime_bound {
        return Err(LnumError::CoefficientRange {
            have: f.max_prime().min(h.max_prime()),
            need: prime_bound as usize,
        });
    }
    let mut factors = BTreeMap::new();
    let mut conductor = 1u64;
    for p in primes_upto(prime_bound) {
        let f_bad = f.level % p == 0;
        let h_bad = h.level % p == 0;
        match (f_bad, h_bad) {
            (false, false) => {
                let sf = satake_in(f, &comp, p)?;
                let sh = satake_in(h, &comp, p)?;
                let emb = embed_pair(&sf, &sh).map_err(|e| LnumError::Spec(e.to_string()))?;
                let quartic = emb.spin_factor();
                factors.insert(p, quartic.coeffs.iter().map(even_part).collect());
            }
            (true, true) => {
                return Err(LnumError::UnsupportedRamification(format!(
                    "both forms ramified at {p}"
                )));
            }
            _ => {
                let (ram, good) = if f_bad { (f, h) } else { (h, f) };
                let lt = ram.local_type(p);
                if lt != Some(LocalType::Steinberg) {
                    return Err(LnumError::UnsupportedRamification(format!(
                        "{} at p = {p} has local type {lt:?}; only steinberg is supported",
                        ram.label
                    )));
                }
                if ram.level % (p * p) == 0 {
                    return Err(LnumError::UnsupportedRamification(format!(
                        "level of {} is not squarefree at {p}",
                        ram.label
                    )));
                }
                // u_p = a_p(ram)·p^{(2−l')/2}·p^{−1/2}, a graded scalar of
                // odd degree; a_p = ±p^{(l'−2)/2} for a Steinberg prime
                let ap = comp
                    .promote(ram.ap.get(&p).ok_or_else(|| {
                        LnumError::Spec(format!("{} is missing a_{p}", ram.label))
                    })?)
                    .map_err(LnumError::Field)?;
                let lw = ram.weight as i64;
                let u = SqrtExt::monomial(ap, 2 - lw - 1, p);
                let sg = satake_in(good, &comp, p)?;
                // (1 − α u X)(1 − β u X) = 1 − s·u X + n·u² X²
                let c1 = sg.s.mul(&u).neg();
                let c2 = sg.n.mul(&u).mul(&u);
                let one = AlgebraicNumber::one(&comp.field);
                factors.insert(p, vec![one, even_part(&c1), even_part(&c2)]);
                conductor *= p * p;
            }
        }
    }
    let spec = LSeriesSpec {
        label: format!("RS({}x{})", f.label, h.label),
        degree: 4,
        conductor,
        gamma_c: vec![q(k + l - 2, 2), q(k - l, 2)],
        gamma_r: vec![],
        field: comp.field.clone(),
        factors,
        self_dual: charkit::conductor(&f.character) == 1
            && charkit::conductor(&h.character) == 1
            && is_totally_real(&f.coeff_field)
            && is_totally_real(&h.coeff_field),
        root_number: RootNumber::Fit,
    };
    spec.validate()?;
    Ok(spec)
}

/// Degree-3 symmetric-square spec of a newform with trivial character and
/// squarefree Steinberg level, in the analytic normalization:
/// gamma data Γ_R(s+1)·Γ_C(s+k−1), conductor N.
pub fn sym2_spec(rec: &NewformRecord, prime_bound: u64) -> Result<LSeriesSpec, LnumError> {
    if charkit::conductor(&rec.character) != 1 {
        return Err(LnumError::UnsupportedRamification(
            "symmetric square needs trivial character".into(),
        ));
    }
    if rec.max_prime() < prime_bound {
        return Err(LnumError::CoefficientRange {
            have: rec.max_prime(),
            need: prime_bound as usize,
        });
    }
    let field = rec.coeff_field.clone();
    let k = rec.weight as i64;
    let mut factors = BTreeMap::new();
    for p in primes_upto(prime_bound) {
        let one = AlgebraicNumber::one(&field);
        if rec.level % p == 0 {
            if rec.local_type(p) != Some(LocalType::Steinberg) {
                return Err(LnumError::UnsupportedRamification(format!(
                    "local type at {p} is not steinberg"
                )));
            }
            // L_p(s, sym² St) = (1 − p^{−s−1})^{−1}
            factors.insert(p, vec![one, AlgebraicNumber::from_rat(&field, q(-1, p as i64))]);
            continue;
        }
        // (1 − α²X)(1 − αβX)(1 − β²X) with s = α+β = a_p p^{(1−k)/2}, n = 1:
        // e₁ = s² − n, e₂ = n(s² − n), e₃ = n³
        let ap = rec.ap.get(&p).ok_or_else(|| {
            LnumError::Spec(format!("{} is missing a_{p}", rec.label))
        })?;
        let s2 = ap.mul(ap).scale(&crate::rat::prime_power(p, 1 - k));
        let e1 = s2.sub(&one);
        factors.insert(
            p,
            vec![one.clone(), e1.neg(), e1.clone(), one.neg()],
        );
    }
    let spec = LSeriesSpec {
        label: format!("Sym2({})", rec.label),
        degree: 3,
        conductor: rec.level,
        gamma_c: vec![qi(k - 1)],
        gamma_r: vec![qi(1)],
        field,
        factors,
        self_dual: true,
        root_number: RootNumber::Fit,
    };
    spec.validate()?;
    Ok(spec)
}

/// Degenerate degree-2 harness whose Dirichlet coefficients are the divisor
/// function (local factors (1 − X)²). The huge conductor pushes both the
/// mirror term and the pole contributions far below any tested tolerance in
/// the absolutely convergent range, so `evaluate` must reproduce direct
/// summation there.
pub fn zeta_square_harness(prime_bound: u64) -> LSeriesSpec {
    let field = NumberField::rationals();
    let one = AlgebraicNumber::one(&field);
    let mut factors = BTreeMap::new();
    for p in primes_upto(prime_bound) {
        factors.insert(
            p,
            vec![
                one.clone(),
                AlgebraicNumber::from_rat(&field, qi(-2)),
                one.clone(),
            ],
        );
    }
    LSeriesSpec {
        label: "zeta-square-harness".into(),
        degree: 2,
        conductor: 100_000_000,
        gamma_c: vec![q(1, 2)],
        gamma_r: vec![],
        field,
        factors,
        self_dual: true,
        root_number: RootNumber::Fixed(1.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newforms::{delta_record, level11_record};
    use num::Zero;

    #[test]
    fn rs_spec_shape_delta_11a() {
        let f = delta_record(120);
        let h = level11_record(120);
        let spec = rankin_selberg_spec(&f, &h, 100).unwrap();
        assert_eq!(spec.degree, 4);
        assert_eq!(spec.conductor, 121);
        assert_eq!(spec.gamma_c, vec![qi(6), qi(5)]);
        assert!(spec.self_dual);
        // a_p = λ_f(p)·λ_h(p) for good p (linear coefficient of the quartic)
        let a = spec.dirichlet_coefficients(30).unwrap();
        let lam_f = f.unitary_eigenvalue(2).unwrap().as_rational().unwrap();
        let lam_h = h.unitary_eigenvalue(2).unwrap().as_rational().unwrap();
        assert_eq!(a[2].as_rational().unwrap(), lam_f * lam_h);
        // multiplicativity on coprime pairs, exact
        for (m, n) in [(2usize, 3usize), (3, 5), (4, 3), (2, 11), (6, 5)] {
            assert_eq!(a[m * n], a[m].mul(&a[n]), "({m},{n})");
        }
        // steinberg factor at 11: degree 2 with u = a_11/√11
        let f11 = &spec.factors[&11];
        assert_eq!(f11.len(), 3);
        // a_11(h) = 1 for the level-11 form, so c1 = −λ_f(11)/11... times ±1
        assert!(!f11[1].is_zero());
    }

    #[test]
    fn sym2_spec_shape() {
        let d = delta_record(60);
        let spec = sym2_spec(&d, 50).unwrap();
        assert_eq!(spec.degree, 3);
        assert_eq!(spec.conductor, 1);
        // b_2 = λ̃² − 1 with λ̃ = τ(2)/2^{11/2}: b_2 = 576/2048 − 1 = −23/32
        let a = spec.dirichlet_coefficients(10).unwrap();
        assert_eq!(a[2].as_rational().unwrap(), q(-23, 32));
        let h = level11_record(60);
        let spec_h = sym2_spec(&h, 50).unwrap();
        assert_eq!(spec_h.conductor, 11);
        let ah = spec_h.dirichlet_coefficients(12).unwrap();
        // steinberg factor: b_{11} = 1/11
        assert_eq!(ah[11].as_rational().unwrap(), q(1, 11));
    }

    #[test]
    fn harness_coefficients_are_divisor_counts() {
        let spec = zeta_square_harness(100);
        let a = spec.dirichlet_coefficients(60).unwrap();
        let d = |n: u64| (1..=n).filter(|k| n % k == 0).count() as i64;
        for n in 1..=60usize {
            assert_eq!(a[n].as_rational().unwrap(), qi(d(n as u64)));
        }
        spec.check_tempered_bound(60, 96).unwrap();
    }
}
