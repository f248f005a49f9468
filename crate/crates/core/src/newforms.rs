//! Classical newform data: eigenvalue records, the eta-product and
//! elliptic-curve oracles that generate desk-scale ground truth, Hecke
//! recursion validation, Galois conjugation and normalization conversion.
//!
//! Records store the arithmetic normalization (classical T(p) eigenvalues
//! a_p); the unitary normalization is derived on demand for even weight.
//! Two independent oracles provide coefficients: dense power-series
//! expansion of eta products, and point counting on elliptic curves. Their
//! agreement on the level-11 form is one of the crate's acceptance gates.

use crate::charkit::{self, CharacterSpec, DirichletCharacter};
use crate::mp;
use crate::nfield::{AlgebraicNumber, CycAction, GaloisElement, NumberField, UndefinedAction};
use crate::rat::{parse_rational, prime_power, rational_string};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("record {label}: invariant violated: {rule}")]
    Invariant { label: String, rule: String },
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("bad reduction: discriminant vanishes mod {0}")]
    BadReduction(u64),
    #[error("eta product has non-integral weight or prefactor")]
    BadEtaSpec,
    #[error("truncation length {0} exceeds the supported bound")]
    TooLong(usize),
}

#[derive(Debug, thiserror::Error)]
pub enum EigenvalueError {
    #[error("weight {0} is odd; unitary normalization is out of scope")]
    OddWeight(u32),
    #[error("prime {0} divides the level")]
    RamifiedPrime(u64),
    #[error("no stored eigenvalue at prime {0}")]
    MissingPrime(u64),
}

/// Local representation type at a ramified prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalType {
    Steinberg,
    RamifiedPrincipal,
    Supercuspidal,
}

impl LocalType {
    pub fn is_discrete_series(self) -> bool {
        matches!(self, LocalType::Steinberg | LocalType::Supercuspidal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Ingested,
    EtaOracle,
    EllipticOracle,
}

/// A classical holomorphic newform with exact Hecke eigenvalues.
#[derive(Clone, Debug)]
pub struct NewformRecord {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub character: DirichletCharacter,
    pub coeff_field: Arc<NumberField>,
    /// arithmetic normalization: classical T(p) eigenvalues
    pub ap: BTreeMap<u64, AlgebraicNumber>,
    pub local_types: BTreeMap<u64, LocalType>,
    pub provenance: Provenance,
}

impl NewformRecord {
    /// Largest prime with a stored eigenvalue.
    pub fn max_prime(&self) -> u64 {
        self.ap.keys().next_back().copied().unwrap_or(0)
    }

    /// λ^{(1)}(p) = a_p · p^{(2−k)/2}, the unitary-normalization eigenvalue.
    pub fn unitary_eigenvalue(&self, p: u64) -> Result<AlgebraicNumber, EigenvalueError> {
        if self.weight % 2 == 1 {
            return Err(EigenvalueError::OddWeight(self.weight));
        }
        if self.level % p == 0 {
            return Err(EigenvalueError::RamifiedPrime(p));
        }
        let ap = self.ap.get(&p).ok_or(EigenvalueError::MissingPrime(p))?;
        let e = (2 - self.weight as i64) / 2;
        Ok(ap.scale(&prime_power(p, e)))
    }

    /// The local type at p | N, defaulting squarefree-level primes with
    /// trivial character to Steinberg.
    pub fn local_type(&self, p: u64) -> Option<LocalType> {
        if self.level % p != 0 {
            return None;
        }
        if let Some(t) = self.local_types.get(&p) {
            return Some(*t);
        }
        let squarefree_at_p = self.level % (p * p) != 0;
        if squarefree_at_p && charkit::conductor(&self.character) == 1 {
            Some(LocalType::Steinberg)
        } else {
            None
        }
    }

    /// Validate the three record invariants: character parity matches the
    /// weight, temperedness in every embedding, conductor divides the level.
    pub fn validate(&self) -> Result<(), RecordError> {
        let parity = charkit::parity(&self.character);
        let want = if self.weight % 2 == 0 { 1 } else { -1 };
        if parity != want {
            return Err(RecordError::Invariant {
                label: self.label.clone(),
                rule: format!(
                    "parity: χ(−1) = {parity} but (−1)^k = {want} for weight {}",
                    self.weight
                ),
            });
        }
        let cond = charkit::conductor(&self.character);
        if self.level % cond != 0 {
            return Err(RecordError::Invariant {
                label: self.label.clone(),
                rule: format!("conductor {cond} does not divide level {}", self.level),
            });
        }
        // temperedness: |a_p| ≤ 2 p^{(k−1)/2} in every embedding
        let prec = mp::bits_for_digits(50);
        for (&p, ap) in &self.ap {
            if self.level % p == 0 {
                continue;
            }
            let bound = 2.0 * (p as f64).powf((self.weight as f64 - 1.0) / 2.0);
            for v in ap.embed_all(prec) {
                let m = v.abs().real().to_f64();
                if m > bound * (1.0 + 1e-12) {
                    return Err(RecordError::Invariant {
                        label: self.label.clone(),
                        rule: format!("temperedness: |a_{p}| = {m:.6e} exceeds 2p^((k-1)/2) = {bound:.6e}"),
                    });
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RecordJson {
    label: String,
    weight: u32,
    level: u64,
    character: CharacterSpec,
    field_poly: Vec<i64>,
    embedding: usize,
    ap: Vec<ApJson>,
    #[serde(default)]
    local_types: Vec<LocalTypeJson>,
}

#[derive(Serialize, Deserialize)]
struct ApJson {
    p: u64,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LocalTypeJson {
    p: u64,
    #[serde(rename = "type")]
    typ: LocalType,
}

/// Parse newform records from a JSON byte stream: either a single record
/// object or an array of them. Every record must pass the type invariants.
pub fn load_records(bytes: &[u8]) -> Result<Vec<NewformRecord>, RecordError> {
    let v: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| RecordError::Schema(e.to_string()))?;
    let arr = match v {
        serde_json::Value::Array(a) => a,
        obj => vec![obj],
    };
    let mut out = vec![];
    for item in arr {
        let rj: RecordJson =
            serde_json::from_value(item).map_err(|e| RecordError::Schema(e.to_string()))?;
        out.push(record_from_json(rj)?);
    }
    Ok(out)
}

fn record_from_json(rj: RecordJson) -> Result<NewformRecord, RecordError> {
    let character = DirichletCharacter::from_spec(&rj.character)
        .map_err(|e| RecordError::Schema(e.to_string()))?;
    let poly: Vec<BigInt> = rj.field_poly.iter().map(|&c| BigInt::from(c)).collect();
    let coeff_field = NumberField::from_poly(&format!("K[{}]", rj.label), poly, rj.embedding)
        .map_err(|e| RecordError::Schema(e.to_string()))?;
    let mut ap = BTreeMap::new();
    for a in &rj.ap {
        if !is_prime(a.p) {
            return Err(RecordError::Schema(format!("index {} is not prime", a.p)));
        }
        let coords: Result<Vec<BigRational>, String> =
            a.coeffs.iter().map(|s| parse_rational(s)).collect();
        let coords = coords.map_err(RecordError::Schema)?;
        if coords.len() > coeff_field.degree {
            return Err(RecordError::Schema(format!(
                "a_{} has {} coordinates in a degree-{} field",
                a.p,
                coords.len(),
                coeff_field.degree
            )));
        }
        ap.insert(a.p, AlgebraicNumber::new(coeff_field.clone(), coords));
    }
    let mut local_types = BTreeMap::new();
    for lt in &rj.local_types {
        if rj.level % lt.p != 0 {
            return Err(RecordError::Schema(format!(
                "local type given at good prime {}",
                lt.p
            )));
        }
        local_types.insert(lt.p, lt.typ);
    }
    let rec = NewformRecord {
        label: rj.label,
        weight: rj.weight,
        level: rj.level,
        character,
        coeff_field,
        ap,
        local_types,
        provenance: Provenance::Ingested,
    };
    rec.validate()?;
    Ok(rec)
}

/// Serialize a record in the exact interchange schema.
pub fn record_to_json(rec: &NewformRecord) -> serde_json::Value {
    let rj = RecordJson {
        label: rec.label.clone(),
        weight: rec.weight,
        level: rec.level,
        character: rec.character.to_spec(),
        field_poly: rec
            .coeff_field
            .poly
            .iter()
            .map(|c| i64::try_from(c).expect("small field polynomial"))
            .collect(),
        embedding: rec.coeff_field.embedding_index,
        ap: rec
            .ap
            .iter()
            .map(|(p, a)| ApJson {
                p: *p,
                coeffs: a.coords.iter().map(rational_string).collect(),
            })
            .collect(),
        local_types: rec
            .local_types
            .iter()
            .map(|(p, t)| LocalTypeJson { p: *p, typ: *t })
            .collect(),
    };
    serde_json::to_value(rj).unwrap()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in [2, n].
pub fn primes_upto(n: u64) -> Vec<u64> {
    let mut sieve = vec![true; (n + 1) as usize];
    let mut out = vec![];
    for p in 2..=n as usize {
        if sieve[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n as usize {
                sieve[m] = false;
                m += p;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// q-expansions
// ---------------------------------------------------------------------------

/// Exact q-expansion a_0 + a_1 q + … + a_M q^M with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub coeffs: Vec<BigRational>,
    pub eigenform: bool,
}

impl QExpansion {
    pub fn coefficient(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

// dense integer series helpers (i128 fast path)

fn series_mul(a: &[i128], b: &[i128], m: usize) -> Vec<i128> {
    let mut out = vec![0i128; m + 1];
    for (i, &x) in a.iter().enumerate().take(m + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(m + 1 - i) {
            if y == 0 {
                continue;
            }
            out[i + j] = out[i + j]
                .checked_add(x.checked_mul(y).expect("series coefficient overflow"))
                .expect("series coefficient overflow");
        }
    }
    out
}

/// Euler's pentagonal-number series E(q) = ∏(1 − q^n) through q^m.
fn euler_series(m: usize) -> Vec<i128> {
    let mut out = vec![0i128; m + 1];
    out[0] = 1;
    let mut k = 1i64;
    loop {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 > m && g2 > m {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if g1 <= m {
            out[g1] = sign;
        }
        if g2 <= m {
            out[g2] = sign;
        }
        k += 1;
    }
    out
}

/// E(q)³ = Σ (−1)^k (2k+1) q^{k(k+1)/2} through q^m.
fn euler_cubed(m: usize) -> Vec<i128> {
    let mut out = vec![0i128; m + 1];
    let mut k = 0i64;
    loop {
        let g = (k * (k + 1) / 2) as usize;
        if g > m {
            break;
        }
        out[g] = if k % 2 == 0 { (2 * k + 1) as i128 } else { -(2 * k + 1) as i128 };
        k += 1;
    }
    out
}

/// E(q)^e for e ≥ 1 (uses the cube shortcut when 3 | e).
fn euler_power(e: u32, m: usize) -> Vec<i128> {
    let (mut base, mut e) = if e % 3 == 0 {
        (euler_cubed(m), e / 3)
    } else {
        (euler_series(m), e)
    };
    let mut acc: Option<Vec<i128>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => series_mul(&a, &base, m),
            });
        }
        e >>= 1;
        if e > 0 {
            base = series_mul(&base, &base, m);
        }
    }
    acc.unwrap()
}

/// Multiplicative inverse of a series with constant term ±1.
fn series_inv(a: &[i128], m: usize) -> Vec<i128> {
    assert!(a[0] == 1 || a[0] == -1);
    let mut out = vec![0i128; m + 1];
    out[0] = a[0];
    for n in 1..=m {
        let mut s: i128 = 0;
        for k in 1..=n.min(a.len() - 1) {
            if a[k] != 0 {
                s = s
                    .checked_add(a[k].checked_mul(out[n - k]).expect("overflow"))
                    .expect("overflow");
            }
        }
        out[n] = -a[0] * s;
    }
    out
}

/// Dense q-expansion of the eta product ∏_d (q^{d/24} ∏_n (1 − q^{dn}))^{e_d}
/// through q^M. The total weight ½Σe_d and the q-power prefactor Σd·e_d/24
/// must be integers with a nonnegative prefactor.
pub fn eta_oracle(spec: &[(u64, i32)], m: usize) -> Result<QExpansion, OracleError> {
    if m > 100_000 {
        return Err(OracleError::TooLong(m));
    }
    let weight_x2: i64 = spec.iter().map(|&(_, e)| e as i64).sum();
    let pref24: i64 = spec.iter().map(|&(d, e)| d as i64 * e as i64).sum();
    if weight_x2 % 2 != 0 || pref24 % 24 != 0 || pref24 < 0 {
        return Err(OracleError::BadEtaSpec);
    }
    let prefactor = (pref24 / 24) as usize;
    if prefactor > m {
        return Ok(QExpansion {
            coeffs: vec![BigRational::zero(); m + 1],
            eigenform: false,
        });
    }
    let body_len = m - prefactor;
    let mut acc: Vec<i128> = vec![0; body_len + 1];
    acc[0] = 1;
    for &(d, e) in spec {
        if e == 0 {
            continue;
        }
        let base_len = body_len / d as usize;
        let pw = euler_power(e.unsigned_abs(), base_len);
        let pw = if e < 0 { series_inv(&pw, base_len) } else { pw };
        // inflate q ↦ q^d and multiply in
        let mut infl = vec![0i128; body_len + 1];
        for (i, &c) in pw.iter().enumerate() {
            if i * d as usize <= body_len {
                infl[i * d as usize] = c;
            }
        }
        acc = series_mul(&acc, &infl, body_len);
    }
    let mut coeffs = vec![BigRational::zero(); m + 1];
    for (i, &c) in acc.iter().enumerate() {
        if c != 0 {
            coeffs[i + prefactor] = BigRational::from_integer(BigInt::from(c));
        }
    }
    Ok(QExpansion {
        coeffs,
        eigenform: false,
    })
}

// ---------------------------------------------------------------------------
// elliptic-curve oracle
// ---------------------------------------------------------------------------

/// a_p = p + 1 − #E(F_p) by exhaustive point counting for the Weierstrass
/// curve y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆.
pub fn elliptic_oracle(coeffs: [i64; 5], p: u64) -> Result<i64, OracleError> {
    assert!(p <= 10_000 && is_prime(p), "prime out of oracle range");
    let [a1, a2, a3, a4, a6] = coeffs;
    // discriminant via the b-invariants
    let b2 = BigInt::from(a1) * a1 + 4 * BigInt::from(a2);
    let b4 = 2 * BigInt::from(a4) + BigInt::from(a1) * a3;
    let b6 = BigInt::from(a3) * a3 + 4 * BigInt::from(a6);
    let b8 = BigInt::from(a1) * a1 * a6 + 4 * BigInt::from(a2) * a6 - BigInt::from(a1) * a3 * a4
        + BigInt::from(a2) * a3 * a3
        - BigInt::from(a4) * a4;
    let disc = -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
    let disc_mod: BigInt = disc % BigInt::from(p);
    if disc_mod.is_zero() {
        return Err(OracleError::BadReduction(p));
    }
    let md = |x: i64| -> u64 { x.rem_euclid(p as i64) as u64 };
    let count = if p == 2 {
        let mut c = 1u64; // infinity
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = (y * y + md(a1) * x * y + md(a3) * y) % 2;
                let rhs = (x * x * x + md(a2) * x * x + md(a4) * x + md(a6)) % 2;
                if lhs == rhs {
                    c += 1;
                }
            }
        }
        c
    } else {
        // complete the square: (2y + a1x + a3)² = 4f(x) + (a1x + a3)²
        let mut sq = vec![false; p as usize];
        for t in 0..p {
            sq[(t * t % p) as usize] = true;
        }
        let mut c = 1u64;
        for x in 0..p {
            let f = (((x * x % p) * x % p) + md(a2) * x % p * x % p + md(a4) * x % p + md(a6)) % p;
            let l = (md(a1) * x + md(a3)) % p;
            let g = (4 * f % p + l * l % p) % p;
            if g == 0 {
                c += 1;
            } else if sq[g as usize] {
                c += 2;
            }
        }
        c
    };
    Ok(p as i64 + 1 - count as i64)
}

// ---------------------------------------------------------------------------
// Hecke recursion and eigenform extraction
// ---------------------------------------------------------------------------

/// χ(p) as an exact rational (real characters only), 0 on shared factors.
fn chi_rational(chi: &DirichletCharacter, p: u64) -> BigRational {
    chi.eval(p)
        .as_rational()
        .expect("recursion check requires a real-valued character")
}

/// True iff the expansion (a_1 = 1) satisfies the eigenform relations
/// a_{p^{r+1}} = a_p a_{p^r} − χ(p) p^{k−1} a_{p^{r−1}} and coprime
/// multiplicativity for every index ≤ bound.
pub fn hecke_recursion_check(
    q: &QExpansion,
    weight: u32,
    chi: &DirichletCharacter,
    bound: usize,
) -> bool {
    if q.coefficient(1) != BigRational::one() {
        return false;
    }
    let bound = bound.min(q.len().saturating_sub(1));
    // prime-power recursion
    for p in primes_upto(bound as u64) {
        let chi_p = chi_rational(chi, p);
        let pk = prime_power(p, weight as i64 - 1);
        let mut r = 1usize;
        loop {
            let idx = (p as usize).checked_pow(r as u32 + 1);
            let Some(idx) = idx else { break };
            if idx > bound {
                break;
            }
            let lhs = q.coefficient(idx);
            let rhs = q.coefficient(idx / p as usize) * q.coefficient(p as usize)
                - &chi_p * &pk * q.coefficient(idx / (p * p) as usize);
            if lhs != rhs {
                return false;
            }
            r += 1;
        }
    }
    // coprime multiplicativity
    for m in 2..=bound {
        for n in 2..=bound / m {
            if num::integer::gcd(m, n) == 1 && q.coefficient(m * n) != q.coefficient(m) * q.coefficient(n) {
                return false;
            }
        }
    }
    true
}

/// Conjugate a record by a Galois element (eigenvalues entrywise, character
/// through the cyclotomic action); weight and level are unchanged and the
/// invariants are re-validated.
pub fn conjugate_newform(
    rec: &NewformRecord,
    sigma: &GaloisElement,
) -> Result<NewformRecord, UndefinedAction> {
    let mut ap = BTreeMap::new();
    for (p, a) in &rec.ap {
        ap.insert(*p, sigma.apply(a)?);
    }
    let character = match &sigma.cyc {
        CycAction::Identity => rec.character.clone(),
        CycAction::Conjugation => charkit::conjugate_bar(&rec.character),
        CycAction::Exponent { a, n } => {
            let ord = rec.character.order().max(1);
            assert!(n % ord == 0, "cyclotomic action undefined on character");
            charkit::conjugate_character(&rec.character, a % ord)
        }
    };
    let out = NewformRecord {
        label: format!("{}^{}", rec.label, sigma.name),
        weight: rec.weight,
        level: rec.level,
        character,
        coeff_field: rec.coeff_field.clone(),
        ap,
        local_types: rec.local_types.clone(),
        provenance: rec.provenance,
    };
    out.validate().expect("conjugation preserves the invariants");
    Ok(out)
}

/// T_2 acting on a weight-k level-N q-expansion (2 ∤ N):
/// a_n(T₂f) = a_{2n}(f) + 2^{k−1} a_{n/2}(f).
fn hecke_t2(q: &QExpansion, weight: u32, m: usize) -> QExpansion {
    let two_k = prime_power(2, weight as i64 - 1);
    let mut coeffs = vec![BigRational::zero(); m + 1];
    for (n, c) in coeffs.iter_mut().enumerate().take(m + 1).skip(1) {
        let mut v = q.coefficient(2 * n);
        if n % 2 == 0 {
            v += &two_k * q.coefficient(n / 2);
        }
        *c = v;
    }
    QExpansion {
        coeffs,
        eigenform: false,
    }
}

/// The conjugate pair of weight-2 newforms of level 23, extracted from the
/// eta product η(z)²η(23z)² by diagonalizing T₂ on the 2-dimensional space
/// {P, T₂P}. Coefficients land in Q(√5) via θ = a₂ with θ² + θ − 1 = 0.
pub fn level23_pair(pmax: u64) -> (NewformRecord, NewformRecord) {
    let m = (2 * pmax as usize + 4).max(64);
    let p_series = eta_oracle(&[(1, 2), (23, 2)], 2 * m).expect("eta spec valid");
    let b1 = p_series;
    let b2 = hecke_t2(&b1, 2, m);
    let c = hecke_t2(&b2, 2, m.min(b2.len() - 1) / 1);
    // solve T₂B₂ = x·B₁ + y·B₂ from coefficients 1 and 2
    // (B₁ starts at q², B₂ has a₁ = 1)
    let y = c.coefficient(1) / b2.coefficient(1);
    let x = c.coefficient(2) - &y * b2.coefficient(2);
    // verify the relation on every available index
    for n in 1..=m / 2 {
        assert_eq!(
            c.coefficient(n),
            &x * b1.coefficient(n) + &y * b2.coefficient(n),
            "T2 is not 2-dimensional on the eta basis at index {n}"
        );
    }
    // char poly λ² − yλ − x; for level 23 this is λ² + λ − 1
    let poly = vec![
        BigInt::from((-x.clone()).to_integer()),
        BigInt::from((-y.clone()).to_integer()),
        BigInt::one(),
    ];
    let field = NumberField::from_poly("Q(a2[23])", poly, 0).expect("eigenvalue field");
    let theta = AlgebraicNumber::theta(&field);
    // eigenform = (λ − y)·B₁ + B₂, normalized with a₁ = 1 automatically
    let lam_minus_y = theta.sub(&AlgebraicNumber::from_rat(&field, y.clone()));
    let mut ap = BTreeMap::new();
    for p in primes_upto(pmax) {
        let v = lam_minus_y
            .scale(&b1.coefficient(p as usize))
            .add(&AlgebraicNumber::from_rat(&field, b2.coefficient(p as usize)));
        ap.insert(p, v);
    }
    let mut local_types = BTreeMap::new();
    local_types.insert(23, LocalType::Steinberg);
    let rec = NewformRecord {
        label: "23a".into(),
        weight: 2,
        level: 23,
        character: DirichletCharacter::principal(23),
        coeff_field: field.clone(),
        ap,
        local_types,
        provenance: Provenance::EtaOracle,
    };
    rec.validate().expect("level-23 record invariants");
    // the Galois conjugate under θ ↦ −1 − θ
    let autos = GaloisElement::group_of(&field);
    let sigma = autos
        .iter()
        .find(|s| !s.is_identity_on(&field))
        .expect("quadratic field has a swap");
    let conj = conjugate_newform(&rec, sigma).expect("conjugation defined");
    (rec, conj)
}

/// Record for the discriminant form Δ (weight 12, level 1) from η(z)^24.
pub fn delta_record(pmax: u64) -> NewformRecord {
    let q = eta_oracle(&[(1, 24)], pmax as usize + 1).expect("eta spec valid");
    let field = NumberField::rationals();
    let mut ap = BTreeMap::new();
    for p in primes_upto(pmax) {
        ap.insert(p, AlgebraicNumber::from_rat(&field, q.coefficient(p as usize)));
    }
    NewformRecord {
        label: "delta".into(),
        weight: 12,
        level: 1,
        character: DirichletCharacter::principal(1),
        coeff_field: field,
        ap,
        local_types: BTreeMap::new(),
        provenance: Provenance::EtaOracle,
    }
}

/// Record for the weight-2 level-11 form from η(z)²η(11z)².
pub fn level11_record(pmax: u64) -> NewformRecord {
    let q = eta_oracle(&[(1, 2), (11, 2)], pmax as usize + 1).expect("eta spec valid");
    let field = NumberField::rationals();
    let mut ap = BTreeMap::new();
    for p in primes_upto(pmax) {
        ap.insert(p, AlgebraicNumber::from_rat(&field, q.coefficient(p as usize)));
    }
    let mut local_types = BTreeMap::new();
    local_types.insert(11, LocalType::Steinberg);
    NewformRecord {
        label: "11a".into(),
        weight: 2,
        level: 11,
        character: DirichletCharacter::principal(11),
        coeff_field: NumberField::rationals(),
        ap,
        local_types,
        provenance: Provenance::EtaOracle,
    }
}

/// The elliptic curve 11a1: y² + y = x³ − x² − 10x − 20.
pub const CURVE_11A1: [i64; 5] = [0, -1, 1, -10, -20];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q as qq, qi};

    #[test]
    fn eta_delta_coefficients() {
        // τ(2) = −24, τ(3) = 252, τ(11) = 534612, and a cusp form vanishes at q⁰
        let d = eta_oracle(&[(1, 24)], 12).unwrap();
        assert_eq!(d.coefficient(0), qi(0));
        assert_eq!(d.coefficient(1), qi(1));
        assert_eq!(d.coefficient(2), qi(-24));
        assert_eq!(d.coefficient(3), qi(252));
        assert_eq!(d.coefficient(11), qi(534612));
    }

    #[test]
    fn eta_level11_coefficients() {
        let h = eta_oracle(&[(1, 2), (11, 2)], 20).unwrap();
        assert_eq!(h.coefficient(0), qi(0));
        assert_eq!(h.coefficient(1), qi(1));
        assert_eq!(h.coefficient(2), qi(-2));
        assert_eq!(h.coefficient(3), qi(-1));
        assert_eq!(h.coefficient(5), qi(1));
    }

    #[test]
    fn elliptic_oracle_examples() {
        assert_eq!(elliptic_oracle(CURVE_11A1, 2).unwrap(), -2);
        assert_eq!(elliptic_oracle(CURVE_11A1, 3).unwrap(), -1);
        assert!(matches!(
            elliptic_oracle(CURVE_11A1, 11),
            Err(OracleError::BadReduction(11))
        ));
    }

    #[test]
    fn oracle_concordance_small() {
        let h = eta_oracle(&[(1, 2), (11, 2)], 101).unwrap();
        for p in primes_upto(100) {
            if p == 11 {
                continue;
            }
            let ap = elliptic_oracle(CURVE_11A1, p).unwrap();
            assert_eq!(h.coefficient(p as usize), qi(ap), "mismatch at p = {p}");
        }
    }

    #[test]
    fn recursion_check_delta() {
        let d = eta_oracle(&[(1, 24)], 200).unwrap();
        let chi = DirichletCharacter::principal(1);
        assert!(hecke_recursion_check(&d, 12, &chi, 200));
        // corrupt one coefficient
        let mut bad = d.clone();
        bad.coeffs[100] += BigRational::one();
        assert!(!hecke_recursion_check(&bad, 12, &chi, 200));
    }

    #[test]
    fn recursion_check_level11() {
        let h = eta_oracle(&[(1, 2), (11, 2)], 400).unwrap();
        let chi = DirichletCharacter::principal(11);
        assert!(hecke_recursion_check(&h, 2, &chi, 400));
    }

    #[test]
    fn unitary_eigenvalue_examples() {
        let d = delta_record(50);
        // weight 12: λ(2) = −24/2⁵ = −3/4
        let l2 = d.unitary_eigenvalue(2).unwrap();
        assert_eq!(l2.as_rational().unwrap(), qq(-3, 4));
        let h = level11_record(50);
        // weight 2: λ(p) = a_p
        assert_eq!(
            h.unitary_eigenvalue(2).unwrap().as_rational().unwrap(),
            qi(-2)
        );
        assert!(matches!(
            h.unitary_eigenvalue(11),
            Err(EigenvalueError::RamifiedPrime(11))
        ));
    }

    #[test]
    fn record_schema_roundtrip_and_invariants() {
        let d = delta_record(20);
        d.validate().unwrap();
        let j = record_to_json(&d);
        let loaded = load_records(serde_json::to_string(&j).unwrap().as_bytes()).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded[0].ap, d.ap);
        // parity violation: odd character with even weight
        let mut bad = serde_json::to_value(&j).unwrap();
        bad["character"] = serde_json::json!({
            "modulus": 4,
            "generators": [{"g": 3, "exp": 1, "order": 2}]
        });
        bad["level"] = serde_json::json!(4);
        let err = load_records(serde_json::to_string(&bad).unwrap().as_bytes()).unwrap_err();
        assert!(matches!(err, RecordError::Invariant { .. }));
        // temperedness violation
        let mut bad2 = serde_json::to_value(&j).unwrap();
        bad2["ap"][0] = serde_json::json!({"p": 2, "coeffs": ["99999"]});
        let err2 = load_records(serde_json::to_string(&bad2).unwrap().as_bytes()).unwrap_err();
        assert!(matches!(err2, RecordError::Invariant { .. }));
    }

    #[test]
    fn level23_extraction() {
        let (f, fc) = level23_pair(100);
        // a₂ satisfies θ² + θ − 1 = 0
        let a2 = f.ap.get(&2).unwrap();
        let rel = a2.mul(a2).add(a2).sub(&AlgebraicNumber::one(&f.coeff_field));
        assert!(rel.is_zero());
        // conjugate record has the conjugate eigenvalues
        let a2c = fc.ap.get(&2).unwrap();
        assert_eq!(a2.add(a2c), AlgebraicNumber::from_rat(&f.coeff_field, qi(-1)));
        assert_eq!(a2.mul(a2c), AlgebraicNumber::from_rat(&f.coeff_field, qi(-1)));
        f.validate().unwrap();
        fc.validate().unwrap();
    }

    #[test]
    fn conjugation_is_involution() {
        let (f, _) = level23_pair(60);
        let autos = GaloisElement::group_of(&f.coeff_field);
        let sigma = autos.iter().find(|s| !s.is_identity_on(&f.coeff_field)).unwrap();
        let once = conjugate_newform(&f, sigma).unwrap();
        let twice = conjugate_newform(&once, sigma).unwrap();
        assert_eq!(twice.ap, f.ap);
    }
}
