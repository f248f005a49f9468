//! L-series specifications: exact Euler factors, gamma data, conductor and
//! root number, plus the multiplicative expansion into Dirichlet
//! coefficients (exact first, embedded second).

use super::LnumError;
use crate::nfield::{AlgebraicNumber, NumberField};
use crate::rat::{parse_rational, rational_string};
use num::rational::BigRational;
use num::Zero;
use rug::Complex;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Functional-equation root number.
#[derive(Clone, Debug, PartialEq)]
pub enum RootNumber {
    Fixed(f64, f64),
    Fit,
}

/// Specification of an L-series in the analytic normalization
/// (functional equation s ↔ 1−s): completed form
/// Λ(s) = Q^{s/2} ∏_j Γ_R(s+ν_j) ∏_i Γ_C(s+μ_i) · L(s).
#[derive(Clone, Debug)]
pub struct LSeriesSpec {
    pub label: String,
    pub degree: usize,
    pub conductor: u64,
    /// Γ_C shifts μ_i, with Γ_C(s) = 2(2π)^{−s}Γ(s)
    pub gamma_c: Vec<BigRational>,
    /// Γ_R shifts ν_j, with Γ_R(s) = π^{−s/2}Γ(s/2)
    pub gamma_r: Vec<BigRational>,
    /// common coefficient field of the Euler factors
    pub field: Arc<NumberField>,
    /// p ↦ ascending coefficients of the local polynomial (constant 1)
    pub factors: BTreeMap<u64, Vec<AlgebraicNumber>>,
    pub self_dual: bool,
    pub root_number: RootNumber,
}

impl LSeriesSpec {
    /// 2·#Γ_C + #Γ_R must equal the degree.
    pub fn validate(&self) -> Result<(), LnumError> {
        if 2 * self.gamma_c.len() + self.gamma_r.len() != self.degree {
            return Err(LnumError::Spec(format!(
                "gamma data covers degree {}, spec says {}",
                2 * self.gamma_c.len() + self.gamma_r.len(),
                self.degree
            )));
        }
        for (p, f) in &self.factors {
            if f.is_empty() || !f[0].is_rational() || f[0].as_rational() != Some(BigRational::from_integer(1.into())) {
                return Err(LnumError::Spec(format!(
                    "local factor at {p} must have constant term 1"
                )));
            }
            if f.len() > self.degree + 1 {
                return Err(LnumError::Spec(format!("local factor at {p} too long")));
            }
        }
        Ok(())
    }

    /// Largest prime with a stored factor.
    pub fn prime_bound(&self) -> u64 {
        self.factors.keys().next_back().copied().unwrap_or(1)
    }

    /// Exact Dirichlet coefficients a_1 … a_n from the Euler product:
    /// 1/P_p(X) = Σ_j b_{p^j} X^j and a_n multiplicative.
    pub fn dirichlet_coefficients(&self, n: usize) -> Result<Vec<AlgebraicNumber>, LnumError> {
        if n > 0 && self.prime_bound() < n as u64 {
            return Err(LnumError::CoefficientRange {
                have: self.prime_bound(),
                need: n,
            });
        }
        let one = AlgebraicNumber::one(&self.field);
        let zero = AlgebraicNumber::zero(&self.field);
        let mut a = vec![zero.clone(); n + 1];
        if n >= 1 {
            a[1] = one.clone();
        }
        for (&p, f) in self.factors.range(..=(n as u64)) {
            let p = p as usize;
            // local inverse series b_{p^j}
            let mut local = vec![one.clone()];
            let mut pj = p;
            while pj <= n {
                let j = local.len();
                let mut s = zero.clone();
                for i in 1..f.len().min(j + 1) {
                    s = s.add(&f[i].mul(&local[j - i]));
                }
                local.push(s.neg());
                pj *= p;
            }
            // fold into the sieve: every n = p^j·m with p ∤ m
            for j in 1..local.len() {
                let pj = p.pow(j as u32);
                let mut m = 1;
                while m * pj <= n {
                    if m % p != 0 && !a[m].is_zero() {
                        let t = a[m].mul(&local[j]);
                        a[m * pj] = t;
                    }
                    m += 1;
                }
            }
        }
        Ok(a)
    }

    /// Embedded coefficients at the given precision (index 0 unused).
    pub fn embedded_coefficients(
        &self,
        n: usize,
        prec: u32,
    ) -> Result<Vec<Complex>, LnumError> {
        let exact = self.dirichlet_coefficients(n)?;
        Ok(exact.iter().map(|x| x.embed(prec)).collect())
    }

    /// JSON form with exact factor coefficients and explicit gamma shifts.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "degree": self.degree,
            "conductor": self.conductor,
            "gamma_c": self.gamma_c.iter().map(rational_string).collect::<Vec<_>>(),
            "gamma_r": self.gamma_r.iter().map(rational_string).collect::<Vec<_>>(),
            "field_poly": self.field.poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "embedding": self.field.embedding_index,
            "self_dual": self.self_dual,
            "root_number": match &self.root_number {
                RootNumber::Fit => serde_json::json!("fit"),
                RootNumber::Fixed(re, im) => serde_json::json!([re, im]),
            },
            "factors": self.factors.iter().map(|(p, f)| serde_json::json!({
                "p": p,
                "coeffs": f.iter().map(|c| c.coords.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parse the JSON form.
    pub fn from_json(v: &serde_json::Value) -> Result<LSeriesSpec, LnumError> {
        let err = |m: &str| LnumError::Spec(m.to_string());
        let label = v["label"].as_str().unwrap_or("spec").to_string();
        let degree = v["degree"].as_u64().ok_or_else(|| err("degree"))? as usize;
        let conductor = v["conductor"].as_u64().ok_or_else(|| err("conductor"))?;
        let parse_shifts = |key: &str| -> Result<Vec<BigRational>, LnumError> {
            v[key]
                .as_array()
                .map(|a| {
                    a.iter()
                        .map(|x| {
                            parse_rational(x.as_str().unwrap_or("?")).map_err(LnumError::Spec)
                        })
                        .collect()
                })
                .unwrap_or(Ok(vec![]))
        };
        let gamma_c = parse_shifts("gamma_c")?;
        let gamma_r = parse_shifts("gamma_r")?;
        let poly: Vec<num::BigInt> = v["field_poly"]
            .as_array()
            .ok_or_else(|| err("field_poly"))?
            .iter()
            .map(|c| c.as_str().unwrap_or("0").parse().unwrap())
            .collect();
        let embedding = v["embedding"].as_u64().unwrap_or(0) as usize;
        let field = NumberField::from_poly(&format!("K[{label}]"), poly, embedding)?;
        let mut factors = BTreeMap::new();
        for item in v["factors"].as_array().ok_or_else(|| err("factors"))? {
            let p = item["p"].as_u64().ok_or_else(|| err("factor prime"))?;
            let mut coeffs = vec![];
            for cv in item["coeffs"].as_array().ok_or_else(|| err("factor coeffs"))? {
                let coords: Result<Vec<BigRational>, String> = cv
                    .as_array()
                    .ok_or_else(|| err("coeff coords"))?
                    .iter()
                    .map(|s| parse_rational(s.as_str().unwrap_or("?")))
                    .collect();
                coeffs.push(AlgebraicNumber::new(
                    field.clone(),
                    coords.map_err(LnumError::Spec)?,
                ));
            }
            factors.insert(p, coeffs);
        }
        let self_dual = v["self_dual"].as_bool().unwrap_or(false);
        let root_number = match &v["root_number"] {
            serde_json::Value::String(s) if s == "fit" => RootNumber::Fit,
            serde_json::Value::Array(a) if a.len() == 2 => RootNumber::Fixed(
                a[0].as_f64().unwrap_or(1.0),
                a[1].as_f64().unwrap_or(0.0),
            ),
            _ => RootNumber::Fit,
        };
        let spec = LSeriesSpec {
            label,
            degree,
            conductor,
            gamma_c,
            gamma_r,
            field,
            factors,
            self_dual,
            root_number,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Sanity bound |a_n| ≤ d(n)·n^{0.1} for the analytic normalization,
    /// checked on the embedded coefficients.
    pub fn check_tempered_bound(&self, n: usize, prec: u32) -> Result<(), LnumError> {
        let coeffs = self.embedded_coefficients(n, prec)?;
        for (m, c) in coeffs.iter().enumerate().skip(1) {
            let d = divisor_count(m as u64, self.degree);
            let bound = d as f64 * (m as f64).powf(0.1);
            let v = c.clone().abs().real().to_f64();
            if v > bound {
                return Err(LnumError::Spec(format!(
                    "|a_{m}| = {v:.4} exceeds the tempered sanity bound {bound:.4}"
                )));
            }
        }
        Ok(())
    }
}

/// Generalized divisor count d_k(n) (number of ways to write n as an
/// ordered product of k factors).
fn divisor_count(n: u64, k: usize) -> u64 {
    let mut total = 1u64;
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u64;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            total *= binom_u64(e + k as u64 - 1, k as u64 - 1);
        }
        p += 1;
    }
    if n > 1 {
        total *= k as u64;
    }
    total
}

fn binom_u64(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
