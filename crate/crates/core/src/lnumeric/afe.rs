//! Completed-L evaluation by the unsmoothed approximate functional
//! equation, with kernels computed by Mellin–Barnes quadrature.
//!
//! With γ(s) the product of the spec's Γ_R/Γ_C factors and Λ(s) =
//! Q^{s/2} γ(s) L(s) entire, shifting the contour in
//! (1/2πi)∫ Λ(s+z) e^{θz} dz/z across the single pole at z = 0 gives, for
//! every shift θ,
//!
//!   Λ(s) = Q^{s/2} Σ_n a_n n^{−s} K_s(n e^{−θ}/√Q)
//!        + w · Q^{(1−s)/2} Σ_n ā_n n^{−(1−s)} K̄_{1−s}(n e^{θ}/√Q),
//!
//! where K_s(y) = (1/2πi)∫_{(c)} γ(s+z) y^{−z} dz/z. Two different θ at one
//! point determine the root number; the θ = 0 instance evaluates Λ.
//!
//! The kernel contour integral is done by the trapezoid rule: the integrand
//! is analytic in a strip of width ≈ min(c, 1) around the contour and
//! decays like exp(−(π/4)·d·|t|), so the rule converges geometrically and
//! the node count is a few hundred per kernel shape. Node weights are
//! cached per (gamma data, s, precision); evaluating the kernel at the
//! n-th argument then costs one complex rotation step per node.

use super::lseries::{LSeriesSpec, RootNumber};
use super::{LnumError, PrecisionContext};
use crate::mp;
use num::rational::BigRational;
use rug::ops::CompleteRound;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// A completed-L value with its finite part and error estimate.
#[derive(Clone, Debug)]
pub struct LValue {
    pub lambda: Complex,
    /// finite part L(s) = Λ(s)/(Q^{s/2} γ(s))
    pub l: Complex,
    /// heuristic-rigorous absolute error estimate for `lambda`, and
    /// relative-ish for `l`
    pub err: f64,
}

/// γ(s) = ∏ Γ_R(s+ν) ∏ Γ_C(s+μ).
pub fn gamma_factor(spec: &LSeriesSpec, s: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, 1);
    let pi = mp::pi(prec);
    let two_pi = pi.clone() * 2u32;
    for mu in &spec.gamma_c {
        let arg = s.clone() + mp::rat_to_complex(mu, prec);
        // Γ_C(x) = 2 (2π)^{−x} Γ(x)
        let g = mp::gamma(&arg, prec);
        let scale = (-(arg * two_pi.clone().ln())).exp() * 2u32;
        acc *= g * scale;
    }
    for nu in &spec.gamma_r {
        let arg = s.clone() + mp::rat_to_complex(nu, prec);
        // Γ_R(x) = π^{−x/2} Γ(x/2)
        let half = arg.clone() / 2u32;
        let g = mp::gamma(&half, prec);
        let scale = (-(arg / 2u32 * pi.clone().ln())).exp();
        acc *= g * scale;
    }
    acc
}

/// Quadrature nodes for one kernel shape: K(y) = Σ_j A_j · y^{−(c + i t_j)}
/// with t_j = j·h, j = −M..M.
struct KernelNodes {
    c: Float,
    step: Float,
    /// node weight at j = 0
    a0: Complex,
    /// (A_{+j}, A_{−j}) for j = 1..M
    pairs: Vec<(Complex, Complex)>,
    prec: u32,
}

impl KernelNodes {
    fn build(spec: &LSeriesSpec, s: &Complex, prec: u32) -> KernelNodes {
        let wp = prec + 24;
        // contour offset: absolute convergence of the L-series on the line
        // plus a safety margin
        let c_f64 = (1.4 - s.real().to_f64()).max(1.0);
        let c = Float::with_val(wp, c_f64);
        // strip of analyticity around the contour (the z = 0 pole dominates)
        let delta = c_f64.min(1.0) * 0.95;
        let eps_target = 2f64.powi(-(prec as i32) - 12);
        let h = 2.0 * std::f64::consts::PI * delta / (-eps_target.ln());
        let step = Float::with_val(wp, h);
        let decay_rate =
            std::f64::consts::FRAC_PI_4 * (2 * spec.gamma_c.len() + spec.gamma_r.len()) as f64;
        let weight = Float::with_val(wp, h / (2.0 * std::f64::consts::PI));
        let node_at = |j: i64| -> Complex {
            let t = Float::with_val(wp, j) * &step;
            let z = Complex::with_val(wp, (&c, &t));
            let sz = s.clone() + &z;
            gamma_factor(spec, &sz, wp) / z * &weight
        };
        let a0 = node_at(0);
        let mut max_mag = a0.clone().abs().real().to_f64();
        let mut pairs = vec![];
        let mut j = 1i64;
        loop {
            let ap = node_at(j);
            let am = node_at(-j);
            let mag = ap
                .clone()
                .abs()
                .real()
                .to_f64()
                .max(am.clone().abs().real().to_f64());
            max_mag = max_mag.max(mag);
            let t_f = j as f64 * h;
            pairs.push((ap, am));
            // stop once the gamma decay has pushed the integrand far below
            // the target, with a conservative polynomial allowance
            if t_f * decay_rate > -eps_target.ln() + 40.0 + 6.0 * (1.0 + t_f).ln()
                && mag < eps_target * max_mag
            {
                break;
            }
            j += 1;
            assert!(j < 100_000, "kernel quadrature failed to converge");
        }
        KernelNodes {
            c,
            step,
            a0,
            pairs,
            prec: wp,
        }
    }

    /// K(y) for one positive real argument, by a rotation recurrence:
    /// y^{−(c+it_j)} = e^{−cu}·(e^{−ihu})^j with u = ln y.
    fn eval(&self, y: &Float) -> Complex {
        let wp = self.prec;
        let u = y.clone().ln();
        let scale = (-(self.c.clone() * &u)).exp();
        let ang = (self.step.clone() * &u).complete(wp);
        let rot_step = Complex::with_val(wp, (ang.clone().cos(), -ang.sin()));
        let mut rot = Complex::with_val(wp, 1);
        let mut acc = self.a0.clone();
        for (ap, am) in &self.pairs {
            rot *= &rot_step;
            // the −j node pairs with the conjugate rotation (u is real)
            acc += rot.clone() * ap;
            acc += rot.clone().conj() * am;
        }
        acc * scale
    }

    /// |K| upper estimate used for tail bounds.
    fn magnitude(&self, y: &Float) -> f64 {
        self.eval(y).abs().real().to_f64()
    }
}

/// Cache of kernel nodes keyed by (gamma data, s, precision).
static KERNEL_CACHE: RwLock<Option<HashMap<String, Arc<KernelNodes>>>> = RwLock::new(None);

fn kernel_for(spec: &LSeriesSpec, s: &Complex, prec: u32) -> Arc<KernelNodes> {
    let key = format!(
        "c{:?}r{:?}|{}|{}|{}",
        spec.gamma_c,
        spec.gamma_r,
        s.real().to_string_radix(16, None),
        s.imag().to_string_radix(16, None),
        prec
    );
    {
        let guard = KERNEL_CACHE.read().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(k) = map.get(&key) {
                return k.clone();
            }
        }
    }
    let built = Arc::new(KernelNodes::build(spec, s, prec));
    let mut guard = KERNEL_CACHE.write().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .entry(key)
        .or_insert(built)
        .clone()
}

/// One θ-shifted half of the functional equation:
/// Q^{s/2} Σ_{n≤N} a_n n^{−s} K_s(n·scale/√Q), plus a tail estimate.
fn afe_sum(
    spec: &LSeriesSpec,
    s: &Complex,
    coeffs: &[Complex],
    scale: f64,
    dual: bool,
    prec: u32,
) -> (Complex, f64) {
    let wp = prec + 24;
    let kernel = kernel_for(spec, s, prec);
    let sqrt_q = Float::with_val(wp, spec.conductor).sqrt();
    let n_max = coeffs.len() - 1;
    let mut acc = Complex::with_val(wp, 0);
    let mut last_mag = 0f64;
    for n in 1..=n_max {
        let a = if dual {
            coeffs[n].clone().conj()
        } else {
            coeffs[n].clone()
        };
        if a.clone().abs().real().to_f64() == 0.0 {
            continue;
        }
        let y = Float::with_val(wp, n as f64 * scale) / &sqrt_q;
        let k = kernel.eval(&y);
        let term = a * mp::n_pow_minus_s(n as u64, &Complex::with_val(wp, s)) * k;
        last_mag = term.clone().abs().real().to_f64();
        acc += term;
    }
    // tail estimate: kernel decay is superpolynomial, so a short geometric
    // extrapolation from the last stretch of terms is a safe overestimate
    let y_next = Float::with_val(wp, (n_max + 1) as f64 * scale) / &sqrt_q;
    let y_last = Float::with_val(wp, n_max.max(1) as f64 * scale) / &sqrt_q;
    let k_next = kernel.magnitude(&y_next);
    let k_last = kernel.magnitude(&y_last).max(1e-300);
    let ratio = (k_next / k_last).min(0.95);
    let tail = (last_mag.max(k_next * (n_max as f64 + 1.0).powf(-s.real().to_f64())))
        * ratio
        / (1.0 - ratio)
        * 4.0;
    let q_pow = {
        let half_s = Complex::with_val(wp, s) / 2u32;
        (half_s * Float::with_val(wp, spec.conductor).ln()).exp()
    };
    let scale_mag = q_pow.clone().abs().real().to_f64();
    (acc * q_pow, tail * scale_mag)
}

fn resolved_root(spec: &LSeriesSpec, prec: u32) -> Result<Complex, LnumError> {
    match spec.root_number {
        RootNumber::Fixed(re, im) => Ok(Complex::with_val(prec, (re, im))),
        RootNumber::Fit => Err(LnumError::RootNumberUnresolved),
    }
}

fn pick_n(spec: &LSeriesSpec, ctx: &PrecisionContext, s: &Complex) -> Result<usize, LnumError> {
    if ctx.n_max > 0 {
        return Ok(ctx.n_max);
    }
    // grow until the kernel has decayed far below target at both s and 1−s
    let prec = ctx.bits();
    let wp = prec + 24;
    let sqrt_q = (spec.conductor as f64).sqrt();
    let k1 = kernel_for(spec, s, prec);
    let s_ref = Complex::with_val(prec, 1u32) - s;
    let k2 = kernel_for(spec, &s_ref, prec);
    let target = 10f64.powi(-(ctx.digits as i32) - 6);
    let base1 = k1.magnitude(&Float::with_val(wp, 0.01)).max(1e-300);
    let base2 = k2.magnitude(&Float::with_val(wp, 0.01)).max(1e-300);
    let mut n = 16usize;
    loop {
        let y = Float::with_val(wp, n as f64 / sqrt_q);
        let m1 = k1.magnitude(&y) / base1;
        let m2 = k2.magnitude(&y) / base2;
        if m1 < target && m2 < target {
            return Ok(n);
        }
        n = (n as f64 * 1.3) as usize + 1;
        if n as u64 > spec.prime_bound() + 1 {
            return Err(LnumError::CoefficientRange {
                have: spec.prime_bound(),
                need: n,
            });
        }
    }
}

/// Evaluate Λ(s) and L(s). The root number must be resolved.
pub fn evaluate(
    spec: &LSeriesSpec,
    s: (f64, f64),
    ctx: &PrecisionContext,
) -> Result<LValue, LnumError> {
    spec.validate()?;
    let prec = ctx.bits();
    let s = Complex::with_val(prec, s);
    let w = resolved_root(spec, prec)?;
    let n = pick_n(spec, ctx, &s)?;
    let coeffs = spec.embedded_coefficients(n, prec)?;
    let one_minus_s = Complex::with_val(prec, 1u32) - &s;
    let (sum1, tail1) = afe_sum(spec, &s, &coeffs, 1.0, false, prec);
    let (sum2, tail2) = afe_sum(spec, &one_minus_s, &coeffs, 1.0, true, prec);
    let lambda = sum1 + w.clone() * sum2;
    let quad_err = 10f64.powi(-(ctx.digits as i32) - 4)
        * lambda.clone().abs().real().to_f64().max(1.0);
    let err = tail1 + tail2 + quad_err;
    if err > ctx.tolerance {
        return Err(LnumError::PrecisionLoss {
            est: err,
            tol: ctx.tolerance,
        });
    }
    let gamma = gamma_factor(spec, &s, prec);
    let q_pow = (Complex::with_val(prec, &s) / 2u32
        * Float::with_val(prec, spec.conductor).ln())
    .exp();
    let l = lambda.clone() / (gamma * q_pow);
    Ok(LValue { lambda, l, err })
}

/// Fit the root number from two θ-shifted evaluations at a well-conditioned
/// point: w = (I_θ(s₀) − I_0(s₀)) / (Ī_0(1−s₀) − Ī_{−θ}(1−s₀)).
pub fn fit_root_number(spec: &LSeriesSpec, ctx: &PrecisionContext) -> Result<Complex, LnumError> {
    spec.validate()?;
    let prec = ctx.bits();
    let lam = 1.25f64;
    for s0 in [0.75f64, 0.6, 0.9, 1.1, 0.45] {
        let s = Complex::with_val(prec, s0);
        let one_minus_s = Complex::with_val(prec, 1.0 - s0);
        let n = pick_n(spec, ctx, &s)?;
        // the shifted kernels see arguments scaled by λ^{±1}; stretch the
        // series by λ to keep the tail covered
        let n_scaled = ((n as f64) * lam) as usize + 1;
        if n_scaled as u64 > spec.prime_bound() {
            return Err(LnumError::CoefficientRange {
                have: spec.prime_bound(),
                need: n_scaled,
            });
        }
        let coeffs = spec.embedded_coefficients(n_scaled, prec)?;
        let (i0, e0) = afe_sum(spec, &s, &coeffs, 1.0, false, prec);
        let (it, et) = afe_sum(spec, &s, &coeffs, 1.0 / lam, false, prec);
        let (m0, f0) = afe_sum(spec, &one_minus_s, &coeffs, 1.0, true, prec);
        let (mt, ft) = afe_sum(spec, &one_minus_s, &coeffs, lam, true, prec);
        let num = it - &i0;
        let den = m0.clone() - &mt;
        let den_mag = den.clone().abs().real().to_f64();
        let err_scale = e0 + et + f0 + ft + 1e-25 * num.clone().abs().real().to_f64();
        if den_mag < 1e3 * err_scale || den_mag < 1e-20 {
            continue;
        }
        let w = num / den;
        let wm = w.clone().abs().real().to_f64();
        if (wm - 1.0).abs() > 1e-6 {
            continue;
        }
        // snap to ±1 for self-dual data
        if spec.self_dual {
            let re = w.real().to_f64();
            let im = w.imag().to_f64();
            if im.abs() < 1e-6 && (re.abs() - 1.0).abs() < 1e-6 {
                return Ok(Complex::with_val(prec, if re > 0.0 { 1 } else { -1 }));
            }
        }
        return Ok(w);
    }
    Err(LnumError::IllConditioned)
}

/// |Λ(s) − w Λ̄(1−s)| / |Λ(s)| at a real point; for self-dual real data this
/// is the plain functional-equation residual.
pub fn functional_equation_residual(
    spec: &LSeriesSpec,
    s0: f64,
    ctx: &PrecisionContext,
) -> Result<f64, LnumError> {
    let a = evaluate(spec, (s0, 0.0), ctx)?;
    let b = evaluate(spec, (1.0 - s0, 0.0), ctx)?;
    let prec = ctx.bits();
    let w = resolved_root(spec, prec)?;
    let diff = a.lambda.clone() - w * b.lambda.clone().conj();
    let denom = a.lambda.clone().abs().real().to_f64().max(1e-300);
    Ok(diff.abs().real().to_f64() / denom)
}
