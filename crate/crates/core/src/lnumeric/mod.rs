//! Numeric L-value engine: Euler-product coefficients, completed-L
//! evaluation by a smoothed approximate functional equation, Petersson
//! norms via the symmetric square, numeric special-value constants, and
//! algebraicity detection.
//!
//! Everything numeric carries an error estimate. The estimates are
//! heuristic-rigorous: truncation tails are bounded by extrapolating the
//! kernel decay, quadrature error by the trapezoid rule's geometric
//! convergence; both shrink monotonically as the precision context grows.

mod afe;
mod detect;
mod lseries;
mod petersson;
mod rankin;
mod shimura;

pub use afe::{evaluate, fit_root_number, functional_equation_residual, LValue};
pub use detect::{detect_algebraic, DetectError, DetectField, DetectOutcome};
pub use lseries::{LSeriesSpec, RootNumber};
pub use petersson::{delta_norm_integral, petersson_norm, petersson_norm_scaled, KappaConstant};
pub use rankin::{rankin_selberg_spec, sym2_spec, zeta_square_harness};
pub use shimura::{shimura_constant_eval, ShimuraValue};

/// Working-precision control for every numeric operation.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    /// significant decimal digits carried by the float arithmetic (≥ 15)
    pub digits: u32,
    /// truncation length; 0 selects it adaptively from the kernel decay
    pub n_max: usize,
    /// requested tolerance; results whose error estimate exceeds it are
    /// rejected with `PrecisionLoss`
    pub tolerance: f64,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Self {
        assert!(digits >= 15, "precision context needs at least 15 digits");
        PrecisionContext {
            digits,
            n_max: 0,
            tolerance: 10f64.powi(-(digits as i32) + 10),
        }
    }
    pub fn bits(&self) -> u32 {
        crate::mp::bits_for_digits(self.digits)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LnumError {
    #[error("error estimate {est:.3e} exceeds the requested tolerance {tol:.3e}")]
    PrecisionLoss { est: f64, tol: f64 },
    #[error("root number fit ill-conditioned: |Λ(1−s₀)| below threshold at every candidate")]
    IllConditioned,
    #[error("unsupported ramification: {0}")]
    UnsupportedRamification(String),
    #[error("euler factors cover primes ≤ {have}, but the evaluation needs n ≤ {need}")]
    CoefficientRange { have: u64, need: usize },
    #[error("root number not resolved; fit it first")]
    RootNumberUnresolved,
    #[error("petersson calibration missing for shape (weight {0}, level {1})")]
    CalibrationMissing(u32, u64),
    #[error("field problem: {0}")]
    Field(#[from] crate::nfield::FieldError),
    #[error("{0}")]
    Spec(String),
}
