//! Gauss hypergeometric function 2F1(a, b; c; z).
//!
//! Two evaluation paths:
//!
//! * `b == c` (compared exactly): the series collapses to `(1 - z)^(-a)`, which is
//!   valid on the whole plane minus the cut `[1, inf)`.
//! * otherwise: the defining power series, restricted to `|z| < 1`.

use super::{c, cpow_principal, ensure_finite, ComplexScalar};
use crate::error::{Error, Result};

/// Consecutive small terms required before the series is declared converged.
const SETTLED_TERMS: usize = 3;
/// Hard cap on the number of series terms.
pub(crate) const MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub z: ComplexScalar,
}

impl HypParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, z: ComplexScalar) -> Result<Self> {
        let params = HypParams {
            alpha,
            beta,
            gamma,
            z,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()) {
            return Err(Error::domain("hypergeometric parameters must be finite"));
        }
        ensure_finite(self.z, "hypergeometric argument")?;
        if self.gamma <= 0.0 && self.gamma.fract() == 0.0 {
            return Err(Error::domain(format!(
                "gamma = {} is a pole of 2F1 (zero or negative integer)",
                self.gamma
            )));
        }
        Ok(())
    }

    /// True when the closed form `(1 - z)^(-alpha)` applies.
    pub fn is_degenerate(&self) -> bool {
        self.beta == self.gamma
    }

    fn shifted(&self, by: f64) -> Self {
        HypParams {
            alpha: self.alpha + by,
            beta: self.beta + by,
            gamma: self.gamma + by,
            z: self.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

impl TryFrom<u8> for DerivOrder {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            1 => Ok(DerivOrder::First),
            2 => Ok(DerivOrder::Second),
            n => Err(Error::domain(format!("derivative order {n} is not 1 or 2"))),
        }
    }
}

/// Evaluates 2F1, dispatching to the closed form when `beta == gamma`.
pub fn hyp2f1(params: &HypParams) -> Result<ComplexScalar> {
    params.validate()?;
    if params.is_degenerate() {
        degenerate(params)
    } else {
        series(params)
    }
}

/// Evaluates 2F1 by summing the power series, whatever the parameters.
pub fn hyp2f1_series(params: &HypParams) -> Result<ComplexScalar> {
    params.validate()?;
    series(params)
}

fn degenerate(params: &HypParams) -> Result<ComplexScalar> {
    let z = params.z;
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::domain(format!(
            "z = {z} lies on the branch cut [1, inf) of (1 - z)^(-alpha)"
        )));
    }
    cpow_principal(c(1.0, 0.0) - z, c(-params.alpha, 0.0))
}

fn series(params: &HypParams) -> Result<ComplexScalar> {
    let HypParams {
        alpha,
        beta,
        gamma,
        z,
    } = *params;
    let z_abs = z.norm();
    if z_abs >= 1.0 {
        return Err(Error::domain(format!(
            "series path needs |z| < 1, got |z| = {z_abs}"
        )));
    }
    let tol = f64::EPSILON;
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    let mut settled = 0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        let ratio = (alpha + n) * (beta + n) / ((gamma + n) * (n + 1.0));
        term *= z * ratio;
        sum += term;
        if term.norm() <= tol * sum.norm() {
            settled += 1;
            if settled == SETTLED_TERMS {
                return ensure_finite(sum, "2F1 series");
            }
        } else {
            settled = 0;
        }
    }
    Err(Error::Convergence {
        terms: MAX_TERMS,
        z_abs,
    })
}

/// First or second z-derivative through `F' = (a b / c) F(a+1, b+1; c+1; z)`.
pub fn hyp2f1_deriv(params: &HypParams, order: DerivOrder) -> Result<ComplexScalar> {
    params.validate()?;
    let HypParams {
        alpha, beta, gamma, ..
    } = *params;
    let first = alpha * beta / gamma;
    match order {
        DerivOrder::First => Ok(hyp2f1(&params.shifted(1.0))? * first),
        DerivOrder::Second => {
            let second = first * (alpha + 1.0) * (beta + 1.0) / (gamma + 1.0);
            Ok(hyp2f1(&params.shifted(2.0))? * second)
        }
    }
}

/// Scaled defect of `F(-a, g; g; -z) = (1 + z)^a`.
///
/// The left side is summed as a series (not through the `b == c` shortcut,
/// which would make the comparison tautological).
pub fn check_binomial_identity(alpha: f64, gamma: f64, z: ComplexScalar) -> Result<f64> {
    let lhs = hyp2f1_series(&HypParams::new(-alpha, gamma, gamma, -z)?)?;
    let rhs = cpow_principal(c(1.0, 0.0) + z, c(alpha, 0.0))?;
    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
}
