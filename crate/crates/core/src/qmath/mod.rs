//! Complex elementary and special functions.
//!
//! Every fractional power in this crate goes through [`cpow_principal`] (or its
//! branch-continued sibling [`cpow_continued`]), so the branch convention lives
//! in exactly one place: principal logarithm with argument in `(-pi, pi]`.

mod hypergeometric;

pub use hypergeometric::{
    check_binomial_identity, hyp2f1, hyp2f1_deriv, hyp2f1_series, DerivOrder, HypParams,
};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Complex scalar used for arguments and all field values.
pub type ComplexScalar = Complex64;

/// Below this `|q - 1|` every q-deformed formula is replaced by its exponential limit.
pub const Q_ONE_EPSILON: f64 = 1e-12;

/// True when `q` is treated as exactly 1.
#[inline]
pub fn is_classical(q: f64) -> bool {
    (q - 1.0).abs() < Q_ONE_EPSILON
}

#[inline]
pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

pub(crate) fn ensure_finite(z: ComplexScalar, what: &str) -> Result<ComplexScalar> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::domain(format!("{what} is not finite ({z})")))
    }
}

/// Principal logarithm, argument in `(-pi, pi]`.
///
/// `atan2` returns `-pi` for a negative real axis carrying a negative zero
/// imaginary part; that case is folded back to `+pi`.
pub fn principal_ln(z: ComplexScalar) -> Result<ComplexScalar> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("logarithm of zero"));
    }
    ensure_finite(z, "logarithm argument")?;
    let mut arg = z.im.atan2(z.re);
    if arg <= -PI {
        arg = PI;
    }
    Ok(c(z.norm().ln(), arg))
}

/// `base^exponent = exp(exponent * Log(base))` on the principal branch.
///
/// A zero base is accepted only for an exponent with positive real part, in
/// which case the result is zero.
pub fn cpow_principal(base: ComplexScalar, exponent: ComplexScalar) -> Result<ComplexScalar> {
    if base.re == 0.0 && base.im == 0.0 {
        return if exponent.re > 0.0 {
            Ok(c(0.0, 0.0))
        } else {
            Err(Error::domain(format!(
                "0 raised to exponent {exponent} with non-positive real part"
            )))
        };
    }
    let value = (exponent * principal_ln(base)?).exp();
    ensure_finite(value, "complex power")
}

/// Logarithm of `value` continued from a nearby point whose logarithm is `reference_ln`.
///
/// `reference_value` must equal `exp(reference_ln)`. The result differs from
/// `reference_ln` by the principal logarithm of the ratio, so the branch
/// follows the reference as long as the ratio does not wind past the cut.
pub fn ln_continued(
    value: ComplexScalar,
    reference_value: ComplexScalar,
    reference_ln: ComplexScalar,
) -> Result<ComplexScalar> {
    if value.re == 0.0 && value.im == 0.0 {
        return Err(Error::domain("logarithm of zero"));
    }
    Ok(reference_ln + principal_ln(value / reference_value)?)
}

/// `value^exponent` on the branch selected by a continued logarithm; returns the power
/// together with the logarithm of `value` that was used.
pub fn cpow_continued(
    value: ComplexScalar,
    reference_value: ComplexScalar,
    reference_ln: ComplexScalar,
    exponent: f64,
) -> Result<(ComplexScalar, ComplexScalar)> {
    let ln = ln_continued(value, reference_value, reference_ln)?;
    let power = ensure_finite((ln * exponent).exp(), "continued power")?;
    Ok((power, ln))
}

/// Deformed exponential `e_q(z) = [1 + (1 - q) z]^(1/(1-q))` extended to complex `z`.
pub fn q_exp(q: f64, z: ComplexScalar) -> Result<ComplexScalar> {
    if is_classical(q) {
        return ensure_finite(z.exp(), "exp");
    }
    let base = c(1.0, 0.0) + z * (1.0 - q);
    if base.re == 0.0 && base.im == 0.0 {
        return Err(Error::domain(format!(
            "q-exponential base vanishes (q = {q}, z = {z})"
        )));
    }
    cpow_principal(base, c(1.0 / (1.0 - q), 0.0))
}

/// Real q-exponential with the cutoff: zero wherever `1 + (1 - q) x <= 0`.
pub fn q_exp_real_cutoff(q: f64, x: f64) -> f64 {
    if is_classical(q) {
        return x.exp();
    }
    let base = 1.0 + (1.0 - q) * x;
    if base > 0.0 {
        base.powf(1.0 / (1.0 - q))
    } else {
        0.0
    }
}
