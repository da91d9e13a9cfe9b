//! Complex fields of `(x, t)` and their derivatives.

use crate::error::{Error, Result};
use crate::qmath::{ensure_finite, principal_ln, ComplexScalar, DerivOrder};

/// Value and the partial derivatives the residuals need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub value: ComplexScalar,
    pub dt: ComplexScalar,
    pub dx: ComplexScalar,
    pub dxx: ComplexScalar,
}

/// A deterministic complex function of position and time.
///
/// `ln` returns a logarithm of the value. The default is the principal one;
/// closed forms override it with the logarithm continued from the origin, so
/// fractional powers of the field stay on the branch the formula defines even
/// where the value itself has wound past the negative real axis.
pub trait FieldSampler: Sync {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar>;

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        principal_ln(self.eval(x, t)?)
    }

    /// Exact partials, when the sampler knows them.
    fn partials(&self, _x: f64, _t: f64) -> Option<Result<Partials>> {
        None
    }
}

impl<S: FieldSampler + ?Sized> FieldSampler for &S {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        (**self).eval(x, t)
    }
    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        (**self).ln(x, t)
    }
    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        (**self).partials(x, t)
    }
}

impl<S: FieldSampler + ?Sized> FieldSampler for Box<S> {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        (**self).eval(x, t)
    }
    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        (**self).ln(x, t)
    }
    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        (**self).partials(x, t)
    }
}

/// Wraps a plain closure; only finite differences are available for it.
pub struct FnSampler<F>(pub F);

impl<F> FieldSampler for FnSampler<F>
where
    F: Fn(f64, f64) -> ComplexScalar + Sync,
{
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        ensure_finite((self.0)(x, t), "sampled value")
    }
}

/// `amplitude * inner`.
#[derive(Debug, Clone)]
pub struct Scaled<S> {
    pub amplitude: ComplexScalar,
    pub inner: S,
}

impl<S: FieldSampler> FieldSampler for Scaled<S> {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.inner.eval(x, t)? * self.amplitude)
    }

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(principal_ln(self.amplitude)? + self.inner.ln(x, t)?)
    }

    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        let a = self.amplitude;
        Some(self.inner.partials(x, t)?.map(|p| Partials {
            value: p.value * a,
            dt: p.dt * a,
            dx: p.dx * a,
            dxx: p.dxx * a,
        }))
    }
}

/// `inner^exponent`, on the branch of `inner.ln`.
#[derive(Debug, Clone)]
pub struct Powered<S> {
    pub inner: S,
    pub exponent: f64,
}

impl<S: FieldSampler> FieldSampler for Powered<S> {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        if self.exponent == 1.0 {
            return self.inner.eval(x, t);
        }
        ensure_finite(self.ln(x, t)?.exp(), "field power")
    }

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.inner.ln(x, t)? * self.exponent)
    }

    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        let inner = self.inner.partials(x, t)?;
        if self.exponent == 1.0 {
            return Some(inner);
        }
        Some(inner.and_then(|p| {
            if p.value.norm() == 0.0 {
                return Err(Error::domain("fractional power of a vanishing field"));
            }
            let r = self.exponent;
            let v = ensure_finite((self.inner.ln(x, t)? * r).exp(), "field power")?;
            let lx = p.dx / p.value;
            Ok(Partials {
                value: v,
                dt: v * r * p.dt / p.value,
                dx: v * r * lx,
                dxx: v * r * (lx * lx * (r - 1.0) + p.dxx / p.value),
            })
        }))
    }
}

/// Pointwise product of two fields.
#[derive(Debug, Clone)]
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: FieldSampler, B: FieldSampler> FieldSampler for Product<A, B> {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.left.eval(x, t)? * self.right.eval(x, t)?)
    }

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.left.ln(x, t)? + self.right.ln(x, t)?)
    }

    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        let u = self.left.partials(x, t)?;
        let v = self.right.partials(x, t)?;
        Some(u.and_then(|u| {
            let v = v?;
            Ok(Partials {
                value: u.value * v.value,
                dt: u.dt * v.value + u.value * v.dt,
                dx: u.dx * v.value + u.value * v.dx,
                dxx: u.dxx * v.value + u.dx * v.dx * 2.0 + u.value * v.dxx,
            })
        }))
    }
}

/// How derivatives of a sampler are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DerivativeMethod {
    /// Use the sampler's exact partials.
    #[default]
    Analytic,
    /// Central differences with Richardson extrapolation.
    ///
    /// The step is `h_base * max(1, |coordinate|)`, halved `richardson_levels` times.
    FiniteDifference { h_base: f64, richardson_levels: u32 },
}

impl DerivativeMethod {
    /// `h_base = eps^(1/8)` with two Richardson levels.
    ///
    /// Two levels leave an `O(h^6)` truncation error against `O(eps / h^2)`
    /// roundoff in the second difference; the two balance near `eps^(1/8)`.
    pub fn finite_difference() -> Self {
        DerivativeMethod::FiniteDifference {
            h_base: f64::EPSILON.powf(0.125),
            richardson_levels: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DerivativeMethod::Analytic => Ok(()),
            DerivativeMethod::FiniteDifference {
                h_base,
                richardson_levels,
            } => {
                if !(h_base > 0.0 && h_base.is_finite()) {
                    Err(Error::Config(format!(
                        "h_base must be positive, got {h_base}"
                    )))
                } else if richardson_levels < 1 {
                    Err(Error::Config("richardson_levels must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    T,
}

/// One partial derivative at a point.
///
/// With [`DerivativeMethod::FiniteDifference`] this is a central-difference
/// estimate extrapolated over `richardson_levels` step halvings. With
/// [`DerivativeMethod::Analytic`] the sampler's exact partial is returned
/// (second time derivatives are not tracked and are rejected).
pub fn fd_partial<S: FieldSampler + ?Sized>(
    sampler: &S,
    point: (f64, f64),
    axis: Axis,
    order: DerivOrder,
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    method.validate()?;
    let (x, t) = point;
    match method {
        DerivativeMethod::Analytic => {
            let p = partials_by(sampler, x, t, method)?;
            match (axis, order) {
                (Axis::X, DerivOrder::First) => Ok(p.dx),
                (Axis::X, DerivOrder::Second) => Ok(p.dxx),
                (Axis::T, DerivOrder::First) => Ok(p.dt),
                (Axis::T, DerivOrder::Second) => Err(Error::Config(
                    "exact second time derivatives are not available".into(),
                )),
            }
        }
        DerivativeMethod::FiniteDifference {
            h_base,
            richardson_levels,
        } => richardson(
            sampler,
            point,
            axis,
            order,
            h_base,
            richardson_levels as usize,
        ),
    }
}

fn richardson<S: FieldSampler + ?Sized>(
    sampler: &S,
    (x, t): (f64, f64),
    axis: Axis,
    order: DerivOrder,
    h_base: f64,
    levels: usize,
) -> Result<ComplexScalar> {
    let coordinate = match axis {
        Axis::X => x,
        Axis::T => t,
    };
    let at = |offset: f64| match axis {
        Axis::X => sampler.eval(x + offset, t),
        Axis::T => sampler.eval(x, t + offset),
    };
    let center = match order {
        DerivOrder::First => None,
        DerivOrder::Second => Some(at(0.0)?),
    };
    let estimate = |h: f64| -> Result<ComplexScalar> {
        let (plus, minus) = (at(h)?, at(-h)?);
        Ok(match center {
            None => (plus - minus) / (2.0 * h),
            Some(f0) => (plus - f0 * 2.0 + minus) / (h * h),
        })
    };

    // Neville-style tableau; both stencils have even error expansions in h.
    let mut h = h_base * coordinate.abs().max(1.0);
    let mut previous: Vec<ComplexScalar> = vec![estimate(h)?];
    for _ in 0..levels {
        h *= 0.5;
        let mut row = vec![estimate(h)?];
        let mut factor = 1.0;
        for k in 0..previous.len() {
            factor *= 4.0;
            let refined = row[k] + (row[k] - previous[k]) / (factor - 1.0);
            row.push(refined);
        }
        previous = row;
    }
    ensure_finite(previous[levels], "finite-difference derivative")
}

/// Partials of `sampler` at a point, by the requested method.
pub fn partials_by<S: FieldSampler + ?Sized>(
    sampler: &S,
    x: f64,
    t: f64,
    method: DerivativeMethod,
) -> Result<Partials> {
    use DerivOrder::{First, Second};
    match method {
        DerivativeMethod::Analytic => sampler.partials(x, t).unwrap_or_else(|| {
            Err(Error::Config(
                "analytic derivatives requested for a sampler without closed-form partials".into(),
            ))
        }),
        DerivativeMethod::FiniteDifference {
            h_base,
            richardson_levels,
        } => {
            method.validate()?;
            let levels = richardson_levels as usize;
            let fd = |axis, order| richardson(sampler, (x, t), axis, order, h_base, levels);
            Ok(Partials {
                value: sampler.eval(x, t)?,
                dt: fd(Axis::T, First)?,
                dx: fd(Axis::X, First)?,
                dxx: fd(Axis::X, Second)?,
            })
        }
    }
}
