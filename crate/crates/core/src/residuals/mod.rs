//! Scaled residuals of the hypergeometric ODE and of the nonlinear
//! Schrodinger equations, for any [`FieldSampler`].
//!
//! Every residual is `|lhs - rhs| / max(1, |field|)`. Time-dependent equations
//! are written for the field normalized by its value at the origin.

mod report;
mod sampler;

pub use report::{scan_residual, EquationParams, EquationTag, ResidualReport};
pub use sampler::{
    fd_partial, partials_by, Axis, DerivativeMethod, FieldSampler, FnSampler, Partials, Powered,
    Product, Scaled,
};

use crate::error::{Error, Result};
use crate::qmath::{c, ensure_finite, hyp2f1, hyp2f1_deriv, ComplexScalar, DerivOrder, HypParams};
use crate::solutions::SolutionKind;
use std::fmt;
use std::sync::Arc;

/// Real potential `V(x)` of `H = -hbar^2/(2m) d^2/dx^2 + V(x)`.
#[derive(Clone)]
pub struct Potential(Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>);

impl Potential {
    pub fn free() -> Self {
        Potential(None)
    }

    pub fn new(v: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential(Some(Arc::new(v)))
    }

    /// `V(x) = k x^2 / 2`.
    pub fn harmonic(k: f64) -> Self {
        Potential::new(move |x| 0.5 * k * x * x)
    }

    pub fn is_free(&self) -> bool {
        self.0.is_none()
    }

    #[inline]
    pub fn at(&self, x: f64) -> f64 {
        self.0.as_ref().map_or(0.0, |v| v(x))
    }
}

impl Default for Potential {
    fn default() -> Self {
        Potential::free()
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_free() {
            "Potential(free)"
        } else {
            "Potential(custom)"
        })
    }
}

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);

fn nonzero(value: ComplexScalar, what: &str) -> Result<ComplexScalar> {
    if value.norm() == 0.0 {
        Err(Error::domain(format!(
            "{what} vanishes; its fractional power is undefined"
        )))
    } else {
        ensure_finite(value, what)
    }
}

fn scaled(residual: ComplexScalar, field: ComplexScalar) -> ComplexScalar {
    residual / field.norm().max(1.0)
}

fn check_nrt_q(q: f64) -> Result<()> {
    SolutionKind::Nrt.check_time_q(q)
}

/// `sampler / sampler(0, 0)`, with the logarithm shifted accordingly.
struct Normalized<S> {
    inner: S,
    norm: ComplexScalar,
    norm_ln: ComplexScalar,
}

impl<S: FieldSampler> Normalized<S> {
    fn new(inner: S) -> Result<Self> {
        let norm = nonzero(inner.eval(0.0, 0.0)?, "normalizer psi(0,0)")?;
        let norm_ln = inner.ln(0.0, 0.0)?;
        Ok(Normalized {
            inner,
            norm,
            norm_ln,
        })
    }
}

impl<S: FieldSampler> FieldSampler for Normalized<S> {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.inner.eval(x, t)? / self.norm)
    }
    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        Ok(self.inner.ln(x, t)? - self.norm_ln)
    }
    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        let n = self.norm;
        Some(self.inner.partials(x, t)?.map(|p| Partials {
            value: p.value / n,
            dt: p.dt / n,
            dx: p.dx / n,
            dxx: p.dxx / n,
        }))
    }
}

fn d_dt<S: FieldSampler + ?Sized>(
    s: &S,
    x: f64,
    t: f64,
    m: DerivativeMethod,
) -> Result<ComplexScalar> {
    fd_partial(s, (x, t), Axis::T, DerivOrder::First, m)
}

fn d2_dx2<S: FieldSampler + ?Sized>(
    s: &S,
    x: f64,
    t: f64,
    m: DerivativeMethod,
) -> Result<ComplexScalar> {
    fd_partial(s, (x, t), Axis::X, DerivOrder::Second, m)
}

/// `|z(1-z) F'' + [g - (a+b+1) z] F' - a b F| / max(1, |F|)`.
pub fn hypergeom_ode_residual(params: &HypParams) -> Result<f64> {
    let HypParams {
        alpha,
        beta,
        gamma,
        z,
    } = *params;
    let f = hyp2f1(params)?;
    let f1 = hyp2f1_deriv(params, DerivOrder::First)?;
    let f2 = hyp2f1_deriv(params, DerivOrder::Second)?;
    let lhs = z * (c(1.0, 0.0) - z) * f2 + (c(gamma, 0.0) - z * (alpha + beta + 1.0)) * f1
        - f * (alpha * beta);
    Ok(lhs.norm() / f.norm().max(1.0))
}

/// Residual of `i hbar kappa d/dt [U^a] = H [U^b]` with `U = psi / psi(0,0)`.
#[allow(clippy::too_many_arguments)]
fn power_form_residual<S: FieldSampler + ?Sized>(
    sampler: &S,
    kappa: f64,
    time_exponent: f64,
    space_exponent: f64,
    m: f64,
    hbar: f64,
    potential: &Potential,
    (x, t): (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    let value = nonzero(sampler.eval(x, t)?, "field value")?;
    let normalized = Normalized::new(sampler)?;
    let time_side = Powered {
        inner: &normalized,
        exponent: time_exponent,
    };
    let space_side = Powered {
        inner: &normalized,
        exponent: space_exponent,
    };
    let lhs = I * (hbar * kappa) * d_dt(&time_side, x, t, method)?;
    let rhs = d2_dx2(&space_side, x, t, method)? * (-hbar * hbar / (2.0 * m))
        + space_side.eval(x, t)? * potential.at(x);
    Ok(scaled(lhs - rhs, value))
}

/// `i hbar q dF/dt - F^(1-q) H0 F`, with `H0` the free-particle Hamiltonian.
pub fn new_nlse_residual<S: FieldSampler + ?Sized>(
    sampler: &S,
    q: f64,
    m: f64,
    hbar: f64,
    (x, t): (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    let value = nonzero(sampler.eval(x, t)?, "field value")?;
    let power = ensure_finite((sampler.ln(x, t)? * (1.0 - q)).exp(), "F^(1-q)")?;
    let lhs = I * (hbar * q) * d_dt(sampler, x, t, method)?;
    let rhs = power * d2_dx2(sampler, x, t, method)? * (-hbar * hbar / (2.0 * m));
    Ok(scaled(lhs - rhs, value))
}

/// `i hbar d/dt [psi/psi00]^q - H [psi/psi00]`.
pub fn new_nlse_psi_residual<S: FieldSampler + ?Sized>(
    sampler_psi: &S,
    q: f64,
    m: f64,
    hbar: f64,
    potential: &Potential,
    point: (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    power_form_residual(sampler_psi, 1.0, q, 1.0, m, hbar, potential, point, method)
}

/// `i hbar d/dt [phi/phi00] - H [phi/phi00]^(1/q)`.
pub fn new_nlse_phi_residual<S: FieldSampler + ?Sized>(
    sampler_phi: &S,
    q: f64,
    m: f64,
    hbar: f64,
    potential: &Potential,
    point: (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    if q == 0.0 {
        return Err(Error::domain("q = 0 is excluded (exponent 1/q)"));
    }
    power_form_residual(
        sampler_phi,
        1.0,
        1.0,
        1.0 / q,
        m,
        hbar,
        potential,
        point,
        method,
    )
}

/// `i hbar (2-q) d/dt [psi/psi00] - H [psi/psi00]^(2-q)`.
pub fn nrt_residual<S: FieldSampler + ?Sized>(
    sampler_psi: &S,
    q: f64,
    m: f64,
    hbar: f64,
    potential: &Potential,
    point: (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    check_nrt_q(q)?;
    power_form_residual(
        sampler_psi,
        2.0 - q,
        1.0,
        2.0 - q,
        m,
        hbar,
        potential,
        point,
        method,
    )
}

/// `i hbar (2-q) d/dt [phi/phi00]^(1/(2-q)) - H [phi/phi00]`.
pub fn nrt_phi_residual<S: FieldSampler + ?Sized>(
    sampler_phi: &S,
    q: f64,
    m: f64,
    hbar: f64,
    potential: &Potential,
    point: (f64, f64),
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    check_nrt_q(q)?;
    let kappa = 2.0 - q;
    power_form_residual(
        sampler_phi,
        kappa,
        1.0 / kappa,
        1.0,
        m,
        hbar,
        potential,
        point,
        method,
    )
}

/// Residual of the temporal ODE, reading `f` along `x = 0`.
///
/// * new equation: `i hbar d/dt f^q - lambda f`
/// * NRT: `i hbar (2-q) df/dt - lambda f^(2-q)`
pub fn separated_time_residual<S: FieldSampler + ?Sized>(
    kind: SolutionKind,
    f: &S,
    q: f64,
    lambda: f64,
    hbar: f64,
    t: f64,
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    let value = nonzero(f.eval(0.0, t)?, "f(t)")?;
    let residual = match kind {
        SolutionKind::NewEquation => {
            let fq = Powered {
                inner: f,
                exponent: q,
            };
            I * hbar * d_dt(&fq, 0.0, t, method)? - value * lambda
        }
        SolutionKind::Nrt => {
            check_nrt_q(q)?;
            let f2q = Powered {
                inner: f,
                exponent: 2.0 - q,
            };
            I * (hbar * (2.0 - q)) * d_dt(f, 0.0, t, method)? - f2q.eval(0.0, t)? * lambda
        }
    };
    Ok(scaled(residual, value))
}

/// Residual of the spatial ODE, reading `g` along `t = 0`.
///
/// * new equation: `-hbar^2/(2m) g'' - lambda g^q`
/// * NRT: `-hbar^2/(2m) (g^(2-q))'' - lambda g`
#[allow(clippy::too_many_arguments)]
pub fn separated_space_residual<S: FieldSampler + ?Sized>(
    kind: SolutionKind,
    g: &S,
    q: f64,
    lambda: f64,
    m: f64,
    hbar: f64,
    x: f64,
    method: DerivativeMethod,
) -> Result<ComplexScalar> {
    let value = nonzero(g.eval(x, 0.0)?, "g(x)")?;
    let kinetic = -hbar * hbar / (2.0 * m);
    let residual = match kind {
        SolutionKind::NewEquation => {
            let gq = Powered {
                inner: g,
                exponent: q,
            };
            d2_dx2(g, x, 0.0, method)? * kinetic - gq.eval(x, 0.0)? * lambda
        }
        SolutionKind::Nrt => {
            check_nrt_q(q)?;
            let g2q = Powered {
                inner: g,
                exponent: 2.0 - q,
            };
            d2_dx2(&g2q, x, 0.0, method)? * kinetic - value * lambda
        }
    };
    Ok(scaled(residual, value))
}
