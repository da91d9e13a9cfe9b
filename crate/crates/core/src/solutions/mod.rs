//! Closed-form free-particle solutions.
//!
//! Every solution here is built from one shape, `(1 + kx x + kt t)^s`, or its
//! `q = 1` limit `exp(kx x + kt t)`. [`ClosedForm`] carries that shape together
//! with exact partials and the logarithm continued from the origin, so it can be
//! fed straight into the residual checkers.

use crate::error::{Error, Result};
use crate::qmath::{
    c, ensure_finite, hyp2f1, is_classical, principal_ln, ComplexScalar, HypParams,
};
use crate::residuals::{FieldSampler, Partials, Product, Scaled};

mod limits;

pub use limits::{
    classical_distance, classical_limit_study, compare_spatial, max_spatial_difference,
    LimitFamily, SpatialComparison,
};

/// Physical parameters of a free particle. The energy is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticleSpec {
    pub q: f64,
    pub p: f64,
    pub m: f64,
    pub hbar: f64,
}

impl FreeParticleSpec {
    pub fn new(q: f64, p: f64, m: f64, hbar: f64) -> Result<Self> {
        let spec = FreeParticleSpec { q, p, m, hbar };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.p.is_finite()) {
            return Err(Error::domain("q and p must be finite"));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::domain(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::domain(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        Ok(())
    }

    /// `E = p^2 / 2m`, which is also the separation constant.
    pub fn energy(&self) -> f64 {
        self.p * self.p / (2.0 * self.m)
    }

    pub fn with_q(self, q: f64) -> Self {
        FreeParticleSpec { q, ..self }
    }
}

impl Default for FreeParticleSpec {
    /// `q = 1.5`, `p = 1`, `m = 0.5`, `hbar = 1`, so `E = 1`.
    fn default() -> Self {
        FreeParticleSpec {
            q: 1.5,
            p: 1.0,
            m: 0.5,
            hbar: 1.0,
        }
    }
}

/// Which nonlinear equation a separated solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    /// `i hbar d/dt [psi]^q = H psi`.
    NewEquation,
    /// `i hbar (2 - q) d/dt psi = H [psi]^(2 - q)`.
    Nrt,
}

impl SolutionKind {
    pub const ALL: [SolutionKind; 2] = [SolutionKind::NewEquation, SolutionKind::Nrt];

    pub fn name(self) -> &'static str {
        match self {
            SolutionKind::NewEquation => "new",
            SolutionKind::Nrt => "nrt",
        }
    }

    /// Precondition on `q` for the time factor.
    pub fn check_time_q(self, q: f64) -> Result<()> {
        match self {
            SolutionKind::NewEquation if q == 0.0 => Err(Error::domain(
                "q = 0 is excluded for the new equation (division by q)",
            )),
            SolutionKind::Nrt if q == 2.0 => Err(Error::domain(
                "q = 2 is excluded for the NRT equation (requires q != 2)",
            )),
            _ => Ok(()),
        }
    }

    /// Precondition on `q` for the space factor (real square roots only).
    pub fn check_space_q(self, q: f64) -> Result<()> {
        match self {
            SolutionKind::NewEquation if q <= -1.0 => Err(Error::domain(format!(
                "q = {q}: the new-equation space factor requires q > -1"
            ))),
            SolutionKind::Nrt if (2.0 - q) * (3.0 - q) <= 0.0 => Err(Error::domain(format!(
                "q = {q}: the NRT space factor requires (2 - q)(3 - q) > 0 (q != 2)"
            ))),
            _ => Ok(()),
        }
    }

    /// Denominator `d` of the time factor `[1 + i (1-q)/d E t / hbar]^(1/(q-1))`.
    fn time_denominator(self, q: f64) -> f64 {
        match self {
            SolutionKind::NewEquation => q,
            SolutionKind::Nrt => 2.0 - q,
        }
    }

    /// Denominator `D` of the space factor `[1 + i (1-q)/D p x / hbar]^(2/(1-q))`.
    fn space_denominator(self, q: f64) -> f64 {
        match self {
            SolutionKind::NewEquation => (2.0 * (q + 1.0)).sqrt(),
            SolutionKind::Nrt => (2.0 * (2.0 - q) * (3.0 - q)).sqrt(),
        }
    }
}

/// `(1 + kx x + kt t)^exponent`, or `exp(kx x + kt t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    PowerLaw {
        kx: ComplexScalar,
        kt: ComplexScalar,
        exponent: f64,
    },
    Exponential {
        kx: ComplexScalar,
        kt: ComplexScalar,
    },
}

impl ClosedForm {
    fn base(kx: ComplexScalar, kt: ComplexScalar, x: f64, t: f64) -> ComplexScalar {
        c(1.0, 0.0) + kx * x + kt * t
    }
}

impl FieldSampler for ClosedForm {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        ensure_finite(self.ln(x, t)?.exp(), "closed-form value")
    }

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        match *self {
            ClosedForm::PowerLaw { kx, kt, exponent } => {
                Ok(principal_ln(Self::base(kx, kt, x, t))? * exponent)
            }
            ClosedForm::Exponential { kx, kt } => Ok(kx * x + kt * t),
        }
    }

    fn partials(&self, x: f64, t: f64) -> Option<Result<Partials>> {
        Some(self.eval(x, t).map(|v| match *self {
            ClosedForm::PowerLaw { kx, kt, exponent } => {
                let base = Self::base(kx, kt, x, t);
                let s = exponent;
                Partials {
                    value: v,
                    dt: v * kt * s / base,
                    dx: v * kx * s / base,
                    dxx: v * kx * kx * (s * (s - 1.0)) / (base * base),
                }
            }
            ClosedForm::Exponential { kx, kt } => Partials {
                value: v,
                dt: v * kt,
                dx: v * kx,
                dxx: v * kx * kx,
            },
        }))
    }
}

/// `exp(i (p x - E t) / hbar)`.
pub fn classical_plane_wave_field(spec: &FreeParticleSpec) -> ClosedForm {
    ClosedForm::Exponential {
        kx: c(0.0, spec.p / spec.hbar),
        kt: c(0.0, -spec.energy() / spec.hbar),
    }
}

/// q-plane wave `[1 + (i/hbar)(1-q)(p x - E t)]^(1/(1-q))`.
pub fn q_plane_wave_field(spec: &FreeParticleSpec) -> ClosedForm {
    let q = spec.q;
    if is_classical(q) {
        return classical_plane_wave_field(spec);
    }
    let k = c(0.0, (1.0 - q) / spec.hbar);
    ClosedForm::PowerLaw {
        kx: k * spec.p,
        kt: -k * spec.energy(),
        exponent: 1.0 / (1.0 - q),
    }
}

/// Separated time factor `f(t)` for the given equation.
pub fn separated_f_field(kind: SolutionKind, spec: &FreeParticleSpec) -> Result<ClosedForm> {
    spec.validate()?;
    let q = spec.q;
    kind.check_time_q(q)?;
    let energy = spec.energy();
    if is_classical(q) {
        return Ok(ClosedForm::Exponential {
            kx: c(0.0, 0.0),
            kt: c(0.0, -energy / spec.hbar),
        });
    }
    let d = kind.time_denominator(q);
    Ok(ClosedForm::PowerLaw {
        kx: c(0.0, 0.0),
        kt: c(0.0, (1.0 - q) / d * energy / spec.hbar),
        exponent: 1.0 / (q - 1.0),
    })
}

/// Separated space factor `g(x)` for the given equation.
pub fn separated_g_field(kind: SolutionKind, spec: &FreeParticleSpec) -> Result<ClosedForm> {
    spec.validate()?;
    let q = spec.q;
    kind.check_space_q(q)?;
    if is_classical(q) {
        return Ok(ClosedForm::Exponential {
            kx: c(0.0, spec.p / spec.hbar),
            kt: c(0.0, 0.0),
        });
    }
    let d = kind.space_denominator(q);
    Ok(ClosedForm::PowerLaw {
        kx: c(0.0, (1.0 - q) / d * spec.p / spec.hbar),
        kt: c(0.0, 0.0),
        exponent: 2.0 / (1.0 - q),
    })
}

pub type ProductSolution = Product<ClosedForm, ClosedForm>;

/// `f(t) g(x)`; both factors are 1 at the origin.
pub fn product_solution_field(
    kind: SolutionKind,
    spec: &FreeParticleSpec,
) -> Result<ProductSolution> {
    Ok(Product {
        left: separated_f_field(kind, spec)?,
        right: separated_g_field(kind, spec)?,
    })
}

/// `A` times the q-plane wave.
pub fn amplitude_wave_field(
    spec: &FreeParticleSpec,
    amplitude: ComplexScalar,
) -> Result<Scaled<ClosedForm>> {
    if amplitude.norm() == 0.0 {
        return Err(Error::domain(
            "amplitude must be nonzero (F(0,0) = A normalizes the field)",
        ));
    }
    ensure_finite(amplitude, "amplitude")?;
    Ok(Scaled {
        amplitude,
        inner: q_plane_wave_field(spec),
    })
}

/// The q-plane wave evaluated as `2F1(1/(q-1), gamma; gamma; (i/hbar)(q-1)(p x - E t))`.
#[derive(Debug, Clone, Copy)]
pub struct HypergeometricWave {
    pub spec: FreeParticleSpec,
    pub gamma: f64,
}

impl HypergeometricWave {
    fn params(&self, x: f64, t: f64) -> Result<HypParams> {
        let FreeParticleSpec { q, p, hbar, .. } = self.spec;
        let phase = p * x - self.spec.energy() * t;
        HypParams::new(
            1.0 / (q - 1.0),
            self.gamma,
            self.gamma,
            c(0.0, (q - 1.0) * phase / hbar),
        )
    }
}

impl FieldSampler for HypergeometricWave {
    fn eval(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        if is_classical(self.spec.q) {
            return classical_plane_wave_field(&self.spec).eval(x, t);
        }
        hyp2f1(&self.params(x, t)?)
    }

    fn ln(&self, x: f64, t: f64) -> Result<ComplexScalar> {
        if is_classical(self.spec.q) {
            return classical_plane_wave_field(&self.spec).ln(x, t);
        }
        // the closed form the degenerate path evaluates is (1 - z)^(-alpha)
        let params = self.params(x, t)?;
        Ok(principal_ln(c(1.0, 0.0) - params.z)? * -params.alpha)
    }
}

pub fn classical_plane_wave(spec: &FreeParticleSpec, x: f64, t: f64) -> Result<ComplexScalar> {
    classical_plane_wave_field(spec).eval(x, t)
}

pub fn q_plane_wave(spec: &FreeParticleSpec, x: f64, t: f64) -> Result<ComplexScalar> {
    spec.validate()?;
    q_plane_wave_field(spec).eval(x, t)
}

pub fn q_plane_wave_hypergeometric(
    spec: &FreeParticleSpec,
    gamma: f64,
    x: f64,
    t: f64,
) -> Result<ComplexScalar> {
    spec.validate()?;
    HypergeometricWave { spec: *spec, gamma }.eval(x, t)
}

pub fn amplitude_wave(
    spec: &FreeParticleSpec,
    amplitude: ComplexScalar,
    x: f64,
    t: f64,
) -> Result<ComplexScalar> {
    spec.validate()?;
    amplitude_wave_field(spec, amplitude)?.eval(x, t)
}

pub fn separated_f(kind: SolutionKind, spec: &FreeParticleSpec, t: f64) -> Result<ComplexScalar> {
    separated_f_field(kind, spec)?.eval(0.0, t)
}

pub fn separated_g(kind: SolutionKind, spec: &FreeParticleSpec, x: f64) -> Result<ComplexScalar> {
    separated_g_field(kind, spec)?.eval(x, 0.0)
}

pub fn product_solution(
    kind: SolutionKind,
    spec: &FreeParticleSpec,
    x: f64,
    t: f64,
) -> Result<ComplexScalar> {
    product_solution_field(kind, spec)?.eval(x, t)
}
