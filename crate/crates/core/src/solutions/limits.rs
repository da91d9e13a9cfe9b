//! Distances to the ordinary plane wave and between the two separated families.

use super::{
    classical_plane_wave_field, product_solution_field, q_plane_wave_field, separated_g_field,
    FreeParticleSpec, SolutionKind,
};
use crate::error::{Error, Result};
use crate::integrators::{ConvergenceReport, GridSpec};
use crate::qmath::ComplexScalar;
use crate::residuals::FieldSampler;
use std::fmt;
use std::str::FromStr;

/// A q-family of solutions that reduces to `exp(i(px - Et)/hbar)` at `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitFamily {
    QPlaneWave,
    Product(SolutionKind),
}

impl LimitFamily {
    pub const ALL: [LimitFamily; 3] = [
        LimitFamily::QPlaneWave,
        LimitFamily::Product(SolutionKind::NewEquation),
        LimitFamily::Product(SolutionKind::Nrt),
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitFamily::QPlaneWave => "q-plane",
            LimitFamily::Product(SolutionKind::NewEquation) => "product-new",
            LimitFamily::Product(SolutionKind::Nrt) => "product-nrt",
        }
    }

    pub fn field(self, spec: &FreeParticleSpec) -> Result<Box<dyn FieldSampler + Send>> {
        Ok(match self {
            LimitFamily::QPlaneWave => Box::new(q_plane_wave_field(spec)),
            LimitFamily::Product(kind) => Box::new(product_solution_field(kind, spec)?),
        })
    }
}

impl fmt::Display for LimitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LimitFamily::ALL
            .into_iter()
            .find(|family| family.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown solution family '{s}'")))
    }
}

/// `max |field - exp(i(px - Et)/hbar)|` over the grid points `x_i` and times `t_k`.
pub fn classical_distance<S: FieldSampler + ?Sized>(
    field: &S,
    spec: &FreeParticleSpec,
    grid: &GridSpec,
) -> Result<f64> {
    let classical = classical_plane_wave_field(spec);
    let mut worst: f64 = 0.0;
    for t in grid.ts() {
        for x in grid.xs() {
            let d = (field.eval(x, t)? - classical.eval(x, t)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Classical distance of `family` at `q = 1 + delta` for each delta; the report's
/// resolutions are the deltas and its observed order is the fitted power of `delta`.
pub fn classical_limit_study(
    family: LimitFamily,
    spec: &FreeParticleSpec,
    deltas: &[f64],
    grid: &GridSpec,
) -> Result<ConvergenceReport> {
    grid.validate()?;
    let distances = deltas
        .iter()
        .map(|&delta| {
            let spec = spec.with_q(1.0 + delta);
            classical_distance(family.field(&spec)?.as_ref(), &spec, grid)
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::new(deltas.to_vec(), distances)
}

/// One point of the spatial comparison between the two separated families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialComparison {
    pub x: f64,
    pub g_new: ComplexScalar,
    pub g_nrt: ComplexScalar,
}

impl SpatialComparison {
    pub fn difference(&self) -> f64 {
        (self.g_new - self.g_nrt).norm()
    }
}

/// Both spatial factors at each `x`.
pub fn compare_spatial(
    spec: &FreeParticleSpec,
    xs: impl IntoIterator<Item = f64>,
) -> Result<Vec<SpatialComparison>> {
    let g_new = separated_g_field(SolutionKind::NewEquation, spec)?;
    let g_nrt = separated_g_field(SolutionKind::Nrt, spec)?;
    xs.into_iter()
        .map(|x| {
            Ok(SpatialComparison {
                x,
                g_new: g_new.eval(x, 0.0).map_err(|e| e.at(x, 0.0))?,
                g_nrt: g_nrt.eval(x, 0.0).map_err(|e| e.at(x, 0.0))?,
            })
        })
        .collect()
}

/// `max_x |g_new(x) - g_nrt(x)|`.
pub fn max_spatial_difference(
    spec: &FreeParticleSpec,
    xs: impl IntoIterator<Item = f64>,
) -> Result<f64> {
    Ok(compare_spatial(spec, xs)?
        .iter()
        .map(SpatialComparison::difference)
        .fold(0.0, f64::max))
}
