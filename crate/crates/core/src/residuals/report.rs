use super::{
    new_nlse_phi_residual, new_nlse_psi_residual, new_nlse_residual, nrt_phi_residual,
    nrt_residual, separated_space_residual, separated_time_residual, DerivativeMethod,
    FieldSampler, Potential,
};
use crate::error::{Error, Result};
use crate::integrators::GridSpec;
use crate::solutions::{FreeParticleSpec, SolutionKind};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// The differential equations that can be scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationTag {
    /// `i hbar q dF/dt = F^(1-q) H0 F`
    NewWave,
    /// `i hbar d/dt [psi]^q = H psi`
    NewPsi,
    /// `i hbar d/dt phi = H [phi]^(1/q)`
    NewPhi,
    /// `i hbar (2-q) d/dt psi = H [psi]^(2-q)`
    Nrt,
    /// `i hbar (2-q) d/dt [phi]^(1/(2-q)) = H phi`
    NrtPhi,
    NewTime,
    NewSpace,
    NrtTime,
    NrtSpace,
}

impl EquationTag {
    pub const ALL: [EquationTag; 9] = [
        EquationTag::NewWave,
        EquationTag::NewPsi,
        EquationTag::NewPhi,
        EquationTag::Nrt,
        EquationTag::NrtPhi,
        EquationTag::NewTime,
        EquationTag::NewSpace,
        EquationTag::NrtTime,
        EquationTag::NrtSpace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EquationTag::NewWave => "new",
            EquationTag::NewPsi => "new-psi",
            EquationTag::NewPhi => "new-phi",
            EquationTag::Nrt => "nrt",
            EquationTag::NrtPhi => "nrt-phi",
            EquationTag::NewTime => "new-time",
            EquationTag::NewSpace => "new-space",
            EquationTag::NrtTime => "nrt-time",
            EquationTag::NrtSpace => "nrt-space",
        }
    }

    pub fn kind(self) -> SolutionKind {
        match self {
            EquationTag::NewWave
            | EquationTag::NewPsi
            | EquationTag::NewPhi
            | EquationTag::NewTime
            | EquationTag::NewSpace => SolutionKind::NewEquation,
            _ => SolutionKind::Nrt,
        }
    }

    fn samples_time_only(self) -> bool {
        matches!(self, EquationTag::NewTime | EquationTag::NrtTime)
    }

    fn samples_space_only(self) -> bool {
        matches!(self, EquationTag::NewSpace | EquationTag::NrtSpace)
    }
}

impl fmt::Display for EquationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EquationTag::ALL
            .into_iter()
            .find(|tag| tag.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown equation tag '{s}'")))
    }
}

/// Coefficients shared by all residuals.
#[derive(Debug, Clone)]
pub struct EquationParams {
    pub q: f64,
    pub m: f64,
    pub hbar: f64,
    /// Separation constant; only the separated equations read it.
    pub lambda: f64,
    pub potential: Potential,
}

impl EquationParams {
    /// Free particle with `lambda = E = p^2 / 2m`.
    pub fn free_particle(spec: &FreeParticleSpec) -> Self {
        EquationParams {
            q: spec.q,
            m: spec.m,
            hbar: spec.hbar,
            lambda: spec.energy(),
            potential: Potential::free(),
        }
    }
}

/// Max-abs and L2 summary of a residual over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub l2: f64,
    pub worst_point: (f64, f64),
    pub n_samples: usize,
    pub equation_tag: String,
}

impl ResidualReport {
    /// Reduces `((x, t), |residual|)` samples in order.
    pub fn from_samples(
        equation_tag: impl Into<String>,
        samples: impl IntoIterator<Item = ((f64, f64), f64)>,
    ) -> Self {
        let mut report = ResidualReport {
            max_abs: 0.0,
            l2: 0.0,
            worst_point: (f64::NAN, f64::NAN),
            n_samples: 0,
            equation_tag: equation_tag.into(),
        };
        let mut sum_sq = 0.0;
        for (point, r) in samples {
            if report.n_samples == 0 || r > report.max_abs {
                report.max_abs = r;
                report.worst_point = point;
            }
            sum_sq += r * r;
            report.n_samples += 1;
        }
        report.l2 = sum_sq.sqrt();
        report
    }
}

fn residual_at(
    tag: EquationTag,
    sampler: &dyn FieldSampler,
    params: &EquationParams,
    (x, t): (f64, f64),
    method: DerivativeMethod,
) -> Result<f64> {
    let EquationParams {
        q,
        m,
        hbar,
        lambda,
        ref potential,
    } = *params;
    let r = match tag {
        EquationTag::NewWave => new_nlse_residual(sampler, q, m, hbar, (x, t), method)?,
        EquationTag::NewPsi => {
            new_nlse_psi_residual(sampler, q, m, hbar, potential, (x, t), method)?
        }
        EquationTag::NewPhi => {
            new_nlse_phi_residual(sampler, q, m, hbar, potential, (x, t), method)?
        }
        EquationTag::Nrt => nrt_residual(sampler, q, m, hbar, potential, (x, t), method)?,
        EquationTag::NrtPhi => nrt_phi_residual(sampler, q, m, hbar, potential, (x, t), method)?,
        EquationTag::NewTime | EquationTag::NrtTime => {
            separated_time_residual(tag.kind(), sampler, q, lambda, hbar, t, method)?
        }
        EquationTag::NewSpace | EquationTag::NrtSpace => {
            separated_space_residual(tag.kind(), sampler, q, lambda, m, hbar, x, method)?
        }
    };
    Ok(r.norm())
}

/// Evaluates a residual on every grid point (time grid `t_k = k dt`).
///
/// Separated time equations are sampled along `x = 0` only and separated
/// space equations along `t = 0` only. Points are evaluated in parallel and
/// reduced in grid order, so the report does not depend on scheduling.
pub fn scan_residual(
    tag: EquationTag,
    sampler: &dyn FieldSampler,
    params: &EquationParams,
    grid: &GridSpec,
    method: DerivativeMethod,
) -> Result<ResidualReport> {
    grid.validate()?;
    method.validate()?;
    let xs: Vec<f64> = if tag.samples_time_only() {
        vec![0.0]
    } else {
        grid.xs().collect()
    };
    let ts: Vec<f64> = if tag.samples_space_only() {
        vec![0.0]
    } else {
        grid.ts().collect()
    };
    let points: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (x, t)))
        .collect();
    let values: Vec<Result<f64>> = points
        .par_iter()
        .map(|&p| residual_at(tag, sampler, params, p, method))
        .collect();
    let mut samples = Vec::with_capacity(points.len());
    for (&(x, t), value) in points.iter().zip(values) {
        samples.push(((x, t), value.map_err(|e| e.at(x, t))?));
    }
    Ok(ResidualReport::from_samples(tag.name(), samples))
}
