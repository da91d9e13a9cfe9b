//! Method-of-lines propagation of the nonlinear equations
//!
//! ```text
//! new: i hbar       d/dt U = H [U]^(1/q)       (U = phi / phi(0,0))
//! NRT: i hbar (2-q) d/dt U = H [U]^(2-q)       (U = psi / psi(0,0))
//! ```
//!
//! Second-order central Laplacian on interior points, RK4 in time, Dirichlet
//! values injected from a boundary sampler at every stage.
//!
//! The fractional power of the field is taken on a branch that is continued in
//! time: each point keeps the logarithm of its value, and a stage value is
//! related to the start-of-step value by the principal logarithm of their ratio.
//! The initial logarithms are unwrapped outwards from the grid point nearest
//! `x = 0`. Boundary powers come from the boundary sampler's own logarithm.

use super::grid::WaveField;
use super::ode::rk4_step_with;
use crate::error::{Error, Result};
use crate::qmath::{c, ln_continued, principal_ln, ComplexScalar};
use crate::residuals::{FieldSampler, Potential, Powered};
use crate::solutions::{q_plane_wave_field, ClosedForm, FreeParticleSpec, SolutionKind};

/// Coefficients of one propagation run.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub equation: SolutionKind,
    pub q: f64,
    pub m: f64,
    pub hbar: f64,
    pub potential: Potential,
    /// Value of the field at the origin at `t = 0`; the equation is written for
    /// the field divided by it.
    pub normalizer: ComplexScalar,
}

impl Propagation {
    pub fn free(equation: SolutionKind, spec: &FreeParticleSpec) -> Self {
        Propagation {
            equation,
            q: spec.q,
            m: spec.m,
            hbar: spec.hbar,
            potential: Potential::free(),
            normalizer: c(1.0, 0.0),
        }
    }

    /// `(kappa, r)` in `i hbar kappa dU/dt = H U^r`.
    fn coefficients(&self) -> Result<(f64, f64)> {
        match self.equation {
            SolutionKind::NewEquation => {
                if self.q == 0.0 {
                    return Err(Error::domain("q = 0 is excluded for the new equation"));
                }
                Ok((1.0, 1.0 / self.q))
            }
            SolutionKind::Nrt => {
                SolutionKind::Nrt.check_time_q(self.q)?;
                Ok((2.0 - self.q, 2.0 - self.q))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.hbar > 0.0) {
            return Err(Error::domain("mass and hbar must be positive"));
        }
        if self.normalizer.norm() == 0.0 {
            return Err(Error::domain("normalizer must be nonzero"));
        }
        Ok(())
    }
}

/// The propagated variable whose exact evolution is the q-plane wave:
/// `psi^q` for the new equation, `psi` itself for NRT.
pub fn manufactured_state(equation: SolutionKind, spec: &FreeParticleSpec) -> Powered<ClosedForm> {
    Powered {
        inner: q_plane_wave_field(spec),
        exponent: match equation {
            SolutionKind::NewEquation => spec.q,
            SolutionKind::Nrt => 1.0,
        },
    }
}

fn propagation_error(step: usize, index: usize, reason: impl Into<String>) -> Error {
    Error::Propagation {
        step,
        index,
        reason: reason.into(),
    }
}

fn unwrap_initial_logs(values: &[ComplexScalar], anchor: usize) -> Result<Vec<ComplexScalar>> {
    let mut logs = vec![c(0.0, 0.0); values.len()];
    let zero = |i: usize| propagation_error(0, i, "initial field vanishes");
    logs[anchor] = principal_ln(values[anchor]).map_err(|_| zero(anchor))?;
    for i in anchor + 1..values.len() {
        logs[i] = ln_continued(values[i], values[i - 1], logs[i - 1]).map_err(|_| zero(i))?;
    }
    for i in (0..anchor).rev() {
        logs[i] = ln_continued(values[i], values[i + 1], logs[i + 1]).map_err(|_| zero(i))?;
    }
    Ok(logs)
}

/// Propagates `initial` for `grid.n_steps` steps of `grid.dt`; returns every frame,
/// starting with the initial one.
pub fn propagate<B: FieldSampler + ?Sized>(
    problem: &Propagation,
    initial: &WaveField,
    boundary: &B,
) -> Result<Vec<WaveField>> {
    problem.validate()?;
    let (kappa, r) = problem.coefficients()?;
    let grid = initial.grid;
    grid.validate()?;
    let n = grid.n_points;
    let last = n - 1;
    let dx = grid.dx();
    let xs: Vec<f64> = grid.xs().collect();
    let potential: Vec<f64> = xs.iter().map(|&x| problem.potential.at(x)).collect();
    let kinetic = -problem.hbar * problem.hbar / (2.0 * problem.m);
    let prefactor = c(0.0, -1.0 / (problem.hbar * kappa));
    let norm = problem.normalizer;
    let norm_ln = principal_ln(norm)?;

    // normalized boundary value and its power at time t
    let edge = |index: usize, t: f64, step: usize| -> Result<(ComplexScalar, ComplexScalar)> {
        let x = xs[index];
        let wrap = |e: Error| propagation_error(step, index, format!("boundary source: {e}"));
        let value = boundary.eval(x, t).map_err(wrap)? / norm;
        let power = if r == 1.0 {
            value
        } else {
            ((boundary.ln(x, t).map_err(wrap)? - norm_ln) * r).exp()
        };
        Ok((value, power))
    };

    let mut state: Vec<ComplexScalar> = initial.values.iter().map(|v| v / norm).collect();
    let anchor = xs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map_or(0, |(i, _)| i);
    let mut logs = if r == 1.0 {
        Vec::new()
    } else {
        unwrap_initial_logs(&state, anchor)?
    };

    let mut frames = Vec::with_capacity(grid.n_steps + 1);
    frames.push(initial.clone());
    let mut t = initial.t;
    for step in 0..grid.n_steps {
        let dt = grid.dt;
        let start = state.clone();
        let start_logs = &logs;
        let mut stage_power = vec![c(0.0, 0.0); n];
        let mut edge_power = [c(0.0, 0.0); 2];
        let mut edge_time = f64::NAN;

        let constrain = |stage_t: f64, y: &mut [ComplexScalar]| -> Result<()> {
            let (v0, _) = edge(0, stage_t, step + 1)?;
            let (vn, _) = edge(last, stage_t, step + 1)?;
            y[0] = v0;
            y[last] = vn;
            Ok(())
        };
        let rhs = |stage_t: f64, y: &[ComplexScalar]| -> Result<Vec<ComplexScalar>> {
            if stage_t != edge_time {
                edge_power = [
                    edge(0, stage_t, step + 1)?.1,
                    edge(last, stage_t, step + 1)?.1,
                ];
                edge_time = stage_t;
            }
            stage_power[0] = edge_power[0];
            stage_power[last] = edge_power[1];
            for j in 1..last {
                stage_power[j] = if r == 1.0 {
                    y[j]
                } else {
                    let ln = ln_continued(y[j], start[j], start_logs[j])
                        .map_err(|_| propagation_error(step + 1, j, "field reached zero"))?;
                    (ln * r).exp()
                };
            }
            let mut dy = vec![c(0.0, 0.0); n];
            let inv_dx2 = 1.0 / (dx * dx);
            for j in 1..last {
                let laplacian =
                    (stage_power[j - 1] - stage_power[j] * 2.0 + stage_power[j + 1]) * inv_dx2;
                let h_applied = laplacian * kinetic + stage_power[j] * potential[j];
                dy[j] = prefactor * h_applied;
            }
            Ok(dy)
        };

        let next = rk4_step_with(&state, rhs, constrain, t, dt).map_err(|e| match e {
            Error::BlowUp { stage } => propagation_error(
                step + 1,
                0,
                format!("non-finite value in RK4 stage {stage}"),
            ),
            other => other,
        })?;
        if let Some(j) = next
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(propagation_error(step + 1, j, "field is not finite"));
        }
        if r != 1.0 {
            let mut next_logs = Vec::with_capacity(n);
            for j in 0..n {
                let ln = ln_continued(next[j], start[j], logs[j])
                    .map_err(|_| propagation_error(step + 1, j, "field reached zero"))?;
                next_logs.push(ln);
            }
            logs = next_logs;
        }
        state = next;
        t = initial.t + (step + 1) as f64 * dt;
        let values = state.iter().map(|v| v * norm).collect();
        frames.push(WaveField { grid, t, values });
    }
    Ok(frames)
}

/// Interior L-infinity error of the manufactured q-plane-wave run over `grid`.
pub fn manufactured_error(
    equation: SolutionKind,
    spec: &FreeParticleSpec,
    grid: super::GridSpec,
) -> Result<f64> {
    let exact = manufactured_state(equation, spec);
    let initial = WaveField::sample(grid, 0.0, &exact)?;
    let frames = propagate(&Propagation::free(equation, spec), &initial, &exact)?;
    frames
        .last()
        .expect("at least the initial frame")
        .interior_error(&exact)
}
