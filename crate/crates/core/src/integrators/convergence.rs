use super::grid::GridSpec;
use super::ode::{integrate_separated_space, integrate_separated_time};
use super::pde::manufactured_error;
use crate::error::{Error, Result};
use crate::solutions::{separated_f, separated_g, FreeParticleSpec, SolutionKind};

/// Errors recorded against step size, with the fitted order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Step sizes, coarsest first.
    pub resolutions: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `ln error` against `ln resolution`.
    pub observed_order: f64,
    /// `false` when some refinement did not reduce the error.
    pub monotone: bool,
}

impl ConvergenceReport {
    pub fn new(resolutions: Vec<f64>, errors: Vec<f64>) -> Result<Self> {
        let observed_order = fit_order(&resolutions, &errors)?;
        let monotone = errors.windows(2).all(|w| w[1] < w[0]);
        Ok(ConvergenceReport {
            resolutions,
            errors,
            observed_order,
            monotone,
        })
    }

    /// Order between the two finest levels.
    pub fn finest_pair_order(&self) -> f64 {
        let n = self.errors.len();
        (self.errors[n - 1] / self.errors[n - 2]).ln()
            / (self.resolutions[n - 1] / self.resolutions[n - 2]).ln()
    }
}

/// Least-squares slope of `ln errors` against `ln resolutions`.
pub fn fit_order(resolutions: &[f64], errors: &[f64]) -> Result<f64> {
    if resolutions.len() != errors.len() {
        return Err(Error::DegenerateFit(format!(
            "{} resolutions for {} errors",
            resolutions.len(),
            errors.len()
        )));
    }
    if resolutions.len() < 2 {
        return Err(Error::DegenerateFit("need at least two levels".into()));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::DegenerateFit(format!(
            "errors must be positive and finite, got {e}"
        )));
    }
    if let Some(h) = resolutions.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(Error::DegenerateFit(format!(
            "resolutions must be positive and finite, got {h}"
        )));
    }
    let xs: Vec<f64> = resolutions.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let spread = xs.iter().map(|x| (x - mx).abs()).fold(0.0, f64::max);
    if spread <= 1e-12 * (1.0 + mx.abs()) || sxx == 0.0 {
        return Err(Error::DegenerateFit("all resolutions are identical".into()));
    }
    Ok(sxy / sxx)
}

/// A discretized problem with an exact reference.
#[derive(Debug, Clone)]
pub enum ConvergenceScenario {
    /// RK4 for the temporal factor, error at `t_end` against its closed form.
    SeparatedTime {
        kind: SolutionKind,
        spec: FreeParticleSpec,
        t_end: f64,
        base_step: f64,
    },
    /// RK4 for the spatial factor, error at `x_end` against its closed form.
    SeparatedSpace {
        kind: SolutionKind,
        spec: FreeParticleSpec,
        x_end: f64,
        base_step: f64,
    },
    /// Manufactured q-plane-wave propagation; `dx` is refined at fixed `dt`.
    Propagation {
        equation: SolutionKind,
        spec: FreeParticleSpec,
        x_min: f64,
        x_max: f64,
        base_dx: f64,
        dt: f64,
        t_end: f64,
    },
}

impl ConvergenceScenario {
    fn base_step(&self) -> f64 {
        match *self {
            ConvergenceScenario::SeparatedTime { base_step, .. }
            | ConvergenceScenario::SeparatedSpace { base_step, .. } => base_step,
            ConvergenceScenario::Propagation { base_dx, .. } => base_dx,
        }
    }

    /// Error of one run at step size `h`.
    pub fn error_at(&self, h: f64) -> Result<f64> {
        match *self {
            ConvergenceScenario::SeparatedTime {
                kind, spec, t_end, ..
            } => {
                let traj =
                    integrate_separated_time(kind, spec.q, spec.energy(), spec.hbar, t_end, h)?;
                let (t, f) = *traj.last().expect("trajectory starts at the origin");
                Ok((f - separated_f(kind, &spec, t)?).norm())
            }
            ConvergenceScenario::SeparatedSpace {
                kind, spec, x_end, ..
            } => {
                let traj = integrate_separated_space(
                    kind,
                    spec.q,
                    spec.energy(),
                    spec.m,
                    spec.hbar,
                    x_end,
                    h,
                )?;
                let (x, g) = *traj.last().expect("trajectory starts at the origin");
                Ok((g - separated_g(kind, &spec, x)?).norm())
            }
            ConvergenceScenario::Propagation {
                equation,
                spec,
                x_min,
                x_max,
                dt,
                t_end,
                ..
            } => {
                let n_steps = (t_end / dt).round() as usize;
                let grid = GridSpec::with_spacing(x_min, x_max, h, dt, n_steps)?;
                manufactured_error(equation, &spec, grid)
            }
        }
    }
}

/// Runs `scenario` at `refinement_levels` step sizes, halving from the base step.
pub fn convergence_study(
    scenario: &ConvergenceScenario,
    refinement_levels: usize,
) -> Result<ConvergenceReport> {
    if refinement_levels < 3 {
        return Err(Error::Config(format!(
            "need at least 3 refinement levels, got {refinement_levels}"
        )));
    }
    let base = scenario.base_step();
    if !(base > 0.0 && base.is_finite()) {
        return Err(Error::Config(format!(
            "base step must be positive, got {base}"
        )));
    }
    let resolutions: Vec<f64> = (0..refinement_levels)
        .map(|k| base / f64::powi(2.0, k as i32))
        .collect();
    let errors = resolutions
        .iter()
        .map(|&h| scenario.error_at(h))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::new(resolutions, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_fit() {
        let hs = [0.1, 0.05, 0.025, 0.0125];
        let es: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powi(4)).collect();
        assert!((fit_order(&hs, &es).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_fits() {
        assert!(matches!(
            fit_order(&[0.1, 0.1], &[1e-3, 2e-3]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            fit_order(&[0.1, 0.05], &[1e-3, 0.0]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(fit_order(&[0.1], &[1e-3]).is_err());
    }

    #[test]
    fn non_monotone_is_flagged() {
        let r = ConvergenceReport::new(vec![0.1, 0.05, 0.025], vec![1e-3, 2e-3, 1e-4]).unwrap();
        assert!(!r.monotone);
    }

    #[test]
    fn rk4_time_order() {
        for kind in SolutionKind::ALL {
            let scenario = ConvergenceScenario::SeparatedTime {
                kind,
                spec: FreeParticleSpec::default(),
                t_end: 1.0,
                base_step: 0.1,
            };
            let r = convergence_study(&scenario, 3).unwrap();
            assert!(r.monotone);
            assert!((r.observed_order - 4.0).abs() <= 0.5, "{kind:?}: {r:?}");
        }
    }

    #[test]
    fn too_few_levels() {
        let scenario = ConvergenceScenario::SeparatedTime {
            kind: SolutionKind::Nrt,
            spec: FreeParticleSpec::default(),
            t_end: 1.0,
            base_step: 0.1,
        };
        assert!(convergence_study(&scenario, 2).is_err());
    }
}
