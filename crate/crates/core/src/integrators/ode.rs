//! Classical RK4 and the separated temporal/spatial ODEs.

use crate::error::{Error, Result};
use crate::qmath::{c, cpow_continued, ComplexScalar};
use crate::residuals::FieldSampler;
use crate::solutions::{separated_g_field, FreeParticleSpec, SolutionKind};

/// `(coordinate, value)` samples of an integrated solution.
pub type Trajectory = Vec<(f64, ComplexScalar)>;

fn check_finite(values: &[ComplexScalar], stage: usize) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::BlowUp { stage })
    }
}

/// One classical Runge-Kutta step.
pub fn rk4_step<R>(state: &[ComplexScalar], rhs: R, t: f64, dt: f64) -> Result<Vec<ComplexScalar>>
where
    R: FnMut(f64, &[ComplexScalar]) -> Result<Vec<ComplexScalar>>,
{
    rk4_step_with(state, rhs, |_, _| Ok(()), t, dt)
}

/// RK4 step where `constrain(t, y)` overwrites constrained components (e.g.
/// Dirichlet boundary values) of every stage state and of the result.
pub fn rk4_step_with<R, B>(
    state: &[ComplexScalar],
    mut rhs: R,
    mut constrain: B,
    t: f64,
    dt: f64,
) -> Result<Vec<ComplexScalar>>
where
    R: FnMut(f64, &[ComplexScalar]) -> Result<Vec<ComplexScalar>>,
    B: FnMut(f64, &mut [ComplexScalar]) -> Result<()>,
{
    let stage_state = |k: &[ComplexScalar], a: f64| -> Vec<ComplexScalar> {
        state.iter().zip(k).map(|(y, k)| y + k * (a * dt)).collect()
    };

    let mut y1 = state.to_vec();
    constrain(t, &mut y1)?;
    let k1 = rhs(t, &y1)?;
    check_finite(&k1, 1)?;

    let mut y2 = stage_state(&k1, 0.5);
    constrain(t + 0.5 * dt, &mut y2)?;
    let k2 = rhs(t + 0.5 * dt, &y2)?;
    check_finite(&k2, 2)?;

    let mut y3 = stage_state(&k2, 0.5);
    constrain(t + 0.5 * dt, &mut y3)?;
    let k3 = rhs(t + 0.5 * dt, &y3)?;
    check_finite(&k3, 3)?;

    let mut y4 = stage_state(&k3, 1.0);
    constrain(t + dt, &mut y4)?;
    let k4 = rhs(t + dt, &y4)?;
    check_finite(&k4, 4)?;

    let mut next: Vec<ComplexScalar> = (0..state.len())
        .map(|i| state[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
        .collect();
    constrain(t + dt, &mut next)?;
    check_finite(&next, 5)?;
    Ok(next)
}

/// Number of equal steps covering `span` with steps no longer than `step`.
fn step_count(span: f64, step: f64) -> Result<usize> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    if !span.is_finite() {
        return Err(Error::Config("integration span must be finite".into()));
    }
    Ok(((span.abs() / step) * (1.0 - 1e-12)).ceil() as usize)
}

/// Integrates the temporal factor from `f(0) = 1`.
///
/// The new equation `i hbar d/dt f^q = lambda f` is integrated as
/// `f' = lambda f^(2-q) / (i hbar q)`; the NRT equation is already explicit:
/// `f' = lambda f^(2-q) / (i hbar (2-q))`. The power follows the branch
/// continued along the trajectory.
pub fn integrate_separated_time(
    kind: SolutionKind,
    q: f64,
    lambda: f64,
    hbar: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    kind.check_time_q(q)?;
    if hbar.is_nan() || hbar <= 0.0 {
        return Err(Error::domain("hbar must be positive"));
    }
    let denominator = match kind {
        SolutionKind::NewEquation => q,
        SolutionKind::Nrt => 2.0 - q,
    };
    let coefficient = c(lambda, 0.0) / (c(0.0, hbar) * denominator);
    let exponent = 2.0 - q;

    let n = step_count(t_end, dt)?;
    let mut trajectory = vec![(0.0, c(1.0, 0.0))];
    if n == 0 {
        return Ok(trajectory);
    }
    let h = t_end / n as f64;
    let mut f = c(1.0, 0.0);
    let mut ln_f = c(0.0, 0.0);
    for step in 0..n {
        let t = step as f64 * h;
        let rhs = |_t: f64, y: &[ComplexScalar]| {
            let (power, _) = cpow_continued(y[0], f, ln_f, exponent)?;
            Ok(vec![power * coefficient])
        };
        let next = rk4_step(&[f], rhs, t, h).map_err(|e| e.at(0.0, t))?[0];
        let t_next = (step + 1) as f64 * h;
        ln_f = cpow_continued(next, f, ln_f, 1.0)
            .map_err(|e| e.at(0.0, t_next))?
            .1;
        f = next;
        trajectory.push((t_next, f));
    }
    Ok(trajectory)
}

/// Integrates the spatial factor from `g(0) = 1` with `g'(0)` taken from the closed form.
///
/// The new equation is integrated as the system `(g, g')` with
/// `g'' = -(2 m lambda / hbar^2) g^q`. The NRT equation differentiates
/// `g^(2-q)`, so it is integrated in `u = g^(2-q)`:
/// `u'' = -(2 m lambda / hbar^2) u^(1/(2-q))`, and `g = u^(1/(2-q))` is recovered.
/// The momentum is `p = sqrt(2 m lambda)`.
pub fn integrate_separated_space(
    kind: SolutionKind,
    q: f64,
    lambda: f64,
    m: f64,
    hbar: f64,
    x_end: f64,
    dx: f64,
) -> Result<Trajectory> {
    kind.check_space_q(q)?;
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::domain(format!(
            "lambda = {lambda}: free-particle eigenvalue must be non-negative"
        )));
    }
    let p = (2.0 * m * lambda).sqrt();
    let spec = FreeParticleSpec::new(q, p, m, hbar)?;
    let slope = separated_g_field(kind, &spec)?
        .partials(0.0, 0.0)
        .expect("closed forms carry partials")?
        .dx;

    // state = (w, w') with w = g (new) or g^(2-q) (NRT); w'' = k w^r
    let (r, w_slope, recover) = match kind {
        SolutionKind::NewEquation => (q, slope, 1.0),
        SolutionKind::Nrt => (1.0 / (2.0 - q), slope * (2.0 - q), 1.0 / (2.0 - q)),
    };
    let k = -2.0 * m * lambda / (hbar * hbar);

    let n = step_count(x_end, dx)?;
    let mut trajectory = vec![(0.0, c(1.0, 0.0))];
    if n == 0 {
        return Ok(trajectory);
    }
    let h = x_end / n as f64;
    let mut state = vec![c(1.0, 0.0), w_slope];
    let mut ln_w = c(0.0, 0.0);
    for step in 0..n {
        let x = step as f64 * h;
        let w = state[0];
        let rhs = |_x: f64, y: &[ComplexScalar]| {
            let (power, _) = cpow_continued(y[0], w, ln_w, r)?;
            Ok(vec![y[1], power * k])
        };
        let next = rk4_step(&state, rhs, x, h).map_err(|e| e.at(x, 0.0))?;
        let x_next = (step + 1) as f64 * h;
        let (g, ln_next) =
            cpow_continued(next[0], w, ln_w, recover).map_err(|e| e.at(x_next, 0.0))?;
        ln_w = ln_next;
        state = next;
        trajectory.push((x_next, g));
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{separated_f, separated_g};

    #[test]
    fn zero_rhs_keeps_state() {
        let y = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        let next = rk4_step(&y, |_, s| Ok(vec![c(0.0, 0.0); s.len()]), 0.0, 0.1).unwrap();
        assert_eq!(next, y);
    }

    #[test]
    fn rotation_matches_exponential_at_fourth_order() {
        let run = |dt: f64| {
            let n = (1.0 / dt).round() as usize;
            let mut y = vec![c(1.0, 0.0)];
            for k in 0..n {
                y = rk4_step(&y, |_, s| Ok(vec![c(0.0, 1.0) * s[0]]), k as f64 * dt, dt).unwrap();
            }
            (y[0] - c(0.0, 1.0).exp()).norm()
        };
        let e1 = run(0.1);
        let e2 = run(0.05);
        // oracle: one RK4 step multiplies by R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24, z = i dt
        let z = c(0.0, 0.1);
        let amplification = c(1.0, 0.0) + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
        let oracle = (amplification.powu(10) - c(0.0, 1.0).exp()).norm();
        assert!((e1 - oracle).abs() < 1e-14, "{e1} vs {oracle}");
        assert!(e1 < 1e-6);
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
        assert!(run(0.01) < 1e-10);
    }

    #[test]
    fn blow_up_reports_stage() {
        let err = rk4_step(
            &[c(1.0, 0.0)],
            |_, _| Ok(vec![c(f64::INFINITY, 0.0)]),
            0.0,
            0.1,
        )
        .unwrap_err();
        assert_eq!(err, Error::BlowUp { stage: 1 });
    }

    #[test]
    fn trivial_spans() {
        let t =
            integrate_separated_time(SolutionKind::NewEquation, 1.5, 1.0, 1.0, 0.0, 1e-3).unwrap();
        assert_eq!(t, vec![(0.0, c(1.0, 0.0))]);
        let x =
            integrate_separated_space(SolutionKind::Nrt, 1.5, 1.0, 0.5, 1.0, 0.0, 1e-3).unwrap();
        assert_eq!(x, vec![(0.0, c(1.0, 0.0))]);
    }

    #[test]
    fn time_factor_matches_closed_form() {
        let spec = FreeParticleSpec::new(1.5, 1.0, 0.5, 1.0).unwrap();
        for kind in SolutionKind::ALL {
            let traj = integrate_separated_time(kind, 1.5, 1.0, 1.0, 1.0, 1e-3).unwrap();
            let (t, f) = *traj.last().unwrap();
            assert_eq!(t, 1.0);
            let exact = separated_f(kind, &spec, 1.0).unwrap();
            assert!((f - exact).norm() < 1e-8, "{kind:?}: {f} vs {exact}");
        }
    }

    #[test]
    fn space_factor_matches_closed_form() {
        let spec = FreeParticleSpec::new(1.5, 1.0, 0.5, 1.0).unwrap();
        for kind in SolutionKind::ALL {
            let traj = integrate_separated_space(kind, 1.5, 1.0, 0.5, 1.0, 1.0, 1e-3).unwrap();
            let (x, g) = *traj.last().unwrap();
            assert_eq!(x, 1.0);
            let exact = separated_g(kind, &spec, 1.0).unwrap();
            assert!((g - exact).norm() < 1e-7, "{kind:?}: {g} vs {exact}");
        }
        // backwards integration covers negative x
        let traj =
            integrate_separated_space(SolutionKind::NewEquation, 1.5, 1.0, 0.5, 1.0, -1.0, 1e-3)
                .unwrap();
        let exact = separated_g(SolutionKind::NewEquation, &spec, -1.0).unwrap();
        assert!((traj.last().unwrap().1 - exact).norm() < 1e-7);
    }

    #[test]
    fn excluded_q_values() {
        assert!(integrate_separated_time(SolutionKind::Nrt, 2.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(
            integrate_separated_time(SolutionKind::NewEquation, 0.0, 1.0, 1.0, 1.0, 0.1).is_err()
        );
        assert!(integrate_separated_space(
            SolutionKind::NewEquation,
            -1.5,
            1.0,
            0.5,
            1.0,
            1.0,
            0.1
        )
        .is_err());
    }
}
