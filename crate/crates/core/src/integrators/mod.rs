//! Time and space integration: RK4 for the separated equations and a
//! method-of-lines propagator for the full nonlinear equations.

mod convergence;
mod grid;
mod ode;
mod pde;

pub use convergence::{convergence_study, fit_order, ConvergenceReport, ConvergenceScenario};
pub use grid::{GridSpec, WaveField};
pub use ode::{
    integrate_separated_space, integrate_separated_time, rk4_step, rk4_step_with, Trajectory,
};
pub use pde::{manufactured_error, manufactured_state, propagate, Propagation};
