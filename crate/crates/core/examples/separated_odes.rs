//! RK4 integration of the separated temporal and spatial equations against
//! their closed forms, and the observed order under step halving.

use qnlse::integrators::{
    convergence_study, integrate_separated_space, integrate_separated_time, ConvergenceScenario,
};
use qnlse::solutions::{separated_f, separated_g, FreeParticleSpec, SolutionKind};

fn main() -> qnlse::Result<()> {
    let spec = FreeParticleSpec::default();
    for kind in SolutionKind::ALL {
        let f = integrate_separated_time(kind, spec.q, spec.energy(), spec.hbar, 1.0, 1e-3)?;
        let (t, ft) = *f.last().unwrap();
        let g =
            integrate_separated_space(kind, spec.q, spec.energy(), spec.m, spec.hbar, 1.0, 1e-3)?;
        let (x, gx) = *g.last().unwrap();
        println!(
            "{:>3}: f(1) = {ft:.12} (error {:.1e}), g(1) = {gx:.12} (error {:.1e})",
            kind.name(),
            (ft - separated_f(kind, &spec, t)?).norm(),
            (gx - separated_g(kind, &spec, x)?).norm()
        );

        let study = convergence_study(
            &ConvergenceScenario::SeparatedTime {
                kind,
                spec,
                t_end: 1.0,
                base_step: 0.1,
            },
            4,
        )?;
        println!("     time steps {:?}", study.resolutions);
        let errors: Vec<String> = study.errors.iter().map(|e| format!("{e:.3e}")).collect();
        println!("     errors     [{}]", errors.join(", "));
        println!("     observed order {:.3}", study.observed_order);
    }
    Ok(())
}
