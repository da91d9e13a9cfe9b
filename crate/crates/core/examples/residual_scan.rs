//! Residuals of the closed-form solutions under every equation form, with exact
//! partials and with Richardson-extrapolated finite differences.

use qnlse::cli::suites::{default_grid, own_solution, tag_applies};
use qnlse::residuals::{scan_residual, DerivativeMethod, EquationParams, EquationTag};
use qnlse::solutions::{product_solution_field, FreeParticleSpec, SolutionKind};

fn main() -> qnlse::Result<()> {
    let grid = default_grid();
    let spec = FreeParticleSpec::default();
    let params = EquationParams::free_particle(&spec);

    println!("{:<10} {:>12} {:>12}", "equation", "analytic", "fd");
    for tag in EquationTag::ALL
        .into_iter()
        .filter(|t| tag_applies(*t, spec.q))
    {
        let sampler = own_solution(tag, &spec)?;
        let exact = scan_residual(
            tag,
            sampler.as_ref(),
            &params,
            &grid,
            DerivativeMethod::Analytic,
        )?;
        let fd = scan_residual(
            tag,
            sampler.as_ref(),
            &params,
            &grid,
            DerivativeMethod::finite_difference(),
        )?;
        println!(
            "{:<10} {:>12.3e} {:>12.3e}",
            tag.name(),
            exact.max_abs,
            fd.max_abs
        );
    }

    // the new-equation product does not solve the NRT equation
    let foreign = product_solution_field(SolutionKind::NewEquation, &spec)?;
    let r = scan_residual(
        EquationTag::Nrt,
        &foreign,
        &params,
        &grid,
        DerivativeMethod::Analytic,
    )?;
    println!(
        "new product under nrt: max {:.3e} at (x, t) = {:?}",
        r.max_abs, r.worst_point
    );
    Ok(())
}
