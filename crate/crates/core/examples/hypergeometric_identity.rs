//! The q-exponential as a degenerate Gauss function:
//! `2F1(a, g; g; z) = (1 - z)^(-a)`, checked on the series path.

use qnlse::qmath::{c, check_binomial_identity, hyp2f1, hyp2f1_series, q_exp, HypParams};
use qnlse::residuals::hypergeom_ode_residual;

fn main() -> qnlse::Result<()> {
    for (q, x) in [(0.5, 1.0), (2.0, -1.0), (1.0, 1.0), (1.5, 0.3)] {
        println!("e_q(q = {q}, {x}) = {}", q_exp(q, c(x, 0.0))?);
    }

    // the q-exponential of i w is 2F1(1/(q-1), gamma; gamma; i (q-1) w) for any gamma
    let (q, w) = (1.5, 0.8);
    let direct = q_exp(q, c(0.0, w))?;
    for gamma in [0.5, 1.0, 2.7] {
        let p = HypParams::new(1.0 / (q - 1.0), gamma, gamma, c(0.0, (q - 1.0) * w))?;
        let series = hyp2f1_series(&p)?;
        println!(
            "gamma = {gamma:3}: series {series:.15}  |series - e_q| = {:.1e}",
            (series - direct).norm()
        );
    }

    let z = c(0.3, -0.6);
    let defect = check_binomial_identity(-1.7, 2.2, z)?;
    println!("binomial identity defect at z = {z}: {defect:.2e}");

    let generic = HypParams::new(0.5, 1.25, 2.5, z)?;
    println!(
        "2F1(0.5, 1.25; 2.5; {z}) = {:.15}, ODE residual {:.1e}",
        hyp2f1(&generic)?,
        hypergeom_ode_residual(&generic)?
    );
    Ok(())
}
