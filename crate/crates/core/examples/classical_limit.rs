//! Sup-grid distance of each q-family from `exp(i(px - Et)/hbar)` as q -> 1.

use qnlse::cli::suites::default_grid;
use qnlse::solutions::{classical_limit_study, FreeParticleSpec, LimitFamily};

fn main() -> qnlse::Result<()> {
    let grid = default_grid();
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    for family in LimitFamily::ALL {
        let r = classical_limit_study(family, &FreeParticleSpec::default(), &deltas, &grid)?;
        println!("{family}:");
        for (d, e) in r.resolutions.iter().zip(&r.errors) {
            println!("  q - 1 = {d:.0e}  distance {e:.4e}");
        }
        println!(
            "  fitted order {:.3}, between the two smallest deltas {:.3}",
            r.observed_order,
            r.finest_pair_order()
        );
    }
    Ok(())
}
