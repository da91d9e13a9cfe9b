//! The new-equation and NRT spatial factors share their q -> 1 limit but not
//! their shape: the momentum scale differs at first order in q - 1.

use qnlse::solutions::{compare_spatial, max_spatial_difference, FreeParticleSpec};

fn main() -> qnlse::Result<()> {
    let spec = FreeParticleSpec::default();
    let xs = (0..=10).map(|i| -5.0 + i as f64);
    println!("q = {}", spec.q);
    println!(
        "{:>5} {:>12} {:>12} {:>12}",
        "x", "|g_new|", "|g_nrt|", "|diff|"
    );
    for p in compare_spatial(&spec, xs)? {
        println!(
            "{:>5} {:>12.6} {:>12.6} {:>12.3e}",
            p.x,
            p.g_new.norm(),
            p.g_nrt.norm(),
            p.difference()
        );
    }

    let grid: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
    for q in [1.5, 1.1, 1.01, 1.001, 1.0001, 1.0] {
        let d = max_spatial_difference(&spec.with_q(q), grid.iter().copied())?;
        println!("q = {q:<7} max |g_new - g_nrt| = {d:.3e}");
    }
    Ok(())
}
