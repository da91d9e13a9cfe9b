//! Method-of-lines propagation of the manufactured q-plane wave, written out as
//! CSV frames and an SVG plot of the last frame.
//!
//! ```text
//! cargo run --example propagate -- [OUT_DIR]
//! ```

use qnlse::cli::{frame_csv, frame_name, frame_svg};
use qnlse::integrators::{manufactured_state, propagate, GridSpec, Propagation, WaveField};
use qnlse::solutions::{FreeParticleSpec, SolutionKind};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qnlse-propagate"));
    std::fs::create_dir_all(&out)?;

    let spec = FreeParticleSpec::default().with_q(1.1);
    // (q - 1)(p x - E t) > 0 here, where the linearized problem is forward parabolic
    let grid = GridSpec::with_spacing(0.5, 5.0, 0.025, 1e-4, 1000)?;

    for equation in SolutionKind::ALL {
        let exact = manufactured_state(equation, &spec);
        let initial = WaveField::sample(grid, 0.0, &exact)?;
        let frames = propagate(&Propagation::free(equation, &spec), &initial, &exact)?;
        let last = frames.last().unwrap();
        println!(
            "{:>3}: {} steps to t = {}, interior error {:.3e}",
            equation.name(),
            frames.len() - 1,
            last.t,
            last.interior_error(&exact)?
        );
        let dir = out.join(equation.name());
        std::fs::create_dir_all(&dir)?;
        for (step, frame) in frames.iter().enumerate().step_by(100) {
            std::fs::write(dir.join(frame_name(step, "csv")), frame_csv(frame))?;
        }
        let title = format!("{} at t = {:.2}", equation.name(), last.t);
        std::fs::write(dir.join("last.svg"), frame_svg(last, &title))?;
    }
    println!("frames written under {}", out.display());
    Ok(())
}
