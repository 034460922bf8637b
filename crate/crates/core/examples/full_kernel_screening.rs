//! Screening with the momentum-dependent temporal kernel against the
//! zero-momentum approximation.

use debye_screen::maxwell::{log_grid, screening_profile, Mode, SourceSpec};
use debye_screen::specfun::ThermalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ThermalParams::new(1.0, 1.0, 1.0, 0.1, 0.0)?;
    let source = SourceSpec::point(1.0)?;
    let grid = log_grid(1.0, 40.0, 8)?;
    let full = screening_profile(&source, &params, Mode::FullKernel, &grid, 1e-8)?;
    let zeroth = screening_profile(&source, &params, Mode::ZerothOrder, &grid, 1e-8)?;
    println!(
        "static mass^2: full {:.10}, zeroth order {:.10}",
        full.static_mass_sq, zeroth.static_mass_sq
    );
    println!("{:>8} {:>14} {:>14} {:>8}", "r", "full", "zeroth", "ratio");
    for ((r, a), b) in grid.iter().zip(&full.values).zip(&zeroth.values) {
        println!("{r:>8.3} {a:>14.6e} {b:>14.6e} {:>8.5}", a / b);
    }
    Ok(())
}
