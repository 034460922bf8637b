//! Potential of a point charge in the zero-momentum approximation compared
//! with the Yukawa form, and the fitted screening rate.

use debye_screen::maxwell::{
    default_r_grid, screening_profile, yukawa_reference, Mode, SourceSpec,
};
use debye_screen::specfun::ThermalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ThermalParams::new(1.0, 1.0, 1.0, 1.0, 0.0)?;
    let source = SourceSpec::point(1.0)?;
    let first = screening_profile(&source, &params, Mode::ZerothOrder, &[1.0], 1e-9)?;
    let m_d = first.static_mass_sq.sqrt();
    let grid = default_r_grid(m_d);
    let profile = screening_profile(&source, &params, Mode::ZerothOrder, &grid, 1e-9)?;

    println!("screening mass {m_d:.8}, length {:.6}", 1.0 / m_d);
    println!("{:>10} {:>14} {:>14} {:>10}", "r", "A(r)", "Yukawa", "rel gap");
    for (i, (&r, &a)) in profile.r_grid.iter().zip(&profile.values).enumerate() {
        if i % 16 == 0 {
            let y = yukawa_reference(1.0, 1.0, profile.static_mass_sq, r)?;
            println!("{r:>10.4} {a:>14.6e} {y:>14.6e} {:>10.2e}", ((a - y) / y).abs());
        }
    }
    let rate = profile.fitted_rate(5.0 / m_d, 15.0 / m_d)?;
    println!("fitted rate {rate:.8} vs {m_d:.8}");

    for (name, s) in [
        ("gaussian sigma=1", SourceSpec::gaussian(1.0, 1.0)?),
        ("ball radius=2", SourceSpec::uniform_ball(2.0, 1.0)?),
    ] {
        let p = screening_profile(&s, &params, Mode::ZerothOrder, &[0.5, 5.0, 20.0], 1e-9)?;
        println!("{name}: A = {:?}", p.values);
    }
    Ok(())
}
