//! Debye mass of a thermal Dirac field by the Bessel series, the momentum
//! integral and the massless closed form.

use debye_screen::debye::{
    compare_routes, debye_mass_sq, debye_mass_sq_integral, debye_mass_sq_massless, debye_mass_sq_si, UnitSystem,
};
use debye_screen::specfun::ThermalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>6} {:>14} {:>14} {:>10}", "beta", "m", "series", "integral", "rel gap");
    for row in compare_routes(&[0.5, 1.0, 2.0], &[0.5, 1.0, 4.0], 1.0, 1e-12)? {
        println!(
            "{:>6} {:>6} {:>14.8e} {:>14.8e} {:>10.2e}",
            row.beta, row.mass, row.series, row.integral, row.rel_gap
        );
    }

    let massless = ThermalParams::unit_coupling(2.0, 0.0)?;
    let integral = debye_mass_sq_integral(&massless, 1e-12)?;
    println!(
        "\nmassless, beta = 2: integral {:.10}, e^2/(6 beta^2) = {:.10}",
        integral.m_d_sq,
        debye_mass_sq_massless(&massless).m_d_sq
    );

    let hot = ThermalParams::unit_coupling(1.0, 1.0)?;
    let r = debye_mass_sq(&hot, 1e-12)?;
    println!("beta = m = 1: m_D^2 = {:.10} ({}), screening length {:.6}", r.m_d_sq, r.method.name(), r.lambda_d);
    let natural = debye_mass_sq_si(&hot, &UnitSystem::natural(), 1e-12)?;
    println!("explicit-unit route with hbar = c = epsilon_0 = 1: {:.10}", natural.m_d_sq);

    let cold = ThermalParams::unit_coupling(f64::INFINITY, 1.0)?;
    println!("ground state: m_D^2 = {}", debye_mass_sq(&cold, 1e-12)?.m_d_sq);
    Ok(())
}
