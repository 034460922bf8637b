//! Modified Bessel functions of the second kind and the alternating
//! series behind the Debye mass.

use debye_screen::quadrature::Quadrature;
use debye_screen::specfun::{alternating_sum, bessel_k, bessel_k_scaled};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>22} {:>22} {:>10}", "z", "K_2(z)", "integral", "rel diff");
    for z in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let k2 = bessel_k(2, z)?;
        // K_2(z) = (z^2/3) int_1^inf e^{-z t} (t^2 - 1)^{3/2} dt
        let integral = Quadrature::relative(1e-13)
            .semi_infinite(
                |s: f64| {
                    let t = 1.0 + s;
                    (-z * s).exp() * (t * t - 1.0).powf(1.5)
                },
                0.0,
                1.0 / z,
            )?
            .value
            * z
            * z
            / 3.0
            * (-z).exp();
        println!("{z:>6} {k2:>22.15e} {integral:>22.15e} {:>10.2e}", ((k2 - integral) / k2).abs());
    }
    println!("scaled K_0(700) = {:.15}", bessel_k_scaled(0, 700.0)?);

    // sum_{n>=0} (-1)^n K_2((n+1) z) at z = 1
    let series = alternating_sum(|n| bessel_k(2, (n + 1) as f64).unwrap_or(0.0), 1e-14, 200)?;
    println!(
        "sum (-1)^n K_2(n+1) = {:.15} with {} terms, remainder below {:.1e}",
        series.value, series.terms_used, series.remainder_bound
    );
    Ok(())
}
