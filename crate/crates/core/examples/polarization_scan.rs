//! Thermal polarization kernels on a momentum grid, and the static limit of
//! the temporal one.

use debye_screen::debye::debye_mass_sq;
use debye_screen::polarization::{f_hat_spatial, f_hat_temporal, scan_kernel, Channel};
use debye_screen::specfun::ThermalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ThermalParams::new(1.0, 1.0, 1.0, 1.0, 0.0)?;
    let grid: Vec<f64> = (0..=10).map(|i| 0.4 * i as f64).collect();
    for channel in [Channel::Temporal, Channel::Spatial] {
        let scan = scan_kernel(channel, &grid, &params, 1e-9)?;
        println!("{channel} channel");
        println!("{:>6} {:>14} {:>14} {:>14}", "p", "F", "B", "denominator");
        for p in &scan.points {
            println!("{:>6.2} {:>14.6e} {:>14.6e} {:>14.6e}", p.p_tilde, p.f_hat, p.b_hat, p.denominator);
        }
    }

    let m_d_sq = debye_mass_sq(&params, 1e-12)?.m_d_sq;
    println!("\nstatic limit, -F_0(p) -> m_D^2 = {m_d_sq:.10}");
    for p in [0.2, 0.1, 0.05, 0.025] {
        let f = f_hat_temporal(p, &params, 1e-10)?;
        println!("p = {p:<6} -F_0 = {:.10}  gap {:.2e}", -f, ((f + m_d_sq) / m_d_sq).abs());
    }
    println!(
        "spatial kernel at p = 0: {}, at p = 0.01: {:.6e}",
        f_hat_spatial(0.0, &params, 1e-10)?,
        f_hat_spatial(0.01, &params, 1e-10)?
    );
    Ok(())
}
