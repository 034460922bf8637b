//! Mollified point charges approaching the point-charge potential as the
//! mollifier width shrinks.

use debye_screen::maxwell::{delta_family_limit, Propagator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let propagator = Propagator::yukawa(1.0, 1.0)?;
    let report = delta_family_limit(&[0.4, 0.2, 0.1, 0.05, 0.025], 1.0, &propagator, &[0.5, 1.0, 4.0], 1e-10)?;
    println!("{:>7} {:>5} {:>14} {:>14} {:>10}", "eps", "r", "A_eps", "A_point", "rel gap");
    for row in &report.rows {
        println!(
            "{:>7} {:>5} {:>14.8e} {:>14.8e} {:>10.3e}",
            row.epsilon, row.r, row.value, row.reference, row.rel_gap
        );
    }
    for p in &report.probes {
        println!("r = {}: monotone {}, final gap {:.2e}", p.r, p.monotone, p.final_gap);
    }
    Ok(())
}
