//! Spatial decay of the imaginary-time two-point kernel: exponential for
//! massive fields, cubic for massless ones.

use debye_screen::decay::{
    fit_decay, thermal_kernel_imag, verify_bound_ratio, FitModel, KernelChannel, KernelConfig, KernelWeight,
    Regime, SchedulePoint,
};
use debye_screen::maxwell::log_grid;
use debye_screen::quadrature::TestProfile;
use debye_screen::specfun::ThermalParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let profile = TestProfile::gaussian(0.5, 1.0)?;
    for (beta, m) in [(0.5, 0.5), (1.0, 1.0), (2.0, 2.0)] {
        let params = ThermalParams::unit_coupling(beta, m)?;
        for channel in KernelChannel::ALL {
            let samples = (0..17)
                .map(|i| {
                    let z = (6.0 + 8.0 * i as f64 / 16.0) / m;
                    Ok((z, thermal_kernel_imag(beta / 2.0, z, channel, &profile, &params, 1e-10)?.abs()))
                })
                .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
            let fit = fit_decay(&samples, FitModel::LogLinear)?;
            println!("beta {beta} m {m} {:<15} rate {:.4} (m = {m})", channel.name(), -fit.slope);
        }
    }

    for beta in [0.5, 1.0, 2.0] {
        let params = ThermalParams::unit_coupling(beta, 0.0)?;
        let schedule: Vec<SchedulePoint> = log_grid(2.0, 50.0, 12)?
            .into_iter()
            .map(|z| SchedulePoint { u: beta / 2.0, z })
            .collect();
        let config = KernelConfig {
            channel: KernelChannel::SpatialMomentum,
            weight: KernelWeight::Bare,
            profile,
            params,
            tol: 1e-10,
        };
        let report = verify_bound_ratio(&config, Regime::ThermalSpatial, &schedule)?;
        println!(
            "massless beta {beta}: sup |K|(1+r)^3 = {:.3}, ratio trend {:.4}, bounded {}",
            report.sup_ratio,
            report.trend_slope,
            report.bounded()
        );
    }
    Ok(())
}
