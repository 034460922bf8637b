use super::DecayError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `ln|v|` against `r`: exponential decay, slope is minus the rate.
    LogLinear,
    /// `ln|v|` against `ln(1 + r)`: power-law decay, slope is the exponent.
    LogLogLinear,
}

impl FitModel {
    pub fn name(self) -> &'static str {
        match self {
            FitModel::LogLinear => "log_linear",
            FitModel::LogLogLinear => "loglog_linear",
        }
    }
}

/// Least-squares line through transformed samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in the fitted (logarithmic) variable.
    pub max_residual: f64,
    pub model: FitModel,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 8;

/// Fits `ln|value|` against `r` or `ln(1 + r)`. Refuses windows with
/// fewer than eight points, zero values or sign changes.
pub fn fit_decay(samples: &[(f64, f64)], model: FitModel) -> Result<DecayFit, DecayError> {
    if samples.len() < MIN_FIT_POINTS {
        return Err(DecayError::FitRefused(format!(
            "need at least {MIN_FIT_POINTS} points, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(DecayError::FitRefused("radii must be strictly increasing".into()));
    }
    if samples.iter().any(|&(r, v)| !(r.is_finite() && v.is_finite()) || v == 0.0) {
        return Err(DecayError::FitRefused("values must be finite and nonzero".into()));
    }
    let sign = samples[0].1.signum();
    if samples.iter().any(|&(_, v)| v.signum() != sign) {
        return Err(DecayError::FitRefused("value changes sign inside the window".into()));
    }
    let xy: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(r, v)| {
            let x = match model {
                FitModel::LogLinear => r,
                FitModel::LogLogLinear => r.ln_1p(),
            };
            (x, v.abs().ln())
        })
        .collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xy
        .iter()
        .map(|&(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit {
        window: (samples[0].0, samples[samples.len() - 1].0),
        slope,
        intercept,
        max_residual,
        model,
        points: samples.len(),
    })
}
