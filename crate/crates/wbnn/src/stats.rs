use statrs::distribution::{ContinuousCDF, StudentsT};
use wbnn_core::density::LineFit;

/// Two-sided confidence interval for a fitted slope from `points` data points.
///
/// Returns `None` when there are fewer than three points or the fit is exact.
pub fn slope_interval(fit: &LineFit, points: usize, level: f64) -> Option<(f64, f64)> {
    if points < 3 || !(fit.slope_stderr > 0.0) {
        return None;
    }
    let t = StudentsT::new(0.0, 1.0, (points - 2) as f64).ok()?;
    let q = t.inverse_cdf(0.5 + level / 2.0);
    Some((fit.slope - q * fit.slope_stderr, fit.slope + q * fit.slope_stderr))
}
