//! Log-log least-squares fits of a constant against the thickness ratio.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;

use crate::{Error, Result};

/// `value ~ exp(log_prefactor) * h^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    pub fn prefactor(&self) -> f64 {
        self.log_prefactor.exp()
    }

    pub fn predict(&self, h: f64) -> f64 {
        self.prefactor() * h.powf(self.exponent)
    }
}

/// Least-squares line through `(ln h, ln value)`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Data(format!("a scaling fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(h, v)) = points.iter().find(|(h, v)| !(*h > 0.0 && *v > 0.0 && h.is_finite() && v.is_finite())) {
        return Err(Error::Data(format!("scaling fit needs positive finite data, got ({h}, {v})")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("scaling fit needs at least two distinct h values".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(ScalingFit { exponent: slope, log_prefactor: intercept, r_squared, points: points.to_vec() })
}

/// Least-squares polynomial coefficients (constant term first).
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() || xs.len() <= degree {
        return Err(Error::Data(format!(
            "polynomial fit of degree {degree} needs more than {degree} paired samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let a = Mat::<f64>::from_fn(xs.len(), degree + 1, |i, j| xs[i].powi(j as i32));
    let b = Mat::<f64>::from_fn(ys.len(), 1, |i, _| ys[i]);
    let sol = a.qr().solve_lstsq(&b);
    Ok((0..=degree).map(|j| sol[(j, 0)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HS: [f64; 5] = [0.1, 0.05, 0.02, 0.01, 0.005];

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = HS.iter().map(|&h| (h, h.powf(1.5))).collect();
        let f = fit_scaling(&pts).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_law_prefactor() {
        let pts: Vec<(f64, f64)> = HS.iter().map(|&h| (h, 3.0 * h)).collect();
        let f = fit_scaling(&pts).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!((f.prefactor() - 3.0).abs() < 1e-12);
        assert!((f.predict(0.2) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn perturbed_law() {
        let pts: Vec<(f64, f64)> =
            HS.iter().enumerate().map(|(i, &h)| (h, h.powf(1.5) * (1.0 + 0.01 * (i as f64).sin()))).collect();
        let f = fit_scaling(&pts).unwrap();
        assert!((f.exponent - 1.5).abs() < 0.02);
    }

    #[test]
    fn bad_data() {
        assert!(fit_scaling(&[(0.1, 1.0), (0.2, 2.0)]).is_err());
        assert!(fit_scaling(&[(0.1, 1.0), (0.2, -2.0), (0.3, 1.0)]).is_err());
        assert!(fit_scaling(&[(0.1, 1.0), (0.1, 2.0), (0.1, 1.0)]).is_err());
    }

    #[test]
    fn polyfit_recovers_cubic() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 - 2.0 * x + 0.5 * x * x * x).collect();
        let c = polyfit(&xs, &ys, 3).unwrap();
        for (got, want) in c.iter().zip([1.0, -2.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-10);
        }
    }
}
