//! Least-squares fits for scaling laws.

use crate::error::{Result, WalkError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `y = a + b x`
    Linear,
    /// `M = a + b √(N ln N)`
    LinearInSqrtNLogN,
    /// `y = A x^b`, fitted on logarithms
    PowerLaw,
}

impl FitModel {
    pub fn label(&self) -> &'static str {
        match self {
            FitModel::Linear => "linear",
            FitModel::LinearInSqrtNLogN => "linear in sqrt(N ln N)",
            FitModel::PowerLaw => "power law",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    /// Slope, or exponent for power laws.
    pub slope: f64,
    /// Intercept, or `ln A` for power laws.
    pub intercept: f64,
    pub r_squared: f64,
    /// Largest absolute residual in the fitted coordinates.
    pub max_residual: f64,
    pub points: usize,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::PowerLaw => (self.intercept + self.slope * x.ln()).exp(),
            _ => self.intercept + self.slope * x,
        }
    }
}

/// `√(N ln N)` with the natural logarithm.
pub fn sqrt_n_log_n(vertices: usize) -> f64 {
    let n = vertices as f64;
    (n * n.ln()).sqrt()
}

/// Ordinary least squares of `ys` on `xs`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(WalkError::Fit(format!(
            "{} abscissae vs {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(WalkError::Fit("need at least two points".into()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(WalkError::Fit("non-finite data".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= f64::EPSILON * (mx * mx).max(1.0) * n {
        return Err(WalkError::Fit("degenerate design: all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - intercept - slope * x).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        model: FitModel::Linear,
        slope,
        intercept,
        r_squared,
        max_residual: residuals.iter().fold(0.0, |m, r| m.max(r.abs())),
        points: xs.len(),
    })
}

/// `y = A x^b` by regression of `ln y` on `ln x`.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.iter().chain(ys).any(|v| *v <= 0.0) {
        return Err(WalkError::Fit("power-law fit needs positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mut fit = linear_regression(&lx, &ly)?;
    fit.model = FitModel::PowerLaw;
    Ok(fit)
}

/// Regresses mixing times on `√(N ln N)`. `points` are `(N, M)` pairs and
/// must cover at least four distinct `N`.
pub fn fit_sqrt_nlogn(points: &[(usize, f64)]) -> Result<FitResult> {
    let mut distinct: Vec<usize> = points.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(WalkError::Fit(format!(
            "need at least 4 distinct lattice sizes, got {}",
            distinct.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| sqrt_n_log_n(p.0)).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mut fit = linear_regression(&xs, &ys)?;
    fit.model = FitModel::LinearInSqrtNLogN;
    Ok(fit)
}
