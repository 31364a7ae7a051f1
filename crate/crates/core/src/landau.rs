//! Sextic Landau expansion of the uniform mean-field energy.
//!
//! In the rescaled order parameter `alpha' = 2 sqrt(2) g alpha / Omega` the
//! uniform energy per cavity reads `E / (Omega N) = c1 a^2 + c2 a^4 + c3 a^6`
//! up to a constant.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{solve_atom, ModelParams};

/// `gamma` at which the quartic coefficient changes sign.
pub const GAMMA_TCP: f64 = FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    SecondOrder,
    FirstOrder,
    Tricritical,
    None,
}

pub fn quartic_coefficient(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    g2 * (g2 - 0.5)
}

pub fn sextic_coefficient(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    -g2 * (1.0 - 7.0 * g2 + 8.0 * g2 * g2) / 4.0
}

/// Landau coefficients of the uniform (all cavities equal) configuration.
///
/// The quadratic coefficient keeps the `-gamma^2` atomic response, so that
/// `c1 = 0` reproduces the uniform second-order boundary.
pub fn coefficients(params: &ModelParams) -> Result<LandauCoefficients> {
    let g = params.g();
    if g == 0.0 {
        return Err(Error::DivisionByZero(
            "c1 = (omega + 2J cos(theta)) Omega / (8 g^2) is undefined at g = 0".into(),
        ));
    }
    let omega_eff = params.omega() + 2.0 * params.hopping() * params.theta().cos();
    let gamma = params.gamma();
    Ok(LandauCoefficients {
        c1: omega_eff * params.omega_atom() / (8.0 * g * g) - gamma * gamma,
        c2: quartic_coefficient(gamma),
        c3: sextic_coefficient(gamma),
    })
}

/// Rescale a mean field amplitude into the Landau variable.
pub fn to_rescaled(params: &ModelParams, alpha: f64) -> f64 {
    params.field_scale() * alpha / params.omega_atom()
}

pub fn from_rescaled(params: &ModelParams, alpha_rescaled: f64) -> f64 {
    alpha_rescaled * params.omega_atom() / params.field_scale()
}

/// Nonzero local minimum `alpha'^2` of the sextic, if it exists.
///
/// The `+` root of `c1 + 2 c2 u + 3 c3 u^2 = 0` has curvature `2 sqrt(disc)`,
/// so it is the minimum for either sign of `c3`.
pub fn sextic_minimizer(c: &LandauCoefficients) -> Option<f64> {
    let disc = c.c2 * c.c2 - 3.0 * c.c1 * c.c3;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let x = if c.c2 > 0.0 {
        -c.c1 / (c.c2 + root)
    } else {
        (-c.c2 + root) / (3.0 * c.c3)
    };
    (x > 0.0 && x.is_finite()).then_some(x)
}

/// Value of `c1` at which the sextic has degenerate minima at zero and at
/// finite amplitude (first-order switch), `c1 = c2^2 / (4 c3)`.
pub fn first_order_c1(c2: f64, c3: f64) -> Option<f64> {
    (c2 < 0.0 && c3 > 0.0).then(|| c2 * c2 / (4.0 * c3))
}

pub fn classify(c: &LandauCoefficients, tol: f64) -> TransitionKind {
    let LandauCoefficients { c1, c2, c3 } = *c;
    if c1.abs() < tol && c2.abs() < tol && c3 > tol {
        return TransitionKind::Tricritical;
    }
    if c1.abs() < tol && c2 > tol {
        return TransitionKind::SecondOrder;
    }
    if c2 < -tol {
        if let Some(c1_switch) = first_order_c1(c2, c3) {
            if (c1 - c1_switch).abs() < tol {
                return TransitionKind::FirstOrder;
            }
        }
    }
    TransitionKind::None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleCavityBoundary {
    pub lambda: f64,
    /// True when the line `lambda gamma = 1/sqrt(8)` is an actual
    /// second-order boundary (`gamma >= 1/sqrt(2)`).
    pub second_order: bool,
}

pub fn single_cavity_boundary(gamma: f64) -> Result<SingleCavityBoundary> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(SingleCavityBoundary {
        lambda: 1.0 / (8f64.sqrt() * gamma),
        second_order: gamma >= GAMMA_TCP,
    })
}

// Highest power of u = alpha'^2 in the least-squares model.
const TAYLOR_DEGREE: usize = 12;
// fraction of the convergence radius ~ 1/(2 sqrt(1 + gamma^2)) covered by the grid
const TAYLOR_WINDOW: f64 = 0.45;
const TAYLOR_POINTS: usize = 64;
const MAX_CONDITION: f64 = 1e12;

fn fit_even_series(gamma: f64, window: f64) -> Result<Vec<f64>> {
    let e0 = solve_atom(0.0, gamma, 1.0).energy;
    let lo = window * 0.1;
    let ratio = (window / lo).powf(1.0 / (TAYLOR_POINTS - 1) as f64);
    let u_max = window * window;

    let mut design = DMatrix::zeros(TAYLOR_POINTS, TAYLOR_DEGREE);
    let mut rhs = DVector::zeros(TAYLOR_POINTS);
    for i in 0..TAYLOR_POINTS {
        let a = lo * ratio.powi(i as i32);
        let t = a * a / u_max;
        for k in 0..TAYLOR_DEGREE {
            design[(i, k)] = t.powi(k as i32 + 1);
        }
        rhs[i] = solve_atom(a, gamma, 1.0).energy - e0;
    }

    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > MAX_CONDITION {
        return Err(Error::NumericalInstability(format!(
            "Taylor fit condition number {:.3e} exceeds {MAX_CONDITION:.0e}",
            smax / smin
        )));
    }
    let coef = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::NumericalInstability(e.to_string()))?;
    Ok((0..TAYLOR_DEGREE)
        .map(|k| coef[k] / u_max.powi(k as i32 + 1))
        .collect())
}

/// Numerically extracted Taylor coefficients of the single-atom ground
/// energy in powers of `alpha'^2`, i.e. the coefficients of
/// `alpha'^2, alpha'^4, ...` up to `alpha'^max_order`.
///
/// Least squares on an even-power basis over a geometric grid reaching
/// `0.45 / sqrt(1 + gamma^2)`. A window that small against the radius keeps
/// truncation below roundoff while the high powers are still resolved.
pub fn taylor_oracle(gamma: f64, max_order: usize) -> Result<Vec<f64>> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
    }
    if !matches!(max_order, 2 | 4 | 6) {
        return Err(Error::InvalidArgument(format!(
            "max_order must be 2, 4 or 6, got {max_order}"
        )));
    }
    let window = TAYLOR_WINDOW / (1.0 + gamma * gamma).sqrt();
    let c = fit_even_series(gamma, window)?;
    Ok(c[..max_order / 2].to_vec())
}
