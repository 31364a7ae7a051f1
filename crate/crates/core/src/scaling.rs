//! Power-law behaviour near the second-order lines: photon number on the
//! ordered side and the lowest normal-phase gaps on the other.

use serde::Serialize;

use crate::boundaries::{csr_product, sr_product, CriticalKind, CriticalPoint};
use crate::error::{Error, Result};
use crate::meanfield::{minimize_energy, observables, Phase, DEFAULT_N_STARTS};
use crate::model::ModelParams;
use crate::normal_phase::spectrum;

pub const MIN_R_SQUARED: f64 = 0.999;
pub const DEFAULT_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    #[serde(rename = "into_SR")]
    IntoOrdered,
    #[serde(rename = "into_NP")]
    IntoNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScalingTarget {
    #[serde(rename = "n_ph")]
    PhotonNumber,
    #[serde(rename = "epsilon_1")]
    Epsilon1,
    #[serde(rename = "epsilon_2")]
    Epsilon2,
}

impl ScalingTarget {
    pub fn label(self) -> &'static str {
        match self {
            ScalingTarget::PhotonNumber => "n_ph",
            ScalingTarget::Epsilon1 => "epsilon_1",
            ScalingTarget::Epsilon2 => "epsilon_2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub l_range: (f64, f64),
    pub n_points: usize,
    pub target: ScalingTarget,
    /// `r_squared >= MIN_R_SQUARED`.
    pub accepted: bool,
    /// Quasi-momentum of the fitted gap at the smallest `L`; `None` for `n_ph`.
    pub q: Option<f64>,
}

/// `n` geometrically spaced values from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "geometric grid needs 0 < lo < hi and n >= 2, got [{lo}, {hi}] x {n}"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// Default distances for the photon-number fit.
pub fn default_beta_grid() -> Vec<f64> {
    geometric_grid(1e-5, 1e-2, DEFAULT_POINTS).expect("static grid")
}

/// Default distances for the gap fits. The chiral gap is linear in `L`
/// only once `L` is small against the squared splitting of `eps_q` and
/// `eps_-q`, which is about `(4J sin(theta))^2`.
pub fn default_eta_grid() -> Vec<f64> {
    geometric_grid(1e-10, 1e-7, DEFAULT_POINTS).expect("static grid")
}

fn boundary_value(cp: &CriticalPoint) -> Result<f64> {
    match cp.kind {
        CriticalKind::SecondOrderSr | CriticalKind::Tcp | CriticalKind::Triple => sr_product(cp.theta, cp.j_ratio),
        CriticalKind::SecondOrderCsr | CriticalKind::Ctcp => csr_product(cp.theta, cp.j_ratio),
        other => Err(Error::Domain(format!("{} is not a continuous transition", other.label()))),
    }
}

/// Points at distance `L` from `cp` along the normal of `lambda gamma = K`
/// in the `(gamma, lambda)` plane.
pub fn approach_points(cp: &CriticalPoint, side: Side, l_list: &[f64]) -> Result<Vec<ModelParams>> {
    let k = boundary_value(cp)?;
    let miss = cp.lambda * cp.gamma - k;
    if miss.abs() > 1e-8 {
        return Err(Error::Domain(format!("point is off its boundary by {miss:.3e}")));
    }
    let norm = cp.lambda.hypot(cp.gamma);
    let sign = match side {
        Side::IntoOrdered => 1.0,
        Side::IntoNormal => -1.0,
    };
    let (ng, nl) = (sign * cp.lambda / norm, sign * cp.gamma / norm);
    l_list
        .iter()
        .map(|&l| {
            if !(l >= 0.0) {
                return Err(Error::InvalidArgument(format!("L must be >= 0, got {l}")));
            }
            ModelParams::new(cp.lambda + l * nl, cp.gamma + l * ng, cp.theta, cp.j_ratio)
        })
        .collect()
}

/// Least-squares line through `(ln x, ln y)`: slope, intercept, r^2.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument("fit needs two or more paired points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("log-log fit needs strictly positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

fn make_fit(l: &[f64], y: &[f64], target: ScalingTarget, q: Option<f64>) -> Result<ScalingFit> {
    let (exponent, intercept, r_squared) = log_log_fit(l, y)?;
    let (lo, hi) = l.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(ScalingFit {
        exponent,
        intercept,
        r_squared,
        l_range: (lo, hi),
        n_points: l.len(),
        target,
        accepted: r_squared >= MIN_R_SQUARED,
        q,
    })
}

/// Exponent of the photon number on the ordered side, `n_ph ~ L^beta`.
pub fn beta_exponent(cp: &CriticalPoint, l_grid: &[f64]) -> Result<ScalingFit> {
    let points = approach_points(cp, Side::IntoOrdered, l_grid)?;
    let mut n_ph = Vec::with_capacity(points.len());
    for (p, &l) in points.iter().zip(l_grid) {
        let s = minimize_energy(p, DEFAULT_N_STARTS, 0)?;
        if !s.converged || s.phase == Phase::Normal {
            return Err(Error::NotConverged { l, residual: s.residual });
        }
        n_ph.push(observables(p, &s.order).n_ph);
    }
    make_fit(l_grid, &n_ph, ScalingTarget::PhotonNumber, None)
}

/// Exponent of the lowest normal-phase gap, `eps_1 ~ L^eta`. At a triple
/// point the second gap also closes and gets its own fit.
pub fn eta_exponent(cp: &CriticalPoint, l_grid: &[f64]) -> Result<Vec<ScalingFit>> {
    let points = approach_points(cp, Side::IntoNormal, l_grid)?;
    let mut gaps = [Vec::new(), Vec::new()];
    let mut q = [None; 2];
    for (i, p) in points.iter().enumerate() {
        let s = spectrum(p)?;
        let sorted = s.sorted_gaps();
        for k in 0..2 {
            gaps[k].push(sorted[k].1);
        }
        if i == 0 {
            q = [Some(s.q_values[sorted[0].0]), Some(s.q_values[sorted[1].0])];
        }
    }
    let mut out = vec![make_fit(l_grid, &gaps[0], ScalingTarget::Epsilon1, q[0])?];
    if cp.kind == CriticalKind::Triple {
        out.push(make_fit(l_grid, &gaps[1], ScalingTarget::Epsilon2, q[1])?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundaries::{second_order_point, tcp, triple_point};
    use crate::meanfield::classify_phase;
    use crate::meanfield::DEFAULT_TOL;
    use std::f64::consts::PI;

    #[test]
    fn grid_is_geometric() {
        let g = geometric_grid(1e-5, 1e-2, 4).unwrap();
        assert!((g[0] - 1e-5).abs() < 1e-20 && (g[3] - 1e-2).abs() < 1e-15);
        assert!((g[1] / g[0] - 10.0).abs() < 1e-9);
        assert!(geometric_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn approach_geometry() {
        let cp = second_order_point(0.9, 2.0 * PI / 3.0, 0.1).unwrap();
        let pts = approach_points(&cp, Side::IntoOrdered, &[0.0, 1e-3]).unwrap();
        assert_eq!(pts[0].lambda(), cp.lambda);
        assert_eq!(pts[0].gamma(), cp.gamma);
        let norm = cp.lambda.hypot(cp.gamma);
        assert!(((pts[1].gamma() - cp.gamma) / 1e-3 - cp.lambda / norm).abs() < 1e-9);
        assert!(((pts[1].lambda() - cp.lambda) / 1e-3 - cp.gamma / norm).abs() < 1e-9);
        let mut off = cp;
        off.lambda += 1e-6;
        assert!(approach_points(&off, Side::IntoNormal, &[1e-3]).is_err());
    }

    #[test]
    fn normal_side_is_normal() {
        let cp = second_order_point(0.9, PI / 3.0, 0.1).unwrap();
        for p in approach_points(&cp, Side::IntoNormal, &[1e-4, 1e-3, 1e-2]).unwrap() {
            let s = minimize_energy(&p, 16, 1).unwrap();
            assert_eq!(classify_phase(&s.order, DEFAULT_TOL, DEFAULT_TOL), Phase::Normal);
        }
    }

    #[test]
    fn linear_photon_number_at_second_order() {
        let cp = second_order_point(0.9, 2.0 * PI / 3.0, 0.1).unwrap();
        let f = beta_exponent(&cp, &default_beta_grid()).unwrap();
        assert!((f.exponent - 1.0).abs() < 0.05 && f.accepted, "{f:?}");
    }

    #[test]
    fn square_root_photon_number_at_tricritical() {
        let cp = tcp(2.0 * PI / 3.0, 0.1, false).unwrap();
        let f = beta_exponent(&cp, &default_beta_grid()).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.05 && f.accepted, "{f:?}");
    }

    #[test]
    fn gap_exponents() {
        let cp = second_order_point(0.9, 2.0 * PI / 3.0, 0.01).unwrap();
        let f = &eta_exponent(&cp, &default_eta_grid()).unwrap()[0];
        assert!((f.exponent - 0.5).abs() < 0.05 && f.accepted, "{f:?}");
        assert_eq!(f.q, Some(0.0));
        let cp = second_order_point(0.9, PI / 3.0, 0.01).unwrap();
        let f = &eta_exponent(&cp, &default_eta_grid()).unwrap()[0];
        assert!((f.exponent - 1.0).abs() < 0.05 && f.accepted, "{f:?}");
        assert!(f.q.unwrap() != 0.0);
    }

    #[test]
    fn triple_point_has_two_closing_gaps() {
        let cp = triple_point(0.9, 0.01).unwrap();
        let fits = eta_exponent(&cp, &default_eta_grid()).unwrap();
        assert_eq!(fits.len(), 2);
        let mut e: Vec<f64> = fits.iter().map(|f| f.exponent).collect();
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 0.5).abs() < 0.05 && (e[1] - 1.0).abs() < 0.05, "{fits:?}");
    }

    #[test]
    fn first_order_points_are_rejected() {
        let mut cp = tcp(2.0 * PI / 3.0, 0.1, false).unwrap();
        cp.kind = CriticalKind::FirstOrderSr;
        assert!(approach_points(&cp, Side::IntoNormal, &[1e-3]).is_err());
    }
}
