//! Phase boundaries of the triangle: closed-form second-order lines, the
//! critical flux separating the uniform and chiral branches, tricritical
//! points, and a bisection locator for first-order lines.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::landau::{quartic_coefficient, sextic_coefficient, GAMMA_TCP};
use crate::meanfield::{local_minimize, minimize_with, MinimizerOptions, Phase, SeedSet};
use crate::model::{reduce_angle, ModelParams, OrderParameterSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CriticalKind {
    #[serde(rename = "second_order_SR")]
    SecondOrderSr,
    #[serde(rename = "second_order_CSR")]
    SecondOrderCsr,
    #[serde(rename = "first_order_SR")]
    FirstOrderSr,
    #[serde(rename = "first_order_CSR")]
    FirstOrderCsr,
    #[serde(rename = "TCP")]
    Tcp,
    #[serde(rename = "CTCP")]
    Ctcp,
    #[serde(rename = "SR_CSR_first_order")]
    SrCsrFirstOrder,
    #[serde(rename = "triple")]
    Triple,
}

impl CriticalKind {
    pub fn label(self) -> &'static str {
        match self {
            CriticalKind::SecondOrderSr => "second_order_SR",
            CriticalKind::SecondOrderCsr => "second_order_CSR",
            CriticalKind::FirstOrderSr => "first_order_SR",
            CriticalKind::FirstOrderCsr => "first_order_CSR",
            CriticalKind::Tcp => "TCP",
            CriticalKind::Ctcp => "CTCP",
            CriticalKind::SrCsrFirstOrder => "SR_CSR_first_order",
            CriticalKind::Triple => "triple",
        }
    }

    /// Whether the point lies on a line where an NP gap closes.
    pub fn is_continuous(self) -> bool {
        matches!(
            self,
            CriticalKind::SecondOrderSr
                | CriticalKind::SecondOrderCsr
                | CriticalKind::Tcp
                | CriticalKind::Ctcp
                | CriticalKind::Triple
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub gamma: f64,
    pub lambda: f64,
    pub theta: f64,
    pub kind: CriticalKind,
    pub j_ratio: f64,
}

impl CriticalPoint {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.lambda, self.gamma, self.theta, self.j_ratio)
    }
}

fn check_inputs(gamma: f64, theta: f64, j_ratio: f64) -> Result<()> {
    ensure_finite("gamma", gamma)?;
    ensure_finite("theta", theta)?;
    ensure_finite("j_ratio", j_ratio)?;
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(())
}

/// `lambda * gamma` on the uniform second-order line.
pub fn sr_product(theta: f64, j_ratio: f64) -> Result<f64> {
    let radicand = 1.0 + 2.0 * j_ratio * theta.cos();
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!("1 + 2 J cos(theta) = {radicand} is not positive")));
    }
    Ok(radicand.sqrt() / 8f64.sqrt())
}

/// `lambda * gamma` on the chiral second-order line.
pub fn csr_product(theta: f64, j_ratio: f64) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    let denominator = 1.0 - j_ratio * c;
    let numerator = 1.0 - 2.0 * j_ratio * c + j_ratio * j_ratio * (c * c - 3.0 * s * s);
    if !(denominator > 0.0) || !(numerator > 0.0) {
        return Err(Error::Domain(format!(
            "chiral line undefined at theta = {theta:.6}, J/omega = {j_ratio}"
        )));
    }
    Ok((numerator / denominator).sqrt() / 8f64.sqrt())
}

pub fn sr_boundary_lambda(gamma: f64, theta: f64, j_ratio: f64) -> Result<f64> {
    check_inputs(gamma, theta, j_ratio)?;
    Ok(sr_product(theta, j_ratio)? / gamma)
}

pub fn csr_boundary_lambda(gamma: f64, theta: f64, j_ratio: f64) -> Result<f64> {
    check_inputs(gamma, theta, j_ratio)?;
    Ok(csr_product(theta, j_ratio)? / gamma)
}

/// Critical flux: uniform order for `|theta| > theta_c`, chiral below.
pub fn theta_c(j_ratio: f64) -> Result<f64> {
    ensure_finite("j_ratio", j_ratio)?;
    if j_ratio < 0.0 {
        return Err(Error::Domain(format!("J/omega must be >= 0, got {j_ratio}")));
    }
    Ok((-2.0 * j_ratio / ((8.0 * j_ratio * j_ratio + 1.0).sqrt() + 1.0)).acos())
}

/// True when `theta` lies on the chiral side, `|theta| <= theta_c`.
pub fn is_chiral_side(theta: f64, j_ratio: f64) -> Result<bool> {
    Ok(reduce_angle(theta).abs() <= theta_c(j_ratio)?)
}

/// Closed-form product `K` of the branch that leaves the normal phase first.
pub fn boundary_product(theta: f64, j_ratio: f64) -> Result<f64> {
    if is_chiral_side(theta, j_ratio)? {
        csr_product(theta, j_ratio)
    } else {
        sr_product(theta, j_ratio)
    }
}

/// The NP boundary at `(gamma, theta)`: second-order line value and kind.
/// For `gamma < 1/sqrt(2)` the returned `lambda` is the spinodal, not the
/// actual first-order transition.
pub fn second_order_point(gamma: f64, theta: f64, j_ratio: f64) -> Result<CriticalPoint> {
    check_inputs(gamma, theta, j_ratio)?;
    let theta = reduce_angle(theta);
    let chiral = is_chiral_side(theta, j_ratio)?;
    let lambda = boundary_product(theta, j_ratio)? / gamma;
    let kind = if gamma == GAMMA_TCP {
        if chiral { CriticalKind::Ctcp } else { CriticalKind::Tcp }
    } else if chiral {
        CriticalKind::SecondOrderCsr
    } else {
        CriticalKind::SecondOrderSr
    };
    Ok(CriticalPoint { gamma, lambda, theta, kind, j_ratio })
}

pub fn tcp(theta: f64, j_ratio: f64, chiral: bool) -> Result<CriticalPoint> {
    check_inputs(GAMMA_TCP, theta, j_ratio)?;
    let theta = reduce_angle(theta);
    let tc = theta_c(j_ratio)?;
    let (product, kind) = if chiral {
        if theta.abs() > tc {
            return Err(Error::Domain(format!(
                "chiral tricritical point needs |theta| <= {tc:.6}, got {theta:.6}"
            )));
        }
        (csr_product(theta, j_ratio)?, CriticalKind::Ctcp)
    } else {
        if theta.abs() < tc {
            return Err(Error::Domain(format!(
                "uniform tricritical point needs |theta| >= {tc:.6}, got {theta:.6}"
            )));
        }
        (sr_product(theta, j_ratio)?, CriticalKind::Tcp)
    };
    Ok(CriticalPoint {
        gamma: FRAC_1_SQRT_2,
        lambda: product / FRAC_1_SQRT_2,
        theta,
        kind,
        j_ratio,
    })
}

/// Point at `theta = theta_c` where both NP gaps close together.
pub fn triple_point(gamma: f64, j_ratio: f64) -> Result<CriticalPoint> {
    let theta = theta_c(j_ratio)?;
    Ok(CriticalPoint {
        gamma,
        lambda: sr_boundary_lambda(gamma, theta, j_ratio)?,
        theta,
        kind: CriticalKind::Triple,
        j_ratio,
    })
}

/// Uniform-to-chiral switch inside the ordered region, at fixed `(gamma, lambda)`.
pub fn sr_csr_point(gamma: f64, lambda: f64, j_ratio: f64) -> Result<CriticalPoint> {
    check_inputs(gamma, 0.0, j_ratio)?;
    Ok(CriticalPoint {
        gamma,
        lambda,
        theta: theta_c(j_ratio)?,
        kind: CriticalKind::SrCsrFirstOrder,
        j_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrderPoint {
    pub point: CriticalPoint,
    /// Energy of the ordered branch minus the NP energy at `point.lambda`.
    pub delta_e: f64,
    /// Sextic estimate from `c1 = c2^2 / (4 c3)`; `None` when `c3 <= 0`.
    pub landau_estimate: Option<f64>,
    /// Largest `|alpha_n|` on the ordered side of the jump.
    pub jump: f64,
    /// Ordered-side minimum at the upper end of the final bracket.
    pub ordered: OrderParameterSet,
}

const BISECTION_WIDTH: f64 = 1e-12;

fn locator_options() -> MinimizerOptions {
    MinimizerOptions {
        n_starts: 8,
        seeds: SeedSet::Full,
        ..Default::default()
    }
}

/// Sextic-truncation estimate of the first-order coupling.
pub fn landau_first_order_lambda(gamma: f64, theta: f64, j_ratio: f64) -> Result<Option<f64>> {
    check_inputs(gamma, theta, j_ratio)?;
    let (c2, c3) = (quartic_coefficient(gamma), sextic_coefficient(gamma));
    if !(c3 > 0.0) {
        return Ok(None);
    }
    let k = boundary_product(theta, j_ratio)?;
    // c1 = K^2 / lambda^2 - gamma^2 in units where the soft mode is normalized
    let target = gamma * gamma + c2 * c2 / (4.0 * c3);
    Ok(Some(k / target.sqrt()))
}

/// Bisection for the coupling where the global minimum leaves the normal phase.
///
/// `bracket` defaults to `[lambda_t / 2, 2 lambda_t]` with `lambda_t` the
/// tricritical coupling of the active branch at this `theta`.
pub fn first_order_lambda(
    gamma: f64,
    theta: f64,
    j_ratio: f64,
    bracket: Option<(f64, f64)>,
) -> Result<FirstOrderPoint> {
    check_inputs(gamma, theta, j_ratio)?;
    if gamma >= GAMMA_TCP {
        return Err(Error::Domain(format!(
            "first-order line needs gamma < 1/sqrt(2), got {gamma}"
        )));
    }
    let theta = reduce_angle(theta);
    let chiral = is_chiral_side(theta, j_ratio)?;
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => {
            let lt = boundary_product(theta, j_ratio)? / GAMMA_TCP;
            (0.5 * lt, 2.0 * lt)
        }
    };
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("bad bracket [{lo}, {hi}]")));
    }
    let opts = locator_options();
    let at = |lambda: f64| ModelParams::new(lambda, gamma, theta, j_ratio);
    let ground = |lambda: f64| -> Result<_> { minimize_with(&at(lambda)?, &opts) };

    let low = ground(lo)?;
    let mut high = ground(hi)?;
    if low.phase != Phase::Normal || high.phase == Phase::Normal {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo > BISECTION_WIDTH * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let s = ground(mid)?;
        if s.phase == Phase::Normal {
            lo = mid;
        } else {
            hi = mid;
            high = s;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let p = at(lambda)?;
    let branch = local_minimize(&p, &high.order, &opts);
    let delta_e = branch.energy + 3.0 * p.omega_atom();
    let jump = (0..3).map(|n| high.order.alpha(n).norm()).fold(0.0, f64::max);
    let kind = if chiral { CriticalKind::FirstOrderCsr } else { CriticalKind::FirstOrderSr };
    Ok(FirstOrderPoint {
        point: CriticalPoint { gamma, lambda, theta, kind, j_ratio },
        delta_e,
        landau_estimate: landau_first_order_lambda(gamma, theta, j_ratio)?,
        jump,
        ordered: high.order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::minimize_energy;
    use crate::normal_phase::{second_order_lambda, spectrum, Q_VALUES};
    use std::f64::consts::PI;

    #[test]
    fn sr_line_values() {
        let l = sr_boundary_lambda(FRAC_1_SQRT_2, 2.0 * PI / 3.0, 0.1).unwrap();
        assert!((l - 0.9f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((l - 0.474342).abs() < 1e-6);
        let l = sr_boundary_lambda(1.3, 0.7, 0.0).unwrap();
        assert!((l * 1.3 - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        let l = sr_boundary_lambda(1.5, 2.0 * PI / 3.0, 0.1).unwrap();
        assert!((l - 0.223607).abs() < 1e-6, "{l}");
        assert!(sr_boundary_lambda(1.0, PI, 0.6).is_err());
        assert!(sr_boundary_lambda(0.0, PI, 0.1).is_err());
    }

    #[test]
    fn csr_line_values() {
        let l = csr_boundary_lambda(FRAC_1_SQRT_2, PI / 3.0, 0.1).unwrap();
        assert!((l - 0.481227).abs() < 1e-6, "{l}");
        let l = csr_boundary_lambda(0.9, 0.4, 0.0).unwrap();
        assert!((l * 0.9 - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!(csr_boundary_lambda(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn critical_flux() {
        assert!((theta_c(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let t = theta_c(0.1).unwrap();
        assert!((t - 1.669030).abs() < 1e-6, "{t}");
        for j in [0.01, 0.1, 0.3, 2.0] {
            let t = theta_c(j).unwrap();
            assert!((PI / 2.0..PI).contains(&t));
            let (s, c) = t.sin_cos();
            assert!((j * c + j * j * s * s / (1.0 - j * c)).abs() < 1e-12);
        }
        assert!(theta_c(-0.1).is_err());
    }

    #[test]
    fn branches_meet_at_critical_flux() {
        for j in [0.01, 0.1, 0.25] {
            let t = theta_c(j).unwrap();
            let a = sr_product(t, j).unwrap();
            let b = csr_product(t, j).unwrap();
            assert!((a - b).abs() < 1e-12, "j {j}: {a} {b}");
            let gamma = 0.9;
            let p = ModelParams::new(a / gamma, gamma, t, j).unwrap();
            let s = spectrum(&p).unwrap();
            // gaps vanish like a square root, so 1e-16 in K shows up as 1e-8 here
            let chiral = s.epsilon_q[1].min(s.epsilon_q[2]);
            assert!(s.epsilon_q[0].abs() < 1e-6 && chiral.abs() < 1e-6, "{:?}", s.epsilon_q);
        }
    }

    #[test]
    fn csr_line_matches_gap_closing() {
        for (theta, j) in [(0.3, 0.1), (-1.0, 0.25), (1.5, 0.05)] {
            let a = csr_boundary_lambda(0.8, theta, j).unwrap();
            let b = second_order_lambda(0.8, theta, j, Q_VALUES[1]).unwrap();
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn tricritical_points() {
        let p = tcp(PI, 0.0, false).unwrap();
        assert!((p.gamma - FRAC_1_SQRT_2).abs() < 1e-15 && (p.lambda - 0.5).abs() < 1e-15);
        let p = tcp(2.0 * PI / 3.0, 0.1, false).unwrap();
        assert!((p.lambda - 0.474342).abs() < 1e-6);
        assert_eq!(p.kind, CriticalKind::Tcp);
        let p = tcp(PI / 3.0, 0.1, true).unwrap();
        assert!((p.lambda - 0.481227).abs() < 1e-6);
        assert_eq!(p.kind, CriticalKind::Ctcp);
        assert!(tcp(PI / 3.0, 0.1, false).is_err());
        assert!(tcp(2.0 * PI / 3.0, 0.1, true).is_err());
    }

    #[test]
    fn single_cavity_first_order_line() {
        let f = first_order_lambda(0.1, PI, 0.0, None).unwrap();
        assert!((f.point.lambda - 0.843348).abs() < 1e-5, "{}", f.point.lambda);
        assert!(f.delta_e.abs() < 1e-10, "{}", f.delta_e);
        assert!(f.jump > 0.1);
    }

    #[test]
    fn first_order_jump_in_triangle() {
        let f = first_order_lambda(0.1, 2.0 * PI / 3.0, 0.1, None).unwrap();
        assert!((f.point.lambda - 0.800070).abs() < 1e-5, "{}", f.point.lambda);
        assert!(f.delta_e.abs() < 1e-10);
        assert_eq!(f.point.kind, CriticalKind::FirstOrderSr);
        let below = minimize_energy(&ModelParams::new(f.point.lambda - 1e-4, 0.1, 2.0 * PI / 3.0, 0.1).unwrap(), 16, 0).unwrap();
        let above = minimize_energy(&ModelParams::new(f.point.lambda + 1e-4, 0.1, 2.0 * PI / 3.0, 0.1).unwrap(), 16, 0).unwrap();
        let amp = |o: &OrderParameterSet| (0..3).map(|n| o.alpha(n).norm()).fold(0.0, f64::max);
        assert!(amp(&above.order) - amp(&below.order) > 0.1);
    }

    #[test]
    fn first_order_merges_into_second_order() {
        let theta = 2.0 * PI / 3.0;
        let f = first_order_lambda(0.70, theta, 0.1, None).unwrap();
        let l2 = sr_boundary_lambda(0.70, theta, 0.1).unwrap();
        assert!(f.point.lambda <= l2 && l2 - f.point.lambda < 1e-3, "{} {l2}", f.point.lambda);
        let f = first_order_lambda(0.706, theta, 0.1, None).unwrap();
        let t = tcp(theta, 0.1, false).unwrap();
        assert!((f.point.lambda - t.lambda).abs() < 1e-3);
    }

    #[test]
    fn landau_estimate_within_five_percent() {
        let theta = 2.0 * PI / 3.0;
        for gamma in [0.5, 0.6, 0.7] {
            let f = first_order_lambda(gamma, theta, 0.1, None).unwrap();
            let est = f.landau_estimate.unwrap();
            assert!((est / f.point.lambda - 1.0).abs() < 0.05, "gamma {gamma}: {est} vs {}", f.point.lambda);
        }
        assert_eq!(landau_first_order_lambda(0.3, theta, 0.1).unwrap(), None);
    }

    #[test]
    fn chiral_first_order_line() {
        let f = first_order_lambda(0.5, PI / 3.0, 0.1, None).unwrap();
        assert_eq!(f.point.kind, CriticalKind::FirstOrderCsr);
        assert!(f.delta_e.abs() < 1e-10);
        assert!(f.point.lambda < csr_boundary_lambda(0.5, PI / 3.0, 0.1).unwrap());
    }

    #[test]
    fn bracket_without_switch_is_rejected() {
        let err = first_order_lambda(0.1, PI, 0.0, Some((0.1, 0.2))).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
        assert!(first_order_lambda(0.8, PI, 0.0, None).is_err());
    }
}
