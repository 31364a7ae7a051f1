//! Quadratic theory of the normal phase: the photon modes of the ring,
//! dressed by the projected atomic response, diagonalized by a two-mode
//! Bogoliubov transformation per quasi-momentum pair `(q, -q)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Quasi-momenta of the three-site ring, `0, +2pi/3, -2pi/3`.
pub const Q_VALUES: [f64; 3] = [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0];

const NEGATIVE_GAP_TOL: f64 = 1e-10;
const RADICAND_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalPhaseSpectrum {
    pub q_values: [f64; 3],
    pub omega_q: [f64; 3],
    pub epsilon_q: [f64; 3],
    pub beta_q: [f64; 3],
    /// `E_g / N`; the 1/N pieces are kept only for finite `n_atoms`.
    pub e_ground_intensive: f64,
    /// `E_0 / N` under the same convention.
    pub e0_intensive: f64,
    /// The O(1) part of `E_g`, i.e. `-6 g^2 gamma^2 / Omega + sum_q (eps_q - omega_q) / 2`.
    pub ground_correction: f64,
}

impl NormalPhaseSpectrum {
    /// Lowest excitation energy and its index into `q_values`; ties go to `q = 0`.
    pub fn lowest(&self) -> (usize, f64) {
        let mut best = 0;
        for i in 1..3 {
            if self.epsilon_q[i] < self.epsilon_q[best] {
                best = i;
            }
        }
        (best, self.epsilon_q[best])
    }

    /// Excitation energies sorted ascending, ties in `q_values` order.
    pub fn sorted_gaps(&self) -> [(usize, f64); 3] {
        let mut g = [0, 1, 2].map(|i| (i, self.epsilon_q[i]));
        g.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        g
    }
}

fn dressing(params: &ModelParams) -> f64 {
    let g = params.g();
    let gamma = params.gamma();
    g * g * gamma * gamma / params.omega_atom()
}

/// Dressed mode frequency `omega - 4 g^2 gamma^2 / Omega + 2J cos(theta - q)`.
pub fn omega_q(params: &ModelParams, q: f64) -> f64 {
    params.omega() - 4.0 * dressing(params) + 2.0 * params.hopping() * (params.theta() - q).cos()
}

/// Excitation energy of mode `q` from the `(q, -q)` Bogoliubov block.
///
/// Returns `None` when the block has no real spectrum.
fn excitation(params: &ModelParams, q: f64) -> Option<(f64, f64)> {
    let k = 8.0 * dressing(params);
    let w_plus = omega_q(params, q);
    let w_minus = omega_q(params, -q);
    let sum = w_plus + w_minus;
    let mut radicand = (sum - k) * (sum + k);
    if radicand < 0.0 {
        // roundoff exactly on the q = 0 gap-closing surface
        if radicand > -RADICAND_TOL * (sum + k) * (sum + k) {
            radicand = 0.0;
        } else {
            return None;
        }
    }
    let root = radicand.sqrt();
    let diff = w_plus - w_minus;
    let eps = if diff >= 0.0 {
        0.5 * (diff + root)
    } else {
        // same value, written without the cancellation near eps = 0
        (radicand - diff * diff) / (2.0 * (root - diff))
    };
    let beta = -0.125 * ((sum - k) / (sum + k)).ln();
    Some((eps, beta))
}

/// Spectrum in the thermodynamic limit.
pub fn spectrum(params: &ModelParams) -> Result<NormalPhaseSpectrum> {
    spectrum_with_atoms(params, None)
}

/// Spectrum with an explicit atom number for the 1/N energy pieces.
pub fn spectrum_with_atoms(params: &ModelParams, n_atoms: Option<f64>) -> Result<NormalPhaseSpectrum> {
    if let Some(n) = n_atoms {
        if !(n > 0.0) {
            return Err(Error::InvalidArgument(format!("atom number must be > 0, got {n}")));
        }
    }
    let mut omega = [0.0; 3];
    let mut epsilon = [0.0; 3];
    let mut beta = [0.0; 3];
    for (i, &q) in Q_VALUES.iter().enumerate() {
        omega[i] = omega_q(params, q);
        let (eps, b) = excitation(params, q).ok_or(Error::Unstable { q, epsilon: f64::NAN })?;
        if eps < -NEGATIVE_GAP_TOL {
            return Err(Error::Unstable { q, epsilon: eps });
        }
        epsilon[i] = eps;
        beta[i] = b;
    }

    let e0_correction = -6.0 * dressing(params);
    let ground_correction =
        e0_correction + 0.5 * (0..3).map(|i| epsilon[i] - omega[i]).sum::<f64>();
    let bulk = -3.0 * params.omega_atom();
    let inv_n = n_atoms.map_or(0.0, |n| 1.0 / n);
    Ok(NormalPhaseSpectrum {
        q_values: Q_VALUES,
        omega_q: omega,
        epsilon_q: epsilon,
        beta_q: beta,
        e_ground_intensive: bulk + ground_correction * inv_n,
        e0_intensive: bulk + e0_correction * inv_n,
        ground_correction,
    })
}

/// Right-hand side `K = lambda gamma` of the gap-closing condition for branch `q`.
pub fn critical_product(theta: f64, j_ratio: f64, q: f64) -> Result<f64> {
    let (cq, ct) = (q.cos(), theta.cos());
    let numerator = 1.0
        + 4.0 * j_ratio * cq * ct
        + 4.0 * j_ratio * j_ratio * (theta - q).cos() * (theta + q).cos();
    let denominator = 8.0 * (1.0 + 2.0 * j_ratio * ct * cq);
    if !(denominator > 0.0) || !(numerator > 0.0) {
        return Err(Error::Domain(format!(
            "branch q = {q:.6} never closes at theta = {theta:.6}, J/omega = {j_ratio}"
        )));
    }
    Ok((numerator / denominator).sqrt())
}

/// Coupling `lambda` at which `eps_q` (or `eps_-q`) vanishes.
pub fn second_order_lambda(gamma: f64, theta: f64, j_ratio: f64, q: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(critical_product(theta, j_ratio, q)? / gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lambda: f64, gamma: f64, theta: f64, j: f64) -> ModelParams {
        ModelParams::new(lambda, gamma, theta, j).unwrap()
    }

    #[test]
    fn bare_cavity_frequencies() {
        let q = p(0.0, 1.0, 0.0, 0.0);
        assert_eq!(omega_q(&q, 0.0), 1.0);
        let q = p(0.0, 1.0, 0.0, 0.1);
        assert!((omega_q(&q, 0.0) - 1.2).abs() < 1e-15);
        let q = p(0.5, std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0);
        assert!((omega_q(&q, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn free_photons_on_ring() {
        let q = p(0.0, 0.8, 1.1, 0.15);
        let s = spectrum(&q).unwrap();
        for i in 0..3 {
            let want = 1.0 + 0.3 * (1.1 - Q_VALUES[i]).cos();
            assert!((s.epsilon_q[i] - want).abs() < 1e-14);
            assert!(s.beta_q[i].abs() < 1e-15);
        }
        assert!((s.e_ground_intensive + 3.0).abs() < 1e-15);
    }

    #[test]
    fn decoupled_cavities_all_close_together() {
        let gamma = 1.3;
        let q = p(1.0 / (8f64.sqrt() * gamma), gamma, 0.4, 0.0);
        let s = spectrum(&q).unwrap();
        assert!(s.epsilon_q.iter().all(|e| e.abs() < 1e-7), "{:?}", s.epsilon_q);
    }

    #[test]
    fn gap_closes_on_returned_lambda() {
        let (gamma, j) = (0.9, 0.1);
        for theta in [2.0 * PI / 3.0, PI / 3.0, 2.5, -0.7] {
            let lambda = Q_VALUES[..2]
                .iter()
                .map(|&q| second_order_lambda(gamma, theta, j, q).unwrap())
                .fold(f64::INFINITY, f64::min);
            let s = spectrum(&p(lambda, gamma, theta, j)).unwrap();
            assert!(s.lowest().1 < 1e-8, "theta {theta}: {:?}", s.epsilon_q);
        }
    }

    #[test]
    fn instability_reported_beyond_boundary() {
        let lambda = second_order_lambda(0.9, 2.0 * PI / 3.0, 0.1, 0.0).unwrap();
        let err = spectrum(&p(lambda * 1.01, 0.9, 2.0 * PI / 3.0, 0.1)).unwrap_err();
        assert!(matches!(err, Error::Unstable { q, .. } if q == 0.0));
        let lambda = second_order_lambda(0.9, PI / 3.0, 0.1, Q_VALUES[1]).unwrap();
        let err = spectrum(&p(lambda * 1.01, 0.9, PI / 3.0, 0.1)).unwrap_err();
        assert!(matches!(err, Error::Unstable { q, .. } if q != 0.0));
    }

    #[test]
    fn csr_branch_value() {
        let l = second_order_lambda(std::f64::consts::FRAC_1_SQRT_2, PI / 3.0, 0.1, Q_VALUES[1]).unwrap();
        assert!((l - 0.481227).abs() < 1e-6, "{l}");
        let l = second_order_lambda(1.0, 0.3, 0.0, Q_VALUES[2]).unwrap();
        assert!((l - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!(second_order_lambda(0.0, 0.3, 0.1, 0.0).is_err());
    }

    #[test]
    fn lowest_prefers_zero_momentum_on_ties() {
        let q = p(0.2, 0.9, 0.0, 0.0);
        let s = spectrum(&q).unwrap();
        assert_eq!(s.lowest().0, 0);
    }

    #[test]
    fn finite_n_energy_pieces() {
        let q = p(0.2, 0.9, 1.0, 0.1);
        let inf = spectrum(&q).unwrap();
        let fin = spectrum_with_atoms(&q, Some(100.0)).unwrap();
        assert!((inf.e_ground_intensive + 3.0).abs() < 1e-15);
        assert!((fin.e_ground_intensive - (-3.0 + inf.ground_correction / 100.0)).abs() < 1e-15);
        let dressing = 0.04 * 0.81;
        assert!((fin.e0_intensive - (-3.0 - 6.0 * dressing / 100.0)).abs() < 1e-15);
        assert!(spectrum_with_atoms(&q, Some(0.0)).is_err());
    }
}
