//! Ground-state search on the six-dimensional mean-field surface, phase
//! labels, canonical representatives of the degenerate minima, and
//! observables.

use std::fmt;

use nalgebra::{Complex, SymmetricEigen, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landau::{self, quartic_coefficient};
use crate::model::{mf_energy_vec, mf_gradient, mf_second_order, solve_atom, ModelParams, OrderParameterSet};

pub const DEFAULT_N_STARTS: usize = 32;
pub const MIN_N_STARTS: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    #[serde(rename = "NP")]
    Normal,
    #[serde(rename = "SR")]
    Superradiant,
    #[serde(rename = "CSR")]
    ChiralSuperradiant,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Normal => "NP",
            Phase::Superradiant => "SR",
            Phase::ChiralSuperradiant => "CSR",
        }
    }

    /// Integer code used in delimited output: NP = 0, SR = 1, CSR = 2.
    pub fn code(self) -> u8 {
        match self {
            Phase::Normal => 0,
            Phase::Superradiant => 1,
            Phase::ChiralSuperradiant => 2,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldSolution {
    pub order: OrderParameterSet,
    pub energy: f64,
    pub phase: Phase,
    pub converged: bool,
    /// Gradient norm at `order`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    /// Photon number per atom, `sum_n |alpha_n|^2`.
    pub n_ph: f64,
    /// Loop current per atom for the cavity order 1 -> 2 -> 3.
    pub i_ph: f64,
    pub h_exp: [f64; 3],
    #[serde(skip)]
    pub alpha: [Complex<f64>; 3],
}

/// Which structured starting points the multistart uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSet {
    /// Every cavity placement, sign and chirality.
    Full,
    /// One representative per symmetry class; enough for the ground-state
    /// energy but not for enumerating the degenerate manifold.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerOptions {
    /// Number of random starts on top of the patterned seeds.
    pub n_starts: usize,
    pub seed: u64,
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Half-width of the box random starts are drawn from.
    pub random_box: f64,
    pub seeds: SeedSet,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        Self {
            n_starts: DEFAULT_N_STARTS,
            seed: 0,
            grad_tol: 1e-10,
            max_iter: 400,
            random_box: 3.0,
            seeds: SeedSet::Full,
        }
    }
}

/// Result of one local descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMinimum {
    pub order: OrderParameterSet,
    pub energy: f64,
    pub residual: f64,
    pub converged: bool,
    /// Hessian has no negative eigenvalue beyond roundoff.
    pub is_minimum: bool,
    pub iterations: usize,
}

const MAX_STEP: f64 = 1.0;
const ARMIJO: f64 = 1e-4;
const STALL_RESIDUAL: f64 = 1e-8;

/// Damped saddle-free Newton descent from `start`.
///
/// The search direction uses `|H|` (Hessian eigenvalues replaced by their
/// moduli), so negative-curvature directions are followed downhill; steps
/// are accepted by an Armijo test, or at the roundoff floor of the energy
/// when the gradient norm still decreases.
pub fn local_minimize(params: &ModelParams, start: &OrderParameterSet, opts: &MinimizerOptions) -> LocalMinimum {
    let photon = params.photon_form();
    let mut x = start.to_vector();
    let (mut energy, mut grad, mut hess) = mf_second_order(params, &photon, &x);
    let mut iterations = 0;
    let mut stalled = false;

    while iterations < opts.max_iter {
        let gnorm = grad.norm();
        if gnorm < opts.grad_tol {
            break;
        }
        iterations += 1;

        let eig = SymmetricEigen::new(hess);
        let spread = eig.eigenvalues.amax().max(1.0);
        let floor = 1e-12 * spread;
        let mut dir = Vector6::zeros();
        for i in 0..6 {
            let v = eig.eigenvectors.column(i);
            let w = eig.eigenvalues[i].abs().max(floor);
            dir -= v * (v.dot(&grad) / w);
        }
        let len = dir.norm();
        if len > MAX_STEP {
            dir *= MAX_STEP / len;
        }
        let slope = grad.dot(&dir);

        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-14 {
            let trial = x + dir * t;
            let e_trial = mf_energy_vec(params, &photon, &trial);
            let floor_e = 1e-14 * (1.0 + energy.abs());
            if e_trial <= energy + ARMIJO * t * slope {
                accepted = true;
            } else if (e_trial - energy).abs() <= floor_e {
                let (_, g_trial, _) = mf_second_order(params, &photon, &trial);
                accepted = g_trial.norm() < gnorm;
            }
            if accepted {
                x = trial;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            stalled = true;
            break;
        }
        (energy, grad, hess) = mf_second_order(params, &photon, &x);
    }

    let residual = grad.norm();
    let converged = residual < opts.grad_tol || (stalled && residual < STALL_RESIDUAL);
    let min_eig = SymmetricEigen::new(hess).eigenvalues.min();
    let is_minimum = min_eig > -1e-8 * hess.amax().max(1.0);
    LocalMinimum {
        order: OrderParameterSet::from_vector(&x),
        energy,
        residual,
        converged,
        is_minimum,
        iterations,
    }
}

fn seed_amplitudes(params: &ModelParams) -> Vec<f64> {
    let mut amps = Vec::with_capacity(5);
    if let Ok(c) = landau::coefficients(params) {
        if let Some(x) = landau::sextic_minimizer(&c) {
            let a = landau::from_rescaled(params, x.sqrt());
            if a.is_finite() && a > 0.0 && a < 10.0 {
                amps.push(a);
            }
        }
    }
    amps.extend([0.05, 0.3, 1.0, 2.0]);
    amps
}

/// Structured starting points plus `n_random` uniform draws.
pub fn starting_points(params: &ModelParams, opts: &MinimizerOptions) -> Vec<OrderParameterSet> {
    let mut out = vec![OrderParameterSet::zeros()];
    let (placements, signs): (&[usize], &[f64]) = match opts.seeds {
        SeedSet::Full => (&[0, 1, 2], &[1.0, -1.0]),
        SeedSet::Reduced => (&[0], &[1.0]),
    };
    for a in seed_amplitudes(params) {
        for &s in signs {
            out.push(OrderParameterSet::uniform(s * a));
        }
        let chiral = OrderParameterSet::new([-0.5 * a, -0.5 * a, a], [0.2 * a, -0.2 * a, 0.0]);
        for &shift in placements {
            for &s in signs {
                for chirality in [1.0, -1.0, 0.0] {
                    let mut o = chiral;
                    o.b = o.b.map(|v| v * chirality);
                    let o = if s < 0.0 { o.negated() } else { o };
                    out.push(o.rotated(shift));
                }
            }
        }
        // one empty cavity; wins just above threshold where c3 > 0
        let edge = OrderParameterSet::new([-a, 0.0, a], [0.1 * a, -0.2 * a, 0.1 * a]);
        for &shift in placements {
            for &s in signs {
                for chirality in [1.0, -1.0] {
                    let mut o = edge;
                    o.b = o.b.map(|v| v * chirality);
                    let o = if s < 0.0 { o.negated() } else { o };
                    out.push(o.rotated(shift));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let w = opts.random_box;
    for _ in 0..opts.n_starts {
        let mut x = [0.0; 6];
        for v in &mut x {
            *v = rng.random_range(-w..w);
        }
        out.push(OrderParameterSet::from_array(x));
    }
    out
}

/// Global minimum of the mean-field energy by multistart local descent.
pub fn minimize_energy(params: &ModelParams, n_starts: usize, seed: u64) -> Result<MeanFieldSolution> {
    minimize_with(
        params,
        &MinimizerOptions {
            n_starts,
            seed,
            ..Default::default()
        },
    )
}

pub fn minimize_with(params: &ModelParams, opts: &MinimizerOptions) -> Result<MeanFieldSolution> {
    if opts.n_starts < MIN_N_STARTS {
        return Err(Error::InvalidArgument(format!(
            "n_starts must be >= {MIN_N_STARTS}, got {}",
            opts.n_starts
        )));
    }
    let mut best: Option<LocalMinimum> = None;
    for start in starting_points(params, opts) {
        let m = local_minimize(params, &start, opts);
        let better = match &best {
            None => true,
            Some(b) => match (m.converged, b.converged) {
                (true, false) => true,
                (false, true) => false,
                _ => m.energy < b.energy,
            },
        };
        if better {
            best = Some(m);
        }
    }
    let best = best.expect("starting points are never empty");
    let order = canonicalize(&best.order);
    let g = mf_gradient(params, &order);
    let residual = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(MeanFieldSolution {
        order,
        energy: best.energy,
        phase: classify_phase(&order, DEFAULT_TOL, DEFAULT_TOL),
        converged: best.converged,
        residual,
    })
}

/// All distinct global minima found from the full seed set, before
/// canonicalization.
pub fn degenerate_minima(params: &ModelParams, opts: &MinimizerOptions, ident_tol: f64) -> Vec<LocalMinimum> {
    let minima: Vec<LocalMinimum> = starting_points(params, opts)
        .iter()
        .map(|s| local_minimize(params, s, opts))
        .filter(|m| m.converged && m.is_minimum)
        .collect();
    let Some(e_min) = minima.iter().map(|m| m.energy).min_by(f64::total_cmp) else {
        return Vec::new();
    };
    let e_tol = 1e-9 * (1.0 + e_min.abs());
    let mut distinct: Vec<LocalMinimum> = Vec::new();
    for m in minima.into_iter().filter(|m| m.energy <= e_min + e_tol) {
        if distinct.iter().all(|d| d.order.max_distance(&m.order) > ident_tol) {
            distinct.push(m);
        }
    }
    distinct
}

pub fn classify_phase(order: &OrderParameterSet, tol_np: f64, tol_uniform: f64) -> Phase {
    let amp = (0..3).map(|n| order.alpha(n).norm()).fold(0.0, f64::max);
    if amp < tol_np {
        return Phase::Normal;
    }
    let real = order.b.iter().all(|b| b.abs() < tol_uniform);
    let equal = (0..3).all(|n| (order.alpha(n) - order.alpha((n + 1) % 3)).norm() < tol_uniform);
    if real && equal {
        Phase::Superradiant
    } else {
        Phase::ChiralSuperradiant
    }
}

const TIE_TOL: f64 = 1e-12;

/// Canonical representative of the symmetry-related minima: the cavity
/// farthest from the other two sits at index 3, `A3 >= 0`, and `B1 <= 0`
/// when `A3` vanishes.
pub fn canonicalize(order: &OrderParameterSet) -> OrderParameterSet {
    let sep = |n: usize| {
        let a = order.alpha(n);
        (a - order.alpha((n + 1) % 3)).norm() + (a - order.alpha((n + 2) % 3)).norm()
    };
    let seps = [sep(0), sep(1), sep(2)];
    let far = (0..3).fold(2, |best, n| if seps[n] > seps[best] + TIE_TOL { n } else { best });
    let mut out = order.rotated((5 - far) % 3);
    if out.a[2] < -TIE_TOL || (out.a[2].abs() <= TIE_TOL && out.b[0] > 0.0) {
        out = out.negated();
    }
    out
}

pub fn observables(params: &ModelParams, order: &OrderParameterSet) -> Observables {
    let alpha = [order.alpha(0), order.alpha(1), order.alpha(2)];
    let n_ph = alpha.iter().map(|a| a.norm_sqr()).sum();
    let loop_sum: f64 = (0..3).map(|n| (alpha[n].conj() * alpha[(n + 1) % 3]).im).sum();
    let scale = params.field_scale();
    let h_exp = order
        .a
        .map(|a| solve_atom(scale * a, params.gamma(), params.omega_atom()).exp_h);
    Observables {
        n_ph,
        i_ph: -2.0 * loop_sum,
        h_exp,
        alpha,
    }
}

/// Quartic energy `E/(Omega N)` of the pattern `A3 = A`, `A1 = A2 = A~`
/// with the imaginary parts eliminated, in rescaled variables.
pub fn csr_reduced_energy(params: &ModelParams, a: f64, a_tilde: f64) -> Result<f64> {
    let (w, j) = (params.omega(), params.hopping());
    let (s, c) = params.theta().sin_cos();
    let denom = w - j * c;
    if denom == 0.0 {
        return Err(Error::Domain("omega - J cos(theta) = 0: reduced energy is singular".into()));
    }
    let g = params.g();
    if g == 0.0 {
        return Err(Error::DivisionByZero("reduced energy needs g > 0".into()));
    }
    let pref = params.omega_atom() / (8.0 * g * g);
    let w_csr = (w - 2.0 * j * j * s * s / denom) * pref;
    let j_eff = (j * c + j * j * s * s / denom) * pref;
    let g2 = params.gamma() * params.gamma();
    let c2 = quartic_coefficient(params.gamma());
    Ok(2.0 * (w_csr + j_eff - g2) * a_tilde * a_tilde
        + (w_csr - g2) * a * a
        + 4.0 * j_eff * a * a_tilde
        + c2 * (a.powi(4) + 2.0 * a_tilde.powi(4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mf_energy;
    use std::f64::consts::PI;

    fn p(lambda: f64, gamma: f64, theta: f64, j: f64) -> ModelParams {
        ModelParams::new(lambda, gamma, theta, j).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_phase(&OrderParameterSet::zeros(), 1e-6, 1e-6), Phase::Normal);
        assert_eq!(classify_phase(&OrderParameterSet::uniform(0.3), 1e-6, 1e-6), Phase::Superradiant);
        let o = OrderParameterSet::new([0.3, 0.3, 0.4], [-0.05, 0.05, 0.0]);
        assert_eq!(classify_phase(&o, 1e-6, 1e-6), Phase::ChiralSuperradiant);
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize(&OrderParameterSet::uniform(-0.3));
        assert_eq!(c, OrderParameterSet::uniform(0.3));

        let o = OrderParameterSet::new([0.9, -0.4, -0.4], [0.0, 0.1, -0.1]);
        let c = canonicalize(&o);
        assert_eq!(c.a, [-0.4, -0.4, 0.9]);
        assert_eq!(c.b, [0.1, -0.1, 0.0]);
        assert_eq!(canonicalize(&c), c);

        let zero = OrderParameterSet::zeros();
        assert_eq!(canonicalize(&zero), zero);
    }

    #[test]
    fn canonicalize_zero_a3_uses_b1() {
        let o = OrderParameterSet::new([0.5, 0.5, 0.0], [0.2, -0.2, 0.0]);
        let c = canonicalize(&o);
        assert!(c.b[0] <= 0.0);
    }

    #[test]
    fn observables_in_normal_phase() {
        let q = p(0.2, 1.0, 1.0, 0.1);
        let o = observables(&q, &OrderParameterSet::zeros());
        assert_eq!(o.n_ph, 0.0);
        assert_eq!(o.i_ph, 0.0);
        assert!(o.h_exp.iter().all(|h| (h + 1.0).abs() < 1e-14));
    }

    #[test]
    fn current_vanishes_for_real_fields() {
        let q = p(0.7, 1.0, 1.0, 0.1);
        let o = observables(&q, &OrderParameterSet::new([0.3, -0.1, 0.8], [0.0; 3]));
        assert_eq!(o.i_ph, 0.0);
    }

    #[test]
    fn rejects_too_few_starts() {
        assert!(minimize_energy(&p(0.5, 1.0, 1.0, 0.1), 4, 0).is_err());
    }

    #[test]
    fn normal_phase_point() {
        let s = minimize_energy(&p(0.1, 1.5, 2.0 * PI / 3.0, 0.1), 8, 1).unwrap();
        assert_eq!(s.phase, Phase::Normal);
        assert!(s.order.to_array().iter().all(|v| v.abs() < 1e-9));
        assert!((s.energy + 3.0).abs() < 1e-12);
        assert!(s.converged);
    }

    #[test]
    fn uniform_superradiant_point() {
        let s = minimize_energy(&p(0.6, 1.5, 2.0 * PI / 3.0, 0.1), 8, 1).unwrap();
        assert_eq!(s.phase, Phase::Superradiant);
        assert!(s.order.a.iter().all(|&a| a > 0.1));
        assert!(s.residual < 1e-8);
    }

    #[test]
    fn chiral_point_pattern() {
        let s = minimize_energy(&p(1.0, 1.2, PI / 3.0, 0.1), 8, 1).unwrap();
        assert_eq!(s.phase, Phase::ChiralSuperradiant);
        let o = s.order;
        assert!((o.a[0] - o.a[1]).abs() < 1e-7);
        assert!((o.a[0] - o.a[2]).abs() > 0.1);
        assert!(o.b[2].abs() < 1e-7);
        assert!((o.b[0] + o.b[1]).abs() < 1e-7);
        assert!(o.b[0].abs() > 1e-3);
        assert!(s.residual < 1e-8);
    }

    #[test]
    fn descent_never_ends_above_its_start() {
        let q = p(0.8, 0.9, 1.3, 0.1);
        let opts = MinimizerOptions::default();
        for start in starting_points(&q, &opts) {
            let m = local_minimize(&q, &start, &opts);
            assert!(m.energy <= mf_energy(&q, &start) + 1e-12);
        }
    }

    #[test]
    fn reduced_energy_vanishes_at_origin() {
        assert_eq!(csr_reduced_energy(&p(0.5, 1.0, 1.0, 0.1), 0.0, 0.0).unwrap(), 0.0);
        assert!(csr_reduced_energy(&p(0.5, 1.0, 0.0, 1.0), 0.1, 0.1).is_err());
    }
}
