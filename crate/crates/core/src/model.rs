//! Parameters of the triangle, the single-atom mean-field problem and the
//! six-variable mean-field energy surface.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Complex, Matrix3, Matrix6, SymmetricEigen, Vector6};
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

/// Reduce an angle to the interval (-pi, pi].
pub fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Hamiltonian parameters of the triangle.
///
/// `omega` is the cavity frequency and `omega_atom` the atomic level spacing;
/// both default to one. The light-matter coupling is stored in its
/// dimensionless form `lambda = g / sqrt(omega * omega_atom)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    omega: f64,
    omega_atom: f64,
    lambda: f64,
    gamma: f64,
    j_ratio: f64,
    theta: f64,
}

impl ModelParams {
    /// Parameters in units where `omega = omega_atom = 1`.
    pub fn new(lambda: f64, gamma: f64, theta: f64, j_ratio: f64) -> Result<Self> {
        Self::with_frequencies(1.0, 1.0, lambda, gamma, theta, j_ratio)
    }

    pub fn with_frequencies(
        omega: f64,
        omega_atom: f64,
        lambda: f64,
        gamma: f64,
        theta: f64,
        j_ratio: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega", omega),
            ("omega_atom", omega_atom),
            ("lambda", lambda),
            ("gamma", gamma),
            ("theta", theta),
            ("j_ratio", j_ratio),
        ] {
            ensure_finite(name, v)?;
        }
        if omega <= 0.0 {
            return Err(Error::InvalidArgument(format!("omega must be > 0, got {omega}")));
        }
        if omega_atom <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "omega_atom must be > 0, got {omega_atom}"
            )));
        }
        if lambda < 0.0 {
            return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self {
            omega,
            omega_atom,
            lambda,
            gamma,
            j_ratio,
            theta: reduce_angle(theta),
        })
    }

    /// Build from the bare coupling `g` instead of `lambda`.
    pub fn from_coupling(
        omega: f64,
        omega_atom: f64,
        g: f64,
        gamma: f64,
        theta: f64,
        j_ratio: f64,
    ) -> Result<Self> {
        ensure_finite("g", g)?;
        if omega <= 0.0 || omega_atom <= 0.0 {
            return Err(Error::InvalidArgument("frequencies must be > 0".into()));
        }
        let lambda = g / (omega * omega_atom).sqrt();
        Self::with_frequencies(omega, omega_atom, lambda, gamma, theta, j_ratio)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega_atom(&self) -> f64 {
        self.omega_atom
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn j_ratio(&self) -> f64 {
        self.j_ratio
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Bare atom-cavity coupling `g = lambda * sqrt(omega * omega_atom)`.
    pub fn g(&self) -> f64 {
        self.lambda * (self.omega * self.omega_atom).sqrt()
    }

    /// Hopping amplitude `J` in energy units.
    pub fn hopping(&self) -> f64 {
        self.j_ratio * self.omega
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::with_frequencies(self.omega, self.omega_atom, lambda, self.gamma, self.theta, self.j_ratio)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::with_frequencies(self.omega, self.omega_atom, self.lambda, gamma, self.theta, self.j_ratio)
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::with_frequencies(self.omega, self.omega_atom, self.lambda, self.gamma, theta, self.j_ratio)
    }

    pub fn with_j_ratio(self, j_ratio: f64) -> Result<Self> {
        Self::with_frequencies(self.omega, self.omega_atom, self.lambda, self.gamma, self.theta, j_ratio)
    }

    /// Prefactor of `A_n` in the single-atom problem, `x_n = 2 sqrt(2) g A_n`.
    pub fn field_scale(&self) -> f64 {
        2.0 * SQRT_2 * self.g()
    }

    /// Symmetric 6x6 matrix `P` with photon energy `x^T P x` in the
    /// `[A1, A2, A3, B1, B2, B3]` layout.
    pub fn photon_form(&self) -> Matrix6<f64> {
        let j = self.hopping();
        let (s, c) = self.theta.sin_cos();
        let mut p = Matrix6::from_diagonal_element(self.omega);
        for n in 0..3 {
            let up = (n + 1) % 3;
            let down = (n + 2) % 3;
            p[(n, up)] = j * c;
            p[(n + 3, up + 3)] = j * c;
            // A_n B_{n+1} carries -sin, A_n B_{n-1} carries +sin
            p[(n, up + 3)] = -j * s;
            p[(n, down + 3)] = j * s;
        }
        for r in 0..6 {
            for col in 0..r {
                let v = if p[(r, col)] != 0.0 { p[(r, col)] } else { p[(col, r)] };
                p[(r, col)] = v;
                p[(col, r)] = v;
            }
        }
        p
    }
}

/// Lowest eigenpair data of the single-atom mean-field Hamiltonian `x d + Omega h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomicGroundState {
    pub energy: f64,
    pub exp_d: f64,
    pub exp_h: f64,
}

/// Dipole operator in the `(|1>, |0>, |-1>)` basis.
pub fn dipole(gamma: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, gamma, 0.0, gamma, 0.0)
}

/// Bare atomic Hamiltonian `h = diag(1, 0, -1)`.
pub fn level_operator() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 0.0, -1.0))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AtomicSolution {
    pub energy: f64,
    pub exp_d: f64,
    pub exp_h: f64,
    /// Second derivative of the ground energy with respect to `x`.
    pub curvature: f64,
}

const DEGENERACY_TOL: f64 = 1e-12;

pub(crate) fn solve_atom(x: f64, gamma: f64, omega_atom: f64) -> AtomicSolution {
    let d = dipole(gamma);
    let h = level_operator();
    let m = d * x + h * omega_atom;
    let eig = SymmetricEigen::new(m);

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let e0 = eig.eigenvalues[order[0]];
    let scale = 1.0 + e0.abs();

    let mut ground = eig.eigenvectors.column(order[0]).into_owned();
    let mut skip = None;
    if eig.eigenvalues[order[1]] - e0 < DEGENERACY_TOL * scale {
        // Degenerate ground level: take the combination with the lowest <h>.
        let u = ground.clone();
        let v = eig.eigenvectors.column(order[1]).into_owned();
        let huu = (u.transpose() * h * u)[0];
        let hvv = (v.transpose() * h * v)[0];
        let huv = (u.transpose() * h * v)[0];
        let half_diff = 0.5 * (huu - hvv);
        let r = (half_diff * half_diff + huv * huv).sqrt();
        let lowest = 0.5 * (huu + hvv) - r;
        let (cu, cv) = if huv.abs() > 0.0 {
            (huv, lowest - huu)
        } else if huu <= hvv {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let norm = (cu * cu + cv * cv).sqrt();
        ground = (u * cu + v * cv) / norm;
        skip = Some(order[1]);
    }

    let exp_d = (ground.transpose() * d * ground)[0];
    let exp_h = (ground.transpose() * h * ground)[0];

    let mut curvature = 0.0;
    for &k in &order[1..] {
        if Some(k) == skip {
            continue;
        }
        let vk = eig.eigenvectors.column(k);
        let coupling = (vk.transpose() * d * ground)[0];
        let gap = e0 - eig.eigenvalues[k];
        curvature += 2.0 * coupling * coupling / gap;
    }

    AtomicSolution {
        energy: e0,
        exp_d,
        exp_h,
        curvature,
    }
}

/// Ground state of `x d(gamma) + Omega h` with `<d>` and `<h>` in that state.
///
/// At an exact level crossing the expectations are convention dependent; the
/// vector with the lowest `<h>` inside the degenerate pair is used.
pub fn atomic_ground(x: f64, gamma: f64, omega_atom: f64) -> Result<AtomicGroundState> {
    ensure_finite("x", x)?;
    ensure_finite("gamma", gamma)?;
    ensure_finite("omega_atom", omega_atom)?;
    if gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
    }
    if omega_atom <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "omega_atom must be > 0, got {omega_atom}"
        )));
    }
    let s = solve_atom(x, gamma, omega_atom);
    Ok(AtomicGroundState {
        energy: s.energy,
        exp_d: s.exp_d,
        exp_h: s.exp_h,
    })
}

/// The three complex mean fields `alpha_n = A_n + i B_n`, one per cavity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct OrderParameterSet {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl OrderParameterSet {
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn new(a: [f64; 3], b: [f64; 3]) -> Self {
        Self { a, b }
    }

    /// Uniform real configuration `alpha_n = amplitude`.
    pub fn uniform(amplitude: f64) -> Self {
        Self::new([amplitude; 3], [0.0; 3])
    }

    /// Layout `[A1, A2, A3, B1, B2, B3]`.
    pub fn from_array(x: [f64; 6]) -> Self {
        Self::new([x[0], x[1], x[2]], [x[3], x[4], x[5]])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a[0], self.a[1], self.a[2], self.b[0], self.b[1], self.b[2]]
    }

    pub(crate) fn from_vector(v: &Vector6<f64>) -> Self {
        Self::from_array([v[0], v[1], v[2], v[3], v[4], v[5]])
    }

    pub(crate) fn to_vector(&self) -> Vector6<f64> {
        Vector6::from_row_slice(&self.to_array())
    }

    pub fn alpha(&self, n: usize) -> Complex<f64> {
        Complex::new(self.a[n], self.b[n])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Cyclic relabeling: cavity `n` moves to `n + shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut out = Self::zeros();
        for n in 0..3 {
            let m = (n + shift) % 3;
            out.a[m] = self.a[n];
            out.b[m] = self.b[n];
        }
        out
    }

    /// Global sign flip `alpha_n -> -alpha_n`.
    pub fn negated(&self) -> Self {
        Self::new(self.a.map(|v| -v), self.b.map(|v| -v))
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Energy per atom of the mean-field configuration `order`.
pub fn mf_energy(params: &ModelParams, order: &OrderParameterSet) -> f64 {
    let x = order.to_vector();
    let photon = (x.transpose() * params.photon_form() * x)[0];
    let scale = params.field_scale();
    let atoms: f64 = order
        .a
        .iter()
        .map(|&a| solve_atom(scale * a, params.gamma, params.omega_atom).energy)
        .sum();
    photon + atoms
}

/// Analytic gradient of [`mf_energy`] in the `[A1, A2, A3, B1, B2, B3]` layout.
pub fn mf_gradient(params: &ModelParams, order: &OrderParameterSet) -> [f64; 6] {
    let x = order.to_vector();
    let mut grad = params.photon_form() * x * 2.0;
    let scale = params.field_scale();
    for n in 0..3 {
        grad[n] += scale * solve_atom(scale * order.a[n], params.gamma, params.omega_atom).exp_d;
    }
    [grad[0], grad[1], grad[2], grad[3], grad[4], grad[5]]
}

/// Energy, gradient and Hessian in one pass.
pub(crate) fn mf_second_order(
    params: &ModelParams,
    photon: &Matrix6<f64>,
    x: &Vector6<f64>,
) -> (f64, Vector6<f64>, Matrix6<f64>) {
    let px = photon * x;
    let mut energy = x.dot(&px);
    let mut grad = px * 2.0;
    let mut hess = photon * 2.0;
    let scale = params.field_scale();
    for n in 0..3 {
        let s = solve_atom(scale * x[n], params.gamma, params.omega_atom);
        energy += s.energy;
        grad[n] += scale * s.exp_d;
        hess[(n, n)] += scale * scale * s.curvature;
    }
    (energy, grad, hess)
}

pub(crate) fn mf_energy_vec(params: &ModelParams, photon: &Matrix6<f64>, x: &Vector6<f64>) -> f64 {
    let mut energy = x.dot(&(photon * x));
    let scale = params.field_scale();
    for n in 0..3 {
        energy += solve_atom(scale * x[n], params.gamma, params.omega_atom).energy;
    }
    energy
}
