use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdt_core::boundaries::{
    csr_boundary_lambda, first_order_lambda, second_order_point, sr_boundary_lambda, theta_c,
};
use tdt_core::meanfield::{
    csr_reduced_energy, degenerate_minima, minimize_energy, observables, MinimizerOptions, Phase,
};
use tdt_core::ModelParams;

const J: f64 = 0.1;

fn p(lambda: f64, gamma: f64, theta: f64, j: f64) -> ModelParams {
    ModelParams::new(lambda, gamma, theta, j).unwrap()
}

#[test]
fn superradiant_points_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tc = theta_c(J).unwrap();
    for _ in 0..50 {
        let gamma = rng.random_range(0.75..1.5);
        let theta = rng.random_range(tc + 0.05..PI) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let lc = sr_boundary_lambda(gamma, theta, J).unwrap();
        let lambda = lc * rng.random_range(1.1..2.5);
        let s = minimize_energy(&p(lambda, gamma, theta, J), 16, 0).unwrap();
        assert_eq!(s.phase, Phase::Superradiant, "{lambda} {gamma} {theta}");
        let o = s.order;
        let spread = (0..3).map(|n| (o.a[n] - o.a[(n + 1) % 3]).abs()).fold(0.0, f64::max);
        let imag = o.b.iter().map(|b| b.abs()).fold(0.0, f64::max);
        assert!(spread < 1e-7 && imag < 1e-7, "{o:?}");
    }
}

#[test]
fn chiral_points_follow_the_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let tc = theta_c(J).unwrap();
    for _ in 0..50 {
        let gamma = rng.random_range(0.8..1.5);
        let theta = rng.random_range(0.0..tc - 0.05) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let lc = csr_boundary_lambda(gamma, theta, J).unwrap();
        let lambda = lc * rng.random_range(1.1..2.5);
        let s = minimize_energy(&p(lambda, gamma, theta, J), 16, 0).unwrap();
        assert_eq!(s.phase, Phase::ChiralSuperradiant, "{lambda} {gamma} {theta}");
        let o = s.order;
        assert!((o.a[0] - o.a[1]).abs() < 1e-7, "{o:?}");
        assert!(o.b[2].abs() < 1e-7, "{o:?}");
        assert!((o.b[0] + o.b[1]).abs() < 1e-7, "{o:?}");
        assert!(o.a[2] >= 0.0);
    }
}

#[test]
fn current_is_odd_in_flux() {
    for (lambda, gamma, theta) in [(1.0, 1.2, PI / 3.0), (0.8, 0.9, 1.0), (1.0, 0.1, 0.4)] {
        let a = minimize_energy(&p(lambda, gamma, theta, J), 16, 0).unwrap();
        let b = minimize_energy(&p(lambda, gamma, -theta, J), 16, 0).unwrap();
        let ia = observables(&p(lambda, gamma, theta, J), &a.order).i_ph;
        let ib = observables(&p(lambda, gamma, -theta, J), &b.order).i_ph;
        assert!(ia.abs() > 1e-3, "{ia}");
        assert!((ia + ib).abs() < 1e-8, "{ia} {ib}");
    }
    let s = minimize_energy(&p(1.0, 1.2, 2.5, J), 16, 0).unwrap();
    assert!(observables(&p(1.0, 1.2, 2.5, J), &s.order).i_ph.abs() < 1e-8);
}

#[test]
fn minimizer_leaves_normal_phase_at_closed_form_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let gamma = rng.random_range(0.72..1.6);
        let theta = rng.random_range(-PI..PI);
        let cp = second_order_point(gamma, theta, J).unwrap();
        let below = minimize_energy(&p(cp.lambda - 5e-4, gamma, theta, J), 16, 0).unwrap();
        let above = minimize_energy(&p(cp.lambda + 5e-4, gamma, theta, J), 16, 0).unwrap();
        assert_eq!(below.phase, Phase::Normal, "{gamma} {theta}");
        assert_ne!(above.phase, Phase::Normal, "{gamma} {theta}");
    }
}

#[test]
fn degenerate_manifold_sizes() {
    let opts = MinimizerOptions::default();
    let sr = degenerate_minima(&p(0.6, 1.5, 2.0 * PI / 3.0, J), &opts, 1e-6);
    assert_eq!(sr.len(), 2);
    let csr = degenerate_minima(&p(1.0, 1.2, PI / 3.0, J), &opts, 1e-6);
    assert_eq!(csr.len(), 6);
}

#[test]
fn first_order_signature() {
    let theta = 2.0 * PI / 3.0;
    let f = first_order_lambda(0.1, theta, J, None).unwrap();
    let l = f.point.lambda;
    let below = minimize_energy(&p(l - 1e-4, 0.1, theta, J), 16, 0).unwrap();
    let above = minimize_energy(&p(l + 1e-4, 0.1, theta, J), 16, 0).unwrap();
    let amp = |s: &tdt_core::MeanFieldSolution| (0..3).map(|n| s.order.alpha(n).norm()).fold(0.0, f64::max);
    assert!(amp(&above) - amp(&below) > 0.1);
    let hb = observables(&p(l - 1e-4, 0.1, theta, J), &below.order).h_exp;
    let ha = observables(&p(l + 1e-4, 0.1, theta, J), &above.order).h_exp;
    assert!(hb.iter().all(|h| (h + 1.0).abs() < 1e-12), "{hb:?}");
    assert!(ha.iter().all(|&h| h > 0.0), "{ha:?}");
}

#[test]
fn order_jumps_across_critical_flux() {
    let tc = theta_c(J).unwrap();
    let a = minimize_energy(&p(1.0, 1.2, tc - 1e-4, J), 16, 0).unwrap();
    let b = minimize_energy(&p(1.0, 1.2, tc + 1e-4, J), 16, 0).unwrap();
    assert_eq!(a.phase, Phase::ChiralSuperradiant);
    assert_eq!(b.phase, Phase::Superradiant);
    assert!(a.order.max_distance(&b.order) > 1e-2);
}

#[test]
fn reduced_energy_reproduces_chiral_line() {
    // bisect on the sign of the smallest curvature of the reduced energy at the origin
    let soft = |lambda: f64, gamma: f64, theta: f64| {
        let q = p(lambda, gamma, theta, J);
        let h = 1e-3;
        let e = |a: f64, b: f64| csr_reduced_energy(&q, a, b).unwrap();
        let e0 = e(0.0, 0.0);
        let faa = (e(h, 0.0) - 2.0 * e0 + e(-h, 0.0)) / (h * h);
        let fbb = (e(0.0, h) - 2.0 * e0 + e(0.0, -h)) / (h * h);
        let fab = (e(h, h) - e(h, -h) - e(-h, h) + e(-h, -h)) / (4.0 * h * h);
        let mean = 0.5 * (faa + fbb);
        mean - (0.25 * (faa - fbb).powi(2) + fab * fab).sqrt()
    };
    for (gamma, theta) in [(0.9, PI / 3.0), (1.2, 0.5), (0.75, -1.2)] {
        let (mut lo, mut hi) = (0.1, 2.0);
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if soft(mid, gamma, theta) > 0.0 { lo = mid } else { hi = mid }
        }
        let want = csr_boundary_lambda(gamma, theta, J).unwrap();
        assert!((lo - want).abs() < 1e-6, "{lo} vs {want}");
    }
}
