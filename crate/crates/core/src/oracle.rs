//! Brute-force cross-checks. The grid search below only ever calls
//! `mf_energy`: no gradients, no patterned starting points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landau::taylor_oracle;
use crate::model::{mf_energy, ModelParams, OrderParameterSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Half-width of the search box per coordinate.
    pub amplitude_max: f64,
    pub points_per_axis: usize,
    pub refine_rounds: usize,
    /// Uniform random samples on top of the lattice.
    pub random_samples: usize,
    /// Number of best samples handed to the refinement.
    pub candidates: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            amplitude_max: 3.0,
            points_per_axis: 7,
            refine_rounds: 200,
            random_samples: 4096,
            candidates: 6,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude_max > 0.0) || !self.amplitude_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "amplitude_max must be > 0, got {}",
                self.amplitude_max
            )));
        }
        if self.points_per_axis < 7 {
            return Err(Error::InvalidArgument(format!(
                "points_per_axis must be >= 7, got {}",
                self.points_per_axis
            )));
        }
        if self.candidates == 0 {
            return Err(Error::InvalidArgument("need at least one candidate".into()));
        }
        Ok(())
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const LINE_TOL: f64 = 1e-10;

fn energy(params: &ModelParams, x: &[f64; 6]) -> f64 {
    mf_energy(params, &OrderParameterSet::from_array(*x))
}

fn shifted(x: &[f64; 6], d: &[f64; 6], t: f64) -> [f64; 6] {
    let mut y = *x;
    for i in 0..6 {
        y[i] += t * d[i];
    }
    y
}

/// Golden-section minimization of `f(x + t d)` after a downhill bracket
/// search with initial step `h`. Returns the new point and value.
fn line_minimize(params: &ModelParams, x: &[f64; 6], fx: f64, d: &[f64; 6], h: f64) -> ([f64; 6], f64) {
    let f = |t: f64| energy(params, &shifted(x, d, t));
    let step = if f(h) < fx {
        h
    } else if f(-h) < fx {
        -h
    } else {
        return golden(&f, x, d, -h, h, fx);
    };
    let (mut a, mut b) = (0.0, step);
    let mut fb = f(b);
    loop {
        let c = b + (b - a) / GOLDEN;
        let fc = f(c);
        if fc >= fb {
            let (lo, hi) = if a < c { (a, c) } else { (c, a) };
            return golden(&f, x, d, lo, hi, fb);
        }
        if c.abs() > 1e3 {
            return (shifted(x, d, c), fc);
        }
        (a, b, fb) = (b, c, fc);
    }
}

fn golden(f: &impl Fn(f64) -> f64, x: &[f64; 6], d: &[f64; 6], mut lo: f64, mut hi: f64, f_best: f64) -> ([f64; 6], f64) {
    let mut c = hi - GOLDEN * (hi - lo);
    let mut e = lo + GOLDEN * (hi - lo);
    let (mut fc, mut fe) = (f(c), f(e));
    while hi - lo > LINE_TOL {
        if fc < fe {
            hi = e;
            e = c;
            fe = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = e;
            fc = fe;
            e = lo + GOLDEN * (hi - lo);
            fe = f(e);
        }
    }
    let (t, ft) = if fc < fe { (c, fc) } else { (e, fe) };
    if ft <= f_best {
        (shifted(x, d, t), ft)
    } else {
        // the bracket lost the starting value to roundoff
        let t0 = if f(0.0) <= f_best { 0.0 } else { t };
        (shifted(x, d, t0), f(t0))
    }
}

/// Coordinate sweeps, each followed by a line search along the net move of
/// the sweep.
fn refine(params: &ModelParams, mut x: [f64; 6], mut fx: f64, h0: f64, rounds: usize) -> ([f64; 6], f64) {
    let mut h = h0;
    for _ in 0..rounds {
        let start = x;
        let f_start = fx;
        for i in 0..6 {
            let mut d = [0.0; 6];
            d[i] = 1.0;
            (x, fx) = line_minimize(params, &x, fx, &d, h);
        }
        let mut d = [0.0; 6];
        for i in 0..6 {
            d[i] = x[i] - start[i];
        }
        let moved = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if moved > 0.0 {
            (x, fx) = line_minimize(params, &x, fx, &d, 0.5);
        }
        if f_start - fx <= 1e-15 * (1.0 + fx.abs()) {
            break;
        }
        h = (moved * 0.5).clamp(1e-6, h0);
    }
    (x, fx)
}

/// Gradient-free global search of the mean-field energy in the box
/// `[-amplitude_max, amplitude_max]^6`.
pub fn grid_minimize(params: &ModelParams, spec: &GridSpec, seed: u64) -> Result<(OrderParameterSet, f64)> {
    spec.validate()?;
    let n = spec.points_per_axis;
    let w = spec.amplitude_max;
    let spacing = 2.0 * w / (n - 1) as f64;
    let axis: Vec<f64> = (0..n).map(|i| -w + spacing * i as f64).collect();

    let mut samples: Vec<([f64; 6], f64)> = Vec::with_capacity(n.pow(6) + spec.random_samples + 1);
    let origin = [0.0; 6];
    samples.push((origin, energy(params, &origin)));
    let mut idx = [0usize; 6];
    'lattice: loop {
        let x = idx.map(|i| axis[i]);
        samples.push((x, energy(params, &x)));
        for k in 0..6 {
            idx[k] += 1;
            if idx[k] < n {
                continue 'lattice;
            }
            idx[k] = 0;
        }
        break;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..spec.random_samples {
        let mut x = [0.0; 6];
        for v in &mut x {
            *v = rng.random_range(-w..=w);
        }
        samples.push((x, energy(params, &x)));
    }
    // stable sort keeps the result independent of anything but the sample order
    samples.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut chosen: Vec<([f64; 6], f64)> = Vec::new();
    for s in &samples {
        if chosen.len() == spec.candidates {
            break;
        }
        let far = chosen.iter().all(|c| {
            c.0.iter().zip(&s.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) >= spacing
        });
        if far {
            chosen.push(*s);
        }
    }

    let mut best = samples[0];
    for (x, fx) in chosen {
        let (y, fy) = refine(params, x, fx, 0.5 * spacing, spec.refine_rounds);
        if fy < best.1 {
            best = (y, fy);
        }
    }
    Ok((OrderParameterSet::from_array(best.0), best.1))
}

/// Taylor coefficients of the single-atom ground energy for the requested
/// powers of `alpha'` (each of 2, 4, 6), in the order given.
pub fn numeric_taylor(gamma: f64, powers: &[usize]) -> Result<Vec<f64>> {
    if let Some(p) = powers.iter().find(|p| !matches!(p, 2 | 4 | 6)) {
        return Err(Error::InvalidArgument(format!("power must be 2, 4 or 6, got {p}")));
    }
    let top = powers.iter().copied().max().unwrap_or(2);
    let all = taylor_oracle(gamma, top)?;
    Ok(powers.iter().map(|p| all[p / 2 - 1]).collect())
}
