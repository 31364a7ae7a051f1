//! Sweep configuration, read from TOML:
//!
//! ```toml
//! j_ratio = 0.1
//! outputs = ["phase", "order_params"]
//! n_starts = 16
//! seed = 0
//! output_path = "fig3.dat"
//!
//! [fixed]
//! gamma = 0.9
//!
//! [[axes]]
//! name = "lambda"
//! min = 0.2
//! max = 1.2
//! steps = 40
//!
//! [[axes]]
//! name = "theta"
//! min = -3.14159
//! max = 3.14159
//! steps = 40
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use tdt_core::meanfield::MIN_N_STARTS;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    Lambda,
    Gamma,
    Theta,
}

impl AxisName {
    pub const ALL: [AxisName; 3] = [AxisName::Lambda, AxisName::Gamma, AxisName::Theta];

    pub fn label(self) -> &'static str {
        match self {
            AxisName::Lambda => "lambda",
            AxisName::Gamma => "gamma",
            AxisName::Theta => "theta",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixed {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl Fixed {
    pub fn get(&self, name: AxisName) -> Option<f64> {
        match name {
            AxisName::Lambda => self.lambda,
            AxisName::Gamma => self.gamma,
            AxisName::Theta => self.theta,
        }
    }

    fn get_mut(&mut self, name: AxisName) -> &mut Option<f64> {
        match name {
            AxisName::Lambda => &mut self.lambda,
            AxisName::Gamma => &mut self.gamma,
            AxisName::Theta => &mut self.theta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    OrderParams,
    Phase,
    NPh,
    IPh,
    HExp,
    Spectrum,
}

impl Output {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Output::OrderParams => &["A1", "A2", "A3", "B1", "B2", "B3"],
            Output::Phase => &["phase"],
            Output::NPh => &["n_ph"],
            Output::IPh => &["i_ph"],
            Output::HExp => &["h1", "h2", "h3"],
            Output::Spectrum => &["eps_q0", "eps_q+", "eps_q-"],
        }
    }
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Phase, Output::OrderParams]
}

fn default_n_starts() -> usize {
    16
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub j_ratio: f64,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default = "default_n_starts")]
    pub n_starts: usize,
    #[serde(default)]
    pub seed: u64,
    /// Where the dataset goes; not embedded in the dataset header.
    #[serde(default, skip_serializing)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub fixed: Fixed,
    pub axes: Vec<Axis>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Resolved form embedded in dataset headers; parses back to `self`
    /// apart from `output_path`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep config always serializes")
    }

    /// Convert every angle from degrees to radians.
    pub fn angles_from_degrees(&mut self) {
        if let Some(t) = self.fixed.theta.as_mut() {
            *t = t.to_radians();
        }
        for a in self.axes.iter_mut().filter(|a| a.name == AxisName::Theta) {
            a.min = a.min.to_radians();
            a.max = a.max.to_radians();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if self.axes.is_empty() || self.axes.len() > 3 {
            return bad(format!("need 1 to 3 axes, got {}", self.axes.len()));
        }
        let mut seen = Fixed::default();
        for a in &self.axes {
            if seen.get(a.name).is_some() {
                return bad(format!("axis {} listed twice", a.name));
            }
            *seen.get_mut(a.name) = Some(0.0);
            if a.steps < 2 {
                return bad(format!("axis {} needs steps >= 2, got {}", a.name, a.steps));
            }
            if !a.min.is_finite() || !a.max.is_finite() {
                return bad(format!("axis {} has a non-finite range", a.name));
            }
            if self.fixed.get(a.name).is_some() {
                return bad(format!("{} is both an axis and fixed", a.name));
            }
        }
        for name in AxisName::ALL {
            match (seen.get(name), self.fixed.get(name)) {
                (None, None) => return bad(format!("{name} is neither an axis nor fixed")),
                (_, Some(v)) if !v.is_finite() => return bad(format!("fixed {name} is not finite")),
                _ => {}
            }
        }
        if !self.j_ratio.is_finite() {
            return bad("j_ratio is not finite".into());
        }
        if self.n_starts < MIN_N_STARTS {
            return bad(format!("n_starts must be >= {MIN_N_STARTS}, got {}", self.n_starts));
        }
        if self.outputs.is_empty() {
            return bad("outputs is empty".into());
        }
        for (i, o) in self.outputs.iter().enumerate() {
            if self.outputs[..i].contains(o) {
                return bad(format!("output {o:?} listed twice"));
            }
        }
        Ok(())
    }

    pub fn n_records(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// `(lambda, gamma, theta)` of record `index`; the first axis varies slowest.
    pub fn point(&self, index: usize) -> (Vec<f64>, [f64; 3]) {
        let mut rem = index;
        let mut coords = vec![0.0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            coords[k] = a.value(rem % a.steps);
            rem /= a.steps;
        }
        let lookup = |name: AxisName| {
            self.axes
                .iter()
                .position(|a| a.name == name)
                .map_or_else(|| self.fixed.get(name).expect("validated"), |k| coords[k])
        };
        let values = [lookup(AxisName::Lambda), lookup(AxisName::Gamma), lookup(AxisName::Theta)];
        (coords, values)
    }

    pub fn columns(&self) -> Vec<String> {
        let mut c: Vec<String> = self.axes.iter().map(|a| a.name.label().to_string()).collect();
        for o in &self.outputs {
            c.extend(o.columns().iter().map(|s| s.to_string()));
        }
        c
    }
}
