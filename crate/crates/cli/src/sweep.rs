//! Grid sweeps and the dataset file format.
//!
//! A dataset is gnuplot-compatible text: `#` header lines (tool version,
//! phase codes, the resolved config between `config begin`/`config end`,
//! and the column names), then one whitespace-delimited record per grid
//! point with the first axis varying slowest.

use rayon::prelude::*;
use serde_json::{json, Value};
use tdt_core::meanfield::{minimize_energy, observables};
use tdt_core::normal_phase::spectrum;
use tdt_core::ModelParams;

use crate::config::{Output, SweepConfig};
use crate::{CliError, Format, VERSION};

const CONFIG_BEGIN: &str = "# config begin";
const CONFIG_END: &str = "# config end";

/// Values of one grid point: axis coordinates then the requested outputs.
/// Phase codes are stored as floats and printed as integers.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub coords: Vec<f64>,
    pub values: Vec<Cell>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Code(u8),
}

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::Real(v) if v.is_nan() => "nan".into(),
            Cell::Real(v) => format!("{v:.12e}"),
            Cell::Code(c) => c.to_string(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Real(v) => serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number),
            Cell::Code(c) => Value::from(c),
        }
    }
}

fn evaluate(cfg: &SweepConfig, index: usize) -> Result<SweepRecord, CliError> {
    let (coords, [lambda, gamma, theta]) = cfg.point(index);
    let params = ModelParams::new(lambda, gamma, theta, cfg.j_ratio)?;
    let needs_min = cfg.outputs.iter().any(|o| *o != Output::Spectrum);
    let solution = if needs_min {
        Some(minimize_energy(&params, cfg.n_starts, cfg.seed)?)
    } else {
        None
    };
    let mut values = Vec::new();
    for o in &cfg.outputs {
        match o {
            Output::Spectrum => match spectrum(&params) {
                Ok(s) => values.extend(s.epsilon_q.map(Cell::Real)),
                Err(_) => values.extend([Cell::Real(f64::NAN); 3]),
            },
            other => {
                let s = solution.as_ref().expect("minimized above");
                match other {
                    Output::OrderParams => values.extend(s.order.to_array().map(Cell::Real)),
                    Output::Phase => values.push(Cell::Code(s.phase.code())),
                    Output::NPh => values.push(Cell::Real(observables(&params, &s.order).n_ph)),
                    Output::IPh => values.push(Cell::Real(observables(&params, &s.order).i_ph)),
                    Output::HExp => values.extend(observables(&params, &s.order).h_exp.map(Cell::Real)),
                    Output::Spectrum => unreachable!(),
                }
            }
        }
    }
    Ok(SweepRecord { coords, values })
}

/// Evaluate every grid point on a pool of `jobs` threads; records come
/// back in grid order.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<Vec<SweepRecord>, CliError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| {
        (0..cfg.n_records())
            .into_par_iter()
            .map(|i| evaluate(cfg, i))
            .collect()
    })
}

pub fn render(cfg: &SweepConfig, records: &[SweepRecord], format: Format) -> String {
    match format {
        Format::Table => render_text(cfg, records),
        Format::Json => render_json(cfg, records),
    }
}

fn render_text(cfg: &SweepConfig, records: &[SweepRecord]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tdt {VERSION} sweep dataset\n"));
    out.push_str("# phase codes: 0 = NP, 1 = SR, 2 = CSR\n");
    out.push_str(&format!("# records: {}\n", records.len()));
    out.push_str(CONFIG_BEGIN);
    out.push('\n');
    for line in cfg.to_toml().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("# {line}\n"));
        }
    }
    out.push_str(CONFIG_END);
    out.push('\n');
    out.push_str(&format!("# {}\n", cfg.columns().join(" ")));
    for r in records {
        let mut fields: Vec<String> = r.coords.iter().map(|v| format!("{v:.12e}")).collect();
        fields.extend(r.values.iter().map(|c| c.text()));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

fn render_json(cfg: &SweepConfig, records: &[SweepRecord]) -> String {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut row: Vec<Value> = r.coords.iter().map(|v| Cell::Real(*v).json()).collect();
            row.extend(r.values.iter().map(|c| c.json()));
            Value::Array(row)
        })
        .collect();
    let doc = json!({
        "tool": "tdt",
        "version": VERSION,
        "phase_codes": {"NP": 0, "SR": 1, "CSR": 2},
        "config": cfg,
        "columns": cfg.columns(),
        "records": rows,
    });
    format!("{doc}\n")
}

/// Recover the embedded config from a text dataset.
pub fn config_from_dataset(text: &str) -> Result<SweepConfig, CliError> {
    let mut lines = text.lines();
    if !lines.by_ref().any(|l| l == CONFIG_BEGIN) {
        return Err(CliError::Usage("dataset has no embedded config".into()));
    }
    let mut toml_text = String::new();
    for line in lines {
        if line == CONFIG_END {
            return SweepConfig::from_toml(&toml_text);
        }
        let body = line
            .strip_prefix("# ")
            .or_else(|| line.strip_prefix('#'))
            .ok_or_else(|| CliError::Usage("embedded config line lacks '#'".into()))?;
        toml_text.push_str(body);
        toml_text.push('\n');
    }
    Err(CliError::Usage("embedded config is not terminated".into()))
}
