//! Command implementations. All estimator math lives in the library; these
//! functions only move data between files and the library surface.

use crate::csv_io::{self, fmt};
use crate::svg::{self, Panel, Series, PALETTE};
use noisevar_core::{
    decompose, generate, noise_innovation_series, parse_scenario, predicted_bias, run_algorithm1,
    run_baseline, signal_innovation_series, BaselineMethod, Error, EstimateRecord,
    EstimatorConfig, ScenarioSpec, Variability,
};
use std::fs;
use std::path::{Path, PathBuf};

/// Failure classes mapped onto the exit-code contract:
/// 0 success, 1 usage error, 2 data error, 3 internal error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

/// Where the measurements come from.
pub enum InputSource {
    Csv(PathBuf),
    Scenario { path: PathBuf, seed: Option<u64> },
}

/// Loaded measurement stream plus whatever side information was available.
pub struct InputData {
    pub y: Vec<f64>,
    pub x: Option<Vec<f64>>,
    pub r_true: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
}

fn load_scenario_spec(path: &Path, seed: Option<u64>) -> Result<ScenarioSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {}", path.display(), e)))?;
    let mut spec = parse_scenario(&text).map_err(data_err)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    Ok(spec)
}

pub fn load_input(source: &InputSource) -> Result<InputData, CliError> {
    match source {
        InputSource::Csv(path) => {
            let table = csv_io::read_table(path).map_err(CliError::Data)?;
            if table.rows() == 0 {
                return Err(CliError::Data(format!("{}: no data rows", path.display())));
            }
            let y = table
                .column("y")
                .ok_or_else(|| {
                    CliError::Data(format!("{}: missing required column `y`", path.display()))
                })?
                .to_vec();
            Ok(InputData {
                y,
                x: table.column("x").map(|c| c.to_vec()),
                r_true: table.column("r_true").map(|c| c.to_vec()),
                t: table.column("t").map(|c| c.to_vec()),
            })
        }
        InputSource::Scenario { path, seed } => {
            let spec = load_scenario_spec(path, *seed)?;
            let data = generate(&spec).map_err(data_err)?;
            let fs_hz = spec.sample_rate;
            let t = (0..data.y.len()).map(|k| k as f64 / fs_hz).collect();
            Ok(InputData {
                y: data.y,
                x: Some(data.x),
                r_true: Some(data.r_true),
                t: Some(t),
            })
        }
    }
}

pub fn build_config(
    gain: f64,
    window: usize,
    mad_scale: f64,
    variability: Variability,
) -> Result<EstimatorConfig, CliError> {
    EstimatorConfig::new(gain, window, mad_scale, variability)
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Generate a scenario and write the `k,t,x,y,r_true` CSV.
pub fn cmd_simulate(scenario: &Path, seed: Option<u64>, output: &Path) -> Result<(), CliError> {
    let spec = load_scenario_spec(scenario, seed)?;
    let data = generate(&spec).map_err(data_err)?;
    let mut rows = Vec::with_capacity(data.y.len());
    for k in 0..data.y.len() {
        rows.push(vec![
            k.to_string(),
            fmt(k as f64 / spec.sample_rate),
            fmt(data.x[k]),
            fmt(data.y[k]),
            fmt(data.r_true[k]),
        ]);
    }
    let csv = csv_io::render_csv(&["k", "t", "x", "y", "r_true"], &rows);
    fs::write(output, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", output.display(), e)))?;
    Ok(())
}

/// Which estimators a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorChoice {
    Alg1Mad,
    Alg1Mean,
    Mehra,
    Als,
    All,
}

fn run_single(
    choice: EstimatorChoice,
    y: &[f64],
    config: &EstimatorConfig,
    lags: usize,
) -> Result<Vec<EstimateRecord>, CliError> {
    let to_cli = |e: Error| match e {
        Error::NonFiniteMeasurement { .. } | Error::EmptyStream => data_err(e),
        other => CliError::Internal(other.to_string()),
    };
    match choice {
        EstimatorChoice::Alg1Mad => {
            let cfg = EstimatorConfig { variability: Variability::MadVariance, ..*config };
            run_algorithm1(y, &cfg).map_err(to_cli)
        }
        EstimatorChoice::Alg1Mean => {
            let cfg = EstimatorConfig { variability: Variability::MeanVariance, ..*config };
            run_algorithm1(y, &cfg).map_err(to_cli)
        }
        EstimatorChoice::Mehra => {
            run_baseline(y, config, BaselineMethod::Mehra, lags).map_err(to_cli)
        }
        EstimatorChoice::Als => run_baseline(y, config, BaselineMethod::Als, lags).map_err(to_cli),
        EstimatorChoice::All => Err(CliError::Internal("run_single called with All".into())),
    }
}

fn estimate_csv_single(
    choice: EstimatorChoice,
    records: &[EstimateRecord],
    r_true: Option<&[f64]>,
) -> String {
    let is_baseline = matches!(choice, EstimatorChoice::Mehra | EstimatorChoice::Als);
    let mut headers = vec!["k", "y", "eta", "c_hat", "r_hat"];
    if is_baseline {
        headers.push("q_hat");
    }
    if r_true.is_some() {
        headers.push("r_true");
        headers.push("err");
    }
    headers.push("warmup");
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        let mut row = vec![
            r.k.to_string(),
            fmt(r.y),
            fmt(r.eta),
            fmt(r.c_hat),
            fmt(r.r_hat),
        ];
        if is_baseline {
            row.push(fmt(r.q_hat.unwrap_or(0.0)));
        }
        if let Some(rt) = r_true {
            row.push(fmt(rt[r.k]));
            row.push(fmt(r.r_hat - rt[r.k]));
        }
        row.push(if r.warmup { "1" } else { "0" }.to_string());
        rows.push(row);
    }
    csv_io::render_csv(&headers, &rows)
}

/// The three-method comparison rows: shared innovation column, one noise
/// estimate per method.
pub struct ComparisonRun {
    pub mad: Vec<EstimateRecord>,
    pub mehra: Vec<EstimateRecord>,
    pub als: Vec<EstimateRecord>,
}

pub fn run_comparison(
    y: &[f64],
    config: &EstimatorConfig,
    lags: usize,
) -> Result<ComparisonRun, CliError> {
    let mad = run_single(EstimatorChoice::Alg1Mad, y, config, lags)?;
    let mehra = run_single(EstimatorChoice::Mehra, y, config, lags)?;
    let als = run_single(EstimatorChoice::Als, y, config, lags)?;
    debug_assert!(mad
        .iter()
        .zip(&mehra)
        .zip(&als)
        .all(|((a, b), c)| a.eta == b.eta && b.eta == c.eta));
    Ok(ComparisonRun { mad, mehra, als })
}

fn estimate_csv_all(run: &ComparisonRun, r_true: Option<&[f64]>) -> String {
    let mut headers = vec![
        "k",
        "y",
        "eta",
        "r_hat_mad",
        "r_hat_mehra",
        "q_hat_mehra",
        "r_hat_als",
        "q_hat_als",
    ];
    if r_true.is_some() {
        headers.push("r_true");
    }
    headers.push("warmup");
    let mut rows = Vec::with_capacity(run.mad.len());
    for ((a, b), c) in run.mad.iter().zip(&run.mehra).zip(&run.als) {
        let mut row = vec![
            a.k.to_string(),
            fmt(a.y),
            fmt(a.eta),
            fmt(a.r_hat),
            fmt(b.r_hat),
            fmt(b.q_hat.unwrap_or(0.0)),
            fmt(c.r_hat),
            fmt(c.q_hat.unwrap_or(0.0)),
        ];
        if let Some(rt) = r_true {
            row.push(fmt(rt[a.k]));
        }
        row.push(if a.warmup { "1" } else { "0" }.to_string());
        rows.push(row);
    }
    csv_io::render_csv(&headers, &rows)
}

/// Run one estimator (or all of them) over the input and write the per-step
/// CSV.
pub fn cmd_estimate(
    source: &InputSource,
    choice: EstimatorChoice,
    config: &EstimatorConfig,
    lags: usize,
    output: &Path,
) -> Result<(), CliError> {
    let data = load_input(source)?;
    let csv = if choice == EstimatorChoice::All {
        let run = run_comparison(&data.y, config, lags)?;
        estimate_csv_all(&run, data.r_true.as_deref())
    } else {
        let records = run_single(choice, &data.y, config, lags)?;
        estimate_csv_single(choice, &records, data.r_true.as_deref())
    };
    fs::write(output, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", output.display(), e)))?;
    Ok(())
}

/// Run the three-way comparison, write the combined CSV and the two-panel
/// SVG: measured/true signal on top, true noise std and the three estimated
/// stds below.
pub fn cmd_compare(
    source: &InputSource,
    config: &EstimatorConfig,
    lags: usize,
    output: &Path,
    plot: &Path,
) -> Result<(), CliError> {
    let data = load_input(source)?;
    let run = run_comparison(&data.y, config, lags)?;
    let csv = estimate_csv_all(&run, data.r_true.as_deref());

    let axis: Vec<f64> = match &data.t {
        Some(t) => t.clone(),
        None => (0..data.y.len()).map(|k| k as f64).collect(),
    };
    let x_label = if data.t.is_some() { "t (s)" } else { "k" };

    let mut top = Panel { y_label: "signal".into(), series: Vec::new() };
    top.series.push(Series {
        label: "y (measured)".into(),
        color: "#b0b0b0",
        points: axis.iter().copied().zip(data.y.iter().copied()).collect(),
    });
    if let Some(x) = &data.x {
        top.series.push(Series {
            label: "x (true)".into(),
            color: PALETTE[0],
            points: axis.iter().copied().zip(x.iter().copied()).collect(),
        });
    }

    let mut bottom = Panel { y_label: "noise std".into(), series: Vec::new() };
    if let Some(rt) = &data.r_true {
        bottom.series.push(Series {
            label: "true".into(),
            color: "#222222",
            points: axis.iter().copied().zip(rt.iter().map(|r| r.sqrt())).collect(),
        });
    }
    for (records, label, color) in [
        (&run.mad, "alg1 mad", PALETTE[0]),
        (&run.mehra, "mehra", PALETTE[1]),
        (&run.als, "als", PALETTE[2]),
    ] {
        bottom.series.push(Series {
            label: label.into(),
            color,
            points: records.iter().map(|r| (axis[r.k], r.r_hat.sqrt())).collect(),
        });
    }

    let svg = svg::render(&[top, bottom], x_label);
    fs::write(output, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", output.display(), e)))?;
    fs::write(plot, svg)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", plot.display(), e)))?;
    Ok(())
}

/// Innovation decomposition diagnostics; requires the true signal column.
pub fn cmd_diagnose(
    source: &InputSource,
    config: &EstimatorConfig,
    output: &Path,
) -> Result<(), CliError> {
    let data = load_input(source)?;
    let x = data.x.as_ref().ok_or_else(|| {
        CliError::Data(
            "diagnose needs an `x` column to recover the signal increments and noise differences"
                .into(),
        )
    })?;
    let n = data.y.len();
    let m = config.window_len;
    if n < m + 3 {
        return Err(CliError::Data(format!(
            "need at least {} samples for window length {}, got {}",
            m + 3,
            m,
            n
        )));
    }

    let w: Vec<f64> = (0..n - 1).map(|k| x[k + 1] - x[k]).collect();
    let v: Vec<f64> = (0..n).map(|k| data.y[k] - x[k]).collect();
    let dv: Vec<f64> = (0..n - 1).map(|k| v[k + 1] - v[k]).collect();
    let eta1 = noise_innovation_series(&dv, config.gain, n);
    let eta2 = signal_innovation_series(&w, config.gain, n);

    let mean_cfg = EstimatorConfig { variability: Variability::MeanVariance, ..*config };
    let records = run_single(EstimatorChoice::Alg1Mean, &data.y, &mean_cfg, 1)?;

    let mut headers = vec!["k", "s11", "s22", "s12", "c_hat", "predicted_bias"];
    if data.r_true.is_some() {
        headers.push("realized_err");
    }
    let mut rows = Vec::new();
    for r in &records {
        let k = r.k;
        if k < m + 1 {
            continue;
        }
        let parts = decompose(&eta1, &eta2, k, m).map_err(|e| CliError::Internal(e.to_string()))?;
        let bias = predicted_bias(&w[k - m - 1..=k - 1], config.gain, m)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let mut row = vec![
            k.to_string(),
            fmt(parts.s11),
            fmt(parts.s22),
            fmt(parts.s12),
            fmt(r.c_hat),
            fmt(bias),
        ];
        if let Some(rt) = &data.r_true {
            row.push(fmt(r.r_hat - rt[k]));
        }
        rows.push(row);
    }
    let csv = csv_io::render_csv(&headers, &rows);
    fs::write(output, csv)
        .map_err(|e| CliError::Data(format!("cannot write {}: {}", output.display(), e)))?;
    Ok(())
}
