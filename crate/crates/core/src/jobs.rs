//! Experiment configurations and the CSV/JSON artifacts they produce.
//!
//! Every artifact carries its fully resolved configuration: CSV files on a
//! leading `# {json}` line, JSON reports under the `config` key. Feeding an
//! artifact back to [`load_config`] reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dmt::{self, CurveLabel, DmtCurve};
use crate::error::{DmtError, Result};
use crate::montecarlo::{self, OutageEstimate};
use crate::schemes::SchemeConfig;
use crate::topology::NetworkTopology;
use crate::verify::{self, VerifySettings};

pub const SCHEMA_VERSION: u32 = 1;

/// Uniform samples added to each curve on top of its vertices.
pub const CURVE_GRID_POINTS: usize = 101;

pub const CURVE_CSV_HEADER: &str = "label,r,d";
pub const SWEEP_CSV_HEADER: &str = "label,snr_db,p_linear,rate_r,trials,failures,p_hat,ci_low,ci_high";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    /// Two parallel relays, three antennas per node.
    Fig3,
    /// Single relay with a direct link, three and four antennas per node.
    Fig4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "job", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentConfig {
    Curve {
        curves: Vec<CurveLabel>,
    },
    Simulate {
        scheme: SchemeConfig,
        rate: f64,
        snr_db: f64,
        trials: u64,
        seed: u64,
    },
    Sweep {
        scheme: SchemeConfig,
        rate: f64,
        snr_grid_db: Vec<f64>,
        trials: u64,
        seed: u64,
    },
    Verify {
        #[serde(default)]
        settings: VerifySettings,
        seed: u64,
    },
    Figure {
        figure: FigureId,
    },
}

/// Files written by one job.
#[derive(Clone, Debug, PartialEq)]
pub struct JobOutput {
    pub csv: Option<String>,
    pub json: Option<String>,
    /// False when a verification suite failed.
    pub success: bool,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| DmtError::InvalidConfig(format!("line {}: {e}", e.line())))
    }

    pub fn job_name(&self) -> &'static str {
        match self {
            Self::Curve { .. } => "curve",
            Self::Simulate { .. } => "simulate",
            Self::Sweep { .. } => "sweep",
            Self::Verify { .. } => "verify",
            Self::Figure { .. } => "figure",
        }
    }

    /// Applies command-line overrides for the seed and the per-point trial count.
    pub fn with_overrides(mut self, seed_override: Option<u64>, trials_override: Option<u64>) -> Self {
        match &mut self {
            Self::Simulate { seed, trials, .. } | Self::Sweep { seed, trials, .. } => {
                if let Some(s) = seed_override {
                    *seed = s;
                }
                if let Some(t) = trials_override {
                    *trials = t;
                }
            }
            Self::Verify { seed, .. } => {
                if let Some(s) = seed_override {
                    *seed = s;
                }
            }
            Self::Curve { .. } | Self::Figure { .. } => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check_trials = |trials: u64| {
            if trials == 0 {
                return Err(DmtError::InvalidConfig("trials must be at least 1".into()));
            }
            Ok(())
        };
        let check_rate = |rate: f64| {
            if !(rate >= 0.0) || !rate.is_finite() {
                return Err(DmtError::InvalidConfig(format!("rate must be finite and nonnegative, got {rate}")));
            }
            Ok(())
        };
        let check_snr = |db: f64| {
            if !(db > 0.0) || !db.is_finite() {
                return Err(DmtError::InvalidConfig(format!("SNR must exceed 0 dB, got {db}")));
            }
            Ok(())
        };
        match self {
            Self::Curve { curves } => {
                if curves.is_empty() {
                    return Err(DmtError::InvalidConfig("no curves requested".into()));
                }
                for label in curves {
                    if let CurveLabel::RsGeneralNetwork { topology } | CurveLabel::CutSetUpperBound { topology } = label {
                        if !topology.exists() {
                            return Err(DmtError::InvalidConfig(format!(
                                "topology file {} does not exist",
                                topology.display()
                            )));
                        }
                    }
                }
                Ok(())
            }
            Self::Simulate { scheme, rate, snr_db, trials, .. } => {
                scheme.validate()?;
                check_trials(*trials)?;
                check_rate(*rate)?;
                check_snr(*snr_db)
            }
            Self::Sweep { scheme, rate, snr_grid_db, trials, .. } => {
                scheme.validate()?;
                check_trials(*trials)?;
                check_rate(*rate)?;
                if snr_grid_db.is_empty() {
                    return Err(DmtError::InvalidConfig("empty SNR grid".into()));
                }
                for &db in snr_grid_db {
                    check_snr(db)?;
                }
                if snr_grid_db.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(DmtError::InvalidConfig("SNR grid must be strictly increasing".into()));
                }
                Ok(())
            }
            Self::Verify { .. } | Self::Figure { .. } => Ok(()),
        }
    }

    /// Compact JSON with sorted keys, as embedded in artifacts.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }
}

/// Reads a config file, or recovers the embedded config from a CSV or
/// JSON artifact written by a previous run.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DmtError::InvalidConfig(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<ExperimentConfig> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix('#') {
        let line = rest.lines().next().unwrap_or_default();
        return ExperimentConfig::from_json_str(line.trim());
    }
    let value: Value =
        serde_json::from_str(trimmed).map_err(|e| DmtError::InvalidConfig(format!("line {}: {e}", e.line())))?;
    let config = match value.get("config") {
        Some(embedded) if value.get("schema_version").is_some() => embedded.clone(),
        _ => value,
    };
    serde_json::from_value(config).map_err(|e| DmtError::InvalidConfig(e.to_string()))
}

pub fn load_topology(path: &Path) -> Result<NetworkTopology> {
    NetworkTopology::load(path).map_err(DmtError::from)
}

/// Runs a job after validation.
pub fn run(config: &ExperimentConfig) -> Result<JobOutput> {
    config.validate()?;
    match config {
        ExperimentConfig::Curve { .. } => run_curve(config),
        ExperimentConfig::Simulate { .. } => run_simulate(config),
        ExperimentConfig::Sweep { .. } => run_sweep(config),
        ExperimentConfig::Verify { .. } => run_verify(config),
        ExperimentConfig::Figure { .. } => run_figure(config),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn header_line(config: &ExperimentConfig) -> String {
    format!("# {}\n", config.to_canonical_json())
}

/// Vertices plus a uniform grid on `[0, r_max]`, sorted and deduplicated.
pub fn curve_samples(curve: &DmtCurve) -> Vec<(f64, f64)> {
    let r_max = curve.r_max();
    let mut rs: Vec<f64> = curve.breakpoints().collect();
    rs.extend((0..CURVE_GRID_POINTS).map(|k| r_max * k as f64 / (CURVE_GRID_POINTS - 1) as f64));
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs.into_iter().map(|r| (r, curve.eval_clamped(r))).collect()
}

fn curve_csv(config: &ExperimentConfig, curves: &[(String, DmtCurve)]) -> String {
    let mut out = header_line(config);
    out.push_str(CURVE_CSV_HEADER);
    out.push('\n');
    for (label, curve) in curves {
        for (r, d) in curve_samples(curve) {
            let _ = writeln!(out, "{},{r},{d}", csv_field(label));
        }
    }
    out
}

pub fn run_curve(config: &ExperimentConfig) -> Result<JobOutput> {
    let ExperimentConfig::Curve { curves } = config else {
        return Err(DmtError::InvalidConfig("expected a curve job".into()));
    };
    let built = curves
        .iter()
        .map(|label| label.build().map(|c| (label.name(), c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(JobOutput {
        csv: Some(curve_csv(config, &built)),
        json: None,
        success: true,
    })
}

/// Named curves making up a figure.
pub fn figure_curves(figure: FigureId) -> Result<Vec<(String, DmtCurve)>> {
    match figure {
        FigureId::Fig3 => {
            let (k, n) = (2.0, 3);
            let d33 = dmt::dmt_point_to_point(n, n)?;
            let product = dmt::dmt_product(n, n, n)?;
            let optimal = dmt::dmt_rs_two_relay_limit(&d33, &d33)?;
            Ok(vec![
                ("rs_optimal".into(), optimal.clone()),
                ("rs_without_rotation".into(), product.scaled(k)),
                ("naf".into(), product.rate_scaled(2.0).scaled(k)),
                ("cut_set_upper_bound".into(), optimal),
            ])
        }
        FigureId::Fig4 => {
            let mut out = Vec::new();
            for n in [3, 4] {
                out.push((format!("naf_{n}x{n}x{n}"), dmt::dmt_naf_baseline(n, n, n)?));
                out.push((format!("modified_naf_{n}x{n}x{n}"), dmt::dmt_modified_naf(n, n, n)?));
            }
            Ok(out)
        }
    }
}

pub fn run_figure(config: &ExperimentConfig) -> Result<JobOutput> {
    let ExperimentConfig::Figure { figure } = config else {
        return Err(DmtError::InvalidConfig("expected a figure job".into()));
    };
    Ok(JobOutput {
        csv: Some(curve_csv(config, &figure_curves(*figure)?)),
        json: None,
        success: true,
    })
}

fn sweep_csv(config: &ExperimentConfig, label: &str, estimates: &[OutageEstimate]) -> String {
    let mut out = header_line(config);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for e in estimates {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(label),
            e.snr_db(),
            e.power,
            e.r,
            e.trials,
            e.failures,
            e.p_hat,
            e.ci_low,
            e.ci_high
        );
    }
    out
}

fn estimate_json(e: &OutageEstimate) -> Value {
    json!({
        "snr_db": e.snr_db(),
        "p_linear": e.power,
        "rate_r": e.r,
        "trials": e.trials,
        "failures": e.failures,
        "p_hat": e.p_hat,
        "ci_low": e.ci_low,
        "ci_high": e.ci_high,
    })
}

fn summary_json(config: &ExperimentConfig, scheme: &SchemeConfig, rate: f64, estimates: &[OutageEstimate]) -> Result<String> {
    let curve = scheme.analytic_curve()?;
    let (fit, reason) = match montecarlo::fit_diversity_slope(estimates) {
        Ok(fit) => (serde_json::to_value(&fit).expect("fit serializes"), Value::Null),
        Err(e) => (Value::Null, Value::String(e.to_string())),
    };
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "config": serde_json::to_value(config).expect("config serializes"),
        "scheme": scheme.name(),
        "rate_r": rate,
        "analytic_diversity": curve.eval_clamped(rate),
        "analytic_curve": curve.vertices(),
        "slope_fit": fit,
        "slope_unavailable_reason": reason,
        "estimates": estimates.iter().map(estimate_json).collect::<Vec<_>>(),
    });
    Ok(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n")
}

pub fn run_simulate(config: &ExperimentConfig) -> Result<JobOutput> {
    let ExperimentConfig::Simulate { scheme, rate, snr_db, trials, seed } = config else {
        return Err(DmtError::InvalidConfig("expected a simulate job".into()));
    };
    let estimate = montecarlo::estimate_outage(scheme, *rate, db_to_linear(*snr_db), *trials, *seed)?;
    let estimates = [estimate];
    Ok(JobOutput {
        csv: Some(sweep_csv(config, scheme.name(), &estimates)),
        json: Some(summary_json(config, scheme, *rate, &estimates)?),
        success: true,
    })
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<JobOutput> {
    let ExperimentConfig::Sweep { scheme, rate, snr_grid_db, trials, seed } = config else {
        return Err(DmtError::InvalidConfig("expected a sweep job".into()));
    };
    let powers: Vec<f64> = snr_grid_db.iter().map(|&db| db_to_linear(db)).collect();
    let estimates = montecarlo::snr_sweep(scheme, *rate, &powers, *trials, *seed)?;
    Ok(JobOutput {
        csv: Some(sweep_csv(config, scheme.name(), &estimates)),
        json: Some(summary_json(config, scheme, *rate, &estimates)?),
        success: true,
    })
}

pub fn run_verify(config: &ExperimentConfig) -> Result<JobOutput> {
    let ExperimentConfig::Verify { settings, seed } = config else {
        return Err(DmtError::InvalidConfig("expected a verify job".into()));
    };
    let reports = verify::run_all_suites(settings, *seed)?;
    let pass = reports.iter().all(|r| r.pass);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "config": serde_json::to_value(config).expect("config serializes"),
        "pass": pass,
        "suites": serde_json::to_value(&reports).expect("reports serialize"),
    });
    Ok(JobOutput {
        csv: None,
        json: Some(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
        success: pass,
    })
}
