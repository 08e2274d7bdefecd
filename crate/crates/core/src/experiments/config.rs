//! JSON configuration for `nclt run`: either a named preset or explicit
//! rows, plus mode, ladder, series order and tolerances.

use super::presets::{build, PresetArray, PresetName, PresetParams};
use super::report::ExperimentReport;
use super::runner::{run_circle, run_line, CircleTarget};
use super::{ExperimentError, Mode};
use crate::arrays::{sigma_gamma_r, sigma_gamma_t, CircleArray, LineArray};
use crate::infdiv::{InfDivParamsR, InfDivParamsT};
use crate::measures::{CircleMeasure, CirclePositive, LineMeasure, LinePositive};
use crate::series::DEFAULT_ORDER;
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub array: ArraySpec,
    pub mode: String,
    #[serde(default)]
    pub ladder: Option<Vec<u64>>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_final_dist")]
    pub final_dist: f64,
}

fn default_final_dist() -> f64 {
    0.05
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            final_dist: default_final_dist(),
        }
    }
}

/// Array description: a named preset with its scalar knobs, or explicit
/// rows on the circle or the line.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ArraySpec {
    Preset {
        preset: String,
        #[serde(default)]
        t: Option<f64>,
        #[serde(default)]
        lambda_angle: Option<f64>,
    },
    Circle {
        tau: f64,
        rows: Vec<CircleRowSpec>,
        #[serde(default)]
        target: Option<CircleParamsSpec>,
    },
    Line {
        rows: Vec<LineRowSpec>,
        #[serde(default)]
        target: Option<LineParamsSpec>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleRowSpec {
    pub n: u64,
    #[serde(default)]
    pub lambda_angle: f64,
    pub measures: Vec<MeasureCount>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRowSpec {
    pub n: u64,
    #[serde(default)]
    pub shift: f64,
    pub measures: Vec<MeasureCount>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureCount {
    pub measure: MeasureSpec,
    #[serde(default = "one_count")]
    pub count: u64,
}

fn one_count() -> u64 {
    1
}

/// Measure serialization shared with the CLI.
#[derive(Debug, Deserialize)]
#[serde(tag = "type")]
pub enum MeasureSpec {
    #[serde(rename = "circleAtomic")]
    CircleAtomic { atoms: Vec<(f64, f64)> },
    #[serde(rename = "haar")]
    Haar,
    #[serde(rename = "lineAtomic")]
    LineAtomic { atoms: Vec<(f64, f64)> },
}

/// Circle parameters: γ as [re, im], σ as [[theta, s], ...].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleParamsSpec {
    pub gamma: (f64, f64),
    pub sigma: Vec<(f64, f64)>,
}

/// Line parameters: real γ, σ as [[t, s], ...].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineParamsSpec {
    pub gamma: f64,
    pub sigma: Vec<(f64, f64)>,
}

fn circle_measure(spec: &MeasureSpec) -> Result<CircleMeasure, ExperimentError> {
    match spec {
        MeasureSpec::CircleAtomic { atoms } => Ok(CircleMeasure::atomic(atoms.clone())?),
        MeasureSpec::Haar => Err(ExperimentError::Config(
            "row measures must be atomic".into(),
        )),
        MeasureSpec::LineAtomic { .. } => Err(ExperimentError::Config(
            "line measure in a circle row".into(),
        )),
    }
}

fn line_measure(spec: &MeasureSpec) -> Result<LineMeasure, ExperimentError> {
    match spec {
        MeasureSpec::LineAtomic { atoms } => Ok(LineMeasure::new(atoms.clone())?),
        _ => Err(ExperimentError::Config("circle measure in a line row".into())),
    }
}

/// Execute a parsed configuration and return the report.
pub fn execute(cfg: &RunConfig) -> Result<ExperimentReport, ExperimentError> {
    let mode = Mode::parse(&cfg.mode)?;
    let tol = cfg.tolerances.final_dist;
    match &cfg.array {
        ArraySpec::Preset { preset, t, lambda_angle } => {
            let name = PresetName::parse(preset)?;
            let mut params = PresetParams::default();
            if let Some(t) = t {
                params.t = *t;
            }
            if let Some(a) = lambda_angle {
                params.lambda_angle = *a;
            }
            match build(name, params, cfg.ladder.as_deref())? {
                PresetArray::Circle { array, params, classical_target } => {
                    let target = match (&params, mode, &classical_target) {
                        (_, Mode::Classical, Some(m)) => CircleTarget::Measure(m.clone()),
                        (Some(p), _, _) => CircleTarget::Id(p.clone()),
                        (None, _, _) => CircleTarget::Haar,
                    };
                    run_circle(name.as_str(), &array, mode, cfg.order, &target, tol)
                }
                PresetArray::Line { array, params } => {
                    run_line(name.as_str(), &array, mode, cfg.order, &params, tol)
                }
            }
        }
        ArraySpec::Circle { tau, rows, target } => {
            let mut ladder = Vec::new();
            let mut built_rows = Vec::new();
            let mut lambdas = Vec::new();
            for row in rows {
                ladder.push(row.n);
                lambdas.push(Complex64::from_polar(1.0, row.lambda_angle));
                let mut r = Vec::new();
                for mc in &row.measures {
                    r.push((circle_measure(&mc.measure)?, mc.count));
                }
                built_rows.push(r);
            }
            let array = CircleArray::new(ladder, built_rows, lambdas, *tau)?;
            let target = match target {
                Some(spec) => CircleTarget::Id(InfDivParamsT::new(
                    Complex64::new(spec.gamma.0, spec.gamma.1),
                    CirclePositive::new(spec.sigma.clone()),
                )?),
                None => {
                    // Self-consistency default: the accumulated (σ_n, γ_n)
                    // of the largest row generate the target law.
                    let idx = array.ladder.len() - 1;
                    let (sigma, gamma) = sigma_gamma_t(&array.rows[idx], array.lambdas[idx], array.tau);
                    CircleTarget::Id(InfDivParamsT::new(gamma, sigma)?)
                }
            };
            run_circle("custom_circle", &array, mode, cfg.order, &target, tol)
        }
        ArraySpec::Line { rows, target } => {
            let mut ladder = Vec::new();
            let mut built_rows = Vec::new();
            let mut shifts = Vec::new();
            for row in rows {
                ladder.push(row.n);
                shifts.push(row.shift);
                let mut r = Vec::new();
                for mc in &row.measures {
                    r.push((line_measure(&mc.measure)?, mc.count));
                }
                built_rows.push(r);
            }
            let array = LineArray { ladder, rows: built_rows, shifts };
            let params = match target {
                Some(spec) => InfDivParamsR::new(spec.gamma, LinePositive::new(spec.sigma.clone())),
                None => {
                    let idx = array.ladder.len() - 1;
                    let (sigma, gamma) = sigma_gamma_r(&array.rows[idx], array.shifts[idx]);
                    InfDivParamsR::new(gamma, sigma)
                }
            };
            run_line("custom_line", &array, mode, cfg.order, &params, tol)
        }
    }
}

/// Parse a JSON configuration string.
pub fn parse(json: &str) -> Result<RunConfig, ExperimentError> {
    serde_json::from_str(json).map_err(|e| ExperimentError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_round_trip() {
        let cfg = parse(
            r#"{"array": {"preset": "cor37", "t": 1.0}, "mode": "boolean", "ladder": [100, 1000], "order": 12}"#,
        )
        .unwrap();
        let rep = execute(&cfg).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_csv());
    }

    #[test]
    fn explicit_line_config_with_self_target() {
        let cfg = parse(
            r#"{
                "array": {"rows": [
                    {"n": 100, "measures": [{"measure": {"type": "lineAtomic", "atoms": [[0.0, 0.99], [1.0, 0.01]]}, "count": 100}]},
                    {"n": 1000, "measures": [{"measure": {"type": "lineAtomic", "atoms": [[0.0, 0.999], [1.0, 0.001]]}, "count": 1000}]}
                ]},
                "mode": "boolean",
                "tolerances": {"final_dist": 0.05}
            }"#,
        )
        .unwrap();
        let rep = execute(&cfg).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_csv());
    }

    #[test]
    fn explicit_circle_config_with_target() {
        let cfg = parse(
            r#"{
                "array": {"tau": 1.0, "rows": [
                    {"n": 100, "measures": [{"measure": {"type": "circleAtomic", "atoms": [[0.0, 0.99], [0.5, 0.01]]}, "count": 100}]},
                    {"n": 1000, "measures": [{"measure": {"type": "circleAtomic", "atoms": [[0.0, 0.999], [0.5, 0.001]]}, "count": 1000}]}
                ]},
                "mode": "classical"
            }"#,
        )
        .unwrap();
        let rep = execute(&cfg).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_csv());
    }

    #[test]
    fn bad_mode_rejected() {
        let cfg = parse(r#"{"array": {"preset": "cor37"}, "mode": "quantum"}"#).unwrap();
        assert!(matches!(execute(&cfg), Err(ExperimentError::BadParams(_))));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(parse("{"), Err(ExperimentError::Config(_))));
    }
}
