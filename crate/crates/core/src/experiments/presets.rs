//! The five named experiment families and their closed-form limit
//! parameters.

use super::ExperimentError;
use crate::arrays::{normal_row_measure, CircleArray, LineArray};
use crate::infdiv::{directional_params_t, normal_params_t, InfDivParamsR, InfDivParamsT};
use crate::measures::{CircleMeasure, LineMeasure, LinePositive};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default ladder for circle presets.
pub const DEFAULT_LADDER: [u64; 3] = [100, 1_000, 10_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    Cor37,
    Cor38,
    RemarkRho,
    BernR,
    PoissonR,
}

impl PresetName {
    pub fn parse(s: &str) -> Result<Self, ExperimentError> {
        match s {
            "cor37" => Ok(PresetName::Cor37),
            "cor38" => Ok(PresetName::Cor38),
            "remark_rho" => Ok(PresetName::RemarkRho),
            "bern_R" => Ok(PresetName::BernR),
            "poisson_R" => Ok(PresetName::PoissonR),
            _ => Err(ExperimentError::UnknownPreset(s.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Cor37 => "cor37",
            PresetName::Cor38 => "cor38",
            PresetName::RemarkRho => "remark_rho",
            PresetName::BernR => "bern_R",
            PresetName::PoissonR => "poisson_R",
        }
    }

    pub fn is_line(self) -> bool {
        matches!(self, PresetName::BernR | PresetName::PoissonR)
    }

    /// The ladder used when the caller does not supply one.
    pub fn default_ladder(self) -> Vec<u64> {
        match self {
            // k_n = n² rows make large n pointless; the divergence is
            // already decisive at n = 32.
            PresetName::RemarkRho => vec![8, 16, 32],
            PresetName::BernR => vec![10, 100, 1_000],
            PresetName::PoissonR => vec![100, 1_000, 10_000],
            _ => DEFAULT_LADDER.to_vec(),
        }
    }
}

/// Scalar knobs shared by the presets: t is the intensity (also the
/// Poisson rate for line presets), lambda_angle the direction arg λ.
#[derive(Debug, Clone, Copy)]
pub struct PresetParams {
    pub t: f64,
    pub lambda_angle: f64,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams {
            t: 1.0,
            lambda_angle: PI / 3.0,
        }
    }
}

/// A constructed preset: the array plus its closed-form limit parameters.
#[derive(Debug, Clone)]
pub enum PresetArray {
    Circle {
        array: CircleArray,
        /// (γ, σ) of the predicted boolean/free/classical limits, when
        /// the limit is not Haar.
        params: Option<InfDivParamsT>,
        /// Measure the classical n-fold powers converge to when it
        /// differs from the (γ, σ) law (the Haar-divergence family).
        classical_target: Option<CircleMeasure>,
    },
    Line {
        array: LineArray,
        params: InfDivParamsR,
    },
}

/// n copies of ½(δ_{ξ_n} + δ_{ξ̄_n}), ξ_n = √(1-t/n) + i√(t/n), τ = 1.
fn cor37(t: f64, ladder: &[u64]) -> Result<CircleArray, ExperimentError> {
    for &n in ladder {
        if t / n as f64 >= 1.0 {
            return Err(ExperimentError::BadParams(format!("t = {t} too large for n = {n}")));
        }
    }
    let rows = ladder
        .iter()
        .map(|&n| vec![(normal_row_measure(t, n), n)])
        .collect();
    let lambdas = vec![Complex64::new(1.0, 0.0); ladder.len()];
    Ok(CircleArray::new(ladder.to_vec(), rows, lambdas, 1.0)?)
}

/// n copies of (1-t/n)δ_1 + (t/n)δ_λ, τ = |arg λ|/2.
fn cor38(t: f64, lambda_angle: f64, ladder: &[u64]) -> Result<CircleArray, ExperimentError> {
    if lambda_angle == 0.0 {
        return Err(ExperimentError::BadParams("lambda_angle must be nonzero".into()));
    }
    for &n in ladder {
        if t / n as f64 > 1.0 {
            return Err(ExperimentError::BadParams(format!("t = {t} too large for n = {n}")));
        }
    }
    let rows = ladder
        .iter()
        .map(|&n| {
            let p = t / n as f64;
            let mu = CircleMeasure::atomic(vec![(0.0, 1.0 - p), (lambda_angle, p)])
                .expect("valid weights");
            vec![(mu, n)]
        })
        .collect();
    let lambdas = vec![Complex64::new(1.0, 0.0); ladder.len()];
    Ok(CircleArray::new(ladder.to_vec(), rows, lambdas, lambda_angle.abs() / 2.0)?)
}

/// k_n = n² copies of ρ_n = (1-1/n)δ_1 + (1/n)δ_{-1}, τ = 1.
fn remark_rho(ladder: &[u64]) -> Result<CircleArray, ExperimentError> {
    let rows = ladder
        .iter()
        .map(|&n| {
            let p = 1.0 / n as f64;
            let rho = CircleMeasure::atomic(vec![(0.0, 1.0 - p), (PI, p)]).expect("valid weights");
            vec![(rho, n * n)]
        })
        .collect();
    let lambdas = vec![Complex64::new(1.0, 0.0); ladder.len()];
    Ok(CircleArray::new(ladder.to_vec(), rows, lambdas, 1.0)?)
}

/// n copies of ½(δ_{-1/√n} + δ_{1/√n}), c_n = 0.
fn bern_r(ladder: &[u64]) -> LineArray {
    let rows = ladder
        .iter()
        .map(|&n| vec![(LineMeasure::symmetric_bernoulli(1.0 / (n as f64).sqrt()), n)])
        .collect();
    LineArray {
        ladder: ladder.to_vec(),
        rows,
        shifts: vec![0.0; ladder.len()],
    }
}

/// n copies of (1-λ/n)δ_0 + (λ/n)δ_1, c_n = 0.
fn poisson_r(rate: f64, ladder: &[u64]) -> Result<LineArray, ExperimentError> {
    for &n in ladder {
        if rate / n as f64 >= 1.0 {
            return Err(ExperimentError::BadParams(format!("rate {rate} too large for n = {n}")));
        }
    }
    let rows = ladder
        .iter()
        .map(|&n| {
            let p = rate / n as f64;
            vec![(LineMeasure::new(vec![(0.0, 1.0 - p), (1.0, p)]).expect("valid weights"), n)]
        })
        .collect();
    Ok(LineArray {
        ladder: ladder.to_vec(),
        rows,
        shifts: vec![0.0; ladder.len()],
    })
}

/// Build a preset array with its limit parameters.
pub fn build(name: PresetName, params: PresetParams, ladder: Option<&[u64]>) -> Result<PresetArray, ExperimentError> {
    let ladder: Vec<u64> = match ladder {
        Some(l) => {
            if l.windows(2).any(|w| w[0] >= w[1]) || l.is_empty() {
                return Err(ExperimentError::BadParams("ladder must be strictly increasing and nonempty".into()));
            }
            l.to_vec()
        }
        None => name.default_ladder(),
    };
    match name {
        PresetName::Cor37 => Ok(PresetArray::Circle {
            array: cor37(params.t, &ladder)?,
            params: Some(normal_params_t(params.t)),
            classical_target: None,
        }),
        PresetName::Cor38 => Ok(PresetArray::Circle {
            array: cor38(params.t, params.lambda_angle, &ladder)?,
            params: Some(directional_params_t(params.t, params.lambda_angle)),
            classical_target: None,
        }),
        PresetName::RemarkRho => Ok(PresetArray::Circle {
            array: remark_rho(&ladder)?,
            params: None,
            classical_target: Some(
                CircleMeasure::atomic(vec![(0.0, 0.5), (PI, 0.5)]).expect("valid weights"),
            ),
        }),
        PresetName::BernR => Ok(PresetArray::Line {
            array: bern_r(&ladder),
            params: InfDivParamsR::new(0.0, LinePositive::new(vec![(0.0, 1.0)])),
        }),
        PresetName::PoissonR => Ok(PresetArray::Line {
            array: poisson_r(params.t, &ladder)?,
            params: InfDivParamsR::new(
                params.t / 2.0,
                LinePositive::new(vec![(1.0, params.t / 2.0)]),
            ),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_round_trip() {
        for s in ["cor37", "cor38", "remark_rho", "bern_R", "poisson_R"] {
            assert_eq!(PresetName::parse(s).unwrap().as_str(), s);
        }
        assert!(matches!(
            PresetName::parse("nope"),
            Err(ExperimentError::UnknownPreset(_))
        ));
    }

    #[test]
    fn cor37_row_structure() {
        let p = PresetParams::default();
        let arr = build(PresetName::Cor37, p, Some(&[100])).unwrap();
        let PresetArray::Circle { array, params, .. } = arr else {
            panic!("circle preset")
        };
        assert_eq!(array.tau, 1.0);
        assert_eq!(array.rows[0][0].1, 100);
        let mu = &array.rows[0][0].0;
        // ξ = √0.99 + i·0.1.
        let xi = Complex64::new(0.99f64.sqrt(), 0.1);
        assert!((mu.atoms()[1].0 - xi.arg()).abs() < 1e-15);
        assert!((mu.atoms()[0].0 + xi.arg()).abs() < 1e-15);
        let p = params.unwrap();
        assert_eq!(p.sigma.atoms(), &[(0.0, 0.5)]);
    }

    #[test]
    fn remark_rho_row_structure() {
        let arr = build(PresetName::RemarkRho, PresetParams::default(), Some(&[32])).unwrap();
        let PresetArray::Circle { array, params, .. } = arr else {
            panic!("circle preset")
        };
        assert_eq!(array.rows[0][0].1, 1024);
        assert!(params.is_none());
        let atoms = array.rows[0][0].0.atoms();
        assert!((atoms[0].1 - (1.0 - 1.0 / 32.0)).abs() < 1e-15);
        assert!((atoms[1].1 - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn poisson_row_structure() {
        let arr = build(PresetName::PoissonR, PresetParams { t: 1.0, ..Default::default() }, Some(&[1000])).unwrap();
        let PresetArray::Line { array, params } = arr else {
            panic!("line preset")
        };
        let atoms = array.rows[0][0].0.atoms();
        assert!((atoms[0].1 - 0.999).abs() < 1e-15);
        assert!((atoms[1].1 - 0.001).abs() < 1e-15);
        assert_eq!(params.gamma, 0.5);
        assert_eq!(params.sigma.atoms(), &[(1.0, 0.5)]);
    }

    #[test]
    fn bad_ladder_rejected() {
        let r = build(PresetName::Cor37, PresetParams::default(), Some(&[100, 100]));
        assert!(matches!(r, Err(ExperimentError::BadParams(_))));
    }

    #[test]
    fn cor38_tau_is_half_angle() {
        let arr = build(PresetName::Cor38, PresetParams::default(), Some(&[100])).unwrap();
        let PresetArray::Circle { array, .. } = arr else {
            panic!("circle preset")
        };
        assert!((array.tau - PI / 6.0).abs() < 1e-15);
    }
}
