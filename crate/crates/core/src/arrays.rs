//! Infinitesimal triangular arrays on 𝕋 and ℝ: centering constants,
//! centered rows, the associated analytic functions h and f, and the
//! exact (σ_n, γ_n) parameter accumulators.
//!
//! Rows are stored as `(measure, count)` pairs: a row made of n identical
//! measures is a single pair with count n, so accumulators stay O(atoms)
//! instead of O(n).

use crate::measures::{CircleMeasure, CirclePositive, LineMeasure, LinePositive};
use crate::transforms::psi_b_eval;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArrayError {
    #[error("tau = {0} outside (0, pi)")]
    TauRange(f64),
    #[error("domain violation: {0}")]
    Domain(&'static str),
}

/// A triangular array on the circle: for each n in `ladder`, a row of
/// measures with multiplicities, a unimodular λ_n, and a common cut-off τ.
#[derive(Debug, Clone)]
pub struct CircleArray {
    pub ladder: Vec<u64>,
    pub rows: Vec<Vec<(CircleMeasure, u64)>>,
    pub lambdas: Vec<Complex64>,
    pub tau: f64,
}

impl CircleArray {
    pub fn new(
        ladder: Vec<u64>,
        rows: Vec<Vec<(CircleMeasure, u64)>>,
        lambdas: Vec<Complex64>,
        tau: f64,
    ) -> Result<Self, ArrayError> {
        if !(tau > 0.0 && tau < std::f64::consts::PI) {
            return Err(ArrayError::TauRange(tau));
        }
        assert_eq!(ladder.len(), rows.len());
        assert_eq!(ladder.len(), lambdas.len());
        Ok(CircleArray {
            ladder,
            rows,
            lambdas,
            tau,
        })
    }
}

/// A triangular array on the line: per n, a row of measures with
/// multiplicities and a real shift c_n.
#[derive(Debug, Clone)]
pub struct LineArray {
    pub ladder: Vec<u64>,
    pub rows: Vec<Vec<(LineMeasure, u64)>>,
    pub shifts: Vec<f64>,
}

/// max_k μ_nk({|ζ - 1| ≥ ε}), computed exactly from atoms.
pub fn infinitesimal_sup_t(row: &[(CircleMeasure, u64)], eps: f64) -> f64 {
    assert!(eps > 0.0);
    row.iter()
        .map(|(mu, _)| {
            mu.atoms()
                .iter()
                .filter(|&&(theta, _)| 2.0 * (0.5 * theta).sin().abs() >= eps)
                .map(|&(_, w)| w)
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// max_k ν_nk({|t| ≥ ε}), computed exactly from atoms.
pub fn infinitesimal_sup_r(row: &[(LineMeasure, u64)], eps: f64) -> f64 {
    assert!(eps > 0.0);
    row.iter()
        .map(|(nu, _)| {
            nu.atoms()
                .iter()
                .filter(|&&(x, _)| x.abs() >= eps)
                .map(|&(_, w)| w)
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// b_nk = exp(i ∫_{|arg ζ| < τ} arg ζ dμ), the strict inequality excluding
/// atoms exactly on the cut-off.
pub fn bnk_t(mu: &CircleMeasure, tau: f64) -> Complex64 {
    let arg: f64 = mu
        .atoms()
        .iter()
        .filter(|&&(theta, _)| theta.abs() < tau)
        .map(|&(theta, w)| w * theta)
        .sum();
    Complex64::from_polar(1.0, arg)
}

/// Centered measure μ°_nk: μ rotated by b̄_nk.
pub fn center_t(mu: &CircleMeasure, tau: f64) -> CircleMeasure {
    crate::measures::rotate_t(mu, bnk_t(mu, tau))
}

/// a_nk = ∫_{|t|<1} t dν, strict inequality.
pub fn ank_r(nu: &LineMeasure) -> f64 {
    nu.atoms()
        .iter()
        .filter(|&&(x, _)| x.abs() < 1.0)
        .map(|&(x, w)| w * x)
        .sum()
}

/// Centered measure ν°_nk: ν shifted by a_nk.
pub fn center_r(nu: &LineMeasure) -> LineMeasure {
    crate::measures::shift_r(nu, ank_r(nu))
}

/// h_nk(z) = -i∫Im ζ dμ° + ∫ (1+ζz)/(1-ζz)·(1-Re ζ) dμ° for |z| ≤ 0.9.
pub fn hnk_eval(mu_centered: &CircleMeasure, z: Complex64) -> Result<Complex64, ArrayError> {
    if z.norm() > 0.9 + 1e-15 {
        return Err(ArrayError::Domain("hnk_eval requires |z| <= 0.9"));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(theta, w) in mu_centered.atoms() {
        let zeta = Complex64::from_polar(1.0, theta);
        acc += Complex64::new(0.0, -w * theta.sin());
        acc += w * (1.0 - theta.cos()) * (one + zeta * z) / (one - zeta * z);
    }
    Ok(acc)
}

/// f_nk(z) = ∫ tz/(z-t) dν° for Im z > 0.
pub fn fnk_eval(nu_centered: &LineMeasure, z: Complex64) -> Result<Complex64, ArrayError> {
    if z.im <= 0.0 {
        return Err(ArrayError::Domain("fnk_eval requires Im z > 0"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in nu_centered.atoms() {
        acc += w * x * z / (z - x);
    }
    Ok(acc)
}

/// b_nk(y) = ∫_{|t| ≥ 1} [a + (t-a)y²/(y² + (t-a)²)] dν for y ≥ 1, with
/// a = a_nk the centering constant of ν.
pub fn bnk_y(nu: &LineMeasure, a: f64, y: f64) -> Result<f64, ArrayError> {
    if y < 1.0 {
        return Err(ArrayError::Domain("bnk_y requires y >= 1"));
    }
    let y2 = y * y;
    Ok(nu
        .atoms()
        .iter()
        .filter(|&&(x, _)| x.abs() >= 1.0)
        .map(|&(x, w)| {
            let d = x - a;
            w * (a + d * y2 / (y2 + d * d))
        })
        .sum())
}

/// Exact (σ_n, γ_n) accumulation on the circle:
/// dσ_n = Σ_k (1-Re ζ) dμ°_nk and
/// γ_n = exp(i·arg λ_n + iΣ arg b_nk + iΣ∫Im ζ dμ°_nk).
/// Centered atoms at ζ = 1 receive weight 0 and are dropped.
pub fn sigma_gamma_t(
    row: &[(CircleMeasure, u64)],
    lambda_n: Complex64,
    tau: f64,
) -> (CirclePositive, Complex64) {
    let mut sigma_atoms: Vec<(f64, f64)> = Vec::new();
    let mut arg_sum = lambda_n.arg();
    for (mu, count) in row {
        let cnt = *count as f64;
        let b = bnk_t(mu, tau);
        arg_sum += cnt * b.arg();
        let centered = center_t(mu, tau);
        for &(theta, w) in centered.atoms() {
            arg_sum += cnt * w * theta.sin();
            let s = cnt * w * (1.0 - theta.cos());
            if s > 0.0 {
                sigma_atoms.push((theta, s));
            }
        }
    }
    (CirclePositive::new(sigma_atoms), Complex64::from_polar(1.0, arg_sum))
}

/// Exact (σ_n, γ_n) accumulation on the line:
/// dσ_n = Σ_k t²/(1+t²) dν°_nk and
/// γ_n = c_n + Σ_k [a_nk + ∫ t/(1+t²) dν°_nk].
pub fn sigma_gamma_r(row: &[(LineMeasure, u64)], c_n: f64) -> (LinePositive, f64) {
    let mut sigma_atoms: Vec<(f64, f64)> = Vec::new();
    let mut gamma = c_n;
    for (nu, count) in row {
        let cnt = *count as f64;
        let a = ank_r(nu);
        gamma += cnt * a;
        let centered = crate::measures::shift_r(nu, a);
        for &(t, w) in centered.atoms() {
            gamma += cnt * w * t / (1.0 + t * t);
            let s = cnt * w * t * t / (1.0 + t * t);
            if s > 0.0 {
                sigma_atoms.push((t, s));
            }
        }
    }
    (LinePositive::new(sigma_atoms), gamma)
}

/// max over k and grid points of |ψ_{μ_nk}(z) - z/(1-z)|, the uniformity
/// diagnostic behind the approximation ψ ≈ z/(1-z) for infinitesimal rows.
pub fn psi_uniformity_diag(row: &[(CircleMeasure, u64)], grid: &[Complex64]) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for (mu, _) in row {
        for &z in grid {
            debug_assert!(z.norm() <= 0.5 + 1e-12);
            let (psi, _) = psi_b_eval(mu, z).expect("grid inside the disk");
            worst = worst.max((psi - z / (one - z)).norm());
        }
    }
    worst
}

/// The row measure of the normal (cor37) array family: ½(δ_ξ + δ_ξ̄) with
/// ξ = √(1-t/n) + i√(t/n).
pub fn normal_row_measure(t: f64, n: u64) -> CircleMeasure {
    let nf = n as f64;
    let xi = Complex64::new((1.0 - t / nf).sqrt(), (t / nf).sqrt());
    let ang = xi.arg();
    CircleMeasure::atomic(vec![(ang, 0.5), (-ang, 0.5)]).expect("valid weights")
}
