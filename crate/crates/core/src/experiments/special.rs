//! Standalone diagnostics: Haar-divergence criteria, the exponential-sum
//! comparison lemma, the quadrature nonuniqueness check, and recovery of
//! the atomic law generated by Nevanlinna parameters.

use super::ExperimentError;
use crate::arrays::{sigma_gamma_t, CircleArray};
use crate::convolve::complex_powu;
use crate::infdiv::InfDivParamsR;
use crate::measures::LineMeasure;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Per-n total mass of σ_n; divergence to +∞ characterizes convergence of
/// the boolean products to Haar measure.
pub fn haar_criterion(array: &CircleArray) -> Vec<f64> {
    array
        .rows
        .iter()
        .zip(array.lambdas.iter())
        .map(|(row, &lam)| sigma_gamma_t(row, lam, array.tau).0.total_mass())
        .collect()
}

/// Per-n exact product λ_n·Π_k (∫ζ dμ_nk)^{count_k}; its convergence to a
/// nonzero value (resp. zero) separates proper limits from Haar.
pub fn first_moment_product(array: &CircleArray) -> Vec<Complex64> {
    array
        .rows
        .iter()
        .zip(array.lambdas.iter())
        .map(|(row, &lam)| {
            let mut acc = lam;
            for (mu, count) in row {
                acc *= complex_powu(mu.fourier(1), *count);
            }
            acc
        })
        .collect()
}

/// Outcome of the exponential-sum comparison: the two product sequences,
/// their gaps, and the numerically verified hypothesis data.
#[derive(Debug, Clone)]
pub struct ExpSumReport {
    pub limit_z: Vec<Complex64>,
    pub limit_w: Vec<Complex64>,
    pub gaps: Vec<f64>,
    /// Per n: max_k |z_nk/w_nk - 1| (the multiplicative perturbation).
    pub eps: Vec<f64>,
    pub s_sums: Vec<f64>,
    /// Smallest M with |Im w_nk| ≤ M·|Re w_nk| + s_nk across all entries.
    pub best_m: f64,
}

/// Compare exp(i·r_n + Σ_k z_nk) with exp(i·r_n + Σ_k w_nk) and verify the
/// hypotheses under which both sequences share a limit:
/// (1) z = w·(1 + ε) entrywise; (2) Re w ≤ 0; (3) |Im w| ≤ M·|Re w| + s;
/// (4) s ≥ 0 with bounded row sums.
pub fn compare_exp_sums(
    r: &[f64],
    z_rows: &[Vec<Complex64>],
    w_rows: &[Vec<Complex64>],
    s_rows: &[Vec<f64>],
) -> Result<ExpSumReport, ExperimentError> {
    if z_rows.len() != r.len() || w_rows.len() != r.len() || s_rows.len() != r.len() {
        return Err(ExperimentError::BadParams("row counts differ".into()));
    }
    let mut rep = ExpSumReport {
        limit_z: Vec::new(),
        limit_w: Vec::new(),
        gaps: Vec::new(),
        eps: Vec::new(),
        s_sums: Vec::new(),
        best_m: 0.0,
    };
    for (n_idx, &rn) in r.iter().enumerate() {
        let (zs, ws, ss) = (&z_rows[n_idx], &w_rows[n_idx], &s_rows[n_idx]);
        if zs.len() != ws.len() || ss.len() != ws.len() {
            return Err(ExperimentError::BadParams(format!("row {n_idx} shapes differ")));
        }
        let mut eps_n = 0.0f64;
        for (k, (&z, (&w, &s))) in zs.iter().zip(ws.iter().zip(ss.iter())).enumerate() {
            if s < 0.0 {
                return Err(ExperimentError::HypothesisViolated(
                    4,
                    format!("s[{n_idx}][{k}] = {s} < 0"),
                ));
            }
            if w.re > 1e-12 {
                return Err(ExperimentError::HypothesisViolated(
                    2,
                    format!("Re w[{n_idx}][{k}] = {} > 0", w.re),
                ));
            }
            if w.norm() == 0.0 {
                if z.norm() > 1e-15 {
                    return Err(ExperimentError::HypothesisViolated(
                        1,
                        format!("w[{n_idx}][{k}] = 0 but z = {z}"),
                    ));
                }
            } else {
                eps_n = eps_n.max((z / w - 1.0).norm());
            }
            let excess = w.im.abs() - s;
            if excess > 0.0 {
                if w.re.abs() < 1e-300 {
                    return Err(ExperimentError::HypothesisViolated(
                        3,
                        format!("|Im w[{n_idx}][{k}]| = {} with Re w = 0 and s = {s}", w.im.abs()),
                    ));
                }
                rep.best_m = rep.best_m.max(excess / w.re.abs());
            }
        }
        let sum_z: Complex64 = zs.iter().sum();
        let sum_w: Complex64 = ws.iter().sum();
        let phase = Complex64::new(0.0, rn);
        let lz = (phase + sum_z).exp();
        let lw = (phase + sum_w).exp();
        rep.gaps.push((lz - lw).norm());
        rep.limit_z.push(lz);
        rep.limit_w.push(lw);
        rep.eps.push(eps_n);
        rep.s_sums.push(ss.iter().sum());
    }
    Ok(rep)
}

/// Quadrature check that two distinct σ-densities produce the same limit
/// Fourier coefficients: the density f(ζ) = 4π·Im ζ split into positive
/// and negative parts against Haar measure. Returns the two exponentials
/// at index p and the first-coefficient gap |σ̂₁(1) - σ̂₂(1)| certifying
/// σ₁ ≠ σ₂.
pub fn nonuniqueness_check(p: i64, n_points: usize) -> (Complex64, Complex64, f64) {
    assert!(n_points >= 1024 && n_points.is_power_of_two());
    let mut acc_plus = Complex64::new(0.0, 0.0);
    let mut acc_minus = Complex64::new(0.0, 0.0);
    let mut sigma_diff = Complex64::new(0.0, 0.0);
    for j in 0..n_points {
        let theta = 2.0 * PI * j as f64 / n_points as f64;
        let zeta = Complex64::from_polar(1.0, theta);
        let f = 4.0 * PI * theta.sin();
        let (f_plus, f_minus) = (f.max(0.0), (-f).max(0.0));
        // (1 - Re ζ) in the σ-density cancels the integrand denominator of
        // the limit-law formula analytically, so integrate the numerator.
        let g = zeta.powi(p as i32) - 1.0 - Complex64::new(0.0, p as f64 * zeta.im);
        acc_plus += g * f_plus;
        acc_minus += g * f_minus;
        sigma_diff += zeta * (1.0 - zeta.re) * f;
    }
    let scale = 1.0 / n_points as f64;
    (
        (acc_plus * scale).exp(),
        (acc_minus * scale).exp(),
        (sigma_diff * scale).norm(),
    )
}

/// Atomic law whose E-transform is γ + ∫(1+tz)/(z-t)dσ: the k+1 roots of
/// F(x) = x - E_id(x), F strictly increasing between the poles t_j, with
/// weight 1/F'(x) at each root.
pub fn measure_from_nevanlinna(params: &InfDivParamsR) -> LineMeasure {
    let atoms = params.sigma.atoms();
    if atoms.is_empty() {
        return LineMeasure::point_mass(params.gamma);
    }
    let f = |x: f64| -> f64 {
        let mut acc = x - params.gamma;
        for &(t, s) in atoms {
            acc -= s * (1.0 + t * x) / (x - t);
        }
        acc
    };
    let f_deriv = |x: f64| -> f64 {
        let mut acc = 1.0;
        for &(t, s) in atoms {
            let d = x - t;
            acc += s * (1.0 + t * t) / (d * d);
        }
        acc
    };
    let poles: Vec<f64> = atoms.iter().map(|&(t, _)| t).collect();
    let span = poles.iter().fold(params.gamma.abs(), |m, t| m.max(t.abs()))
        + params.sigma.total_mass()
        + 1.0;
    let bisect = |mut lo: f64, mut hi: f64| -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut roots = Vec::with_capacity(poles.len() + 1);
    // Left of the first pole: F → -∞ at -∞ and +∞ approaching the pole.
    let first = poles[0];
    let mut lo = first - span;
    while f(lo) >= 0.0 {
        lo -= span;
    }
    let mut off = 0.5;
    while f(first - off) <= 0.0 {
        off *= 0.5;
    }
    roots.push(bisect(lo, first - off));
    for win in poles.windows(2) {
        let (a, b) = (win[0], win[1]);
        let width = b - a;
        let mut dl = 0.25 * width;
        while f(a + dl) >= 0.0 {
            dl *= 0.5;
        }
        let mut dr = 0.25 * width;
        while f(b - dr) <= 0.0 {
            dr *= 0.5;
        }
        roots.push(bisect(a + dl, b - dr));
    }
    let last = *poles.last().unwrap();
    let mut off = 0.5;
    while f(last + off) >= 0.0 {
        off *= 0.5;
    }
    let mut hi = last + span;
    while f(hi) <= 0.0 {
        hi += span;
    }
    roots.push(bisect(last + off, hi));

    let mut out: Vec<(f64, f64)> = roots.iter().map(|&x| (x, 1.0 / f_deriv(x))).collect();
    let wsum: f64 = out.iter().map(|&(_, w)| w).sum();
    for a in out.iter_mut() {
        a.1 /= wsum;
    }
    LineMeasure::new(out).expect("positive residue weights")
}
