//! Atomic probability measures on the circle and the line, their
//! moments/Fourier coefficients, and the weak-convergence metrics used by
//! the experiment suite.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Weight-sum validation tolerance for probability measures.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Atoms closer than this are merged with summed weights.
pub const MERGE_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("weights must be positive")]
    NonpositiveWeight,
    #[error("weights sum to {sum}, expected 1 within {tol:e}")]
    WeightSum { sum: f64, tol: f64 },
    #[error("measure needs at least one atom")]
    Empty,
}

/// Canonicalize an angle to the principal interval (-π, π].
pub fn canonical_angle(theta: f64) -> f64 {
    // Pass angles already in range through bit-exactly, so symmetric atom
    // pairs (θ, -θ) keep exactly opposite angles.
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut a = theta.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

fn merge_sorted_atoms(mut atoms: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (x, w) in atoms {
        match merged.last_mut() {
            Some(last) if (x - last.0).abs() <= tol => last.1 += w,
            _ => merged.push((x, w)),
        }
    }
    merged
}

/// Finitely atomic probability measure on 𝕋, or the Haar measure `m`.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleMeasure {
    /// Atoms as (angle in (-π, π], weight).
    Atomic(Vec<(f64, f64)>),
    Haar,
}

impl CircleMeasure {
    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::Empty);
        }
        if atoms.iter().any(|&(_, w)| w <= 0.0) {
            return Err(MeasureError::NonpositiveWeight);
        }
        let sum: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(MeasureError::WeightSum { sum, tol: WEIGHT_TOL });
        }
        let canon: Vec<(f64, f64)> = atoms
            .into_iter()
            .map(|(t, w)| (canonical_angle(t), w))
            .collect();
        // Atoms straddling the ±π cut merge after canonicalization.
        let mut merged = merge_sorted_atoms(canon, MERGE_TOL);
        if merged.len() >= 2 {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if (first.0 + 2.0 * PI - last.0).abs() <= MERGE_TOL {
                merged[0].1 += last.1;
                merged.pop();
            }
        }
        Ok(CircleMeasure::Atomic(merged))
    }

    pub fn point_mass(theta: f64) -> Self {
        CircleMeasure::Atomic(vec![(canonical_angle(theta), 1.0)])
    }

    /// The measure (1-w)δ_1 + wδ_θ and friends: a generic two-atom helper.
    pub fn two_atoms(theta1: f64, w1: f64, theta2: f64, w2: f64) -> Result<Self, MeasureError> {
        CircleMeasure::atomic(vec![(theta1, w1), (theta2, w2)])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        match self {
            CircleMeasure::Atomic(a) => a,
            CircleMeasure::Haar => &[],
        }
    }

    pub fn is_haar(&self) -> bool {
        matches!(self, CircleMeasure::Haar)
    }

    /// p-th Fourier coefficient ∫ ζ^p dμ.
    pub fn fourier(&self, p: i64) -> Complex64 {
        match self {
            CircleMeasure::Haar => {
                if p == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            CircleMeasure::Atomic(atoms) => atoms
                .iter()
                .map(|&(t, w)| Complex64::from_polar(w, (p as f64) * t))
                .sum(),
        }
    }

    pub fn moments(&self, order: usize) -> MomentListT {
        MomentListT::from_fn(order, |p| self.fourier(p as i64))
    }
}

/// Rotation dμ°(ζ) = dμ(λζ): atom angles become θ - arg λ.
pub fn rotate_t(mu: &CircleMeasure, lambda: Complex64) -> CircleMeasure {
    match mu {
        CircleMeasure::Haar => CircleMeasure::Haar,
        CircleMeasure::Atomic(atoms) => {
            let a = lambda.arg();
            CircleMeasure::Atomic(
                atoms
                    .iter()
                    .map(|&(t, w)| (canonical_angle(t - a), w))
                    .collect(),
            )
        }
    }
}

/// Fourier/moment list of a circle measure; negative indices are
/// conjugates of the positive ones.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentListT {
    values: Vec<Complex64>,
}

impl MomentListT {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty());
        MomentListT { values }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> Complex64) -> Self {
        MomentListT {
            values: (0..=order).map(f).collect(),
        }
    }

    pub fn haar(order: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); order + 1];
        values[0] = Complex64::new(1.0, 0.0);
        MomentListT { values }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn m(&self, p: i64) -> Complex64 {
        if p >= 0 {
            self.values[p as usize]
        } else {
            self.values[(-p) as usize].conj()
        }
    }
}

/// Weak-convergence proxy on 𝕋: max_{1≤p≤P} |a_p - b_p|.
pub fn dist_moments_t(a: &MomentListT, b: &MomentListT, p_max: usize) -> f64 {
    assert!(a.order() >= p_max && b.order() >= p_max);
    (1..=p_max)
        .map(|p| (a.m(p as i64) - b.m(p as i64)).norm())
        .fold(0.0, f64::max)
}

/// Finitely atomic probability measure on ℝ; atoms sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct LineMeasure {
    atoms: Vec<(f64, f64)>,
}

impl LineMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::Empty);
        }
        if atoms.iter().any(|&(_, w)| w <= 0.0) {
            return Err(MeasureError::NonpositiveWeight);
        }
        let sum: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(MeasureError::WeightSum { sum, tol: WEIGHT_TOL });
        }
        Ok(LineMeasure {
            atoms: merge_sorted_atoms(atoms, MERGE_TOL),
        })
    }

    pub fn point_mass(x: f64) -> Self {
        LineMeasure { atoms: vec![(x, 1.0)] }
    }

    pub fn symmetric_bernoulli(s: f64) -> Self {
        LineMeasure {
            atoms: vec![(-s, 0.5), (s, 0.5)],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// j-th raw moment ∫ t^j dν.
    pub fn moment(&self, j: usize) -> f64 {
        self.atoms.iter().map(|&(x, w)| w * x.powi(j as i32)).sum()
    }

    /// CDF value F(x) (right-continuous).
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|&&(p, _)| p <= x)
            .map(|&(_, w)| w)
            .sum()
    }
}

/// Shift dν°(t) = dν(t + a): positions become x - a.
pub fn shift_r(nu: &LineMeasure, a: f64) -> LineMeasure {
    LineMeasure {
        atoms: nu.atoms.iter().map(|&(x, w)| (x - a, w)).collect(),
    }
}

/// Exact Lévy distance between two step CDFs.
///
/// The infimum over ε of the sandwich condition is attained at a candidate
/// where some constraint holds with equality, so a finite search over
/// position and CDF-level differences suffices.
pub fn dist_levy_r(a: &LineMeasure, b: &LineMeasure) -> f64 {
    const SLACK: f64 = 1e-12;
    let feasible = |eps: f64| -> bool {
        // For step functions u ≤ v everywhere iff u(x) ≤ v(x) at every
        // jump point x of u (v is nondecreasing and right-continuous).
        for &(x, _) in a.atoms() {
            if a.cdf(x) > b.cdf(x + eps) + eps + SLACK {
                return false;
            }
        }
        for &(x, _) in b.atoms() {
            if b.cdf(x) > a.cdf(x + eps) + eps + SLACK {
                return false;
            }
        }
        true
    };
    let mut candidates = vec![0.0];
    for &(xa, _) in a.atoms() {
        for &(xb, _) in b.atoms() {
            candidates.push((xa - xb).abs());
            candidates.push(a.cdf(xa) - b.cdf(xb));
            candidates.push(b.cdf(xb) - a.cdf(xa));
        }
        candidates.push(a.cdf(xa));
        candidates.push(1.0 - a.cdf(xa));
    }
    for &(xb, _) in b.atoms() {
        candidates.push(b.cdf(xb));
        candidates.push(1.0 - b.cdf(xb));
    }
    candidates.retain(|&e| e >= 0.0);
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for &eps in &candidates {
        if feasible(eps) {
            return eps;
        }
    }
    1.0 // Lévy distance between probability measures never exceeds 1.
}

/// Finite positive atomic measure on 𝕋 (no normalization); used for the
/// generator measures σ.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CirclePositive {
    atoms: Vec<(f64, f64)>,
}

impl CirclePositive {
    pub fn new(atoms: Vec<(f64, f64)>) -> Self {
        let canon: Vec<(f64, f64)> = atoms
            .into_iter()
            .filter(|&(_, s)| s > 0.0)
            .map(|(t, s)| (canonical_angle(t), s))
            .collect();
        CirclePositive {
            atoms: merge_sorted_atoms(canon, MERGE_TOL),
        }
    }

    pub fn empty() -> Self {
        CirclePositive { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, s)| s).sum()
    }

    pub fn fourier(&self, p: i64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(t, s)| Complex64::from_polar(s, (p as f64) * t))
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        CirclePositive {
            atoms: self.atoms.iter().map(|&(t, s)| (t, s * c)).collect(),
        }
    }
}

/// Finite positive atomic measure on ℝ.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinePositive {
    atoms: Vec<(f64, f64)>,
}

impl LinePositive {
    pub fn new(atoms: Vec<(f64, f64)>) -> Self {
        let filtered: Vec<(f64, f64)> = atoms.into_iter().filter(|&(_, s)| s > 0.0).collect();
        LinePositive {
            atoms: merge_sorted_atoms(filtered, MERGE_TOL),
        }
    }

    pub fn empty() -> Self {
        LinePositive { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, s)| s).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        LinePositive {
            atoms: self.atoms.iter().map(|&(t, s)| (t, s * c)).collect(),
        }
    }
}
