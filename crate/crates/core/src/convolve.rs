//! The six convolution operations, each with an n-fold power form.
//!
//! Factors are passed as `(measure, count)` pairs; n-fold powers are
//! computed in the transform domain (B^n, n·E, Σ^n, n·φ, m_p^n), never by
//! repeated binary convolution.

use crate::measures::{
    canonical_angle, CircleMeasure, LineMeasure, MeasureError, MomentListT,
};
use crate::series::{s_mul, s_powi, Series, SeriesError};
use crate::transforms::{
    b_series, moments_from_b_series, moments_from_sigma_series, phi_tail, sigma_series, TailSeries,
    TransformError,
};
use num_complex::Complex64;
use thiserror::Error;

/// Default cap on the atom count of exact classical convolutions.
pub const ATOM_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ConvolveError {
    #[error("root isolation failed: {0}")]
    RootFinding(String),
    #[error("atomic output would have {count} atoms (cap {cap})")]
    AtomExplosion { count: usize, cap: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Boolean multiplicative convolution on 𝕋: B of the output is
/// λ·Π B_{μ_k}^{count_k}.
pub fn boolmul_t(
    factors: &[(CircleMeasure, u64)],
    lambda: Complex64,
    order: usize,
) -> (Series, MomentListT) {
    let mut b = Series::constant(lambda, order);
    for (mu, count) in factors {
        b = s_mul(&b, &s_powi(&b_series(mu, order), *count));
    }
    let moments = moments_from_b_series(&b);
    (b, moments)
}

/// Free multiplicative convolution on 𝕋 at truncated-moment level:
/// Σ of the output is (1/λ)·Π Σ_{μ_k}^{count_k}.
pub fn freemul_t(
    factors: &[(CircleMeasure, u64)],
    lambda: Complex64,
    order: usize,
) -> Result<MomentListT, ConvolveError> {
    let work = order + 2;
    let mut sigma = Series::constant(Complex64::new(1.0, 0.0) / lambda, work);
    for (mu, count) in factors {
        let s = sigma_series(&mu.moments(work + 1), work)?;
        sigma = s_mul(&sigma, &s_powi(&s, *count));
    }
    Ok(moments_from_sigma_series(&sigma, order)?)
}

/// Free additive convolution on ℝ at truncated-moment level:
/// φ of the output is c + Σ count_k·φ_{ν_k}.
pub fn freeadd_r(factors: &[(LineMeasure, u64)], c: f64, order: usize) -> Vec<f64> {
    let mut phi = TailSeries::zero(order);
    let mut coeffs = phi.coeffs().to_vec();
    coeffs[0] = Complex64::new(c, 0.0);
    phi = TailSeries::from_coeffs(coeffs);
    for (nu, count) in factors {
        phi = phi.add(&phi_tail(nu, order).scaled(Complex64::new(*count as f64, 0.0)));
    }
    moments_from_phi_tail(&phi, order)
}

/// Reconstruct moments from a Voiculescu-transform tail by reverting
/// F^{-1} = z + φ in reciprocal coordinates.
pub fn moments_from_phi_tail(phi: &TailSeries, order: usize) -> Vec<f64> {
    let work = order + 2;
    // g(w) = 1/F^{-1}(1/w) = w/(1 + wΦ(w)) with Φ(w) = Σ φ_j w^j.
    let phi_s = Series::from_coeffs((0..=work).map(|j| phi.coeff(j)).collect());
    let mut den_coeffs = phi_s.shift_up().coeffs().to_vec();
    den_coeffs[0] += Complex64::new(1.0, 0.0);
    let den = Series::from_coeffs(den_coeffs);
    let g = crate::series::s_div(&Series::identity(work), &den).expect("unit constant term");
    let f = crate::series::s_revert(&g).expect("g'(0) = 1");
    // f(w) = 1/F(1/w) = G(1/w) = Σ m_j w^{j+1}.
    (0..=order).map(|j| f.coeff(j + 1).re).collect()
}

// ───────────────────────── boolean additive (exact) ─────────────────────────

/// Real polynomial with ascending coefficients.
#[derive(Debug, Clone)]
struct Poly(Vec<f64>);

impl Poly {
    fn constant(c: f64) -> Poly {
        Poly(vec![c])
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn deriv(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn add_scaled(&self, other: &Poly, s: f64) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0.get(i).copied().unwrap_or(0.0) + s * other.0.get(i).copied().unwrap_or(0.0);
        }
        Poly(out)
    }

    fn trim(mut self) -> Poly {
        let scale = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        while self.0.len() > 1 && self.0.last().unwrap().abs() <= 1e-12 * scale {
            self.0.pop();
        }
        Poly(self.0)
    }
}

/// Numerator and denominator of G_ν for an atomic measure: G = num/den with
/// den = Π(z - x_j), num = Σ_j w_j Π_{i≠j}(z - x_i).
fn cauchy_rational(nu: &LineMeasure) -> (Poly, Poly) {
    let atoms = nu.atoms();
    let mut den = Poly::constant(1.0);
    for &(x, _) in atoms {
        den = den.mul(&Poly(vec![-x, 1.0]));
    }
    let mut num = Poly::constant(0.0);
    for (j, &(_, w)) in atoms.iter().enumerate() {
        let mut term = Poly::constant(w);
        for (i, &(x, _)) in atoms.iter().enumerate() {
            if i != j {
                term = term.mul(&Poly(vec![-x, 1.0]));
            }
        }
        num = num.add_scaled(&term, 1.0);
    }
    (num, den)
}

/// Zeros of G_ν (the poles of E_ν): one in each open interval between
/// consecutive atoms, found by bisection of the strictly decreasing G.
fn cauchy_zeros(nu: &LineMeasure) -> Vec<f64> {
    let atoms = nu.atoms();
    let g = |x: f64| -> f64 { atoms.iter().map(|&(p, w)| w / (x - p)).sum() };
    let mut zeros = Vec::new();
    for win in atoms.windows(2) {
        let (mut lo, mut hi) = (win[0].0, win[1].0);
        // G → +∞ at the left atom, -∞ at the right one.
        let width = hi - lo;
        let mut dl = width * 0.25;
        while g(lo + dl) <= 0.0 {
            dl *= 0.5;
        }
        let mut dr = width * 0.25;
        while g(hi - dr) >= 0.0 {
            dr *= 0.5;
        }
        lo += dl;
        hi -= dr;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    zeros
}

/// Boolean additive convolution on ℝ, exact atomic output.
///
/// F_out = z - c - Σ count_k·E_k is strictly increasing between its real
/// poles (the zeros of the factor Cauchy transforms) and sweeps ℝ on every
/// interval, so each root is isolated by monotone bisection and certified
/// against the polynomial numerator.
pub fn booladd_r(factors: &[(LineMeasure, u64)], c: f64) -> Result<LineMeasure, ConvolveError> {
    assert!(!factors.is_empty());
    // Rational form: F_out = P/Q with Q = Π num_k.
    let rats: Vec<(Poly, Poly)> = factors.iter().map(|(nu, _)| cauchy_rational(nu)).collect();
    let mut q = Poly::constant(1.0);
    for (num, _) in &rats {
        q = q.mul(num);
    }
    let mut p = Poly(vec![-c, 1.0]).mul(&q);
    for (k, ((num, den), (_, count))) in rats.iter().zip(factors.iter()).enumerate() {
        // E_k = (z·num_k - den_k)/num_k.
        let e_num = Poly(vec![0.0, 1.0]).mul(num).add_scaled(den, -1.0).trim();
        let mut cof = Poly::constant(1.0);
        for (l, (numl, _)) in rats.iter().enumerate() {
            if l != k {
                cof = cof.mul(numl);
            }
        }
        p = p.add_scaled(&e_num.mul(&cof), -(*count as f64));
    }
    let p = p.trim();
    let q = q.trim();

    // Pole set of F_out: union of the factor Cauchy-transform zeros.
    let mut poles: Vec<f64> = factors.iter().flat_map(|(nu, _)| cauchy_zeros(nu)).collect();
    poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    poles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let f_out = |x: f64| -> f64 {
        let mut acc = x - c;
        for ((nu, count), _) in factors.iter().zip(rats.iter()) {
            let g: f64 = nu.atoms().iter().map(|&(pos, w)| w / (x - pos)).sum();
            let e = x - 1.0 / g;
            acc -= (*count as f64) * e;
        }
        acc
    };

    let span = factors
        .iter()
        .flat_map(|(nu, _)| nu.atoms().iter().map(|&(x, _)| x.abs()))
        .fold(1.0f64, f64::max)
        + c.abs()
        + 1.0;

    let mut roots = Vec::with_capacity(poles.len() + 1);
    let bisect = |mut lo: f64, mut hi: f64| -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f_out(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if poles.is_empty() {
        // F_out = z - c - Σ count·a_k: expand a bracket around the origin.
        let mut r = span;
        while f_out(-r) >= 0.0 || f_out(r) <= 0.0 {
            r *= 2.0;
        }
        roots.push(bisect(-r, r));
    } else {
        // Leftmost interval: F → -∞ at -∞ and +∞ just left of the pole.
        let first = poles[0];
        let mut lo = first - span;
        while f_out(lo) >= 0.0 {
            lo -= span;
        }
        let mut hi_off = span.min(1.0);
        while f_out(first - hi_off) <= 0.0 {
            hi_off *= 0.5;
        }
        roots.push(bisect(lo, first - hi_off));
        // Interior intervals.
        for win in poles.windows(2) {
            let (a, b) = (win[0], win[1]);
            let width = b - a;
            let mut dl = width * 0.25;
            while f_out(a + dl) >= 0.0 {
                dl *= 0.5;
            }
            let mut dr = width * 0.25;
            while f_out(b - dr) <= 0.0 {
                dr *= 0.5;
            }
            roots.push(bisect(a + dl, b - dr));
        }
        // Rightmost interval.
        let last = *poles.last().unwrap();
        let mut lo_off = span.min(1.0);
        while f_out(last + lo_off) >= 0.0 {
            lo_off *= 0.5;
        }
        let mut hi = last + span;
        while f_out(hi) <= 0.0 {
            hi += span;
        }
        roots.push(bisect(last + lo_off, hi));
    }

    // Newton polish against the polynomial numerator, then certify.
    let p_deriv = p.deriv();
    let coeff_scale = p.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut atoms = Vec::with_capacity(roots.len());
    for &r0 in &roots {
        let mut x = r0;
        for _ in 0..3 {
            let d = p_deriv.eval(x);
            if d.abs() > 1e-300 {
                x -= p.eval(x) / d;
            }
        }
        let scale = coeff_scale * x.abs().max(1.0).powi(p.degree() as i32);
        if p.eval(x).abs() > 1e-10 * scale {
            return Err(ConvolveError::RootFinding(format!(
                "residual {:e} at root {x}",
                p.eval(x).abs()
            )));
        }
        let w = q.eval(x) / p_deriv.eval(x);
        atoms.push((x, w));
    }

    let wsum: f64 = atoms.iter().map(|&(_, w)| w).sum();
    if (wsum - 1.0).abs() > 1e-9 || atoms.iter().any(|&(_, w)| w <= 0.0) {
        return Err(ConvolveError::RootFinding(format!(
            "residue weights sum to {wsum}"
        )));
    }
    for a in atoms.iter_mut() {
        a.1 /= wsum;
    }
    Ok(LineMeasure::new(atoms)?)
}

// ─────────────────────────── classical (exact) ───────────────────────────

fn conv_atoms(a: &[(f64, f64)], b: &[(f64, f64)], cap: usize, merge_tol: f64) -> Result<Vec<(f64, f64)>, ConvolveError> {
    if a.len().saturating_mul(b.len()) > cap {
        return Err(ConvolveError::AtomExplosion {
            count: a.len() * b.len(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(x, wx) in a {
        for &(y, wy) in b {
            out.push((x + y, wx * wy));
        }
    }
    out.sort_by(|u, v| u.0.partial_cmp(&v.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(out.len());
    for (x, w) in out {
        match merged.last_mut() {
            Some(last) if (x - last.0).abs() <= merge_tol => last.1 += w,
            _ => merged.push((x, w)),
        }
    }
    Ok(merged)
}

fn conv_power(base: &[(f64, f64)], n: u64, cap: usize, merge_tol: f64) -> Result<Vec<(f64, f64)>, ConvolveError> {
    let mut result = vec![(0.0, 1.0)];
    let mut sq = base.to_vec();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = conv_atoms(&result, &sq, cap, merge_tol)?;
        }
        e >>= 1;
        if e > 0 {
            sq = conv_atoms(&sq, &sq, cap, merge_tol)?;
        }
    }
    Ok(result)
}

/// Classical multiplicative convolution on 𝕋, exact atomic output via
/// pairwise angle sums.
pub fn classmul_t(
    factors: &[(CircleMeasure, u64)],
    lambda: Complex64,
    cap: usize,
) -> Result<CircleMeasure, ConvolveError> {
    let mut acc = vec![(lambda.arg(), 1.0)];
    for (mu, count) in factors {
        let atoms: Vec<(f64, f64)> = mu.atoms().to_vec();
        let pw = conv_power(&atoms, *count, cap, 1e-10)?;
        acc = conv_atoms(&acc, &pw, cap, 1e-10)?;
    }
    let canon: Vec<(f64, f64)> = acc.into_iter().map(|(t, w)| (canonical_angle(t), w)).collect();
    Ok(CircleMeasure::atomic(canon)?)
}

/// Classical multiplicative convolution in moment form:
/// m_p = λ^p Π m_p(μ_k)^{count_k}. Never errors.
pub fn classmul_moments(factors: &[(CircleMeasure, u64)], lambda: Complex64, order: usize) -> MomentListT {
    MomentListT::from_fn(order, |p| {
        if p == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut acc = lambda.powi(p as i32);
        for (mu, count) in factors {
            acc *= complex_powu(mu.fourier(p as i64), *count);
        }
        acc
    })
}

/// z^n for nonnegative integer n by binary exponentiation.
pub fn complex_powu(z: Complex64, n: u64) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    result
}

/// Classical additive convolution on ℝ, exact atomic output.
pub fn classadd_r(factors: &[(LineMeasure, u64)], c: f64, cap: usize) -> Result<LineMeasure, ConvolveError> {
    let mut acc = vec![(c, 1.0)];
    for (nu, count) in factors {
        let pw = conv_power(nu.atoms(), *count, cap, 1e-10)?;
        acc = conv_atoms(&acc, &pw, cap, 1e-10)?;
    }
    Ok(LineMeasure::new(acc)?)
}

/// Characteristic function Σ_j w_j e^{itx_j}.
pub fn char_fn(nu: &LineMeasure, t: f64) -> Complex64 {
    nu.atoms()
        .iter()
        .map(|&(x, w)| Complex64::from_polar(w, t * x))
        .sum()
}
