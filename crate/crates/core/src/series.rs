//! Truncated complex power-series arithmetic.
//!
//! A [`Series`] stores coefficients `c_0..c_P` of a polynomial truncation
//! at a fixed inclusive order `P`. Every binary operation truncates its
//! result at the minimum of the operand orders; nothing is ever extended
//! silently.

use num_complex::Complex64;
use thiserror::Error;

/// Magnitude below which a leading coefficient counts as zero.
pub const LEADING_EPS: f64 = 1e-12;

/// Default truncation order used throughout the crate.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("constant term is zero (|c0| < {0:e})")]
    ZeroConstantTerm(f64),
    #[error("inner series has nonzero constant term")]
    NonzeroInnerConstant,
    #[error("series has no compositional inverse (|c1| < {0:e})")]
    NotInvertible(f64),
}

/// A complex power series truncated at order `P` (inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<Complex64>,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Explicit re-truncation or zero-padding to the given order.
    pub fn resized(&self, order: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Series { coeffs }
    }

    /// Multiplication by `z` (coefficients shift up, top coefficient drops).
    pub fn shift_up(&self) -> Series {
        let p = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
        for j in 1..=p {
            coeffs[j] = self.coeffs[j - 1];
        }
        Series { coeffs }
    }

    /// Division by `z`, assuming the constant term vanishes. The result has
    /// order `P - 1`.
    pub fn shift_down(&self) -> Series {
        debug_assert!(self.coeffs[0].norm() <= LEADING_EPS);
        Series {
            coeffs: self.coeffs[1..].to_vec(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn s_add(a: &Series, b: &Series) -> Series {
    let p = a.order().min(b.order());
    let coeffs = (0..=p).map(|j| a.coeff(j) + b.coeff(j)).collect();
    Series { coeffs }
}

pub fn s_sub(a: &Series, b: &Series) -> Series {
    let p = a.order().min(b.order());
    let coeffs = (0..=p).map(|j| a.coeff(j) - b.coeff(j)).collect();
    Series { coeffs }
}

pub fn s_scale(a: &Series, c: Complex64) -> Series {
    Series {
        coeffs: a.coeffs.iter().map(|&x| x * c).collect(),
    }
}

pub fn s_mul(a: &Series, b: &Series) -> Series {
    let p = a.order().min(b.order());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
    for j in 0..=p {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=j {
            acc += a.coeff(k) * b.coeff(j - k);
        }
        coeffs[j] = acc;
    }
    Series { coeffs }
}

/// Quotient `q` with `s_mul(q, b) = a` through the truncation order.
pub fn s_div(a: &Series, b: &Series) -> Result<Series, SeriesError> {
    if b.coeff(0).norm() < LEADING_EPS {
        return Err(SeriesError::ZeroConstantTerm(LEADING_EPS));
    }
    let p = a.order().min(b.order());
    let b0 = b.coeff(0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
    for j in 0..=p {
        let mut acc = a.coeff(j);
        for k in 1..=j {
            acc -= b.coeff(k) * coeffs[j - k];
        }
        coeffs[j] = acc / b0;
    }
    Ok(Series { coeffs })
}

/// Composition `outer(inner(z))`; requires `inner(0) = 0`.
pub fn s_compose(outer: &Series, inner: &Series) -> Result<Series, SeriesError> {
    if inner.coeff(0).norm() > LEADING_EPS {
        return Err(SeriesError::NonzeroInnerConstant);
    }
    let p = outer.order().min(inner.order());
    let mut inner_clean = inner.resized(p);
    inner_clean.coeffs[0] = Complex64::new(0.0, 0.0);
    // Horner evaluation in the series ring.
    let mut acc = Series::constant(outer.coeff(p), p);
    for j in (0..p).rev() {
        acc = s_mul(&acc, &inner_clean);
        acc.coeffs[0] += outer.coeff(j);
    }
    Ok(acc)
}

/// Compositional inverse: `r` with `a(r(z)) = z` through the order.
pub fn s_revert(a: &Series) -> Result<Series, SeriesError> {
    if a.coeff(0).norm() > LEADING_EPS {
        return Err(SeriesError::NonzeroInnerConstant);
    }
    if a.coeff(1).norm() < LEADING_EPS {
        return Err(SeriesError::NotInvertible(LEADING_EPS));
    }
    let p = a.order();
    let a1 = a.coeff(1);
    let mut r = Series::zero(p);
    if p >= 1 {
        r.coeffs[1] = Complex64::new(1.0, 0.0) / a1;
    }
    // Solve coefficient by coefficient: the z^m coefficient of a∘r is
    // linear in r_m with slope a_1.
    for m in 2..=p {
        let comp = s_compose(a, &r).expect("inner constant term is zero");
        r.coeffs[m] = -comp.coeff(m) / a1;
    }
    Ok(r)
}

pub fn s_exp(a: &Series) -> Series {
    let p = a.order();
    let mut b = Series::zero(p);
    b.coeffs[0] = a.coeff(0).exp();
    for n in 1..=p {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            acc += (k as f64) * a.coeff(k) * b.coeff(n - k);
        }
        b.coeffs[n] = acc / (n as f64);
    }
    b
}

/// Principal-branch logarithm at the constant term.
pub fn s_log(a: &Series) -> Result<Series, SeriesError> {
    let a0 = a.coeff(0);
    if a0.norm() < LEADING_EPS {
        return Err(SeriesError::ZeroConstantTerm(LEADING_EPS));
    }
    let p = a.order();
    let mut b = Series::zero(p);
    b.coeffs[0] = a0.ln();
    for n in 1..=p {
        // n a_n = Σ_{k=1}^{n} k b_k a_{n-k}
        let mut acc = (n as f64) * a.coeff(n);
        for k in 1..n {
            acc -= (k as f64) * b.coeff(k) * a.coeff(n - k);
        }
        b.coeffs[n] = acc / ((n as f64) * a0);
    }
    Ok(b)
}

/// `a^n` by binary exponentiation in the truncated ring.
pub fn s_powi(a: &Series, n: u64) -> Series {
    let p = a.order();
    let mut result = Series::one(p);
    let mut base = a.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = s_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = s_mul(&base, &base);
        }
    }
    result
}
