//! Analytic transforms of measures: ψ and B on the disk, the Cauchy suite
//! G, F, E on the upper half plane, the multiplicative Σ and the additive
//! Voiculescu transform φ as truncated series.

use crate::measures::{CircleMeasure, LineMeasure, MomentListT};
use crate::series::{s_compose, s_div, s_revert, Series, SeriesError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("argument outside transform domain: {0}")]
    Domain(&'static str),
    #[error("evaluation point within 1e-14 of a pole")]
    PoleProximity,
    #[error("first moment below 1e-8; measure is outside M_T^x")]
    ZeroFirstMoment,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Expansion at infinity f(z) = Σ_j e_j z^{-j}.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSeries {
    coeffs: Vec<Complex64>,
}

impl TailSeries {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty());
        TailSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TailSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
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

    pub fn add(&self, other: &TailSeries) -> TailSeries {
        let p = self.order().min(other.order());
        TailSeries {
            coeffs: (0..=p).map(|j| self.coeff(j) + other.coeff(j)).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> TailSeries {
        TailSeries {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }
}

/// Pointwise ψ_μ and B_μ on the disk. B(0) is the first moment; the
/// removable singularity is special-cased.
pub fn psi_b_eval(mu: &CircleMeasure, z: Complex64) -> Result<(Complex64, Complex64), TransformError> {
    if z.norm() >= 1.0 {
        return Err(TransformError::Domain("psi/B require |z| < 1"));
    }
    if mu.is_haar() {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let psi: Complex64 = mu
        .atoms()
        .iter()
        .map(|&(t, w)| {
            let zeta = Complex64::from_polar(1.0, t);
            w * zeta * z / (Complex64::new(1.0, 0.0) - zeta * z)
        })
        .sum();
    let b = if z.norm() < 1e-300 {
        mu.fourier(1)
    } else {
        psi / (z * (Complex64::new(1.0, 0.0) + psi))
    };
    Ok((psi, b))
}

/// ψ as a series: coefficient of z^p is the p-th Fourier coefficient.
pub fn psi_series(mu: &CircleMeasure, order: usize) -> Series {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    for (p, item) in coeffs.iter_mut().enumerate().skip(1) {
        *item = mu.fourier(p as i64);
    }
    Series::from_coeffs(coeffs)
}

/// B as a series: B = (ψ/z)/(1+ψ).
pub fn b_series(mu: &CircleMeasure, order: usize) -> Series {
    if mu.is_haar() {
        return Series::zero(order);
    }
    let psi = psi_series(mu, order + 1);
    let num = psi.shift_down(); // ψ/z, order P
    let den = {
        let mut d = psi.resized(order);
        let c0 = d.coeff(0) + Complex64::new(1.0, 0.0);
        let mut coeffs = d.coeffs().to_vec();
        coeffs[0] = c0;
        d = Series::from_coeffs(coeffs);
        d
    };
    s_div(&num, &den).expect("1 + ψ has unit constant term")
}

/// Recover circle moments from a B-series via ψ = zB/(1 - zB).
pub fn moments_from_b_series(b: &Series) -> MomentListT {
    let p = b.order();
    let zb = b.shift_up();
    let mut den_coeffs = zb.coeffs().to_vec();
    for c in den_coeffs.iter_mut() {
        *c = -*c;
    }
    den_coeffs[0] += Complex64::new(1.0, 0.0);
    let den = Series::from_coeffs(den_coeffs);
    let psi = s_div(&zb, &den).expect("1 - zB has unit constant term");
    MomentListT::from_fn(p, |j| {
        if j == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            psi.coeff(j)
        }
    })
}

/// Pointwise Cauchy transform suite: G, F = 1/G, E = z - F on ℂ⁺.
pub fn cauchy_suite(nu: &LineMeasure, z: Complex64) -> Result<(Complex64, Complex64, Complex64), TransformError> {
    if z.im <= 0.0 {
        return Err(TransformError::Domain("Cauchy suite requires Im z > 0"));
    }
    for &(x, _) in nu.atoms() {
        if (z - Complex64::new(x, 0.0)).norm() < 1e-14 {
            return Err(TransformError::PoleProximity);
        }
    }
    let g: Complex64 = nu
        .atoms()
        .iter()
        .map(|&(x, w)| Complex64::new(w, 0.0) / (z - Complex64::new(x, 0.0)))
        .sum();
    let f = Complex64::new(1.0, 0.0) / g;
    let e = z - f;
    Ok((g, f, e))
}

fn moment_generating_series(nu: &LineMeasure, order: usize) -> Series {
    // M(w) = Σ_j m_j w^j, the 1/z-expansion of zG(z) in w = 1/z.
    Series::from_coeffs(
        (0..=order)
            .map(|j| Complex64::new(nu.moment(j), 0.0))
            .collect(),
    )
}

/// Expansion of E = z - 1/G at infinity: e_0 = mean, e_1 = variance, ...
pub fn e_tail(nu: &LineMeasure, order: usize) -> TailSeries {
    let m = moment_generating_series(nu, order + 1);
    let inv = s_div(&Series::one(order + 1), &m).expect("m_0 = 1");
    // E(1/w) = (1/w)(1 - 1/M(w)); the z^{-j} coefficient is the w^{j+1}
    // coefficient of 1 - 1/M.
    TailSeries::from_coeffs((0..=order).map(|j| -inv.coeff(j + 1)).collect())
}

/// Voiculescu transform tail: φ(z) = F^{-1}(z) - z = Σ_j φ_j z^{-j}.
pub fn phi_tail(nu: &LineMeasure, order: usize) -> TailSeries {
    let work = order + 2;
    let m = moment_generating_series(nu, work);
    // f(w) = 1/F(1/w) = w·M(w) represents F in reciprocal coordinates.
    let f = m.shift_up();
    let g = s_revert(&f).expect("f'(0) = m_0 = 1");
    // g(w) = w·N(w); φ(z) has z^{-j} coefficient = w^{j+1} coeff of 1/N - 1.
    let n = g.shift_down();
    let inv_n = s_div(&Series::one(n.order()), &n).expect("N(0) = 1");
    TailSeries::from_coeffs((0..=order).map(|j| inv_n.coeff(j + 1)).collect())
}

/// Σ_ν(z) = (1/z) ψ^{-1}(z/(1-z)) as a series at the origin.
pub fn sigma_series(moments: &MomentListT, order: usize) -> Result<Series, TransformError> {
    if moments.m(1).norm() < 1e-8 {
        return Err(TransformError::ZeroFirstMoment);
    }
    let work = order + 1;
    let psi = Series::from_coeffs(
        (0..=work)
            .map(|j| {
                if j == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    moments.m(j as i64)
                }
            })
            .collect(),
    );
    let psi_inv = s_revert(&psi)?;
    let mobius = Series::from_coeffs(
        (0..=work)
            .map(|j| {
                if j == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect(),
    ); // z/(1-z)
    let comp = s_compose(&psi_inv, &mobius)?;
    Ok(comp.shift_down().resized(order))
}

/// Inverse of the Σ pipeline: from a Σ-series back to circle moments.
///
/// ψ^{-1}(u) = (zΣ(z))|_{z = u/(1+u)}, then ψ = revert and the moments are
/// its coefficients.
pub fn moments_from_sigma_series(sigma: &Series, order: usize) -> Result<MomentListT, TransformError> {
    let work = sigma.order();
    let q = sigma.shift_up(); // zΣ(z)
    let mobius = Series::from_coeffs(
        (0..=work)
            .map(|j| {
                if j == 0 {
                    Complex64::new(0.0, 0.0)
                } else if j % 2 == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            })
            .collect(),
    ); // u/(1+u)
    let psi_inv = s_compose(&q, &mobius)?;
    let psi = s_revert(&psi_inv)?;
    Ok(MomentListT::from_fn(order.min(work), |j| {
        if j == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            psi.coeff(j)
        }
    }))
}

/// Moments read off a Cauchy-transform tail: G(z) = Σ_j m_j z^{-(j+1)}.
pub fn moments_from_tail_g(tail: &TailSeries) -> Vec<Complex64> {
    (0..tail.order()).map(|j| tail.coeff(j + 1)).collect()
}

/// Reconstruct the G tail from an E tail: G = 1/(z - E).
pub fn g_tail_from_e_tail(e: &TailSeries, order: usize) -> TailSeries {
    // In w = 1/z: F(1/w) = (1/w)(1 - wΦ(w)) with Φ(w) = Σ e_j w^j, so
    // G(1/w) = w/(1 - wΦ(w)).
    let work = order + 1;
    let phi = Series::from_coeffs((0..=work).map(|j| e.coeff(j)).collect());
    let mut den_coeffs = phi.shift_up().coeffs().to_vec();
    for c in den_coeffs.iter_mut() {
        *c = -*c;
    }
    den_coeffs[0] += Complex64::new(1.0, 0.0);
    let den = Series::from_coeffs(den_coeffs);
    let g = s_div(&Series::identity(work), &den).expect("unit constant term");
    TailSeries::from_coeffs((0..=order).map(|j| g.coeff(j)).collect())
}

/// Fit a series to an analytic function by discrete Fourier sums on the
/// circle of the given radius.
pub fn fit_series(f: impl Fn(Complex64) -> Complex64, radius: f64, n_points: usize, order: usize) -> Series {
    let vals: Vec<Complex64> = (0..n_points)
        .map(|m| {
            let theta = 2.0 * std::f64::consts::PI * (m as f64) / (n_points as f64);
            f(Complex64::from_polar(radius, theta))
        })
        .collect();
    let coeffs = (0..=order)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &v) in vals.iter().enumerate() {
                let theta = 2.0 * std::f64::consts::PI * (m as f64) * (j as f64) / (n_points as f64);
                acc += v * Complex64::from_polar(1.0, -theta);
            }
            acc / (n_points as f64) / radius.powi(j as i32)
        })
        .collect();
    Series::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::dist_moments_t;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn b_of_point_mass_is_constant() {
        let lam = Complex64::from_polar(1.0, 1.1);
        let mu = CircleMeasure::point_mass(1.1);
        for z in [c(0.0, 0.0), c(0.3, -0.2), c(-0.5, 0.5)] {
            let (_, b) = psi_b_eval(&mu, z).unwrap();
            assert!((b - lam).norm() < 1e-12);
        }
    }

    #[test]
    fn b_of_haar_is_zero() {
        let (psi, b) = psi_b_eval(&CircleMeasure::Haar, c(0.4, 0.1)).unwrap();
        assert_eq!(psi, c(0.0, 0.0));
        assert_eq!(b, c(0.0, 0.0));
    }

    #[test]
    fn psi_b_bernoulli_by_hand() {
        // ½(δ_1 + δ_{-1}) at z = 0.5: ψ = 1/3, B = 0.5.
        let mu = CircleMeasure::atomic(vec![(0.0, 0.5), (PI, 0.5)]).unwrap();
        let (psi, b) = psi_b_eval(&mu, c(0.5, 0.0)).unwrap();
        assert!((psi - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((b - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn domain_error_outside_disk() {
        let mu = CircleMeasure::point_mass(0.0);
        assert!(psi_b_eval(&mu, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn series_of_point_mass_at_one() {
        let mu = CircleMeasure::point_mass(0.0);
        let psi = psi_series(&mu, 5);
        for j in 1..=5 {
            assert!((psi.coeff(j) - c(1.0, 0.0)).norm() < 1e-15);
        }
        let b = b_series(&mu, 5);
        assert!((b.coeff(0) - c(1.0, 0.0)).norm() < 1e-12);
        for j in 1..=5 {
            assert!(b.coeff(j).norm() < 1e-12);
        }
    }

    #[test]
    fn series_of_bernoulli() {
        let mu = CircleMeasure::atomic(vec![(0.0, 0.5), (PI, 0.5)]).unwrap();
        let b = b_series(&mu, 6);
        // B(z) = z for this measure.
        assert!(b.coeff(0).norm() < 1e-12);
        assert!((b.coeff(1) - c(1.0, 0.0)).norm() < 1e-12);
        for j in 2..=6 {
            assert!(b.coeff(j).norm() < 1e-12, "coeff {j}");
        }
    }

    #[test]
    fn moments_from_constant_b() {
        let lam = Complex64::from_polar(1.0, 0.8);
        let b = Series::constant(lam, 6);
        let m = moments_from_b_series(&b);
        for p in 1..=6 {
            assert!((m.m(p) - lam.powi(p as i32)).norm() < 1e-12);
        }
    }

    #[test]
    fn moments_from_zero_b_is_haar() {
        let m = moments_from_b_series(&Series::zero(6));
        for p in 1..=6 {
            assert!(m.m(p).norm() < 1e-15);
        }
    }

    #[test]
    fn moments_from_b_z_squared_cube_roots() {
        // B = z² ⇒ ψ = z³/(1-z³): moments 1 at multiples of 3, else 0.
        let b = Series::identity(9);
        let b = crate::series::s_mul(&b, &Series::identity(9));
        let m = moments_from_b_series(&b);
        for p in 1..=9i64 {
            let expect = if p % 3 == 0 { 1.0 } else { 0.0 };
            assert!((m.m(p) - c(expect, 0.0)).norm() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn cauchy_point_mass() {
        let nu = LineMeasure::point_mass(0.7);
        let z = c(0.0, 2.0);
        let (g, _, e) = cauchy_suite(&nu, z).unwrap();
        assert!((g - c(1.0, 0.0) / (z - c(0.7, 0.0))).norm() < 1e-14);
        assert!((e - c(0.7, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_symmetric_bernoulli() {
        let nu = LineMeasure::symmetric_bernoulli(1.0);
        let z = c(0.0, 2.0);
        let (g, _, e) = cauchy_suite(&nu, z).unwrap();
        assert!((g - z / (z * z - c(1.0, 0.0))).norm() < 1e-13);
        assert!((e - c(0.0, -0.5)).norm() < 1e-13);
    }

    #[test]
    fn cauchy_symmetric_formula_on_axis() {
        let s = 0.37;
        let nu = LineMeasure::symmetric_bernoulli(s);
        for y in [1.0, 2.0, 5.0] {
            let (_, _, e) = cauchy_suite(&nu, c(0.0, y)).unwrap();
            // E = z - 1/G = s²/z, purely imaginary on the axis.
            let expect = c(0.0, -s * s / y);
            assert!((e - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn e_tail_point_mass() {
        let t = e_tail(&LineMeasure::point_mass(0.9), 5);
        assert!((t.coeff(0) - c(0.9, 0.0)).norm() < 1e-13);
        for j in 1..=5 {
            assert!(t.coeff(j).norm() < 1e-12);
        }
    }

    #[test]
    fn e_tail_symmetric_bernoulli_exact() {
        // F = z - 1/z exactly, so E = 1/z: coefficients (0, 1, 0, 0, ...).
        let t = e_tail(&LineMeasure::symmetric_bernoulli(1.0), 5);
        assert!(t.coeff(0).norm() < 1e-13);
        assert!((t.coeff(1) - c(1.0, 0.0)).norm() < 1e-13);
        for j in 2..=5 {
            assert!(t.coeff(j).norm() < 1e-12, "coeff {j}");
        }
    }

    #[test]
    fn phi_tail_point_mass() {
        let t = phi_tail(&LineMeasure::point_mass(-0.4), 5);
        assert!((t.coeff(0) - c(-0.4, 0.0)).norm() < 1e-12);
        for j in 1..=5 {
            assert!(t.coeff(j).norm() < 1e-11);
        }
    }

    #[test]
    fn phi_tail_symmetric_bernoulli() {
        // Inverting F = z - 1/z by hand: φ = (0, 1, 0, -1, 0, 2, ...), the
        // expansion of (sqrt(z²+4) - z)/2 - ... ; the first four suffice.
        let t = phi_tail(&LineMeasure::symmetric_bernoulli(1.0), 4);
        assert!(t.coeff(0).norm() < 1e-12);
        assert!((t.coeff(1) - c(1.0, 0.0)).norm() < 1e-11);
        assert!(t.coeff(2).norm() < 1e-11);
        assert!((t.coeff(3) - c(-1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn phi_linearization_on_point_masses() {
        let pa = phi_tail(&LineMeasure::point_mass(0.3), 6);
        let pb = phi_tail(&LineMeasure::point_mass(-1.2), 6);
        let pab = phi_tail(&LineMeasure::point_mass(-0.9), 6);
        let sum = pa.add(&pb);
        for j in 0..=6 {
            assert!((sum.coeff(j) - pab.coeff(j)).norm() < 1e-10, "coeff {j}");
        }
    }

    #[test]
    fn sigma_of_point_mass_is_constant() {
        let lam = Complex64::from_polar(1.0, 0.9);
        let m = CircleMeasure::point_mass(0.9).moments(9);
        let s = sigma_series(&m, 8).unwrap();
        assert!((s.coeff(0) - c(1.0, 0.0) / lam).norm() < 1e-10);
        for j in 1..=8 {
            assert!(s.coeff(j).norm() < 1e-10, "coeff {j}");
        }
    }

    #[test]
    fn sigma_zero_first_moment_errors() {
        let m = CircleMeasure::atomic(vec![(0.0, 0.5), (PI, 0.5)]).unwrap().moments(9);
        assert!(matches!(sigma_series(&m, 8), Err(TransformError::ZeroFirstMoment)));
    }

    #[test]
    fn sigma_pipeline_round_trip() {
        let mu = CircleMeasure::atomic(vec![(0.2, 0.6), (-1.0, 0.4)]).unwrap();
        let m = mu.moments(10);
        let s = sigma_series(&m, 9).unwrap();
        let back = moments_from_sigma_series(&s, 8).unwrap();
        assert!(dist_moments_t(&m, &back, 8) < 1e-9);
    }

    #[test]
    fn tail_g_moments_of_point_mass() {
        let e = e_tail(&LineMeasure::point_mass(0.5), 6);
        let g = g_tail_from_e_tail(&e, 7);
        let m = moments_from_tail_g(&g);
        for (j, mj) in m.iter().enumerate() {
            assert!((mj - c(0.5f64.powi(j as i32), 0.0)).norm() < 1e-11, "moment {j}");
        }
    }

    #[test]
    fn tail_g_moments_of_symmetric_bernoulli() {
        let nu = LineMeasure::symmetric_bernoulli(1.0);
        let g = g_tail_from_e_tail(&e_tail(&nu, 7), 8);
        let m = moments_from_tail_g(&g);
        for (j, mj) in m.iter().enumerate() {
            let expect = if j % 2 == 0 { 1.0 } else { 0.0 };
            assert!((mj - c(expect, 0.0)).norm() < 1e-11, "moment {j}");
        }
    }

    #[test]
    fn fit_series_recovers_rational() {
        let f = |z: Complex64| (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z * c(0.5, 0.0));
        let s = fit_series(f, 0.5, 256, 8);
        // 1 + 1.5z·Σ(0.5z)^j: coefficients 1, 1.5, 0.75, 0.375, ...
        assert!((s.coeff(0) - c(1.0, 0.0)).norm() < 1e-10);
        let mut expect = 1.5;
        for j in 1..=8 {
            assert!((s.coeff(j) - c(expect, 0.0)).norm() < 1e-10, "coeff {j}");
            expect *= 0.5;
        }
    }
}
