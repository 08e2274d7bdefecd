//! Parameter pairs (γ, σ) of infinitely divisible laws and evaluators for
//! the associated transforms: B and Σ on the disk, E and φ on the half
//! plane, Fourier coefficients on 𝕋 and characteristic functions on ℝ.

use crate::measures::{CirclePositive, LinePositive};
use crate::transforms::TailSeries;
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for the unit-modulus check on γ.
pub const GAMMA_MOD_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum InfDivError {
    #[error("|gamma| = {0} is not 1 within tolerance")]
    GammaModulus(f64),
}

/// Parameters (γ, σ) of an infinitely divisible law on 𝕋: γ a unimodular
/// constant, σ a finite positive Borel measure (here finitely atomic).
#[derive(Debug, Clone)]
pub struct InfDivParamsT {
    pub gamma: Complex64,
    pub sigma: CirclePositive,
}

impl InfDivParamsT {
    pub fn new(gamma: Complex64, sigma: CirclePositive) -> Result<Self, InfDivError> {
        let n = gamma.norm();
        if (n - 1.0).abs() > GAMMA_MOD_TOL {
            return Err(InfDivError::GammaModulus(n));
        }
        Ok(InfDivParamsT { gamma, sigma })
    }

    /// ∫ (1+ζz)/(1-ζz) dσ(ζ) for |z| < 1.
    fn herglotz_integral(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.sigma
            .atoms()
            .iter()
            .map(|&(theta, s)| {
                let zeta = Complex64::from_polar(1.0, theta);
                s * (one + zeta * z) / (one - zeta * z)
            })
            .sum()
    }

    /// η-transform of the boolean ⊎×-infinitely divisible law:
    /// B(z) = γ·exp(-∫(1+ζz)/(1-ζz)dσ).
    pub fn b_eval(&self, z: Complex64) -> Complex64 {
        self.gamma * (-self.herglotz_integral(z)).exp()
    }

    /// Σ-transform of the free ⊠-infinitely divisible law with these
    /// parameters: Σ(z) = γ·exp(+∫(1+ζz)/(1-ζz)dσ).
    pub fn sigma_eval(&self, z: Complex64) -> Complex64 {
        self.gamma * self.herglotz_integral(z).exp()
    }

    /// Fourier coefficient of the classical *-infinitely divisible law:
    /// ν̂(p) = γ^p·exp(∫ (ζ^p - 1 - ip·Imζ)/(1 - Reζ) dσ), the integrand
    /// taking its limit value -p² at ζ = 1.
    pub fn fourier_classical(&self, p: i64) -> Complex64 {
        let accum: Complex64 = self
            .sigma
            .atoms()
            .iter()
            .map(|&(theta, s)| {
                let zeta = Complex64::from_polar(1.0, theta);
                let denom = 1.0 - zeta.re;
                let g = if denom < 1e-14 {
                    Complex64::new(-((p * p) as f64), 0.0)
                } else {
                    (zeta.powi(p as i32) - 1.0 - Complex64::new(0.0, p as f64 * zeta.im)) / denom
                };
                s * g
            })
            .sum();
        self.gamma.powi(p as i32) * accum.exp()
    }
}

/// Parameters (γ, σ) of an infinitely divisible law on ℝ: γ real, σ a
/// finite positive Borel measure (here finitely atomic).
#[derive(Debug, Clone)]
pub struct InfDivParamsR {
    pub gamma: f64,
    pub sigma: LinePositive,
}

impl InfDivParamsR {
    pub fn new(gamma: f64, sigma: LinePositive) -> Self {
        InfDivParamsR { gamma, sigma }
    }

    /// Nevanlinna form shared by the boolean E-transform and the free
    /// Voiculescu transform: γ + ∫ (1+tz)/(z-t) dσ(t), Im z > 0.
    pub fn e_eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.gamma, 0.0);
        for &(t, s) in self.sigma.atoms() {
            acc += s * (1.0 + t * z) / (z - t);
        }
        acc
    }

    /// Tail expansion of `e_eval` at infinity, exact in closed form:
    /// e_0 = γ + Σ s_j t_j and e_m = Σ s_j t_j^{m-1}(1 + t_j²) for m ≥ 1.
    pub fn e_tail_id(&self, order: usize) -> TailSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(self.gamma, 0.0);
        for &(t, s) in self.sigma.atoms() {
            coeffs[0] += Complex64::new(s * t, 0.0);
            let mut pw = 1.0; // t^{m-1}, starting at m = 1 with 0^0 = 1
            for c in coeffs.iter_mut().skip(1) {
                *c += Complex64::new(s * pw * (1.0 + t * t), 0.0);
                pw *= t;
            }
        }
        TailSeries::from_coeffs(coeffs)
    }

    /// Characteristic function of the classical *-infinitely divisible law
    /// (Lévy–Hinčin form): exp[iγt + ∫ (e^{itx} - 1 - itx/(1+x²))·(1+x²)/x² dσ],
    /// the integrand taking its limit value -t²/2 at x = 0.
    pub fn charfn_classical(&self, t: f64) -> Complex64 {
        let mut exponent = Complex64::new(0.0, self.gamma * t);
        for &(x, s) in self.sigma.atoms() {
            let term = if x.abs() < 1e-14 {
                Complex64::new(-0.5 * t * t, 0.0)
            } else {
                let e = Complex64::new(0.0, t * x).exp();
                (e - 1.0 - Complex64::new(0.0, t * x / (1.0 + x * x))) * ((1.0 + x * x) / (x * x))
            };
            exponent += s * term;
        }
        exponent.exp()
    }
}

/// Fourier coefficient of the classical normal law on 𝕋 with mean
/// direction a and variance t: exp(iak - tk²/2).
pub fn normal_fourier(a: f64, t: f64, k: i64) -> Complex64 {
    assert!(t > 0.0);
    let kf = k as f64;
    Complex64::from_polar((-0.5 * t * kf * kf).exp(), a * kf)
}

/// Principal n-th root of a unimodular γ: exp(i·arg(γ)/n).
pub fn principal_root(gamma: Complex64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, gamma.arg() / n as f64)
}

/// Boolean/free/classical normal parameters on 𝕋: γ = 1, σ = (t/2)δ_{ζ=1}.
pub fn normal_params_t(t: f64) -> InfDivParamsT {
    InfDivParamsT::new(
        Complex64::new(1.0, 0.0),
        CirclePositive::new(vec![(0.0, 0.5 * t)]),
    )
    .expect("|1| = 1")
}

/// Parameters with an atom of mass t·(1-Reλ) at λ and γ = e^{it·Imλ},
/// the λ-directional analogue of the normal family.
pub fn directional_params_t(t: f64, lambda_angle: f64) -> InfDivParamsT {
    let lam = Complex64::from_polar(1.0, lambda_angle);
    InfDivParamsT::new(
        Complex64::from_polar(1.0, t * lam.im),
        CirclePositive::new(vec![(lambda_angle, t * (1.0 - lam.re))]),
    )
    .expect("unimodular")
}

/// Conjugate the γ parameter, leaving σ unchanged.
pub fn conj_gamma(p: &InfDivParamsT) -> InfDivParamsT {
    InfDivParamsT {
        gamma: p.gamma.conj(),
        sigma: p.sigma.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::LineMeasure;
    use crate::transforms::phi_tail;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_modulus_validated() {
        let r = InfDivParamsT::new(c64(1.0, 0.5), CirclePositive::empty());
        assert!(matches!(r, Err(InfDivError::GammaModulus(_))));
    }

    #[test]
    fn normal_b_at_zero() {
        // B(0) = γ e^{-σ(T)} = e^{-t/2}.
        let p = normal_params_t(1.0);
        assert!((p.b_eval(c64(0.0, 0.0)) - c64((-0.5f64).exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sigma_is_reciprocal_of_b_for_real_gamma() {
        let p = normal_params_t(0.7);
        let z = c64(0.3, -0.2);
        let prod = p.b_eval(z) * p.sigma_eval(z);
        assert!((prod - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn semigroup_in_sigma_mass() {
        // Doubling σ (with γ²) squares B pointwise.
        let p1 = directional_params_t(0.4, 1.1);
        let p2 = directional_params_t(0.8, 1.1);
        let z = c64(-0.25, 0.4);
        assert!((p1.b_eval(z) * p1.b_eval(z) - p2.b_eval(z)).norm() < 1e-13);
    }

    #[test]
    fn classical_normal_fourier() {
        // ν̂(p) = exp(-p²t/2); at t = 1, p = 2 this is e^{-2} ≈ 0.135335.
        let p = normal_params_t(1.0);
        let v = p.fourier_classical(2);
        assert!((v - c64((-2.0f64).exp(), 0.0)).norm() < 1e-14);
        assert!((v.re - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn classical_directional_fourier() {
        // For σ = t(1-Reλ)δ_λ, γ = e^{itImλ}:
        // ν̂(1) = e^{itImλ}·exp(t(λ - 1 - iImλ)) = exp(t(λ - 1)).
        let t = 1.0;
        let ang = std::f64::consts::FRAC_PI_2; // λ = i
        let p = directional_params_t(t, ang);
        let expect = (t * (Complex64::from_polar(1.0, ang) - 1.0)).exp(); // e^{i}·e^{-1}
        assert!((p.fourier_classical(1) - expect).norm() < 1e-13);
    }

    #[test]
    fn levy_hincin_gaussian_atom() {
        // σ = s·δ_0 gives the Gaussian factor exp(-st²/2).
        let p = InfDivParamsR::new(0.25, LinePositive::new(vec![(0.0, 0.5)]));
        let t = 1.3;
        let expect = (Complex64::new(0.0, 0.25 * t) + c64(-0.25 * t * t, 0.0)).exp();
        assert!((p.charfn_classical(t) - expect).norm() < 1e-14);
    }

    #[test]
    fn levy_hincin_poisson_atom() {
        // γ = s·x/(1+x²) with σ = s·x²/(1+x²)·δ_x gives the Poisson-type
        // factor exp(s(e^{itx} - 1)).
        let (x, s) = (2.0, 0.6);
        let p = InfDivParamsR::new(
            s * x / (1.0 + x * x),
            LinePositive::new(vec![(x, s * x * x / (1.0 + x * x))]),
        );
        let t = 0.9;
        let expect = (s * (Complex64::new(0.0, t * x).exp() - 1.0)).exp();
        assert!((p.charfn_classical(t) - expect).norm() < 1e-13);
    }

    #[test]
    fn e_tail_closed_form() {
        // γ = 1/2, σ = (1/2)δ_1: E(z) = z/(z-1), tail 1 + w + w² + ...
        let p = InfDivParamsR::new(0.5, LinePositive::new(vec![(1.0, 0.5)]));
        let tail = p.e_tail_id(5);
        for j in 0..=5 {
            assert!((tail.coeff(j) - c64(1.0, 0.0)).norm() < 1e-14, "j={j}");
        }
        // Pointwise agreement with e_eval.
        let z = c64(0.2, 4.0);
        let w = c64(1.0, 0.0) / z;
        let approx: Complex64 = (0..=5).map(|j| tail.coeff(j) * w.powi(j as i32)).sum();
        assert!((approx - p.e_eval(z)).norm() < 2e-3);
    }

    #[test]
    fn e_tail_matches_phi_of_point_mass_mixture() {
        // φ of δ_a is a·z/(z-a) + ... for a single atom with E = φ the
        // identity holds for point masses: φ_{δ_a}(z) = a (γ = a, σ = 0).
        let p = InfDivParamsR::new(0.7, LinePositive::empty());
        let tail = p.e_tail_id(4);
        let oracle = phi_tail(&LineMeasure::point_mass(0.7), 4);
        for j in 0..=4 {
            assert!((tail.coeff(j) - oracle.coeff(j)).norm() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn normal_fourier_values() {
        assert!((normal_fourier(0.0, 1.0, 1) - c64((-0.5f64).exp(), 0.0)).norm() < 1e-15);
        assert!((normal_fourier(0.3, 2.0, 0) - c64(1.0, 0.0)).norm() == 0.0);
        assert!((normal_fourier(0.0, 1.0, 1).re - 0.606531).abs() < 1e-6);
    }

    #[test]
    fn principal_root_of_rotation() {
        let g = Complex64::from_polar(1.0, 0.9);
        let r = principal_root(g, 3);
        assert!((r.powi(3) - g).norm() < 1e-14);
        assert!((r.arg() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn conj_gamma_flips_argument() {
        let p = directional_params_t(1.0, 1.0);
        let q = conj_gamma(&p);
        assert!((q.gamma - p.gamma.conj()).norm() == 0.0);
        assert_eq!(q.sigma.atoms(), p.sigma.atoms());
    }
}
