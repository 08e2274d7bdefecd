//! Numerical toolkit for boolean, free and classical convolutions of
//! finitely atomic probability measures on the unit circle and the real
//! line, together with the infinitesimal triangular-array machinery used
//! to check weak convergence to infinitely divisible limit laws.
//!
//! The computational workhorses are truncated complex power series (for
//! the disk transforms ψ, B, Σ), tail series at infinity (for the half
//! plane transforms G, F, E, φ), and exact rational-function arithmetic
//! for the boolean additive convolution.

pub mod arrays;
pub mod convolve;
pub mod experiments;
pub mod infdiv;
pub mod measures;
pub mod series;
pub mod transforms;

pub use num_complex::Complex64;
