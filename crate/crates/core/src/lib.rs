//! Lamé spheroconal harmonics, asymmetric-rotor spectra and their ladder
//! operators as exact polynomial algebra.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! name the common `f64` instantiations.

pub mod asymmetry;
pub mod elliptic;
pub mod error;
pub mod harmonics;
pub mod ladder;
pub mod lame;
pub mod linalg;
pub mod oracle;
pub mod polyalg;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type AsymmetryConfigF64 = asymmetry::AsymmetryConfig<f64>;
pub type AsymmetryConfigF32 = asymmetry::AsymmetryConfig<f32>;
pub type SnPolyF64 = polyalg::SnPoly<f64>;
pub type BiSnPolyF64 = polyalg::BiSnPoly<f64>;
pub type LamePolynomialF64 = lame::LamePolynomial<f64>;
pub type LamePolynomialF32 = lame::LamePolynomial<f32>;
pub type HarmonicF64 = harmonics::SpheroconalHarmonic<f64>;
pub type HarmonicF32 = harmonics::SpheroconalHarmonic<f32>;
pub type MultipletF64 = harmonics::Multiplet<f64>;
pub type LadderSetF64 = ladder::LadderSet<f64>;
pub type LadderDecompositionF64 = ladder::LadderDecomposition<f64>;
