//! Wave-packet scattering off a one-dimensional delta well and two-particle
//! Hong-Ou-Mandel interference for bosons, fermions and distinguishable
//! particles.
//!
//! All quantities are dimensionless (see [`units`]). The numerical routines
//! are generic over the scalar type; the `*64` aliases below are what the
//! command-line runner and the test-suite use.

pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod scattering;
pub mod two_particle;
pub mod units;

pub use error::{Error, Result};
pub use quadrature::{Field1D, Field2D, KinkLines, Quadrant, UniformGrid, XGrid, XYGrid};
pub use scalar::Real;
pub use scattering::{
    plane_wave_r, plane_wave_t, BasisAmplitudes, CoefficientFunction, DecomposedPacket,
    SpectralSettings, WavePacket,
};
pub use two_particle::{
    coincidence_probability, quadrant_table, same_side_closed_form, Coincidence, PairFields,
    QuadrantProbabilities, SameSideResult, SeparationDistribution, Source, TwoParticleState,
};
pub use units::{
    validate_scenario, Mode, PacketConfig, Side, SpinConfig, Statistics, UnitSystem,
    ValidatedScenario, ValidationReport, WellConfig,
};

pub type Complex64 = num_complex::Complex<f64>;

pub type Grid64 = UniformGrid<f64>;
pub type WellConfig64 = WellConfig<f64>;
pub type PacketConfig64 = PacketConfig<f64>;
pub type SpinConfig64 = SpinConfig<f64>;
pub type WavePacket64 = WavePacket<f64>;
pub type TwoParticleState64 = TwoParticleState<f64>;
pub type SameSideResult64 = SameSideResult<f64>;
pub type SeparationDistribution64 = SeparationDistribution<f64>;

pub type Grid32 = UniformGrid<f32>;
pub type WavePacket32 = WavePacket<f32>;
pub type TwoParticleState32 = TwoParticleState<f32>;
