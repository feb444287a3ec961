//! Single-particle scattering off the delta well.

mod basis;
mod coefficient;
mod decompose;
mod packet;

pub use basis::{basis_state, plane_wave_r, plane_wave_t, BasisAmplitudes};
pub use coefficient::CoefficientFunction;
pub use decompose::DecomposedPacket;
pub use packet::{
    right_half_integral, SpectralSettings, WavePacket, COMPLETION_MASS, COMPLETION_RADIUS,
    DEFAULT_K_NODES, DEFAULT_K_WINDOW, LEAKAGE_TOL, ZERO_CLIP,
};
