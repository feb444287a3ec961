use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{Field1D, Field2D, KinkLines, XGrid, XYGrid};
use crate::scalar::Real;
use crate::scattering::{SpectralSettings, WavePacket};
use crate::units::{Side, SpinConfig, Statistics, ValidatedScenario};

/// Largest initial overlap `|<Phi_1|Phi_2>|` for which the `1/sqrt(2)`
/// normalization of the (anti)symmetrized state is accepted.
pub const MAX_INITIAL_OVERLAP: f64 = 1e-6;

/// Spin-summed two-particle density from the direct and exchanged products
/// `a12 = Phi_1(x1) Phi_2(x2)` and `a21 = Phi_1(x2) Phi_2(x1)`.
///
/// For identical particles the exchange term is weighted by the spin overlap
/// `|c|^2`; at `|c| = 1` this is exactly `|Psi_+-|^2`.
#[inline]
pub fn pair_density<T: Real>(stat: Statistics, overlap: T, a12: Complex<T>, a21: Complex<T>) -> T {
    // written as a mix of nonnegative terms so rounding cannot go below zero
    let half = T::lit(0.5);
    let symmetric = match stat {
        Statistics::Distinguishable => return a12.norm_sqr(),
        Statistics::Boson => (a12 + a21).norm_sqr(),
        Statistics::Fermion => (a12 - a21).norm_sqr(),
    };
    let direct = (a12.norm_sqr() + a21.norm_sqr()) * half;
    (T::one() - overlap) * direct + overlap * symmetric * half
}

/// Two packets incident from opposite sides plus their exchange statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleState<T> {
    pub left: WavePacket<T>,
    pub right: WavePacket<T>,
    pub statistics: Statistics,
    pub spin: SpinConfig<T>,
}

impl<T: Real> TwoParticleState<T> {
    pub fn new(
        left: WavePacket<T>,
        right: WavePacket<T>,
        statistics: Statistics,
        spin: SpinConfig<T>,
    ) -> Result<Self> {
        if left.incidence() != Side::Left || right.incidence() != Side::Right {
            return Err(Error::InvalidArgument(
                "first packet must come from the left, second from the right".into(),
            ));
        }
        if left.well() != right.well() {
            return Err(Error::InvalidArgument("packets see different wells".into()));
        }
        let state = Self { left, right, statistics, spin };
        let overlap = state.initial_overlap();
        if overlap > T::guard(MAX_INITIAL_OVERLAP) {
            return Err(Error::InvalidArgument(format!(
                "initial packet overlap {overlap:e} too large for the symmetrized normalization"
            )));
        }
        Ok(state)
    }

    pub fn from_scenario(
        scenario: &ValidatedScenario<T>,
        statistics: Statistics,
        settings: SpectralSettings<T>,
    ) -> Result<Self> {
        if scenario.packets.len() != 2 {
            return Err(Error::InvalidArgument("two-particle run needs two packets".into()));
        }
        let mk = |i: usize| {
            WavePacket::from_config(scenario.mode, scenario.packets[i], scenario.well)
                .with_settings(settings)
        };
        Self::new(mk(0), mk(1), statistics, scenario.spin)
    }

    pub fn with_statistics(mut self, statistics: Statistics) -> Self {
        self.statistics = statistics;
        self
    }

    /// `|<Phi_1|Phi_2>|` of the initial Gaussians,
    /// `exp(-(S1-S2)^2/2 - (K01-K02)^2/8)`.
    pub fn initial_overlap(&self) -> T {
        let (p1, p2) = (self.left.config(), self.right.config());
        let ds = p1.s0 - p2.s0;
        let dk = p1.k0 - p2.k0;
        (-(ds * ds) / T::lit(2.0) - dk * dk / T::lit(8.0)).exp()
    }

    /// Pure-state amplitude for identical spins:
    /// `(Phi_1(x1)Phi_2(x2) +- Phi_1(x2)Phi_2(x1)) / sqrt(2)`, or the plain
    /// product for distinguishable particles.
    pub fn amplitude(&self, x1: T, x2: T, tau: T) -> Complex<T> {
        let a12 = self.left.amplitude(x1, tau) * self.right.amplitude(x2, tau);
        if self.statistics == Statistics::Distinguishable {
            return a12;
        }
        let a21 = self.left.amplitude(x2, tau) * self.right.amplitude(x1, tau);
        let s = if self.statistics == Statistics::Boson { a12 + a21 } else { a12 - a21 };
        s / T::lit(2.0).sqrt()
    }

    /// Both packets sampled on `axis` at `tau`, with the domain check.
    pub fn fields(&self, axis: &XGrid<T>, tau: T) -> Result<PairFields<T>> {
        Ok(PairFields {
            phi1: self.left.evolve(axis, tau)?,
            phi2: self.right.evolve(axis, tau)?,
            at_origin: (self.left.amplitude(T::zero(), tau), self.right.amplitude(T::zero(), tau)),
            kink_jump: self.left.kink_jump(),
        })
    }

    /// `|Psi(x1, x2, tau)|^2` (spin-summed) for this state's statistics.
    pub fn joint_density(&self, grid: &XYGrid<T>, tau: T) -> Result<Field2D<T>> {
        Ok(self.fields(&grid.axis, tau)?.density(self.statistics, &self.spin))
    }
}

/// `Phi_1` and `Phi_2` sampled on a common axis at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFields<T> {
    pub phi1: Field1D<Complex<T>, T>,
    pub phi2: Field1D<Complex<T>, T>,
    /// `(Phi_1(0), Phi_2(0))`
    pub at_origin: (Complex<T>, Complex<T>),
    /// Jump of the normal derivative of any pair density across an axis,
    /// per unit density on that axis.
    pub kink_jump: T,
}

impl<T: Real> PairFields<T> {
    pub fn grid(&self) -> XYGrid<T> {
        XYGrid::square(self.phi1.grid)
    }

    pub fn density(&self, stat: Statistics, spin: &SpinConfig<T>) -> Field2D<T> {
        let w = spin.overlap_weight();
        let (p1, p2) = (&self.phi1.values, &self.phi2.values);
        let (o1, o2) = self.at_origin;
        let on_x1_zero = p1.iter().zip(p2).map(|(&a, &b)| pair_density(stat, w, o1 * b, a * o2)).collect();
        let on_x2_zero = p1.iter().zip(p2).map(|(&a, &b)| pair_density(stat, w, a * o2, o1 * b)).collect();
        Field2D::from_fn(self.grid(), |i, j| pair_density(stat, w, p1[i] * p2[j], p1[j] * p2[i]))
            .with_kink(KinkLines { jump: self.kink_jump, on_x1_zero, on_x2_zero })
            .expect("line lengths match the axis")
    }

    /// Densities for all three statistics.
    pub fn densities(&self, spin: &SpinConfig<T>) -> Vec<(Statistics, Field2D<T>)> {
        Statistics::ALL.par_iter().map(|&s| (s, self.density(s, spin))).collect()
    }
}
