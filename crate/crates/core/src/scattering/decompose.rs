//! Splitting a scattered packet into reflected and transmitted parts.

use num_complex::Complex;
use rayon::prelude::*;

use super::basis::side_of;
use super::packet::{WavePacket, LEAKAGE_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{Field1D, XGrid};
use crate::scalar::Real;
use crate::units::Side;

/// `Phi = i Phi^R + Phi^T` once the incident packet has left the well region.
///
/// `Phi^R` lives on the incidence side (including `X = 0`), `Phi^T` strictly on
/// the far side; each is zero off its support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposedPacket<T> {
    packet: WavePacket<T>,
}

impl<T: Real> DecomposedPacket<T> {
    pub(crate) fn new(packet: WavePacket<T>) -> Self {
        Self { packet }
    }

    pub fn packet(&self) -> &WavePacket<T> {
        &self.packet
    }

    fn reflection_side(&self) -> Side {
        self.packet.incidence()
    }

    fn on_side(&self, x: T, side: Side) -> bool {
        side_of(x, self.reflection_side()) == side
    }

    pub fn reflected(&self, x: T, tau: T) -> Complex<T> {
        let side = self.reflection_side();
        if !self.on_side(x, side) {
            return Complex::new(T::zero(), T::zero());
        }
        let v = self.packet.spectrum(x.abs(), tau).eval_outgoing(x, side);
        // divide out the explicit i of Phi = i Phi^R + Phi^T
        Complex::new(v.im, -v.re)
    }

    pub fn transmitted(&self, x: T, tau: T) -> Complex<T> {
        let side = self.packet.transmission_side();
        if !self.on_side(x, side) {
            return Complex::new(T::zero(), T::zero());
        }
        self.packet.spectrum(x.abs(), tau).eval_outgoing(x, side)
    }

    /// Both components sampled on `grid`: `(Phi^R, Phi^T)`.
    pub fn fields(&self, grid: &XGrid<T>, tau: T) -> (Field1D<Complex<T>, T>, Field1D<Complex<T>, T>) {
        let spec = self.packet.spectrum(grid.extent(), tau);
        let refl = self.reflection_side();
        let trans = self.packet.transmission_side();
        let zero = Complex::new(T::zero(), T::zero());
        let pairs: Vec<(Complex<T>, Complex<T>)> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.node(i);
                if self.on_side(x, refl) {
                    let v = spec.eval_outgoing(x, refl);
                    (Complex::new(v.im, -v.re), zero)
                } else {
                    (zero, spec.eval_outgoing(x, trans))
                }
            })
            .collect();
        let (r, t): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        (Field1D { grid: *grid, values: r }, Field1D { grid: *grid, values: t })
    }

    /// `(\int |Phi^R|^2, \int |Phi^T|^2)` over the grid, with the same domain
    /// check as [`WavePacket::evolve`].
    pub fn norms(&self, grid: &XGrid<T>, tau: T) -> Result<(T, T)> {
        let leakage = self.packet.outside_mass(grid, tau)?;
        if leakage > T::guard(LEAKAGE_TOL) {
            return Err(Error::DomainTooSmall { leakage: leakage.to_f64().unwrap_or(f64::NAN) });
        }
        let (r, t) = self.fields(grid, tau);
        Ok((r.density().integrate()?, t.density().integrate()?))
    }
}
