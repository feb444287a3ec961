//! Superposition coefficients `phi(K)` of an incident Gaussian packet.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::units::{Mode, PacketConfig, Side, WellConfig};

/// `phi(K)` for one packet scattering off one well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientFunction<T> {
    pub mode: Mode,
    pub packet: PacketConfig<T>,
    pub well: WellConfig<T>,
}

/// `(2pi)^{-1/4} e^{i(K0 - K)S} e^{-(K - K0)^2/4}`
#[inline]
fn gaussian<T: Real>(k: T, k0: T, s: T) -> Complex<T> {
    let norm = (T::lit(2.0) * T::PI()).powf(T::lit(-0.25));
    let d = k - k0;
    cis((k0 - k) * s) * (norm * (-d * d / T::lit(4.0)).exp())
}

impl<T: Real> CoefficientFunction<T> {
    pub fn new(mode: Mode, packet: PacketConfig<T>, well: WellConfig<T>) -> Self {
        Self { mode, packet, well }
    }

    pub fn incidence(&self) -> Side {
        self.packet.incidence()
    }

    /// Evaluates `phi(K)`.
    ///
    /// Approximate mode is the Fourier transform of the initial Gaussian and
    /// only defined on the incidence sign of `K`. Exact mode projects onto
    /// both families of scattering states; a right-incident packet is handled
    /// through the parity map `phi(K; S, K0) = phi(-K; -S, -K0)`.
    pub fn eval(&self, k: T) -> Result<Complex<T>> {
        let p = self.packet;
        match self.mode {
            Mode::Approximate => {
                if k == T::zero() || (k > T::zero()) != (p.k0 > T::zero()) {
                    return Err(Error::WrongSide {
                        k: k.to_f64().unwrap_or(f64::NAN),
                        k0: p.k0.to_f64().unwrap_or(f64::NAN),
                    });
                }
                Ok(gaussian(k, p.k0, p.s0))
            }
            Mode::Exact => Ok(match p.incidence() {
                Side::Left => self.exact_left(k, p),
                Side::Right => self.exact_left(-k, p.mirrored()),
            }),
        }
    }

    /// Exact coefficient for a packet localized left of the well.
    fn exact_left(&self, k: T, p: PacketConfig<T>) -> Complex<T> {
        let lambda = self.well.lambda;
        let direct = gaussian(k, p.k0, p.s0);
        if lambda == T::zero() {
            return if k >= T::zero() { direct } else { direct * T::zero() };
        }
        if k >= T::zero() {
            // -i beta/(1 + i beta) = -i Lambda/(K + i Lambda), finite at K = 0
            let back = Complex::new(T::zero(), -lambda) / Complex::new(k, lambda);
            let norm = (T::lit(2.0) * T::PI()).powf(T::lit(-0.25));
            let d = k + p.k0;
            let mirror = cis((k + p.k0) * p.s0) * (norm * (-d * d / T::lit(4.0)).exp());
            direct + back * mirror
        } else {
            // 1/(1 - i beta) = K/(K - i Lambda)
            direct * (Complex::new(k, T::zero()) / Complex::new(k, -lambda))
        }
    }
}
