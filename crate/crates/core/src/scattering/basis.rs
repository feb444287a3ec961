//! Stationary scattering states of the delta well.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::units::{Side, WellConfig};

/// Plane-wave transmission probability `1 / (1 + (Lambda/K)^2)`.
pub fn plane_wave_t<T: Real>(k: T, lambda: T) -> Result<T> {
    if k == T::zero() {
        return Err(Error::ZeroWaveVector);
    }
    Ok(k * k / (k * k + lambda * lambda))
}

/// Plane-wave reflection probability, `1 - T_p`.
pub fn plane_wave_r<T: Real>(k: T, lambda: T) -> Result<T> {
    if k == T::zero() {
        return Err(Error::ZeroWaveVector);
    }
    Ok(lambda * lambda / (k * k + lambda * lambda))
}

/// Coefficients of the stationary state `psi_K`.
///
/// For `K > 0` the wave comes in from the left:
/// `e^{iKX} + r e^{-iKX}` for `X <= 0` and `t e^{iKX}` for `X > 0`, with
/// `r = i Lambda/(K - i Lambda)` and `t = K/(K - i Lambda)`.
/// For `K < 0` it comes in from the right with `r = -i Lambda/(K + i Lambda)`
/// and `t = K/(K + i Lambda)`.
///
/// The rational forms stay finite at `K = 0` whenever `Lambda > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisAmplitudes<T> {
    pub incident: Complex<T>,
    pub reflected: Complex<T>,
    pub transmitted: Complex<T>,
}

impl<T: Real> BasisAmplitudes<T> {
    pub fn new(k: T, well: &WellConfig<T>) -> Self {
        let one = Complex::new(T::one(), T::zero());
        let lambda = well.lambda;
        if lambda == T::zero() {
            return Self { incident: one, reflected: Complex::new(T::zero(), T::zero()), transmitted: one };
        }
        let (denom, r_num) = if k >= T::zero() {
            (Complex::new(k, -lambda), Complex::new(T::zero(), lambda))
        } else {
            (Complex::new(k, lambda), Complex::new(T::zero(), -lambda))
        };
        Self { incident: one, reflected: r_num / denom, transmitted: Complex::new(k, T::zero()) / denom }
    }

    /// `|r|^2 + |t|^2`, equal to one by unitarity.
    pub fn flux(&self) -> T {
        self.reflected.norm_sqr() + self.transmitted.norm_sqr()
    }
}

/// Side of the well that `psi_K` is incident from.
#[inline]
pub(crate) fn incident_from<T: Real>(k: T) -> Side {
    if k >= T::zero() {
        Side::Left
    } else {
        Side::Right
    }
}

/// `psi_K(X)` at `tau = 0`. A point at `X = 0` is evaluated with the branch of
/// `zero_side`; both branches agree there by continuity.
pub fn basis_state<T: Real>(k: T, amps: &BasisAmplitudes<T>, x: T, zero_side: Side) -> Complex<T> {
    let e = cis(k * x);
    if side_of(x, zero_side) == incident_from(k) {
        amps.incident * e + amps.reflected * e.conj()
    } else {
        amps.transmitted * e
    }
}

#[inline]
pub(crate) fn side_of<T: Real>(x: T, zero_side: Side) -> Side {
    if x < T::zero() {
        Side::Left
    } else if x > T::zero() {
        Side::Right
    } else {
        zero_side
    }
}
