//! Probability that both particles leave on the same side of the well.

use super::state::{PairFields, TwoParticleState};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d_quadrant, Field2D, Quadrant, XYGrid};
use crate::scalar::Real;
use crate::scattering::plane_wave_t;
use crate::units::{PacketConfig, SpinConfig, Statistics, WellConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ClosedForm,
    Numeric,
}

/// Same-side probabilities for bosons (`p_plus`), fermions (`p_minus`) and
/// distinguishable particles (`p_d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SameSideResult<T> {
    pub p_plus: T,
    pub p_minus: T,
    pub p_d: T,
    pub source: Source,
}

impl<T: Real> SameSideResult<T> {
    pub fn get(&self, stat: Statistics) -> T {
        match stat {
            Statistics::Boson => self.p_plus,
            Statistics::Fermion => self.p_minus,
            Statistics::Distinguishable => self.p_d,
        }
    }
}

/// Opposite-side (coincidence) probabilities, `1 - P` per statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidence<T> {
    pub boson: T,
    pub fermion: T,
    pub distinguishable: T,
}

impl<T: Real> Coincidence<T> {
    pub fn get(&self, stat: Statistics) -> T {
        match stat {
            Statistics::Boson => self.boson,
            Statistics::Fermion => self.fermion,
            Statistics::Distinguishable => self.distinguishable,
        }
    }
}

pub fn coincidence_probability<T: Real>(result: &SameSideResult<T>) -> Coincidence<T> {
    Coincidence {
        boson: T::one() - result.p_plus,
        fermion: T::one() - result.p_minus,
        distinguishable: T::one() - result.p_d,
    }
}

/// Narrow-band same-side probabilities:
/// `P_D = T1 R2 + R1 T2` and
/// `P_+- = P_D +- 2|c|^2 sqrt(T1 R1 T2 R2) e^{-(S1+S2)^2} e^{-(K01+K02)^2/4}`,
/// with `T_j` the plane-wave transmission at the central wave vector.
pub fn same_side_closed_form<T: Real>(
    packets: [PacketConfig<T>; 2],
    well: WellConfig<T>,
    spin: SpinConfig<T>,
) -> Result<SameSideResult<T>> {
    let t1 = plane_wave_t(packets[0].k0, well.lambda)?;
    let t2 = plane_wave_t(packets[1].k0, well.lambda)?;
    let (r1, r2) = (T::one() - t1, T::one() - t2);
    let p_d = t1 * r2 + r1 * t2;
    let ds = packets[0].s0 + packets[1].s0;
    let dk = packets[0].k0 + packets[1].k0;
    let exchange = T::lit(2.0)
        * spin.overlap_weight()
        * (t1 * r1 * t2 * r2).sqrt()
        * (-(ds * ds)).exp()
        * (-(dk * dk) / T::lit(4.0)).exp();
    Ok(SameSideResult { p_plus: p_d + exchange, p_minus: p_d - exchange, p_d, source: Source::ClosedForm })
}

/// Quadrant integrals of one joint density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantProbabilities<T> {
    pub plus_plus: T,
    pub minus_minus: T,
    pub plus_minus: T,
    pub minus_plus: T,
}

impl<T: Real> QuadrantProbabilities<T> {
    pub fn of(density: &Field2D<T>) -> Result<Self> {
        Ok(Self {
            plus_plus: integrate_2d_quadrant(density, Quadrant::PlusPlus)?,
            minus_minus: integrate_2d_quadrant(density, Quadrant::MinusMinus)?,
            plus_minus: integrate_2d_quadrant(density, Quadrant::PlusMinus)?,
            minus_plus: integrate_2d_quadrant(density, Quadrant::MinusPlus)?,
        })
    }

    pub fn same_side(&self) -> T {
        self.plus_plus + self.minus_minus
    }

    pub fn opposite_side(&self) -> T {
        self.plus_minus + self.minus_plus
    }

    pub fn total(&self) -> T {
        self.same_side() + self.opposite_side()
    }
}

/// Quadrant probabilities for all three statistics from one pair of fields.
pub fn quadrant_table<T: Real>(
    fields: &PairFields<T>,
    spin: &SpinConfig<T>,
) -> Result<Vec<(Statistics, QuadrantProbabilities<T>)>> {
    fields
        .densities(spin)
        .into_iter()
        .map(|(s, d)| Ok((s, QuadrantProbabilities::of(&d)?)))
        .collect()
}

impl<T: Real> TwoParticleState<T> {
    /// Same-side probabilities from quadrant integration of the joint density
    /// at `tau_final`, for all three statistics.
    pub fn same_side_numeric(&self, grid: &XYGrid<T>, tau_final: T) -> Result<SameSideResult<T>> {
        for p in [&self.left, &self.right] {
            if !p.is_scattering_complete(tau_final) {
                return Err(Error::ScatteringIncomplete { tau: tau_final.to_f64().unwrap_or(f64::NAN) });
            }
        }
        let fields = self.fields(&grid.axis, tau_final)?;
        let table = quadrant_table(&fields, &self.spin)?;
        let get = |s: Statistics| table.iter().find(|(t, _)| *t == s).map(|(_, q)| q.same_side()).unwrap();
        Ok(SameSideResult {
            p_plus: get(Statistics::Boson),
            p_minus: get(Statistics::Fermion),
            p_d: get(Statistics::Distinguishable),
            source: Source::Numeric,
        })
    }

    /// Earliest time on the completion ladder at which both packets have
    /// finished scattering.
    pub fn completion_time(&self) -> Result<T> {
        let t = self.left.completion_time()?.max(self.right.completion_time()?);
        // the later packet's ladder may have skipped past the earlier one's
        if self.left.is_scattering_complete(t) && self.right.is_scattering_complete(t) {
            Ok(t)
        } else {
            Err(Error::ScatteringIncomplete { tau: t.to_f64().unwrap_or(f64::NAN) })
        }
    }
}

/// Time at which the later of the two outgoing packets is `distance` away
/// from the well, using ballistic centres `|S_j + 2 K0_j tau| = distance`.
pub fn later_outgoing_time<T: Real>(packets: &[PacketConfig<T>], distance: T) -> T {
    packets
        .iter()
        .map(|p| (p.s0.abs() + distance) / (T::lit(2.0) * p.k0.abs()))
        .fold(T::zero(), T::max)
}
