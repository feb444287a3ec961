//! Time-dependent wave packets built directly from the scattering states.
//!
//! `Phi(X, tau) = (2pi)^{-1/2} \int phi(K) psi_K(X) e^{-i K^2 tau} dK`, evaluated
//! by trapezoidal quadrature in `K` at each requested `(X, tau)`. There is no
//! time stepping: each time is an independent quadrature.

use num_complex::Complex;
use rayon::prelude::*;

use super::basis::{incident_from, side_of, BasisAmplitudes};
use super::coefficient::CoefficientFunction;
use super::decompose::DecomposedPacket;
use crate::error::{Error, Result};
use crate::quadrature::{compensated, max_k_spacing, CompensatedSum, Field1D, UniformGrid, XGrid};
use crate::scalar::{cis, Real};
use crate::units::{Mode, PacketConfig, Side, WellConfig};

/// Half-width of the `K` window around each Gaussian lobe.
pub const DEFAULT_K_WINDOW: f64 = 10.0;
/// Minimum number of `K` nodes per segment.
pub const DEFAULT_K_NODES: usize = 4097;
/// Closest approach of the approximate-mode window to `K = 0`.
pub const ZERO_CLIP: f64 = 1e-6;
/// Largest probability allowed outside a sampling domain.
pub const LEAKAGE_TOL: f64 = 1e-6;
/// Scattering is complete once less than [`COMPLETION_MASS`] of the
/// probability lies within `|X| <= COMPLETION_RADIUS`.
pub const COMPLETION_RADIUS: f64 = 3.0;
pub const COMPLETION_MASS: f64 = 1e-4;

const MAX_COMPLETION_STEPS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSettings<T> {
    pub k_window: T,
    pub k_nodes: usize,
}

impl<T: Real> Default for SpectralSettings<T> {
    fn default() -> Self {
        Self { k_window: T::lit(DEFAULT_K_WINDOW), k_nodes: DEFAULT_K_NODES }
    }
}

/// Quadrature nodes in `K` with everything except the spatial phase folded in.
pub(crate) struct Spectrum<T> {
    k: Vec<T>,
    /// `w_K phi(K) e^{-i K^2 tau} / sqrt(2 pi)`
    c: Vec<Complex<T>>,
    amps: Vec<BasisAmplitudes<T>>,
}

impl<T: Real> Spectrum<T> {
    /// Full wave function. `zero_side` picks the branch used at `X = 0`.
    pub(crate) fn eval(&self, x: T, zero_side: Side) -> Complex<T> {
        let side = side_of(x, zero_side);
        compensated(self.k.iter().zip(&self.c).zip(&self.amps).map(|((&k, &c), a)| {
            let e = cis(k * x);
            if side == incident_from(k) {
                c * (a.incident * e + a.reflected * e.conj())
            } else {
                c * a.transmitted * e
            }
        }))
    }

    /// Only the waves scattered toward `toward`: transmitted waves of the
    /// states incident from the other side plus reflected waves of the states
    /// incident from this side.
    pub(crate) fn eval_outgoing(&self, x: T, toward: Side) -> Complex<T> {
        compensated(self.k.iter().zip(&self.c).zip(&self.amps).map(|((&k, &c), a)| {
            let e = cis(k * x);
            if incident_from(k) == toward {
                c * a.reflected * e.conj()
            } else {
                c * a.transmitted * e
            }
        }))
    }
}

/// A single incident packet and the rule that evolves it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket<T> {
    coeff: CoefficientFunction<T>,
    settings: SpectralSettings<T>,
}

impl<T: Real> WavePacket<T> {
    pub fn new(coeff: CoefficientFunction<T>) -> Self {
        Self { coeff, settings: SpectralSettings::default() }
    }

    pub fn from_config(mode: Mode, packet: PacketConfig<T>, well: WellConfig<T>) -> Self {
        Self::new(CoefficientFunction::new(mode, packet, well))
    }

    pub fn with_settings(mut self, settings: SpectralSettings<T>) -> Self {
        self.settings = settings;
        self
    }

    pub fn coefficient(&self) -> &CoefficientFunction<T> {
        &self.coeff
    }

    pub fn config(&self) -> PacketConfig<T> {
        self.coeff.packet
    }

    pub fn well(&self) -> WellConfig<T> {
        self.coeff.well
    }

    pub fn settings(&self) -> SpectralSettings<T> {
        self.settings
    }

    pub fn incidence(&self) -> Side {
        self.coeff.incidence()
    }

    /// Side the transmitted packet leaves on.
    pub fn transmission_side(&self) -> Side {
        self.incidence().opposite()
    }

    /// `phi(K)`, or zero where the coefficient is undefined.
    pub fn phi(&self, k: T) -> Complex<T> {
        self.coeff.eval(k).unwrap_or_else(|_| Complex::new(T::zero(), T::zero()))
    }

    /// `K` intervals carrying the coefficient, incidence sign first.
    pub fn k_segments(&self) -> Vec<(T, T)> {
        let w = self.settings.k_window;
        let a = self.config().k0.abs();
        let clip = T::lit(ZERO_CLIP);
        // written for a left-incident packet, mirrored below
        let same: (T, T);
        let mut opposite: Option<(T, T)> = None;
        match self.coeff.mode {
            Mode::Approximate => same = ((a - w).max(clip), a + w),
            Mode::Exact => {
                if a >= w {
                    same = (a - w, a + w);
                } else {
                    same = (T::zero(), a + w);
                    opposite = Some((a - w, T::zero()));
                }
            }
        }
        let mut segs = vec![same];
        segs.extend(opposite);
        if self.incidence() == Side::Right {
            segs = segs.into_iter().map(|(lo, hi)| (-hi, -lo)).collect();
        }
        segs
    }

    fn k_extent(&self) -> T {
        self.k_segments()
            .iter()
            .fold(T::zero(), |m, &(lo, hi)| m.max(lo.abs()).max(hi.abs()))
    }

    fn k_grids(&self, x_extent: T, tau: T) -> Vec<UniformGrid<T>> {
        let h = max_k_spacing(x_extent, self.k_extent(), tau);
        self.k_segments()
            .into_iter()
            .map(|(lo, hi)| {
                UniformGrid::with_max_spacing(lo, hi, h, self.settings.k_nodes)
                    .expect("k window is a non-empty interval")
            })
            .collect()
    }

    pub(crate) fn spectrum(&self, x_extent: T, tau: T) -> Spectrum<T> {
        let well = self.well();
        let inv_sqrt_2pi = T::one() / (T::lit(2.0) * T::PI()).sqrt();
        let mut s = Spectrum { k: Vec::new(), c: Vec::new(), amps: Vec::new() };
        for grid in self.k_grids(x_extent, tau) {
            for i in 0..grid.len() {
                let k = grid.node(i);
                let phase = cis(-k * k * tau);
                s.k.push(k);
                s.c.push(self.phi(k) * phase * (grid.weight(i) * inv_sqrt_2pi));
                s.amps.push(BasisAmplitudes::new(k, &well));
            }
        }
        s
    }

    /// `\int |phi|^2 dK`, the conserved norm of the packet.
    pub fn expected_norm(&self) -> T {
        self.k_grids(T::zero(), T::zero())
            .iter()
            .map(|g| {
                g.nodes()
                    .enumerate()
                    .map(|(i, k)| self.phi(k).norm_sqr() * g.weight(i))
                    .collect::<CompensatedSum<T>>()
                    .value()
            })
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// `Phi(X, tau)`, using the incidence-side branch at `X = 0`.
    pub fn amplitude(&self, x: T, tau: T) -> Complex<T> {
        self.amplitude_with_zero_side(x, tau, self.incidence())
    }

    /// `Phi(X, tau)` with an explicit branch choice at `X = 0`.
    pub fn amplitude_with_zero_side(&self, x: T, tau: T, zero_side: Side) -> Complex<T> {
        self.spectrum(x.abs(), tau).eval(x, zero_side)
    }

    /// Samples `Phi` on `grid` without any domain check.
    pub fn sample(&self, grid: &XGrid<T>, tau: T) -> Field1D<Complex<T>, T> {
        let spec = self.spectrum(grid.extent(), tau);
        let zero_side = self.incidence();
        let values = (0..grid.len()).into_par_iter().map(|i| spec.eval(grid.node(i), zero_side)).collect();
        Field1D { grid: *grid, values }
    }

    /// Samples `Phi(X, tau)` on `grid`; fails if more than [`LEAKAGE_TOL`] of
    /// the probability falls outside the grid.
    pub fn evolve(&self, grid: &XGrid<T>, tau: T) -> Result<Field1D<Complex<T>, T>> {
        if tau < T::zero() {
            return Err(Error::NegativeTime(tau.to_f64().unwrap_or(f64::NAN)));
        }
        let field = self.sample(grid, tau);
        if field.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("wave packet"));
        }
        let leakage = self.outside_mass(grid, tau)?;
        if leakage > T::guard(LEAKAGE_TOL) {
            return Err(Error::DomainTooSmall { leakage: leakage.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(field)
    }

    /// Distance from the origin beyond which the packet carries no appreciable
    /// probability at `tau`: the fastest wave vector in the window plus ten
    /// spread widths.
    pub fn reach(&self, tau: T) -> T {
        let two = T::lit(2.0);
        let spread = (T::one() + T::lit(16.0) * tau * tau).sqrt() / two;
        self.config().s0.abs() + two * self.k_extent() * tau + T::lit(10.0) * spread + T::lit(5.0)
    }

    /// Probability between the edges of `grid` and [`reach`](Self::reach).
    ///
    /// These intervals never contain the well, so the density is smooth there
    /// and the trapezoidal rule is accurate well below [`LEAKAGE_TOL`].
    pub fn outside_mass(&self, grid: &XGrid<T>, tau: T) -> Result<T> {
        let reach = self.reach(tau);
        let h = grid.spacing().min(T::PI() / (T::lit(4.0) * self.k_extent().max(T::one())));
        let mut total = CompensatedSum::default();
        for (lo, hi) in [(-reach, grid.min()), (grid.max(), reach)] {
            if hi - lo <= T::zero() {
                continue;
            }
            let outer = UniformGrid::with_max_spacing(lo, hi, h, 3)?;
            total.add(self.sample(&outer, tau).density().integrate()?);
        }
        let mass = total.value();
        if mass.is_finite() {
            Ok(mass)
        } else {
            Err(Error::NonFinite("wave packet"))
        }
    }

    /// `|Phi(0, tau)|^2`, which fixes the jump of `d|Phi|^2/dX` at the well.
    pub fn density_at_origin(&self, tau: T) -> T {
        self.amplitude(T::zero(), tau).norm_sqr()
    }

    /// `d|Phi|^2/dX` jumps by `kink_jump() * |Phi(0)|^2` across the well.
    pub fn kink_jump(&self) -> T {
        -T::lit(4.0) * self.well().lambda
    }

    /// `\int |Phi|^2 dX` over the grid, with the trapezoidal rule corrected for
    /// the kink at the well.
    pub fn norm(&self, grid: &XGrid<T>, tau: T) -> Result<T> {
        self.evolve(grid, tau)?
            .density()
            .integrate_kinked(self.kink_jump(), self.density_at_origin(tau))
    }

    /// Probability on the right of the well, `\int_0^\infty |Phi|^2 dX`.
    pub fn prob_right(&self, grid: &XGrid<T>, tau: T) -> Result<T> {
        let field = self.evolve(grid, tau)?;
        Ok(right_half_integral(&field.density(), self.density_at_origin(tau)))
    }

    /// Long-time probability of leaving toward `toward`,
    /// `\int_0^\infty |A(q)|^2 dq` with `A(q)` the outgoing amplitude of wave
    /// vector magnitude `q` on that side.
    pub fn outgoing_probability(&self, toward: Side) -> T {
        let well = self.well();
        let grid = UniformGrid::with_max_spacing(
            T::zero(),
            self.k_extent(),
            max_k_spacing(T::zero(), self.k_extent(), T::zero()),
            self.settings.k_nodes,
        )
        .expect("positive k extent");
        let out_sign = if toward == Side::Right { T::one() } else { -T::one() };
        grid.nodes()
            .enumerate()
            .map(|(i, q)| {
                // outgoing e^{i out_sign q X}: transmitted from K = out_sign q,
                // reflected from K = -out_sign q
                let kt = out_sign * q;
                let kr = -out_sign * q;
                let at = BasisAmplitudes::new(kt, &well).transmitted;
                let ar = BasisAmplitudes::new(kr, &well).reflected;
                let a = self.phi(kt) * at + self.phi(kr) * ar;
                a.norm_sqr() * grid.weight(i)
            })
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// `\int |phi|^2 T_p(K) dK` over the incidence-sign window.
    pub fn averaged_transmission(&self) -> T {
        let well = self.well();
        let grid = self.k_grids(T::zero(), T::zero())[0];
        grid.nodes()
            .enumerate()
            .map(|(i, k)| {
                self.phi(k).norm_sqr() * BasisAmplitudes::new(k, &well).transmitted.norm_sqr() * grid.weight(i)
            })
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// `\int |phi|^2` over wave vectors of the wrong sign for the incidence side.
    pub fn opposite_sign_mass(&self) -> T {
        let grids = self.k_grids(T::zero(), T::zero());
        grids
            .iter()
            .skip(1)
            .map(|g| {
                g.nodes()
                    .enumerate()
                    .map(|(i, k)| self.phi(k).norm_sqr() * g.weight(i))
                    .collect::<CompensatedSum<T>>()
                    .value()
            })
            .fold(T::zero(), |a, b| a + b)
    }

    /// Wave-packet transmission coefficient, the long-time limit of the
    /// probability found on the transmission side.
    ///
    /// With negligible opposite-sign support this is the average of the
    /// plane-wave transmission over `|phi|^2`. Otherwise the limit is taken
    /// from the outgoing amplitudes, where states of both signs interfere.
    pub fn wavepacket_t(&self) -> T {
        if self.opposite_sign_mass() <= T::lit(1e-14) * self.expected_norm() {
            self.averaged_transmission()
        } else {
            self.outgoing_probability(self.transmission_side())
        }
    }

    pub fn wavepacket_r(&self) -> T {
        self.expected_norm() - self.wavepacket_t()
    }

    /// Reflected and transmitted components.
    pub fn decompose(&self) -> DecomposedPacket<T> {
        DecomposedPacket::new(*self)
    }

    /// Probability within `|X| <= COMPLETION_RADIUS`.
    pub fn mass_near_origin(&self, tau: T) -> T {
        let r = T::lit(COMPLETION_RADIUS);
        let h = T::PI() / (T::lit(4.0) * self.k_extent().max(T::one()));
        let grid = UniformGrid::with_max_spacing(-r, r, h, 241).expect("fixed radius");
        let d = self.sample(&grid, tau).density();
        d.integrate_kinked(self.kink_jump(), self.density_at_origin(tau))
            .expect("grid and samples agree")
    }

    /// True once the ballistic centre has crossed the well and less than
    /// [`COMPLETION_MASS`] is left within [`COMPLETION_RADIUS`] of it.
    pub fn is_scattering_complete(&self, tau: T) -> bool {
        let p = self.config();
        let arrival = p.s0.abs() / (T::lit(2.0) * p.k0.abs());
        tau > arrival && self.mass_near_origin(tau) < T::guard(COMPLETION_MASS)
    }

    /// First time on a fixed ladder after the ballistic crossing at which
    /// scattering is complete.
    pub fn completion_time(&self) -> Result<T> {
        let p = self.config();
        let start = ((p.s0.abs() + T::lit(COMPLETION_RADIUS)) / (T::lit(2.0) * p.k0.abs())).max(T::zero());
        let step = (start / T::lit(20.0)).max(T::lit(1e-3));
        for i in 0..MAX_COMPLETION_STEPS {
            let tau = start + T::from_count(i) * step;
            if self.is_scattering_complete(tau) {
                return Ok(tau);
            }
        }
        Err(Error::ScatteringIncomplete {
            tau: (start + T::from_count(MAX_COMPLETION_STEPS) * step).to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// `\int_0^\infty f dX` over the grid, given `f(0)`.
///
/// When the origin falls between two nodes the partial panel `[0, x_m]` is
/// integrated on its own so the result does not jump as the origin moves
/// across a panel.
pub fn right_half_integral<T: Real>(field: &Field1D<T, T>, at_origin: T) -> T {
    let g = field.grid;
    let zero = T::zero();
    if g.min() >= zero {
        return field.integrate().expect("grid and samples agree");
    }
    if g.max() <= zero {
        return zero;
    }
    let h = g.spacing();
    let first = ((zero - g.min()) / h).floor().to_usize().unwrap_or(0).min(g.len() - 1);
    let first = if g.node(first) > zero { first } else { first + 1 };
    let x_m = g.node(first);
    let f_m = field.values[first];
    if first + 1 == g.len() {
        return x_m * (at_origin + f_m) / T::lit(2.0);
    }
    let mut sum: CompensatedSum<T> = (first..g.len()).map(|i| field.values[i] * g.weight(i)).collect();
    // x_m is an end node of [x_m, max]
    sum.add(-f_m * h / T::lit(2.0));
    sum.add(x_m * (at_origin + f_m) / T::lit(2.0));
    sum.value()
}
