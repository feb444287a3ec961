//! Distribution of the inter-particle distance `|r| = |x1 - x2|`.

use num_complex::Complex;
use rayon::prelude::*;

use super::state::{pair_density, TwoParticleState};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, CompensatedSum, UniformGrid, XGrid};
use crate::scalar::Real;
use crate::units::Statistics;

/// `P_sep(|r|)` sampled on a uniform `|r|` grid starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationDistribution<T> {
    pub r: UniformGrid<T>,
    pub density: Vec<T>,
    pub tau: T,
    pub statistics: Statistics,
}

impl<T: Real> SeparationDistribution<T> {
    /// `\int_0^{r_max} P_sep d|r|`.
    pub fn total(&self) -> T {
        integrate_1d(&self.density, &self.r).expect("lengths agree")
    }

    /// Value at `|r| = 0`.
    pub fn at_contact(&self) -> T {
        self.density[0]
    }

    /// `\int P_sep d|r|` restricted to `lo <= |r| <= hi`.
    pub fn mass_between(&self, lo: T, hi: T) -> T {
        self.density
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let r = self.r.node(*i);
                r >= lo && r <= hi
            })
            .map(|(i, &v)| v * self.r.weight(i))
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// Indices of local maxima, `|r| = 0` included, at least `rel` times the
    /// global maximum.
    pub fn peaks(&self, rel: T) -> Vec<usize> {
        let d = &self.density;
        let top = d.iter().copied().fold(T::zero(), T::max);
        let mut out = Vec::new();
        if d.len() > 1 && d[0] > d[1] && d[0] >= rel * top {
            out.push(0);
        }
        for i in 1..d.len().saturating_sub(1) {
            if d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] >= rel * top {
                out.push(i);
            }
        }
        out
    }
}

/// Packet samples on the shared `x1`/`x2` lattice of a separation run.
struct SeparationLattice<T> {
    r_axis: UniformGrid<T>,
    j_max: usize,
    phi1: Vec<Complex<T>>,
    phi2: Vec<Complex<T>>,
}

impl<T: Real> TwoParticleState<T> {
    /// `P_sep(|r|, tau) = \int |Psi(R, |r|)|^2 dR + \int |Psi(R, -|r|)|^2 dR`
    /// with `x1 = R + r/2`, `x2 = R - r/2` (unit Jacobian).
    ///
    /// `R` runs over `axis` with spacing half the `|r|` spacing, so every
    /// `x1`, `x2` lands on a single lattice and each packet is evaluated once
    /// per lattice point.
    pub fn separation_distribution(
        &self,
        axis: &XGrid<T>,
        r_grid: &UniformGrid<T>,
        tau: T,
    ) -> Result<SeparationDistribution<T>> {
        let lattice = self.separation_lattice(axis, r_grid, tau)?;
        Ok(self.reduce_separation(&lattice, r_grid, tau, self.statistics))
    }

    /// [`separation_distribution`](Self::separation_distribution) for all
    /// three statistics from one set of packet samples.
    pub fn separation_distributions(
        &self,
        axis: &XGrid<T>,
        r_grid: &UniformGrid<T>,
        tau: T,
    ) -> Result<Vec<SeparationDistribution<T>>> {
        let lattice = self.separation_lattice(axis, r_grid, tau)?;
        Ok(Statistics::ALL.iter().map(|&s| self.reduce_separation(&lattice, r_grid, tau, s)).collect())
    }

    fn separation_lattice(&self, axis: &XGrid<T>, r_grid: &UniformGrid<T>, tau: T) -> Result<SeparationLattice<T>> {
        if r_grid.min() != T::zero() {
            return Err(Error::InvalidGrid("separation grid must start at |r| = 0".into()));
        }
        // domain check on the coarse axis
        self.left.evolve(axis, tau)?;
        self.right.evolve(axis, tau)?;

        let h_big_r = r_grid.spacing() / T::lit(2.0);
        let span = ((axis.max() - axis.min()) / h_big_r).ceil().to_usize().unwrap_or(usize::MAX);
        let n_big_r = span + 1;
        let j_max = r_grid.len() - 1;
        let r_axis = UniformGrid::new(
            axis.min(),
            axis.min() + T::from_count(n_big_r - 1) * h_big_r,
            n_big_r,
        )?;
        let lattice = UniformGrid::new(
            axis.min() - T::from_count(j_max) * h_big_r,
            axis.min() + T::from_count(n_big_r - 1 + j_max) * h_big_r,
            n_big_r + 2 * j_max,
        )?;
        Ok(SeparationLattice {
            r_axis,
            j_max,
            phi1: self.left.sample(&lattice, tau).values,
            phi2: self.right.sample(&lattice, tau).values,
        })
    }

    fn reduce_separation(
        &self,
        lattice: &SeparationLattice<T>,
        r_grid: &UniformGrid<T>,
        tau: T,
        stat: Statistics,
    ) -> SeparationDistribution<T> {
        let w = self.spin.overlap_weight();
        let SeparationLattice { r_axis, j_max, phi1, phi2 } = lattice;
        let j_max = *j_max;
        let density = (0..r_grid.len())
            .into_par_iter()
            .map(|j| {
                (0..r_axis.len())
                    .map(|i| {
                        // lattice index of R + r/2 and R - r/2
                        let (p, m) = (i + j_max + j, i + j_max - j);
                        let plus = pair_density(stat, w, phi1[p] * phi2[m], phi1[m] * phi2[p]);
                        let minus = pair_density(stat, w, phi1[m] * phi2[p], phi1[p] * phi2[m]);
                        (plus + minus) * r_axis.weight(i)
                    })
                    .collect::<CompensatedSum<T>>()
                    .value()
            })
            .collect();
        SeparationDistribution { r: *r_grid, density, tau, statistics: stat }
    }
}
