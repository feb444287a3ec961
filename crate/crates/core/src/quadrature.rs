//! Deterministic trapezoidal quadrature on uniform grids.
//!
//! Samples may be produced in parallel, but every reduction runs in a fixed
//! left-to-right order with Neumaier compensation, so results do not depend
//! on the number of worker threads.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid of `n` nodes spanning `[min, max]`, trapezoidal weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid<T> {
    min: T,
    max: T,
    n: usize,
}

/// Grid over wave vectors.
pub type KGrid<T> = UniformGrid<T>;
/// Grid over positions.
pub type XGrid<T> = UniformGrid<T>;

impl<T: Real> UniformGrid<T> {
    pub fn new(min: T, max: T, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("empty range [{min}, {max}]")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {n}")));
        }
        Ok(Self { min, max, n })
    }

    /// Grid with spacing at most `h_max` (and at least `min_nodes` nodes).
    pub fn with_max_spacing(min: T, max: T, h_max: T, min_nodes: usize) -> Result<Self> {
        let span = ((max - min) / h_max).ceil().to_usize().unwrap_or(usize::MAX);
        Self::new(min, max, min_nodes.max(span.saturating_add(1)))
    }

    pub fn min(&self) -> T {
        self.min
    }

    pub fn max(&self) -> T {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        (self.max - self.min) / T::from_count(self.n - 1)
    }

    #[inline]
    pub fn node(&self, i: usize) -> T {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + T::from_count(i) * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = T> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    /// Trapezoidal weight of node `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> T {
        let h = self.spacing();
        if i == 0 || i + 1 == self.n {
            h * T::lit(0.5)
        } else {
            h
        }
    }

    /// Largest absolute coordinate on the grid.
    pub fn extent(&self) -> T {
        self.min.abs().max(self.max.abs())
    }
}

/// Cartesian square of a 1D position grid; `x1` indexes rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYGrid<T> {
    pub axis: UniformGrid<T>,
}

impl<T: Real> XYGrid<T> {
    pub fn square(axis: UniformGrid<T>) -> Self {
        Self { axis }
    }

    pub fn len(&self) -> usize {
        self.axis.len() * self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Samples on a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D<S, T> {
    pub grid: UniformGrid<T>,
    pub values: Vec<S>,
}

impl<T: Real> Field1D<Complex<T>, T> {
    pub fn density(&self) -> Field1D<T, T> {
        Field1D { grid: self.grid, values: self.values.iter().map(|v| v.norm_sqr()).collect() }
    }
}

impl<S: Sample<T>, T: Real> Field1D<S, T> {
    pub fn integrate(&self) -> Result<S> {
        integrate_1d(&self.values, &self.grid)
    }
}

impl<T: Real> Field1D<T, T> {
    /// Trapezoidal integral corrected for a derivative jump
    /// `f'(0+) - f'(0-) = jump * value_at_zero` at the origin.
    pub fn integrate_kinked(&self, jump: T, value_at_zero: T) -> Result<T> {
        Ok(self.integrate()? + jump * value_at_zero * kink_weight(&self.grid, T::zero()))
    }
}

/// Leading trapezoidal error per unit derivative jump at `c`:
/// `\int f = T_h[f] + J h^2 (1/12 - theta(1 - theta)/2) + O(h^4)`, where `theta`
/// is the fractional position of `c` inside its panel. Zero when `c` lies
/// outside the open grid interval.
pub fn kink_weight<T: Real>(grid: &UniformGrid<T>, c: T) -> T {
    if c <= grid.min() || c >= grid.max() {
        return T::zero();
    }
    let h = grid.spacing();
    let pos = (c - grid.min()) / h;
    let theta = pos - pos.floor();
    h * h * (T::one() / T::lit(12.0) - theta * (T::one() - theta) / T::lit(2.0))
}

/// Real samples on an [`XYGrid`], row-major with `x1` as rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<T> {
    pub grid: XYGrid<T>,
    pub values: Vec<T>,
    /// Density on the lines `x1 = 0` and `x2 = 0` when it has a derivative
    /// kink there; enables [`kink_weight`] corrections.
    pub kink: Option<KinkLines<T>>,
}

/// A density whose normal derivative jumps by `jump * f` across `x1 = 0` and
/// across `x2 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KinkLines<T> {
    pub jump: T,
    /// `f(0, x2_j)` for every column `j`.
    pub on_x1_zero: Vec<T>,
    /// `f(x1_i, 0)` for every row `i`.
    pub on_x2_zero: Vec<T>,
}

impl<T: Real> Field2D<T> {
    pub fn new(grid: XYGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid, values, kink: None })
    }

    pub fn with_kink(mut self, kink: KinkLines<T>) -> Result<Self> {
        let n = self.grid.axis.len();
        for len in [kink.on_x1_zero.len(), kink.on_x2_zero.len()] {
            if len != n {
                return Err(Error::LengthMismatch { expected: n, found: len });
            }
        }
        self.kink = Some(kink);
        Ok(self)
    }

    /// Evaluates `f(x1, x2)` at every node, rows in parallel.
    pub fn from_fn<F>(grid: XYGrid<T>, f: F) -> Self
    where
        F: Fn(usize, usize) -> T + Sync,
    {
        let n = grid.axis.len();
        let values = (0..n * n).into_par_iter().map(|idx| f(idx / n, idx % n)).collect();
        Self { grid, values, kink: None }
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.grid.axis.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[i * self.grid.axis.len() + j]
    }
}

/// Values the quadrature engine can integrate: reals and complex numbers.
pub trait Sample<T: Real>: Copy + Send + Sync {
    fn parts(self) -> (T, T);
    fn from_parts(re: T, im: T) -> Self;
}

impl<T: Real> Sample<T> for T {
    #[inline]
    fn parts(self) -> (T, T) {
        (self, T::zero())
    }

    #[inline]
    fn from_parts(re: T, _im: T) -> Self {
        re
    }
}

impl<T: Real> Sample<T> for Complex<T> {
    #[inline]
    fn parts(self) -> (T, T) {
        (self.re, self.im)
    }

    #[inline]
    fn from_parts(re: T, im: T) -> Self {
        Complex::new(re, im)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of real and imaginary parts, in iteration order.
pub(crate) fn compensated<T: Real, S: Sample<T>>(items: impl Iterator<Item = S>) -> S {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for s in items {
        let (a, b) = s.parts();
        re.add(a);
        im.add(b);
    }
    S::from_parts(re.value(), im.value())
}

/// Trapezoidal integral of `samples` over `grid`, accumulated left to right.
pub fn integrate_1d<T: Real, S: Sample<T>>(samples: &[S], grid: &UniformGrid<T>) -> Result<S> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), found: samples.len() });
    }
    Ok(compensated(samples.iter().enumerate().map(|(i, &s)| {
        let (re, im) = s.parts();
        let w = grid.weight(i);
        S::from_parts(re * w, im * w)
    })))
}

/// Sign quadrant of the `(x1, x2)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    /// `x1 > 0, x2 > 0`: both on the right.
    PlusPlus,
    /// `x1 < 0, x2 < 0`: both on the left.
    MinusMinus,
    /// `x1 > 0, x2 < 0`.
    PlusMinus,
    /// `x1 < 0, x2 > 0`.
    MinusPlus,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] =
        [Quadrant::PlusPlus, Quadrant::MinusMinus, Quadrant::PlusMinus, Quadrant::MinusPlus];

    fn signs(self) -> (i8, i8) {
        match self {
            Quadrant::PlusPlus => (1, 1),
            Quadrant::MinusMinus => (-1, -1),
            Quadrant::PlusMinus => (1, -1),
            Quadrant::MinusPlus => (-1, 1),
        }
    }
}

/// Fraction of a node that belongs to the half-line of the given sign.
#[inline]
fn side_share<T: Real>(x: T, sign: i8) -> T {
    if x == T::zero() {
        T::lit(0.5)
    } else if (x > T::zero()) == (sign > 0) {
        T::one()
    } else {
        T::zero()
    }
}

fn reduce_rows<T: Real>(density: &Field2D<T>, row_w: impl Fn(usize) -> T + Sync, col_w: impl Fn(usize) -> T + Sync) -> Result<T> {
    if density.values.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("density"));
    }
    let n = density.grid.axis.len();
    let rows: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let wi = row_w(i);
            if wi == T::zero() {
                return T::zero();
            }
            let s: CompensatedSum<T> =
                density.row(i).iter().enumerate().map(|(j, &v)| v * col_w(j)).collect();
            s.value() * wi
        })
        .collect();
    Ok(rows.into_iter().collect::<CompensatedSum<T>>().value())
}

/// Tensor-product trapezoidal integral of a density restricted to a quadrant.
///
/// A node on `x = 0` contributes half its weight to each adjacent quadrant, so
/// the four quadrants always add up to [`integrate_2d`].
///
/// If the density carries [`KinkLines`], the kink correction along each axis
/// line is split evenly between the two quadrants it separates.
pub fn integrate_2d_quadrant<T: Real>(density: &Field2D<T>, quadrant: Quadrant) -> Result<T> {
    let axis = density.grid.axis;
    let (s1, s2) = quadrant.signs();
    let w1 = |i: usize| axis.weight(i) * side_share(axis.node(i), s1);
    let w2 = |j: usize| axis.weight(j) * side_share(axis.node(j), s2);
    let bulk = reduce_rows(density, w1, w2)?;
    Ok(bulk + kink_correction(density, w1, w2) * T::lit(0.5))
}

pub fn integrate_2d<T: Real>(density: &Field2D<T>) -> Result<T> {
    let axis = density.grid.axis;
    let w = |i: usize| axis.weight(i);
    Ok(reduce_rows(density, w, w)? + kink_correction(density, w, w))
}

fn kink_correction<T: Real>(density: &Field2D<T>, w1: impl Fn(usize) -> T, w2: impl Fn(usize) -> T) -> T {
    let Some(k) = &density.kink else {
        return T::zero();
    };
    let kw = kink_weight(&density.grid.axis, T::zero());
    if kw == T::zero() {
        return T::zero();
    }
    let along_x2: CompensatedSum<T> = k.on_x1_zero.iter().enumerate().map(|(j, &v)| v * w2(j)).collect();
    let along_x1: CompensatedSum<T> = k.on_x2_zero.iter().enumerate().map(|(i, &v)| v * w1(i)).collect();
    k.jump * kw * (along_x1.value() + along_x2.value())
}

/// Largest wave-vector spacing for which the phase `K X - K^2 tau` advances
/// by less than `pi/4` per node.
pub fn max_k_spacing<T: Real>(x_extent: T, k_extent: T, tau: T) -> T {
    let rate = x_extent.abs() + T::lit(2.0) * k_extent.abs() * tau.abs();
    if rate == T::zero() {
        T::infinity()
    } else {
        T::PI() / (T::lit(4.0) * rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_over_unit_interval() {
        let g = UniformGrid::new(0.0, 1.0, 101).unwrap();
        let v = integrate_1d(&vec![1.0; 101], &g).unwrap();
        assert!((v - 1.0f64).abs() < 1e-12);
    }

    #[test]
    fn sine_over_half_period() {
        let g = UniformGrid::new(0.0, PI, 2001).unwrap();
        let s: Vec<f64> = g.nodes().map(f64::sin).collect();
        // antiderivative -cos gives 2
        assert!((integrate_1d(&s, &g).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_matches_erf_oracle() {
        let g = UniformGrid::new(-8.0f64, 8.0, 2001).unwrap();
        let s: Vec<f64> = g.nodes().map(|x| (-x * x).exp()).collect();
        // sqrt(pi) * erf(8), erf(8) = 1 - 1.1e-29
        assert!((integrate_1d(&s, &g).unwrap() - PI.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn complex_samples() {
        let g = UniformGrid::new(0.0, PI, 2001).unwrap();
        let s: Vec<Complex<f64>> = g.nodes().map(|x| Complex::new(x.cos(), x.sin())).collect();
        let v = integrate_1d(&s, &g).unwrap();
        assert!(v.re.abs() < 1e-6 && (v.im - 2.0).abs() < 1e-6);
    }

    #[test]
    fn length_mismatch_is_error() {
        let g = UniformGrid::new(0.0, 1.0, 11).unwrap();
        assert_eq!(
            integrate_1d(&[1.0; 10], &g),
            Err(Error::LengthMismatch { expected: 11, found: 10 })
        );
    }

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(UniformGrid::new(1.0, 1.0, 10).is_err());
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
        assert!(UniformGrid::new(0.0, f64::NAN, 10).is_err());
    }

    #[test]
    fn last_node_is_exact() {
        let g = UniformGrid::new(-25.0, 25.0, 1024).unwrap();
        assert_eq!(g.node(1023), 25.0);
        assert_eq!(g.node(0), -25.0);
    }

    fn gaussian_2d(c1: f64, c2: f64, n: usize) -> Field2D<f64> {
        let axis = UniformGrid::new(-10.0, 10.0, n).unwrap();
        let grid = XYGrid::square(axis);
        Field2D::from_fn(grid, |i, j| {
            let (x1, x2) = (axis.node(i), axis.node(j));
            (-(x1 - c1).powi(2) - (x2 - c2).powi(2)).exp() / PI
        })
    }

    #[test]
    fn quadrant_holds_localized_blob() {
        let d = gaussian_2d(5.0, 5.0, 401);
        let pp = integrate_2d_quadrant(&d, Quadrant::PlusPlus).unwrap();
        assert!((pp - 1.0).abs() < 1e-9);
        for q in [Quadrant::MinusMinus, Quadrant::PlusMinus, Quadrant::MinusPlus] {
            assert!(integrate_2d_quadrant(&d, q).unwrap() < 1e-9);
        }
    }

    #[test]
    fn inversion_symmetric_density() {
        let a = gaussian_2d(3.0, 4.0, 301);
        let b = gaussian_2d(-3.0, -4.0, 301);
        let sum = Field2D::new(a.grid, a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect())
            .unwrap();
        let pp = integrate_2d_quadrant(&sum, Quadrant::PlusPlus).unwrap();
        let mm = integrate_2d_quadrant(&sum, Quadrant::MinusMinus).unwrap();
        assert!((pp - mm).abs() < 1e-12);
    }

    #[test]
    fn zero_node_split_between_quadrants() {
        // odd node count puts x = 0 on the grid
        for n in [401, 400] {
            let d = gaussian_2d(0.3, -0.2, n);
            let total = integrate_2d(&d).unwrap();
            let parts: f64 =
                Quadrant::ALL.iter().map(|&q| integrate_2d_quadrant(&d, q).unwrap()).sum();
            assert!((parts - total).abs() < 1e-12 * total);
        }
    }

    #[test]
    fn nan_density_rejected() {
        let mut d = gaussian_2d(0.0, 0.0, 11);
        d.values[5] = f64::NAN;
        assert_eq!(integrate_2d_quadrant(&d, Quadrant::PlusPlus), Err(Error::NonFinite("density")));
    }

    #[test]
    fn kink_correction_recovers_abs_exponential() {
        // f = e^{-2|x|}: f'(0+) - f'(0-) = -4 f(0), exact integral 1
        for n in [400usize, 401, 1000, 1024] {
            let g = UniformGrid::new(-20.0, 20.0, n).unwrap();
            let f = Field1D { grid: g, values: g.nodes().map(|x: f64| (-2.0 * x.abs()).exp()).collect() };
            let plain = f.integrate().unwrap();
            let fixed = f.integrate_kinked(-4.0, 1.0).unwrap();
            assert!((fixed - 1.0).abs() < 0.05 * (plain - 1.0).abs().max(1e-12), "n = {n}: {plain} -> {fixed}");
            assert!((fixed - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn kink_weight_outside_grid_is_zero() {
        let g = UniformGrid::new(1.0f64, 2.0, 11).unwrap();
        assert_eq!(kink_weight(&g, 0.0), 0.0);
    }

    #[test]
    fn kinked_quadrants_still_partition_total() {
        let axis = UniformGrid::new(-10.0f64, 10.0, 300).unwrap();
        let grid = XYGrid::square(axis);
        let f = |x: f64, y: f64| (-2.0 * x.abs() - 2.0 * y.abs()).exp();
        let d = Field2D::from_fn(grid, |i, j| f(axis.node(i), axis.node(j)))
            .with_kink(KinkLines {
                jump: -4.0,
                on_x1_zero: axis.nodes().map(|y| f(0.0, y)).collect(),
                on_x2_zero: axis.nodes().map(|x| f(x, 0.0)).collect(),
            })
            .unwrap();
        let total = integrate_2d(&d).unwrap();
        let parts: f64 = Quadrant::ALL.iter().map(|&q| integrate_2d_quadrant(&d, q).unwrap()).sum();
        assert!((parts - total).abs() < 1e-12);
        assert!((total - 1.0).abs() < 1e-5, "{total}");
    }

    #[test]
    fn spacing_gate() {
        let h = max_k_spacing(25.0, 20.0, 1.0);
        assert!((h - PI / (4.0 * 65.0)).abs() < 1e-15);
        let g = UniformGrid::with_max_spacing(0.0, 20.0, h, 4097).unwrap();
        assert!(g.spacing() <= h);
        assert_eq!(g.len(), 4097);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let d = gaussian_2d(1.0, -2.0, 257);
        let run = |t| {
            rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(|| {
                integrate_2d_quadrant(&d, Quadrant::PlusMinus).unwrap()
            })
        };
        assert_eq!(run(1).to_bits(), run(4).to_bits());
    }

    proptest! {
        #[test]
        fn integration_is_linear(
            a in -10f64..10.0, b in -10f64..10.0,
            f in prop::collection::vec(-1f64..1.0, 64),
            g in prop::collection::vec(-1f64..1.0, 64),
        ) {
            let grid = UniformGrid::new(-1.0, 3.0, 64).unwrap();
            let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
            let lhs = integrate_1d(&mix, &grid).unwrap();
            let rhs = a * integrate_1d(&f, &grid).unwrap() + b * integrate_1d(&g, &grid).unwrap();
            let scale = grid.spacing() * f.iter().zip(&g).map(|(x, y)| (a * x).abs() + (b * y).abs()).sum::<f64>();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn quadrants_partition_total(c1 in -3f64..3.0, c2 in -3f64..3.0, n in 20usize..80) {
            let d = gaussian_2d(c1, c2, n);
            let total = integrate_2d(&d).unwrap();
            let parts: f64 = Quadrant::ALL.iter().map(|&q| integrate_2d_quadrant(&d, q).unwrap()).sum();
            prop_assert!((parts - total).abs() <= 1e-12 * total);
        }
    }
}
