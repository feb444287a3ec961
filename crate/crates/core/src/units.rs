//! Dimensionless unit system and run configuration.
//!
//! Lengths are measured in units of `1/sqrt(delta)`, where `delta` is the
//! Gaussian width parameter of the incident packets. With `m`, `hbar` and the
//! well strength `alpha`:
//!
//! | quantity        | dimensionless form          |
//! |-----------------|-----------------------------|
//! | position        | `X = sqrt(delta) x`         |
//! | wave vector     | `K = k / sqrt(delta)`       |
//! | time            | `tau = delta hbar t / (2m)` |
//! | well depth      | `Lambda = m alpha / (hbar^2 sqrt(delta))` |
//!
//! Every other module works in these units with `delta = 1`.

use std::fmt;

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem<T> {
    pub delta: T,
    pub mass: T,
    pub hbar: T,
}

impl<T: Real> UnitSystem<T> {
    pub fn new(delta: T, mass: T, hbar: T) -> Option<Self> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        (ok(delta) && ok(mass) && ok(hbar)).then_some(Self { delta, mass, hbar })
    }

    /// Natural units: `delta = m = hbar = 1`.
    pub fn natural() -> Self {
        Self { delta: T::one(), mass: T::one(), hbar: T::one() }
    }

    pub fn position_to_dimensionless(&self, x: T) -> T {
        self.delta.sqrt() * x
    }

    pub fn position_to_physical(&self, x: T) -> T {
        x / self.delta.sqrt()
    }

    pub fn wave_vector_to_dimensionless(&self, k: T) -> T {
        k / self.delta.sqrt()
    }

    pub fn wave_vector_to_physical(&self, k: T) -> T {
        k * self.delta.sqrt()
    }

    pub fn time_to_dimensionless(&self, t: T) -> T {
        self.delta * self.hbar * t / (T::lit(2.0) * self.mass)
    }

    pub fn time_to_physical(&self, tau: T) -> T {
        tau * T::lit(2.0) * self.mass / (self.delta * self.hbar)
    }

    /// `Lambda` from the well strength `alpha` of `V(x) = -alpha delta(x)`.
    pub fn well_depth_to_dimensionless(&self, alpha: T) -> T {
        self.mass * alpha / (self.hbar * self.hbar * self.delta.sqrt())
    }

    pub fn well_depth_to_physical(&self, lambda: T) -> T {
        lambda * self.hbar * self.hbar * self.delta.sqrt() / self.mass
    }
}

/// The delta well at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig<T> {
    pub lambda: T,
}

impl<T: Real> WellConfig<T> {
    pub fn new(lambda: T) -> Self {
        Self { lambda }
    }

    pub fn free() -> Self {
        Self { lambda: T::zero() }
    }

    /// `beta(K) = Lambda / K`.
    pub fn beta(&self, k: T) -> T {
        self.lambda / k
    }

    pub fn is_free(&self) -> bool {
        self.lambda == T::zero()
    }
}

/// Side of the well a packet starts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A normalized Gaussian packet `(2/pi)^{1/4} exp(-(X-S)^2) exp(i K0 X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketConfig<T> {
    pub s0: T,
    pub k0: T,
}

impl<T: Real> PacketConfig<T> {
    pub fn new(s0: T, k0: T) -> Self {
        Self { s0, k0 }
    }

    /// Side the packet is incident from, judged by the direction of motion.
    pub fn incidence(&self) -> Side {
        if self.k0 > T::zero() {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn is_incoming(&self) -> bool {
        self.s0 * self.k0 < T::zero()
    }

    /// Ballistic centre `S + 2 K0 tau`. The well never shifts Gaussian centres.
    pub fn center_at(&self, tau: T) -> T {
        self.s0 + T::lit(2.0) * self.k0 * tau
    }

    /// Mirror image under `X -> -X`.
    pub fn mirrored(&self) -> Self {
        Self { s0: -self.s0, k0: -self.k0 }
    }
}

/// Spin of the right-incident particle, `c|u> + d|v>`; the left one is `|u>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConfig<T> {
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> SpinConfig<T> {
    pub fn new(c: Complex<T>, d: Complex<T>) -> Self {
        Self { c, d }
    }

    /// Real overlap `c`, with `d = sqrt(1 - c^2)`.
    pub fn from_overlap(c: T) -> Self {
        let d = (T::one() - c * c).max(T::zero()).sqrt();
        Self { c: Complex::new(c, T::zero()), d: Complex::new(d, T::zero()) }
    }

    pub fn identical() -> Self {
        Self::from_overlap(T::one())
    }

    /// `|c|^2`, the weight of the exchange term.
    pub fn overlap_weight(&self) -> T {
        self.c.norm_sqr()
    }

    pub fn norm_sqr(&self) -> T {
        self.c.norm_sqr() + self.d.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [Statistics::Boson, Statistics::Fermion, Statistics::Distinguishable];

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Distinguishable => "distinguishable",
        }
    }

    /// Sign of the exchange term: `+1`, `-1`, or `0` for distinguishable particles.
    pub fn exchange_sign(self) -> i8 {
        match self {
            Statistics::Boson => 1,
            Statistics::Fermion => -1,
            Statistics::Distinguishable => 0,
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boson" | "+" => Ok(Statistics::Boson),
            "fermion" | "-" => Ok(Statistics::Fermion),
            "distinguishable" | "D" => Ok(Statistics::Distinguishable),
            other => Err(format!("unknown statistics '{other}'")),
        }
    }
}

/// Which superposition coefficient to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Full projection onto both incidence directions.
    Exact,
    /// Narrow-band Gaussian coefficient, single incidence direction.
    Approximate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Approximate => "approximate",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approximate" => Ok(Mode::Approximate),
            other => Err(format!("unknown mode '{other}' (expected exact|approximate)")),
        }
    }
}

/// Minimum `|S|` and `|K0|` for approximate-mode runs.
pub const NARROW_BAND_GATE: f64 = 3.0;

const SPIN_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ValidationIssue { field: field.into(), message: message.into() });
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn mentions(&self, field: &str) -> bool {
        self.issues.iter().any(|i| i.field == field)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            writeln!(f, "  {}: {}", issue.field, issue.message)?;
        }
        Ok(())
    }
}

/// A configuration that passed [`validate_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScenario<T> {
    pub well: WellConfig<T>,
    pub packets: Vec<PacketConfig<T>>,
    pub spin: SpinConfig<T>,
    pub mode: Mode,
}

/// Checks every configuration invariant and reports all violations at once.
///
/// One packet describes a single-particle run; two packets a two-particle
/// run, the first incident from the left and the second from the right.
pub fn validate_scenario<T: Real>(
    well: WellConfig<T>,
    packets: &[PacketConfig<T>],
    spin: SpinConfig<T>,
    mode: Mode,
) -> Result<ValidatedScenario<T>, ValidationReport> {
    let mut report = ValidationReport::default();

    if !well.lambda.is_finite() || well.lambda < T::zero() {
        report.push("well.lambda", format!("must be finite and >= 0, got {}", well.lambda));
    }

    if packets.is_empty() || packets.len() > 2 {
        report.push("packets", format!("expected 1 or 2 packets, got {}", packets.len()));
    }

    let gate = T::lit(NARROW_BAND_GATE);
    for (i, p) in packets.iter().enumerate() {
        let field = |name: &str| format!("packet{}.{}", i + 1, name);
        if !p.s0.is_finite() || !p.k0.is_finite() {
            report.push(field("s0"), "s0 and k0 must be finite");
            continue;
        }
        if p.k0 == T::zero() {
            report.push(field("k0"), "central wave vector must be non-zero");
            continue;
        }
        if p.s0 == T::zero() {
            report.push(field("s0"), "packet starts on the well");
        } else if !p.is_incoming() {
            report.push(
                field("k0"),
                format!("packet moves away from well (s0 = {}, k0 = {})", p.s0, p.k0),
            );
        }
        if mode == Mode::Approximate {
            if p.s0.abs() < gate {
                report.push(
                    field("s0"),
                    format!("approximate mode needs |s0| >= {NARROW_BAND_GATE}, got {}", p.s0),
                );
            }
            if p.k0.abs() < gate {
                report.push(
                    field("k0"),
                    format!("approximate mode needs |k0| >= {NARROW_BAND_GATE}, got {}", p.k0),
                );
            }
        }
    }

    if packets.len() == 2 {
        if packets[0].s0 >= T::zero() {
            report.push("packet1.s0", "packet 1 must start left of the well");
        }
        if packets[1].s0 <= T::zero() {
            report.push("packet2.s0", "packet 2 must start right of the well");
        }
    }

    let norm = spin.norm_sqr();
    if !norm.is_finite() || (norm - T::one()).abs() > T::guard(SPIN_NORM_TOL) {
        report.push("spin", format!("|c|^2 + |d|^2 must be 1, got {norm}"));
    }

    if report.is_empty() {
        Ok(ValidatedScenario { well, packets: packets.to_vec(), spin, mode })
    } else {
        Err(report)
    }
}
