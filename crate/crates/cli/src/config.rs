//! Scenario files: one TOML document per scenario.

use std::path::Path;

use deltahom::{
    validate_scenario, Complex64, Mode, PacketConfig64, SpectralSettings, SpinConfig64, UnitSystem,
    ValidatedScenario, WellConfig64,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Single,
    #[serde(alias = "two_particle")]
    Two,
    Sweep,
    Frames,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Single => "single",
            Kind::Two => "two",
            Kind::Sweep => "sweep",
            Kind::Frames => "frames",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: Option<Kind>,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub units: UnitsSection,
    pub well: WellSection,
    pub packet1: PacketSection,
    pub packet2: Option<PacketSection>,
    #[serde(default)]
    pub spin: SpinSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

fn default_mode() -> String {
    "approximate".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSection {
    pub delta: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for UnitsSection {
    fn default() -> Self {
        Self { delta: 1.0, mass: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellSection {
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSection {
    pub s0: f64,
    pub k0: f64,
}

impl From<PacketSection> for PacketConfig64 {
    fn from(p: PacketSection) -> Self {
        PacketConfig64::new(p.s0, p.k0)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinSection {
    pub c_re: f64,
    pub c_im: f64,
    pub d_re: f64,
    pub d_im: f64,
}

impl Default for SpinSection {
    fn default() -> Self {
        Self { c_re: 1.0, c_im: 0.0, d_re: 0.0, d_im: 0.0 }
    }
}

impl SpinSection {
    pub fn to_config(&self) -> SpinConfig64 {
        SpinConfig64::new(Complex64::new(self.c_re, self.c_im), Complex64::new(self.d_re, self.d_im))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub k_window: f64,
    pub k_nodes: usize,
    pub r_max: f64,
    pub r_n: usize,
    /// Nodes per axis of the density grids written to disk.
    pub density_n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            x_min: -25.0,
            x_max: 25.0,
            n: 1024,
            k_window: deltahom::scattering::DEFAULT_K_WINDOW,
            k_nodes: deltahom::scattering::DEFAULT_K_NODES,
            r_max: 30.0,
            r_n: 2048,
            density_n: 201,
        }
    }
}

impl GridSection {
    pub fn spectral(&self) -> SpectralSettings<f64> {
        SpectralSettings { k_window: self.k_window, k_nodes: self.k_nodes }
    }
}

/// `tau_final = "auto"` or a number.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TauFinal {
    Value(f64),
    Keyword(String),
}

impl Default for TauFinal {
    fn default() -> Self {
        TauFinal::Keyword("auto".into())
    }
}

impl TauFinal {
    /// `None` means "first time scattering is complete".
    pub fn fixed(&self) -> Result<Option<f64>, CliError> {
        match self {
            TauFinal::Value(v) => Ok(Some(*v)),
            TauFinal::Keyword(k) if k == "auto" => Ok(None),
            TauFinal::Keyword(k) => Err(CliError::Config(format!("time.tau_final: expected \"auto\" or a number, got \"{k}\""))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub taus: Vec<f64>,
    pub tau_final: TauFinal,
    pub frames: usize,
    pub tau_end: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self { taus: vec![0.0], tau_final: TauFinal::default(), frames: 60, tau_end: 1.0 }
    }
}

/// Parameter lists. Empty lists fall back to the scenario's own value.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Central wave vectors for the single-particle transmission table.
    pub k0: Vec<f64>,
    pub lambda: Vec<f64>,
    /// Target plane-wave transmissions, realised through the well depth at
    /// the first packet's wave vector.
    pub transmission: Vec<f64>,
    pub s2: Vec<f64>,
    pub k02: Vec<f64>,
    pub c: Vec<f64>,
    /// Write separation curves when the later outgoing packet is this far
    /// from the well.
    pub separation_distance: Option<f64>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        self.mode.parse().map_err(CliError::Config)
    }

    pub fn packets(&self) -> Vec<PacketConfig64> {
        std::iter::once(self.packet1).chain(self.packet2).map(Into::into).collect()
    }

    pub fn well(&self) -> WellConfig64 {
        WellConfig64::new(self.well.lambda)
    }

    /// Checks units, grids and the physical configuration; every problem is
    /// reported at once.
    pub fn validate(&self) -> Result<ValidatedScenario<f64>, CliError> {
        let mut problems = Vec::new();
        if UnitSystem::new(self.units.delta, self.units.mass, self.units.hbar).is_none() {
            problems.push("units: delta, mass and hbar must be positive".to_string());
        }
        let g = &self.grid;
        if !(g.x_min < g.x_max) || g.n < 2 {
            problems.push(format!("grid: need x_min < x_max and n >= 2, got [{}, {}] with {}", g.x_min, g.x_max, g.n));
        }
        if !(g.k_window > 0.0) || g.k_nodes < 2 {
            problems.push("grid: k_window must be positive and k_nodes >= 2".into());
        }
        if !(g.r_max > 0.0) || g.r_n < 2 || g.density_n < 2 {
            problems.push("grid: r_max must be positive, r_n and density_n >= 2".into());
        }
        let t = &self.time;
        if t.taus.iter().any(|&v| !(v >= 0.0)) || !(t.tau_end >= 0.0) {
            problems.push("time: times must be >= 0".into());
        }
        if let Err(e) = t.tau_final.fixed() {
            problems.push(e.to_string());
        }
        let mode = match self.mode() {
            Ok(m) => Some(m),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        };
        if let Some(mode) = mode {
            if let Err(report) = validate_scenario(self.well(), &self.packets(), self.spin.to_config(), mode) {
                problems.extend(report.issues.iter().map(|i| format!("{}: {}", i.field, i.message)));
            }
        }
        if problems.is_empty() {
            Ok(validate_scenario(self.well(), &self.packets(), self.spin.to_config(), mode.unwrap())
                .expect("checked above"))
        } else {
            Err(CliError::Validation(problems))
        }
    }

    /// `key=value` lines describing everything that determines the output.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> = vec![
            ("name".into(), self.name.clone()),
            ("mode".into(), self.mode.clone()),
            ("units.delta".into(), num(self.units.delta)),
            ("units.mass".into(), num(self.units.mass)),
            ("units.hbar".into(), num(self.units.hbar)),
            ("well.lambda".into(), num(self.well.lambda)),
            ("packet1.s0".into(), num(self.packet1.s0)),
            ("packet1.k0".into(), num(self.packet1.k0)),
        ];
        if let Some(p) = self.packet2 {
            v.push(("packet2.s0".into(), num(p.s0)));
            v.push(("packet2.k0".into(), num(p.k0)));
            v.push(("spin.c".into(), format!("{}+{}i", num(self.spin.c_re), num(self.spin.c_im))));
            v.push(("spin.d".into(), format!("{}+{}i", num(self.spin.d_re), num(self.spin.d_im))));
        }
        let g = &self.grid;
        v.push(("grid.x".into(), format!("[{},{}]x{}", num(g.x_min), num(g.x_max), g.n)));
        v.push(("grid.k".into(), format!("window={},nodes={}", num(g.k_window), g.k_nodes)));
        v.push(("grid.r".into(), format!("[0,{}]x{}", num(g.r_max), g.r_n)));
        v.push(("grid.density_n".into(), g.density_n.to_string()));
        let t = &self.time;
        v.push(("time.taus".into(), list(&t.taus)));
        let tau_final = match &t.tau_final {
            TauFinal::Value(x) => num(*x),
            TauFinal::Keyword(k) => k.clone(),
        };
        v.push(("time.tau_final".into(), tau_final));
        v.push(("time.frames".into(), t.frames.to_string()));
        v.push(("time.tau_end".into(), num(t.tau_end)));
        let s = &self.sweep;
        for (key, values) in
            [("k0", &s.k0), ("lambda", &s.lambda), ("transmission", &s.transmission), ("s2", &s.s2), ("k02", &s.k02), ("c", &s.c)]
        {
            if !values.is_empty() {
                v.push((format!("sweep.{key}"), list(values)));
            }
        }
        if let Some(d) = s.separation_distance {
            v.push(("sweep.separation_distance".into(), num(d)));
        }
        v
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn list(values: &[f64]) -> String {
    format!("[{}]", values.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        name = "t"
        [well]
        lambda = 10.0
        [packet1]
        s0 = -5.0
        k0 = 10.0
    "#;

    #[test]
    fn defaults_fill_missing_sections() {
        let s = Scenario::from_toml(MINIMAL).unwrap();
        assert_eq!(s.grid.n, 1024);
        assert_eq!(s.mode().unwrap(), Mode::Approximate);
        assert!(s.time.tau_final.fixed().unwrap().is_none());
        assert!(s.validate().is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}\nbogus = 1\n");
        assert!(matches!(Scenario::from_toml(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn all_problems_reported() {
        let text = MINIMAL.replace("k0 = 10.0", "k0 = -10.0").replace("lambda = 10.0", "lambda = -1.0");
        let text = format!("{text}\n[grid]\nn = 1\n");
        match Scenario::from_toml(&text).unwrap().validate() {
            Err(CliError::Validation(p)) => {
                assert!(p.iter().any(|m| m.starts_with("grid")));
                assert!(p.iter().any(|m| m.starts_with("well.lambda")));
                assert!(p.iter().any(|m| m.contains("away from")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tau_final_keyword() {
        let text = format!("{MINIMAL}\n[time]\ntau_final = \"later\"\n");
        assert!(Scenario::from_toml(&text).unwrap().validate().is_err());
        let text = format!("{MINIMAL}\n[time]\ntau_final = 0.8\n");
        assert_eq!(Scenario::from_toml(&text).unwrap().time.tau_final.fixed().unwrap(), Some(0.8));
    }
}
