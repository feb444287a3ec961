//! Built-in figure scenarios, embedded from `scenarios/`.

use std::path::{Path, PathBuf};

use crate::config::{Kind, Scenario};
use crate::error::CliError;
use crate::run::run;

pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
    /// Runs beyond the scenario's own kind; written to a subdirectory each.
    pub extra: &'static [Kind],
}

macro_rules! entry {
    ($name:literal $(, $extra:expr)*) => {
        Entry {
            name: $name,
            text: include_str!(concat!("../scenarios/", $name, ".toml")),
            extra: &[$($extra),*],
        }
    };
}

pub const CATALOG: &[Entry] = &[
    entry!("fig1"),
    entry!("fig1d"),
    entry!("fig3", Kind::Frames),
    entry!("fig4"),
    entry!("fig5a"),
    entry!("fig5b"),
    entry!("fig5c"),
    entry!("fig6a"),
    entry!("fig6b"),
    entry!("fig6c"),
];

pub fn find(name: &str) -> Result<&'static Entry, CliError> {
    CATALOG.iter().find(|e| e.name == name).ok_or_else(|| {
        let names: Vec<_> = CATALOG.iter().map(|e| e.name).collect();
        CliError::Config(format!("unknown catalog scenario \"{name}\" (known: {})", names.join(", ")))
    })
}

impl Entry {
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        Scenario::from_toml(self.text)
    }

    pub fn kind(&self) -> Result<Kind, CliError> {
        self.scenario()?.kind.ok_or_else(|| CliError::Config(format!("{}: catalog entry without kind", self.name)))
    }

    /// Runs the entry into `out/<name>/`, with extra kinds in
    /// `out/<name>/<kind>/`. `mode` overrides the file's mode.
    pub fn run(&self, out: &Path, mode: Option<&str>) -> Result<Vec<PathBuf>, CliError> {
        let mut sc = self.scenario()?;
        if let Some(m) = mode {
            sc.mode = m.to_string();
        }
        let dir = out.join(self.name);
        let mut files = run(self.kind()?, &sc, &dir)?;
        for &k in self.extra {
            files.extend(run(k, &sc, &dir.join(k.name()))?);
        }
        Ok(files)
    }
}
