#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// A CSV written by the runner: `# key=value` lines, a header row, data.
pub struct Csv {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut meta = Vec::new();
        let mut lines = text.lines();
        let mut header = None;
        for line in lines.by_ref() {
            match line.strip_prefix("# ") {
                Some(kv) => {
                    let (k, v) = kv.split_once('=').expect("key=value");
                    meta.push((k.to_string(), v.to_string()));
                }
                None => {
                    header = Some(line);
                    break;
                }
            }
        }
        let columns = header.expect("header row").split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Csv { meta, columns, rows }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn col(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    /// Value in column `name` on the row whose first cell is `key`.
    pub fn lookup(&self, key: &str, name: &str) -> f64 {
        let i = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        let row = self.rows.iter().find(|r| r[0] == key).unwrap_or_else(|| panic!("no row {key}"));
        row[i].parse().unwrap()
    }
}

pub fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_deltahom"))
}

pub fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(&path, text).unwrap();
    path
}

/// Every file under `dir`, relative path and contents, sorted.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

/// Balanced pair at the well, small enough to run in seconds.
pub const PAIR: &str = r#"
name = "pair"
[well]
lambda = 10.0
[packet1]
s0 = -5.0
k0 = 10.0
[packet2]
s0 = 5.0
k0 = -10.0
[grid]
r_n = 512
density_n = 41
[time]
taus = [0.0]
"#;
