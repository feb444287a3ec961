//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILING` are checked exactly as stated and are
//! expected to fail; see the README for why. Any other failure makes the
//! target exit non-zero.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use common::{binary, snapshot, Csv};
use deltahom::*;
use deltahom_cli::catalog::CATALOG;
use deltahom_cli::{run, Kind, Scenario};

const KNOWN_FAILING: &[usize] = &[1, 4];

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

struct Ctx {
    _tmp: tempfile::TempDir,
    catalog: PathBuf,
    catalog_errors: Vec<String>,
    sweep: std::result::Result<Csv, String>,
    root: PathBuf,
}

impl Ctx {
    fn csv(&self, rel: &str) -> Csv {
        Csv::read(&self.catalog.join(rel))
    }
}

fn free_gaussian(x: f64, tau: f64, s: f64, k0: f64) -> Complex64 {
    let width = Complex64::new(1.0, 4.0 * tau);
    let y = x - s - 2.0 * k0 * tau;
    let norm = (2.0 / std::f64::consts::PI).powf(0.25);
    let phase = Complex64::new(0.0, k0 * x - k0 * k0 * tau);
    (-(y * y) / width + phase).exp() * norm / width.sqrt()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn balanced_pair() -> TwoParticleState64 {
    let left = WavePacket64::from_config(Mode::Approximate, PacketConfig::new(-5.0, 10.0), WellConfig::new(10.0));
    let right = WavePacket64::from_config(Mode::Approximate, PacketConfig::new(5.0, -10.0), WellConfig::new(10.0));
    TwoParticleState64::new(left, right, Statistics::Fermion, SpinConfig::identical()).unwrap()
}

fn plane_wave_point(_: &Ctx) -> Check {
    let pw = plane_wave_t(10.0, 10.0).unwrap();
    let p = WavePacket64::from_config(Mode::Approximate, PacketConfig::new(-5.0, 10.0), WellConfig::new(10.0));
    let t = p.wavepacket_t();
    let ok = pw == 0.5 && (0.5..=0.51).contains(&t) && t >= pw;
    check(ok, format!("plane wave T = {pw}, packet T = {t:.9} (want [0.5, 0.51] and >= plane wave)"))
}

fn free_oracle(_: &Ctx) -> Check {
    let grid = Grid64::new(-25.0, 25.0, 1024).unwrap();
    let p = WavePacket64::from_config(Mode::Approximate, PacketConfig::new(-5.0, 10.0), WellConfig::free());
    let mut worst = 0.0f64;
    for tau in [0.0, 0.25, 0.5] {
        let f = p.evolve(&grid, tau).unwrap();
        for (x, v) in grid.nodes().zip(&f.values) {
            worst = worst.max((v - free_gaussian(x, tau, -5.0, 10.0)).norm());
        }
    }
    check(worst <= 1e-8, format!("max |error| = {worst:.3e} (limit 1e-8)"))
}

fn catalog_norms(ctx: &Ctx) -> Check {
    if !ctx.catalog_errors.is_empty() {
        return check(false, ctx.catalog_errors.join("; "));
    }
    let mut worst = (0.0f64, String::new());
    let mut note = |v: f64, what: String| {
        if v > worst.0 {
            worst = (v, what);
        }
    };
    for e in CATALOG {
        let dir = ctx.catalog.join(e.name);
        let sources: &[(&str, &[&str])] = &[
            ("prob_right.csv", &["norm"]),
            ("norms.csv", &["packet1", "packet2"]),
            ("quadrants.csv", &["total"]),
        ];
        for (file, cols) in sources {
            if dir.join(file).exists() {
                let csv = Csv::read(&dir.join(file));
                for c in *cols {
                    for v in csv.col(c) {
                        note((v - 1.0).abs(), format!("{}/{file}:{c}", e.name));
                    }
                }
            }
        }
        if dir.join("sweep.csv").exists() {
            for v in Csv::read(&dir.join("sweep.csv")).col("norm_drift") {
                note(v, format!("{}/sweep.csv", e.name));
            }
        }
    }
    check(worst.0 <= 2e-3, format!("max |norm - 1| = {:.3e} at {} (limit 2e-3)", worst.0, worst.1))
}

fn hom_optimum(ctx: &Ctx) -> Check {
    let s = ctx.csv("fig3/same_side.csv");
    let get = |stat, col| s.lookup(stat, col);
    let (b, f, d) = (get("boson", "numeric"), get("fermion", "numeric"), get("distinguishable", "numeric"));
    let complement = ["boson", "fermion", "distinguishable"]
        .iter()
        .all(|st| (get(st, "numeric") + get(st, "coincidence_numeric") - 1.0).abs() <= 1e-12);
    let ok = (b - 1.0).abs() <= 1e-2 && f <= 1e-3 && (d - 0.5).abs() <= 1e-2 && complement;
    check(ok, format!("P+ = {b:.6}, P- = {f:.3e} (limit 1e-3), PD = {d:.6}, complements {complement}"))
}

fn sweep(ctx: &Ctx) -> &Csv {
    ctx.sweep.as_ref().unwrap_or_else(|e| panic!("sweep failed: {e}"))
}

fn splitting_law(ctx: &Ctx) -> Check {
    let s = sweep(ctx);
    let (t, s2, k02, c) = (s.col("transmission1"), s.col("s2"), s.col("k02"), s.col("c"));
    let (bp, bm, bd) = (s.col("numeric_plus"), s.col("numeric_minus"), s.col("numeric_d"));
    let mut worst = 0.0f64;
    let mut plus = Vec::new();
    for i in 0..t.len() {
        if s2[i] == 5.0 && k02[i] == -10.0 && c[i] == 1.0 {
            let tt = t[i];
            worst = worst.max((bp[i] - 4.0 * tt * (1.0 - tt)).abs()).max(bm[i]).max((bd[i] - 2.0 * tt * (1.0 - tt)).abs());
            plus.push((tt, bp[i]));
        }
    }
    let find = |x: f64| plus.iter().find(|(tt, _)| (tt - x).abs() < 1e-9).map(|p| p.1).unwrap();
    let recip = (find(0.2) - find(0.8)).abs();
    check(
        plus.len() == 3 && worst <= 1e-2 && recip <= 1e-2,
        format!("max deviation {worst:.3e}, |P+(0.2) - P+(0.8)| = {recip:.3e} (limits 1e-2)"),
    )
}

fn equivalence_sweep(ctx: &Ctx) -> Check {
    let s = sweep(ctx);
    let worst = ["diff_plus", "diff_minus", "diff_d"]
        .iter()
        .flat_map(|c| s.col(c))
        .fold(0.0f64, |m, v| m.max(v.abs()));
    check(s.rows.len() == 81 && worst <= 1e-2, format!("{} points, max |numeric - closed form| = {worst:.3e} (limit 1e-2)", s.rows.len()))
}

fn pauli(ctx: &Ctx) -> Check {
    let state = balanced_pair();
    let grid = Grid64::new(-25.0, 25.0, 1024).unwrap();
    let r = Grid64::new(0.0, 30.0, 2048).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=10 {
        let tau = 0.1 * i as f64;
        let d = state.separation_distribution(&grid, &r, tau).unwrap();
        worst = worst.max(d.at_contact().abs());
    }
    let mut files = Vec::new();
    for name in ["fig3", "fig4", "fig6a", "fig6b"] {
        for e in std::fs::read_dir(ctx.catalog.join(name)).unwrap() {
            let p = e.unwrap().path();
            if p.file_name().unwrap().to_string_lossy().starts_with("separation_") {
                files.push(p);
            }
        }
    }
    for p in &files {
        worst = worst.max(Csv::read(p).col("fermion")[0].abs());
    }
    let partial = ctx.csv("fig6c/sweep.csv");
    let idx = partial.col("c").iter().position(|&c| c == 0.6).unwrap();
    let contact = partial.col("fermion_contact")[idx];
    check(
        worst <= 1e-10 && contact > 0.0,
        format!("c = 1: max fermion P_sep(0) = {worst:.3e} over 11 times and {} files; c = 0.6: {contact:.4e}", files.len()),
    )
}

fn exponential_sensitivity(ctx: &Ctx) -> Check {
    // energy offsets also change T2, so that series is divided by the
    // transmission prefactor 2 sqrt(T1 R1 T2 R2)
    let series = |file: &str, key: &str, prefix: &str| {
        let s = ctx.csv(file);
        let (t1, t2) = (s.col("transmission1"), s.col("transmission2"));
        let (p, d) = (s.col(&format!("{prefix}_plus")), s.col(&format!("{prefix}_d")));
        let x: Vec<f64> = match key {
            "s2" => s.col("s2").iter().map(|s2| (s2 - 5.0).powi(2)).collect(),
            _ => s.col("k02").iter().map(|k| (10.0 + k).powi(2) / 4.0).collect(),
        };
        let y: Vec<f64> = (0..p.len())
            .map(|i| {
                let amp = if key == "s2" { 1.0 } else { 2.0 * (t1[i] * (1.0 - t1[i]) * t2[i] * (1.0 - t2[i])).sqrt() };
                ((p[i] - d[i]) / amp).ln()
            })
            .collect();
        slope(&x, &y)
    };
    let closed = [series("fig6a/sweep.csv", "s2", "closed"), series("fig6b/sweep.csv", "k02", "closed")];
    let numeric = [series("fig6a/sweep.csv", "s2", "numeric"), series("fig6b/sweep.csv", "k02", "numeric")];
    let ok = closed.iter().all(|s| (s + 1.0).abs() <= 1e-9) && numeric.iter().all(|s| (s + 1.0).abs() <= 0.05);
    check(
        ok,
        format!(
            "delay slope closed {:.12} numeric {:.4}; energy slope closed {:.12} numeric {:.4} (target -1 +- 0.05)",
            closed[0], numeric[0], closed[1], numeric[1]
        ),
    )
}

fn spin_law(ctx: &Ctx) -> Check {
    let s = ctx.csv("fig6c/sweep.csv");
    let c = s.col("c");
    let full = c.iter().position(|&v| v == 1.0).unwrap();
    let mut worst = [0.0f64; 2];
    for (k, prefix) in ["closed", "numeric"].iter().enumerate() {
        let d = s.col(&format!("{prefix}_d"));
        for side in ["plus", "minus"] {
            let p = s.col(&format!("{prefix}_{side}"));
            for i in 0..c.len() {
                let expect = c[i] * c[i] * (p[full] - d[full]);
                worst[k] = worst[k].max((p[i] - d[i] - expect).abs());
            }
        }
    }
    check(
        worst[0] <= 1e-10 && worst[1] <= 1e-2,
        format!("max |P(c) - PD - c^2 (P(1) - PD)|: closed {:.3e} (limit 1e-10), numeric {:.3e} (limit 1e-2)", worst[0], worst[1]),
    )
}

fn determinism(ctx: &Ctx) -> Check {
    let run_with = |threads: &str| -> PathBuf {
        let out = ctx.root.join(format!("threads{threads}"));
        let st = binary().args(["--threads", threads, "catalog", "fig3", "--out"]).arg(&out).output().unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
        out.join("fig3")
    };
    let one = snapshot(&run_with("1"));
    let many = snapshot(&run_with("4"));
    let in_process = snapshot(&ctx.catalog.join("fig3"));
    let ok = !one.is_empty() && one == many && one == in_process;
    check(ok, format!("{} files, threads 1 vs 4 identical: {}, repeat identical: {}", one.len(), one == many, one == in_process))
}

fn prepare() -> Ctx {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().to_path_buf();
    let catalog = root.join("catalog");
    let mut catalog_errors = Vec::new();
    for e in CATALOG {
        if let Err(err) = e.run(&catalog, None) {
            catalog_errors.push(format!("{}: {err}", e.name));
        }
    }
    let text = r#"
        name = "equivalence"
        [well]
        lambda = 10.0
        [packet1]
        s0 = -5.0
        k0 = 10.0
        [packet2]
        s0 = 5.0
        k0 = -10.0
        [grid]
        x_min = -35.0
        x_max = 35.0
        n = 1434
        [sweep]
        transmission = [0.2, 0.5, 0.8]
        s2 = [5.0, 6.0, 7.0]
        k02 = [-10.0, -9.0, -8.0]
        c = [0.0, 0.6, 1.0]
    "#;
    let dir = root.join("sweep");
    let sweep = run(Kind::Sweep, &Scenario::from_toml(text).unwrap(), &dir)
        .map(|_| Csv::read(&dir.join("sweep.csv")))
        .map_err(|e| e.to_string());
    Ctx { _tmp: tmp, catalog, catalog_errors, sweep, root }
}

fn main() {
    let criteria: [(&str, fn(&Ctx) -> Check); 10] = [
        ("plane-wave 50:50 point", plane_wave_point),
        ("free-packet oracle", free_oracle),
        ("norm conservation over the catalog", catalog_norms),
        ("HOM optimum", hom_optimum),
        ("splitting-ratio law", splitting_law),
        ("closed-form/numeric equivalence sweep", equivalence_sweep),
        ("Pauli property", pauli),
        ("exponential sensitivity", exponential_sensitivity),
        ("spin quadratic law", spin_law),
        ("determinism", determinism),
    ];
    let ctx = prepare();
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let result = catch_unwind(AssertUnwindSafe(|| f(&ctx)))
            .unwrap_or_else(|e| check(false, format!("panicked: {}", panic_message(&e))));
        let status = if result.pass { "PASS" } else { "FAIL" };
        let known = if !result.pass && KNOWN_FAILING.contains(&n) { " (known)" } else { "" };
        println!("{status} [{n:>2}] {name}: {}{known}", result.detail);
        if !result.pass && !KNOWN_FAILING.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
}

