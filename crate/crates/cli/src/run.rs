//! Scenario runners behind the subcommands.

use std::path::{Path, PathBuf};

use deltahom::scattering::right_half_integral;
use deltahom::two_particle::later_outgoing_time;
use deltahom::{
    coincidence_probability, plane_wave_t, quadrant_table, same_side_closed_form, Grid64, Mode,
    PacketConfig64, PairFields, SameSideResult64, SeparationDistribution64, SpinConfig64, Statistics,
    TwoParticleState64, ValidatedScenario, WavePacket64, XYGrid,
};
use rayon::prelude::*;

use crate::config::{num, Kind, Scenario};
use crate::error::CliError;
use crate::table::{nodes, write_density, write_matrix, Cell, Table};

/// Largest accepted deviation of any reported norm or quadrant sum from 1.
pub const NORM_BUDGET: f64 = 2e-3;

pub fn run(kind: Kind, scenario: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    match kind {
        Kind::Single => run_single(scenario, out),
        Kind::Two => run_two(scenario, out),
        Kind::Sweep => run_sweep(scenario, out),
        Kind::Frames => run_frames(scenario, out),
    }
}

fn header(sc: &Scenario, kind: Kind) -> Vec<(String, String)> {
    let mut h = vec![("kind".to_string(), kind.name().to_string())];
    h.extend(sc.echo());
    h
}

fn x_grid(sc: &Scenario) -> Result<Grid64, CliError> {
    Ok(Grid64::new(sc.grid.x_min, sc.grid.x_max, sc.grid.n)?)
}

fn density_grid(sc: &Scenario) -> Result<Grid64, CliError> {
    Ok(Grid64::new(sc.grid.x_min, sc.grid.x_max, sc.grid.density_n)?)
}

/// Sampled times plus the final time, unless it is already listed.
fn with_final(taus: &[f64], tau_final: f64) -> Vec<f64> {
    let mut times = taus.to_vec();
    if !times.contains(&tau_final) {
        times.push(tau_final);
    }
    times
}

fn check_drift(what: &str, drift: f64) -> Result<(), CliError> {
    if drift > NORM_BUDGET {
        return Err(CliError::Numerical(format!("{what} drifted from 1 by {drift:.3e} (budget {NORM_BUDGET:e})")));
    }
    Ok(())
}

/// `(norm, probability right of the well)` on `grid`, with the domain check.
pub fn packet_probabilities(packet: &WavePacket64, grid: &Grid64, tau: f64) -> Result<(f64, f64), CliError> {
    let d = packet.evolve(grid, tau)?.density();
    let at_origin = packet.density_at_origin(tau);
    let norm = d.integrate_kinked(packet.kink_jump(), at_origin)?;
    Ok((norm, right_half_integral(&d, at_origin)))
}

fn run_single(sc: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let v = sc.validate()?;
    let settings = sc.grid.spectral();
    let make = |mode: Mode, p: PacketConfig64| WavePacket64::from_config(mode, p, v.well).with_settings(settings);
    let packet = make(v.mode, v.packets[0]);
    let grid = x_grid(sc)?;
    let coarse = density_grid(sc)?;
    let head = header(sc, Kind::Single);
    let mut files = Vec::new();

    let tau_final = match sc.time.tau_final.fixed()? {
        Some(t) => t,
        None => packet.completion_time()?,
    };
    let times = with_final(&sc.time.taus, tau_final);
    let probs: Vec<(f64, f64)> =
        times.par_iter().map(|&t| packet_probabilities(&packet, &grid, t)).collect::<Result<_, _>>()?;
    let mut table = Table::new(&head, &["tau", "prob_right", "norm"]);
    for (&t, &(norm, pr)) in times.iter().zip(&probs) {
        table.row(vec![t.into(), pr.into(), norm.into()]);
    }
    files.push(table.write(&out.join("prob_right.csv"))?);

    let frames: Vec<Vec<f64>> = sc
        .time
        .taus
        .par_iter()
        .map(|&t| Ok(packet.evolve(&coarse, t)?.density().values))
        .collect::<Result<_, CliError>>()?;
    files.push(write_matrix(&out.join("density.csv"), &head, &nodes(&coarse), &sc.time.taus, |i, j| frames[j][i])?);

    // both coefficient variants over the packet's band
    let p = v.packets[0];
    let w = sc.grid.k_window;
    let k_grid = Grid64::new(p.k0 - w, p.k0 + w, 801)?;
    let (exact, approx) = (make(Mode::Exact, p), make(Mode::Approximate, p));
    let mut table = Table::new(&head, &["k", "exact", "approximate"]);
    for k in k_grid.nodes() {
        table.row(vec![k.into(), exact.phi(k).norm_sqr().into(), approx.phi(k).norm_sqr().into()]);
    }
    files.push(table.write(&out.join("coefficient.csv"))?);

    if !sc.sweep.k0.is_empty() {
        let rows: Vec<(f64, f64, f64)> = sc
            .sweep
            .k0
            .par_iter()
            .map(|&k0| {
                let q = PacketConfig64::new(p.s0, k0);
                Ok((k0, plane_wave_t(k0, v.well.lambda)?, make(v.mode, q).wavepacket_t()))
            })
            .collect::<Result<_, CliError>>()?;
        let mut table = Table::new(&head, &["k0", "plane_wave_t", "packet_t"]);
        for (k0, pw, pt) in rows {
            table.row(vec![k0.into(), pw.into(), pt.into()]);
        }
        files.push(table.write(&out.join("transmission.csv"))?);
    }

    let (refl, trans) = packet.decompose().norms(&grid, tau_final)?;
    let drift = probs.iter().map(|(n, _)| (n - 1.0).abs()).fold(0.0, f64::max);
    let mut table = Table::new(&head, &["quantity", "value"]);
    let t = packet.wavepacket_t();
    for (name, value) in [
        ("plane_wave_t", plane_wave_t(p.k0, v.well.lambda)?),
        ("wavepacket_t", t),
        ("wavepacket_r", packet.wavepacket_r()),
        ("tau_final", tau_final),
        ("prob_right_final", probs[times.iter().position(|&t| t == tau_final).expect("listed")].1),
        ("reflected_norm", refl),
        ("transmitted_norm", trans),
        ("max_norm_drift", drift),
    ] {
        table.row(vec![name.into(), value.into()]);
    }
    files.push(table.write(&out.join("summary.csv"))?);
    check_drift("single-particle norm", drift)?;
    Ok(files)
}

fn two_state(sc: &Scenario, v: &ValidatedScenario<f64>) -> Result<TwoParticleState64, CliError> {
    if v.packets.len() != 2 {
        return Err(CliError::Config("two-particle runs need [packet2]".into()));
    }
    Ok(TwoParticleState64::from_scenario(v, Statistics::Boson, sc.grid.spectral())?)
}

fn packet_norms(state: &TwoParticleState64, fields: &PairFields<f64>, tau: f64) -> Result<(f64, f64), CliError> {
    let n = |p: &WavePacket64, f: &deltahom::Field1D<deltahom::Complex64, f64>| {
        f.density().integrate_kinked(p.kink_jump(), p.density_at_origin(tau))
    };
    Ok((n(&state.left, &fields.phi1)?, n(&state.right, &fields.phi2)?))
}

/// Largest deviation from 1 of either packet norm or any quadrant sum.
fn pair_drift(state: &TwoParticleState64, grid: &Grid64, tau: f64) -> Result<f64, CliError> {
    let fields = state.fields(grid, tau)?;
    let (n1, n2) = packet_norms(state, &fields, tau)?;
    let mut drift = (n1 - 1.0).abs().max((n2 - 1.0).abs());
    for (_, q) in quadrant_table(&fields, &state.spin)? {
        drift = drift.max((q.total() - 1.0).abs());
    }
    Ok(drift)
}

fn write_separation(path: &Path, head: &[(String, String)], curves: &[SeparationDistribution64]) -> Result<PathBuf, CliError> {
    let mut cols = vec!["r"];
    cols.extend(curves.iter().map(|c| c.statistics.name()));
    let mut table = Table::new(head, &cols).meta("tau", num(curves[0].tau));
    for i in 0..curves[0].r.len() {
        let mut row: Vec<Cell> = vec![curves[0].r.node(i).into()];
        row.extend(curves.iter().map(|c| Cell::Num(c.density[i])));
        table.row(row);
    }
    table.write(path)
}

fn write_joint_frames(
    out: &Path,
    head: &[(String, String)],
    prefix: &str,
    state: &TwoParticleState64,
    grid: &Grid64,
    taus: &[f64],
) -> Result<Vec<PathBuf>, CliError> {
    let rows: Vec<Vec<(usize, f64, Statistics, String)>> = taus
        .par_iter()
        .enumerate()
        .map(|(i, &tau)| {
            let fields = state.fields(grid, tau)?;
            fields
                .densities(&state.spin)
                .into_iter()
                .map(|(stat, d)| {
                    let file = format!("{prefix}_{i:04}_{}.csv", stat.name());
                    let mut h = head.to_vec();
                    h.push(("tau".into(), num(tau)));
                    h.push(("statistics".into(), stat.name().into()));
                    write_density(&out.join(&file), &h, &d)?;
                    Ok((i, tau, stat, file))
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, CliError>>()?;
    let mut manifest = Table::new(head, &["frame", "tau", "statistics", "file"]);
    let mut files = Vec::new();
    for (i, tau, stat, file) in rows.into_iter().flatten() {
        files.push(out.join(&file));
        manifest.row(vec![i.into(), tau.into(), stat.name().into(), Cell::Text(file)]);
    }
    let name = if prefix == "frame" { "manifest.csv".to_string() } else { format!("{prefix}_manifest.csv") };
    files.push(manifest.write(&out.join(name))?);
    Ok(files)
}

fn run_two(sc: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let v = sc.validate()?;
    let state = two_state(sc, &v)?;
    let grid = x_grid(sc)?;
    let head = header(sc, Kind::Two);
    let mut files = Vec::new();

    let tau_final = match sc.time.tau_final.fixed()? {
        Some(t) => t,
        None => state.completion_time()?,
    };
    let closed = same_side_closed_form([v.packets[0], v.packets[1]], v.well, v.spin)?;
    let numeric = state.same_side_numeric(&XYGrid::square(grid), tau_final)?;
    files.push(write_same_side(&out.join("same_side.csv"), &head, tau_final, &closed, &numeric)?);

    let times = with_final(&sc.time.taus, tau_final);
    let mut quads = Table::new(&head, &["tau", "statistics", "plus_plus", "minus_minus", "plus_minus", "minus_plus", "total"]);
    let mut norms = Table::new(&head, &["tau", "packet1", "packet2"]);
    let mut drift = 0.0f64;
    for &tau in &times {
        let fields = state.fields(&grid, tau)?;
        let (n1, n2) = packet_norms(&state, &fields, tau)?;
        drift = drift.max((n1 - 1.0).abs()).max((n2 - 1.0).abs());
        norms.row(vec![tau.into(), n1.into(), n2.into()]);
        for (stat, q) in quadrant_table(&fields, &state.spin)? {
            drift = drift.max((q.total() - 1.0).abs());
            quads.row(vec![
                tau.into(),
                stat.name().into(),
                q.plus_plus.into(),
                q.minus_minus.into(),
                q.plus_minus.into(),
                q.minus_plus.into(),
                q.total().into(),
            ]);
        }
    }
    files.push(quads.write(&out.join("quadrants.csv"))?);
    files.push(norms.write(&out.join("norms.csv"))?);

    files.extend(write_joint_frames(out, &head, "joint", &state, &density_grid(sc)?, &sc.time.taus)?);

    let r_grid = Grid64::new(0.0, sc.grid.r_max, sc.grid.r_n)?;
    for (i, &tau) in sc.time.taus.iter().enumerate() {
        let curves = state.separation_distributions(&grid, &r_grid, tau)?;
        files.push(write_separation(&out.join(format!("separation_{i:04}.csv")), &head, &curves)?);
    }
    check_drift("two-particle norm or quadrant sum", drift)?;
    Ok(files)
}

fn write_same_side(
    path: &Path,
    head: &[(String, String)],
    tau_final: f64,
    closed: &SameSideResult64,
    numeric: &SameSideResult64,
) -> Result<PathBuf, CliError> {
    let (cc, cn) = (coincidence_probability(closed), coincidence_probability(numeric));
    let mut table = Table::new(
        head,
        &["statistics", "closed_form", "numeric", "difference", "coincidence_closed_form", "coincidence_numeric"],
    )
    .meta("tau_final", num(tau_final));
    for s in Statistics::ALL {
        let (c, n) = (closed.get(s), numeric.get(s));
        table.row(vec![s.name().into(), c.into(), n.into(), (n - c).into(), cc.get(s).into(), cn.get(s).into()]);
    }
    table.write(path)
}

/// One sweep point: the well depth, second packet and spin overlap.
#[derive(Debug, Clone, Copy)]
struct SweepPoint {
    lambda: f64,
    s2: f64,
    k02: f64,
    c: f64,
}

fn sweep_points(sc: &Scenario) -> Result<Vec<SweepPoint>, CliError> {
    let p2 = sc.packet2.ok_or_else(|| CliError::Config("sweeps need [packet2]".into()))?;
    let sw = &sc.sweep;
    let lambdas: Vec<f64> = if !sw.transmission.is_empty() {
        let mut l = Vec::new();
        for &t in &sw.transmission {
            if !(t > 0.0 && t <= 1.0) {
                return Err(CliError::Validation(vec![format!("sweep.transmission: {t} not in (0, 1]")]));
            }
            l.push(sc.packet1.k0.abs() * ((1.0 - t) / t).sqrt());
        }
        l
    } else if !sw.lambda.is_empty() {
        sw.lambda.clone()
    } else {
        vec![sc.well.lambda]
    };
    let or = |v: &Vec<f64>, d: f64| if v.is_empty() { vec![d] } else { v.clone() };
    let s2s = or(&sw.s2, p2.s0);
    let k02s = or(&sw.k02, p2.k0);
    let cs = or(&sw.c, sc.spin.c_re);
    if let Some(c) = cs.iter().find(|c| !(0.0..=1.0).contains(*c)) {
        return Err(CliError::Validation(vec![format!("sweep.c: {c} not in [0, 1]")]));
    }
    let mut points = Vec::new();
    for &lambda in &lambdas {
        for &s2 in &s2s {
            for &k02 in &k02s {
                for &c in &cs {
                    points.push(SweepPoint { lambda, s2, k02, c });
                }
            }
        }
    }
    Ok(points)
}

struct SweepRow {
    point: SweepPoint,
    tau_final: f64,
    closed: SameSideResult64,
    numeric: SameSideResult64,
    drift: f64,
    contact: Option<f64>,
}

fn sweep_point(
    sc: &Scenario,
    idx: usize,
    point: SweepPoint,
    grid: &Grid64,
    r_grid: &Grid64,
    out: &Path,
) -> Result<(SweepRow, Option<PathBuf>), CliError> {
    let mut local = sc.clone();
    local.well.lambda = point.lambda;
    if let Some(p2) = local.packet2.as_mut() {
        p2.s0 = point.s2;
        p2.k0 = point.k02;
    }
    let spin = SpinConfig64::from_overlap(point.c);
    local.spin.c_re = spin.c.re;
    local.spin.c_im = 0.0;
    local.spin.d_re = spin.d.re;
    local.spin.d_im = 0.0;
    let v = local.validate()?;
    let state = two_state(&local, &v)?;
    let tau_final = match sc.time.tau_final.fixed()? {
        Some(t) => t,
        None => state.completion_time()?,
    };
    let closed = same_side_closed_form([v.packets[0], v.packets[1]], v.well, v.spin)?;
    let numeric = state.same_side_numeric(&XYGrid::square(*grid), tau_final)?;
    let drift = pair_drift(&state, grid, tau_final)?;
    let (contact, file) = match sc.sweep.separation_distance {
        Some(d) => {
            let tau = later_outgoing_time(&v.packets, d);
            let curves = state.separation_distributions(grid, r_grid, tau)?;
            let fermion = curves.iter().find(|c| c.statistics == Statistics::Fermion).expect("all statistics");
            let mut h = header(&local, Kind::Sweep);
            h.push(("point".into(), idx.to_string()));
            let f = write_separation(&out.join(format!("separation_p{idx:03}.csv")), &h, &curves)?;
            (Some(fermion.at_contact()), Some(f))
        }
        None => (None, None),
    };
    Ok((SweepRow { point, tau_final, closed, numeric, drift, contact }, file))
}

fn run_sweep(sc: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let points = sweep_points(sc)?;
    let mut head = header(sc, Kind::Sweep);
    head.push(("sweep.points".into(), points.len().to_string()));
    let grid = x_grid(sc)?;
    let r_grid = Grid64::new(0.0, sc.grid.r_max, sc.grid.r_n)?;

    let rows: Vec<(SweepRow, Option<PathBuf>)> = points
        .par_iter()
        .enumerate()
        .map(|(idx, &point)| sweep_point(sc, idx, point, &grid, &r_grid, out).map_err(|e| e.context(&format!("sweep point {idx}"))))
        .collect::<Result<_, CliError>>()?;

    let mut cols = vec![
        "point", "lambda", "transmission1", "transmission2", "s1", "k01", "s2", "k02", "c", "tau_final",
        "closed_plus", "closed_minus", "closed_d", "numeric_plus", "numeric_minus", "numeric_d",
        "diff_plus", "diff_minus", "diff_d", "norm_drift",
    ];
    if sc.sweep.separation_distance.is_some() {
        cols.push("fermion_contact");
    }
    let mut table = Table::new(&head, &cols);
    let mut files = Vec::new();
    let mut drift = 0.0f64;
    for (idx, (r, file)) in rows.into_iter().enumerate() {
        let p = r.point;
        let mut row: Vec<Cell> = vec![
            idx.into(),
            p.lambda.into(),
            plane_wave_t(sc.packet1.k0, p.lambda)?.into(),
            plane_wave_t(p.k02, p.lambda)?.into(),
            sc.packet1.s0.into(),
            sc.packet1.k0.into(),
            p.s2.into(),
            p.k02.into(),
            p.c.into(),
            r.tau_final.into(),
        ];
        let (c, n) = (r.closed, r.numeric);
        row.extend([c.p_plus, c.p_minus, c.p_d, n.p_plus, n.p_minus, n.p_d].map(Cell::Num));
        row.extend([n.p_plus - c.p_plus, n.p_minus - c.p_minus, n.p_d - c.p_d, r.drift].map(Cell::Num));
        drift = drift.max(r.drift);
        if let Some(contact) = r.contact {
            row.push(contact.into());
        }
        table.row(row);
        files.extend(file);
    }
    files.insert(0, table.write(&out.join("sweep.csv"))?);
    check_drift("two-particle norm or quadrant sum", drift)?;
    Ok(files)
}

/// Frame times: evenly spaced on `[0, tau_end]`, a single frame at 0.
pub fn frame_times(frames: usize, tau_end: f64) -> Vec<f64> {
    match frames {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| tau_end * i as f64 / (n - 1) as f64).collect(),
    }
}

fn run_frames(sc: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let v = sc.validate()?;
    let state = two_state(sc, &v)?;
    let head = header(sc, Kind::Frames);
    let taus = frame_times(sc.time.frames, sc.time.tau_end);
    write_joint_frames(out, &head, "frame", &state, &density_grid(sc)?, &taus)
}
