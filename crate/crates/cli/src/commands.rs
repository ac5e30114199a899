use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use permflow::assignment::{solve_assignment, squared_distance_costs, verify_optimality};
use permflow::dynamics::{self, ParticleState};
use permflow::polar::{convex_potential, make_grid, project_to_s, Domain};
use permflow::reference::{
    circle_quadrature, disk_quadrature, generalized_action, generalized_quadrature, rotation_action,
    verify_generalized_solution, verify_rotation_solutions, Orientation,
};
use permflow::vp1d::{cold_oscillation_period, phase_histogram, sheet_force, uniform_background, ColdBeam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::artifacts::{fmt_f64, point_table, read_point_table, Artifact, OutDir, Table, AXES};
use crate::config::RunConfig;

/// Prints summary lines unless `--quiet`; warnings always go to stderr.
#[derive(Debug, Clone, Copy)]
pub struct Console {
    pub quiet: bool,
}

impl Console {
    pub fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    pub fn warn(&self, line: impl AsRef<str>) {
        eprintln!("warning: {}", line.as_ref());
    }
}

fn axis_columns(prefix: &str, dim: usize) -> impl Iterator<Item = String> + '_ {
    AXES[..dim].iter().map(move |a| format!("{}_{}", prefix, a))
}

pub fn grid(domain: Domain, n: usize, out: &Path, console: Console) -> Result<bool> {
    let g = make_grid::<f64>(domain, n)?;
    let mut dir = OutDir::create(out)?;
    dir.write("grid.csv", &point_table(&g.points).into_bytes())?;
    dir.write_json(
        "grid.json",
        &json!({
            "domain": domain,
            "n_per_axis": n,
            "dim": g.dim(),
            "count": g.len(),
            "spacing": g.spacing(),
            "cell_measure": g.cell_measure,
        }),
    )?;
    console.say(format!(
        "{} grid, n_per_axis = {}: {} points -> {}",
        domain,
        n,
        g.len(),
        out.display()
    ));
    Ok(true)
}

pub fn project(map: &Path, domain: Domain, n: usize, out: &Path, console: Console) -> Result<bool> {
    let g = make_grid::<f64>(domain, n)?;
    let m = read_point_table(map, g.dim())?;
    if m.len() != g.len() {
        bail!(
            "{}: {} rows, but the {} grid has {} points",
            map.display(),
            m.len(),
            domain,
            g.len()
        );
    }
    let projection = project_to_s(&m, &g)?;
    let assignment = &projection.assignment;
    let potential = convex_potential(&m, assignment)?;
    let costs = squared_distance_costs(&m, &g.points)?;
    let report = verify_optimality(&costs, assignment, costs.tolerance());

    let d = g.dim();
    let header: Vec<String> = std::iter::once("index".to_string())
        .chain(axis_columns("a", d))
        .chain(axis_columns("m", d))
        .chain(["sigma", "u", "phi"].map(String::from))
        .collect();
    let mut table = Table::new(&header);
    for a in 0..g.len() {
        let mut row = vec![a.to_string()];
        row.extend(g.points.get(a).iter().map(|&x| fmt_f64(x)));
        row.extend(m.get(a).iter().map(|&x| fmt_f64(x)));
        row.push(assignment.sigma[a].to_string());
        row.push(fmt_f64(assignment.u[a]));
        row.push(fmt_f64(potential.phi[a]));
        table.row(&row);
    }
    let mut dir = OutDir::create(out)?;
    dir.write("pairing.csv", &table.into_bytes())?;
    dir.write_json(
        "certificate.json",
        &json!({ "n": g.len(), "total_cost": assignment.total_cost, "certificate": report }),
    )?;
    console.say(format!(
        "projected {} points: cost {}, certificate {}",
        g.len(),
        fmt_f64(assignment.total_cost),
        if report.all_pass { "pass" } else { "FAIL" }
    ));
    Ok(report.all_pass)
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    config: RunConfig,
    artifacts: &'a [Artifact],
    steps: u64,
    switches: u64,
    final_time: f64,
    final_hamiltonian: f64,
    final_deviation: Option<f64>,
    duration_seconds: f64,
}

pub fn evolve(config: &Path, out: &Path, console: Console) -> Result<bool> {
    let rc = RunConfig::load(config)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let cfg = rc.to_scenario(base).with_context(|| config.display().to_string())?;
    let clock = Instant::now();
    let run = dynamics::evolve(&cfg)?;
    let elapsed = clock.elapsed().as_secs_f64();

    let d = run.grid.dim();
    let header: Vec<String> = ["time", "alpha"]
        .map(String::from)
        .into_iter()
        .chain(axis_columns("a", d))
        .chain(axis_columns("m", d))
        .chain(axis_columns("v", d))
        .chain(std::iter::once("sigma".to_string()))
        .collect();
    let mut snapshots = Table::new(&header);
    for s in &run.snapshots {
        for a in 0..run.grid.len() {
            let mut row = vec![fmt_f64(s.time), a.to_string()];
            row.extend(run.grid.points.get(a).iter().map(|&x| fmt_f64(x)));
            row.extend(s.positions.get(a).iter().map(|&x| fmt_f64(x)));
            row.extend(s.velocities.get(a).iter().map(|&x| fmt_f64(x)));
            row.push(s.sigma[a].to_string());
            snapshots.row(&row);
        }
    }

    let with_dev = cfg.reference.is_some();
    let mut header = vec!["time", "H", "K", "U", "switches"];
    if with_dev {
        header.push("deviation");
    }
    let mut diagnostics = Table::new(&header);
    for r in &run.diagnostics.records {
        let mut row = vec![
            fmt_f64(r.time),
            fmt_f64(r.hamiltonian),
            fmt_f64(r.kinetic),
            fmt_f64(r.potential),
            r.switches.to_string(),
        ];
        if let Some(dev) = r.deviation {
            row.push(fmt_f64(dev));
        }
        diagnostics.row(&row);
    }

    let mut dir = OutDir::create(out)?;
    dir.write("snapshots.csv", &snapshots.into_bytes())?;
    dir.write("diagnostics.csv", &diagnostics.into_bytes())?;
    let last = run.diagnostics.last().expect("at least the initial record");
    let mut echo = rc.clone();
    echo.epsilon = Some(cfg.epsilon);
    echo.dt = Some(cfg.dt);
    let artifacts = dir.written.clone();
    let manifest = Manifest {
        version: permflow::VERSION,
        config: echo,
        artifacts: &artifacts,
        steps: run.final_state.steps,
        switches: run.final_state.switches,
        final_time: run.final_state.time,
        final_hamiltonian: last.hamiltonian,
        final_deviation: last.deviation,
        duration_seconds: elapsed,
    };
    dir.write_json("manifest.json", &manifest)?;
    console.say(format!(
        "evolved {} particles to t = {} in {} steps ({} switches), H = {}{}",
        run.grid.len(),
        run.final_state.time,
        run.final_state.steps,
        run.final_state.switches,
        fmt_f64(last.hamiltonian),
        last.deviation
            .map(|d| format!(", deviation = {}", fmt_f64(d)))
            .unwrap_or_default()
    ));
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Reference {
    Rotation,
    Generalized,
    Action,
}

#[derive(Debug, Clone, Copy)]
pub struct ReferenceParams {
    pub quadrature: Option<usize>,
    pub directions: usize,
    pub frames: usize,
    pub dt_fd: f64,
    pub tol: f64,
    pub corrupt_radius: bool,
}

fn emit_report(value: &serde_json::Value, name: &str, out: Option<&Path>, console: Console) -> Result<()> {
    console.say(serde_json::to_string_pretty(value)?);
    if let Some(out) = out {
        OutDir::create(out)?.write_json(name, value)?;
    }
    Ok(())
}

pub fn verify_reference(which: Reference, p: ReferenceParams, out: Option<&Path>, console: Console) -> Result<bool> {
    let (value, pass) = match which {
        Reference::Rotation => {
            let rep = verify_rotation_solutions::<f64>(p.quadrature.unwrap_or(16), p.frames, p.dt_fd, p.tol)?;
            (serde_json::to_value(&rep)?, rep.all_pass)
        }
        Reference::Generalized => {
            let mut samples = generalized_quadrature::<f64>(p.quadrature.unwrap_or(32), p.directions)?;
            if p.corrupt_radius {
                samples.iter_mut().for_each(|s| *s = s.with_radius_scale(1.01));
            }
            let rep = verify_generalized_solution(&samples, p.dt_fd, p.tol);
            (serde_json::to_value(&rep)?, rep.all_pass)
        }
        Reference::Action => {
            let zs = disk_quadrature::<f64>(p.quadrature.unwrap_or(64))?;
            let omegas = circle_quadrature::<f64>(p.directions);
            let plus = rotation_action(&zs, Orientation::Counterclockwise, p.frames)?;
            let minus = rotation_action(&zs, Orientation::Clockwise, p.frames)?;
            let generalized = generalized_action(&zs, &omegas, p.frames)?;
            let target = PI * PI / 4.0;
            let rotation_error = (plus - target).abs() / target;
            let agreement = (generalized - plus).abs() / plus;
            let pass = rotation_error < 0.02 && agreement < 0.02 && plus == minus;
            let value = json!({
                "rotation_counterclockwise": plus,
                "rotation_clockwise": minus,
                "generalized": generalized,
                "quarter_pi_squared": target,
                "rotation_relative_error": rotation_error,
                "generalized_vs_rotation": agreement,
                "all_pass": pass,
            });
            (value, pass)
        }
    };
    let name = format!("verify_{:?}.json", which).to_lowercase();
    emit_report(&value, &name, out, console)?;
    Ok(pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Vp1dTask {
    Period,
    Equivalence,
    Phase,
}

#[derive(Debug, Clone, Copy)]
pub struct Vp1dParams {
    pub particles: usize,
    pub epsilon: f64,
    pub amplitude: f64,
    pub steps_per_period: usize,
    pub states: usize,
    pub seed: u64,
    pub fraction: f64,
    pub x_bins: usize,
    pub xi_bins: usize,
}

pub fn vp1d(task: Vp1dTask, p: Vp1dParams, out: Option<&Path>, console: Console) -> Result<bool> {
    let period = std::f64::consts::TAU * p.epsilon;
    let dt = period / p.steps_per_period as f64;
    match task {
        Vp1dTask::Period => {
            let bg = uniform_background::<f64>(p.particles);
            let r = cold_oscillation_period(&bg, p.amplitude, p.epsilon, dt)?;
            let rel = (r.period - period).abs() / period;
            if r.reordered {
                console.warn("particles changed order; the measured period is not that of independent oscillators");
            }
            let pass = !r.reordered && rel < 0.01;
            let value = json!({
                "measured": r.period, "expected": period, "relative_error": rel,
                "reordered": r.reordered, "steps": r.steps, "pass": pass,
            });
            console.say(format!(
                "period measured {:.6} expected {:.6} relative error {:.3e}",
                r.period, period, rel
            ));
            if let Some(out) = out {
                OutDir::create(out)?.write_json("vp1d_period.json", &value)?;
            }
            Ok(pass)
        }
        Vp1dTask::Equivalence => {
            let g = make_grid::<f64>(Domain::Interval, p.particles)?;
            let bg: Vec<f64> = g.points.as_slice().to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..p.states {
                let x: Vec<f64> = (0..p.particles).map(|_| rng.gen::<f64>()).collect();
                let sheet = sheet_force(&x, &bg, p.epsilon)?;
                let positions = permflow::Points::new(1, x)?;
                let sigma = solve_assignment(&squared_distance_costs(&positions, &g.points)?)?.sigma;
                let state = ParticleState {
                    velocities: permflow::Points::filled(1, p.particles, 0.0),
                    positions,
                    time: 0.0,
                    epsilon: p.epsilon,
                    sigma,
                    steps: 0,
                    switches: 0,
                };
                let forces = state.forces(&g);
                for (a, b) in sheet.iter().zip(forces.as_slice()) {
                    worst = worst.max((a - b).abs());
                }
            }
            let pass = worst <= 1e-12;
            console.say(format!(
                "max force discrepancy over {} states of {} particles: {:e}",
                p.states, p.particles, worst
            ));
            if let Some(out) = out {
                OutDir::create(out)?.write_json(
                    "vp1d_equivalence.json",
                    &json!({ "states": p.states, "particles": p.particles, "max_discrepancy": worst, "pass": pass }),
                )?;
            }
            Ok(pass)
        }
        Vp1dTask::Phase => {
            let mut beam = ColdBeam::new(uniform_background::<f64>(p.particles), p.amplitude, p.epsilon)?;
            let steps = (p.fraction * p.steps_per_period as f64).round() as usize;
            for _ in 0..steps {
                beam.step(dt)?;
            }
            if beam.reordered {
                console.warn("particles changed order during the run");
            }
            let span = 1.5 * p.amplitude / p.epsilon;
            let h = phase_histogram(&beam.samples, p.x_bins, p.xi_bins, (-span, span))?;
            let out = out.unwrap_or(Path::new("."));
            let mut dir = OutDir::create(out)?;
            let header: Vec<String> = std::iter::once("xi_bin".to_string())
                .chain((0..h.x_bins()).map(|i| format!("x{}", i)))
                .collect();
            let mut table = Table::new(&header);
            for j in 0..h.xi_bins() {
                let mut row = vec![j.to_string()];
                row.extend((0..h.x_bins()).map(|i| fmt_f64(h.get(j, i))));
                table.row(&row);
            }
            dir.write("phase.csv", &table.into_bytes())?;
            let (mean, std) = h.xi_moments();
            dir.write_json(
                "phase.json",
                &json!({
                    "time": beam.time, "x_edges": h.x_edges, "xi_edges": h.xi_edges,
                    "inside_mass": h.inside_mass, "clipped_mass": h.clipped_mass,
                    "xi_mean": mean, "xi_std": std, "reordered": beam.reordered,
                }),
            )?;
            console.say(format!(
                "phase histogram at t = {:.6}: xi std {:.6e} (amplitude / eps / sqrt 2 = {:.6e}), clipped mass {}",
                beam.time,
                std,
                p.amplitude / p.epsilon / 2f64.sqrt(),
                h.clipped_mass
            ));
            Ok(!beam.reordered)
        }
    }
}
