use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use super::config::Settings;
use crate::diagnostics::DiagnosticsReport;
use crate::error::{Error, Result};
use crate::pressure::reconstruct_pressure;
use crate::solver::{Model, Trajectory};

/// Resolved configuration plus the derived sizes needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub settings: Settings,
    pub nx: usize,
    pub ny: usize,
    pub velocity_modes: usize,
    pub temperature_modes: usize,
    pub threads: usize,
    pub version: String,
}

impl RunManifest {
    pub fn new(settings: &Settings, model: &Model) -> Self {
        Self {
            settings: settings.clone(),
            nx: model.disc.grid.nx,
            ny: model.disc.grid.ny,
            velocity_modes: model.nv(),
            temperature_modes: model.nt(),
            threads: rayon::current_num_threads(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Config text preceded by the derived values as comments, so the
    /// manifest parses back to the same settings.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# nsf {}", self.version);
        let _ = writeln!(s, "# grid = {}x{}", self.nx, self.ny);
        let _ = writeln!(s, "# velocity_modes = {}", self.velocity_modes);
        let _ = writeln!(s, "# temperature_modes = {}", self.temperature_modes);
        let _ = writeln!(s, "# threads = {}", self.threads);
        let _ = writeln!(s, "# time quadrature = trapezoid over output samples");
        s.push_str(&self.settings.to_text());
        s
    }
}

fn fmt_time(t: f64) -> String {
    format!("{t:.6}")
}

/// Field dump at one sample: `x,y,u,v,theta` and `pi` when requested.
pub fn field_csv(model: &Model, traj: &Trajectory, index: usize, pressure: bool) -> String {
    let s = &traj.samples[index];
    let vel = model.disc.velocity.synthesize(&s.state.c);
    let th = model.disc.temperature.synthesize_values(&s.state.d);
    let pi = pressure.then(|| reconstruct_pressure(model, &s.state).values(model));
    let grid = &model.disc.grid;
    let mut out = String::from(if pressure { "x,y,u,v,theta,pi\n" } else { "x,y,u,v,theta\n" });
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let _ = write!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                grid.x[i],
                grid.y[j],
                vel.u[[i, j]],
                vel.v[[i, j]],
                th[[i, j]]
            );
            if let Some(p) = &pi {
                let _ = write!(out, ",{:.16e}", p[[i, j]]);
            }
            out.push('\n');
        }
    }
    out
}

pub fn summary_text(report: &DiagnosticsReport, traj: &Trajectory) -> String {
    let mut s = String::new();
    for (k, v) in report.summary() {
        let _ = writeln!(s, "{k} = {v:.16e}");
    }
    let st = traj.stats;
    let _ = writeln!(s, "accepted_steps = {}", st.accepted);
    let _ = writeln!(s, "rejected_steps = {}", st.rejected);
    let _ = writeln!(s, "rhs_evaluations = {}", st.evaluations);
    s
}

/// Refuses a nonempty `out` unless `force` is set.
pub fn prepare_out_dir(out: &Path, force: bool) -> Result<()> {
    if out.exists() {
        let nonempty = fs::read_dir(out)?.next().is_some();
        if nonempty && !force {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::AlreadyExists,
                format!("output directory {} is not empty (use --force)", out.display()),
            )));
        }
    }
    fs::create_dir_all(out)?;
    Ok(())
}

/// Writes `fields_<t>.csv`, `diagnostics.csv`, `manifest` and `summary`, which
/// are byte-stable for identical runs, and the wall-clock time to `timing`.
pub fn emit_reports(
    out: &Path,
    manifest: &RunManifest,
    model: &Model,
    traj: &Trajectory,
    report: &DiagnosticsReport,
    wall_clock: Option<Duration>,
    force: bool,
) -> Result<()> {
    prepare_out_dir(out, force)?;
    let pressure = manifest.settings.run.pressure;
    for (i, s) in traj.samples.iter().enumerate() {
        let name = format!("fields_{}.csv", fmt_time(s.state.t));
        fs::write(out.join(name), field_csv(model, traj, i, pressure))?;
    }
    let mut csv = report.csv_header();
    csv.push('\n');
    for row in report.csv_rows() {
        csv.push_str(&row);
        csv.push('\n');
    }
    fs::write(out.join("diagnostics.csv"), csv)?;
    fs::write(out.join("manifest"), manifest.to_text())?;
    fs::write(out.join("summary"), summary_text(report, traj))?;
    if let Some(w) = wall_clock {
        fs::write(out.join("timing"), format!("wall_clock_seconds = {:.3}\n", w.as_secs_f64()))?;
    }
    Ok(())
}
