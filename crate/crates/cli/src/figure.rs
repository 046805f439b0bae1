//! Presets bundling the parameters of each published figure.

use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use vortexprop::entanglement::{RefinedMinimum, SweepSeries};

use crate::config::{Command, FamilyKind, MethodArg, Physics, RunConfig};
use crate::error::CliError;
use crate::output::{num, write_json};
use crate::run::{run_negativity, run_state, run_wigner};

pub const FIGURE_IDS: [&str; 7] = ["fig1", "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6"];

/// Propagation time of the second panel in each field figure, in s.
const LATE_TIME: f64 = 1e-6;

struct Job {
    name: String,
    command: Command,
    config: RunConfig,
}

fn ps_field(r: f64) -> RunConfig {
    RunConfig {
        family: Some(FamilyKind::PsVortex),
        k: Some(1),
        r: Some(r),
        phi: Some(FRAC_PI_2),
        coupling: Some(2e10),
        ..RunConfig::default()
    }
}

fn bs_field() -> RunConfig {
    RunConfig {
        family: Some(FamilyKind::BsVortex),
        k: Some(1),
        r_x: Some(0.2),
        r_y: Some(0.5),
        eta_x: Some(1.0),
        eta_y: Some(0.75),
        coupling: Some(2e10),
        ..RunConfig::default()
    }
}

fn at_times(base: RunConfig, command: Command, tag: &str) -> Vec<Job> {
    [(0.0, "t0"), (LATE_TIME, "t1e-6")]
        .into_iter()
        .map(|(t, label)| Job {
            name: if tag.is_empty() {
                label.to_string()
            } else {
                format!("{tag}_{label}")
            },
            command,
            config: RunConfig {
                t: Some(t),
                ..base.clone()
            },
        })
        .collect()
}

fn wigner_jobs(base: RunConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (tag, axes) in [("xy", "x,y"), ("x_py", "x,p_y")] {
        jobs.extend(at_times(
            RunConfig {
                axes: Some(axes.into()),
                ..base.clone()
            },
            Command::Wigner,
            tag,
        ));
    }
    jobs
}

fn sweep(base: RunConfig, k: u32) -> Job {
    Job {
        name: format!("k{k}"),
        command: Command::Negativity,
        config: RunConfig {
            k: Some(k),
            kappa_min: Some(0.0),
            kappa_max: Some(10.0),
            kappa_count: Some(201),
            ..base
        },
    }
}

fn ps_sweep_base() -> RunConfig {
    RunConfig {
        family: Some(FamilyKind::PsVortex),
        r: Some(1.0),
        phi: Some(0.0),
        coupling: Some(2e10),
        ..RunConfig::default()
    }
}

fn bs_sweep_base() -> RunConfig {
    RunConfig {
        family: Some(FamilyKind::BsVortex),
        r_x: Some(1.0),
        r_y: Some(1.0),
        eta_x: Some(1.0),
        eta_y: Some(0.75),
        coupling: Some(2e10),
        ..RunConfig::default()
    }
}

fn jobs(id: &str) -> Result<(Vec<Job>, Value), CliError> {
    Ok(match id {
        "fig1" => (
            // r = 2.1 keeps mass above photon number 256 beyond the default tolerance
            at_times(
                RunConfig {
                    cutoff_cap: Some(512),
                    ..ps_field(2.1)
                },
                Command::State,
                "",
            ),
            json!({ "caption": "contour and phase of the photon-subtracted vortex, k = 1, r = 2.1, phi = pi/2, C = 2e10 1/s, t = 0 and 1e-6 s",
                    "expected_runtime": "about a second; the adaptive cutoff reaches 512" }),
        ),
        "fig2" => (
            wigner_jobs(RunConfig {
                method: Some(MethodArg::ClosedForm),
                ..ps_field(2.1)
            }),
            json!({ "caption": "Wigner slices (x, y) and (x, p_y) of the photon-subtracted vortex, parameters of fig1",
                    "reference": { "W_at_transformed_origin": num(-4.0 / (std::f64::consts::PI * std::f64::consts::PI)) } }),
        ),
        "fig3" => (
            at_times(bs_field(), Command::State, ""),
            json!({ "caption": "contour and phase of the beam-splitter vortex, k = 1, r_x = 0.2, r_y = 0.5, eta_x = 1, eta_y = 0.75, t = 0 and 1e-6 s" }),
        ),
        "fig4" => (
            wigner_jobs(RunConfig {
                method: Some(MethodArg::DisplacedParity),
                ..bs_field()
            }),
            json!({ "caption": "Wigner slices (x, y) and (x, p_y) of the beam-splitter vortex, parameters of fig3" }),
        ),
        "fig5a" => (
            vec![sweep(ps_sweep_base(), 2)],
            json!({ "caption": "logarithmic negativity of the photon-subtracted vortex, k = 2, r = 1" }),
        ),
        "fig5b" => (
            vec![sweep(ps_sweep_base(), 1)],
            json!({ "caption": "logarithmic negativity of the photon-subtracted vortex, k = 1, r = 1" }),
        ),
        "fig6" => (
            (1..=3).map(|k| sweep(bs_sweep_base(), k)).collect(),
            json!({ "caption": "logarithmic negativity of the beam-splitter vortex, r_x = r_y = 1, eta_x = 1, eta_y = 0.75, k = 1..3" }),
        ),
        other => {
            return Err(CliError::UnknownFigure {
                id: other.to_string(),
            })
        }
    })
}

/// Published reference values for sweeps whose parameters match a figure,
/// next to the measured counterparts. `None` for other parameters.
pub fn reference_values(
    p: &Physics,
    series: &SweepSeries,
    minima: &[RefinedMinimum],
) -> Option<Value> {
    let e0 = series.points[0].log_negativity;
    let s = series.summary;
    let rel = |measured: f64, reference: f64| num((measured - reference).abs() / reference);
    let deepest = minima
        .iter()
        .min_by(|a, b| a.log_negativity.total_cmp(&b.log_negativity));
    match p.family {
        FamilyKind::PsVortex if p.r == 1.0 && p.k == 2 => Some(json!({
            "E_N_initial": { "reference": 2.525, "measured": num(e0), "relative_error": rel(e0, 2.525) },
            "E_N_max": { "reference": 2.541, "reference_kappa": 2.5, "measured": num(s.max), "measured_kappa": num(s.argmax), "relative_error": rel(s.max, 2.541) },
            "period": { "reference": 5.0, "measured": s.period.map(num) },
        })),
        FamilyKind::PsVortex if p.r == 1.0 && p.k == 1 => Some(json!({
            "relative_oscillation": { "reference": 0.006, "measured": num((s.max - s.min) / e0) },
        })),
        FamilyKind::BsVortex
            if p.r_x == 1.0 && p.r_y == 1.0 && p.eta_x == 1.0 && p.eta_y == 0.75 =>
        {
            Some(json!({
                "E_N_initial": { "reference": 1.8, "measured": num(e0), "relative_error": rel(e0, 1.8) },
                "E_N_max": { "reference": 2.4, "reference_kappa": 2.25, "measured": num(s.max), "measured_kappa": num(s.argmax) },
                "zero": { "reference_kappa": 7.25, "measured": deepest.map(|m| json!({ "kappa": num(m.kappa), "E_N": num(m.log_negativity) })) },
            }))
        }
        _ => None,
    }
}

/// Runs every job of a preset under `<output>/<id>/<job>` and writes a manifest.
pub fn run_figure(id: &str, overrides: &RunConfig) -> Result<Value, CliError> {
    let (jobs, about) = jobs(id)?;
    let root = overrides
        .output
        .clone()
        .unwrap_or_else(|| "out".into())
        .join(id);
    let mut entries = Vec::new();
    for job in jobs {
        let mut cfg = job.config.overlaid(&RunConfig {
            output: None,
            ..overrides.clone()
        });
        // a time override replaces the preset's time, a kappa override too
        if overrides.kappa.is_some() {
            cfg.t = None;
        }
        if overrides.t.is_some() {
            cfg.kappa = None;
        }
        cfg.output = Some(root.join(&job.name));
        let resolved = cfg.resolve(job.command)?;
        let results = match job.command {
            Command::State => run_state(&resolved)?,
            Command::Wigner => run_wigner(&resolved)?,
            Command::Negativity => run_negativity(&resolved)?,
        };
        entries.push(json!({ "name": job.name, "command": job.command, "config": resolved, "results": results }));
    }
    let manifest = json!({ "figure": id, "about": about, "jobs": entries });
    write_json(Path::new(&root), "manifest.json", manifest.clone())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves() {
        for id in FIGURE_IDS {
            let (jobs, _) = jobs(id).unwrap();
            assert!(!jobs.is_empty());
            for job in jobs {
                job.config
                    .resolve(job.command)
                    .unwrap_or_else(|e| panic!("{id}/{}: {e}", job.name));
            }
        }
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(matches!(jobs("fig7"), Err(CliError::UnknownFigure { .. })));
    }
}
