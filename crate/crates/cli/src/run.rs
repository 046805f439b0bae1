//! The three data commands. Each writes its files into the resolved output
//! directory and returns a JSON summary for manifests.

use serde_json::{json, Value};

use vortexprop::entanglement::{
    negativity_sweep, Family, NegativityMethod, SweepOptions, SweepPath, SweepSeries,
};
use vortexprop::evolution::evolve_state;
use vortexprop::phase_space::{
    quadrature_wavefunction, transport_wigner, wigner_at, wigner_bs_closed_form,
    wigner_ps_closed_form, wigner_slice, winding_number, PhasePoint, WignerMethod, WignerSlice,
};
use vortexprop::{TwoModeState, WaveguideParams};

use crate::config::{Numerics, Resolved};
use crate::error::CliError;
use crate::figure::reference_values;
use crate::output::{num, write_json, write_table, Table};

/// Radius of the contour used for the reported winding number.
const WINDING_RADIUS: f64 = 1.0;

fn initial_state(family: &Family, numerics: &Numerics) -> Result<TwoModeState, CliError> {
    Ok(numerics
        .policy()
        .build(|cutoff| family.initial_state(cutoff))?)
}

fn evolved_state(
    family: &Family,
    wg: WaveguideParams,
    path: SweepPath,
    numerics: &Numerics,
) -> Result<TwoModeState, CliError> {
    match path {
        SweepPath::ClosedForm => Ok(numerics
            .policy()
            .build(|cutoff| family.closed_form_state(wg, cutoff))?),
        SweepPath::Unitary => Ok(evolve_state(&initial_state(family, numerics)?, wg)),
    }
}

fn config_meta(cfg: &Resolved) -> Vec<(&'static str, Value)> {
    vec![
        ("command", json!(cfg.command)),
        (
            "config",
            serde_json::to_value(cfg).expect("config serializes"),
        ),
        ("frame", json!(cfg.frame)),
    ]
}

pub fn run_state(cfg: &Resolved) -> Result<Value, CliError> {
    let family = cfg.physics.family()?;
    let wg = cfg.wg()?;
    let path = cfg.path.unwrap_or(SweepPath::ClosedForm);
    let state = evolved_state(&family, wg, path, &cfg.numerics)?;
    let grid = cfg.grid.expect("state runs carry a grid");
    let field = quadrature_wavefunction(&state, &grid)?;

    let xs = grid.u.values();
    let ys = grid.v.values();
    let (intensity, phase) = (field.intensity(), field.phase());
    let rows = |at: &dyn Fn(usize, usize) -> f64| {
        let mut rows = Vec::with_capacity(xs.len() * ys.len());
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                rows.push(vec![*x, *y, at(i, j)]);
            }
        }
        rows
    };
    let winding = match winding_number(&field, WINDING_RADIUS) {
        Ok(w) => json!({ "radius": WINDING_RADIUS, "value": w }),
        Err(e) => json!({ "radius": WINDING_RADIUS, "error": e.to_string() }),
    };

    let mut meta = config_meta(cfg);
    meta.push(("cutoff_used", json!(state.n_max())));
    meta.push(("tail", num(state.tail())));
    let dir = &cfg.output;
    let f1 = write_table(
        dir,
        "intensity",
        cfg.format,
        &meta,
        &Table {
            columns: &["x", "y", "intensity"],
            rows: rows(&|i, j| intensity[(i, j)]),
        },
    )?;
    let f2 = write_table(
        dir,
        "phase",
        cfg.format,
        &meta,
        &Table {
            columns: &["x", "y", "phase"],
            rows: rows(&|i, j| phase[(i, j)]),
        },
    )?;
    let results = json!({
        "cutoff_used": state.n_max(),
        "tail": num(state.tail()),
        "winding": winding,
        "intensity_max": num(intensity.max()),
    });
    write_json(
        dir,
        "metadata.json",
        json!({ "command": cfg.command, "config": cfg, "files": [f1, f2], "results": results }),
    )?;
    Ok(results)
}

/// Closed-form Wigner function of the family at `kappa = 0`.
fn closed_form_wigner(family: Family) -> impl Fn(PhasePoint) -> f64 + Sync {
    move |p| {
        let values = match family {
            Family::PsVortex { params, k } => wigner_ps_closed_form(params, k, &[p]),
            Family::Tmsv { params } => wigner_ps_closed_form(params, 0, &[p]),
            Family::BsVortex { params } => wigner_bs_closed_form(params, &[p]),
        };
        values.map(|v| v[0]).unwrap_or(f64::NAN)
    }
}

pub fn run_wigner(cfg: &Resolved) -> Result<Value, CliError> {
    let family = cfg.physics.family()?;
    let wg = cfg.wg()?;
    let spec = cfg.slice.expect("wigner runs carry a slice");
    let grid = cfg.grid.expect("wigner runs carry a grid");
    let method = cfg.method.unwrap_or(WignerMethod::DisplacedParity);
    let mut cutoff_used = Value::Null;
    let slice: WignerSlice = match method {
        WignerMethod::DisplacedParity => {
            let st = evolved_state(&family, wg, SweepPath::Unitary, &cfg.numerics)?;
            cutoff_used = json!(st.n_max());
            wigner_slice(&st, &spec, &grid)?
        }
        WignerMethod::ClosedForm => {
            family.validate()?;
            let mut s = transport_wigner(closed_form_wigner(family), wg, &spec, &grid)?;
            s.method = WignerMethod::ClosedForm;
            s
        }
        WignerMethod::Transport => {
            let st = initial_state(&family, &cfg.numerics)?;
            cutoff_used = json!(st.n_max());
            transport_wigner(|p| wigner_at(&st, p), wg, &spec, &grid)?
        }
    };

    let us = grid.u.values();
    let vs = grid.v.values();
    let mut rows = Vec::with_capacity(us.len() * vs.len());
    for (i, u) in us.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            rows.push(vec![*u, *v, slice.values[(i, j)]]);
        }
    }
    let mut meta = config_meta(cfg);
    meta.push(("method", json!(slice.method)));
    meta.push(("pinned", json!(spec.fixed)));
    let columns = [spec.varying.0.label(), spec.varying.1.label(), "W"];
    let f = write_table(
        &cfg.output,
        "wigner",
        cfg.format,
        &meta,
        &Table {
            columns: &columns,
            rows,
        },
    )?;
    let results = json!({
        "method": slice.method,
        "pinned": spec.fixed,
        "min": num(slice.min()),
        "max": num(slice.max()),
        "imag_residue": num(slice.imag_residue),
        "cutoff_used": cutoff_used,
    });
    write_json(
        &cfg.output,
        "metadata.json",
        json!({ "command": cfg.command, "config": cfg, "files": [f], "results": results }),
    )?;
    Ok(results)
}

pub fn sweep_for(cfg: &Resolved) -> Result<SweepSeries, CliError> {
    let family = cfg.physics.family()?;
    let kappas = cfg
        .sweep
        .as_ref()
        .expect("negativity runs carry a sweep")
        .values();
    let options = SweepOptions {
        policy: cfg.numerics.policy(),
        path: cfg.path.unwrap_or(SweepPath::ClosedForm),
        validate: true,
        method: cfg.negativity_method.unwrap_or(NegativityMethod::Schmidt),
    };
    Ok(negativity_sweep(family, &kappas, options)?)
}

pub fn run_negativity(cfg: &Resolved) -> Result<Value, CliError> {
    let series = sweep_for(cfg)?;
    let rows: Vec<Vec<f64>> = series
        .points
        .iter()
        .map(|p| vec![p.kappa, p.log_negativity])
        .collect();
    let mut meta = config_meta(cfg);
    // route that produced the numbers; `both` reports schmidt after cross-checking
    let method = series.points[0].method;
    meta.push(("method", json!(method)));
    meta.push(("cutoff_used", json!(series.max_cutoff())));
    let f = write_table(
        &cfg.output,
        "negativity",
        cfg.format,
        &meta,
        &Table {
            columns: &["kappa", "E_N"],
            rows,
        },
    )?;

    // zeros and minima are located within the first period only
    let start = series.points[0].kappa;
    let minima = if series.points.len() > 2 {
        series.refine_minima_in(start, start + 2.0)?
    } else {
        Vec::new()
    };
    let s = series.summary;
    let e0 = series.points[0].log_negativity;
    let results = json!({
        "method": method,
        "requested_method": series.options.method,
        "path": series.options.path,
        "cutoff_used": series.max_cutoff(),
        "initial": { "kappa": start, "E_N": num(e0) },
        "summary": {
            "min": num(s.min), "max": num(s.max), "argmin": num(s.argmin), "argmax": num(s.argmax),
            "period": s.period.map(num),
        },
        "refined_minima": minima,
        "endpoint_checks": series.checks,
        "reference": reference_values(&cfg.physics, &series, &minima),
    });
    write_json(
        &cfg.output,
        "metadata.json",
        json!({ "command": cfg.command, "config": cfg, "files": [f], "results": results }),
    )?;
    Ok(results)
}
