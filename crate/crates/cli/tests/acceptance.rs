//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, LN_2};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use vortexprop::entanglement::{
    kappa_grid, log_negativity, negativity_sweep, Family, NegativityMethod, SweepOptions, SweepPath,
};
use vortexprop::phase_space::{
    quadrature_wavefunction, transport_wigner, wigner_at, wigner_ps_closed_form, wigner_slice,
    winding_number, Axis, Grid2D, PhasePoint, SliceSpec, WIGNER_BOUND,
};
use vortexprop::{
    evolve_state, make_ps_vortex, make_tmsv, BsVortexParams, CutoffPolicy, FockCutoff,
    SqueezeParams, TwoModeState, WaveguideParams,
};

type Outcome = Result<(bool, String), String>;

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn wg(kappa: f64) -> WaveguideParams {
    WaveguideParams::from_kappa(kappa).unwrap()
}

fn ps(r: f64, phi: f64, k: u32) -> Family {
    Family::PsVortex {
        params: SqueezeParams::new(r, phi).unwrap(),
        k,
    }
}

fn bs(r_x: f64, r_y: f64, k: u32) -> Family {
    Family::BsVortex {
        params: BsVortexParams::new(r_x, r_y, 1.0, 0.75, k).unwrap(),
    }
}

fn e_n(state: &TwoModeState) -> Result<f64, String> {
    Ok(log_negativity(state, NegativityMethod::Schmidt)
        .map_err(e)?
        .log_negativity)
}

fn tmsv_negativity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in [0.3, 0.6, 1.0] {
        let policy = vortexprop::entanglement::negativity_policy();
        let st = policy
            .build(|c| make_tmsv(SqueezeParams::new(r, 0.0)?, c))
            .map_err(e)?;
        worst = worst.max((e_n(&st)? - 2.0 * r / LN_2).abs());
    }
    let took = start.elapsed();
    Ok((
        worst < 1e-6 && took < Duration::from_secs(5),
        format!(
            "max |E_N - 2r/ln2| = {worst:.2e}, {:.2} s",
            took.as_secs_f64()
        ),
    ))
}

fn schmidt_vs_eigensolve() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut worst: f64 = 0.0;
    let gap = |st: &TwoModeState| -> Result<f64, String> {
        let a = log_negativity(st, NegativityMethod::Schmidt)
            .map_err(e)?
            .log_negativity;
        let b = log_negativity(st, NegativityMethod::Eigensolve)
            .map_err(e)?
            .log_negativity;
        Ok((a - b).abs())
    };
    for _ in 0..20 {
        let amps = DMatrix::from_fn(11, 11, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let st = TwoModeState::from_amplitudes(amps, FockCutoff::with_n_max(10)).map_err(e)?;
        let (st, _) = vortexprop::normalize(&st).map_err(e)?;
        worst = worst.max(gap(&st)?);
    }
    for k in [1, 2] {
        let st = make_ps_vortex(
            SqueezeParams::new(0.5, 0.0).unwrap(),
            k,
            FockCutoff::new(12, 1e-3).unwrap(),
        )
        .map_err(e)?;
        worst = worst.max(gap(&st)?);
    }
    let took = start.elapsed();
    Ok((
        worst < 1e-8 && took < Duration::from_secs(30),
        format!(
            "max |dE_N| = {worst:.2e} over 22 states, {:.2} s",
            took.as_secs_f64()
        ),
    ))
}

fn ps_anchor() -> Outcome {
    let s = negativity_sweep(
        ps(1.0, 0.0, 2),
        &kappa_grid(0.0, 10.0, 201),
        SweepOptions::default(),
    )
    .map_err(e)?;
    let e0 = s.points[0].log_negativity;
    let (max, argmax) = (s.summary.max, s.summary.argmax);
    let period = s.summary.period;
    let ok0 = (e0 - 2.525).abs() / 2.525 <= 0.01;
    let okmax = (max - 2.541).abs() / 2.541 <= 0.05;
    let okp = period.is_some_and(|p| (p - 2.0).abs() <= 0.01);
    Ok((
        ok0 && okmax && okp,
        format!(
            "E_N(0) = {e0:.4} vs 2.525 ({:+.1} %), max = {max:.4} at kappa = {argmax} vs 2.541 ({:+.1} %), period = {}",
            100.0 * (e0 / 2.525 - 1.0),
            100.0 * (max / 2.541 - 1.0),
            period.map_or("none".into(), |p| format!("{p:.3}"))
        ),
    ))
}

fn bs_anchor() -> Outcome {
    let s = negativity_sweep(
        bs(1.0, 1.0, 3),
        &kappa_grid(0.0, 10.0, 201),
        SweepOptions::default(),
    )
    .map_err(e)?;
    let e0 = s.points[0].log_negativity;
    let mut zeros = Vec::new();
    for j in 0..5 {
        let lo = 2.0 * j as f64;
        let minima = s.refine_minima_in(lo, lo + 2.0).map_err(e)?;
        let best = minima
            .into_iter()
            .min_by(|a, b| a.log_negativity.total_cmp(&b.log_negativity));
        zeros.push(best.map_or((f64::NAN, f64::INFINITY), |m| (m.kappa, m.log_negativity)));
    }
    let ok0 = (e0 - 1.8).abs() / 1.8 <= 0.05;
    let okmax = s.summary.max >= e0;
    let okz = zeros.iter().all(|z| z.1 < 1e-6);
    Ok((
        ok0 && okmax && okz,
        format!(
            "k = 3: E_N(0) = {e0:.4} vs 1.8 ({:+.1} %), max = {:.4} at kappa = {}, first zero at kappa = {:.6} (E_N = {:.1e}), zero found in {}/5 periods",
            100.0 * (e0 / 1.8 - 1.0),
            s.summary.max,
            s.summary.argmax,
            zeros[0].0,
            zeros[0].1,
            zeros.iter().filter(|z| z.1 < 1e-6).count()
        ),
    ))
}

fn k1_oscillation() -> Outcome {
    let s = negativity_sweep(
        ps(1.0, 0.0, 1),
        &kappa_grid(0.0, 2.0, 201),
        SweepOptions::default(),
    )
    .map_err(e)?;
    let e0 = s.points[0].log_negativity;
    let ratio = (s.summary.max - s.summary.min) / e0;
    Ok((
        ratio < 0.05 && ratio > 0.0,
        format!(
            "(max - min)/E_N(0) = {:.3} % (reference: about 0.6 %)",
            100.0 * ratio
        ),
    ))
}

fn wigner_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut origin: f64 = 0.0;
    let policy = CutoffPolicy::with_tolerance(1e-14);
    for k in [1u32, 2, 3] {
        for r in [0.0, 0.5] {
            let params = SqueezeParams::new(r, 0.4).unwrap();
            let st = policy.build(|c| make_ps_vortex(params, k, c)).map_err(e)?;
            if k <= 2 {
                let points: Vec<PhasePoint> = (0..25)
                    .map(|_| {
                        let mut g = || rng.gen_range(-1.5..1.5);
                        PhasePoint::new(g(), g(), g(), g())
                    })
                    .collect();
                let closed = wigner_ps_closed_form(params, k, &points).map_err(e)?;
                for (p, c) in points.iter().zip(closed) {
                    worst = worst.max((wigner_at(&st, *p) - c).abs());
                }
            }
            if k % 2 == 1 {
                origin = origin.max((wigner_at(&st, PhasePoint::default()) + WIGNER_BOUND).abs());
            }
        }
    }
    Ok((
        worst < 2e-6 && origin < 1e-9,
        format!(
            "max |closed - parity| = {worst:.2e} on 100 points, |W(0) + 4/pi^2| = {origin:.2e}"
        ),
    ))
}

fn transport_equivalence() -> Outcome {
    let start = Instant::now();
    let spec = SliceSpec::through_origin(Axis::X, Axis::Y).map_err(e)?;
    let grid = Grid2D::square(-3.0, 3.0, 21, (Axis::X, Axis::Y)).map_err(e)?;
    let cut = FockCutoff::new(30, 1e-3).unwrap();
    let mut worst: f64 = 0.0;
    for fam in [ps(0.5, FRAC_PI_2, 1), bs(0.2, 0.5, 1)] {
        let st = fam.initial_state(cut).map_err(e)?;
        for kappa in [0.25, 0.8] {
            let moved =
                transport_wigner(|p| wigner_at(&st, p), wg(kappa), &spec, &grid).map_err(e)?;
            let direct = wigner_slice(&evolve_state(&st, wg(kappa)), &spec, &grid).map_err(e)?;
            worst = worst.max((moved.values - direct.values).amax());
        }
    }
    let took = start.elapsed();
    Ok((
        worst < 1e-6 && took < Duration::from_secs(60),
        format!(
            "max |transport - parity| = {worst:.2e}, {:.2} s",
            took.as_secs_f64()
        ),
    ))
}

fn conservation() -> Outcome {
    // conservation holds for any truncated input, so the tail is irrelevant here
    let cut = FockCutoff::new(30, 0.5).unwrap();
    let mut norm_drift: f64 = 0.0;
    let mut sector_drift: f64 = 0.0;
    for fam in [ps(0.5, 0.3, 2), bs(0.2, 0.5, 2)] {
        let st = fam.initial_state(cut).map_err(e)?;
        let sectors = st.sector_probabilities();
        for kappa in kappa_grid(0.0, 10.0, 41) {
            let out = evolve_state(&st, wg(kappa));
            norm_drift = norm_drift.max((out.norm() - st.norm()).abs());
            for (a, b) in out.sector_probabilities().iter().zip(&sectors) {
                sector_drift = sector_drift.max((a - b).abs());
            }
        }
    }

    let base = kappa_grid(0.0, 2.0, 11);
    let shifted: Vec<f64> = base.iter().map(|k| k + 2.0).collect();
    let mut period_gap: f64 = 0.0;
    for path in [SweepPath::ClosedForm, SweepPath::Unitary] {
        let options = SweepOptions {
            path,
            validate: false,
            ..SweepOptions::default()
        };
        let a = negativity_sweep(ps(1.0, 0.0, 2), &base, options).map_err(e)?;
        let b = negativity_sweep(ps(1.0, 0.0, 2), &shifted, options).map_err(e)?;
        for (x, y) in a.values().iter().zip(b.values()) {
            period_gap = period_gap.max((x - y).abs());
        }
    }

    let grid = Grid2D::square(-4.0, 4.0, 161, (Axis::X, Axis::Y)).map_err(e)?;
    let policy = CutoffPolicy::default();
    let mut windings = Vec::new();
    for k in [1u32, 2] {
        for fam in [ps(1.0, FRAC_PI_2, k), bs(0.2, 0.5, k)] {
            for kappa in [0.0, 0.13, 0.37, 0.81] {
                let st = policy
                    .build(|c| fam.closed_form_state(wg(kappa), c))
                    .map_err(e)?;
                let field = quadrature_wavefunction(&st, &grid).map_err(e)?;
                windings.push((k, winding_number(&field, 2.0).map_err(e)?));
            }
        }
    }
    let winding_ok = windings.iter().all(|(k, w)| w.unsigned_abs() == *k);
    let ok = norm_drift < 1e-10 && sector_drift < 1e-13 && period_gap < 1e-8 && winding_ok;
    Ok((
        ok,
        format!(
            "norm drift {norm_drift:.1e}, sector drift {sector_drift:.1e}, |E_N(kappa+2) - E_N(kappa)| {period_gap:.1e}, windings {:?}",
            windings.iter().map(|w| w.1).collect::<Vec<_>>()
        ),
    ))
}

fn enhancement() -> Outcome {
    let policy = vortexprop::entanglement::negativity_policy();
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0] {
        let p = SqueezeParams::new(r, 0.0).unwrap();
        let t = e_n(&policy.build(|c| make_tmsv(p, c)).map_err(e)?)?;
        let v = e_n(&policy.build(|c| make_ps_vortex(p, 1, c)).map_err(e)?)?;
        ok &= v > t;
        parts.push(format!("r = {r}: tmsv {t:.4} < k=1 {v:.4}"));
    }
    let ladder = |fam: fn(u32) -> Family| -> Result<Vec<f64>, String> {
        (1..=3)
            .map(|k| {
                let s = negativity_sweep(
                    fam(k),
                    &[0.0],
                    SweepOptions {
                        validate: false,
                        ..SweepOptions::default()
                    },
                )
                .map_err(e)?;
                Ok(s.points[0].log_negativity)
            })
            .collect()
    };
    for (name, values) in [
        ("ps", ladder(|k| ps(1.0, 0.0, k))?),
        ("bs", ladder(|k| bs(1.0, 1.0, k))?),
    ] {
        ok &= values.windows(2).all(|w| w[1] > w[0]);
        parts.push(format!("{name} k=1..3: {:.4?}", values));
    }
    Ok((ok, parts.join("; ")))
}

fn cli_presets(bin: &Path) -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let run = |id: &str| -> Result<(bool, f64), String> {
        let start = Instant::now();
        let status = Command::new(bin)
            .args(["figure", id, "--output"])
            .arg(dir.path())
            .output()
            .map_err(e)?;
        Ok((
            status.status.code() == Some(0),
            start.elapsed().as_secs_f64(),
        ))
    };
    let csv = dir.path().join("fig5a/k2/negativity.csv");
    let (first_ok, _) = run("fig5a")?;
    let first = std::fs::read(&csv).map_err(e)?;
    let (second_ok, _) = run("fig5a")?;
    let second = std::fs::read(&csv).map_err(e)?;
    let identical = first_ok && second_ok && first == second;

    let mut total = 0.0;
    let mut failed = Vec::new();
    for id in ["fig1", "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6"] {
        let (ok, secs) = run(id)?;
        total += secs;
        if !ok {
            failed.push(id);
        }
    }
    Ok((
        identical && failed.is_empty() && total < 600.0,
        format!("fig5a CSV byte-identical: {identical}, presets failing: {failed:?}, all presets {total:.1} s"),
    ))
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let bin = Path::new(env!("CARGO_BIN_EXE_vortexprop"));
    let criteria: Vec<Criterion> = vec![
        ("TMSV analytic negativity", Box::new(tmsv_negativity)),
        ("Schmidt vs PT eigensolve", Box::new(schmidt_vs_eigensolve)),
        ("ps k=2 anchor values", Box::new(ps_anchor)),
        ("bs anchor values", Box::new(bs_anchor)),
        ("k=1 oscillation smallness", Box::new(k1_oscillation)),
        ("Wigner cross-validation", Box::new(wigner_cross_validation)),
        ("transport vs evolution", Box::new(transport_equivalence)),
        ("conservation suite", Box::new(conservation)),
        ("entanglement enhancement", Box::new(enhancement)),
        (
            "CLI determinism and presets",
            Box::new(move || cli_presets(bin)),
        ),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(msg) => (false, format!("error: {msg}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.1} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
