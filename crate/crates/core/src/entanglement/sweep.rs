use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    log_negativity_with_cap, negativity_from_spectrum, negativity_policy, NegativityMethod,
    DEFAULT_MATRIX_CAP,
};
use crate::error::{Error, Result};
use crate::evolution::{evolve_state, evolved_bs_expansion, evolved_ps_vortex, WaveguideParams};
use crate::factory::{
    make_bs_vortex, make_ps_vortex, make_tmsv, squeezed_vacuum, BsVortexParams, SqueezeParams,
};
use crate::fock::{
    apply_ladder, normalize, schmidt_coefficients, CutoffPolicy, FockCutoff, Ladder, Mode,
    TwoModeState,
};

/// Largest sample-to-sample mismatch accepted when detecting a period.
pub const PERIOD_TOLERANCE: f64 = 1e-6;

/// Photon limit used by the endpoint cross-checks.
const VALIDATION_N_MAX: usize = 48;

/// Tail tolerance for validation cutoffs: the comparisons are made inside the
/// box after renormalization, so the discarded mass does not matter there.
const VALIDATION_TOLERANCE: f64 = 0.999;

/// State family of a sweep, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    PsVortex { params: SqueezeParams, k: u32 },
    BsVortex { params: BsVortexParams },
    Tmsv { params: SqueezeParams },
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::PsVortex { .. } => "ps_vortex",
            Family::BsVortex { .. } => "bs_vortex",
            Family::Tmsv { .. } => "tmsv",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::PsVortex { params, .. } | Family::Tmsv { params } => params.validate(),
            Family::BsVortex { params } => params.validate(),
        }
    }

    /// The state at `kappa = 0`.
    pub fn initial_state(&self, cutoff: FockCutoff) -> Result<TwoModeState> {
        match *self {
            Family::PsVortex { params, k } => make_ps_vortex(params, k, cutoff),
            Family::BsVortex { params } => make_bs_vortex(params, cutoff),
            Family::Tmsv { params } => make_tmsv(params, cutoff),
        }
    }

    /// Closed-form evolved state. The squeezed vacuum has no creation
    /// polynomial, so its closed form does not move.
    pub fn closed_form_state(
        &self,
        wg: WaveguideParams,
        cutoff: FockCutoff,
    ) -> Result<TwoModeState> {
        match *self {
            Family::PsVortex { params, k } => evolved_ps_vortex(params, k, wg, cutoff),
            Family::BsVortex { params } => evolved_bs_expansion(&params, wg)?.to_state(cutoff),
            Family::Tmsv { params } => make_tmsv(params, cutoff),
        }
    }

    /// Seed state and creation polynomial `u a^dag + w b^dag` raised to the order.
    fn seed_and_polynomial(
        &self,
        n_max: usize,
    ) -> Result<(TwoModeState, Complex64, Complex64, u32)> {
        let cutoff = FockCutoff::new(n_max, VALIDATION_TOLERANCE)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Family::PsVortex { params, k } => Ok((make_tmsv(params, cutoff)?, one, zero, k)),
            Family::Tmsv { params } => Ok((make_tmsv(params, cutoff)?, one, zero, 0)),
            Family::BsVortex { params } => {
                let (s_x, s_y) = params.internal_squeeze();
                let va = squeezed_vacuum(s_x, params.phi);
                let vb = squeezed_vacuum(s_y, params.phi);
                let dim = cutoff.dim();
                let amps = DMatrix::from_fn(dim, dim, |i, j| {
                    va.get(i).copied().unwrap_or_default() * vb.get(j).copied().unwrap_or_default()
                });
                let seed = TwoModeState::from_amplitudes(amps, cutoff)?;
                Ok((
                    seed,
                    Complex64::new(params.eta_x, 0.0),
                    Complex64::new(0.0, -params.eta_y),
                    params.k,
                ))
            }
        }
    }

    /// Independent construction of the closed form: rotate the seed back,
    /// apply the creation polynomial with ladder operators, rotate forward.
    /// Amplitudes with `n_a, n_b <= n_max` are exact because the seed is
    /// kept up to `2 n_max` photons per mode and the coupler preserves the
    /// total photon number.
    pub fn ladder_oracle(&self, wg: WaveguideParams, n_max: usize) -> Result<TwoModeState> {
        let (seed, u, w, k) = self.seed_and_polynomial(2 * n_max)?;
        let back =
            WaveguideParams::from_kappa_with_coupling(2.0 - wg.kappa.rem_euclid(2.0), wg.coupling)?;
        let mut st = evolve_state(&seed, back);
        for _ in 0..k {
            let ra = apply_ladder(&st, Mode::A, Ladder::Raise).scaled(u);
            st = if w == Complex64::new(0.0, 0.0) {
                ra
            } else {
                ra.add(&apply_ladder(&st, Mode::B, Ladder::Raise).scaled(w))?
            };
        }
        let forward = evolve_state(&st, wg);
        Ok(normalize(&forward.truncated(n_max))?.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepPath {
    /// Closed-form evolved states (creation polynomial rotated, seed fixed).
    ClosedForm,
    /// Full unitary propagation of the `kappa = 0` state.
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub policy: CutoffPolicy,
    pub path: SweepPath,
    /// Cross-check the first and last sample.
    pub validate: bool,
    /// Negativity route per sample. Anything but `Schmidt` needs the dense
    /// density matrix and is subject to its size cap.
    #[serde(default = "schmidt")]
    pub method: NegativityMethod,
}

fn schmidt() -> NegativityMethod {
    NegativityMethod::Schmidt
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            policy: negativity_policy().with_cap(2048),
            path: SweepPath::ClosedForm,
            validate: true,
            method: NegativityMethod::Schmidt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub kappa: f64,
    pub log_negativity: f64,
    pub cutoff_used: usize,
    pub tail: f64,
    pub method: NegativityMethod,
}

/// Endpoint cross-checks at a reduced cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub kappa: f64,
    pub n_max: usize,
    /// Max amplitude difference, closed form vs. ladder oracle, in the box.
    pub oracle_diff: f64,
    /// `E_N` difference, product-expansion Schmidt vs. dense SVD (zero for
    /// families without an expansion).
    pub schmidt_diff: f64,
    /// `E_N` of the fully propagated `kappa = 0` state at this cutoff.
    pub unitary_log_negativity: f64,
}

impl EndpointCheck {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.oracle_diff < tolerance && self.schmidt_diff < tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub min: f64,
    pub max: f64,
    pub argmin: f64,
    pub argmax: f64,
    /// Smallest lag after which the series repeats, `None` when no lag up
    /// to half the span works or the grid is not uniform.
    pub period: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedMinimum {
    pub kappa: f64,
    pub log_negativity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub family: Family,
    pub options: SweepOptions,
    pub points: Vec<SweepPoint>,
    pub checks: Vec<EndpointCheck>,
    pub summary: SweepSummary,
}

impl SweepSeries {
    pub fn kappas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.kappa).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.log_negativity).collect()
    }

    pub fn max_cutoff(&self) -> usize {
        self.points.iter().map(|p| p.cutoff_used).max().unwrap_or(0)
    }

    /// Local minima of the sampled series, each refined by golden-section
    /// search between its neighbours.
    pub fn refine_minima(&self) -> Result<Vec<RefinedMinimum>> {
        self.refine_minima_in(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// As [`refine_minima`](Self::refine_minima), for samples with `lo <= kappa <= hi`.
    pub fn refine_minima_in(&self, lo: f64, hi: f64) -> Result<Vec<RefinedMinimum>> {
        let pts = &self.points;
        let mut out = Vec::new();
        for i in 0..pts.len() {
            if !(lo..=hi).contains(&pts[i].kappa) {
                continue;
            }
            let left = if i > 0 {
                pts[i - 1].log_negativity
            } else {
                f64::INFINITY
            };
            let right = pts.get(i + 1).map_or(f64::INFINITY, |p| p.log_negativity);
            let here = pts[i].log_negativity;
            if !(here <= left && here < right) {
                continue;
            }
            let lo = if i > 0 {
                pts[i - 1].kappa
            } else {
                pts[i].kappa
            };
            let hi = pts.get(i + 1).map_or(pts[i].kappa, |p| p.kappa);
            out.push(golden_minimum(
                |x| point_at(&self.family, x, &self.options).map(|p| p.log_negativity),
                lo,
                hi,
                here,
                pts[i].kappa,
            )?);
        }
        Ok(out)
    }
}

fn golden_minimum(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    f0: f64,
    x0: f64,
) -> Result<RefinedMinimum> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = RefinedMinimum {
        kappa: x0,
        log_negativity: f0,
    };
    if b - a <= 0.0 {
        return Ok(best);
    }
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-12 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.log_negativity {
            best = RefinedMinimum {
                kappa: x,
                log_negativity: v,
            };
        }
    }
    Ok(best)
}

fn log2_negativity(spectrum_negativity: f64) -> f64 {
    (1.0 + 2.0 * spectrum_negativity).log2()
}

/// `E_N` of one sample through the chosen path, with adaptive cutoff.
fn point_at(family: &Family, kappa: f64, options: &SweepOptions) -> Result<SweepPoint> {
    let wg = WaveguideParams::from_kappa(kappa)?;
    let policy = options.policy;
    match (options.path, family) {
        (SweepPath::ClosedForm, Family::BsVortex { params })
            if options.method == NegativityMethod::Schmidt =>
        {
            // Schmidt data straight from the product expansion; no dense table
            let expansion = evolved_bs_expansion(params, wg)?;
            policy.build(|cutoff| {
                let tail = expansion.tail(cutoff.n_max());
                cutoff.check_tail(tail)?;
                let spectrum = expansion.schmidt_within(cutoff.n_max())?;
                Ok(SweepPoint {
                    kappa,
                    log_negativity: log2_negativity(negativity_from_spectrum(&spectrum)),
                    cutoff_used: cutoff.n_max(),
                    tail,
                    method: NegativityMethod::Schmidt,
                })
            })
        }
        (SweepPath::ClosedForm, _) => {
            let st = policy.build(|cutoff| family.closed_form_state(wg, cutoff))?;
            sample(kappa, &st, options.method)
        }
        (SweepPath::Unitary, _) => {
            let st = policy.build(|cutoff| family.initial_state(cutoff))?;
            sample(kappa, &evolve_state(&st, wg), options.method)
        }
    }
}

fn sample(kappa: f64, st: &TwoModeState, method: NegativityMethod) -> Result<SweepPoint> {
    let res = log_negativity_with_cap(st, method, DEFAULT_MATRIX_CAP)?;
    Ok(SweepPoint {
        kappa,
        log_negativity: res.log_negativity,
        cutoff_used: st.n_max(),
        tail: st.tail(),
        method: res.method,
    })
}

fn endpoint_check(family: &Family, kappa: f64, n_max: usize) -> Result<EndpointCheck> {
    let wg = WaveguideParams::from_kappa(kappa)?;
    let cutoff = FockCutoff::new(n_max, VALIDATION_TOLERANCE)?;
    let closed = family.closed_form_state(wg, cutoff)?;
    let oracle = family.ladder_oracle(wg, n_max)?;
    let dense = log2_negativity(negativity_from_spectrum(&schmidt_coefficients(&closed)));
    let schmidt_diff = match family {
        Family::BsVortex { params } => {
            let fast = evolved_bs_expansion(params, wg)?.schmidt_within(n_max)?;
            (log2_negativity(negativity_from_spectrum(&fast)) - dense).abs()
        }
        _ => 0.0,
    };
    let initial = family.initial_state(cutoff)?;
    let unitary = evolve_state(&initial, wg);
    let unitary_log_negativity =
        log2_negativity(negativity_from_spectrum(&schmidt_coefficients(&unitary)));
    Ok(EndpointCheck {
        kappa,
        n_max,
        oracle_diff: closed.max_abs_diff(&oracle),
        schmidt_diff,
        unitary_log_negativity,
    })
}

fn summarize(points: &[SweepPoint]) -> SweepSummary {
    let mut s = SweepSummary {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        argmin: f64::NAN,
        argmax: f64::NAN,
        period: detect_period(points),
    };
    for p in points {
        if p.log_negativity < s.min {
            s.min = p.log_negativity;
            s.argmin = p.kappa;
        }
        if p.log_negativity > s.max {
            s.max = p.log_negativity;
            s.argmax = p.kappa;
        }
    }
    s
}

/// Smallest lag `L` with `|E(i + L) - E(i)| < PERIOD_TOLERANCE` for all `i`,
/// on a uniform grid, restricted to `L <= len / 2`.
pub(crate) fn detect_period(points: &[SweepPoint]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let step = points[1].kappa - points[0].kappa;
    let uniform = step > 0.0
        && points
            .windows(2)
            .all(|w| ((w[1].kappa - w[0].kappa) - step).abs() <= 1e-9 * (1.0 + step));
    if !uniform {
        return None;
    }
    let values: Vec<f64> = points.iter().map(|p| p.log_negativity).collect();
    (1..=values.len() / 2)
        .find(|&lag| {
            values
                .iter()
                .zip(&values[lag..])
                .all(|(a, b)| (a - b).abs() < PERIOD_TOLERANCE)
        })
        .map(|lag| lag as f64 * step)
}

/// `E_N` over the given `kappa` values (Schmidt route). Samples run in
/// parallel and come back in input order. With `validate` set, the first and
/// last sample are cross-checked at a reduced cutoff.
pub fn negativity_sweep(
    family: Family,
    kappas: &[f64],
    options: SweepOptions,
) -> Result<SweepSeries> {
    family.validate()?;
    if kappas.is_empty() {
        return Err(Error::invalid("kappa list is empty"));
    }
    if let Some(bad) = kappas.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(Error::invalid(format!(
            "kappa values must be finite and >= 0, got {bad}"
        )));
    }
    let points = kappas
        .par_iter()
        .map(|&k| point_at(&family, k, &options))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    if options.validate {
        let first = kappas[0];
        let last = kappas[kappas.len() - 1];
        let ends: &[f64] = if first == last {
            &[first]
        } else {
            &[first, last]
        };
        for &k in ends {
            checks.push(endpoint_check(&family, k, VALIDATION_N_MAX)?);
        }
    }
    let summary = summarize(&points);
    Ok(SweepSeries {
        family,
        options,
        points,
        checks,
        summary,
    })
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn kappa_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
