//! Propagation through two evanescently coupled waveguides.
//!
//! The coupling generator is `G = a^dag b + b^dag a`; after a propagation
//! parameter `kappa = C t / pi` the state is `U |psi>` with
//! `U = exp(i theta G)`, `theta = pi kappa`. Under this `U` the creation
//! operators transform as `a^dag -> a^dag cos theta + i b^dag sin theta`
//! and `b^dag -> b^dag cos theta + i a^dag sin theta`.
//!
//! The free term `omega (a^dag a + b^dag b)` is dropped: it is a product of
//! local phases, so all results are in the co-rotating frame.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::factory::{binomial, bs_expansion, BsVortexParams, SqueezeParams, DEFAULT_MAX_ORDER};
use crate::fock::{normalize, FockCutoff, ProductExpansion, TwoModeState};

/// Coupling strength used when only `kappa` is given, in s^-1.
pub const DEFAULT_COUPLING: f64 = 2e10;

/// Coupling strength `C` (s^-1), propagation time `t` (s) and `kappa = C t / pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideParams {
    pub coupling: f64,
    pub time: f64,
    pub kappa: f64,
}

impl WaveguideParams {
    pub fn from_time(coupling: f64, time: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::invalid(format!(
                "coupling must be finite and > 0, got {coupling}"
            )));
        }
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::invalid(format!(
                "time must be finite and >= 0, got {time}"
            )));
        }
        Ok(Self {
            coupling,
            time,
            kappa: coupling * time / PI,
        })
    }

    /// `kappa` with the default coupling; the time is derived.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        Self::from_kappa_with_coupling(kappa, DEFAULT_COUPLING)
    }

    pub fn from_kappa_with_coupling(kappa: f64, coupling: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::invalid(format!(
                "kappa must be finite and >= 0, got {kappa}"
            )));
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::invalid(format!(
                "coupling must be finite and > 0, got {coupling}"
            )));
        }
        Ok(Self {
            coupling,
            time: kappa * PI / coupling,
            kappa,
        })
    }

    /// `(cos(C t), sin(C t))`, reduced exactly in units of pi.
    pub fn cos_sin(&self) -> (f64, f64) {
        sincos_pi(self.kappa)
    }
}

/// `(cos(pi x), sin(pi x))` with the argument reduced mod 2 and split into
/// quarter turns, so multiples of 1/2 give exact zeros and ones.
pub fn sincos_pi(x: f64) -> (f64, f64) {
    let r = x.rem_euclid(2.0);
    let quarter = (2.0 * r).round();
    let f = r - quarter / 2.0;
    let (s, c) = (PI * f).sin_cos();
    match quarter as i64 % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// Applies `exp(i pi kappa (a^dag b + b^dag a))` sector by sector.
///
/// The output cutoff is raised to the largest occupied total photon number
/// so every sector is complete and no probability leaks. Sector matrices are
/// built by a recursion in `N` from the transformed creation operators, which
/// costs `O(N^2)` per sector and is unitary to rounding.
pub fn evolve_state(state: &TwoModeState, params: WaveguideParams) -> TwoModeState {
    let (c, s) = params.cos_sin();
    if s == 0.0 && c == 1.0 {
        return state.clone();
    }
    let top = state.max_total_photons();
    let out_cut = state.cutoff().resized(state.n_max().max(top));
    let n_in = state.n_max();
    let dim = out_cut.dim();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    let is = Complex64::new(0.0, s);

    // column p of `cols` = U |p, N-p> within sector N, indexed by photons in A
    let mut cols: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for n in 0..=top {
        if n > 0 {
            cols = next_sector(&cols, n, c, is);
        }
        let lo = n.saturating_sub(n_in);
        let hi = n.min(n_in);
        if lo > hi {
            continue;
        }
        let v: Vec<(usize, Complex64)> = (lo..=hi)
            .map(|p| (p, state.amplitude(p, n - p)))
            .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
            .collect();
        if v.is_empty() {
            continue;
        }
        for q in 0..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(p, a) in &v {
                acc += cols[p][q] * a;
            }
            out[(q, n - q)] = acc;
        }
    }
    TwoModeState::from_amplitudes(out, out_cut)
        .expect("dimensions match by construction")
        .with_tail(state.tail())
}

fn next_sector(prev: &[Vec<Complex64>], n: usize, c: f64, is: Complex64) -> Vec<Vec<Complex64>> {
    let cc = Complex64::new(c, 0.0);
    let inv = 1.0 / n as f64;
    // A^dag = c a^dag + i s b^dag, B^dag = c b^dag + i s a^dag acting on sector n-1:
    // (a^dag v)_i = sqrt(i) v_{i-1}, (b^dag v)_i = sqrt(n-i) v_i
    let raise_a = |v: &[Complex64], i: usize| {
        if i == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            v[i - 1] * (i as f64).sqrt()
        }
    };
    let raise_b = |v: &[Complex64], i: usize| {
        if i == n {
            Complex64::new(0.0, 0.0)
        } else {
            v[i] * ((n - i) as f64).sqrt()
        }
    };
    (0..=n)
        .map(|p| {
            (0..=n)
                .map(|i| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    if p > 0 {
                        let v = &prev[p - 1];
                        acc += (cc * raise_a(v, i) + is * raise_b(v, i)) * (p as f64).sqrt();
                    }
                    if p < n {
                        let v = &prev[p];
                        acc += (cc * raise_b(v, i) + is * raise_a(v, i)) * ((n - p) as f64).sqrt();
                    }
                    acc * inv
                })
                .collect()
        })
        .collect()
}

/// Unitary of one total-photon-number sector as a dense matrix, indexed by
/// photons in mode A. Mainly for tests and diagnostics.
pub fn sector_unitary(n: usize, params: WaveguideParams) -> DMatrix<Complex64> {
    let (c, s) = params.cos_sin();
    let is = Complex64::new(0.0, s);
    let mut cols: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
    for m in 1..=n {
        cols = next_sector(&cols, m, c, is);
    }
    DMatrix::from_fn(n + 1, n + 1, |q, p| cols[p][q])
}

/// Running sums `sum_n t^{2n} (n+p)! (n+q)! / n!^2`, split at `split`.
struct BandSeries {
    inside: f64,
    outside: f64,
}

fn band_series(t2: f64, p: usize, q: usize, split: usize) -> BandSeries {
    let mut term: f64 =
        (1..=p).map(|i| i as f64).product::<f64>() * (1..=q).map(|i| i as f64).product::<f64>();
    let mut inside = 0.0;
    let mut outside = 0.0;
    let mut n = 0usize;
    loop {
        if n < split {
            inside += term;
        } else {
            outside += term;
        }
        if t2 == 0.0 {
            break;
        }
        let next = term * t2 * ((n + 1 + p) * (n + 1 + q)) as f64 / ((n + 1) * (n + 1)) as f64;
        let ratio_small =
            (t2 * ((n + 2 + p) * (n + 2 + q)) as f64 / ((n + 2) * (n + 2)) as f64) < 1.0;
        term = next;
        n += 1;
        if n >= split && ratio_small && term < 1e-24 * (inside + outside) {
            break;
        }
    }
    BandSeries { inside, outside }
}

/// Closed-form evolved photon-subtracted vortex: the creation polynomial
/// `a^dag^k` is replaced by `(a^dag cos theta + i b^dag sin theta)^k` and
/// applied to the squeezed vacuum. The amplitude at `(n+k-m, n+m)` is
/// `binom(k, m) cos^{k-m} (i sin)^m e^{i n phi} tanh^n r sqrt((n+k-m)! (n+m)!) / n!`,
/// up to normalization.
pub fn evolved_ps_vortex(
    params: SqueezeParams,
    k: u32,
    wg: WaveguideParams,
    cutoff: FockCutoff,
) -> Result<TwoModeState> {
    params.validate()?;
    if k > DEFAULT_MAX_ORDER {
        return Err(Error::invalid(format!(
            "vortex order k must lie in 0..={DEFAULT_MAX_ORDER}, got {k}"
        )));
    }
    let k = k as usize;
    let n_max = cutoff.n_max();
    let (c, s) = wg.cos_sin();
    let t = params.r.tanh();
    let t2 = t * t;

    let mut total = 0.0;
    let mut outside = 0.0;
    let mut bands = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let coeff = binomial(k, m) * c.powi((k - m) as i32) * s.powi(m as i32);
        let reach = (k - m).max(m);
        let split = (n_max + 1).saturating_sub(reach);
        if coeff == 0.0 {
            bands.push((coeff, split));
            continue;
        }
        let series = band_series(t2, k - m, m, split);
        total += coeff * coeff * (series.inside + series.outside);
        outside += coeff * coeff * series.outside;
        bands.push((coeff, split));
    }
    let tail = if total > 0.0 { outside / total } else { 1.0 };
    cutoff.check_tail(tail)?;

    let scale = 1.0 / total.sqrt();
    let mut amps = DMatrix::zeros(cutoff.dim(), cutoff.dim());
    for (m, &(coeff, split)) in bands.iter().enumerate() {
        if coeff == 0.0 {
            continue;
        }
        let phase_m = Complex64::i().powu(m as u32);
        let (p, q) = (k - m, m);
        // sqrt of the band term, advanced by its ratio
        let mut mag: f64 = ((1..=p).map(|i| i as f64).product::<f64>()
            * (1..=q).map(|i| i as f64).product::<f64>())
        .sqrt();
        for n in 0..split {
            let amp = Complex64::from_polar(coeff * mag * scale, n as f64 * params.phi) * phase_m;
            amps[(n + p, n + q)] += amp;
            mag *= t * (((n + 1 + p) * (n + 1 + q)) as f64).sqrt() / (n + 1) as f64;
        }
    }
    let state = TwoModeState::from_amplitudes(amps, cutoff)?;
    // unit norm inside the box, like every other constructor
    let (state, _) = normalize(&state)?;
    Ok(state.with_tail(tail))
}

/// Coefficients `(cs_plus, cs_minus)` of the evolved beam-splitter vortex
/// operator `cs_plus a^dag - i cs_minus b^dag`.
pub fn bs_mixing(params: &BsVortexParams, wg: WaveguideParams) -> (f64, f64) {
    let (c, s) = wg.cos_sin();
    (
        params.eta_x * c + params.eta_y * s,
        params.eta_y * c - params.eta_x * s,
    )
}

/// Closed-form evolved beam-splitter vortex as a sum of product terms.
pub fn evolved_bs_expansion(
    params: &BsVortexParams,
    wg: WaveguideParams,
) -> Result<ProductExpansion> {
    params.validate()?;
    let (plus, minus) = bs_mixing(params, wg);
    bs_expansion(
        params,
        Complex64::new(plus, 0.0),
        Complex64::new(0.0, -minus),
    )
}

/// `(cs_plus a^dag - i cs_minus b^dag)^k |a, b>`, normalized. At `kappa = 0`
/// this is the beam-splitter vortex itself.
pub fn evolved_bs_vortex(
    params: BsVortexParams,
    wg: WaveguideParams,
    cutoff: FockCutoff,
) -> Result<TwoModeState> {
    evolved_bs_expansion(&params, wg)?.to_state(cutoff)
}
