//! Input-state families: two-mode squeezed vacuum, photon-subtracted vortex,
//! and the beam-splitter vortex built on a product of squeezed vacua.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{normalize, FockCutoff, ProductExpansion, TwoModeState};

/// Largest vortex order accepted unless the caller raises it explicitly.
pub const DEFAULT_MAX_ORDER: u32 = 8;

/// Two-mode squeeze amplitude `r` and phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r: f64,
    pub phi: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        let p = Self { r, phi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(Error::invalid(format!(
                "squeeze amplitude r must be finite and >= 0, got {}",
                self.r
            )));
        }
        if !self.phi.is_finite() {
            return Err(Error::invalid("squeeze phase must be finite"));
        }
        Ok(())
    }
}

/// Parameters of the beam-splitter vortex `(eta_x a^dag - i eta_y b^dag)^k |a, b>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsVortexParams {
    pub r_x: f64,
    pub r_y: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub k: u32,
    #[serde(default)]
    pub phi: f64,
}

impl BsVortexParams {
    pub fn new(r_x: f64, r_y: f64, eta_x: f64, eta_y: f64, k: u32) -> Result<Self> {
        let p = Self {
            r_x,
            r_y,
            eta_x,
            eta_y,
            k,
            phi: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_order_cap(DEFAULT_MAX_ORDER)
    }

    pub fn validate_with_order_cap(&self, max_order: u32) -> Result<()> {
        for (name, v) in [("r_x", self.r_x), ("r_y", self.r_y)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !(self.eta_x.is_finite() && self.eta_y.is_finite() && self.phi.is_finite()) {
            return Err(Error::invalid("mixing parameters and phase must be finite"));
        }
        if self.eta_x == 0.0 && self.eta_y == 0.0 {
            return Err(Error::invalid("eta_x and eta_y cannot both be zero"));
        }
        if self.k == 0 || self.k > max_order {
            return Err(Error::invalid(format!(
                "vortex order k must lie in 1..={max_order}, got {}",
                self.k
            )));
        }
        Ok(())
    }

    /// Combined squeeze `sqrt(r_x^2 + r_y^2)`.
    pub fn r(&self) -> f64 {
        self.r_x.hypot(self.r_y)
    }

    pub fn sigma_x(&self) -> f64 {
        (2.0 * self.r_x).exp()
    }

    pub fn sigma_y(&self) -> f64 {
        (2.0 * self.r_y).exp()
    }

    /// `tanh 2r`.
    pub fn xi(&self) -> f64 {
        (2.0 * self.r()).tanh()
    }

    /// Quoted prefactor `2^{-k/2} (1 + xi)^k / (sqrt(k!) (sigma_x^2 + sigma_y^2)^{k/2})`.
    /// Informational only: constructed states are normalized numerically.
    pub fn normalization_a(&self) -> f64 {
        let k = self.k as f64;
        let s2 = self.sigma_x().powi(2) + self.sigma_y().powi(2);
        2f64.powf(-k / 2.0) * (1.0 + self.xi()).powf(k)
            / (factorial(self.k as usize).sqrt() * s2.powf(k / 2.0))
    }

    /// Internal single-mode squeeze parameters `(s_x, s_y)`. The position
    /// envelope of `S(s)|0>` is `exp(-x^2 e^{2s} / 2)`; matching
    /// `exp(-x^2 / (2 sigma^2))` with `sigma = e^{2 r_i}` gives `s = -2 r_i`.
    pub fn internal_squeeze(&self) -> (f64, f64) {
        (-2.0 * self.r_x, -2.0 * self.r_y)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Two-mode squeezed vacuum `sum_n e^{i n phi} tanh^n r / cosh r |n, n>`.
pub fn make_tmsv(params: SqueezeParams, cutoff: FockCutoff) -> Result<TwoModeState> {
    params.validate()?;
    let t = params.r.tanh();
    // exact: mass beyond n_max is tanh^{2(n_max+1)} r
    let tail = if t == 0.0 {
        0.0
    } else {
        (t * t).powi(cutoff.n_max() as i32 + 1)
    };
    cutoff.check_tail(tail)?;
    let dim = cutoff.dim();
    let head = 1.0 / params.r.cosh();
    let mut amps = DMatrix::zeros(dim, dim);
    let mut mag = head;
    for n in 0..dim {
        amps[(n, n)] = Complex64::from_polar(mag, n as f64 * params.phi);
        mag *= t;
    }
    let (state, _) = normalize(&TwoModeState::from_amplitudes(amps, cutoff)?)?;
    Ok(state.with_tail(tail))
}

/// Normalized weights `|c(m + k, m)|^2` of the photon-subtracted vortex,
/// with a directly summed tail.
pub(crate) struct PsSeries {
    t2: f64,
    k: usize,
    head: f64,
}

impl PsSeries {
    pub(crate) fn new(r: f64, k: usize) -> Self {
        let t = r.tanh();
        let c2 = r.cosh().powi(2);
        Self {
            t2: t * t,
            k,
            head: 1.0 / c2.powi(k as i32 + 1),
        }
    }

    /// `|c(m+k, m)|^2 = (1 - t^2)^{k+1} t^{2m} binom(m + k, k)`.
    pub(crate) fn weight(&self, m: usize) -> f64 {
        self.head * self.t2.powi(m as i32) * binomial(m + self.k, self.k)
    }

    /// Mass of all terms with `m >= from`, summed directly.
    pub(crate) fn tail_from(&self, from: usize) -> f64 {
        if self.t2 == 0.0 {
            return if from == 0 { 1.0 } else { 0.0 };
        }
        let mut acc = 0.0;
        let mut term = self.weight(from);
        let mut m = from;
        while term > 0.0 {
            acc += term;
            m += 1;
            term *= self.t2 * (m + self.k) as f64 / m as f64;
            if term < acc * 1e-20 {
                break;
            }
        }
        acc
    }
}

/// `a^dag^k` applied to the two-mode squeezed vacuum, normalized. Amplitudes
/// sit on `(m + k, m)` with weight `e^{i m phi} tanh^m r sqrt((m+k)!/m!)`.
/// `k = 0` returns the squeezed vacuum itself.
pub fn make_ps_vortex(params: SqueezeParams, k: u32, cutoff: FockCutoff) -> Result<TwoModeState> {
    params.validate()?;
    if k == 0 {
        return make_tmsv(params, cutoff);
    }
    if k > DEFAULT_MAX_ORDER {
        return Err(Error::invalid(format!(
            "vortex order k must lie in 0..={DEFAULT_MAX_ORDER}, got {k}"
        )));
    }
    let k = k as usize;
    let n = cutoff.n_max();
    if n < k {
        return Err(Error::CutoffTooSmall {
            n_max: n,
            tail: 1.0,
            tolerance: cutoff.tail_tolerance(),
        });
    }
    let series = PsSeries::new(params.r, k);
    let tail = series.tail_from(n - k + 1);
    cutoff.check_tail(tail)?;
    let mut amps = DMatrix::zeros(cutoff.dim(), cutoff.dim());
    for m in 0..=n - k {
        amps[(m + k, m)] = Complex64::from_polar(series.weight(m).sqrt(), m as f64 * params.phi);
    }
    let (state, _) = normalize(&TwoModeState::from_amplitudes(amps, cutoff)?)?;
    Ok(state.with_tail(tail))
}

/// Single-mode squeezed vacuum on a grid long enough that the discarded
/// mass is below 1e-30. Amplitudes `c_{2n} ∝ (-e^{i phi} tanh s)^n sqrt((2n)!)/(2^n n!)`.
pub(crate) fn squeezed_vacuum(s: f64, phi: f64) -> Vec<Complex64> {
    let t = s.tanh();
    let ratio = Complex64::from_polar(-t, phi);
    let mut out = vec![Complex64::new(1.0 / s.cosh().sqrt(), 0.0)];
    if t == 0.0 {
        return out;
    }
    let t2 = t * t;
    let mut n = 0usize;
    loop {
        n += 1;
        let prev = out[out.len() - 1];
        let next = prev * ratio * ((2 * n - 1) as f64 / (2 * n) as f64).sqrt();
        out.push(Complex64::new(0.0, 0.0));
        out.push(next);
        if next.norm_sqr() / (1.0 - t2) < 1e-32 {
            break;
        }
    }
    out
}

/// `a^dag^j` on a single-mode vector; the vector grows by `j` entries.
pub(crate) fn raise_power(v: &[Complex64], j: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len() + j];
    for (n, c) in v.iter().enumerate() {
        // sqrt((n+j)!/n!)
        let f: f64 = (n + 1..=n + j).map(|i| (i as f64).sqrt()).product();
        out[n + j] = c * f;
    }
    out
}

/// `(u a^dag + w b^dag)^k |a, b>` as a sum of `k + 1` product terms.
pub(crate) fn bs_expansion(
    params: &BsVortexParams,
    u: Complex64,
    w: Complex64,
) -> Result<ProductExpansion> {
    let (s_x, s_y) = params.internal_squeeze();
    let sq_a = squeezed_vacuum(s_x, params.phi);
    let sq_b = squeezed_vacuum(s_y, params.phi);
    let k = params.k as usize;
    let terms = (0..=k)
        .map(|j| {
            let weight = binomial(k, j) * u.powu((k - j) as u32) * w.powu(j as u32);
            (weight, raise_power(&sq_a, k - j), raise_power(&sq_b, j))
        })
        .filter(|(weight, _, _)| weight.norm() > 0.0)
        .collect();
    ProductExpansion::new(terms)
}

/// Normalized `(eta_x a^dag - i eta_y b^dag)^k |a, b>`.
pub fn make_bs_vortex(params: BsVortexParams, cutoff: FockCutoff) -> Result<TwoModeState> {
    params.validate()?;
    let exp = bs_expansion(
        &params,
        Complex64::new(params.eta_x, 0.0),
        Complex64::new(0.0, -params.eta_y),
    )?;
    exp.to_state(cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_ladder, make_basis_state, normalize, Ladder, Mode};
    use std::f64::consts::FRAC_PI_2;

    fn cut(n: usize) -> FockCutoff {
        FockCutoff::with_n_max(n)
    }

    #[test]
    fn tmsv_values() {
        let s = make_tmsv(SqueezeParams::new(1.0, 0.0).unwrap(), cut(64)).unwrap();
        assert!((s.amplitude(0, 0).re - 0.648054).abs() < 1e-6);
        let ratio = s.amplitude(1, 1).re / s.amplitude(0, 0).re;
        assert!((ratio - 1f64.tanh()).abs() < 1e-14);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);

        let vac = make_tmsv(SqueezeParams::new(0.0, 0.0).unwrap(), cut(4)).unwrap();
        assert_eq!(
            vac.max_abs_diff(&make_basis_state(0, 0, cut(4)).unwrap()),
            0.0
        );

        let rot = make_tmsv(SqueezeParams::new(1.0, FRAC_PI_2).unwrap(), cut(64)).unwrap();
        for n in 0..10 {
            assert!((rot.amplitude(n, n).norm() - s.amplitude(n, n).norm()).abs() < 1e-15);
            let expected = Complex64::from_polar(s.amplitude(n, n).re, n as f64 * FRAC_PI_2);
            assert!((rot.amplitude(n, n) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn tmsv_cutoff_too_small() {
        let err = make_tmsv(SqueezeParams::new(1.0, 0.0).unwrap(), cut(8)).unwrap_err();
        assert!(matches!(err, Error::CutoffTooSmall { n_max: 8, .. }));
    }

    #[test]
    fn ps_vortex_values() {
        let p = SqueezeParams::new(1.0, 0.0).unwrap();
        let s = make_ps_vortex(p, 1, cut(80)).unwrap();
        let ratio = s.amplitude(2, 1).re / s.amplitude(1, 0).re;
        assert!((ratio - 2f64.sqrt() * 1f64.tanh()).abs() < 1e-12);
        let sech2 = 1.0 / 1f64.cosh().powi(2);
        assert!((s.amplitude(1, 0).re - sech2).abs() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);

        let weak = make_ps_vortex(SqueezeParams::new(1e-9, 0.0).unwrap(), 1, cut(4)).unwrap();
        assert!((weak.amplitude(1, 0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ps_vortex_matches_ladder_oracle() {
        let p = SqueezeParams::new(0.7, 0.4).unwrap();
        let c = cut(90);
        for k in 1..=3u32 {
            let mut s = make_tmsv(p, c).unwrap();
            for _ in 0..k {
                s = apply_ladder(&s, Mode::A, Ladder::Raise);
            }
            let (oracle, _) = normalize(&s).unwrap();
            let built = make_ps_vortex(p, k, c).unwrap();
            assert!(built.max_abs_diff(&oracle) < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn ps_vortex_k0_is_tmsv() {
        let p = SqueezeParams::new(0.8, 0.3).unwrap();
        assert_eq!(
            make_ps_vortex(p, 0, cut(64)).unwrap(),
            make_tmsv(p, cut(64)).unwrap()
        );
    }

    #[test]
    fn ps_series_tail_is_consistent() {
        let series = PsSeries::new(0.9, 2);
        let head: f64 = (0..40).map(|m| series.weight(m)).sum();
        assert!((head + series.tail_from(40) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bs_vortex_vacuum_examples() {
        let c = cut(6);
        let p = BsVortexParams::new(0.0, 0.0, 1.0, 1.0, 1).unwrap();
        let s = make_bs_vortex(p, c).unwrap();
        let h = 0.5f64.sqrt();
        assert!((s.amplitude(1, 0) - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(0, 1) - Complex64::new(0.0, -h)).norm() < 1e-15);

        let p = BsVortexParams::new(0.0, 0.0, 1.0, 0.75, 1).unwrap();
        let s = make_bs_vortex(p, c).unwrap();
        let vac = make_basis_state(0, 0, c).unwrap();
        let oracle = apply_ladder(&vac, Mode::A, Ladder::Raise)
            .add(&apply_ladder(&vac, Mode::B, Ladder::Raise).scaled(Complex64::new(0.0, -0.75)))
            .unwrap();
        let (oracle, _) = normalize(&oracle).unwrap();
        assert!(s.max_abs_diff(&oracle) < 1e-15);

        let p = BsVortexParams::new(0.0, 0.0, 1.0, 1.0, 2).unwrap();
        let s = make_bs_vortex(p, c).unwrap();
        assert!((s.amplitude(2, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1, 1) - Complex64::new(0.0, -(0.5f64.sqrt()))).norm() < 1e-15);
        assert!((s.amplitude(0, 2) - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        for a in 0..=6 {
            for b in 0..=6 {
                if a + b != 2 {
                    assert_eq!(s.amplitude(a, b), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn bs_vortex_matches_ladder_oracle() {
        let p = BsVortexParams::new(0.2, 0.5, 1.0, 0.75, 2).unwrap();
        let c = cut(120);
        let (s_x, s_y) = p.internal_squeeze();
        let (a, b) = (squeezed_vacuum(s_x, 0.0), squeezed_vacuum(s_y, 0.0));
        let amps = DMatrix::from_fn(121, 121, |i, j| {
            a.get(i).copied().unwrap_or_default() * b.get(j).copied().unwrap_or_default()
        });
        let seed = TwoModeState::from_amplitudes(amps, c).unwrap();
        let mut acc = seed.clone();
        for _ in 0..2 {
            let ra = apply_ladder(&acc, Mode::A, Ladder::Raise);
            let rb = apply_ladder(&acc, Mode::B, Ladder::Raise).scaled(Complex64::new(0.0, -0.75));
            acc = ra.add(&rb).unwrap();
        }
        let (oracle, _) = normalize(&acc).unwrap();
        let built = make_bs_vortex(p, c).unwrap();
        assert!(built.max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_is_normalized() {
        for s in [-2.0, -0.4, 0.0, 0.3, 1.0] {
            let v = squeezed_vacuum(s, 0.3);
            let n: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-13, "s = {s}: {n}");
        }
    }

    #[test]
    fn bs_params_validation() {
        assert!(BsVortexParams::new(0.1, 0.1, 0.0, 0.0, 1).is_err());
        assert!(BsVortexParams::new(0.1, 0.1, 1.0, 0.0, 0).is_err());
        assert!(BsVortexParams::new(0.1, 0.1, 1.0, 0.0, 9).is_err());
        assert!(BsVortexParams::new(-0.1, 0.1, 1.0, 0.0, 1).is_err());
        let p = BsVortexParams::new(0.3, 0.4, 1.0, 0.75, 1).unwrap();
        assert!((p.r() - 0.5).abs() < 1e-15);
        assert!((p.xi() - 1f64.tanh()).abs() < 1e-15);
        assert!((p.sigma_y() - 0.8f64.exp()).abs() < 1e-15);
    }
}
