//! Truncated two-mode Fock space.
//!
//! A [`TwoModeState`] stores the dense amplitude table `c(n_a, n_b)` for
//! `0 <= n_a, n_b <= n_max`, row index = photons in mode A, column index =
//! photons in mode B. Every state also carries an estimate of the probability
//! mass that the truncation discards.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Noise floor for norms and singular values.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Default admissible probability mass outside the truncation.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-8;

/// Per-mode photon-number cutoff together with the admissible truncation tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockCutoff {
    n_max: usize,
    tail_tolerance: f64,
}

impl FockCutoff {
    pub fn new(n_max: usize, tail_tolerance: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tail_tolerance) {
            return Err(Error::invalid(format!(
                "tail tolerance must lie in [0, 1), got {tail_tolerance}"
            )));
        }
        Ok(Self {
            n_max,
            tail_tolerance,
        })
    }

    /// Cutoff with the default tail tolerance.
    pub fn with_n_max(n_max: usize) -> Self {
        Self {
            n_max,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Number of basis states per mode.
    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Same tolerance, different photon-number limit.
    pub fn resized(&self, n_max: usize) -> Self {
        Self {
            n_max,
            tail_tolerance: self.tail_tolerance,
        }
    }

    /// Fails with `CutoffTooSmall` when `tail` exceeds the tolerance.
    pub fn check_tail(&self, tail: f64) -> Result<()> {
        if tail > self.tail_tolerance {
            Err(Error::CutoffTooSmall {
                n_max: self.n_max,
                tail,
                tolerance: self.tail_tolerance,
            })
        } else {
            Ok(())
        }
    }
}

/// Adaptive cutoff search: doubling from `start` until the constructor's tail
/// test passes, never exceeding `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    pub start: usize,
    pub cap: usize,
    pub tail_tolerance: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            start: 16,
            cap: 256,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
        }
    }
}

impl CutoffPolicy {
    pub fn with_tolerance(tail_tolerance: f64) -> Self {
        Self {
            tail_tolerance,
            ..Self::default()
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Candidate cutoffs in the order they are tried.
    pub fn candidates(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut n = self.start.max(1).min(self.cap);
        loop {
            out.push(n);
            if n >= self.cap {
                break;
            }
            n = (n * 2).min(self.cap);
        }
        out
    }

    /// Runs `build` on successively larger cutoffs until it stops reporting
    /// `CutoffTooSmall`. Other errors are returned immediately.
    pub fn build<T>(&self, mut build: impl FnMut(FockCutoff) -> Result<T>) -> Result<T> {
        if !(0.0..1.0).contains(&self.tail_tolerance) {
            return Err(Error::invalid("tail tolerance must lie in [0, 1)"));
        }
        let mut last_tail = f64::NAN;
        for n in self.candidates() {
            let cutoff = FockCutoff {
                n_max: n,
                tail_tolerance: self.tail_tolerance,
            };
            match build(cutoff) {
                Err(Error::CutoffTooSmall { tail, .. }) => last_tail = tail,
                other => return other,
            }
        }
        Err(Error::CutoffCapExceeded {
            cap: self.cap,
            tail: last_tail,
            tolerance: self.tail_tolerance,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Complex amplitude table over the truncated two-mode Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amps: DMatrix<Complex64>,
    cutoff: FockCutoff,
    tail: f64,
}

impl TwoModeState {
    /// Wraps an `(n_max+1) x (n_max+1)` amplitude table.
    pub fn from_amplitudes(amps: DMatrix<Complex64>, cutoff: FockCutoff) -> Result<Self> {
        if amps.nrows() != cutoff.dim() || amps.ncols() != cutoff.dim() {
            return Err(Error::invalid(format!(
                "amplitude table is {}x{}, cutoff requires {}x{}",
                amps.nrows(),
                amps.ncols(),
                cutoff.dim(),
                cutoff.dim()
            )));
        }
        Ok(Self {
            amps,
            cutoff,
            tail: 0.0,
        })
    }

    pub(crate) fn with_tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    pub fn zeros(cutoff: FockCutoff) -> Self {
        Self {
            amps: DMatrix::zeros(cutoff.dim(), cutoff.dim()),
            cutoff,
            tail: 0.0,
        }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn n_max(&self) -> usize {
        self.cutoff.n_max
    }

    /// Estimated probability mass lost to the truncation.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DMatrix<Complex64> {
        self.amps
    }

    /// Amplitude at `(n_a, n_b)`; zero outside the cutoff.
    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex64 {
        if n_a <= self.n_max() && n_b <= self.n_max() {
            self.amps[(n_a, n_b)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `|c(n_a, n_b)|^2` table.
    pub fn probabilities(&self) -> DMatrix<f64> {
        self.amps.map(|c| c.norm_sqr())
    }

    /// Probability per total photon number `N = n_a + n_b`, for `N = 0..=2 n_max`.
    pub fn sector_probabilities(&self) -> Vec<f64> {
        let n = self.n_max();
        let mut out = vec![0.0; 2 * n + 1];
        for a in 0..=n {
            for b in 0..=n {
                out[a + b] += self.amps[(a, b)].norm_sqr();
            }
        }
        out
    }

    /// Largest total photon number `n_a + n_b` whose amplitude exceeds 1e-18
    /// in magnitude (probability 1e-36, far below any tolerance in use).
    pub fn max_total_photons(&self) -> usize {
        let n = self.n_max();
        let mut top = 0;
        for a in 0..=n {
            for b in 0..=n {
                if self.amps[(a, b)].norm() > ZERO_THRESHOLD * 1e-6 {
                    top = top.max(a + b);
                }
            }
        }
        top
    }

    /// Copy on a larger grid, zero-padded.
    pub fn padded(&self, n_max: usize) -> Self {
        if n_max <= self.n_max() {
            return self.clone();
        }
        let cutoff = self.cutoff.resized(n_max);
        let mut amps = DMatrix::zeros(cutoff.dim(), cutoff.dim());
        amps.view_mut((0, 0), (self.cutoff.dim(), self.cutoff.dim()))
            .copy_from(&self.amps);
        Self {
            amps,
            cutoff,
            tail: self.tail,
        }
    }

    /// Copy restricted to `0..=n_max` per mode, not renormalized.
    pub fn truncated(&self, n_max: usize) -> Self {
        if n_max >= self.n_max() {
            return self.clone();
        }
        let cutoff = self.cutoff.resized(n_max);
        let amps = self
            .amps
            .view((0, 0), (cutoff.dim(), cutoff.dim()))
            .into_owned();
        Self {
            amps,
            cutoff,
            tail: self.tail,
        }
    }

    /// Inner product `<self|other>` over the common support.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let n = self.n_max().min(other.n_max());
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..=n {
            for b in 0..=n {
                acc += self.amps[(a, b)].conj() * other.amps[(a, b)];
            }
        }
        acc
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Max-norm distance, treating amplitudes outside either cutoff as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.n_max().max(other.n_max());
        let mut worst = 0.0f64;
        for a in 0..=n {
            for b in 0..=n {
                worst = worst.max((self.amplitude(a, b) - other.amplitude(a, b)).norm());
            }
        }
        worst
    }

    /// Exchanges the two modes (transposes the amplitude table).
    pub fn swap_modes(&self) -> Self {
        Self {
            amps: self.amps.transpose(),
            cutoff: self.cutoff,
            tail: self.tail,
        }
    }

    /// Applies `exp(i theta_a n_a) (x) exp(i theta_b n_b)`.
    pub fn with_local_phases(&self, theta_a: f64, theta_b: f64) -> Self {
        let amps = DMatrix::from_fn(self.cutoff.dim(), self.cutoff.dim(), |a, b| {
            self.amps[(a, b)] * Complex64::from_polar(1.0, theta_a * a as f64 + theta_b * b as f64)
        });
        Self {
            amps,
            cutoff: self.cutoff,
            tail: self.tail,
        }
    }

    /// Scales all amplitudes by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amps: &self.amps * factor,
            cutoff: self.cutoff,
            tail: self.tail,
        }
    }

    /// Amplitude-wise sum; both states must share the cutoff.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_max() != other.n_max() {
            return Err(Error::invalid("cannot add states with different cutoffs"));
        }
        Ok(Self {
            amps: &self.amps + &other.amps,
            cutoff: self.cutoff,
            tail: self.tail.max(other.tail),
        })
    }
}

/// `|n_a, n_b>` within the cutoff.
pub fn make_basis_state(n_a: usize, n_b: usize, cutoff: FockCutoff) -> Result<TwoModeState> {
    if n_a > cutoff.n_max() || n_b > cutoff.n_max() {
        return Err(Error::IndexOutOfCutoff {
            n_a,
            n_b,
            n_max: cutoff.n_max(),
        });
    }
    let mut state = TwoModeState::zeros(cutoff);
    state.amps[(n_a, n_b)] = Complex64::new(1.0, 0.0);
    Ok(state)
}

/// Ladder operator on one mode. The result is not normalized; amplitude
/// raised past `n_max` is dropped and added to the tail estimate.
pub fn apply_ladder(state: &TwoModeState, mode: Mode, direction: Ladder) -> TwoModeState {
    let dim = state.cutoff.dim();
    let n = state.n_max();
    let src = match mode {
        Mode::A => state.amps.clone(),
        Mode::B => state.amps.transpose(),
    };
    let mut out = DMatrix::zeros(dim, dim);
    let mut dropped = 0.0;
    match direction {
        Ladder::Lower => {
            for i in 1..=n {
                let f = (i as f64).sqrt();
                for j in 0..dim {
                    out[(i - 1, j)] = src[(i, j)] * f;
                }
            }
        }
        Ladder::Raise => {
            for i in 0..=n {
                let f = ((i + 1) as f64).sqrt();
                for j in 0..dim {
                    let v = src[(i, j)] * f;
                    if i == n {
                        dropped += v.norm_sqr();
                    } else {
                        out[(i + 1, j)] = v;
                    }
                }
            }
        }
    }
    let amps = match mode {
        Mode::A => out,
        Mode::B => out.transpose(),
    };
    let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let tail = if kept > 0.0 {
        state.tail + dropped / (kept + dropped)
    } else {
        state.tail
    };
    TwoModeState {
        amps,
        cutoff: state.cutoff,
        tail,
    }
}

/// Returns the unit-norm state together with the input's Euclidean norm.
pub fn normalize(state: &TwoModeState) -> Result<(TwoModeState, f64)> {
    let norm = state.norm();
    if norm <= ZERO_THRESHOLD {
        return Err(Error::ZeroNorm);
    }
    let amps = state.amps.map(|c| c / norm);
    Ok((
        TwoModeState {
            amps,
            cutoff: state.cutoff,
            tail: state.tail,
        },
        norm,
    ))
}

/// Schmidt coefficients in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    fn from_singular_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut coefficients: Vec<f64> =
            values.into_iter().filter(|s| *s > ZERO_THRESHOLD).collect();
        coefficients.sort_by(|a, b| b.total_cmp(a));
        Self { coefficients }
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.coefficients.iter().map(|s| s * s).sum()
    }
}

/// Singular values of the amplitude table.
pub fn schmidt_coefficients(state: &TwoModeState) -> SchmidtSpectrum {
    SchmidtSpectrum::from_singular_values(state.amps.clone().singular_values().iter().copied())
}

/// A two-mode vector written as `sum_j w_j |u_j> (x) |v_j>`, with the
/// single-mode factors stored on grids long enough that their own truncation
/// is negligible. Norms, truncation tails and Schmidt coefficients of such
/// states are computed from `(J x J)` Gram matrices instead of the dense table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpansion {
    weights: Vec<Complex64>,
    left: Vec<Vec<Complex64>>,
    right: Vec<Vec<Complex64>>,
}

fn partial_inner(u: &[Complex64], v: &[Complex64], range: std::ops::Range<usize>) -> Complex64 {
    let end = range.end.min(u.len()).min(v.len());
    let start = range.start.min(end);
    u[start..end]
        .iter()
        .zip(&v[start..end])
        .map(|(a, b)| a.conj() * b)
        .sum()
}

impl ProductExpansion {
    pub fn new(terms: Vec<(Complex64, Vec<Complex64>, Vec<Complex64>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("product expansion needs at least one term"));
        }
        let mut weights = Vec::with_capacity(terms.len());
        let mut left = Vec::with_capacity(terms.len());
        let mut right = Vec::with_capacity(terms.len());
        for (w, u, v) in terms {
            weights.push(w);
            left.push(u);
            right.push(v);
        }
        Ok(Self {
            weights,
            left,
            right,
        })
    }

    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    fn gram(vectors: &[Vec<Complex64>], range: std::ops::Range<usize>) -> DMatrix<Complex64> {
        let j = vectors.len();
        DMatrix::from_fn(j, j, |a, b| {
            partial_inner(&vectors[a], &vectors[b], range.clone())
        })
    }

    fn quadratic(&self, ga: &DMatrix<Complex64>, gb: &DMatrix<Complex64>) -> f64 {
        let j = self.weights.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..j {
            for b in 0..j {
                acc += self.weights[a].conj() * self.weights[b] * ga[(a, b)] * gb[(a, b)];
            }
        }
        acc.re
    }

    /// Squared norm of the untruncated vector.
    pub fn norm_sqr(&self) -> f64 {
        let ga = Self::gram(&self.left, 0..usize::MAX);
        let gb = Self::gram(&self.right, 0..usize::MAX);
        self.quadratic(&ga, &gb)
    }

    /// Fraction of the norm carried by amplitudes with `n_a > n_max` or
    /// `n_b > n_max`, summed directly over the outside region.
    pub fn tail(&self, n_max: usize) -> f64 {
        let inside = 0..n_max + 1;
        let outside = n_max + 1..usize::MAX;
        let ga_full = Self::gram(&self.left, 0..usize::MAX);
        let gb_full = Self::gram(&self.right, 0..usize::MAX);
        let ga_in = Self::gram(&self.left, inside);
        let ga_out = Self::gram(&self.left, outside.clone());
        let gb_out = Self::gram(&self.right, outside);
        let out = self.quadratic(&ga_out, &gb_full) + self.quadratic(&ga_in, &gb_out);
        let total = self.quadratic(&ga_full, &gb_full);
        if total <= 0.0 {
            1.0
        } else {
            (out / total).max(0.0)
        }
    }

    /// Dense, normalized state on the given cutoff. Fails if the tail exceeds
    /// the cutoff's tolerance.
    pub fn to_state(&self, cutoff: FockCutoff) -> Result<TwoModeState> {
        let tail = self.tail(cutoff.n_max());
        cutoff.check_tail(tail)?;
        let dim = cutoff.dim();
        let mut amps = DMatrix::<Complex64>::zeros(dim, dim);
        for ((w, u), v) in self.weights.iter().zip(&self.left).zip(&self.right) {
            for a in 0..dim.min(u.len()) {
                let ua = *w * u[a];
                if ua == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..dim.min(v.len()) {
                    amps[(a, b)] += ua * v[b];
                }
            }
        }
        let state = TwoModeState::from_amplitudes(amps, cutoff)?;
        let (state, _) = normalize(&state)?;
        Ok(state.with_tail(tail))
    }

    /// Schmidt coefficients of the normalized state restricted to
    /// `0..=n_max` per mode, from the QR factors of the two factor families.
    pub fn schmidt_within(&self, n_max: usize) -> Result<SchmidtSpectrum> {
        let j = self.weights.len();
        let factor = |vectors: &[Vec<Complex64>]| {
            let rows = n_max + 1;
            let m = DMatrix::from_fn(rows, j, |i, c| {
                vectors[c].get(i).copied().unwrap_or_default()
            });
            if rows >= j {
                m.qr().r()
            } else {
                // fewer rows than terms: the thin factor is the matrix itself
                m
            }
        };
        let ra = factor(&self.left);
        let rb = factor(&self.right);
        let w = DMatrix::from_diagonal(&DVector::from_vec(self.weights.clone()));
        let core = &ra * w * rb.transpose();
        let norm_sqr: f64 = core.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr.sqrt() <= ZERO_THRESHOLD {
            return Err(Error::ZeroNorm);
        }
        let scale = norm_sqr.sqrt();
        Ok(SchmidtSpectrum::from_singular_values(
            core.singular_values().iter().map(|s| s / scale),
        ))
    }
}
