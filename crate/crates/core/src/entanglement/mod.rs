//! Density matrices, partial transpose and logarithmic negativity.
//!
//! For a pure state the negativity follows from the Schmidt coefficients,
//! `N = ((sum s_i)^2 - 1) / 2`. The eigensolve route diagonalizes the partial
//! transpose of `|psi><psi|` directly and serves as an independent check.

mod sweep;

pub use sweep::{
    kappa_grid, negativity_sweep, EndpointCheck, Family, RefinedMinimum, SweepOptions, SweepPath,
    SweepPoint, SweepSeries, SweepSummary, PERIOD_TOLERANCE,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{schmidt_coefficients, CutoffPolicy, SchmidtSpectrum, TwoModeState};

/// Largest density-matrix dimension handled by the eigensolve route.
pub const DEFAULT_MATRIX_CAP: usize = 4096;

/// Partial-transpose eigenvalues above `-EIGENVALUE_FLOOR` count as zero.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Largest allowed gap between the two routes when both run.
pub const METHOD_AGREEMENT: f64 = 1e-8;

/// Tail tolerance used for entanglement work. Truncation errors in `E_N`
/// scale like the square root of the discarded mass.
pub const NEGATIVITY_TAIL_TOLERANCE: f64 = 1e-16;

/// Cutoff policy for negativity: default doubling with the tighter tail.
pub fn negativity_policy() -> CutoffPolicy {
    CutoffPolicy::with_tolerance(NEGATIVITY_TAIL_TOLERANCE)
}

/// Dense `rho` over the product basis, composite index `n_a * dim + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    dim: usize,
}

impl DensityMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Basis states per mode.
    pub fn mode_dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, n_a: usize, n_b: usize) -> usize {
        n_a * self.dim + n_b
    }

    pub fn get(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.entries[(self.index(row.0, row.1), self.index(col.0, col.1))]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|rho - rho^dag|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).camax()
    }

    /// Ascending eigenvalues of the Hermitian matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `|psi><psi|`, refusing dimensions above `cap`.
pub fn density_matrix_with_cap(state: &TwoModeState, cap: usize) -> Result<DensityMatrix> {
    let dim = state.cutoff().dim();
    let total = dim * dim;
    if total > cap {
        return Err(Error::MemoryBudgetExceeded { dim: total, cap });
    }
    let amps = state.amplitudes();
    // row-major flattening: index n_a * dim + n_b
    let v = nalgebra::DVector::from_fn(total, |i, _| amps[(i / dim, i % dim)]);
    Ok(DensityMatrix {
        entries: &v * v.adjoint(),
        dim,
    })
}

pub fn density_matrix(state: &TwoModeState) -> Result<DensityMatrix> {
    density_matrix_with_cap(state, DEFAULT_MATRIX_CAP)
}

/// Transpose on mode B: `(m, mu; n, nu) -> (m, nu; n, mu)`.
pub fn partial_transpose(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim;
    let total = d * d;
    let src = &rho.entries;
    let entries = DMatrix::from_fn(total, total, |row, col| {
        let (m, mu) = (row / d, row % d);
        let (n, nu) = (col / d, col % d);
        src[(m * d + nu, n * d + mu)]
    });
    DensityMatrix { entries, dim: d }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativityMethod {
    Schmidt,
    Eigensolve,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    /// `log2(1 + 2 N)`.
    pub log_negativity: f64,
    /// Magnitude of the summed negative partial-transpose eigenvalues.
    pub negativity: f64,
    /// Route that produced the reported numbers (never `Both`).
    pub method: NegativityMethod,
    pub cutoff_used: usize,
}

impl NegativityResult {
    fn from_negativity(negativity: f64, method: NegativityMethod, cutoff_used: usize) -> Self {
        let negativity = negativity.max(0.0);
        Self {
            log_negativity: (1.0 + 2.0 * negativity).log2(),
            negativity,
            method,
            cutoff_used,
        }
    }
}

/// `N = ((sum s)^2 - 1) / 2` from a Schmidt spectrum.
pub fn negativity_from_spectrum(spectrum: &SchmidtSpectrum) -> f64 {
    let s = spectrum.sum();
    ((s * s - 1.0) / 2.0).max(0.0)
}

fn schmidt_route(state: &TwoModeState) -> NegativityResult {
    let n = negativity_from_spectrum(&schmidt_coefficients(state));
    NegativityResult::from_negativity(n, NegativityMethod::Schmidt, state.n_max())
}

fn eigensolve_route(state: &TwoModeState, cap: usize) -> Result<NegativityResult> {
    let pt = partial_transpose(&density_matrix_with_cap(state, cap)?);
    let n: f64 = pt
        .eigenvalues()
        .into_iter()
        .filter(|l| *l < -EIGENVALUE_FLOOR)
        .map(|l| -l)
        .sum();
    Ok(NegativityResult::from_negativity(
        n,
        NegativityMethod::Eigensolve,
        state.n_max(),
    ))
}

/// Logarithmic negativity of a normalized pure state.
pub fn log_negativity(state: &TwoModeState, method: NegativityMethod) -> Result<NegativityResult> {
    log_negativity_with_cap(state, method, DEFAULT_MATRIX_CAP)
}

/// As [`log_negativity`]; `Both` falls back to the Schmidt route alone when
/// the density matrix would exceed `cap`.
pub fn log_negativity_with_cap(
    state: &TwoModeState,
    method: NegativityMethod,
    cap: usize,
) -> Result<NegativityResult> {
    match method {
        NegativityMethod::Schmidt => Ok(schmidt_route(state)),
        NegativityMethod::Eigensolve => eigensolve_route(state, cap),
        NegativityMethod::Both => {
            let fast = schmidt_route(state);
            let dim = state.cutoff().dim();
            if dim * dim > cap {
                return Ok(fast);
            }
            let slow = eigensolve_route(state, cap)?;
            if (fast.log_negativity - slow.log_negativity).abs() > METHOD_AGREEMENT {
                return Err(Error::MethodDisagreement {
                    schmidt: fast.log_negativity,
                    eigensolve: slow.log_negativity,
                });
            }
            Ok(fast)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{make_tmsv, SqueezeParams};
    use crate::fock::{make_basis_state, normalize, FockCutoff};

    fn bell(n_max: usize) -> TwoModeState {
        let cut = FockCutoff::with_n_max(n_max);
        let s = make_basis_state(0, 1, cut)
            .unwrap()
            .add(&make_basis_state(1, 0, cut).unwrap())
            .unwrap();
        normalize(&s).unwrap().0
    }

    #[test]
    fn density_matrix_examples() {
        let vac = make_basis_state(0, 0, FockCutoff::with_n_max(2)).unwrap();
        let rho = density_matrix(&vac).unwrap();
        assert_eq!(rho.get((0, 0), (0, 0)), Complex64::new(1.0, 0.0));
        assert_eq!(rho.entries().iter().filter(|c| c.norm() > 0.0).count(), 1);

        let rho = density_matrix(&bell(1)).unwrap();
        for r in [(0, 1), (1, 0)] {
            for c in [(0, 1), (1, 0)] {
                assert!((rho.get(r, c).re - 0.5).abs() < 1e-15);
            }
        }
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!(rho.hermiticity_error() < 1e-15);
    }

    #[test]
    fn memory_cap_is_enforced() {
        let st = make_basis_state(0, 0, FockCutoff::with_n_max(64)).unwrap();
        assert!(matches!(
            density_matrix(&st),
            Err(Error::MemoryBudgetExceeded {
                dim: 4225,
                cap: 4096
            })
        ));
        let r = log_negativity(&st, NegativityMethod::Both).unwrap();
        assert_eq!(r.method, NegativityMethod::Schmidt);
        assert!(matches!(
            log_negativity(&st, NegativityMethod::Eigensolve),
            Err(Error::MemoryBudgetExceeded { .. })
        ));
    }

    #[test]
    fn partial_transpose_of_bell_pair() {
        let pt = partial_transpose(&density_matrix(&bell(1)).unwrap());
        let ev = pt.eigenvalues();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        let rho = density_matrix(&bell(2)).unwrap();
        assert_eq!(partial_transpose(&partial_transpose(&rho)), rho);
    }

    #[test]
    fn product_state_stays_positive() {
        let cut = FockCutoff::with_n_max(3);
        let a = make_basis_state(1, 2, cut)
            .unwrap()
            .add(&make_basis_state(2, 2, cut).unwrap())
            .unwrap();
        let (a, _) = normalize(&a).unwrap();
        let pt = partial_transpose(&density_matrix(&a).unwrap());
        assert!(pt.eigenvalues()[0] > -1e-12);
        assert!((pt.trace().re - 1.0).abs() < 1e-14);
        assert_eq!(
            log_negativity(&a, NegativityMethod::Both)
                .unwrap()
                .log_negativity,
            0.0
        );
    }

    #[test]
    fn negativity_examples() {
        let vac = make_basis_state(0, 0, FockCutoff::with_n_max(3)).unwrap();
        assert_eq!(
            log_negativity(&vac, NegativityMethod::Both)
                .unwrap()
                .log_negativity,
            0.0
        );

        let r = log_negativity(&bell(2), NegativityMethod::Both).unwrap();
        assert!((r.log_negativity - 1.0).abs() < 1e-12);
        assert!((r.negativity - 0.5).abs() < 1e-12);

        // r = 0.3 at n_max = 12: tail 0.29^13 is far below the agreement bound
        let st = make_tmsv(
            SqueezeParams::new(0.3, 0.0).unwrap(),
            FockCutoff::new(12, 1e-6).unwrap(),
        )
        .unwrap();
        let fast = log_negativity(&st, NegativityMethod::Schmidt).unwrap();
        let slow = log_negativity(&st, NegativityMethod::Eigensolve).unwrap();
        assert!((fast.log_negativity - slow.log_negativity).abs() < 1e-8);
        assert!((fast.log_negativity - 0.6 / std::f64::consts::LN_2).abs() < 1e-6);
    }
}
