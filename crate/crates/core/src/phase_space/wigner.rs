use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Grid2D, PhasePoint, SliceSpec};
use super::WIGNER_BOUND;
use crate::error::Result;
use crate::fock::TwoModeState;

/// How a [`WignerSlice`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerMethod {
    DisplacedParity,
    ClosedForm,
    Transport,
}

/// Real Wigner samples on a 2D slice; rows follow `grid.u`, columns `grid.v`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSlice {
    pub slice: SliceSpec,
    pub grid: Grid2D,
    pub values: DMatrix<f64>,
    pub method: WignerMethod,
    /// Largest imaginary part discarded when taking the real value.
    pub imag_residue: f64,
}

impl WignerSlice {
    pub fn min(&self) -> f64 {
        self.values.min()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// True when every sample lies within `+-4/pi^2` (plus `slack`).
    pub fn within_bound(&self, slack: f64) -> bool {
        self.values.iter().all(|w| w.abs() <= WIGNER_BOUND + slack)
    }
}

/// `<m|D(gamma)|n>` for `0 <= m, n < dim`, from
/// `sqrt(n!/m!) gamma^{m-n} e^{-|gamma|^2/2} L_n^{(m-n)}(|gamma|^2)` (for `m >= n`)
/// with the Laguerre polynomials run forward in `n` and rescaled in log space.
/// The upper triangle follows from `<m|D|n> = (-1)^{m+n} conj(<n|D|m>)`.
pub fn displacement_matrix(gamma: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut d = DMatrix::zeros(dim, dim);
    let x = gamma.norm_sqr();
    let log_abs = gamma.norm().ln();
    let unit = if gamma.norm() > 0.0 {
        gamma / gamma.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // ln n! table
    let mut log_fact = vec![0.0; dim + 1];
    for i in 1..=dim {
        log_fact[i] = log_fact[i - 1] + (i as f64).ln();
    }
    for a in 0..dim {
        if a > 0 && x == 0.0 {
            break;
        }
        let phase = unit.powu(a as u32);
        let af = a as f64;
        let mut scale = 0.0f64; // natural log of the factor removed from (l0, l1)
        let (mut l0, mut l1) = (1.0f64, 1.0 + af - x);
        for n in 0..dim - a {
            let lag = if n == 0 { l0 } else { l1 };
            let log_pre = 0.5 * (log_fact[n] - log_fact[n + a]) - x / 2.0
                + scale
                + if a > 0 { af * log_abs } else { 0.0 };
            let value = phase * (log_pre.exp() * lag);
            d[(n + a, n)] = value;
            if a > 0 {
                let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                d[(n, n + a)] = value.conj() * sign;
            }
            if n >= 1 {
                let k = n as f64;
                let next = ((2.0 * k + 1.0 + af - x) * l1 - (k + af) * l0) / (k + 1.0);
                l0 = l1;
                l1 = next;
            }
            let big = l0.abs().max(l1.abs());
            if big > 1e150 {
                l0 /= big;
                l1 /= big;
                scale += big.ln();
            }
        }
    }
    d
}

/// `D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi` restricted to `0..dim`.
fn displaced_parity(alpha: Complex64, dim: usize) -> DMatrix<Complex64> {
    let mut m = displacement_matrix(alpha * 2.0, dim);
    for q in (1..dim).step_by(2) {
        m.column_mut(q).neg_mut();
    }
    m
}

fn frobenius_dot(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

fn transposed_dot(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> Complex64 {
    // sum_ij x_ij y_ji
    frobenius_dot(x, &y.transpose())
}

/// Complex value before discarding the imaginary residue.
fn wigner_raw(c: &DMatrix<Complex64>, alpha: Complex64, beta: Complex64) -> Complex64 {
    let dim = c.nrows();
    let ma = displaced_parity(alpha, dim);
    let mb = displaced_parity(beta, dim);
    let x = c.adjoint() * ma * c;
    frobenius_dot(&x, &mb) * WIGNER_BOUND
}

/// `W(x, p_x, y, p_y) = (4/pi^2) <psi| D_A Pi_A D_A^dag (x) D_B Pi_B D_B^dag |psi>`
/// with `alpha = x - i p_x`, `beta = y - i p_y`.
pub fn wigner_at(state: &TwoModeState, point: PhasePoint) -> f64 {
    wigner_raw(state.amplitudes(), point.alpha(), point.beta()).re
}

/// Displaced-parity Wigner function on a slice. Displaced parity operators
/// are evaluated from exact matrix elements in the state's own basis, so no
/// enlarged working space is needed. Per-axis factors are cached.
pub fn wigner_slice(state: &TwoModeState, spec: &SliceSpec, grid: &Grid2D) -> Result<WignerSlice> {
    spec.validate()?;
    spec.check_grid(grid)?;
    let c = state.amplitudes();
    let dim = c.nrows();
    let us = grid.u.values();
    let vs = grid.v.values();
    let (u_is_a, v_is_a) = (spec.varying.0.is_mode_a(), spec.varying.1.is_mode_a());

    let raw: Vec<Vec<Complex64>> = match (u_is_a, v_is_a) {
        (true, false) | (false, true) => {
            // alpha follows one axis, beta the other
            let a_vals: &[f64] = if u_is_a { &us } else { &vs };
            let b_vals: &[f64] = if u_is_a { &vs } else { &us };
            let point = |ia: usize, ib: usize| {
                if u_is_a {
                    spec.point(a_vals[ia], b_vals[ib])
                } else {
                    spec.point(b_vals[ib], a_vals[ia])
                }
            };
            let xs: Vec<DMatrix<Complex64>> = (0..a_vals.len())
                .into_par_iter()
                .map(|ia| c.adjoint() * displaced_parity(point(ia, 0).alpha(), dim) * c)
                .collect();
            let mbs: Vec<DMatrix<Complex64>> = (0..b_vals.len())
                .into_par_iter()
                .map(|ib| displaced_parity(point(0, ib).beta(), dim))
                .collect();
            (0..us.len())
                .into_par_iter()
                .map(|i| {
                    (0..vs.len())
                        .map(|j| {
                            let (ia, ib) = if u_is_a { (i, j) } else { (j, i) };
                            frobenius_dot(&xs[ia], &mbs[ib]) * WIGNER_BOUND
                        })
                        .collect()
                })
                .collect()
        }
        (true, true) => {
            let beta = spec.point(us[0], vs[0]).beta();
            let y = c * displaced_parity(beta, dim).transpose() * c.adjoint();
            (0..us.len())
                .into_par_iter()
                .map(|i| {
                    (0..vs.len())
                        .map(|j| {
                            let ma = displaced_parity(spec.point(us[i], vs[j]).alpha(), dim);
                            transposed_dot(&ma, &y) * WIGNER_BOUND
                        })
                        .collect()
                })
                .collect()
        }
        (false, false) => {
            let alpha = spec.point(us[0], vs[0]).alpha();
            let x = c.adjoint() * displaced_parity(alpha, dim) * c;
            (0..us.len())
                .into_par_iter()
                .map(|i| {
                    (0..vs.len())
                        .map(|j| {
                            let mb = displaced_parity(spec.point(us[i], vs[j]).beta(), dim);
                            frobenius_dot(&x, &mb) * WIGNER_BOUND
                        })
                        .collect()
                })
                .collect()
        }
    };

    let imag_residue = raw.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max);
    let values = DMatrix::from_fn(us.len(), vs.len(), |i, j| raw[i][j].re);
    Ok(WignerSlice {
        slice: *spec,
        grid: *grid,
        values,
        method: WignerMethod::DisplacedParity,
        imag_residue,
    })
}
