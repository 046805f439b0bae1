use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{Grid2D, PhasePoint, SliceSpec};
use super::wigner::{WignerMethod, WignerSlice};
use crate::error::Result;
use crate::evolution::WaveguideParams;

/// Inverse of the coupler flow on coherent amplitudes. The evolved state at
/// `(alpha, beta)` looks like the initial one at
/// `(c alpha - i s beta, c beta - i s alpha)`.
pub fn backpropagate(point: PhasePoint, wg: WaveguideParams) -> PhasePoint {
    let (c, s) = wg.cos_sin();
    let is = Complex64::new(0.0, s);
    let (alpha, beta) = (point.alpha(), point.beta());
    PhasePoint::from_coherent(alpha * c - is * beta, beta * c - is * alpha)
}

/// Wigner function after propagation, by composing the initial Wigner
/// function with the inverse classical flow. The coupler Hamiltonian is
/// quadratic, so this is exact.
pub fn transport_wigner<F>(
    initial: F,
    wg: WaveguideParams,
    spec: &SliceSpec,
    grid: &Grid2D,
) -> Result<WignerSlice>
where
    F: Fn(PhasePoint) -> f64 + Sync,
{
    spec.validate()?;
    spec.check_grid(grid)?;
    let us = grid.u.values();
    let vs = grid.v.values();
    let rows: Vec<Vec<f64>> = us
        .par_iter()
        .map(|&u| {
            vs.iter()
                .map(|&v| initial(backpropagate(spec.point(u, v), wg)))
                .collect()
        })
        .collect();
    let values = DMatrix::from_fn(us.len(), vs.len(), |i, j| rows[i][j]);
    Ok(WignerSlice {
        slice: *spec,
        grid: *grid,
        values,
        method: WignerMethod::Transport,
        imag_residue: 0.0,
    })
}
