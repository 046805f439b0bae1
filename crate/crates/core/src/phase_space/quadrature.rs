use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::grid::{Axis, Grid2D};
use super::hermite::hermite_functions;
use crate::error::{Error, Result};
use crate::fock::TwoModeState;

/// Smallest `|Psi|` accepted on a winding contour.
pub const AMPLITUDE_FLOOR: f64 = 1e-8;

/// Samples of `Psi(x, y)`; rows follow `x`, columns follow `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureField {
    pub grid: Grid2D,
    pub values: DMatrix<Complex64>,
}

impl QuadratureField {
    /// `|Psi|^2` on the grid.
    pub fn intensity(&self) -> DMatrix<f64> {
        self.values.map(|c| c.norm_sqr())
    }

    /// `arg Psi` in `(-pi, pi]`.
    pub fn phase(&self) -> DMatrix<f64> {
        self.values.map(|c| {
            let a = c.arg();
            if a <= -PI {
                a + 2.0 * PI
            } else {
                a
            }
        })
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn sample(&self, x: f64, y: f64) -> Option<Complex64> {
        let (gu, gv) = (self.grid.u, self.grid.v);
        let fu = (x - gu.min) / gu.step();
        let fv = (y - gv.min) / gv.step();
        if !(fu >= 0.0 && fv >= 0.0 && fu <= (gu.count - 1) as f64 && fv <= (gv.count - 1) as f64) {
            return None;
        }
        let i = (fu.floor() as usize).min(gu.count - 2);
        let j = (fv.floor() as usize).min(gv.count - 2);
        let (tu, tv) = (fu - i as f64, fv - j as f64);
        let v = &self.values;
        Some(
            v[(i, j)] * ((1.0 - tu) * (1.0 - tv))
                + v[(i + 1, j)] * (tu * (1.0 - tv))
                + v[(i, j + 1)] * ((1.0 - tu) * tv)
                + v[(i + 1, j + 1)] * (tu * tv),
        )
    }
}

/// `Psi(x, y) = sum c(m, n) phi_m(x) phi_n(y)` with Hermite functions `phi`.
pub fn quadrature_wavefunction(state: &TwoModeState, grid: &Grid2D) -> Result<QuadratureField> {
    if grid.labels != (Axis::X, Axis::Y) {
        return Err(Error::invalid(format!(
            "quadrature grids run over (x, y), got ({}, {})",
            grid.labels.0, grid.labels.1
        )));
    }
    let n = state.n_max();
    let table = |xs: Vec<f64>| {
        let cols: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_functions(n, x)).collect();
        DMatrix::from_fn(xs.len(), n + 1, |i, m| Complex64::new(cols[i][m], 0.0))
    };
    let phi_x = table(grid.u.values());
    let phi_y = table(grid.v.values());
    let values = &phi_x * state.amplitudes() * phi_y.transpose();
    Ok(QuadratureField {
        grid: *grid,
        values,
    })
}

/// Net number of counterclockwise `2 pi` phase turns of `Psi` around the
/// origin-centred circle of the given radius. `(x - i y)` winds `-1`.
pub fn winding_number(field: &QuadratureField, radius: f64) -> Result<i32> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::invalid(format!(
            "winding radius must be > 0, got {radius}"
        )));
    }
    let step = field.grid.u.step().min(field.grid.v.step());
    // enough samples that neighbours are closer than a grid cell
    let samples = ((2.0 * PI * radius / step).ceil() as usize * 4).max(64);
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for i in 0..=samples {
        let theta = 2.0 * PI * (i % samples) as f64 / samples as f64;
        let (x, y) = (radius * theta.cos(), radius * theta.sin());
        let value = field
            .sample(x, y)
            .ok_or_else(|| Error::invalid(format!("contour of radius {radius} leaves the grid")))?;
        if value.norm() < AMPLITUDE_FLOOR {
            return Err(Error::AmplitudeTooSmall {
                radius,
                amplitude: value.norm(),
            });
        }
        let arg = value.arg();
        if let Some(p) = prev {
            let mut d = arg - p;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        prev = Some(arg);
    }
    Ok((total / (2.0 * PI)).round() as i32)
}
