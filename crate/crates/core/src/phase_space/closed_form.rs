use num_complex::Complex64;
use std::f64::consts::PI;

use super::grid::PhasePoint;
use super::WIGNER_BOUND;
use crate::error::Result;
use crate::factory::{BsVortexParams, SqueezeParams};

/// Laguerre polynomial `L_n(z)`.
pub fn laguerre(n: usize, z: f64) -> f64 {
    assoc_laguerre(n, 0.0, z)
}

/// Associated Laguerre polynomial `L_n^{(a)}(z)` by the three-term recurrence.
pub fn assoc_laguerre(n: usize, a: f64, z: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 + a - z);
    if n == 0 {
        return l0;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - z) * l1 - (k + a) * l0) / (k + 1.0);
        l0 = l1;
        l1 = next;
    }
    l1
}

/// Coordinates `(alpha~, beta~)` in which the photon-subtracted vortex looks
/// like `|k> (x) |0>`: `alpha~ = alpha cosh r - beta* e^{i phi} sinh r`,
/// `beta~ = beta cosh r - alpha* e^{i phi} sinh r`. Both carry the same
/// phase because the squeeze is symmetric in the two modes.
pub(crate) fn ps_transformed(params: &SqueezeParams, point: PhasePoint) -> (Complex64, Complex64) {
    let (alpha, beta) = (point.alpha(), point.beta());
    let (ch, sh) = (params.r.cosh(), params.r.sinh());
    let e = Complex64::from_polar(1.0, params.phi);
    (
        alpha * ch - beta.conj() * e * sh,
        beta * ch - alpha.conj() * e * sh,
    )
}

/// `(4/pi^2) (-1)^k L_k(4|alpha~|^2) exp(-2(|alpha~|^2 + |beta~|^2))`.
pub fn wigner_ps_closed_form(
    params: SqueezeParams,
    k: u32,
    points: &[PhasePoint],
) -> Result<Vec<f64>> {
    params.validate()?;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(points
        .iter()
        .map(|&p| {
            let (a, b) = ps_transformed(&params, p);
            let (na, nb) = (a.norm_sqr(), b.norm_sqr());
            WIGNER_BOUND * sign * laguerre(k as usize, 4.0 * na) * (-2.0 * (na + nb)).exp()
        })
        .collect())
}

fn gamma_half_integer(m: usize) -> f64 {
    // Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)
    (1..=m).fold(PI.sqrt(), |acc, j| acc * (j as f64 - 0.5))
}

/// The quoted beam-splitter vortex Wigner function, with order `m := k`:
/// `K exp(-(X1^2 + Y1^2 + PX1^2 + PY1^2)) L_m^{-1/2}[(PX2 + PY2 - X2 - Y2)^2 / (sx^2 + sy^2)]`,
/// `K = 2^{m-4} m! / (pi sqrt(pi) Gamma(m + 1/2)) (-2 (sx^2 + sy^2))^m`, and
/// `X1 = x/sx`, `Y1 = y/sy`, `X2 = sy x / (2 sx)`, `Y2 = sx y / (2 sy)`,
/// `PX1 = sx px / sqrt2`, `PY1 = sy py / sqrt2`, `PX2 = sy^3 px / sqrt2`, `PY2 = sx^3 py / sqrt2`.
/// Evaluated literally; its scaling differs from the Fock-space state.
pub fn wigner_bs_closed_form(params: BsVortexParams, points: &[PhasePoint]) -> Result<Vec<f64>> {
    params.validate()?;
    let m = params.k as usize;
    let (sx, sy) = (params.sigma_x(), params.sigma_y());
    let s2 = sx * sx + sy * sy;
    let fact: f64 = (1..=m).map(|i| i as f64).product();
    let k_const = 2f64.powi(m as i32 - 4) * fact / (PI * PI.sqrt() * gamma_half_integer(m))
        * (-2.0 * s2).powi(m as i32);
    let r2 = std::f64::consts::SQRT_2;
    Ok(points
        .iter()
        .map(|p| {
            let x1 = p.x / sx;
            let y1 = p.y / sy;
            let x2 = sy * p.x / (2.0 * sx);
            let y2 = sx * p.y / (2.0 * sy);
            let px1 = sx * p.px / r2;
            let py1 = sy * p.py / r2;
            let px2 = sy.powi(3) * p.px / r2;
            let py2 = sx.powi(3) * p.py / r2;
            let arg = (px2 + py2 - x2 - y2).powi(2) / s2;
            k_const
                * (-(x1 * x1 + y1 * y1 + px1 * px1 + py1 * py1)).exp()
                * assoc_laguerre(m, -0.5, arg)
        })
        .collect())
}
