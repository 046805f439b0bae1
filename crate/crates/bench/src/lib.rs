//! Fixtures shared by the benchmarks.

use vortexprop::{
    make_bs_vortex, make_ps_vortex, BsVortexParams, CutoffPolicy, SqueezeParams, TwoModeState,
};

/// Photon-subtracted vortex at the adaptive cutoff for `r`, `k`.
pub fn ps_state(r: f64, k: u32) -> TwoModeState {
    let p = SqueezeParams::new(r, std::f64::consts::FRAC_PI_2).expect("valid squeezing");
    CutoffPolicy::default()
        .build(|c| make_ps_vortex(p, k, c))
        .expect("cutoff within cap")
}

/// Beam-splitter vortex with the default ellipticity.
pub fn bs_state(r_x: f64, r_y: f64, k: u32) -> TwoModeState {
    let p = BsVortexParams::new(r_x, r_y, 1.0, 0.75, k).expect("valid parameters");
    CutoffPolicy::default()
        .build(|c| make_bs_vortex(p, c))
        .expect("cutoff within cap")
}
