//! Two-mode bosonic Fock-space simulation of quantum optical vortex states
//! propagating through a pair of coupled lossless waveguides.
//!
//! The crate covers four layers:
//!
//! - [`fock`]: truncated two-mode states, ladder operators, Schmidt spectra.
//! - [`factory`]: squeezed vacuum, photon-subtracted and beam-splitter vortices.
//! - [`evolution`]: the waveguide coupling, both as a generic unitary and as
//!   closed-form coefficient series.
//! - [`phase_space`] and [`entanglement`]: quadrature fields, Wigner slices,
//!   logarithmic negativity and propagation sweeps.

pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod factory;
pub mod fock;
pub mod phase_space;

pub use entanglement::{
    density_matrix, log_negativity, negativity_sweep, partial_transpose, DensityMatrix, Family,
    NegativityMethod, NegativityResult, SweepOptions, SweepPath, SweepSeries,
};
pub use error::{Error, Result};
pub use evolution::{evolve_state, evolved_bs_vortex, evolved_ps_vortex, WaveguideParams};
pub use factory::{make_bs_vortex, make_ps_vortex, make_tmsv, BsVortexParams, SqueezeParams};
pub use fock::{
    apply_ladder, make_basis_state, normalize, schmidt_coefficients, CutoffPolicy, FockCutoff,
    Ladder, Mode, ProductExpansion, SchmidtSpectrum, TwoModeState, DEFAULT_TAIL_TOLERANCE,
    ZERO_THRESHOLD,
};
