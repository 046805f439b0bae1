//! Quadrature wavefunctions, vortex winding, and two-mode Wigner slices.
//!
//! Conventions: `a = (x + i p) / sqrt(2)` for wavefunctions, so the vacuum is
//! `pi^{-1/4} e^{-x^2/2}` per mode. Wigner functions are labelled by coherent
//! amplitudes `alpha = x - i p_x`, `beta = y - i p_y` and normalized so that
//! `W = (4/pi^2) <D Pi D^dag>`; the two-mode vacuum peaks at `4/pi^2`.

mod closed_form;
mod grid;
mod hermite;
mod quadrature;
mod transport;
mod wigner;

pub use closed_form::{assoc_laguerre, laguerre, wigner_bs_closed_form, wigner_ps_closed_form};
pub use grid::{Axis, AxisRange, Grid2D, PhasePoint, SliceSpec};
pub use hermite::hermite_functions;
pub use quadrature::{quadrature_wavefunction, winding_number, QuadratureField, AMPLITUDE_FLOOR};
pub use transport::{backpropagate, transport_wigner};
pub use wigner::{displacement_matrix, wigner_at, wigner_slice, WignerMethod, WignerSlice};

/// `4 / pi^2`, the largest magnitude a two-mode Wigner function can reach.
pub const WIGNER_BOUND: f64 = 4.0 / (std::f64::consts::PI * std::f64::consts::PI);
