//! Independent references the fast mode integrator is validated against.
//!
//! * [`gamma`] — gamma function of a complex argument.
//! * [`pcf`] — parabolic cylinder functions `D_m(z)` of complex order and
//!   argument.
//! * [`lz`] — the exact Landau-Zener solution of one ramped mode, built from
//!   parabolic cylinder functions.
//! * [`ed`] — dense exact diagonalization and time evolution of small spin
//!   chains.

pub mod gamma;
pub mod pcf;

pub use gamma::{gamma, recip_gamma};
pub use pcf::{pcf_d, pcf_d_with_derivative};
