//! Special functions: Bessel `J0`/`J1` and the zeros of `J0`, Gamma, and the
//! two-parameter Mittag-Leffler function on the non-positive real axis.

mod bessel;
mod gamma;
mod mittag_leffler;

pub use bessel::{bessel_j0, bessel_j1, j0_roots, RootTable};
pub use gamma::{gamma_fn, ln_gamma, recip_gamma};
pub use mittag_leffler::mittag_leffler;

pub(crate) use bessel::{j0, j1};
