//! Special functions: complex Gamma, Bessel kernels with regime switching,
//! and Mellin windows.

pub mod bessel;
pub mod gamma;
pub mod mellin;

pub use bessel::{
    bessel_j, bessel_j_imag, bessel_j_real_order, bessel_k0, bessel_k1, bessel_k_imag, bessel_y0,
    hankel0, BesselEvaluator, BesselKind,
};
pub use gamma::{gamma, gamma_real, ln_gamma};
pub use mellin::{mellin_window, MellinWindow};
