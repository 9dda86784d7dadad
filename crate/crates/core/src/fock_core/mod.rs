//! Shared machinery: special functions, the sideband coupling coefficients
//! of the nonlinear Jaynes-Cummings model, coherent states and Fock-space
//! truncation.

mod coherent;
mod coupling;
mod params;
pub mod special;

pub use coherent::{
    coherent_vector, poisson_window, suggest_truncation, ComplexAmplitudeVector, PoissonWindow,
};
pub use coupling::{coupling_f, rabi_frequency, sideband_element};
pub use params::{ModelParams, TruncationPolicy, DEFAULT_TAIL_EPSILON};
pub use special::{bessel_j, laguerre};
