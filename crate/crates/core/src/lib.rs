//! Nonlinear Jaynes-Cummings dynamics of a trapped ion driven slightly off
//! the k-th vibronic sideband.
//!
//! The crate contains three solvers that share the special functions and
//! coupling coefficients in [`fock_core`]:
//!
//! * [`semiclassical`]: classical pump, explicitly time-dependent
//!   interaction. Time-ordered evolution is integrated numerically and
//!   compared against the closed form obtained by dropping time ordering.
//! * [`quantized_pump`]: the pump mode is quantized, the Hamiltonian becomes
//!   time independent and is solved exactly through dressed states.
//! * [`quasiprob`]: regularized Glauber-Sudarshan P functions of motional
//!   density matrices, used to follow the emergence of nonclassicality.
//!
//! [`cli_io`] wires everything into reproducible runs driven by flat
//! `key=value` configuration files.

pub mod cli_io;
pub mod error;
pub mod fock_core;
pub mod quantized_pump;
pub mod quasiprob;
pub mod semiclassical;
pub(crate) mod sum;

pub use error::{Error, Result};
pub use fock_core::{ModelParams, TruncationPolicy};

pub type C64 = num_complex::Complex64;
