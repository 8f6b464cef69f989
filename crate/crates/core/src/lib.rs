//! Wave scattering on single-band tight-binding lattices driven by
//! time-modulated, possibly non-Hermitian, perturbations.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! - [`lattice`]: hopping kernels, 1D/2D lattices, modulations, sparse
//!   perturbations and the Hamiltonian action on a state.
//! - [`dispersion`]: band energies, bandwidth, group velocities and complex
//!   Bloch wave numbers at energies outside the band.
//! - [`evolution`]: adaptive embedded Runge–Kutta integration of the lattice
//!   equations.
//! - [`scattering`]: wave-packet experiments against a free reference, the
//!   forced scattered-field problem and evanescent decay fits.
//! - [`qwalk`]: the coupled fiber-loop quantum walk and its continuous-time
//!   limit.
//! - [`spectral`]: the damped, windowed Fourier–Laplace transform, its
//!   inverse, window-kernel areas and the product/convolution relation.
//!
//! IO, configuration and the command-line front end live in the `latinvis`
//! crate.

#![no_std]

extern crate alloc;

pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod lattice;
pub mod poly;
pub mod qwalk;
pub mod scattering;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::C64;
