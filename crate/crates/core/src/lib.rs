//! Numerics for cat-state qubits encoded in a single bosonic mode, with Kerr
//! rotations, Gaussian control noise on the Kerr phase, coarse quadrature
//! readout and a two-mode entanglement witness.
//!
//! ```
//! use kerr_cat::fock::CoherentParams;
//! use kerr_cat::kerr::NoiseModel;
//! use kerr_cat::qubit::bitflip_error;
//!
//! let p = CoherentParams::from_photon_number(16.0).unwrap();
//! let eps = bitflip_error(p, NoiseModel::kerr(0.02).unwrap()).unwrap();
//! assert!(eps > 0.0 && eps < 0.5);
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod kerr;
pub mod quadrature;
pub mod qubit;
pub mod witness;

pub use error::{Error, Result};
