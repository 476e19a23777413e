//! Entanglement entropy of bipartite pure continuous-variable states.
//!
//! * [`gaussian`] reduces normally ordered two-mode Gaussian states and
//!   evaluates their entropy and separability in closed form.
//! * [`circuits`] builds those states from a beam splitter acting on two
//!   squeezed vacua.
//! * [`nongauss`] handles Fock states sent through a beam splitter.
//! * [`fock_oracle`] is an independent truncated-Fock-space simulator used
//!   to validate all of the above.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod fock_oracle;
pub mod gaussian;
pub mod matcore;
pub mod nongauss;
pub mod verify;

pub use error::{CveError, Result};
