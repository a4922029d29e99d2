pub mod elementary;
pub mod error;
pub mod cli;
pub mod darboux;
pub mod dirac_core;
pub mod potentials;
pub mod quadrature;
pub mod verify;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::Cx;
