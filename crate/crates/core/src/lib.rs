pub mod cli;
pub mod derivcalc;
pub mod error;
pub mod models;
pub mod par;
pub mod polyalg;
pub mod prover;
pub mod ratfun;

pub use error::{Error, Result};
