pub mod constitutive;
pub mod diagnostics;
pub mod discretization;
pub mod error;
pub mod exponents;
pub mod io;
pub mod pressure;
pub mod solver;
pub mod truncation;

pub use error::{Error, Result};
