pub mod error;
pub mod action;
pub mod adapted;
pub mod braided;
pub mod cartan;
pub mod classical;
pub mod freealg;
pub mod gstar;
pub mod linalg;
pub mod ncpoly;
pub mod report;
pub mod scalar;

pub use error::{QmaError, Result};
