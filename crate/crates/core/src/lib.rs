//! Fundamental groups, gradings, Galois coverings and first Hochschild
//! cohomology of finite Schurian linear categories.

pub mod category;
pub mod cw;
pub mod error;
pub mod exactalg;
pub mod files;
pub mod grading;
pub mod hochschild;
pub mod presentation;

pub use error::{Error, Result};
