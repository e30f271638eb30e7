//! Numerical toolkit for Gabor systems at critical density: Zak transforms,
//! frame and Zak-symbol diagnostics, the Gram symbol of the integer Gaussian
//! system, and an explicit reproducing partner for it.

pub mod error;
pub mod gabor;
pub mod numeric_core;
pub mod partner;
pub mod quad;
pub mod report;
pub mod theta_kernel;
pub mod verify;
pub mod windows;
pub mod zak;

pub use error::{Error, Result};
pub use num_complex::Complex64;
