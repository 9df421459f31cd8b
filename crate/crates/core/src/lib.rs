//! Numerical toolkit for the PT-symmetric oscillator family
//! `H = p^2 + x^{2M} (ix)^epsilon`.
//!
//! The crate computes energy spectra (first- and second-order WKB plus an
//! independent shooting-method oracle), derives canonical thermodynamics
//! (`Z`, `F`, `S`, `U`, `C`) from any spectrum source, and evaluates the
//! classical partition function along complex rays, including the
//! wrong-sign-quartic equivalence chain through the Hermitian form
//! `h(x,p) = p^4/(4a) - p/2 + a x^2`.

pub mod acceptance;
pub mod classical;
pub mod error;
pub mod ode;
pub mod oscillator;
pub mod quad;
pub mod shoot;
pub mod special;
pub mod spectrum;
pub mod thermo;

pub use error::{Error, Result};
pub use oscillator::OscillatorParams;
pub use spectrum::{EnergyLevel, Method, TurningPoints};
