//! Zak transforms of Hermite windows and frame diagnostics for
//! integer-oversampled Gabor systems over periodic point configurations.

pub mod config;
pub mod error;
pub mod frame;
pub mod par;
mod quad;
pub mod series;
pub mod windows;
pub mod zak;
pub mod zeros;

pub use config::{Lattice, PeriodicConfig};
pub use error::{Error, Result};
pub use frame::{FrameDiagnostic, Verdict};
pub use windows::HermiteWindow;
pub use zak::{PlanePoint, ZakValue, DEFAULT_TOL};
pub use zeros::{ZeroKind, ZeroWitness};
