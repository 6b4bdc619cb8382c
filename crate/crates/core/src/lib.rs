//! Exact ruler constructions on plane cubic curves.
//!
//! Three pairs of points in general position determine a cubic; combining
//! pairs with `S = PQ ^ P'Q'`, `S' = PQ' ^ P'Q` produces further pairs on the
//! same cubic. Everything is computed over the rationals with no rounding.

pub mod cubic;
pub mod engine;
pub mod error;
pub mod involution;
pub mod plot;
pub mod io;
pub mod projective;
pub mod theorems;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, ErrorKind, Result};
pub use projective::{ProjLine, ProjPoint, Rat};
