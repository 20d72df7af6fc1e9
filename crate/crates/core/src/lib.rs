//! Exact arithmetic for deciding when a representation of `SL_2(p^r)` over `F_p` lifts to
//! `Z/p^sZ`.
//!
//! The pieces, bottom up:
//!
//! * [`field`]: `Z/p^sZ` and `F_{p^r}` arithmetic.
//! * [`matrix`], [`linsys`]: dense matrices over `Z/p^sZ` and sparse affine systems over `F_p`.
//! * [`sl2`]: the modules `V_n(p^r)`, their duals and Frobenius twists, as generator images.
//! * [`group`], [`rep`]: image groups with Cayley tables, and per-element images at a level.
//! * [`lift`]: the obstruction/coboundary decision and the coset-condition engine.
//! * [`classify`], [`io`], [`cli`]: the classification table, file formats and the command line.

pub mod classify;
pub mod cli;
pub mod error;
pub mod field;
pub mod group;
pub mod io;
pub mod lift;
pub mod linsys;
pub mod matrix;
pub mod pascal;
pub mod rep;
pub mod sl2;

pub use error::{Error, Result};
