//! Exact computations with locally unital graded algebras presented by graded
//! triangular bases: standard modules, multiplicities, Hom and Ext¹, flags and
//! BGG reciprocity, all certified on explicit degree windows.

#![allow(clippy::needless_range_loop)]

pub mod algcore;
pub mod algebra;
pub mod cartanrep;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod flags;
pub mod glinalg;
pub mod gta;
pub mod modfun;
pub mod module;
pub mod poset;
pub mod qseries;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use qseries::{Direction, QSeries};
pub use scalar::{Field, Scalar};
