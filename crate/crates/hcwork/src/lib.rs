//! Exact workbench for Hochschild and cyclic homology of crossed products
//! by the partial-injection monoid, at finite truncation.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod complexes;
pub mod crossed;
pub mod exactla;
pub mod forms;
pub mod pinj;
pub mod suite;
pub mod symideal;
