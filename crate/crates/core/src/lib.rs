//! Khovanov-type link homology over rank-2 Frobenius algebras, with the
//! enhanced-state poset decomposition for diagonal algebras.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod canonical;
pub mod cli;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod poset;
pub mod ring;
pub mod smith;
pub mod unionfind;

pub use algebra::{AlgebraSpec, FrobeniusAlgebra, ValidationReport};
pub use diagram::{Coloring, KauffmanState, LinkDiagram, Orientation};
pub use error::{Error, Result};
pub use ring::{Coeff, RingSpec};
