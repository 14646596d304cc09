//! Polarization of monomial ideals and Koszul cycles, multigraded Koszul
//! homology over GF(p), and depth certificates for powers of edge ideals
//! of whisker graphs.

pub mod certificate;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod field;
pub mod graph;
pub mod koszul;
pub mod monomial;
pub mod polar;

pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{PrimeField, DEFAULT_PRIME};
pub use graph::SimpleGraph;
pub use koszul::{CoefficientModule, IndexSet, KoszulElement};
pub use monomial::{Monomial, MonomialIdeal, VariableSpace};
