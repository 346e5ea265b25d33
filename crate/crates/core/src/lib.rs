//! Exact Reidemeister and Nielsen coincidence numbers of iterated endomorphism
//! pairs of torsion-free nilpotent groups, together with their zeta functions,
//! Gauss congruences, growth rates and asymptotic behaviour.
//!
//! A group is described by the matrices its endomorphisms induce on the
//! abelian sections of the isolated lower central series (see
//! [`group::NilpotentSystem`]). Everything downstream is exact: sequences are
//! big integers, zeta functions are integer rational functions, and the only
//! floating point appears in certified root enclosures and in reporting.

pub mod asymptotics;
pub mod congruence;
pub mod error;
pub mod group;
pub mod growth;
pub mod linalg;
pub mod numtheory;
pub mod padic;
pub mod poly;
pub mod reidemeister;
pub mod roots;
pub mod spectrum;
pub mod zeta;

pub use error::{Error, Result};
