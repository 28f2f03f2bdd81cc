//! Certification toolkit for multiplicatively topical maps.
//!
//! Maps are written in a small s-expression language ([`expr`]) whose
//! entries are positive combinations of weighted power means. From a map the
//! crate derives monotone Boolean signatures ([`signature`]), decides the
//! irreducibility-type conditions through SAT encodings, graph algorithms or
//! exhaustive search ([`checks`], [`sat`]), and computes and certifies
//! positive eigenvectors ([`spectral`]).

pub mod boolfn;
pub mod checks;
pub mod cli;
pub mod expr;
pub mod gen;
pub mod sat;
pub mod signature;
pub mod spectral;
