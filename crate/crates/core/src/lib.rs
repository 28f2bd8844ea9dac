//! Association schemes and orthogonality graphs on the anisotropic points of
//! finite classical polar spaces, built by enumeration and checked in exact
//! arithmetic against closed-form eigenmatrices.

pub mod exactla;
pub mod extremal;
pub mod formulas;
pub mod geometry;
pub mod gf;
pub mod orthograph;
pub mod regression;
pub mod scheme;
