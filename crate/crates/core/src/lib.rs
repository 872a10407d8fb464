//! Exact computations for additive actions on projective varieties and
//! their associated local algebras.

pub mod exactlin;
pub mod poly;
pub mod algebra;
pub mod monomial;
pub mod spair;
pub mod derivation;
pub mod hirzebruch;
pub mod presentation;
pub mod geometry;
pub mod isomorphy;
pub mod format;
pub mod acceptance;
