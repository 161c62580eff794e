//! Exact-arithmetic engine for Tanaka prolongations of graded nilpotent Lie
//! algebras, the quasi-gradation calculus of filtered vector spaces, and the
//! torsion spaces and ∂-maps of the prolongation tower.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod filtered;
pub mod format;
pub mod graded;
pub mod lie;
pub mod linear;
pub mod prolong;
pub mod selftest;
pub mod torsion;

pub use error::{Error, Result};
