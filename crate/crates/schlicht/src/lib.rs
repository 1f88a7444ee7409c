//! Truncated power-series toolkit for coefficient problems on univalent
//! functions: conformal map catalogs, coefficient functionals, quasiconformal
//! extension metrics, and a verification harness that scans parametric
//! families for inequality violations.

pub mod error;
pub mod num;
pub mod series;
mod bivariate;
pub mod maps;
pub mod catalog;
pub mod functional;
pub mod grunsky;
pub mod loewner;
pub mod par;
pub mod report;
pub mod scan;
pub mod schwarzian;

pub use error::{Error, Result};
