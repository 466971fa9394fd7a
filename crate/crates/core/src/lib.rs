//! Core library: Novikov-field arithmetic, plane-curve area geometry, disk
//! potentials, graded 𝕂[u]-module homological algebra, Hochschild checks and
//! the Lagrangian object catalog.

pub mod catalog;
pub mod curves;
pub mod hochschild;
pub mod kumod;
pub mod linalg;
pub mod novikov;
pub mod poly;
pub mod potentials;
pub mod selftest;

pub use catalog::{EndAlgebraTable, LagrangianObject, YonedaImage};
pub use curves::{PlaneCurve, SigmaDensity};
pub use kumod::{GradedKuModule, JordanDecomposition};
pub use novikov::{Exp, NovikovNum};
pub use potentials::{LaurentPoly, LocalSystem};
