//! Exact combinatorics for tropical moduli spaces.
//!
//! The crate computes the cell posets of the moduli space of tropical curves
//! `M_g^tr` and of the tropical Schottky locus `A_g^cogr` for small genus,
//! evaluates the tropical Torelli map, computes Delone subdivisions of small
//! quadratic forms, and builds the matroid-glued covers `FP^3 -> A_2^tr` and
//! `FP^6 -> A_3^tr`.
//!
//! All arithmetic is exact: integer matrices use `i64`/`i128`, quadratic forms
//! use arbitrary-precision rationals.

#![allow(clippy::needless_range_loop)]

pub mod cover;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod moduli;
pub mod quadform;
pub mod torelli;
pub mod trivalent;

pub use cover::{build_cover_a2, build_cover_a3, build_fp, modp_ray_classes, CoverMap, FpFan};
pub use error::{Error, Result};
pub use graph::{CanonicalCert, WeightedGraph};
pub use linalg::IntMatrix;
pub use matroid::{BinaryMatroid, Matroid, TuMatrix, ZonotopalCone};
pub use moduli::{build_moduli_poset, Cell, CellPoset};
pub use quadform::{DelonePeriod, G2Class, G2Reduction, QuadForm, Rational};
pub use torelli::{build_schottky_poset, MetricCurve, SchottkyPoset};
pub use trivalent::enumerate_trivalent;
