//! Canonical variations `g_t = g + t ω⊗ω` of semi-Riemannian metrics along
//! unit vector fields.
//!
//! The crate evaluates metrics, connections and curvature with exact
//! derivatives (second-order jets), builds varied metrics, checks a registry
//! of curvature identities relating `g` and `g_t` on a catalog of example
//! manifolds, integrates geodesics and analyses lightlike hypersurfaces.

#![allow(
    clippy::needless_range_loop,
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord
)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod expr;
pub mod geodesics;
pub mod geometry;
pub mod identities;
pub mod jet;
pub mod mp;
pub mod nullsurf;
pub mod report;
pub mod sampling;
pub mod variation;

pub use error::{Error, Result};
