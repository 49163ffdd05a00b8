//! Exact enumeration of reflection factorizations in the complex reflection
//! groups G(r,s,n), together with closed-form comparisons against the
//! symmetric group and recovery of the polynomial structure of connected
//! factorization counts.

pub mod closed_forms;
pub mod combinatorics;
pub mod counting;
pub mod dsu;
pub mod error;
pub mod graph;
pub mod poly;
pub mod polynomiality;
pub mod group;
pub mod series;
pub mod table;

pub use error::{Error, Result};
pub use graph::{DecoratedGraph, Walk};
pub use group::{reflections, CycleType, ElementPartition, GroupElement, GroupParams, Reflection};
