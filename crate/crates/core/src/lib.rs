//! Finite-ball models of groups acting on metric spaces.
//!
//! The crate builds radius-`R` balls of Cayley graphs, relative Cayley
//! graphs, induced-action spaces and combinatorial horoballs for concrete
//! groups with solvable word problem, and measures distortion,
//! incompressibility, hyperbolicity and quasi-isometry constants on them.
//! Every reported distance carries a certification flag: values inside the
//! certified region are exact, everything else is an upper bound.

pub mod action;
pub mod analysis;
pub mod dist;
pub mod error;
pub mod graph;
pub mod horoball;
pub mod hyperbolicity;
pub mod induced;
pub mod group;
pub mod metric;
pub mod relative;
pub mod scenario;

pub use dist::{ExtDist, Measured};
pub use error::{Error, Result};
pub use group::{Ball, Element, Group, SubgroupEmbedding, Transversal};
