//! Exact computation of abelian JSJ decompositions of vGBS groups.
//!
//! A vGBS group is the fundamental group of a finite graph of groups whose
//! vertex and edge groups are finitely generated free abelian, of variable
//! ranks. This crate models such graphs, decides universal ellipticity of
//! candidate edges (1-1 loops and 2-2 edges), and assembles the JSJ
//! decomposition by local moves: reductions, collapses and expansions. All
//! arithmetic is exact, over unbounded integers.
//!
//! The layers, bottom up:
//!
//! * [`matrix`], [`snf`], [`lattice`] — the integer-lattice kernel: Hermite
//!   and Smith forms, indices, saturations, kernels, invariant closures.
//! * [`graph`] — the graph-of-groups data model, validation, edge types,
//!   moduli and the abelianization oracle.
//! * [`normal_forms`] — classification of the polycyclic building blocks
//!   `Z^n x| Z` and of Klein-bottle amalgams, with verified witnesses.
//! * [`moves`] — the elementary moves: reduce, collapse, expand.
//! * [`jsj`] — the per-edge decision procedures and the pipeline.
//! * [`io`] — the `vgbs-v1` JSON format, DOT export, report serialization.
//! * [`gen`] — seeded random instances for the property suites.

pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod jsj;
pub mod lattice;
pub mod matrix;
pub mod moves;
pub mod normal_forms;
pub mod snf;

pub use error::Error;
// pub use graph::{AbelianInvariants, Edge, EdgeId, GraphOfGroups, VertexGroup, VertexId};
pub use lattice::{Index, Sublattice};
pub use matrix::{IntMatrix, UnimodularAuto};
