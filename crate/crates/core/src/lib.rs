//! Complete rigid-motion invariant of protein backbones.
//!
//! A backbone is an ordered chain of residues, each with nitrogen (N),
//! alpha-carbon (CA, written `A`) and carboxyl carbon (C) positions. The
//! backbone rigid invariant ([`BriMatrix`]) writes every bond in the
//! orthonormal frame of the preceding residue. Two backbones have equal
//! invariants exactly when a rigid motion maps one onto the other, the
//! coordinates can be rebuilt from the invariant ([`reconstruct()`]), and the
//! L∞ distance between invariants is Lipschitz in atomic perturbations.
//!
//! The crate also parses and cleans mmCIF chains ([`ingest`]), finds
//! duplicate chains in a corpus ([`dedup`]) and draws diagrams, barcodes and
//! heatmaps of the invariants ([`viz`]).

// `!(x >= y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backbone;
pub mod compare;
pub mod dedup;
pub mod error;
pub mod formats;
pub mod geometry;
pub mod ingest;
pub mod invariant;
pub mod reconstruct;
pub mod stats;
pub mod synth;
pub mod viz;

pub use backbone::{Backbone, Residue};
pub use error::{Error, Result};
pub use geometry::{apply_motion, canonical_pose, mirror, random_motion, residue_frame, RigidMotion, Vec3};
pub use invariant::{
    compute_brain, compute_bri, compute_trin, hat_bri, linf, mirror_bri, subchain_bri, BrainVector, BriMatrix,
    ChainInvariants, Column, TrinMatrix,
};
pub use reconstruct::reconstruct;
pub use stats::{compute_bond_stats, corpus_invariant_stats, default_bond_stats, BondStats};

/// Library version, printed by the command-line tool.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
