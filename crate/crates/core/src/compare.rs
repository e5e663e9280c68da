//! Side-by-side distances between two backbones of the same length.

use std::fmt::Write as _;

use crate::backbone::Backbone;
use crate::error::{Error, Result};
use crate::formats::format_g17;
use crate::geometry::canonical_pose;
use crate::invariant::{compute_brain, compute_bri, hat_bri, linf};
use crate::stats::compute_bond_stats;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub m: usize,
    pub linf_bri: f64,
    /// Needs at least two residues.
    pub linf_brain: Option<f64>,
    /// Row-weighted distance under the bond statistics of both chains;
    /// absent for single residues or when a row weight overflows.
    pub linf_hat_bri: Option<f64>,
    /// Largest distance between matching atoms after both chains are put in
    /// canonical pose.
    pub max_atom_distance: f64,
}

pub const COMPARISON_TSV_HEADER: &str = "m\tlinf_bri\tlinf_brain\tlinf_hat_bri\tmax_atom_distance";

pub fn compare_backbones(s: &Backbone, q: &Backbone) -> Result<Comparison> {
    if s.len() != q.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: q.len() });
    }
    let (bs, bq) = (compute_bri(s)?, compute_bri(q)?);
    let linf_brain = match (compute_brain(&bs), compute_brain(&bq)) {
        (Ok(a), Ok(b)) => Some(a.linf(&b)),
        _ => None,
    };
    let stats = compute_bond_stats([s, q])?;
    let linf_hat_bri = match (hat_bri(&bs, &stats), hat_bri(&bq, &stats)) {
        (Ok(a), Ok(b)) => Some(linf(&a, &b)?),
        _ => None,
    };
    let max_atom_distance = canonical_pose(s)?.0.max_atom_deviation(&canonical_pose(q)?.0)?;
    Ok(Comparison { m: s.len(), linf_bri: linf(&bs, &bq)?, linf_brain, linf_hat_bri, max_atom_distance })
}

/// Header plus one row; unavailable values are empty fields.
pub fn write_comparison_tsv(c: &Comparison) -> String {
    let opt = |v: Option<f64>| v.map(format_g17).unwrap_or_default();
    let mut out = format!("{COMPARISON_TSV_HEADER}\n");
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}",
        c.m,
        format_g17(c.linf_bri),
        opt(c.linf_brain),
        opt(c.linf_hat_bri),
        format_g17(c.max_atom_distance)
    );
    out
}
