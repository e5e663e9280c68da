//! Plain-text chain formats: the per-chain coordinate CSV, the accepted-chain
//! manifest and the rejection report.

use std::fmt::Write as _;

use super::{AtomSite, ChainRecord, RejectionReport, ResidueRecord, PROTEIN_KIND};
use crate::backbone::Backbone;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

pub const COORDS_CSV_HEADER: &str = "seq_index,residue,atom,x,y,z,occupancy";
const MANIFEST_HEADER: &str = "entry\tchain\tm";
const REPORT_HEADER: &str = "entry\tchain\tstep";

/// Writes the backbone atoms of `chain`. Coordinates use the shortest text
/// that reads back to the same number, so values parsed from mmCIF keep their
/// 3 decimals and reconstructions lose nothing.
pub fn write_coords_csv(chain: &ChainRecord) -> String {
    let mut out = String::with_capacity(chain.len() * 120);
    out.push_str(COORDS_CSV_HEADER);
    out.push('\n');
    for r in &chain.residues {
        for (name, site) in [("N", &r.n), ("CA", &r.a), ("C", &r.c)] {
            if let Some(s) = site {
                let p = s.position;
                writeln!(out, "{},{},{name},{},{},{},{}", r.seq_index, r.name, p.x, p.y, p.z, s.occupancy).unwrap();
            }
        }
    }
    out
}

/// Wraps a bare backbone (for example a reconstruction) as a chain of `UNK`
/// residues numbered from 1.
pub fn chain_from_backbone(entry_id: &str, chain_id: &str, backbone: &Backbone) -> ChainRecord {
    let residues = backbone
        .residues()
        .iter()
        .enumerate()
        .map(|(i, r)| ResidueRecord {
            seq_index: i as i64 + 1,
            name: "UNK".into(),
            n: Some(AtomSite::new(r.n, 1.0)),
            a: Some(AtomSite::new(r.a, 1.0)),
            c: Some(AtomSite::new(r.c, 1.0)),
        })
        .collect();
    ChainRecord {
        entry_id: entry_id.into(),
        chain_id: chain_id.into(),
        model: 1,
        entity_kind: PROTEIN_KIND.into(),
        residues,
    }
}

pub fn read_coords_csv(text: &str, entry_id: &str, chain_id: &str) -> Result<ChainRecord> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == COORDS_CSV_HEADER => {}
        Some((n, _)) => {
            return Err(Error::Parse { line: n + 1, message: format!("expected header `{COORDS_CSV_HEADER}`") })
        }
        None => return Err(Error::Parse { line: 1, message: "empty coordinate file".into() }),
    }
    let mut residues: Vec<ResidueRecord> = Vec::new();
    for (n, line) in lines {
        let err = |message: String| Error::Parse { line: n + 1, message };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 7 {
            return Err(err(format!("expected 7 fields, found {}", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number `{s}`")));
        let seq_index: i64 = f[0].parse().map_err(|_| err(format!("bad seq_index `{}`", f[0])))?;
        let site = AtomSite::new(Vec3::new(num(f[3])?, num(f[4])?, num(f[5])?), num(f[6])?);
        if residues.last().is_none_or(|r| r.seq_index != seq_index) {
            residues.push(ResidueRecord { seq_index, name: f[1].to_string(), n: None, a: None, c: None });
        }
        let r = residues.last_mut().expect("pushed above");
        let slot = match f[2] {
            "N" => &mut r.n,
            "CA" => &mut r.a,
            "C" => &mut r.c,
            other => return Err(err(format!("unexpected atom `{other}`"))),
        };
        if slot.replace(site).is_some() {
            return Err(err(format!("duplicate atom {} in residue {seq_index}", f[2])));
        }
    }
    Ok(ChainRecord {
        entry_id: entry_id.into(),
        chain_id: chain_id.into(),
        model: 1,
        entity_kind: PROTEIN_KIND.into(),
        residues,
    })
}

/// File name of a chain's coordinate CSV inside a cleaned-corpus directory.
pub fn coords_file_name(entry_id: &str, chain_id: &str) -> String {
    format!("{entry_id}_{chain_id}.csv")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub entry_id: String,
    pub chain_id: String,
    pub m: usize,
}

pub fn write_manifest(entries: &[ManifestEntry]) -> String {
    let mut out = format!("{MANIFEST_HEADER}\n");
    for e in entries {
        writeln!(out, "{}\t{}\t{}", e.entry_id, e.chain_id, e.m).unwrap();
    }
    out
}

pub fn read_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || (n == 0 && line.trim() == MANIFEST_HEADER) {
            continue;
        }
        let err = |message: String| Error::Parse { line: n + 1, message };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 3 {
            return Err(err(format!("expected 3 tab-separated fields, found {}", f.len())));
        }
        let m = f[2].trim().parse().map_err(|_| err(format!("bad length `{}`", f[2])))?;
        out.push(ManifestEntry { entry_id: f[0].into(), chain_id: f[1].into(), m });
    }
    Ok(out)
}

/// One line per rejected chain with the name of its failing step.
pub fn write_report(report: &RejectionReport) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for v in &report.verdicts {
        if let Some(step) = v.step {
            writeln!(out, "{}\t{}\t{}", v.entry_id, v.chain_id, step).unwrap();
        }
    }
    out
}
