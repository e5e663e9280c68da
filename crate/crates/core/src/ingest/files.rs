//! Directory-level ingestion: cleaning a folder of mmCIF files into a
//! coordinate corpus, and loading corpora or single chains back.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{
    clean, coords_file_name, read_coords_csv, read_manifest, read_mmcif_file, write_coords_csv, write_manifest,
    ChainRecord, ManifestEntry, RejectionReport, PROTEIN_KIND,
};
use crate::error::{Error, Result};

/// Name of the manifest written next to the coordinate files.
pub const MANIFEST_FILE_NAME: &str = "manifest.tsv";

fn in_file(path: &Path) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::InFile { path: path.to_path_buf(), source: Box::new(e) }
}

/// `*.cif` or `*.cif.gz`, ignoring case.
pub fn is_mmcif_path(path: &Path) -> bool {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("").to_ascii_lowercase();
    name.ends_with(".cif") || name.ends_with(".cif.gz")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleanedDirectory {
    pub files: usize,
    pub manifest: Vec<ManifestEntry>,
    pub report: RejectionReport,
}

/// Parses and cleans every mmCIF file directly inside `input`, in file-name
/// order, then writes one coordinate CSV per accepted chain and
/// [`MANIFEST_FILE_NAME`] into `output`.
pub fn clean_directory(input: &Path, output: &Path) -> Result<CleanedDirectory> {
    let mut paths: Vec<PathBuf> = fs::read_dir(input)
        .map_err(|e| in_file(input)(e.into()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file() && is_mmcif_path(p));
    paths.sort();

    let cleaned: Vec<(Vec<ChainRecord>, RejectionReport)> =
        paths.par_iter().map(|p| read_mmcif_file(p).map(clean).map_err(in_file(p))).collect::<Result<_>>()?;

    fs::create_dir_all(output).map_err(|e| in_file(output)(e.into()))?;
    let mut report = RejectionReport::default();
    let mut accepted = Vec::new();
    for (chains, r) in cleaned {
        report.merge(r);
        accepted.extend(chains);
    }
    accepted.par_iter().try_for_each(|c| {
        let path = output.join(coords_file_name(&c.entry_id, &c.chain_id));
        fs::write(&path, write_coords_csv(c)).map_err(|e| in_file(&path)(e.into()))
    })?;
    let manifest: Vec<ManifestEntry> = accepted
        .iter()
        .map(|c| ManifestEntry { entry_id: c.entry_id.clone(), chain_id: c.chain_id.clone(), m: c.len() })
        .collect();
    let path = output.join(MANIFEST_FILE_NAME);
    fs::write(&path, write_manifest(&manifest)).map_err(|e| in_file(&path)(e.into()))?;
    Ok(CleanedDirectory { files: paths.len(), manifest, report })
}

/// Reads every chain listed in a manifest from the coordinate files beside it.
pub fn load_manifest_corpus(manifest: &Path) -> Result<Vec<ChainRecord>> {
    let text = fs::read_to_string(manifest).map_err(|e| in_file(manifest)(e.into()))?;
    let entries = read_manifest(&text).map_err(in_file(manifest))?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    entries
        .par_iter()
        .map(|e| {
            let path = dir.join(coords_file_name(&e.entry_id, &e.chain_id));
            let chain = fs::read_to_string(&path)
                .map_err(Error::from)
                .and_then(|t| read_coords_csv(&t, &e.entry_id, &e.chain_id))
                .map_err(in_file(&path))?;
            if chain.len() != e.m {
                return Err(in_file(&path)(Error::InvalidInput(format!(
                    "manifest says {} residues, file has {}",
                    e.m,
                    chain.len()
                ))));
            }
            Ok(chain)
        })
        .collect()
}

/// One chain from a coordinate CSV (named `{entry}_{chain}.csv`) or from an
/// mmCIF file. For mmCIF, `chain` selects by author chain name; otherwise the
/// first protein chain is used.
pub fn load_chain(path: &Path, chain: Option<&str>) -> Result<ChainRecord> {
    if !is_mmcif_path(path) {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("chain");
        let (entry, id) = stem.rsplit_once('_').unwrap_or((stem, "A"));
        let text = fs::read_to_string(path).map_err(|e| in_file(path)(e.into()))?;
        return read_coords_csv(&text, entry, chain.unwrap_or(id)).map_err(in_file(path));
    }
    let chains = read_mmcif_file(path).map_err(in_file(path))?;
    let found = match chain {
        Some(id) => chains.into_iter().find(|c| c.chain_id == id),
        None => chains.into_iter().find(|c| c.entity_kind == PROTEIN_KIND),
    };
    found.ok_or_else(|| {
        let what = chain.map_or("no protein chain".to_string(), |id| format!("no chain `{id}`"));
        in_file(path)(Error::InvalidInput(what))
    })
}
