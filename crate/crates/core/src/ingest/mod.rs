//! mmCIF ingestion and the six-step chain cleaning protocol.
//!
//! [`parse_mmcif`] turns one structure file into [`ChainRecord`]s, one per
//! polymer unit (`label_asym_id`) of the first model. [`clean`] then rejects
//! chains that are not protein, disordered, gapped, clashing, incomplete or
//! contain non-standard residues, in that order.

pub mod cif;
mod clean;
mod coords;
mod files;

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use flate2::read::MultiGzDecoder;

pub use clean::{clean, is_standard_residue, CleanStep, RejectionReport, Verdict, CLASH_DISTANCE, STANDARD_RESIDUES};
pub use coords::{
    chain_from_backbone, coords_file_name, read_coords_csv, read_manifest, write_coords_csv, write_manifest,
    write_report, ManifestEntry, COORDS_CSV_HEADER,
};
pub use files::{
    clean_directory, is_mmcif_path, load_chain, load_manifest_corpus, CleanedDirectory, MANIFEST_FILE_NAME,
};

use crate::backbone::{Backbone, Residue};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Entity polymer type of protein chains.
pub const PROTEIN_KIND: &str = "polypeptide(L)";
/// Entity kind recorded when a chain has no entity linkage.
pub const UNKNOWN_KIND: &str = "unknown";

/// One backbone atom as deposited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSite {
    pub position: Vec3,
    pub occupancy: f64,
    /// The atom carried an alternate-location indicator.
    pub altloc: bool,
}

impl AtomSite {
    pub fn new(position: Vec3, occupancy: f64) -> Self {
        Self { position, occupancy, altloc: false }
    }
}

/// One residue with whichever of its N, CA and C atoms were present.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueRecord {
    pub seq_index: i64,
    pub name: String,
    pub n: Option<AtomSite>,
    pub a: Option<AtomSite>,
    pub c: Option<AtomSite>,
}

impl ResidueRecord {
    /// Present backbone atoms in N, CA, C order.
    pub fn atoms(&self) -> impl Iterator<Item = &AtomSite> {
        [&self.n, &self.a, &self.c].into_iter().flatten()
    }
}

/// A chain of one structure entry together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRecord {
    pub entry_id: String,
    /// Author chain name, as shown in most viewers.
    pub chain_id: String,
    pub model: i64,
    /// Entity polymer type such as `polypeptide(L)`, or [`UNKNOWN_KIND`].
    pub entity_kind: String,
    pub residues: Vec<ResidueRecord>,
}

impl ChainRecord {
    /// The backbone, or `IncompleteResidue` for the first residue missing an atom.
    pub fn backbone(&self) -> Result<Backbone> {
        let residues = self
            .residues
            .iter()
            .enumerate()
            .map(|(index, r)| {
                let get = |atom: &Option<AtomSite>, name| {
                    atom.map(|s| s.position).ok_or(Error::IncompleteResidue { index, atom: name })
                };
                Ok(Residue::new(get(&r.n, "N")?, get(&r.a, "CA")?, get(&r.c, "C")?))
            })
            .collect::<Result<Vec<_>>>()?;
        Backbone::new(residues)
    }

    /// Residue names in chain order.
    pub fn sequence(&self) -> Vec<&str> {
        self.residues.iter().map(|r| r.name.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

struct AtomColumns {
    atom: usize,
    comp: usize,
    asym: usize,
    seq: usize,
    x: usize,
    y: usize,
    z: usize,
    alt: Option<usize>,
    entity: Option<usize>,
    auth_asym: Option<usize>,
    occupancy: Option<usize>,
    model: Option<usize>,
}

impl AtomColumns {
    fn locate(table: &cif::Table) -> Result<Self> {
        let need = |item: &str| table.column(item).ok_or_else(|| Error::MissingCategory(format!("atom_site.{item}")));
        Ok(Self {
            atom: need("label_atom_id")?,
            comp: need("label_comp_id")?,
            asym: need("label_asym_id")?,
            seq: need("label_seq_id")?,
            x: need("Cartn_x")?,
            y: need("Cartn_y")?,
            z: need("Cartn_z")?,
            alt: table.column("label_alt_id"),
            entity: table.column("label_entity_id"),
            auth_asym: table.column("auth_asym_id"),
            occupancy: table.column("occupancy"),
            model: table.column("pdbx_PDB_model_num"),
        })
    }
}

/// Entity id → polymer type; non-polymer entities map to their entity type.
fn entity_kinds(block: &cif::Block) -> HashMap<String, String> {
    let mut kinds = HashMap::new();
    if let Some(t) = block.table("entity") {
        if let (Some(id), Some(ty)) = (t.column("id"), t.column("type")) {
            for row in 0..t.len() {
                if let (Some(id), Some(ty)) = (t.get(row, id), t.get(row, ty)) {
                    kinds.insert(id.to_string(), ty.to_ascii_lowercase());
                }
            }
        }
    }
    if let Some(t) = block.table("entity_poly") {
        if let (Some(id), Some(ty)) = (t.column("entity_id"), t.column("type")) {
            for row in 0..t.len() {
                if let (Some(id), Some(ty)) = (t.get(row, id), t.get(row, ty)) {
                    kinds.insert(id.to_string(), ty.to_string());
                }
            }
        }
    }
    kinds
}

/// Entity types that never form a chain.
fn is_small_entity(kind: &str) -> bool {
    matches!(kind, "non-polymer" | "water" | "branched" | "macrolide")
}

struct ChainBuilder {
    chain_id: String,
    entity_kind: String,
    residues: Vec<ResidueRecord>,
}

/// Parses an mmCIF file, gzip-compressed or plain. Only the first model is
/// kept; chains appear in file order.
pub fn parse_mmcif(bytes: &[u8]) -> Result<Vec<ChainRecord>> {
    let text = if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut s = String::new();
        MultiGzDecoder::new(bytes).read_to_string(&mut s)?;
        s
    } else {
        String::from_utf8(bytes.to_vec()).map_err(|e| Error::Parse { line: 0, message: format!("not UTF-8: {e}") })?
    };
    parse_mmcif_str(&text)
}

pub fn parse_mmcif_str(text: &str) -> Result<Vec<ChainRecord>> {
    let block = cif::parse_block(text)?;
    let table =
        block.table("atom_site").filter(|t| !t.is_empty()).ok_or_else(|| Error::MissingCategory("atom_site".into()))?;
    let entry_id = block.item("entry", "id").unwrap_or(&block.name).to_string();
    let kinds = entity_kinds(&block);
    let cols = AtomColumns::locate(table)?;

    let mut model: Option<i64> = None;
    let mut order: Vec<String> = Vec::new();
    let mut chains: HashMap<String, ChainBuilder> = HashMap::new();
    for row in 0..table.len() {
        let line = table.line(row);
        let err = |message: String| Error::Parse { line, message };
        let row_model = match cols.model.and_then(|c| table.get(row, c)) {
            Some(v) => v.parse::<i64>().map_err(|_| err(format!("bad model number `{v}`")))?,
            None => 1,
        };
        if *model.get_or_insert(row_model) != row_model {
            continue;
        }
        let asym = table.get(row, cols.asym).ok_or_else(|| err("missing label_asym_id".into()))?;
        let kind = match cols.entity.and_then(|c| table.get(row, c)).and_then(|e| kinds.get(e)) {
            Some(k) => k.clone(),
            None => UNKNOWN_KIND.to_string(),
        };
        if is_small_entity(&kind) {
            continue;
        }
        let chain = chains.entry(asym.to_string()).or_insert_with(|| {
            order.push(asym.to_string());
            let auth = cols.auth_asym.and_then(|c| table.get(row, c)).unwrap_or(asym);
            ChainBuilder { chain_id: auth.to_string(), entity_kind: kind, residues: Vec::new() }
        });

        let seq = table.get(row, cols.seq).ok_or_else(|| err("polymer atom without label_seq_id".into()))?;
        let seq_index: i64 = seq.parse().map_err(|_| err(format!("bad label_seq_id `{seq}`")))?;
        let name = table.get(row, cols.comp).unwrap_or("UNK");
        if chain.residues.last().is_none_or(|r| r.seq_index != seq_index) {
            chain.residues.push(ResidueRecord { seq_index, name: name.to_string(), n: None, a: None, c: None });
        }
        let residue = chain.residues.last_mut().expect("pushed above");

        let slot = match table.get(row, cols.atom) {
            Some("N") => &mut residue.n,
            Some("CA") => &mut residue.a,
            Some("C") => &mut residue.c,
            _ => continue,
        };
        let coord = |c: usize| -> Result<f64> {
            let v = table.get(row, c).ok_or_else(|| err("missing coordinate".into()))?;
            v.parse().map_err(|_| err(format!("bad coordinate `{v}`")))
        };
        let position = Vec3::new(coord(cols.x)?, coord(cols.y)?, coord(cols.z)?);
        let occupancy = match cols.occupancy.and_then(|c| table.get(row, c)) {
            Some(v) => v.parse().map_err(|_| err(format!("bad occupancy `{v}`")))?,
            None => 1.0,
        };
        let altloc = cols.alt.and_then(|c| table.get(row, c)).is_some();
        match slot {
            Some(site) => site.altloc |= altloc || name != residue.name,
            None => *slot = Some(AtomSite { position, occupancy, altloc }),
        }
    }

    Ok(order
        .into_iter()
        .map(|asym| {
            let b = chains.remove(&asym).expect("every ordered chain was inserted");
            ChainRecord {
                entry_id: entry_id.clone(),
                chain_id: b.chain_id,
                model: model.unwrap_or(1),
                entity_kind: b.entity_kind,
                residues: b.residues,
            }
        })
        .collect())
}

/// Small shipped corpus of ideal-geometry chains (helix, strand and a mixed
/// chain, coordinates at 3 decimals) used for default bond statistics.
pub const BUILTIN_CORPUS: [(&str, &str); 3] = [
    ("hlx1.cif", include_str!("../../fixtures/corpus/hlx1.cif")),
    ("str1.cif", include_str!("../../fixtures/corpus/str1.cif")),
    ("mix1.cif", include_str!("../../fixtures/corpus/mix1.cif")),
];

/// Accepted chains of [`BUILTIN_CORPUS`].
pub fn builtin_chains() -> Result<Vec<ChainRecord>> {
    let mut chains = Vec::new();
    for (_, text) in BUILTIN_CORPUS {
        chains.extend(parse_mmcif_str(text)?);
    }
    Ok(clean(chains).0)
}

pub fn read_mmcif_file(path: &Path) -> Result<Vec<ChainRecord>> {
    parse_mmcif(&std::fs::read(path)?)
}
