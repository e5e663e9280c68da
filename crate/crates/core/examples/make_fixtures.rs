//! Regenerates the mmCIF files under `fixtures/`.
//!
//! `cargo run -p bri-core --example make_fixtures`

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bri::synth::{self, ResidueGeometry};
use bri::{Backbone, Vec3};

const NAMES: [&str; 20] = [
    "MET", "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "PHE", "PRO", "SER",
    "THR", "TRP", "TYR", "VAL",
];

struct Atom {
    het: bool,
    name: String,
    alt: Option<char>,
    comp: String,
    seq: Option<i64>,
    pos: Vec3,
    occ: f64,
    asym: &'static str,
    entity: u32,
    model: u32,
}

struct Entry {
    id: String,
    poly_type: &'static str,
    atoms: Vec<Atom>,
}

fn carbonyl_oxygen(b: &Backbone, i: usize) -> Vec3 {
    let r = b.residues();
    let unit = |v: Vec3| v * (1.0 / v.norm());
    let dir = match r.get(i + 1) {
        Some(next) => unit(r[i].c - r[i].a) + unit(r[i].c - next.n),
        None => r[i].c - r[i].a,
    };
    r[i].c + unit(dir) * 1.23
}

fn chain_atoms(b: &Backbone, names: &[&str], model: u32) -> Vec<Atom> {
    let mut atoms = Vec::new();
    for (i, r) in b.residues().iter().enumerate() {
        let comp = names[i % names.len()];
        for (name, pos) in [("N", r.n), ("CA", r.a), ("C", r.c), ("O", carbonyl_oxygen(b, i))] {
            atoms.push(Atom {
                het: false,
                name: name.into(),
                alt: None,
                comp: comp.into(),
                seq: Some(i as i64 + 1),
                pos,
                occ: 1.0,
                asym: "A",
                entity: 1,
                model,
            });
        }
    }
    atoms
}

fn water(model: u32) -> Atom {
    Atom {
        het: true,
        name: "O".into(),
        alt: None,
        comp: "HOH".into(),
        seq: None,
        pos: Vec3::new(10.0, 10.0, 10.0),
        occ: 1.0,
        asym: "B",
        entity: 2,
        model,
    }
}

fn render(e: &Entry) -> String {
    let mut s = String::new();
    writeln!(s, "data_{}\n#\n_entry.id {}\n#", e.id, e.id).unwrap();
    s.push_str("loop_\n_entity.id\n_entity.type\n_entity.pdbx_description\n");
    s.push_str("1 polymer 'Synthetic backbone'\n2 water water\n#\n");
    writeln!(s, "_entity_poly.entity_id 1\n_entity_poly.type '{}'\n#", e.poly_type).unwrap();
    s.push_str(
        "loop_\n_atom_site.group_PDB\n_atom_site.id\n_atom_site.type_symbol\n_atom_site.label_atom_id\n\
         _atom_site.label_alt_id\n_atom_site.label_comp_id\n_atom_site.label_asym_id\n_atom_site.label_entity_id\n\
         _atom_site.label_seq_id\n_atom_site.Cartn_x\n_atom_site.Cartn_y\n_atom_site.Cartn_z\n_atom_site.occupancy\n\
         _atom_site.B_iso_or_equiv\n_atom_site.auth_seq_id\n_atom_site.auth_asym_id\n_atom_site.pdbx_PDB_model_num\n",
    );
    for (k, a) in e.atoms.iter().enumerate() {
        let seq = a.seq.map_or(".".to_string(), |v| v.to_string());
        let auth_seq = a.seq.map_or("1".to_string(), |v| v.to_string());
        writeln!(
            s,
            "{:<6} {:<5} {} {:<4} {} {} {} {} {:<3} {:8.3} {:8.3} {:8.3} {:.2} 20.00 {} A {}",
            if a.het { "HETATM" } else { "ATOM" },
            k + 1,
            &a.name[..1],
            a.name,
            a.alt.map_or(".".to_string(), String::from),
            a.comp,
            a.asym,
            a.entity,
            seq,
            a.pos.x,
            a.pos.y,
            a.pos.z,
            a.occ,
            auth_seq,
            a.model
        )
        .unwrap();
    }
    s.push_str("#\n");
    s
}

/// Helix, turn and strand in one chain.
fn mixed(m: usize) -> Backbone {
    let geometry: Vec<_> = (0..m)
        .map(|i| match i * 3 / m {
            0 => ResidueGeometry::ideal(-57.0, -47.0),
            1 => ResidueGeometry::ideal(-80.0, 150.0),
            _ => ResidueGeometry::ideal(-120.0, 130.0),
        })
        .collect();
    synth::build(&geometry)
}

fn entry(id: &str, atoms: Vec<Atom>) -> Entry {
    Entry { id: id.into(), poly_type: "polypeptide(L)", atoms }
}

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let cleaning = root.join("cleaning");
    let corpus = root.join("corpus");
    fs::create_dir_all(&cleaning).unwrap();
    fs::create_dir_all(&corpus).unwrap();

    let base = mixed(24);
    let standard = chain_atoms(&base, &NAMES, 1);

    // Clean chain with a water and a second NMR model that must be ignored.
    let mut atoms = chain_atoms(&base, &NAMES, 1);
    atoms.push(water(1));
    let moved = base.map_atoms(|p| p + Vec3::new(0.5, 0.0, 0.0));
    atoms.extend(chain_atoms(&moved, &NAMES, 2));
    let outputs = vec![("clean", entry("1CLN", atoms))];

    let mut non_protein = entry("1DNA", chain_atoms(&base, &["DA", "DC", "DG", "DT"], 1));
    non_protein.poly_type = "polydeoxyribonucleotide";

    let mut disordered = entry("2DIS", chain_atoms(&base, &NAMES, 1));
    disordered.atoms[4 * 5 + 1].occ = 0.5;

    let mut gap = entry("3GAP", chain_atoms(&base, &NAMES, 1));
    for a in gap.atoms.iter_mut().filter(|a| a.seq.is_some_and(|s| s >= 10)) {
        a.seq = a.seq.map(|s| s + 1);
    }

    let mut clash = entry("4CLS", chain_atoms(&base, &NAMES, 1));
    let c_pos = clash.atoms[4 * 7 + 2].pos;
    clash.atoms[4 * 8].pos = c_pos + Vec3::new(0.005, 0.0, 0.0);

    let mut incomplete = entry("5INC", chain_atoms(&base, &NAMES, 1));
    incomplete.atoms.retain(|a| !(a.seq == Some(12) && a.name == "C"));

    let mut nonstandard = entry("6NST", standard);
    for a in nonstandard.atoms.iter_mut().filter(|a| a.seq == Some(3)) {
        a.comp = "MSE".into();
        a.het = true;
    }

    let mut all = outputs;
    all.extend([
        ("step1_non_protein", non_protein),
        ("step2_disordered", disordered),
        ("step3_non_consecutive", gap),
        ("step4_clash", clash),
        ("step5_incomplete", incomplete),
        ("step6_non_standard", nonstandard),
    ]);
    for (name, e) in &all {
        fs::write(cleaning.join(format!("{name}.cif")), render(e)).unwrap();
    }

    let corpus_chains = [("HLX1", synth::alpha_helix(40)), ("STR1", synth::beta_strand(40)), ("MIX1", mixed(60))];
    for (id, b) in corpus_chains {
        let e = entry(id, chain_atoms(&b, &NAMES, 1));
        fs::write(corpus.join(format!("{}.cif", id.to_ascii_lowercase())), render(&e)).unwrap();
    }
    println!("fixtures written to {}", root.display());
}
