//! Synthetic corpora with planted duplicates, shared by several test targets.
#![allow(dead_code)]

use bri::ingest::{chain_from_backbone, ChainRecord};
use bri::invariant::BriMatrix;
use bri::{apply_motion, compute_bri, random_motion, reconstruct, synth, Backbone};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plant {
    Exact,
    Rigid,
    Near,
}

/// A corpus together with the pairs that must be reported, as entry ids.
pub struct Planted {
    pub chains: Vec<ChainRecord>,
    pub expected: Vec<(String, String, Plant)>,
}

/// Adds `delta` to one entry of the last BRI row and rebuilds the chain, so
/// the copy is exactly `delta` away in L∞ up to rounding.
pub fn near_copy(s: &Backbone, delta: f64, rng: &mut ChaCha8Rng) -> Backbone {
    let bri = compute_bri(s).unwrap();
    let mut rows = bri.rows().to_vec();
    let last = rows.len() - 1;
    let col = if last == 0 { [0, 6, 7][rng.gen_range(0..3)] } else { rng.gen_range(0..9) };
    rows[last][col] += if rng.gen_bool(0.5) { delta } else { -delta };
    reconstruct(&BriMatrix::from_rows(rows).unwrap()).unwrap()
}

/// `n` random chains with lengths in `lengths`, plus `per_kind` planted
/// copies of each kind made from distinct originals.
pub fn planted_corpus(n: usize, per_kind: usize, lengths: std::ops::Range<usize>, seed: u64) -> Planted {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let backbones: Vec<Backbone> =
        (0..n).map(|_| synth::random_backbone_with(rng.gen_range(lengths.clone()), &mut rng)).collect();
    let name = |i: usize| format!("R{i:05}");
    let mut chains: Vec<ChainRecord> =
        backbones.iter().enumerate().map(|(i, b)| chain_from_backbone(&name(i), "A", b)).collect();
    let mut expected = Vec::new();
    let kinds = [Plant::Exact, Plant::Rigid, Plant::Near];
    for (k, kind) in kinds.iter().enumerate() {
        for j in 0..per_kind {
            let src = k * per_kind + j;
            let copy = match kind {
                Plant::Exact => backbones[src].clone(),
                Plant::Rigid => apply_motion(&random_motion(rng.gen()), &backbones[src]),
                Plant::Near => near_copy(&backbones[src], 0.005, &mut rng),
            };
            let id = format!("P{src:05}");
            chains.push(chain_from_backbone(&id, "A", &copy));
            expected.push((name(src), id, *kind));
        }
    }
    Planted { chains, expected }
}
