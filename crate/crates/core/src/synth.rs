//! Synthetic backbones built from internal coordinates (bond lengths, bond
//! angles, torsions). Used by tests, benchmarks and the browser demo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::backbone::{Backbone, Residue};
use crate::geometry::Vec3;

/// Internal coordinates that place one residue after its predecessor.
///
/// Angles are in radians. `psi` is the torsion N₍ᵢ₋₁₎–A₍ᵢ₋₁₎–C₍ᵢ₋₁₎–Nᵢ,
/// `omega` is A₍ᵢ₋₁₎–C₍ᵢ₋₁₎–Nᵢ–Aᵢ and `phi` is C₍ᵢ₋₁₎–Nᵢ–Aᵢ–Cᵢ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueGeometry {
    pub cn: f64,
    pub na: f64,
    pub ac: f64,
    pub angle_acn: f64,
    pub angle_cna: f64,
    pub angle_nac: f64,
    pub psi: f64,
    pub omega: f64,
    pub phi: f64,
}

impl ResidueGeometry {
    /// Standard peptide geometry with the given backbone torsions in degrees.
    pub fn ideal(phi_deg: f64, psi_deg: f64) -> Self {
        Self {
            cn: 1.329,
            na: 1.458,
            ac: 1.525,
            angle_acn: 116.2f64.to_radians(),
            angle_cna: 121.7f64.to_radians(),
            angle_nac: 111.2f64.to_radians(),
            psi: psi_deg.to_radians(),
            omega: std::f64::consts::PI,
            phi: phi_deg.to_radians(),
        }
    }
}

/// Places `d` so that `|cd| = bond`, the angle b-c-d is `angle` and the
/// torsion a-b-c-d is `torsion`.
fn place(a: Vec3, b: Vec3, c: Vec3, bond: f64, angle: f64, torsion: f64) -> Vec3 {
    let bc = c - b;
    let bc = bc * (1.0 / bc.norm());
    let n = (b - a).cross(bc);
    let n = n * (1.0 / n.norm());
    let m = n.cross(bc);
    let local = (-bond * angle.cos(), bond * angle.sin() * torsion.cos(), bond * angle.sin() * torsion.sin());
    c + bc * local.0 + m * local.1 + n * local.2
}

/// Builds a backbone. The first element only contributes `na`, `ac` and
/// `angle_nac`.
pub fn build(geometry: &[ResidueGeometry]) -> Backbone {
    assert!(!geometry.is_empty(), "need at least one residue");
    let g0 = &geometry[0];
    let n = Vec3::ZERO;
    let a = Vec3::new(g0.na, 0.0, 0.0);
    let c = a + Vec3::new(-g0.angle_nac.cos(), g0.angle_nac.sin(), 0.0) * g0.ac;
    let mut residues = vec![Residue::new(n, a, c)];
    for g in &geometry[1..] {
        let prev = *residues.last().unwrap();
        let n = place(prev.n, prev.a, prev.c, g.cn, g.angle_acn, g.psi);
        let a = place(prev.a, prev.c, n, g.na, g.angle_cna, g.omega);
        let c = place(prev.c, n, a, g.ac, g.angle_nac, g.phi);
        residues.push(Residue::new(n, a, c));
    }
    Backbone::new(residues).expect("placement keeps coordinates finite")
}

/// Bond lengths uniform in [1.2, 1.6] Å, bond angles uniform in
/// [100°, 125°], torsions uniform.
pub fn random_geometry<R: Rng + ?Sized>(rng: &mut R) -> ResidueGeometry {
    let mut bond = || rng.gen_range(1.2..=1.6);
    let (cn, na, ac) = (bond(), bond(), bond());
    let mut angle = || rng.gen_range(100f64..=125.0).to_radians();
    let (angle_acn, angle_cna, angle_nac) = (angle(), angle(), angle());
    let pi = std::f64::consts::PI;
    let mut torsion = || rng.gen_range(-pi..pi);
    ResidueGeometry { cn, na, ac, angle_acn, angle_cna, angle_nac, psi: torsion(), omega: torsion(), phi: torsion() }
}

pub fn random_backbone_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Backbone {
    let geometry: Vec<_> = (0..m).map(|_| random_geometry(rng)).collect();
    build(&geometry)
}

pub fn random_backbone(m: usize, seed: u64) -> Backbone {
    random_backbone_with(m, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random bonds and angles with every torsion 0 or 180°, so all atoms lie in
/// the plane z = 0.
pub fn planar_backbone(m: usize, seed: u64) -> Backbone {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;
    let geometry: Vec<_> = (0..m)
        .map(|_| {
            let mut g = random_geometry(&mut rng);
            g.psi = pi;
            g.omega = pi;
            g.phi = if rng.gen_bool(0.5) { pi } else { 0.0 };
            g
        })
        .collect();
    build(&geometry).map_atoms(|p| Vec3::new(p.x, p.y, 0.0))
}

pub fn ideal_chain(m: usize, phi_deg: f64, psi_deg: f64) -> Backbone {
    build(&vec![ResidueGeometry::ideal(phi_deg, psi_deg); m])
}

pub fn alpha_helix(m: usize) -> Backbone {
    ideal_chain(m, -57.0, -47.0)
}

pub fn beta_strand(m: usize) -> Backbone {
    ideal_chain(m, -120.0, 130.0)
}

/// Adds independent uniform noise in `[-eps, eps]` to every coordinate.
pub fn jitter<R: Rng + ?Sized>(backbone: &Backbone, eps: f64, rng: &mut R) -> Backbone {
    if eps == 0.0 {
        return backbone.clone();
    }
    backbone
        .map_atoms(|p| p + Vec3::new(rng.gen_range(-eps..=eps), rng.gen_range(-eps..=eps), rng.gen_range(-eps..=eps)))
}
