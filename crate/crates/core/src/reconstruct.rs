//! Rebuilding backbone coordinates from a BRI matrix.

use crate::backbone::{Backbone, Residue};
use crate::error::{Error, Result};
use crate::geometry::{residue_frame, Vec3};
use crate::invariant::BriMatrix;

/// Places the atoms encoded by `bri`, returning the backbone in canonical
/// pose: A₁ at the origin, N₁ on the positive x-axis, C₁ in the upper
/// xy-plane. Every later residue is laid down by adding its three bond
/// vectors, expressed in the frame rebuilt from the previous residue's atoms.
pub fn reconstruct(bri: &BriMatrix) -> Result<Backbone> {
    let rows = bri.rows();
    let first = &rows[0];
    let mut residues = Vec::with_capacity(rows.len());
    let mut current = Residue::new(Vec3::new(first[0], 0.0, 0.0), Vec3::ZERO, Vec3::new(first[6], first[7], 0.0));
    residues.push(current);
    for (row, values) in rows.iter().enumerate().skip(1) {
        let frame = residue_frame(current.n, current.a, current.c)
            .map_err(|reason| Error::DegenerateRow { row: row - 1, reason })?;
        let n = current.c + frame.vector(Vec3::new(values[0], values[1], values[2]));
        let a = n + frame.vector(Vec3::new(values[3], values[4], values[5]));
        let c = a + frame.vector(Vec3::new(values[6], values[7], values[8]));
        current = Residue::new(n, a, c);
        residues.push(current);
    }
    if let Err(reason) = residue_frame(current.n, current.a, current.c) {
        return Err(Error::DegenerateRow { row: rows.len() - 1, reason });
    }
    Backbone::new(residues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{canonical_pose, mirror};
    use crate::invariant::{compute_bri, linf, mirror_bri};
    use crate::synth;

    #[test]
    fn canonical_first_triangle() {
        let bri = BriMatrix::from_rows(vec![[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]]).unwrap();
        let s = reconstruct(&bri).unwrap();
        assert_eq!(s.residues(), &[Residue::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0))]);
    }

    #[test]
    fn round_trip_matches_canonical_pose() {
        for seed in 0..10 {
            let s = synth::random_backbone(200, seed);
            let rebuilt = reconstruct(&compute_bri(&s).unwrap()).unwrap();
            let (canon, _) = canonical_pose(&s).unwrap();
            assert!(rebuilt.max_atom_deviation(&canon).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn output_is_in_canonical_pose() {
        let s = synth::random_backbone(50, 77);
        let rebuilt = reconstruct(&compute_bri(&s).unwrap()).unwrap();
        let (again, motion) = canonical_pose(&rebuilt).unwrap();
        assert!(rebuilt.max_atom_deviation(&again).unwrap() <= 1e-10);
        assert!(motion.angle() <= 1e-10);
    }

    #[test]
    fn mirrored_invariant_rebuilds_mirror_image() {
        let s = synth::random_backbone(40, 5);
        let bri = compute_bri(&s).unwrap();
        let from_mirror = reconstruct(&mirror_bri(&bri)).unwrap();
        let expected = compute_bri(&mirror(&reconstruct(&bri).unwrap())).unwrap();
        assert!(linf(&compute_bri(&from_mirror).unwrap(), &expected).unwrap() <= 1e-9);
    }

    #[test]
    fn degenerate_row_is_reported() {
        // Row 2 puts C₂ on the line through A₂ and N₂.
        let rows = vec![[1.46, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5, 1.4, 0.0], [1.3, 0.5, 0.2, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0]];
        let bri = BriMatrix::from_rows(rows).unwrap();
        assert!(matches!(reconstruct(&bri), Err(Error::DegenerateRow { row: 1, .. })));
    }
}
