use bri_wasm::{barcode_svg, demo_backbone, diagram_svg, perturbation_svg, MAX_RESIDUES};

#[test]
fn every_kind_draws() {
    for kind in ["helix", "strand", "random"] {
        assert!(diagram_svg(kind, 30, 1).unwrap().contains("<svg"));
        assert!(perturbation_svg(kind, 20, 0.1, 3, 2).unwrap().contains("<svg"));
    }
    assert!(barcode_svg("random", 30, 1).unwrap().contains("<rect"));
}

#[test]
fn seeds_only_matter_for_random_chains() {
    assert_eq!(diagram_svg("helix", 20, 1), diagram_svg("helix", 20, 2));
    assert_ne!(diagram_svg("random", 20, 1), diagram_svg("random", 20, 2));
    assert_eq!(perturbation_svg("strand", 20, 0.05, 2, 7), perturbation_svg("strand", 20, 0.05, 2, 7));
}

#[test]
fn bad_requests_are_errors() {
    assert!(demo_backbone("coil", 10, 0).is_err());
    assert!(demo_backbone("helix", 1, 0).is_err());
    assert!(demo_backbone("helix", MAX_RESIDUES + 1, 0).is_err());
    assert!(perturbation_svg("helix", 10, 0.0, 3, 0).is_err());
    assert!(perturbation_svg("helix", 10, 0.1, 0, 0).is_err());
}
