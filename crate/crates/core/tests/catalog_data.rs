//! The shipped manifests and graph6 catalogs have the shapes the rest
//! of the suite leans on.

use flowforge::catalog::{canonical_hash, load_manifest, named, CatalogEntry};
use std::path::Path;

fn manifest(name: &str) -> Vec<CatalogEntry> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/manifests").join(name);
    load_manifest(&path).unwrap()
}

#[test]
fn two_edge_connected_manifest() {
    let entries = manifest("two_ec_20.txt");
    assert_eq!(entries.len(), 20);
    for e in &entries {
        assert!(e.graph.is_k_edge_connected(2), "{} is not 2-edge-connected", e.name);
    }
}

#[test]
fn cubic_bridgeless_manifest() {
    let entries = manifest("cubic_bridgeless_10.txt");
    assert_eq!(entries.len(), 10);
    for e in &entries {
        assert!(e.graph.vertices().all(|v| e.graph.degree(v) == 3), "{} not cubic", e.name);
        assert!(e.graph.is_k_edge_connected(2), "{} has a bridge", e.name);
    }
}

#[test]
fn small_three_edge_connected_catalogs() {
    let le7 = manifest("simple3ec_le7.txt");
    assert_eq!(le7.len(), 173);
    for e in &le7 {
        assert!(e.graph.num_vertices() <= 7, "{} too large", e.name);
        assert!(e.graph.is_k_edge_connected(3), "{} not 3-edge-connected", e.name);
    }

    let le5 = manifest("simple3ec_le5.txt");
    assert_eq!(le5.len(), 4);
    for e in &le5 {
        assert!(e.graph.num_vertices() <= 5);
        assert!(e.graph.is_k_edge_connected(3));
    }
    // every <=5-vertex instance appears in the larger catalog
    let hashes: Vec<u64> = le7.iter().map(|e| canonical_hash(&e.graph)).collect();
    for e in &le5 {
        assert!(hashes.contains(&canonical_hash(&e.graph)), "{} missing from le7", e.name);
    }
}

#[test]
fn cubic_catalog_contents() {
    let entries = manifest("cubic3ec_le8.txt");
    assert_eq!(entries.len(), 7);
    for e in &entries {
        assert!(e.graph.vertices().all(|v| e.graph.degree(v) == 3), "{} not cubic", e.name);
        assert!(e.graph.is_k_edge_connected(3), "{} not 3-edge-connected", e.name);
        assert!(e.graph.num_vertices() <= 8);
    }
    // sorted by size: the first entry is the complete graph on four
    assert_eq!(entries[0].graph.num_vertices(), 4);
    assert_eq!(canonical_hash(&entries[0].graph), canonical_hash(&named("k4").unwrap()));
    let known = ["k33", "prism", "cube", "v8"];
    for name in known {
        let h = canonical_hash(&named(name).unwrap());
        assert!(
            entries.iter().any(|e| canonical_hash(&e.graph) == h),
            "{name} missing from the cubic catalog"
        );
    }
}

#[test]
fn tripod_manifest() {
    let entries = manifest("tripods.txt");
    assert_eq!(entries.len(), 5);
    for e in &entries {
        assert!(e.warnings.is_empty(), "{} carries warnings {:?}", e.name, e.warnings);
        assert!(e.graph.cycle_rank() <= 16, "{} nullity too large", e.name);
        assert!(e.graph.is_k_edge_connected(3), "{} not 3-edge-connected", e.name);
    }
    assert_eq!(
        canonical_hash(&entries[0].graph),
        canonical_hash(&named("k4").unwrap()),
        "one tripod should collapse to the complete graph on four"
    );
}
