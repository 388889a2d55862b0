//! Lifting checks: flows assembled from the solver's own cycle basis,
//! plus its optimum certificates, all lift to integer flows that
//! conserve at every vertex, stay within |2|, agree with the residues,
//! and keep the support unchanged.

use flowforge::catalog::load_manifest;
use flowforge::flow::{
    integer_boundary, lift_modular_to_integer, EdgeLabelling, LabellingData, WeightedGraph,
};
use flowforge::group::{GroupSpec, Z3};
use flowforge::solver::{bfs_forest, cycle_basis, max_support_flow};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::path::Path;

fn manifest(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/manifests").join(name)
}

#[test]
fn a_thousand_lifts_hold_up() {
    let entries = load_manifest(&manifest("simple3ec_le7.txt")).unwrap();
    let mut rng = StdRng::seed_from_u64(0x11F7);
    let mut checked = 0usize;
    'outer: for entry in &entries {
        let g = entry.graph.clone();
        let o = g.default_orientation();
        let wg = WeightedGraph::zero(g.clone());
        let forest = bfs_forest(&g);
        let cycles = cycle_basis(&g, &o, &forest);

        let mut flows: Vec<Vec<Z3>> = Vec::new();
        for _ in 0..6 {
            let mut values = vec![Z3(0); g.num_edges()];
            for cycle in &cycles {
                let c = Z3(rng.random_range(0..3) as u8);
                for &(e, sign) in cycle {
                    let step = if sign > 0 { c } else { -c };
                    values[e as usize] += step;
                }
            }
            flows.push(values);
        }
        if cycles.len() <= 6 {
            let report = max_support_flow(&wg, &GroupSpec::z3(), 1 << 30).unwrap();
            if let LabellingData::Modular(phi) = &report.certificate.data {
                flows.push(phi.z3_values().unwrap());
            }
        }

        for values in flows {
            let phi = EdgeLabelling::from_z3(&values);
            let lifted = lift_modular_to_integer(&g, &o, &phi).unwrap();
            let bal = integer_boundary(&g, &o, &lifted).unwrap();
            assert!(bal.iter().all(|&b| b == 0), "{} conservation", entry.name);
            assert!(lifted.values.iter().all(|&v| v.abs() <= 2), "{} magnitude", entry.name);
            for (e, (&v, &r)) in lifted.values.iter().zip(&values).enumerate() {
                assert_eq!(v.rem_euclid(3) as u8, r.0, "{} residue at edge {e}", entry.name);
            }
            assert_eq!(lifted.support(), phi.support(), "{} support", entry.name);
            checked += 1;
            if checked >= 1000 {
                break 'outer;
            }
        }
    }
    assert!(checked >= 1000, "only {checked} lifts exercised");
}
