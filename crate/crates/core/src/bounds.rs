//! Constructive support bounds: explicit flows whose support covers a
//! guaranteed fraction of the edge set, assembled by surgery and matching
//! arguments instead of exhaustive search.

use crate::error::{Error, Result};
use crate::flow::{
    certify_integer_flow, is_flow_with_boundary, pair_class_counts, EdgeLabelling,
    FlowCertificate, IntegerFlow, WeightedGraph,
};
use crate::graph::{MultiGraph, SurgeryMap};
use crate::group::{GroupElem, GroupSpec, Z3};
use crate::solver::nowhere_zero_flow;

/// Change of basis carrying each inverse-pair class of nonzero pair
/// values onto the antidiagonal class {(1,2),(2,1)}, the one killed by
/// summing the two coordinates. Rows are matrices [[a,b],[c,d]] acting
/// as (x,y) -> (ax+by, cx+dy) mod 3, indexed by the class they move.
const CLASS_TO_ANTIDIAGONAL: [[[u8; 2]; 2]; 4] = [
    [[1, 1], [0, 2]],
    [[1, 0], [2, 1]],
    [[1, 0], [0, 2]],
    [[1, 0], [0, 1]],
];

fn apply_class_matrix(m: &[[u8; 2]; 2], v: GroupElem) -> GroupElem {
    let (x, y) = (v.0[0], v.0[1]);
    GroupElem([(m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3])
}

/// Result of the three-quarters construction: a nowhere-zero pair
/// labelling rotated so its rarest value class is the one the coordinate
/// sum sends to zero, plus the certificate for that sum.
#[derive(Debug, Clone)]
pub struct ThreeQuarterBound {
    /// The rotated nowhere-zero pair labelling.
    pub pair_flow: EdgeLabelling,
    /// Value-class counts of `pair_flow`. Index 3 is the class summed to
    /// zero, and by construction no class is smaller.
    pub class_counts: [usize; 4],
    /// Certificate for the summed labelling; its support misses exactly
    /// the class-3 edges, so at most a quarter of the edge set.
    pub certificate: FlowCertificate,
}

/// Sum the coordinates of a nowhere-zero pair labelling after rotating
/// its least-frequent value class onto the pair that cancels. The eight
/// nonzero pair values fall into four classes of mutually inverse pairs;
/// the smallest class holds at most a quarter of the edges, so the sum
/// is a flow supported on at least three quarters of them.
///
/// Needs a bridgeless connected graph. Graphs with all degrees even
/// skip the search: orienting each component as a closed walk supports a
/// diagonal labelling on every edge.
pub fn three_quarter_flow(g: &MultiGraph, budget: u128) -> Result<ThreeQuarterBound> {
    if !g.is_k_edge_connected(2) {
        return Err(Error::NotTwoEdgeConnected(Some(
            "the three-quarters construction needs a bridgeless connected graph".into(),
        )));
    }
    let group = GroupSpec::z3z3();
    let m = g.num_edges();
    let pair = if g.is_eulerian() && m > 0 {
        let forward = g.eulerian_orientation(&vec![true; m])?;
        let values = forward
            .iter()
            .map(|&f| if f { GroupElem([1, 1]) } else { GroupElem([2, 2]) })
            .collect();
        EdgeLabelling::new(group.clone(), values)
    } else {
        match nowhere_zero_flow(g, &group, budget)? {
            Some(phi) => phi,
            None => {
                return Err(Error::InvariantViolation(
                    "a bridgeless graph admits a nowhere-zero labelling in any group of order nine"
                        .into(),
                ))
            }
        }
    };
    let counts = pair_class_counts(&pair)?;
    let min_class = (0..4).min_by_key(|&c| (counts[c], c)).expect("four classes");
    let mat = &CLASS_TO_ANTIDIAGONAL[min_class];
    let rotated = pair.values().iter().map(|&v| apply_class_matrix(mat, v)).collect();
    let pair_flow = EdgeLabelling::new(group, rotated);
    let class_counts = pair_class_counts(&pair_flow)?;
    debug_assert_eq!(class_counts[3], counts[min_class]);

    let summed: Vec<Z3> =
        pair_flow.values().iter().map(|v| Z3((v.0[0] + v.0[1]) % 3)).collect();
    let psi = EdgeLabelling::from_z3(&summed);
    let certificate = is_flow_with_boundary(&WeightedGraph::zero(g.clone()), &psi)?;
    if !certificate.boundary_ok || 4 * certificate.support < 3 * m {
        return Err(Error::InvariantViolation(format!(
            "summed labelling supports {} of {m} edges",
            certificate.support
        )));
    }
    Ok(ThreeQuarterBound { pair_flow, class_counts, certificate })
}

/// Every perfect matching, each as a sorted list of edge ids, in the
/// order a backtracking search finds them: always branch on the lowest
/// uncovered vertex and try its incident edges in id order. Loops never
/// match. Exhaustive, so meant for small graphs.
pub fn perfect_matchings(g: &MultiGraph) -> Vec<Vec<usize>> {
    fn go(g: &MultiGraph, covered: &mut [bool], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        for &(e, _) in g.incidence(v) {
            let w = g.other_end(e, v);
            if w == v || covered[w] {
                continue;
            }
            covered[v] = true;
            covered[w] = true;
            chosen.push(e);
            go(g, covered, chosen, out);
            chosen.pop();
            covered[v] = false;
            covered[w] = false;
        }
    }
    let mut out = Vec::new();
    if g.num_vertices().is_multiple_of(2) {
        go(g, &mut vec![false; g.num_vertices()], &mut Vec::new(), &mut out);
    }
    out
}

/// A pair of perfect matchings chosen for the light weight of the edges
/// they share.
#[derive(Debug, Clone)]
pub struct MatchingPair {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// Edge ids lying in both matchings.
    pub shared: Vec<usize>,
    /// Total weight of the shared edges.
    pub weight: u64,
}

fn shared_ids(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Among all pairs of perfect matchings, not necessarily distinct, a pair
/// whose shared edges weigh least; ties keep the earliest pair in
/// enumeration order. None when the graph has no perfect matching.
pub fn matching_pair_small_intersection(g: &MultiGraph, weights: &[u64]) -> Option<MatchingPair> {
    assert_eq!(weights.len(), g.num_edges());
    let pms = perfect_matchings(g);
    let mut best: Option<(u64, usize, usize)> = None;
    for i in 0..pms.len() {
        for k in i..pms.len() {
            let w: u64 = shared_ids(&pms[i], &pms[k]).iter().map(|&e| weights[e]).sum();
            if best.is_none_or(|(bw, _, _)| w < bw) {
                best = Some((w, i, k));
            }
        }
    }
    best.map(|(w, i, k)| MatchingPair {
        first: pms[i].clone(),
        second: pms[k].clone(),
        shared: shared_ids(&pms[i], &pms[k]),
        weight: w,
    })
}

/// A graph produced by repeatedly replacing two edges meeting at a
/// vertex with one edge joining their far ends. Every surviving edge
/// remembers the walk of input edges it stands for.
#[derive(Debug, Clone)]
pub struct LiftedGraph {
    pub graph: MultiGraph,
    /// Input edges composing each current edge, ordered from the current
    /// edge's stored tail; the flag is true when the input edge is
    /// traversed from its own stored tail.
    pub fibers: Vec<Vec<(usize, bool)>>,
    /// Walks that closed into loops during lifting and were removed.
    /// Their edges can carry any constant value along the walk without
    /// upsetting any boundary.
    pub dropped: Vec<Vec<(usize, bool)>>,
    /// The vertex of each committed lift, in order.
    pub lifted_at: Vec<usize>,
}

fn oriented(fiber: &[(usize, bool)], forward: bool) -> Vec<(usize, bool)> {
    if forward {
        fiber.to_vec()
    } else {
        fiber.iter().rev().map(|&(e, d)| (e, !d)).collect()
    }
}

/// Lift pairs of edges away from every vertex whose degree exceeds
/// `target` of it, committing the first candidate pair (in edge-id
/// order) whose result satisfies `keep`; among those, pairs satisfying
/// `prefer` win. A pair whose far ends coincide sheds its walk as a
/// dropped rider instead of creating a loop.
fn lift_degrees(
    g: &MultiGraph,
    target: impl Fn(usize) -> usize,
    keep: impl Fn(&MultiGraph) -> bool,
    prefer: impl Fn(&MultiGraph) -> bool,
) -> Result<LiftedGraph> {
    if let Some(e) = (0..g.num_edges()).find(|&e| g.is_loop(e)) {
        return Err(Error::Precondition(format!("edge {e} is a loop; strip loops before lifting")));
    }
    let mut cur = g.clone();
    let mut fibers: Vec<Vec<(usize, bool)>> = (0..g.num_edges()).map(|e| vec![(e, true)]).collect();
    let mut dropped = Vec::new();
    let mut lifted_at = Vec::new();
    while let Some(v) = cur.vertices().find(|&v| cur.degree(v) > target(cur.degree(v))) {
        let inc: Vec<usize> = cur.incidence(v).iter().map(|&(e, _)| e).collect();
        type Candidate = (MultiGraph, Vec<Vec<(usize, bool)>>, Option<Vec<(usize, bool)>>);
        let mut chosen: Option<Candidate> = None;
        'pairs: for ai in 0..inc.len() {
            for bi in ai + 1..inc.len() {
                let (e, f) = (inc[ai], inc[bi]);
                let u = cur.other_end(e, v);
                let w = cur.other_end(f, v);
                // the walk u -e- v -f- w collapses to a single edge (u, w)
                let mut merged = oriented(&fibers[e], cur.endpoints(e).0 == u);
                merged.extend(oriented(&fibers[f], cur.endpoints(f).0 == v));
                let mut new_edges = Vec::with_capacity(cur.num_edges());
                let mut new_fibers = Vec::with_capacity(cur.num_edges());
                for (id, fiber) in fibers.iter().enumerate() {
                    if id != e && id != f {
                        new_edges.push(cur.endpoints(id));
                        new_fibers.push(fiber.clone());
                    }
                }
                let mut dropped_walk = None;
                if u == w {
                    dropped_walk = Some(merged);
                } else {
                    new_edges.push((u, w));
                    new_fibers.push(merged);
                }
                let cand = MultiGraph::new(cur.num_vertices(), &new_edges)
                    .expect("surviving endpoints stay in range");
                if !keep(&cand) {
                    continue;
                }
                let good = prefer(&cand);
                if chosen.is_none() || good {
                    chosen = Some((cand, new_fibers, dropped_walk));
                }
                if good {
                    break 'pairs;
                }
            }
        }
        let Some((cand, new_fibers, dropped_walk)) = chosen else {
            return Err(Error::InvariantViolation(format!("no admissible lift at vertex {v}")));
        };
        cur = cand;
        fibers = new_fibers;
        if let Some(walk) = dropped_walk {
            dropped.push(walk);
        }
        lifted_at.push(v);
    }
    Ok(LiftedGraph { graph: cur, fibers, dropped, lifted_at })
}

/// Bring every degree down to at most three by lifting edge pairs off
/// high-degree vertices, keeping the graph bridgeless throughout. Even
/// degrees land on two, odd degrees on three. When the input is
/// cyclically three-edge-connected, lifts preserving that are preferred.
///
/// A connected graph with every degree even would dissolve into bare
/// cycles under this process, leaving nothing for the later stages to
/// anchor on, so such inputs are refused.
pub fn mader_lift_to_subcubic(g: &MultiGraph) -> Result<LiftedGraph> {
    if !g.is_k_edge_connected(2) {
        return Err(Error::NotTwoEdgeConnected(Some(
            "lifting needs a bridgeless connected graph".into(),
        )));
    }
    if g.is_eulerian() && g.num_edges() > 0 {
        return Err(Error::EulerianInput);
    }
    let keep_cyclic = g.is_cyclically_k_edge_connected(3);
    lift_degrees(
        g,
        |d| if d % 2 == 0 { 2 } else { 3 },
        |cand| cand.is_k_edge_connected(2),
        move |cand| !keep_cyclic || cand.is_cyclically_k_edge_connected(3),
    )
}

/// Push fibers through a degree-two suppression: concatenate each
/// chain's fibers along the walk from the new edge's stored tail.
fn compose_through_suppression(
    lifted: &LiftedGraph,
    suppressed: &MultiGraph,
    map: &SurgeryMap,
    chains: &[Vec<usize>],
) -> Result<Vec<Vec<(usize, bool)>>> {
    let mut out = Vec::with_capacity(chains.len());
    for (new_e, chain) in chains.iter().enumerate() {
        let (a, b) = suppressed.endpoints(new_e);
        if a == b {
            return Err(Error::InvariantViolation(format!(
                "suppression closed a chain into a loop at vertex {a}"
            )));
        }
        let mut x = map.vertex_new_to_old[a];
        let mut fiber = Vec::new();
        for &old_e in chain {
            let (t, _) = lifted.graph.endpoints(old_e);
            fiber.extend(oriented(&lifted.fibers[old_e], t == x));
            x = lifted.graph.other_end(old_e, x);
        }
        if x != map.vertex_new_to_old[b] {
            return Err(Error::InvariantViolation(
                "chain walk does not reach its far anchor".into(),
            ));
        }
        out.push(fiber);
    }
    Ok(out)
}

/// The loop-free part of a graph, with a map from its edge ids back to
/// the input's.
fn loopless_core(g: &MultiGraph) -> (MultiGraph, Vec<usize>) {
    let core: Vec<usize> = (0..g.num_edges()).filter(|&e| !g.is_loop(e)).collect();
    let edges: Vec<_> = core.iter().map(|&e| g.endpoints(e)).collect();
    let core_graph =
        MultiGraph::new(g.num_vertices(), &edges).expect("reusing valid endpoints");
    (core_graph, core)
}

/// Result of the fourteen-fifteenths construction.
#[derive(Debug, Clone)]
pub struct FourteenFifteenthsBound {
    /// Pair labelling on the input graph, zero exactly on `zero_edges`.
    pub certificate: FlowCertificate,
    /// Input edge ids left out of the support: the walks standing under
    /// the matching edges shared by the chosen pair.
    pub zero_edges: Vec<usize>,
    /// Number of lifts it took to reach a cubic graph.
    pub lifts: usize,
    /// Whether support * 15 >= 14 * edges.
    pub meets_bound: bool,
}

/// Build a pair labelling supported on at least fourteen fifteenths of
/// the edges of a bridgeless connected graph. Lift the graph to subcubic
/// form, suppress its degree-two vertices, weigh each surviving edge by
/// the walk it stands for, and pick two perfect matchings whose shared
/// weight is smallest: leaving each matching's complement nonzero in one
/// coordinate kills exactly the shared walks.
///
/// Graphs with all degrees even shortcut to a single-coordinate
/// labelling that is nonzero everywhere. Loops ride along with a fixed
/// nonzero value and never constrain a boundary.
pub fn fourteen_fifteenths_flow(g: &MultiGraph) -> Result<FourteenFifteenthsBound> {
    if !g.is_k_edge_connected(2) {
        return Err(Error::NotTwoEdgeConnected(Some(
            "the fourteen-fifteenths construction needs a bridgeless connected graph".into(),
        )));
    }
    let m = g.num_edges();
    let rider = GroupElem([1, 0]);
    let mut values = vec![rider; m];
    let (core_graph, core) = loopless_core(g);

    let (zero_edges, lifts) = if core_graph.is_eulerian() {
        (Vec::new(), 0)
    } else {
        let lifted = mader_lift_to_subcubic(&core_graph)?;
        let (cubic, map, chains) = lifted.graph.suppress_degree_two()?;
        if cubic.vertices().any(|v| cubic.degree(v) != 3) {
            return Err(Error::InvariantViolation("suppressed lift is not cubic".into()));
        }
        let fibers = compose_through_suppression(&lifted, &cubic, &map, &chains)?;
        let weights: Vec<u64> = fibers.iter().map(|f| f.len() as u64).collect();
        let Some(pair) = matching_pair_small_intersection(&cubic, &weights) else {
            return Err(Error::InvariantViolation(
                "a bridgeless cubic graph has a perfect matching".into(),
            ));
        };
        let mut in_first = vec![false; cubic.num_edges()];
        let mut in_second = vec![false; cubic.num_edges()];
        for &e in &pair.first {
            in_first[e] = true;
        }
        for &e in &pair.second {
            in_second[e] = true;
        }
        let mut zero_edges = Vec::new();
        for e in 0..cubic.num_edges() {
            let val = GroupElem([u8::from(!in_first[e]), u8::from(!in_second[e])]);
            for &(ce, _) in &fibers[e] {
                values[core[ce]] = val;
            }
            if val.is_zero() {
                zero_edges.extend(fibers[e].iter().map(|&(ce, _)| core[ce]));
            }
        }
        zero_edges.sort_unstable();
        (zero_edges, lifted.lifted_at.len())
    };

    let phi = EdgeLabelling::new(GroupSpec::z2z2(), values);
    let certificate = is_flow_with_boundary(&WeightedGraph::zero(g.clone()), &phi)?;
    if !certificate.boundary_ok {
        return Err(Error::InvariantViolation("pulled-back labelling is not a flow".into()));
    }
    debug_assert_eq!(certificate.support, m - zero_edges.len());
    let meets_bound = 15 * certificate.support >= 14 * m;
    Ok(FourteenFifteenthsBound { certificate, zero_edges, lifts, meets_bound })
}

/// Result of the two-flow construction for well-connected graphs.
#[derive(Debug, Clone)]
pub struct TwoFlowBound {
    pub j: usize,
    /// Integer flow with values in {-1, 0, +1} on the input graph.
    pub certificate: FlowCertificate,
    /// Weight of the perfect matching whose walks were zeroed.
    pub matching_weight: u64,
    /// True for j >= 2, where the lifting step leans on connectivity
    /// properties that are checked but not guaranteed by construction.
    pub experimental: bool,
    /// Whether support * (2j+1) >= 2j * edges.
    pub meets_bound: bool,
}

/// Build an integer flow with values in {-1, 0, +1} supported on at
/// least 2j/(2j+1) of the edges of a 2j-edge-connected graph. Lift even
/// degrees to two and odd degrees to 2j+1, suppress, and zero a minimum
/// weight perfect matching of the resulting (2j+1)-regular graph; the
/// rest has even degrees everywhere and closed-walk orientations give it
/// values of plus and minus one. Every odd cut of the regular graph has
/// at least 2j+1 edges, which is what makes a matching of weight at most
/// a (2j+1)-th of the total exist.
///
/// All-even graphs shortcut to closed-walk orientations with full
/// support. Loops ride along with value one.
pub fn two_flow_bound(g: &MultiGraph, j: usize) -> Result<TwoFlowBound> {
    if j == 0 {
        return Err(Error::Precondition("j must be at least one".into()));
    }
    if !g.is_k_edge_connected(2 * j) {
        return Err(Error::Precondition(format!(
            "the bound for j = {j} needs {}-edge-connectivity",
            2 * j
        )));
    }
    let m = g.num_edges();
    let mut values = vec![1i64; m];
    let (core_graph, core) = loopless_core(g);
    let odd_target = 2 * j + 1;

    let matching_weight = if core_graph.is_eulerian() {
        let forward = core_graph.eulerian_orientation(&vec![true; core.len()])?;
        for (ce, &f) in forward.iter().enumerate() {
            values[core[ce]] = if f { 1 } else { -1 };
        }
        0
    } else {
        let lifted = lift_degrees(
            &core_graph,
            |d| if d % 2 == 0 { 2 } else { odd_target },
            |cand| match cand.suppress_degree_two() {
                Ok((h, _, _)) => h.is_k_edge_connected(2 * j),
                Err(_) => false,
            },
            |_| true,
        )?;
        let (reg, map, chains) = lifted.graph.suppress_degree_two()?;
        if reg.vertices().any(|v| reg.degree(v) != odd_target) {
            return Err(Error::InvariantViolation(format!(
                "lifting should leave every degree at {odd_target}"
            )));
        }
        let fibers = compose_through_suppression(&lifted, &reg, &map, &chains)?;
        let weights: Vec<u64> = fibers.iter().map(|f| f.len() as u64).collect();
        let pms = perfect_matchings(&reg);
        let Some(matching) =
            pms.iter().min_by_key(|pm| pm.iter().map(|&e| weights[e]).sum::<u64>())
        else {
            return Err(Error::InvariantViolation(
                "an odd-regular graph meeting its odd cuts has a perfect matching".into(),
            ));
        };
        let weight: u64 = matching.iter().map(|&e| weights[e]).sum();
        let mut active = vec![true; reg.num_edges()];
        for &e in matching {
            active[e] = false;
        }
        let forward = reg.eulerian_orientation(&active)?;
        for e in 0..reg.num_edges() {
            let hv: i64 = if !active[e] {
                0
            } else if forward[e] {
                1
            } else {
                -1
            };
            for &(ce, dir) in &fibers[e] {
                values[core[ce]] = if dir { hv } else { -hv };
            }
        }
        // dropped walks carry a constant unit along their own direction
        for walk in &lifted.dropped {
            for &(ce, dir) in walk {
                values[core[ce]] = if dir { 1 } else { -1 };
            }
        }
        weight
    };

    let flow = IntegerFlow { k: 2, values };
    let certificate = certify_integer_flow(&WeightedGraph::zero(g.clone()), &flow)?;
    if !certificate.boundary_ok {
        return Err(Error::InvariantViolation("pulled-back values do not balance".into()));
    }
    let meets_bound = (2 * j + 1) * certificate.support >= 2 * j * m;
    Ok(TwoFlowBound {
        j,
        certificate,
        matching_weight,
        experimental: j >= 2,
        meets_bound,
    })
}
