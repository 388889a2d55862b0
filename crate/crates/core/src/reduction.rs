//! Cut reductions and verification sweeps.
//!
//! Tools for shrinking a weighted graph while accounting for support:
//! the bonus ledger over the ear partition, checkers for contraction and
//! deletion witnesses, the 3-cut identification that pushes one side of
//! a small cut into a single vertex, the triangle contraction with
//! per-edge length residues, and sweeps confirming that the solver's
//! optimum gain clears the bonus across whole graph families.

use crate::catalog::{tightness_instance, CatalogEntry};
use crate::ears::{
    ear_labellings, find_ear_decomposition, find_ears, psi_removal, Ear, EarDecomposition, EarKind,
};
use crate::error::{Error, Result};
use crate::flow::WeightedGraph;
use crate::graph::{MultiGraph, SurgeryMap, VertexSet};
use crate::group::{GroupSpec, Z3};
use crate::report::{CertificateJson, SWEEP_SCHEMA};
use crate::solver::{for_each_member, max_support_flow, RatioReport};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// One ear's row in the bonus ledger.
#[derive(Debug, Clone, Serialize)]
pub struct BonusEntry {
    pub length: usize,
    pub residue: usize,
    pub equitable: bool,
    pub bonus: i64,
    /// Set for ears anchored at an identified cut vertex: local surgery
    /// has to leave those alone, so their bonus is reported separately.
    pub unusable: bool,
}

/// The ear partition of a weighted graph with each ear's bonus.
#[derive(Debug, Clone)]
pub struct BonusLedger {
    pub ears: Vec<Ear>,
    pub entries: Vec<BonusEntry>,
}

impl BonusLedger {
    /// Bonus summed over every ear.
    pub fn total(&self) -> i64 {
        self.entries.iter().map(|e| e.bonus).sum()
    }

    /// Bonus summed over the ears not tagged unusable.
    pub fn usable_total(&self) -> i64 {
        self.entries.iter().filter(|e| !e.unusable).map(|e| e.bonus).sum()
    }
}

fn ledger_over(wg: &WeightedGraph, unusable: impl Fn(&Ear) -> bool) -> Result<BonusLedger> {
    let ears = find_ears(&wg.graph);
    let mut entries = Vec::with_capacity(ears.len());
    for ear in &ears {
        let l = ear_labellings(ear, wg.mu())?;
        entries.push(BonusEntry {
            length: ear.len(),
            residue: ear.residue(),
            equitable: l.is_equitable(),
            bonus: l.bonus(ear),
            unusable: unusable(ear),
        });
    }
    Ok(BonusLedger { ears, entries })
}

/// The bonus ledger of a 2-edge-connected weighted graph: one entry per
/// ear of the partition, valued 0 when the ear is equitable, 3 when its
/// length is 2 mod 3, and 4 otherwise.
pub fn bonus_of(wg: &WeightedGraph) -> Result<BonusLedger> {
    if !wg.graph.is_k_edge_connected(2) {
        return Err(Error::NotTwoEdgeConnected(Some(
            "the bonus ledger needs a bridgeless connected graph".into(),
        )));
    }
    ledger_over(wg, |_| false)
}

/// Translate an ear's ids through a surgery map; None if any of its
/// edges or vertices no longer exist.
fn translate_ear(ear: &Ear, map: &SurgeryMap) -> Option<Ear> {
    let mut edges = Vec::with_capacity(ear.edges.len());
    for &e in &ear.edges {
        edges.push(map.edge_old_to_new.get(e).copied().flatten()?);
    }
    let mut interior = Vec::with_capacity(ear.interior.len());
    for &v in &ear.interior {
        interior.push(map.vertex_old_to_new.get(v).copied().flatten()?);
    }
    Some(Ear {
        kind: ear.kind,
        edges,
        forward: ear.forward.clone(),
        interior,
        anchors: (
            map.vertex_old_to_new.get(ear.anchors.0).copied().flatten()?,
            map.vertex_old_to_new.get(ear.anchors.1).copied().flatten()?,
        ),
    })
}

/// Check that `ear` really is an ear of `g`: a walk crossing only
/// degree-2 vertices, shaped as an open path between two branch
/// vertices, a cycle through exactly one branch vertex, or the whole
/// graph as a bare cycle. Returns the kind the shape dictates.
fn classify_as_ear(g: &MultiGraph, ear: &Ear) -> std::result::Result<EarKind, String> {
    let k = ear.len();
    if k == 0 {
        return Err("the ear has no edges".into());
    }
    if ear.forward.len() != k || ear.interior.len() + 1 != k {
        return Err("mismatched edge, direction, and interior counts".into());
    }
    let distinct: BTreeSet<usize> = ear.edges.iter().copied().collect();
    if distinct.len() != k {
        return Err("an edge repeats inside the ear".into());
    }
    let mut at = ear.anchors.0;
    let mut seen = BTreeSet::from([at]);
    for j in 0..k {
        let e = ear.edges[j];
        if e >= g.num_edges() {
            return Err(format!("edge {e} is out of range"));
        }
        let (t, h) = g.endpoints(e);
        let (from, to) = if ear.forward[j] { (t, h) } else { (h, t) };
        if from != at {
            return Err(format!("edge {e} does not continue the walk"));
        }
        if j + 1 < k {
            if ear.interior[j] != to {
                return Err(format!("interior vertex {} does not match the walk", ear.interior[j]));
            }
            if !seen.insert(to) {
                return Err(format!("vertex {to} repeats inside the ear"));
            }
        }
        at = to;
    }
    if at != ear.anchors.1 {
        return Err("the walk does not end at the second anchor".into());
    }
    for &v in &ear.interior {
        if g.degree(v) != 2 {
            return Err(format!("crossed vertex {v} has degree {}, not 2", g.degree(v)));
        }
    }
    if ear.anchors.0 != ear.anchors.1 {
        for v in [ear.anchors.0, ear.anchors.1] {
            if g.degree(v) < 3 {
                return Err(format!(
                    "endpoint {v} has degree {}; an open ear needs branch endpoints",
                    g.degree(v)
                ));
            }
        }
        Ok(EarKind::OpenPath)
    } else if g.degree(ear.anchors.0) != 2 {
        Ok(EarKind::AnchoredCycle)
    } else if k == g.num_edges() {
        Ok(EarKind::Cycle)
    } else {
        Err("a cycle of degree-2 vertices is only an ear as the whole graph".into())
    }
}

/// The subgraph on a set of edges, isolated vertices dropped, with the
/// id bookkeeping back to the host.
pub fn ear_union_subgraph(
    g: &MultiGraph,
    edges: &BTreeSet<usize>,
) -> Result<(MultiGraph, SurgeryMap)> {
    let complement: BTreeSet<usize> = (0..g.num_edges()).filter(|e| !edges.contains(e)).collect();
    for &e in edges {
        if e >= g.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
    }
    g.delete_and_clean(&complement)
}

/// Replay a decomposition in removal order, last ear first: each ear
/// must be an ear of whatever is left at its turn, and nothing may
/// remain at the end.
fn validate_full_decomposition(g: &MultiGraph, d: &EarDecomposition) -> Result<()> {
    let mut cur = g.clone();
    let mut to_cur = SurgeryMap::identity(g);
    for (i, ear) in d.ears.iter().enumerate().rev() {
        let translated = translate_ear(ear, &to_cur).ok_or_else(|| {
            Error::Precondition(format!(
                "decomposition ear {} overlaps an ear removed after it",
                i + 1
            ))
        })?;
        classify_as_ear(&cur, &translated)
            .map_err(|msg| Error::Precondition(format!("decomposition ear {}: {msg}", i + 1)))?;
        let removed: BTreeSet<usize> = translated.edges.iter().copied().collect();
        let (next, map) = cur.delete_and_clean(&removed)?;
        to_cur = to_cur.compose(&map);
        cur = next;
    }
    if cur.num_edges() > 0 {
        return Err(Error::Precondition(
            "the decomposition does not cover every edge of the subgraph".into(),
        ));
    }
    Ok(())
}

/// The verdict on one contraction witness.
#[derive(Debug, Clone, Serialize)]
pub struct ContractibleCheck {
    pub holds: bool,
    /// 8 per unit of length residue, summed over the decomposition.
    pub decomposition_gain: i64,
    /// Bonus summed over the host ears forming the subgraph.
    pub bonus: i64,
    /// Ledger indices of those host ears.
    pub ear_ids: Vec<usize>,
}

/// Verify a contraction witness. `h_edges` must select a union of whole
/// host ears; `d` must be a full ear decomposition of that subgraph, in
/// the subgraph's own ids as built by `ear_union_subgraph`. The check
/// holds when the decomposition's guaranteed gain covers the bonus of
/// the selected ears.
pub fn verify_contractible(
    wg: &WeightedGraph,
    h_edges: &BTreeSet<usize>,
    d: &EarDecomposition,
) -> Result<ContractibleCheck> {
    let ledger = bonus_of(wg)?;
    let mut ear_ids = Vec::new();
    for (i, ear) in ledger.ears.iter().enumerate() {
        let inside = ear.edges.iter().filter(|e| h_edges.contains(e)).count();
        if inside == ear.len() {
            ear_ids.push(i);
        } else if inside != 0 {
            return Err(Error::Precondition(
                "the subgraph splits an ear; it must be a union of whole ears".into(),
            ));
        }
    }
    let (h, _) = ear_union_subgraph(&wg.graph, h_edges)?;
    validate_full_decomposition(&h, d)?;
    let decomposition_gain = d.gain_guarantee();
    let bonus: i64 = ear_ids.iter().map(|&i| ledger.entries[i].bonus).sum();
    Ok(ContractibleCheck { holds: decomposition_gain >= bonus, decomposition_gain, bonus, ear_ids })
}

/// The verdict on one deletion witness, clause by clause. Failing a
/// clause reports which and why; errors are reserved for malformed
/// inputs.
#[derive(Debug, Clone, Serialize)]
pub struct ReducibleCheck {
    pub holds: bool,
    pub failed_clause: Option<(u8, String)>,
    /// Gains of the removed labellings (partial if a clause failed).
    pub gain_total: i64,
    pub bonus_before: i64,
    /// Bonus of the remainder, known once every removal went through.
    pub bonus_after: Option<i64>,
}

/// Verify a deletion witness against its four clauses:
///
/// 1. removing the ears back to front, each is an ear of the graph left
///    at its turn;
/// 2. the remainder is empty or 2-edge-connected and cyclically
///    3-edge-connected;
/// 3. each labelling is one of its ear's three candidates against the
///    weights left at its turn;
/// 4. the labellings' total gain covers the drop in bonus.
///
/// `ears[i]` is given in host ids and `labellings[i][j]` is the value on
/// `ears[i].edges[j]` read along the ear's traversal direction. The last
/// ear is removed first.
pub fn verify_reducible(
    wg: &WeightedGraph,
    ears: &[Ear],
    labellings: &[Vec<Z3>],
) -> Result<ReducibleCheck> {
    if ears.len() != labellings.len() {
        return Err(Error::Precondition("one labelling per ear".into()));
    }
    if ears.is_empty() {
        return Err(Error::Precondition("a deletion witness removes at least one ear".into()));
    }
    for (i, (ear, psi)) in ears.iter().zip(labellings).enumerate() {
        if psi.len() != ear.len() {
            return Err(Error::Precondition(format!(
                "labelling {} has {} values for {} edges",
                i + 1,
                psi.len(),
                ear.len()
            )));
        }
    }
    let bonus_before = bonus_of(wg)?.total();
    let fail = |clause: u8, msg: String, gain_total: i64| ReducibleCheck {
        holds: false,
        failed_clause: Some((clause, msg)),
        gain_total,
        bonus_before,
        bonus_after: None,
    };
    let mut cur = wg.clone();
    let mut to_cur = SurgeryMap::identity(&wg.graph);
    let mut gain_total = 0i64;
    for i in (0..ears.len()).rev() {
        let step = i + 1;
        let Some(mut translated) = translate_ear(&ears[i], &to_cur) else {
            return Ok(fail(
                1,
                format!("ear {step} uses edges or vertices already removed"),
                gain_total,
            ));
        };
        match classify_as_ear(&cur.graph, &translated) {
            Ok(kind) => translated.kind = kind,
            Err(msg) => return Ok(fail(1, format!("ear {step}: {msg}"), gain_total)),
        }
        let lab = match ear_labellings(&translated, cur.mu()) {
            Ok(l) => l,
            Err(_) => {
                return Ok(fail(
                    3,
                    format!("ear {step}: the cycle's weights do not balance, no labelling exists"),
                    gain_total,
                ))
            }
        };
        let psi = &labellings[i];
        let shift = psi[0];
        if let Some(j) = (0..psi.len()).find(|&j| lab.base[j] + shift != psi[j]) {
            return Ok(fail(
                3,
                format!("ear {step}: the labelling breaks the forced propagation at position {j}"),
                gain_total,
            ));
        }
        let removal = psi_removal(&cur, &translated, &lab, shift)?;
        gain_total += removal.ear_gain;
        to_cur = to_cur.compose(&removal.map);
        cur = removal.reduced;
    }
    if cur.graph.num_edges() > 0 && !cur.graph.is_subdivision_of_3ec() {
        return Ok(fail(
            2,
            "the remainder is neither empty nor a subdivision of a 3-edge-connected graph".into(),
            gain_total,
        ));
    }
    let bonus_after = if cur.graph.num_edges() == 0 { 0 } else { bonus_of(&cur)?.total() };
    let drop = bonus_before - bonus_after;
    if gain_total < drop {
        return Ok(ReducibleCheck {
            holds: false,
            failed_clause: Some((4, format!("gain {gain_total} does not cover the bonus drop {drop}"))),
            gain_total,
            bonus_before,
            bonus_after: Some(bonus_after),
        });
    }
    Ok(ReducibleCheck {
        holds: true,
        failed_clause: None,
        gain_total,
        bonus_before,
        bonus_after: Some(bonus_after),
    })
}

/// A graph with one side of a 3-edge cut identified into a single
/// vertex, plus the bookkeeping of how it was made.
#[derive(Debug, Clone)]
pub struct BulletGraph {
    pub weighted: WeightedGraph,
    /// The kept side, in source ids.
    pub x_vertices: VertexSet,
    /// The three cut edges, in source ids.
    pub cut_edges: Vec<usize>,
    /// The identified vertex (always the highest id).
    pub w: usize,
    /// Source vertex to result vertex; the far side all maps to w.
    pub vertex_map: Vec<usize>,
    /// Source edge behind each result edge.
    pub edge_origin: Vec<usize>,
    /// Ledger over the result's ears; the three at w are tagged unusable.
    pub ledger: BonusLedger,
}

/// Find the smallest vertex set X cut off by exactly three edges and
/// holding at least two independent cycles, then identify everything
/// outside X into one vertex w, deleting the loops that creates at w.
/// The weight at w is the sum of the weights it swallows. Smallest means
/// fewest vertices, ties to the numerically smallest bitmask, so the
/// choice is a pure function of the input. After building, every proper
/// 3-cut avoiding w is checked to hug at most one cycle.
pub fn push_three_cut(wg: &WeightedGraph) -> Result<BulletGraph> {
    let g = &wg.graph;
    let n = g.num_vertices();
    if !g.is_subdivision_of_3ec() {
        return Err(Error::Precondition(
            "cut pushing needs a 2-edge-connected, cyclically 3-edge-connected graph".into(),
        ));
    }
    if n > 20 {
        return Err(Error::Precondition(
            "the cut scan enumerates vertex subsets and is capped at 20 vertices".into(),
        ));
    }
    let mut chosen = None;
    'sizes: for size in 1..n {
        let mut mask: u32 = (1 << size) - 1;
        while mask < 1 << n {
            let xs = VertexSet::from_iter((0..n).filter(|&v| mask >> v & 1 == 1));
            if g.cut_size(&xs)? == 3 && g.induced_cycle_rank(&xs)? >= 2 {
                chosen = Some(mask);
                break 'sizes;
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    let Some(mask) = chosen else {
        return Err(Error::NoQualifyingCut(
            "no vertex set is cut by three edges while holding two independent cycles".into(),
        ));
    };
    let xs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    let w = xs.len();
    let mut vertex_map = vec![w; n];
    for (i, &v) in xs.iter().enumerate() {
        vertex_map[v] = i;
    }
    let mut pairs = Vec::new();
    let mut edge_origin = Vec::new();
    let mut cut_edges = Vec::new();
    for e in 0..g.num_edges() {
        let (t, h) = wg.orientation.pair(e);
        let (bt, bh) = (vertex_map[t], vertex_map[h]);
        if bt == w && bh == w {
            continue;
        }
        if bt == w || bh == w {
            cut_edges.push(e);
        }
        edge_origin.push(e);
        pairs.push((bt, bh));
    }
    if cut_edges.len() != 3 {
        return Err(Error::InvariantViolation(format!(
            "the chosen cut has {} edges instead of 3",
            cut_edges.len()
        )));
    }
    let bullet = MultiGraph::new(w + 1, &pairs)?;
    let mut mu = vec![Z3(0); w + 1];
    for &v in &xs {
        mu[vertex_map[v]] = wg.mu_at(v);
    }
    mu[w] = (0..n)
        .filter(|&v| vertex_map[v] == w)
        .fold(Z3(0), |acc, v| acc + wg.mu_at(v));
    let orientation = bullet.default_orientation();
    let weighted = WeightedGraph::new(bullet, orientation, mu)?;
    let ledger = ledger_over(&weighted, |p| p.anchors.0 == w || p.anchors.1 == w)?;
    let flagged = ledger.entries.iter().filter(|e| e.unusable).count();
    if flagged != 3 {
        return Err(Error::InvariantViolation(format!(
            "expected three ears at the identified vertex, found {flagged}"
        )));
    }
    // identification must not leave any smaller 3-cut hugging two cycles
    let bg = &weighted.graph;
    let full: u32 = (1 << w) - 1;
    for zmask in 1..full {
        let zs = VertexSet::from_iter((0..w).filter(|&v| zmask >> v & 1 == 1));
        if bg.cut_size(&zs)? == 3 && bg.induced_cycle_rank(&zs)? >= 2 {
            return Err(Error::InvariantViolation(format!(
                "a proper 3-cut avoiding the identified vertex hugs two cycles (mask {zmask:#x})"
            )));
        }
    }
    Ok(BulletGraph {
        weighted,
        x_vertices: VertexSet::from_iter(xs.iter().copied()),
        cut_edges,
        w,
        vertex_map,
        edge_origin,
        ledger,
    })
}

/// Three branch vertices joined by three ears avoiding w, with exactly
/// three edges leaving the whole configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerTriangle {
    pub corners: [usize; 3],
    /// Ledger indices of the three side ears.
    pub ear_ids: [usize; 3],
    /// Corners plus every side-ear interior.
    pub vertices: VertexSet,
}

/// Detect the inner triangles of a bullet graph. Distinct inner
/// triangles must be vertex disjoint; overlap is an invariant violation.
pub fn inner_triangles(b: &BulletGraph) -> Result<Vec<InnerTriangle>> {
    let g = &b.weighted.graph;
    let ears = &b.ledger.ears;
    let eligible: Vec<usize> = (0..ears.len())
        .filter(|&i| {
            ears[i].kind == EarKind::OpenPath
                && ears[i].anchors.0 != b.w
                && ears[i].anchors.1 != b.w
        })
        .collect();
    let mut found: Vec<InnerTriangle> = Vec::new();
    for (p, &i) in eligible.iter().enumerate() {
        for (q, &j) in eligible.iter().enumerate().skip(p + 1) {
            for &k in &eligible[q + 1..] {
                let mut ends = [
                    ears[i].anchors.0,
                    ears[i].anchors.1,
                    ears[j].anchors.0,
                    ears[j].anchors.1,
                    ears[k].anchors.0,
                    ears[k].anchors.1,
                ];
                ends.sort();
                let triangle = ends[0] == ends[1]
                    && ends[2] == ends[3]
                    && ends[4] == ends[5]
                    && ends[1] != ends[2]
                    && ends[3] != ends[4];
                if !triangle {
                    continue;
                }
                let corners = [ends[0], ends[2], ends[4]];
                let mut vertices = VertexSet::from_iter(corners.iter().copied());
                for &ei in &[i, j, k] {
                    for &v in &ears[ei].interior {
                        vertices.insert(v);
                    }
                }
                if g.cut_size(&vertices)? != 3 {
                    continue;
                }
                found.push(InnerTriangle { corners, ear_ids: [i, j, k], vertices });
            }
        }
    }
    for a in 0..found.len() {
        for b2 in a + 1..found.len() {
            if found[a].vertices.iter().any(|&v| found[b2].vertices.contains(v)) {
                return Err(Error::InvariantViolation(format!(
                    "inner triangles {:?} and {:?} share vertices",
                    found[a].corners, found[b2].corners
                )));
            }
        }
    }
    Ok(found)
}

/// The sorted side residues of an inner triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriangleType {
    OneOneOne,
    OneOneTwo,
    TwoTwoTwo,
    /// A residue multiset outside the expected three, reported as data:
    /// any zero-residue side, or a {1,2,2} mix.
    Violation([u8; 3]),
}

/// Classify an inner triangle by the residues of its side ears.
pub fn classify_triangle(b: &BulletGraph, t: &InnerTriangle) -> Result<TriangleType> {
    if !inner_triangles(b)?.iter().any(|x| x == t) {
        return Err(Error::Precondition("not an inner triangle of this graph".into()));
    }
    let mut r = [0u8; 3];
    for (slot, &ei) in t.ear_ids.iter().enumerate() {
        r[slot] = (b.ledger.ears[ei].len() % 3) as u8;
    }
    r.sort();
    Ok(match r {
        [1, 1, 1] => TriangleType::OneOneOne,
        [1, 1, 2] => TriangleType::OneOneTwo,
        [2, 2, 2] => TriangleType::TwoTwoTwo,
        _ => TriangleType::Violation(r),
    })
}

/// Where a vertex of the triangle contraction came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaProvenance {
    /// A surviving branch vertex, by bullet id.
    Branch(usize),
    /// An inner triangle, by index.
    Triangle(usize),
}

/// The triangle contraction of a bullet graph: one edge per outer ear,
/// carrying that ear's length residue.
#[derive(Debug, Clone)]
pub struct DeltaGraph {
    pub graph: MultiGraph,
    pub provenance: Vec<DeltaProvenance>,
    pub triangles: Vec<InnerTriangle>,
    /// Ledger index of the outer ear each edge stands for.
    pub ear_of_edge: Vec<usize>,
    /// That ear's length mod 3.
    pub residues: Vec<u8>,
    pub cubic: bool,
    pub cyclically_four: bool,
}

/// Contract every inner triangle to a point and suppress the degree-2
/// interiors of the remaining ears. Conformance of the result (cubic,
/// cyclically 4-edge-connected) is reported, not required.
pub fn build_delta(b: &BulletGraph) -> Result<DeltaGraph> {
    let g = &b.weighted.graph;
    let triangles = inner_triangles(b)?;
    let mut triangle_of: Vec<Option<usize>> = vec![None; g.num_vertices()];
    for (t, tri) in triangles.iter().enumerate() {
        for &v in tri.vertices.iter() {
            triangle_of[v] = Some(t);
        }
    }
    let mut mid_of = vec![usize::MAX; g.num_vertices()];
    let mut provenance = Vec::new();
    let mut tri_node = vec![usize::MAX; triangles.len()];
    for v in 0..g.num_vertices() {
        match triangle_of[v] {
            None => {
                mid_of[v] = provenance.len();
                provenance.push(DeltaProvenance::Branch(v));
            }
            Some(t) => {
                if tri_node[t] == usize::MAX {
                    tri_node[t] = provenance.len();
                    provenance.push(DeltaProvenance::Triangle(t));
                }
                mid_of[v] = tri_node[t];
            }
        }
    }
    let mut side_edge = vec![false; g.num_edges()];
    for tri in &triangles {
        for &ei in &tri.ear_ids {
            for &e in &b.ledger.ears[ei].edges {
                side_edge[e] = true;
            }
        }
    }
    let mut pairs = Vec::new();
    let mut mid_origin = Vec::new();
    for (e, &on_side) in side_edge.iter().enumerate() {
        if on_side {
            continue;
        }
        let (t, h) = g.endpoints(e);
        pairs.push((mid_of[t], mid_of[h]));
        mid_origin.push(e);
    }
    let mid = MultiGraph::new(provenance.len(), &pairs)?;
    let (delta, map, chains) = mid.suppress_degree_two()?;
    let delta_provenance: Vec<DeltaProvenance> =
        map.vertex_new_to_old.iter().map(|&v| provenance[v]).collect();
    let mut ear_of_host_edge = vec![usize::MAX; g.num_edges()];
    for (i, ear) in b.ledger.ears.iter().enumerate() {
        for &e in &ear.edges {
            ear_of_host_edge[e] = i;
        }
    }
    let mut ear_of_edge = Vec::with_capacity(chains.len());
    let mut residues = Vec::with_capacity(chains.len());
    for chain in &chains {
        let hosts: BTreeSet<usize> =
            chain.iter().map(|&me| ear_of_host_edge[mid_origin[me]]).collect();
        if hosts.len() != 1 {
            return Err(Error::InvariantViolation(format!(
                "a contracted chain spans {} ears instead of one",
                hosts.len()
            )));
        }
        let ei = *hosts.iter().next().unwrap();
        if chain.len() != b.ledger.ears[ei].len() {
            return Err(Error::InvariantViolation(
                "a contracted chain covers only part of its ear".into(),
            ));
        }
        ear_of_edge.push(ei);
        residues.push((chain.len() % 3) as u8);
    }
    let cubic = delta.vertices().all(|v| delta.degree(v) == 3);
    let cyclically_four = delta.is_cyclically_k_edge_connected(4);
    Ok(DeltaGraph {
        graph: delta,
        provenance: delta_provenance,
        triangles,
        ear_of_edge,
        residues,
        cubic,
        cyclically_four,
    })
}

/// The optimum-against-bonus verdict for one weighted graph.
#[derive(Debug, Clone)]
pub struct WorkhorseReport {
    pub ledger: BonusLedger,
    pub bonus: i64,
    pub optimum: RatioReport,
    pub holds: bool,
    pub slack: i64,
}

/// Enumerate the true optimum and compare its gain to the bonus. The
/// claim quantifies over the whole boundary coset, so a budget too small
/// to finish is an error rather than a truncated answer.
pub fn workhorse_verify(wg: &WeightedGraph, budget: u128) -> Result<WorkhorseReport> {
    if !wg.graph.is_subdivision_of_3ec() {
        return Err(Error::Precondition(
            "the gain-bonus comparison needs a 2-edge-connected, cyclically 3-edge-connected graph"
                .into(),
        ));
    }
    let ledger = bonus_of(wg)?;
    let bonus = ledger.total();
    let optimum = max_support_flow(wg, &GroupSpec::z3(), budget)?;
    if !optimum.optimal {
        return Err(Error::BudgetExceeded { budget, coset_size: optimum.coset_size });
    }
    let slack = optimum.gain - bonus;
    Ok(WorkhorseReport { ledger, bonus, holds: slack >= 0, slack, optimum })
}

/// How boundary weights are chosen for each sweep instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuMode {
    /// Zero weights only.
    Zero,
    /// Every zero-sum weighting: 3^(n-1) of them.
    Exhaustive,
    /// `count` pseudorandom zero-sum weightings from a fixed seed.
    Sampled { seed: u64, count: usize },
}

impl MuMode {
    fn label(&self) -> String {
        match self {
            MuMode::Zero => "zero".into(),
            MuMode::Exhaustive => "exhaustive".into(),
            MuMode::Sampled { seed, count } => format!("sampled:{seed}:{count}"),
        }
    }
}

/// The zero-sum weightings to sweep for an n-vertex instance; Err gives
/// the reason the instance must be skipped instead.
fn mu_list(
    mode: &MuMode,
    n: usize,
    instance: usize,
) -> std::result::Result<Vec<Vec<Z3>>, String> {
    match *mode {
        MuMode::Zero => Ok(vec![vec![Z3(0); n]]),
        MuMode::Exhaustive => {
            if n == 0 {
                return Ok(vec![Vec::new()]);
            }
            if n > 9 {
                return Err(format!("exhaustive weighting space 3^{} is too large", n - 1));
            }
            let total = 3usize.pow((n - 1) as u32);
            let mut out = Vec::with_capacity(total);
            for idx in 0..total {
                let mut mu = Vec::with_capacity(n);
                let mut rest = idx;
                let mut sum = Z3(0);
                for _ in 0..n - 1 {
                    let r = Z3((rest % 3) as u8);
                    rest /= 3;
                    sum += r;
                    mu.push(r);
                }
                mu.push(-sum);
                out.push(mu);
            }
            Ok(out)
        }
        MuMode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed.wrapping_add((instance as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            );
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let mut mu = Vec::with_capacity(n);
                let mut sum = Z3(0);
                for _ in 0..n.saturating_sub(1) {
                    let r = Z3((rng.next_u32() % 3) as u8);
                    sum += r;
                    mu.push(r);
                }
                if n > 0 {
                    mu.push(-sum);
                }
                out.push(mu);
            }
            Ok(out)
        }
    }
}

/// One instance's row in a sweep summary.
#[derive(Debug, Clone, Serialize)]
pub struct SweepInstance {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub checks: u64,
    pub min_slack: Option<i64>,
    pub skipped: Option<String>,
}

/// A failed check, bundled with everything needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub name: String,
    pub mu: Vec<u8>,
    pub bonus: i64,
    pub gain: i64,
    pub slack: i64,
    pub certificate: CertificateJson,
}

/// A whole sweep: per-instance accounting, any failures, and the
/// tightest slack seen anywhere.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub schema: String,
    pub mode: String,
    pub instances: Vec<SweepInstance>,
    pub failures: Vec<SweepFailure>,
    pub checks: u64,
    pub min_slack: Option<i64>,
    pub tight: Vec<String>,
}

fn sweep_instance(
    index: usize,
    entry: &CatalogEntry,
    mode: &MuMode,
    budget: u128,
) -> Result<(SweepInstance, Vec<SweepFailure>)> {
    let g = &entry.graph;
    let mut inst = SweepInstance {
        name: entry.name.clone(),
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        checks: 0,
        min_slack: None,
        skipped: None,
    };
    let mut failures = Vec::new();
    if !g.is_subdivision_of_3ec() {
        inst.skipped = Some("not 2-edge-connected and cyclically 3-edge-connected".into());
        return Ok((inst, failures));
    }
    let mus = match mu_list(mode, g.num_vertices(), index) {
        Ok(m) => m,
        Err(reason) => {
            inst.skipped = Some(reason);
            return Ok((inst, failures));
        }
    };
    for mu in mus {
        let wg = WeightedGraph::new(g.clone(), g.default_orientation(), mu.clone())?;
        match workhorse_verify(&wg, budget) {
            Ok(report) => {
                inst.checks += 1;
                inst.min_slack =
                    Some(inst.min_slack.map_or(report.slack, |m: i64| m.min(report.slack)));
                if !report.holds {
                    failures.push(SweepFailure {
                        name: entry.name.clone(),
                        mu: mu.iter().map(|z| z.0).collect(),
                        bonus: report.bonus,
                        gain: report.optimum.gain,
                        slack: report.slack,
                        certificate: CertificateJson::from_certificate(&report.optimum.certificate),
                    });
                }
            }
            Err(Error::BudgetExceeded { coset_size, .. }) => {
                inst.skipped =
                    Some(format!("coset of {coset_size} labellings exceeds the budget of {budget}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((inst, failures))
}

/// Run the gain-bonus check over a catalog, one weighting at a time.
/// Instances that miss the hypotheses or the budget are skipped with a
/// reason. A failure would be a genuine counterexample and is dumped in
/// full. Instances shard across threads and the summary is assembled in
/// catalog order, so the output is deterministic.
pub fn counterexample_sweep(
    entries: &[CatalogEntry],
    mode: &MuMode,
    budget: u128,
) -> Result<SweepSummary> {
    let rows: Result<Vec<(SweepInstance, Vec<SweepFailure>)>> = entries
        .par_iter()
        .enumerate()
        .map(|(index, entry)| sweep_instance(index, entry, mode, budget))
        .collect();
    let mut summary = SweepSummary {
        schema: SWEEP_SCHEMA.to_string(),
        mode: mode.label(),
        instances: Vec::with_capacity(entries.len()),
        failures: Vec::new(),
        checks: 0,
        min_slack: None,
        tight: Vec::new(),
    };
    for (inst, fails) in rows? {
        summary.checks += inst.checks;
        if let Some(s) = inst.min_slack {
            if s == 0 {
                summary.tight.push(inst.name.clone());
            }
            summary.min_slack = Some(summary.min_slack.map_or(s, |m: i64| m.min(s)));
        }
        summary.failures.extend(fails);
        summary.instances.push(inst);
    }
    Ok(summary)
}

/// Whole-coset confirmation that doubly subdividing a 3-edge-connected
/// base with unit weights at the new vertices pins every solution to
/// support exactly two thirds.
#[derive(Debug, Clone, Serialize)]
pub struct TightnessReport {
    pub base_edges: usize,
    pub subdivided_edges: usize,
    pub coset_size: String,
    pub members: String,
    /// The support every solution is forced to: 2 per base edge.
    pub forced_support: usize,
    pub all_support_exact: bool,
    pub all_paths_three_valued: bool,
}

/// Enumerate every labelling with the subdivided instance's boundary and
/// check that each has support exactly 2/3 of the edges, with the three
/// edges of every subdivided path taking three distinct values.
pub fn verify_subdivision_tightness(base: &MultiGraph, budget: u128) -> Result<TightnessReport> {
    let inst = tightness_instance(base)?;
    let forced = 2 * inst.base_edges;
    let rank = inst.weighted.graph.cycle_rank();
    let mut coset: u128 = 1;
    for _ in 0..rank {
        coset = coset.saturating_mul(3);
    }
    let mut all_exact = true;
    let mut all_three = true;
    let members = for_each_member(&inst.weighted, &GroupSpec::z3(), budget, |values| {
        let support = values.iter().filter(|v| !v.is_zero()).count();
        if support != forced {
            all_exact = false;
        }
        for path in &inst.paths {
            let (a, b, c) = (values[path[0]].0[0], values[path[1]].0[0], values[path[2]].0[0]);
            if a == b || b == c || a == c {
                all_three = false;
                break;
            }
        }
        all_exact || all_three
    })?;
    Ok(TightnessReport {
        base_edges: inst.base_edges,
        subdivided_edges: inst.weighted.graph.num_edges(),
        coset_size: coset.to_string(),
        members: members.to_string(),
        forced_support: forced,
        all_support_exact: all_exact,
        all_paths_three_valued: all_three,
    })
}

/// A deletion witness found by the shallow search.
#[derive(Debug, Clone)]
pub struct ReducibleWitness {
    pub ears: Vec<Ear>,
    pub labellings: Vec<Vec<Z3>>,
    pub check: ReducibleCheck,
}

/// Try single ears and ordered ear pairs against the deletion check,
/// with every candidate labelling shift. Scans ears in partition order
/// and shifts upward, returning the first witness that holds, so the
/// result is deterministic. A convenience for poking at small graphs;
/// completeness is out of scope.
pub fn shallow_reducible_witness(wg: &WeightedGraph) -> Result<Option<ReducibleWitness>> {
    let chains = find_ears(&wg.graph);
    for ear in &chains {
        let Ok(lab) = ear_labellings(ear, wg.mu()) else { continue };
        for c in 0..3u8 {
            let psi: Vec<Z3> = lab.base.iter().map(|&b| b + Z3(c)).collect();
            let check = verify_reducible(wg, std::slice::from_ref(ear), std::slice::from_ref(&psi))?;
            if check.holds {
                return Ok(Some(ReducibleWitness {
                    ears: vec![ear.clone()],
                    labellings: vec![psi],
                    check,
                }));
            }
        }
    }
    for (sj, second) in chains.iter().enumerate() {
        let Ok(lab2) = ear_labellings(second, wg.mu()) else { continue };
        for c2 in 0..3u8 {
            let Ok(removal) = psi_removal(wg, second, &lab2, Z3(c2)) else { continue };
            for (fj, first) in chains.iter().enumerate() {
                if fj == sj {
                    continue;
                }
                let Some(translated) = translate_ear(first, &removal.map) else { continue };
                let Ok(lab1) = ear_labellings(&translated, removal.reduced.mu()) else { continue };
                for c1 in 0..3u8 {
                    let psi1: Vec<Z3> = lab1.base.iter().map(|&b| b + Z3(c1)).collect();
                    let psi2: Vec<Z3> = lab2.base.iter().map(|&b| b + Z3(c2)).collect();
                    let ears = vec![first.clone(), second.clone()];
                    let labellings = vec![psi1, psi2];
                    let check = verify_reducible(wg, &ears, &labellings)?;
                    if check.holds {
                        return Ok(Some(ReducibleWitness { ears, labellings, check }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A contraction witness found by the shallow search.
#[derive(Debug, Clone)]
pub struct ContractibleWitness {
    pub edges: BTreeSet<usize>,
    /// Ledger indices of the ears in the union.
    pub ear_ids: Vec<usize>,
    pub decomposition: EarDecomposition,
    pub check: ContractibleCheck,
}

/// Try unions of up to four ears as contraction candidates, smallest
/// unions first, decomposing each candidate canonically. A convenience;
/// larger unions and cleverer decompositions are out of scope.
pub fn shallow_contractible_witness(wg: &WeightedGraph) -> Result<Option<ContractibleWitness>> {
    let ledger = bonus_of(wg)?;
    let l = ledger.ears.len();
    for size in 1..=l.min(4) {
        let mut idx: Vec<usize> = (0..size).collect();
        'combos: loop {
            let mut edges = BTreeSet::new();
            for &i in &idx {
                edges.extend(ledger.ears[i].edges.iter().copied());
            }
            let (h, _) = ear_union_subgraph(&wg.graph, &edges)?;
            if h.num_edges() > 0 && h.is_k_edge_connected(2) {
                if let Ok(d) = find_ear_decomposition(&h) {
                    let check = verify_contractible(wg, &edges, &d)?;
                    if check.holds {
                        return Ok(Some(ContractibleWitness {
                            edges,
                            ear_ids: idx,
                            decomposition: d,
                            check,
                        }));
                    }
                }
            }
            let mut pos = size;
            while pos > 0 {
                pos -= 1;
                if idx[pos] < pos + l - size {
                    idx[pos] += 1;
                    for q in pos + 1..size {
                        idx[q] = idx[q - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
    Ok(None)
}
