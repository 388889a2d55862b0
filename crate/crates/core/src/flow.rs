//! Edge labellings, boundaries, and flow certificates.
//!
//! The boundary of a labelling phi at a vertex v is the sum of phi over
//! edges directed out of v minus the sum over edges directed into v; a
//! labelling is a flow with boundary mu when that equals mu everywhere.
//! Loops never contribute. Support is the set of edges with nonzero value,
//! and the gain of a labelling on m edges with support s is 24*s - 16*m,
//! which is positive exactly when s/m exceeds 2/3.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Orientation};
use crate::group::{GroupElem, GroupSpec, Z3};
use crate::report::Ratio;

/// A group-valued labelling of every edge, indexed by edge id. Values are
/// stored relative to the host orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabelling {
    group: GroupSpec,
    values: Vec<GroupElem>,
}

impl EdgeLabelling {
    pub fn new(group: GroupSpec, values: Vec<GroupElem>) -> Self {
        EdgeLabelling { group, values }
    }

    pub fn zero(group: GroupSpec, num_edges: usize) -> Self {
        let z = group.zero();
        EdgeLabelling { group, values: vec![z; num_edges] }
    }

    pub fn from_z3(values: &[Z3]) -> Self {
        EdgeLabelling {
            group: GroupSpec::z3(),
            values: values.iter().map(|z| z.to_elem()).collect(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    pub fn get(&self, e: usize) -> GroupElem {
        self.values[e]
    }

    pub fn set(&mut self, e: usize, v: GroupElem) {
        self.values[e] = v;
    }

    pub fn support(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn support_edges(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| !self.values[e].is_zero()).collect()
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    /// The Z3 residue per edge; errors for other groups.
    pub fn z3_values(&self) -> Result<Vec<Z3>> {
        if self.group != GroupSpec::z3() {
            return Err(Error::GroupMismatch(format!(
                "expected Z3 labelling, got {}",
                self.group
            )));
        }
        Ok(self.values.iter().map(|v| Z3(v.0[0])).collect())
    }
}

/// An integer-valued flow with all magnitudes below `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerFlow {
    pub k: i64,
    pub values: Vec<i64>,
}

impl IntegerFlow {
    pub fn support(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }
}

/// Sum at each vertex of outgoing minus incoming values.
pub fn boundary(g: &MultiGraph, o: &Orientation, phi: &EdgeLabelling) -> Result<Vec<GroupElem>> {
    if phi.values.len() != g.num_edges() || o.len() != g.num_edges() {
        return Err(Error::Precondition("labelling domain mismatch".into()));
    }
    let group = &phi.group;
    let mut out = vec![group.zero(); g.num_vertices()];
    for e in 0..g.num_edges() {
        let (t, h) = o.pair(e);
        let v = phi.values[e];
        out[t] = group.add(out[t], v);
        out[h] = group.sub(out[h], v);
    }
    Ok(out)
}

pub fn integer_boundary(g: &MultiGraph, o: &Orientation, f: &IntegerFlow) -> Result<Vec<i64>> {
    if f.values.len() != g.num_edges() {
        return Err(Error::Precondition("labelling domain mismatch".into()));
    }
    let mut out = vec![0i64; g.num_vertices()];
    for e in 0..g.num_edges() {
        let (t, h) = o.pair(e);
        out[t] += f.values[e];
        out[h] -= f.values[e];
    }
    Ok(out)
}

/// A multigraph with an orientation and Z3 vertex weights summing to zero.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    pub graph: MultiGraph,
    pub orientation: Orientation,
    mu: Vec<Z3>,
}

impl WeightedGraph {
    pub fn new(graph: MultiGraph, orientation: Orientation, mu: Vec<Z3>) -> Result<Self> {
        if mu.len() != graph.num_vertices() {
            return Err(Error::Precondition("weight vector length mismatch".into()));
        }
        if orientation.len() != graph.num_edges() {
            return Err(Error::Precondition("orientation length mismatch".into()));
        }
        let total = mu.iter().fold(Z3::ZERO, |a, &b| a + b);
        if !total.is_zero() {
            return Err(Error::NonZeroWeightSum);
        }
        Ok(WeightedGraph { graph, orientation, mu })
    }

    /// Zero weights and the default orientation.
    pub fn zero(graph: MultiGraph) -> Self {
        let orientation = graph.default_orientation();
        let mu = vec![Z3::ZERO; graph.num_vertices()];
        WeightedGraph { graph, orientation, mu }
    }

    pub fn mu(&self) -> &[Z3] {
        &self.mu
    }

    pub fn mu_at(&self, v: usize) -> Z3 {
        self.mu[v]
    }
}

pub fn gain(support: usize, num_edges: usize) -> i64 {
    24 * support as i64 - 16 * num_edges as i64
}

/// The values carried by a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabellingData {
    Modular(EdgeLabelling),
    Integer(IntegerFlow),
}

/// A self-contained, recheckable record of a labelling and its claimed
/// properties. Everything in it can be recomputed from the edges, the
/// weights, and the values alone.
#[derive(Debug, Clone)]
pub struct FlowCertificate {
    pub data: LabellingData,
    /// Oriented endpoint pairs by edge id.
    pub edges: Vec<(usize, usize)>,
    pub mu: Vec<Z3>,
    pub boundary_ok: bool,
    pub support: usize,
    pub gain: i64,
    pub ratio: Ratio,
}

/// Check whether `phi` has boundary equal to the vertex weights and wrap
/// the result in a certificate. Z3 labellings are compared against mu
/// directly; any other group requires mu to be identically zero.
pub fn is_flow_with_boundary(wg: &WeightedGraph, phi: &EdgeLabelling) -> Result<FlowCertificate> {
    let g = &wg.graph;
    if phi.values.len() != g.num_edges() {
        return Err(Error::Precondition("labelling domain mismatch".into()));
    }
    let z3 = phi.group == GroupSpec::z3();
    if !z3 && wg.mu.iter().any(|m| !m.is_zero()) {
        return Err(Error::GroupMismatch(format!(
            "nonzero weights require a Z3 labelling, got {}",
            phi.group
        )));
    }
    let bounds = boundary(g, &wg.orientation, phi)?;
    let boundary_ok = bounds.iter().enumerate().all(|(v, b)| {
        if z3 {
            *b == wg.mu[v].to_elem()
        } else {
            b.is_zero()
        }
    });
    let support = phi.support();
    Ok(FlowCertificate {
        data: LabellingData::Modular(phi.clone()),
        edges: (0..g.num_edges()).map(|e| wg.orientation.pair(e)).collect(),
        mu: wg.mu.clone(),
        boundary_ok,
        support,
        gain: gain(support, g.num_edges()),
        ratio: Ratio::of_support(support, g.num_edges()),
    })
}

/// Certify an integer flow (zero boundary, magnitudes below its bound).
pub fn certify_integer_flow(wg: &WeightedGraph, f: &IntegerFlow) -> Result<FlowCertificate> {
    let g = &wg.graph;
    if wg.mu.iter().any(|m| !m.is_zero()) {
        return Err(Error::GroupMismatch(
            "integer certificates require zero vertex weights".into(),
        ));
    }
    let bounds = integer_boundary(g, &wg.orientation, f)?;
    let boundary_ok =
        bounds.iter().all(|&b| b == 0) && f.values.iter().all(|&v| v.abs() < f.k);
    let support = f.support();
    Ok(FlowCertificate {
        data: LabellingData::Integer(f.clone()),
        edges: (0..g.num_edges()).map(|e| wg.orientation.pair(e)).collect(),
        mu: wg.mu.clone(),
        boundary_ok,
        support,
        gain: gain(support, g.num_edges()),
        ratio: Ratio::of_support(support, g.num_edges()),
    })
}

/// Turn a Z3-flow into an integer flow with values in {-2,...,2}, equal
/// support, and matching residues.
///
/// Start from the representative values in {0,1,2}; the integer boundary
/// is then divisible by 3 everywhere and sums to zero. While a vertex with
/// positive boundary exists, chase a path to a negative-boundary vertex
/// along support edges whose value can absorb a 3-unit push without
/// leaving {-2,-1,1,2}, and apply it. Such a path always exists: summing
/// boundaries over the set reachable through pushable edges gives a
/// nonpositive total as every support edge on its rim points inward.
pub fn lift_modular_to_integer(
    g: &MultiGraph,
    o: &Orientation,
    phi: &EdgeLabelling,
) -> Result<IntegerFlow> {
    let residues = phi.z3_values()?;
    let bounds = boundary(g, o, phi)?;
    if bounds.iter().any(|b| !b.is_zero()) {
        return Err(Error::Precondition("labelling is not a flow".into()));
    }
    let mut f: Vec<i64> = residues.iter().map(|z| z.0 as i64).collect();
    let mut bal = vec![0i64; g.num_vertices()];
    for (e, &fv) in f.iter().enumerate() {
        let (t, h) = o.pair(e);
        bal[t] += fv;
        bal[h] -= fv;
    }
    let guard = bal.iter().filter(|&&b| b > 0).sum::<i64>() / 3 + 1;
    for _ in 0..guard {
        let Some(source) = (0..g.num_vertices()).find(|&v| bal[v] > 0) else {
            break;
        };
        // BFS over pushable edges: from x we may push 3 units along a
        // positive edge leaving x or a negative edge entering x.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.num_vertices()];
        let mut seen = vec![false; g.num_vertices()];
        seen[source] = true;
        let mut queue = std::collections::VecDeque::from([source]);
        let mut sink = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &(e, _) in g.incidence(x) {
                if g.is_loop(e) {
                    continue;
                }
                let (t, h) = o.pair(e);
                let y = if t == x { h } else { t };
                let pushable = if t == x { f[e] > 0 } else { f[e] < 0 };
                if pushable && !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    if bal[y] < 0 {
                        sink = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        let Some(mut v) = sink else {
            return Err(Error::InvariantViolation(
                "no push path from a positive-boundary vertex".into(),
            ));
        };
        bal[v] += 3;
        bal[source] -= 3;
        while let Some((x, e)) = parent[v] {
            if o.tail(e) == x {
                f[e] -= 3;
            } else {
                f[e] += 3;
            }
            v = x;
        }
    }
    if bal.iter().any(|&b| b != 0) {
        return Err(Error::InvariantViolation("push budget exhausted".into()));
    }
    let lifted = IntegerFlow { k: 3, values: f };
    debug_assert!(lifted.values.iter().all(|&v| v.abs() <= 2));
    debug_assert!(lifted
        .values
        .iter()
        .zip(&residues)
        .all(|(&v, &r)| v.rem_euclid(3) as u8 == r.0));
    debug_assert_eq!(lifted.support(), phi.support());
    Ok(lifted)
}

/// The four inverse-pair classes of nonzero Z3xZ3 values, in order:
/// {(0,1),(0,2)}, {(1,0),(2,0)}, {(1,1),(2,2)}, {(1,2),(2,1)}.
pub fn pair_class_counts(phi: &EdgeLabelling) -> Result<[usize; 4]> {
    if phi.group != GroupSpec::z3z3() {
        return Err(Error::GroupMismatch(format!(
            "pair classes are defined for Z3xZ3, got {}",
            phi.group
        )));
    }
    let mut counts = [0usize; 4];
    for (e, v) in phi.values.iter().enumerate() {
        let class = match (v.0[0], v.0[1]) {
            (0, 0) => {
                return Err(Error::Precondition(format!(
                    "labelling has a zero value on edge {e}"
                )))
            }
            (0, _) => 0,
            (_, 0) => 1,
            (a, b) if a == b => 2,
            _ => 3,
        };
        counts[class] += 1;
    }
    Ok(counts)
}
