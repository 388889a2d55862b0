//! Multigraphs with parallel edges and loops.
//!
//! Edge ids are dense integers assigned at construction and never reused;
//! every surgery (deletion, contraction, suppression) returns a fresh graph
//! together with a [`SurgeryMap`] relating old and new ids, so labellings
//! and certificates can be transported across a chain of operations without
//! guesswork.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Exhaustive cut enumeration is used up to this many vertices; larger
/// graphs switch to max-flow min-cut. Both paths agree on the overlap.
pub const EXHAUSTIVE_CUT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    num_vertices: usize,
    /// Endpoints in construction order; the pair doubles as the default
    /// orientation (tail, head). A loop has both entries equal.
    edges: Vec<(usize, usize)>,
    /// Per vertex: (edge id, slot). Loops contribute two entries.
    incidence: Vec<Vec<(usize, usize)>>,
}

impl MultiGraph {
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut incidence = vec![Vec::new(); num_vertices];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices {
                return Err(Error::UnknownVertex(u));
            }
            if v >= num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            incidence[u].push((id, 0));
            incidence[v].push((id, 1));
        }
        Ok(MultiGraph { num_vertices, edges: edges.to_vec(), incidence })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// Loops contribute 2 to the degree.
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Incident (edge id, slot) pairs in edge-id order; loops listed twice.
    pub fn incidence(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.num_vertices
    }

    pub fn default_orientation(&self) -> Orientation {
        Orientation { dir: self.edges.clone() }
    }

    pub fn edges_between(&self, u: usize, v: usize) -> usize {
        self.incidence[u]
            .iter()
            .filter(|&&(e, slot)| {
                if u == v {
                    self.is_loop(e) && slot == 0
                } else {
                    !self.is_loop(e) && self.other_end(e, u) == v
                }
            })
            .count()
    }

    /// Component index per vertex, components numbered by smallest vertex.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut next = 0;
        for start in 0..self.num_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &(e, _) in &self.incidence[v] {
                    let w = self.other_end(e, v);
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_components(&self) -> usize {
        self.component_ids().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Dimension of the cycle space: m - n + (number of components).
    pub fn cycle_rank(&self) -> usize {
        self.num_edges() + self.num_components() - self.num_vertices
    }

    pub fn is_eulerian(&self) -> bool {
        self.vertices().all(|v| self.degree(v).is_multiple_of(2))
    }

    /// Length of a shortest cycle: 1 for a loop, 2 for a parallel pair,
    /// otherwise BFS. None for forests.
    pub fn girth(&self) -> Option<usize> {
        if self.edges.iter().any(|&(u, v)| u == v) {
            return Some(1);
        }
        let mut best: Option<usize> = None;
        for v in self.vertices() {
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for &(e, _) in &self.incidence[v] {
                let w = self.other_end(e, v);
                if w > v && !seen.insert(w) {
                    best = Some(2);
                }
            }
        }
        if best.is_some() {
            return best;
        }
        // Simple-graph girth by BFS from each vertex.
        for s in self.vertices() {
            let mut dist = vec![usize::MAX; self.num_vertices];
            let mut parent_edge = vec![usize::MAX; self.num_vertices];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(e, _) in &self.incidence[v] {
                    let w = self.other_end(e, v);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent_edge[w] = e;
                        queue.push_back(w);
                    } else if parent_edge[v] != e {
                        let len = dist[v] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Size of the edge cut between `xs` and its complement. Loops are
    /// never counted; the empty set and the full vertex set both give 0.
    pub fn cut_size(&self, xs: &VertexSet) -> Result<usize> {
        let mut inside = vec![false; self.num_vertices];
        for &v in xs.iter() {
            if v >= self.num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            inside[v] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| inside[u] != inside[v])
            .count())
    }

    fn cut_size_mask(&self, mask: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1))
            .count()
    }

    /// Global edge connectivity by exhaustive cut enumeration. Intended
    /// for graphs with at most [`EXHAUSTIVE_CUT_LIMIT`] vertices.
    pub fn edge_connectivity_exhaustive(&self) -> usize {
        assert!(self.num_vertices <= 32, "exhaustive cut enumeration limit");
        if self.num_vertices <= 1 {
            return usize::MAX;
        }
        if !self.is_connected() {
            return 0;
        }
        // Every proper nonempty subset or its complement avoids the last
        // vertex, and cut sizes are complement-symmetric.
        let n = self.num_vertices;
        let mut best = usize::MAX;
        for mask in 1u32..(1 << (n - 1)) {
            best = best.min(self.cut_size_mask(mask));
        }
        best
    }

    /// Global edge connectivity as the minimum over max-flow values from a
    /// fixed source to every other vertex.
    pub fn edge_connectivity_maxflow(&self) -> usize {
        if self.num_vertices <= 1 {
            return usize::MAX;
        }
        if !self.is_connected() {
            return 0;
        }
        let n = self.num_vertices;
        let mut cap = vec![vec![0usize; n]; n];
        for &(u, v) in &self.edges {
            if u != v {
                cap[u][v] += 1;
                cap[v][u] += 1;
            }
        }
        let mut best = usize::MAX;
        for t in 1..n {
            best = best.min(max_flow(&cap, 0, t));
        }
        best
    }

    pub fn edge_connectivity(&self) -> usize {
        if self.num_vertices <= EXHAUSTIVE_CUT_LIMIT {
            self.edge_connectivity_exhaustive()
        } else {
            self.edge_connectivity_maxflow()
        }
    }

    /// Single-vertex graphs count as k-edge-connected for every k;
    /// disconnected graphs for none (k >= 1).
    pub fn is_k_edge_connected(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if self.num_vertices <= 1 {
            return true;
        }
        self.edge_connectivity() >= k
    }

    /// A graph is cyclically k-edge-connected when it is (k-1)-edge-
    /// connected and no edge cut of size < k separates two cycles. Checked
    /// exactly: given (k-1)-edge-connectivity, only cuts of size exactly
    /// k-1 can disconnect, and a violating cut exists iff some (k-1)-edge
    /// subset leaves at least two components containing cycles.
    pub fn is_cyclically_k_edge_connected(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if !self.is_k_edge_connected(k - 1) {
            return false;
        }
        if self.num_vertices <= 1 {
            return true;
        }
        let m = self.num_edges();
        if k == 1 {
            return self.cyclic_components(&[]) <= 1;
        }
        let mut subset: Vec<usize> = (0..k - 1).collect();
        if k - 1 > m {
            return true;
        }
        loop {
            if self.cyclic_components(&subset) >= 2 {
                return false;
            }
            // next (k-1)-combination of edge ids
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                if subset[i] + (k - 1 - i) < m {
                    subset[i] += 1;
                    for j in i + 1..k - 1 {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Number of components of G minus the given edges that contain a cycle.
    fn cyclic_components(&self, removed: &[usize]) -> usize {
        let mut gone = vec![false; self.num_edges()];
        for &e in removed {
            gone[e] = true;
        }
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut next = 0usize;
        let mut comp_edges = Vec::new();
        let mut comp_verts = Vec::new();
        for start in 0..self.num_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            let mut nv = 1usize;
            while let Some(v) = stack.pop() {
                for &(e, _) in &self.incidence[v] {
                    if gone[e] {
                        continue;
                    }
                    let w = self.other_end(e, v);
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        nv += 1;
                        stack.push(w);
                    }
                }
            }
            comp_verts.push(nv);
            comp_edges.push(0usize);
            next += 1;
        }
        for (e, &(u, _)) in self.edges.iter().enumerate() {
            if !gone[e] {
                comp_edges[comp[u]] += 1;
            }
        }
        (0..next)
            .filter(|&c| comp_edges[c] + 1 > comp_verts[c])
            .count()
    }

    /// True when the graph can be obtained from a 3-edge-connected graph
    /// by subdividing edges: equivalently, 2-edge-connected and cyclically
    /// 3-edge-connected. Cycles qualify (they subdivide a single loop).
    pub fn is_subdivision_of_3ec(&self) -> bool {
        self.is_k_edge_connected(2) && self.is_cyclically_k_edge_connected(3)
    }

    /// Cycle rank of the subgraph induced by `xs`.
    pub fn induced_cycle_rank(&self, xs: &VertexSet) -> Result<usize> {
        let mut inside = vec![false; self.num_vertices];
        for &v in xs.iter() {
            if v >= self.num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            inside[v] = true;
        }
        let mut edges = 0usize;
        for &(u, v) in &self.edges {
            if inside[u] && inside[v] {
                edges += 1;
            }
        }
        // components of the induced subgraph
        let mut seen = vec![false; self.num_vertices];
        let mut comps = 0usize;
        for &start in xs.iter() {
            if seen[start] {
                continue;
            }
            comps += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(e, _) in &self.incidence[v] {
                    let w = self.other_end(e, v);
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        Ok(edges + comps - xs.len())
    }

    /// Contract edge `e`: for a loop this just deletes the loop, otherwise
    /// the two endpoints are identified (keeping the smaller vertex id) and
    /// parallel copies of `e` become loops.
    pub fn contract_edge(&self, e: usize) -> Result<(MultiGraph, SurgeryMap)> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let (u, v) = self.edges[e];
        let keep_vertex = |w: usize| -> usize {
            if u == v {
                w
            } else if w == u.max(v) {
                u.min(v)
            } else {
                w
            }
        };
        let dropped = if u == v { None } else { Some(u.max(v)) };
        let mut vertex_old_to_new = vec![None; self.num_vertices];
        let mut vertex_new_to_old = Vec::new();
        for (w, slot) in vertex_old_to_new.iter_mut().enumerate() {
            if Some(w) == dropped {
                continue;
            }
            *slot = Some(vertex_new_to_old.len());
            vertex_new_to_old.push(w);
        }
        if let Some(d) = dropped {
            vertex_old_to_new[d] = vertex_old_to_new[keep_vertex(d)];
        }
        let mut edge_old_to_new = vec![None; self.num_edges()];
        let mut edge_new_to_old = Vec::new();
        let mut new_edges = Vec::new();
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            if id == e {
                continue;
            }
            edge_old_to_new[id] = Some(edge_new_to_old.len());
            edge_new_to_old.push(id);
            new_edges.push((
                vertex_old_to_new[keep_vertex(a)].unwrap(),
                vertex_old_to_new[keep_vertex(b)].unwrap(),
            ));
        }
        let graph = MultiGraph::new(vertex_new_to_old.len(), &new_edges)?;
        Ok((
            graph,
            SurgeryMap { edge_old_to_new, edge_new_to_old, vertex_old_to_new, vertex_new_to_old },
        ))
    }

    /// Delete the given edges, then drop every vertex that ends up
    /// isolated (including ones that were isolated already).
    pub fn delete_and_clean(&self, edges: &BTreeSet<usize>) -> Result<(MultiGraph, SurgeryMap)> {
        for &e in edges {
            if e >= self.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
        }
        let mut degree = vec![0usize; self.num_vertices];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if !edges.contains(&id) {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let mut vertex_old_to_new = vec![None; self.num_vertices];
        let mut vertex_new_to_old = Vec::new();
        for v in 0..self.num_vertices {
            if degree[v] > 0 {
                vertex_old_to_new[v] = Some(vertex_new_to_old.len());
                vertex_new_to_old.push(v);
            }
        }
        let mut edge_old_to_new = vec![None; self.num_edges()];
        let mut edge_new_to_old = Vec::new();
        let mut new_edges = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if edges.contains(&id) {
                continue;
            }
            edge_old_to_new[id] = Some(edge_new_to_old.len());
            edge_new_to_old.push(id);
            new_edges.push((vertex_old_to_new[u].unwrap(), vertex_old_to_new[v].unwrap()));
        }
        let graph = MultiGraph::new(vertex_new_to_old.len(), &new_edges)?;
        Ok((
            graph,
            SurgeryMap { edge_old_to_new, edge_new_to_old, vertex_old_to_new, vertex_new_to_old },
        ))
    }

    /// Replace every maximal chain through degree-2 vertices by a single
    /// edge. Returns the new graph, the id bookkeeping, and for every new
    /// edge the replaced chain as an ordered list of old edge ids (single
    /// edges map to themselves). A component consisting solely of degree-2
    /// vertices has no anchor to keep and is an error.
    pub fn suppress_degree_two(&self) -> Result<(MultiGraph, SurgeryMap, Vec<Vec<usize>>)> {
        let comp = self.component_ids();
        let mut comp_has_anchor = vec![false; self.num_components()];
        let mut comp_has_edge = vec![false; self.num_components()];
        for v in 0..self.num_vertices {
            if self.degree(v) != 2 {
                comp_has_anchor[comp[v]] = true;
            }
            if self.degree(v) > 0 {
                comp_has_edge[comp[v]] = true;
            }
        }
        if let Some(v) = (0..self.num_vertices)
            .find(|&v| comp_has_edge[comp[v]] && !comp_has_anchor[comp[v]])
        {
            return Err(Error::CycleComponent(v));
        }

        let mut vertex_old_to_new = vec![None; self.num_vertices];
        let mut vertex_new_to_old = Vec::new();
        for (v, slot) in vertex_old_to_new.iter_mut().enumerate() {
            if self.degree(v) != 2 {
                *slot = Some(vertex_new_to_old.len());
                vertex_new_to_old.push(v);
            }
        }

        let mut edge_old_to_new = vec![None; self.num_edges()];
        let mut edge_new_to_old = Vec::new();
        let mut new_edges = Vec::new();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut used = vec![false; self.num_edges()];

        for &start in &vertex_new_to_old {
            for &(first, _) in &self.incidence[start] {
                if used[first] {
                    continue;
                }
                // walk away from the anchor through degree-2 vertices
                let mut chain = vec![first];
                used[first] = true;
                let mut prev_edge = first;
                let mut cur = self.other_end(first, start);
                while self.degree(cur) == 2 {
                    let &(next, _) = self.incidence[cur]
                        .iter()
                        .find(|&&(e, _)| e != prev_edge)
                        .expect("degree-2 vertex has a second edge");
                    chain.push(next);
                    used[next] = true;
                    prev_edge = next;
                    cur = self.other_end(next, cur);
                }
                let new_id = new_edges.len();
                if chain.len() == 1 {
                    // keep the original orientation for untouched edges
                    let (a, b) = self.edges[first];
                    new_edges.push((vertex_old_to_new[a].unwrap(), vertex_old_to_new[b].unwrap()));
                } else {
                    new_edges
                        .push((vertex_old_to_new[start].unwrap(), vertex_old_to_new[cur].unwrap()));
                }
                for &e in &chain {
                    edge_old_to_new[e] = Some(new_id);
                }
                edge_new_to_old.push(chain[0]);
                chains.push(chain);
            }
        }

        let graph = MultiGraph::new(vertex_new_to_old.len(), &new_edges)?;
        Ok((
            graph,
            SurgeryMap { edge_old_to_new, edge_new_to_old, vertex_old_to_new, vertex_new_to_old },
            chains,
        ))
    }

    /// Orient the edges marked `active` so that every vertex has equal
    /// in- and out-degree within the active subgraph. Requires every
    /// vertex to have even active degree. Returns per-edge forward flags
    /// (true = keep stored orientation); inactive edges stay true.
    pub fn eulerian_orientation(&self, active: &[bool]) -> Result<Vec<bool>> {
        assert_eq!(active.len(), self.num_edges());
        for v in self.vertices() {
            let d = self.incidence[v].iter().filter(|&&(e, _)| active[e]).count();
            if d % 2 != 0 {
                return Err(Error::Precondition(format!(
                    "vertex {v} has odd degree in the active subgraph"
                )));
            }
        }
        let mut forward = vec![true; self.num_edges()];
        let mut used = vec![false; self.num_edges()];
        for start in self.vertices() {
            loop {
                // Hierholzer: peel circuits until the start vertex is exhausted.
                let begin = self.incidence[start]
                    .iter()
                    .find(|&&(e, _)| active[e] && !used[e]);
                let Some(&(first, slot)) = begin else { break };
                used[first] = true;
                forward[first] = slot == 0;
                let mut cur = if slot == 0 { self.edges[first].1 } else { self.edges[first].0 };
                while cur != start {
                    let &(e, slot) = self.incidence[cur]
                        .iter()
                        .find(|&&(e, _)| active[e] && !used[e])
                        .expect("even active degree guarantees a continuation");
                    used[e] = true;
                    forward[e] = slot == 0;
                    cur = if slot == 0 { self.edges[e].1 } else { self.edges[e].0 };
                }
            }
        }
        Ok(forward)
    }
}

/// Max flow between s and t over symmetric integer capacities
/// (Edmonds-Karp).
fn max_flow(cap: &[Vec<usize>], s: usize, t: usize) -> usize {
    let n = cap.len();
    let mut residual: Vec<Vec<isize>> =
        cap.iter().map(|row| row.iter().map(|&c| c as isize).collect()).collect();
    let mut total = 0usize;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if parent[w] == usize::MAX && residual[v][w] > 0 {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            return total;
        }
        let mut bottleneck = isize::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(residual[parent[v]][v]);
            v = parent[v];
        }
        let mut v = t;
        while v != s {
            residual[parent[v]][v] -= bottleneck;
            residual[v][parent[v]] += bottleneck;
            v = parent[v];
        }
        total += bottleneck as usize;
    }
}

/// An explicit orientation: (tail, head) per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    dir: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(g: &MultiGraph, dir: Vec<(usize, usize)>) -> Result<Self> {
        if dir.len() != g.num_edges() {
            return Err(Error::Precondition("orientation length mismatch".into()));
        }
        for (e, &(t, h)) in dir.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            if (t, h) != (a, b) && (t, h) != (b, a) {
                return Err(Error::Precondition(format!(
                    "orientation of edge {e} does not match its endpoints"
                )));
            }
        }
        Ok(Orientation { dir })
    }

    pub fn tail(&self, e: usize) -> usize {
        self.dir[e].0
    }

    pub fn head(&self, e: usize) -> usize {
        self.dir[e].1
    }

    pub fn pair(&self, e: usize) -> (usize, usize) {
        self.dir[e]
    }

    pub fn len(&self) -> usize {
        self.dir.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dir.is_empty()
    }

    pub fn reversed(&self, e: usize) -> Orientation {
        let mut dir = self.dir.clone();
        dir[e] = (dir[e].1, dir[e].0);
        Orientation { dir }
    }
}

/// Old/new id bookkeeping produced by every graph surgery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryMap {
    pub edge_old_to_new: Vec<Option<usize>>,
    pub edge_new_to_old: Vec<usize>,
    pub vertex_old_to_new: Vec<Option<usize>>,
    pub vertex_new_to_old: Vec<usize>,
}

impl SurgeryMap {
    /// Compose with a later surgery applied to this map's output graph,
    /// giving a single map from the original ids to the final ids.
    pub fn compose(&self, later: &SurgeryMap) -> SurgeryMap {
        SurgeryMap {
            edge_old_to_new: self
                .edge_old_to_new
                .iter()
                .map(|o| o.and_then(|mid| later.edge_old_to_new[mid]))
                .collect(),
            edge_new_to_old: later
                .edge_new_to_old
                .iter()
                .map(|&mid| self.edge_new_to_old[mid])
                .collect(),
            vertex_old_to_new: self
                .vertex_old_to_new
                .iter()
                .map(|o| o.and_then(|mid| later.vertex_old_to_new[mid]))
                .collect(),
            vertex_new_to_old: later
                .vertex_new_to_old
                .iter()
                .map(|&mid| self.vertex_new_to_old[mid])
                .collect(),
        }
    }

    pub fn identity(g: &MultiGraph) -> SurgeryMap {
        SurgeryMap {
            edge_old_to_new: (0..g.num_edges()).map(Some).collect(),
            edge_new_to_old: (0..g.num_edges()).collect(),
            vertex_old_to_new: (0..g.num_vertices()).map(Some).collect(),
            vertex_new_to_old: (0..g.num_vertices()).collect(),
        }
    }
}

/// A set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &usize> {
        self.0.iter()
    }

    pub fn complement(&self, n: usize) -> VertexSet {
        VertexSet((0..n).filter(|v| !self.0.contains(v)).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> MultiGraph {
        MultiGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn theta() -> MultiGraph {
        MultiGraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    fn cycle(n: usize) -> MultiGraph {
        MultiGraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cut_sizes_on_k4() {
        let g = k4();
        assert_eq!(g.cut_size(&VertexSet::from_iter([0])).unwrap(), 3);
        assert_eq!(g.cut_size(&VertexSet::from_iter([0, 1])).unwrap(), 4);
        assert_eq!(g.cut_size(&VertexSet::from_iter([0, 1, 2, 3])).unwrap(), 0);
        assert_eq!(g.cut_size(&VertexSet::new()).unwrap(), 0);
        assert!(g.cut_size(&VertexSet::from_iter([7])).is_err());
    }

    #[test]
    fn loops_never_cross_a_cut() {
        let g = MultiGraph::new(2, &[(0, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(g.cut_size(&VertexSet::from_iter([0])).unwrap(), 2);
        assert_eq!(g.degree(0), 4);
    }

    #[test]
    fn cut_complement_symmetry() {
        let g = k4();
        let x = VertexSet::from_iter([1, 3]);
        assert_eq!(
            g.cut_size(&x).unwrap(),
            g.cut_size(&x.complement(g.num_vertices())).unwrap()
        );
    }

    #[test]
    fn connectivity_basics() {
        assert!(k4().is_k_edge_connected(3));
        assert!(!k4().is_k_edge_connected(4));
        assert!(theta().is_k_edge_connected(3));
        assert!(!cycle(5).is_k_edge_connected(3));
        assert!(cycle(5).is_k_edge_connected(2));
        let disconnected = MultiGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!disconnected.is_k_edge_connected(1));
        let single = MultiGraph::new(1, &[]).unwrap();
        assert!(single.is_k_edge_connected(17));
    }

    #[test]
    fn connectivity_paths_agree() {
        let graphs = [k4(), theta(), cycle(6), MultiGraph::new(3, &[(0, 1), (1, 2)]).unwrap()];
        for g in &graphs {
            assert_eq!(g.edge_connectivity_exhaustive(), g.edge_connectivity_maxflow());
        }
    }

    #[test]
    fn cyclic_connectivity_examples() {
        // Two triangles joined by a 3-edge matching: the matching separates
        // two cycles.
        let prism = MultiGraph::new(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        assert!(prism.is_cyclically_k_edge_connected(3));
        assert!(!prism.is_cyclically_k_edge_connected(4));
        // K4 has no two vertex-disjoint cycles, so the cut condition is
        // vacuous at every k; only plain connectivity limits it.
        assert!(k4().is_cyclically_k_edge_connected(4));
        assert!(!k4().is_cyclically_k_edge_connected(5));
        assert!(cycle(7).is_cyclically_k_edge_connected(3));
    }

    #[test]
    fn subdivision_of_3ec_recognition() {
        assert!(k4().is_subdivision_of_3ec());
        assert!(theta().is_subdivision_of_3ec());
        assert!(cycle(9).is_subdivision_of_3ec());
        // two triangles sharing a bridge
        let bridged = MultiGraph::new(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)],
        )
        .unwrap();
        assert!(!bridged.is_subdivision_of_3ec());
        // two triangles joined by a 2-edge bond: 2-edge-connected but the
        // bond separates cycles
        let bonded = MultiGraph::new(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4)],
        )
        .unwrap();
        assert!(bonded.is_k_edge_connected(2));
        assert!(!bonded.is_subdivision_of_3ec());
    }

    #[test]
    fn contract_edge_of_k4() {
        let (g, map) = k4().contract_edge(0).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 5);
        let mut mult = Vec::new();
        for u in 0..3 {
            for v in u..3 {
                let c = g.edges_between(u, v);
                if c > 0 {
                    mult.push(c);
                }
            }
        }
        mult.sort();
        assert_eq!(mult, vec![1, 2, 2]);
        assert_eq!(map.edge_old_to_new[0], None);
        assert_eq!(map.edge_new_to_old.len(), 5);
    }

    #[test]
    fn contract_parallel_pair_leaves_loop() {
        let g = MultiGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let (h, _) = g.contract_edge(0).unwrap();
        assert_eq!(h.num_vertices(), 1);
        assert_eq!(h.num_edges(), 1);
        assert!(h.is_loop(0));
    }

    #[test]
    fn contract_loop_deletes_it() {
        let g = MultiGraph::new(2, &[(0, 0), (0, 1), (0, 1)]).unwrap();
        let (h, map) = g.contract_edge(0).unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(map.vertex_new_to_old, vec![0, 1]);
    }

    #[test]
    fn delete_and_clean_drops_isolated() {
        let g = theta();
        let (h, _) = g.delete_and_clean(&BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(h.num_vertices(), 0);
        assert_eq!(h.num_edges(), 0);

        let tri = cycle(3);
        let (h, map) = tri.delete_and_clean(&BTreeSet::from([0])).unwrap();
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(map.edge_old_to_new, vec![None, Some(0), Some(1)]);

        // deleting the star of a K4 vertex leaves a triangle
        let (h, map) = k4().delete_and_clean(&BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(h.num_edges(), 3);
        assert_eq!(map.vertex_old_to_new[0], None);
    }

    #[test]
    fn suppress_is_identity_on_cubic() {
        let g = k4();
        let (h, _, chains) = g.suppress_degree_two().unwrap();
        assert_eq!(h.num_vertices(), 4);
        assert_eq!(h.num_edges(), 6);
        assert!(chains.iter().all(|c| c.len() == 1));
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn suppress_subdivided_theta() {
        // theta with one strand subdivided twice: 0-2-3-1 plus two direct edges
        let g = MultiGraph::new(4, &[(0, 2), (2, 3), (3, 1), (0, 1), (0, 1)]).unwrap();
        let (h, map, chains) = g.suppress_degree_two().unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.num_edges(), 3);
        let long = chains.iter().find(|c| c.len() == 3).unwrap();
        assert_eq!(long, &vec![0, 1, 2]);
        assert_eq!(map.vertex_new_to_old, vec![0, 1]);
    }

    #[test]
    fn suppress_rejects_pure_cycle_component() {
        assert!(matches!(
            cycle(5).suppress_degree_two(),
            Err(Error::CycleComponent(_))
        ));
        // a lone loop is a cycle of one degree-2 vertex
        let g = MultiGraph::new(1, &[(0, 0)]).unwrap();
        assert!(g.suppress_degree_two().is_err());
    }

    #[test]
    fn suppress_anchored_cycle_becomes_loop() {
        // triangle 1-2-3 hanging at vertex 1, which also has a pendant
        // edge to 0; both 0 (degree 1) and 1 (degree 3) are anchors
        let g = MultiGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        let (h, _, chains) = g.suppress_degree_two().unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(h.edges().iter().filter(|&&(u, v)| u == v).count(), 1);
        assert!(chains.iter().any(|c| c.len() == 3));
        assert!(chains.iter().any(|c| c == &vec![0]));
    }

    #[test]
    fn eulerian_orientation_balances() {
        let g = cycle(6);
        let fwd = g.eulerian_orientation(&[true; 6]).unwrap();
        for v in g.vertices() {
            let mut balance = 0i32;
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                let (t, h) = if fwd[e] { (a, b) } else { (b, a) };
                if t == v {
                    balance += 1;
                }
                if h == v {
                    balance -= 1;
                }
            }
            assert_eq!(balance, 0);
        }
        assert!(k4().eulerian_orientation(&[true; 6]).is_err());
    }

    #[test]
    fn girth_examples() {
        assert_eq!(k4().girth(), Some(3));
        assert_eq!(theta().girth(), Some(2));
        assert_eq!(MultiGraph::new(1, &[(0, 0)]).unwrap().girth(), Some(1));
        assert_eq!(MultiGraph::new(3, &[(0, 1), (1, 2)]).unwrap().girth(), None);
        assert_eq!(cycle(5).girth(), Some(5));
    }

    #[test]
    fn surgery_map_composition() {
        let g = k4();
        let (h, m1) = g.delete_and_clean(&BTreeSet::from([5])).unwrap();
        let (_, m2) = h.delete_and_clean(&BTreeSet::from([0])).unwrap();
        let both = m1.compose(&m2);
        assert_eq!(both.edge_old_to_new[5], None);
        assert_eq!(both.edge_old_to_new[0], None);
        assert_eq!(both.edge_new_to_old.len(), 4);
        assert_eq!(both.edge_new_to_old[0], 1);
    }
}
