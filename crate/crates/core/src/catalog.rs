//! Graph generators and interchange formats.
//!
//! Named graphs and parametric families cover the instances the sweeps and
//! bound checks need; tripod unions realize the family whose best 3-flow
//! support ratio is exactly 5/6. Text formats: a plain edge list, graph6
//! for simple-graph catalogs (read only), and one-line-per-entry catalog
//! manifests.

use crate::error::{Error, Result};
use crate::flow::WeightedGraph;
use crate::graph::MultiGraph;
use crate::group::Z3;
use std::path::Path;

/// Build one of the fixed named graphs.
pub fn named(name: &str) -> Result<MultiGraph> {
    match name {
        "theta" => MultiGraph::new(2, &[(0, 1), (0, 1), (0, 1)]),
        "k4" => complete(4),
        "k5" => complete(5),
        "k6" => complete(6),
        "k33" => complete_bipartite(3, 3),
        "k34" => complete_bipartite(3, 4),
        "prism" => circular_ladder(3),
        "cube" => circular_ladder(4),
        "v8" => moebius_ladder(4),
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
            }
            for i in 0..5 {
                edges.push((i, 5 + i));
            }
            for i in 0..5 {
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            MultiGraph::new(10, &edges)
        }
        "heawood" => {
            let mut edges = Vec::new();
            for i in 0..14 {
                edges.push((i, (i + 1) % 14));
            }
            for i in (0..14).step_by(2) {
                edges.push((i, (i + 5) % 14));
            }
            MultiGraph::new(14, &edges)
        }
        _ => Err(Error::Precondition(format!("unknown named graph {name}"))),
    }
}

pub const NAMED_GRAPHS: &[&str] =
    &["theta", "k4", "k5", "k6", "k33", "k34", "prism", "cube", "v8", "petersen", "heawood"];

pub fn cycle(n: usize) -> Result<MultiGraph> {
    if n == 0 {
        return Err(Error::Precondition("cycle needs at least 1 vertex".into()));
    }
    MultiGraph::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn complete(n: usize) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    MultiGraph::new(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<MultiGraph> {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    MultiGraph::new(a + b, &edges)
}

/// Two n-cycles joined by a perfect matching (the prism family).
pub fn circular_ladder(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::Precondition("circular ladder needs n >= 3".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
    }
    for i in 0..n {
        edges.push((n + i, n + (i + 1) % n));
    }
    for i in 0..n {
        edges.push((i, n + i));
    }
    MultiGraph::new(2 * n, &edges)
}

/// A 2n-cycle plus all n diameters.
pub fn moebius_ladder(n: usize) -> Result<MultiGraph> {
    if n < 2 {
        return Err(Error::Precondition("moebius ladder needs n >= 2".into()));
    }
    let mut edges = Vec::new();
    for i in 0..2 * n {
        edges.push((i, (i + 1) % (2 * n)));
    }
    for i in 0..n {
        edges.push((i, i + n));
    }
    MultiGraph::new(2 * n, &edges)
}

/// An n-cycle plus a hub adjacent to every rim vertex.
pub fn wheel(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::Precondition("wheel needs rim length >= 3".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((1 + i, 1 + (i + 1) % n));
    }
    for i in 0..n {
        edges.push((0, 1 + i));
    }
    MultiGraph::new(n + 1, &edges)
}

/// A tripod union: `count` triangles, each corner carrying one pendant
/// edge, with the pendant leaves identified according to `identification`
/// (entry 3*i + c names the shared vertex label for corner c of tripod i;
/// labels must be dense starting at 0).
#[derive(Debug, Clone)]
pub struct TripodUnion {
    pub graph: MultiGraph,
    /// Vertex ids of the shared (identified-leaf) vertices, by label.
    pub shared: Vec<usize>,
    /// Whether the identification produced a 3-edge-connected graph.
    pub three_edge_connected: bool,
}

pub fn tripod_union(count: usize, identification: &[usize]) -> Result<TripodUnion> {
    if count == 0 || identification.len() != 3 * count {
        return Err(Error::Precondition(
            "identification must name a shared vertex for every leaf".into(),
        ));
    }
    let labels = identification.iter().copied().max().unwrap() + 1;
    for l in 0..labels {
        if !identification.contains(&l) {
            return Err(Error::Precondition(format!("shared labels not dense: {l} unused")));
        }
    }
    let mut edges = Vec::new();
    for t in 0..count {
        let c = 3 * t;
        edges.push((c, c + 1));
        edges.push((c + 1, c + 2));
        edges.push((c + 2, c));
        for corner in 0..3 {
            edges.push((c + corner, 3 * count + identification[3 * t + corner]));
        }
    }
    let graph = MultiGraph::new(3 * count + labels, &edges)?;
    let three_edge_connected = graph.is_k_edge_connected(3);
    Ok(TripodUnion {
        shared: (3 * count..3 * count + labels).collect(),
        graph,
        three_edge_connected,
    })
}

/// All leaves of all tripods identified to one vertex; one tripod gives K4.
pub fn tripod_star(count: usize) -> Result<TripodUnion> {
    tripod_union(count, &vec![0; 3 * count])
}

/// Truncate the all-degree-3 side of a bipartite graph: every vertex of
/// that side becomes a triangle whose corners inherit its edges. The other
/// side's vertices become the shared leaf vertices of a tripod union.
pub fn tripod_truncation(h: &MultiGraph) -> Result<TripodUnion> {
    let color = two_coloring(h)?;
    let all_three = |side: bool| {
        h.vertices()
            .filter(|&v| color[v] == side)
            .all(|v| h.degree(v) == 3)
    };
    let side = if all_three(color[0]) {
        color[0]
    } else if all_three(!color[0]) {
        !color[0]
    } else {
        return Err(Error::Precondition(
            "neither bipartition side is all degree 3".into(),
        ));
    };
    let u_side: Vec<usize> = h.vertices().filter(|&v| color[v] == side).collect();
    let shared: Vec<usize> = h.vertices().filter(|&v| color[v] != side).collect();
    let label_of = |v: usize| shared.iter().position(|&w| w == v).unwrap();
    let mut identification = Vec::new();
    for &u in &u_side {
        for &(e, _) in h.incidence(u) {
            identification.push(label_of(h.other_end(e, u)));
        }
    }
    tripod_union(u_side.len(), &identification)
}

fn two_coloring(g: &MultiGraph) -> Result<Vec<bool>> {
    let mut color = vec![None; g.num_vertices()];
    for start in g.vertices() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(e, _) in g.incidence(v) {
                let w = g.other_end(e, v);
                match color[w] {
                    None => {
                        color[w] = Some(!color[v].unwrap());
                        queue.push_back(w);
                    }
                    Some(c) if c == color[v].unwrap() => {
                        return Err(Error::Precondition("graph is not bipartite".into()));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(|c| c.unwrap()).collect())
}

/// Replace edge e by a path of `lengths[e]` edges (1 keeps it). New
/// vertices and edges are appended in edge-id order; each path is oriented
/// tail to head of the original edge. Returns the new graph and the path
/// of new edge ids per old edge.
pub fn subdivide(g: &MultiGraph, lengths: &[usize]) -> Result<(MultiGraph, Vec<Vec<usize>>)> {
    if lengths.len() != g.num_edges() {
        return Err(Error::Precondition("lengths must cover every edge".into()));
    }
    if lengths.contains(&0) {
        return Err(Error::Precondition("subdivision lengths must be >= 1".into()));
    }
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    let mut next_vertex = g.num_vertices();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let len = lengths[e];
        let mut path = Vec::new();
        let mut prev = u;
        for step in 0..len {
            let nxt = if step + 1 == len {
                v
            } else {
                next_vertex += 1;
                next_vertex - 1
            };
            path.push(edges.len());
            edges.push((prev, nxt));
            prev = nxt;
        }
        paths.push(path);
    }
    Ok((MultiGraph::new(next_vertex, &edges)?, paths))
}

/// The boundary-forced tight construction: subdivide every edge of a
/// 3-edge-connected base with |E| divisible by 3 into a 3-edge path and
/// put weight 1 on every new vertex. Every labelling with that boundary
/// assigns the three edges of each path distinct values, so its support
/// is exactly two thirds of the edges.
#[derive(Debug, Clone)]
pub struct TightnessInstance {
    pub weighted: WeightedGraph,
    /// New edge ids per base edge, each a directed 3-edge path.
    pub paths: Vec<Vec<usize>>,
    pub base_edges: usize,
}

pub fn tightness_instance(base: &MultiGraph) -> Result<TightnessInstance> {
    if !base.is_k_edge_connected(3) {
        return Err(Error::Precondition("base graph must be 3-edge-connected".into()));
    }
    if !base.num_edges().is_multiple_of(3) {
        return Err(Error::Precondition(
            "base edge count must be divisible by 3 for a zero-sum weighting".into(),
        ));
    }
    let (g, paths) = subdivide(base, &vec![3; base.num_edges()])?;
    let mut mu = vec![Z3(0); g.num_vertices()];
    mu[base.num_vertices()..].fill(Z3(1));
    let orientation = g.default_orientation();
    Ok(TightnessInstance {
        weighted: WeightedGraph::new(g, orientation, mu)?,
        paths,
        base_edges: base.num_edges(),
    })
}

/// Parse the plain edge-list format: first non-comment line `n m`, then m
/// lines `u v` with 0-based endpoints; `u u` is a loop, repeated lines are
/// parallel edges, `#` starts a comment line.
pub fn parse_edgelist(text: &str) -> Result<MultiGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected two fields, got {}", fields.len()),
            });
        }
        let a: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse { line: idx + 1, msg: format!("bad number {}", fields[0]) })?;
        let b: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse { line: idx + 1, msg: format!("bad number {}", fields[1]) })?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n || b >= n {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("endpoint out of range (n = {n})"),
                    });
                }
                edges.push((a, b));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse { line: 1, msg: "missing header line".into() });
    };
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    MultiGraph::new(n, &edges).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })
}

pub fn write_edgelist(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.num_vertices(), g.num_edges());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Decode one graph6 line (simple graphs only). Edges are created in the
/// format's column order: (0,1), (0,2), (1,2), (0,3), ...
pub fn parse_graph6(line: &str) -> Result<MultiGraph> {
    let s = line.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse { line: 1, msg: "empty graph6 line".into() });
    }
    let value = |b: u8| -> Result<u64> {
        if !(63..=126).contains(&b) {
            return Err(Error::Parse { line: 1, msg: format!("invalid graph6 byte {b}") });
        }
        Ok((b - 63) as u64)
    };
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() < 4 || bytes[1] == 126 {
            return Err(Error::Parse { line: 1, msg: "unsupported graph6 size".into() });
        }
        let n = (value(bytes[1])? << 12) | (value(bytes[2])? << 6) | value(bytes[3])?;
        (n as usize, 4)
    } else {
        (value(bytes[0])? as usize, 1)
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let bytes_needed = bits_needed.div_ceil(6);
    if bytes.len() < pos + bytes_needed {
        return Err(Error::Parse {
            line: 1,
            msg: format!("graph6 line too short ({} of {} data bytes)", bytes.len() - pos, bytes_needed),
        });
    }
    let mut edges = Vec::new();
    let mut bit_index = 0usize;
    let mut current = 0u64;
    let mut remaining = 0u32;
    for j in 1..n {
        for i in 0..j {
            if remaining == 0 {
                current = value(bytes[pos])?;
                pos += 1;
                remaining = 6;
            }
            remaining -= 1;
            if (current >> remaining) & 1 == 1 {
                edges.push((i, j));
            }
            bit_index += 1;
        }
    }
    let _ = bit_index;
    MultiGraph::new(n, &edges).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })
}

/// Parse a whole graph6 catalog, one graph per line.
pub fn parse_graph6_file(text: &str) -> Result<Vec<MultiGraph>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_graph6(line).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: idx + 1, msg },
            other => other,
        })?);
    }
    Ok(out)
}

/// An isomorphism-sensitive fingerprint: vertex colors seeded with
/// degree, local triangle count, and the BFS distance profile, then
/// refined by neighbourhood color multisets and hashed into 64 bits.
/// Plain refinement alone cannot split same-order regular graphs (cube
/// against the moebius ladder, say), which is what the seeding is for.
/// Equal hashes do not prove isomorphism; this is a documented
/// fingerprint heuristic, not a canonical form.
pub fn canonical_hash(g: &MultiGraph) -> u64 {
    let n = g.num_vertices();
    let mut color: Vec<u64> = (0..n).map(|v| vertex_invariant(g, v)).collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let mut neighbours: Vec<u64> = g
                .incidence(v)
                .iter()
                .map(|&(e, _)| color[g.other_end(e, v)])
                .collect();
            neighbours.sort_unstable();
            let mut h = fnv(0xcbf29ce484222325, color[v]);
            for x in neighbours {
                h = fnv(h, x);
            }
            next.push(h);
        }
        color = next;
    }
    color.sort_unstable();
    let mut h = fnv(0xcbf29ce484222325, n as u64);
    h = fnv(h, g.num_edges() as u64);
    for c in color {
        h = fnv(h, c);
    }
    h
}

fn vertex_invariant(g: &MultiGraph, v: usize) -> u64 {
    let mut h = fnv(0x9e3779b97f4a7c15, g.degree(v) as u64);
    // triangles through v, counted with edge multiplicities
    let mut triangles = 0u64;
    let neighbours: Vec<usize> =
        g.incidence(v).iter().filter(|&&(e, _)| !g.is_loop(e)).map(|&(e, _)| g.other_end(e, v)).collect();
    for (i, &a) in neighbours.iter().enumerate() {
        for &b in &neighbours[i + 1..] {
            if a != b {
                triangles += g.edges_between(a, b) as u64;
            }
        }
    }
    h = fnv(h, triangles);
    // sorted BFS distance profile; unreachable vertices marked past n
    let mut dist = vec![u64::MAX; g.num_vertices()];
    dist[v] = 0;
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &(e, _) in g.incidence(x) {
            let y = g.other_end(e, x);
            if dist[y] == u64::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut profile: Vec<u64> =
        dist.into_iter().map(|d| if d == u64::MAX { g.num_vertices() as u64 + 1 } else { d }).collect();
    profile.sort_unstable();
    for d in profile {
        h = fnv(h, d);
    }
    h
}

fn fnv(state: u64, x: u64) -> u64 {
    let mut h = state;
    for byte in x.to_le_bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// One expanded catalog instance.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: String,
    pub graph: MultiGraph,
    pub warnings: Vec<String>,
}

/// Parse a manifest: one `name: generator(args)` per line, `#` comments.
/// Generators: named(x), cycle(n), complete(n), complete_bipartite(a,b),
/// circular_ladder(n), moebius_ladder(n), wheel(n), tripod_star(t),
/// tripod_truncation(name), file(relative.g6). Single-argument numeric
/// generators accept inclusive ranges `lo-hi`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        let (name, spec) = line
            .split_once(':')
            .ok_or_else(|| err("expected `name: generator(args)`".into()))?;
        let name = name.trim();
        let spec = spec.trim();
        let (gen, args) = spec
            .split_once('(')
            .and_then(|(g, rest)| rest.strip_suffix(')').map(|a| (g.trim(), a.trim())))
            .ok_or_else(|| err("expected `generator(args)`".into()))?;
        let push = |out: &mut Vec<CatalogEntry>, name: String, graph: MultiGraph, warnings| {
            out.push(CatalogEntry { name, spec: spec.to_string(), graph, warnings });
        };
        let range = |a: &str| -> Result<Vec<usize>> {
            if let Some((lo, hi)) = a.split_once('-') {
                let lo: usize =
                    lo.trim().parse().map_err(|_| err(format!("bad number {lo}")))?;
                let hi: usize =
                    hi.trim().parse().map_err(|_| err(format!("bad number {hi}")))?;
                if lo > hi {
                    return Err(err(format!("empty range {a}")));
                }
                Ok((lo..=hi).collect())
            } else {
                Ok(vec![a.trim().parse().map_err(|_| err(format!("bad number {a}")))?])
            }
        };
        match gen {
            "named" => push(&mut out, name.to_string(), named(args)?, Vec::new()),
            "cycle" | "complete" | "circular_ladder" | "moebius_ladder" | "wheel"
            | "tripod_star" => {
                let values = range(args)?;
                let expand = values.len() > 1;
                for v in values {
                    let entry_name =
                        if expand { format!("{name}_{v}") } else { name.to_string() };
                    match gen {
                        "cycle" => push(&mut out, entry_name, cycle(v)?, Vec::new()),
                        "complete" => push(&mut out, entry_name, complete(v)?, Vec::new()),
                        "circular_ladder" => {
                            push(&mut out, entry_name, circular_ladder(v)?, Vec::new())
                        }
                        "moebius_ladder" => {
                            push(&mut out, entry_name, moebius_ladder(v)?, Vec::new())
                        }
                        "wheel" => push(&mut out, entry_name, wheel(v)?, Vec::new()),
                        "tripod_star" => {
                            let t = tripod_star(v)?;
                            let warnings = if t.three_edge_connected {
                                Vec::new()
                            } else {
                                vec!["not 3-edge-connected".into()]
                            };
                            push(&mut out, entry_name, t.graph, warnings);
                        }
                        _ => unreachable!(),
                    }
                }
            }
            "complete_bipartite" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| err("complete_bipartite needs two arguments".into()))?;
                let a: usize =
                    a.trim().parse().map_err(|_| err(format!("bad number {a}")))?;
                let b: usize =
                    b.trim().parse().map_err(|_| err(format!("bad number {b}")))?;
                push(&mut out, name.to_string(), complete_bipartite(a, b)?, Vec::new());
            }
            "tripod_truncation" => {
                let base = named(args)?;
                let t = tripod_truncation(&base)?;
                let warnings = if t.three_edge_connected {
                    Vec::new()
                } else {
                    vec!["not 3-edge-connected".into()]
                };
                push(&mut out, name.to_string(), t.graph, warnings);
            }
            "file" => {
                let path = base_dir.join(args);
                let text = std::fs::read_to_string(&path)?;
                for (i, g) in parse_graph6_file(&text)?.into_iter().enumerate() {
                    push(&mut out, format!("{name}#{i}"), g, Vec::new());
                }
            }
            other => return Err(err(format!("unknown generator {other}"))),
        }
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base)
}
