#!/usr/bin/env python3
"""Regenerate the graph6 catalogs under data/catalogs/.

Small simple graphs come from the networkx atlas (complete up to 7
vertices); cubic graphs on up to 8 vertices are enumerated directly by
degree-constrained backtracking and deduplicated up to isomorphism.
Output lines are sorted, so reruns are byte-identical.
"""

import itertools
from pathlib import Path

import networkx as nx

OUT = Path(__file__).resolve().parent.parent / "data" / "catalogs"


def g6(graph):
    return nx.to_graph6_bytes(graph, header=False).decode().strip()


def sorted_lines(graphs):
    return sorted(g6(g) for g in graphs)


def atlas_3ec(max_n):
    """Simple 3-edge-connected graphs on at most max_n vertices."""
    out = []
    for g in nx.graph_atlas_g()[1:]:
        n = g.number_of_nodes()
        if n < 4 or n > max_n:
            continue
        if not nx.is_connected(g):
            continue
        if min(d for _, d in g.degree()) < 3:
            continue
        if nx.edge_connectivity(g) >= 3:
            out.append(g)
    return out


def labeled_cubic(n):
    """Every labeled simple cubic graph on n vertices, each once."""
    results = []

    def extend(adj, residual):
        try:
            u = next(v for v in range(n) if residual[v] > 0)
        except StopIteration:
            results.append([(u, v) for u in range(n) for v in adj[u] if u < v])
            return
        candidates = [v for v in range(u + 1, n) if residual[v] > 0 and v not in adj[u]]
        for combo in itertools.combinations(candidates, residual[u]):
            for v in combo:
                adj[u].add(v)
                adj[v].add(u)
                residual[v] -= 1
            saved = residual[u]
            residual[u] = 0
            extend(adj, residual)
            residual[u] = saved
            for v in combo:
                adj[u].remove(v)
                adj[v].remove(u)
                residual[v] += 1

    extend([set() for _ in range(n)], [3] * n)
    return results


def cubic_3ec(max_n):
    """Cubic 3-edge-connected graphs up to isomorphism, 4..max_n vertices."""
    reps = []
    buckets = {}
    for n in range(4, max_n + 1, 2):
        for edges in labeled_cubic(n):
            g = nx.Graph(edges)
            g.add_nodes_from(range(n))
            if not nx.is_connected(g) or nx.edge_connectivity(g) < 3:
                continue
            key = (n, nx.weisfeiler_lehman_graph_hash(g))
            if any(nx.is_isomorphic(g, h) for h in buckets.get(key, [])):
                continue
            buckets.setdefault(key, []).append(g)
            reps.append(g)
    return reps


def write(name, graphs):
    path = OUT / name
    lines = sorted_lines(graphs)
    path.write_text("".join(line + "\n" for line in lines))
    print(f"{name}: {len(lines)} graphs")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    atlas7 = atlas_3ec(7)
    write("simple3ec_le7.g6", atlas7)
    write("simple3ec_le5.g6", [g for g in atlas7 if g.number_of_nodes() <= 5])
    write("cubic3ec_le8.g6", cubic_3ec(8))


if __name__ == "__main__":
    main()
