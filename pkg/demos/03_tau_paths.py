"""Alternating 2-type paths: the connectivity witness behind order rigidity.

A tau-path from a to b is a sequence a = y0, w0, y1, w1, ..., b where each
consecutive (y, w) pair realizes the same 2-type tau in both directions of
travel.  On a well-saturated structure such paths exist between any two
points even after deleting a couple of vertices.
"""

import itertools

from homord import (
    build_generic,
    build_tau_index,
    canonical_type,
    disjoint_tau_paths,
    find_tau_path,
    graph_class,
    verify_tau_path,
)

S = build_generic(graph_class(), t=2, cap=24, seed=0).top
index = build_tau_index(S)

E = S.table("E")
edge = canonical_type(S, next(iter(E)))
nonedge = canonical_type(
    S, next(p for p in itertools.permutations(S.elements, 2) if p not in E)
)

p = find_tau_path(S, 0, 5, edge, index=index)
print("edge-type path 0 -> 5:", p.nodes, "length", p.length)
verify_tau_path(S, p)  # raises if any link were wrong

p = find_tau_path(S, 0, 5, edge, avoid={p.nodes[1]}, index=index)
print("same endpoints, middle vertex forbidden:", p.nodes)

p = find_tau_path(S, 0, 5, nonedge, index=index)
print("non-edge-type path 0 -> 5:", p.nodes)

# several routes at once, sharing no interior vertex
fam = disjoint_tau_paths(S, 0, 4, edge, count=3, index=index)
print("\n3 interior-disjoint edge paths 0 -> 4:")
for q in fam.paths:
    print("  ", q.nodes)

# search failure is an honest None, not an exception; exhaust a small
# structure's interior to see it
from homord import Signature, make_structure

tiny = make_structure(Signature((("E", 2),)), 3,
                      {"E": {(0, 1), (1, 0), (1, 2), (2, 1)}})
blocked = find_tau_path(tiny, 0, 2, edge, avoid={1})
print("\npath graph with its only middle vertex avoided:", blocked)
