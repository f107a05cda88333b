"""Build the finite structures everything else runs on.

Each family comes out of a seeded builder, so rerunning this script prints
byte-identical output.
"""

from homord import (
    audit_saturation,
    build_bipartite_deg2,
    build_f2_vector_space,
    build_generic,
    build_involution_order,
    build_two_predicate_PQ,
    chain_dumps,
    graph_class,
    kn_free_graph_class,
    paley_graph,
)

# a generic graph chain: start tiny, then repeatedly add witnesses until
# every pair of vertices has a common neighbor and a common non-neighbor
chain = build_generic(graph_class(), t=2, cap=24, seed=0)
print("generic graph chain, level sizes:", [S.size for S in chain.levels])
print("audited saturation depth of the top level:",
      audit_saturation(chain.top, graph_class(), 2))

# triangle-free: depth-1 witnesses already force an infinite-looking object.
# depth 2 would demand a common neighbor for every non-edge, and each new
# witness creates new non-edges, so a small cap cannot close the loop.
tf = build_generic(kn_free_graph_class(3), t=1, cap=32, seed=0)
print("\ntriangle-free chain, top size:", tf.top.size)
edges = tf.top.table("E")
print("edges:", len(edges) // 2, "- and no triangle anywhere, by construction")

pq = build_two_predicate_PQ(3, 2)
print("\ntwo-block structure:", sorted(t[0] for t in pq.table("P")), "carry P,",
      sorted(t[0] for t in pq.table("Q")), "carry Q")

bip = build_bipartite_deg2(5, seed=0)
print("bipartite degree-2:", len(bip.elements_of_sort("S0")), "left vertices,",
      len(bip.elements_of_sort("S1")), "right vertices, every left degree 2")

inv = build_involution_order(6, seed=2)
f = dict(inv.table("f"))
print("involution order on", inv.size, "points;",
      len(inv.elements_of_sort("M")), "of them are the upper member of their pair")

v = build_f2_vector_space(3)
print("F2 vector space of dimension 3:", v.size, "vectors,",
      len(v.table("add")), "addition triples")

p13 = paley_graph(13)
print("\nPaley graph on 13 vertices, audited saturation:",
      audit_saturation(p13, graph_class(), 2))

# chains serialize to JSON; the text is the reproducibility contract
text = chain_dumps(chain)
print("\nserialized generic chain:", len(text), "bytes of JSON")
