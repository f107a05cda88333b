"""Quantifier-free types, automorphism orbits, and where they disagree."""

import itertools

from homord import (
    acl_profile,
    automorphisms,
    build_generic,
    canonical_type,
    graph_class,
    hypercube_chain,
    orbits,
    paley_graph,
)

p13 = paley_graph(13)

# the 2-type of an ordered pair is just the induced structure with positions
# named; a graph has two of them on distinct points
types = {canonical_type(p13, pair) for pair in itertools.permutations(range(13), 2)}
print("distinct 2-types in the Paley graph:", len(types))

aut = automorphisms(p13)
print("automorphism group order:", len(aut))

part = orbits(p13, 2)
print("orbits on ordered distinct pairs:", len(part.blocks),
      "- equal to the type count, the symmetric-approximation ideal")

# a witness-built generic graph is rigid, so its orbits shatter even though
# its types do not; the gap is reported, not papered over
g = build_generic(graph_class(), t=2, cap=24, seed=0).top
print("\nwitness-built graph of size", g.size,
      "has", len(automorphisms(g)), "automorphism(s)",
      "and", len(orbits(g, 2).blocks), "pair orbits, vs 2 pair types")

# orbit growth of a point along a chain, under the stabilizer of a fixed set:
# in the hypercube chain the orbit of any vertex keeps doubling
prof = acl_profile(hypercube_chain(3), A=set(), b=0)
print("\nhypercube chain, orbit sizes of vertex 0:", prof.orbit_sizes,
      "->", prof.verdict)

# fixing the point itself pins the orbit: it is algebraic over {0} trivially
prof2 = acl_profile(hypercube_chain(3), A={0}, b=0)
print("same chain, orbit of 0 over A={0}:", prof2.orbit_sizes, "->", prof2.verdict)
