"""The four statistical verdict suites, each shown passing on an honest
sampler and failing on a sampler with a planted defect.

Library naming note: the suites carry a test_ prefix (test_exchangeability
and friends) because they are the package's exported invariance tests.  We
alias them here so the script reads as a narrative.
"""

from homord import (
    BiasedEdgeOrderSampler,
    BrokenCouplingSampler,
    DualFunctionalSampler,
    UniformOrderSampler,
    build_f2_vector_space,
    build_generic,
    graph_class,
    iid_bernoulli_sequences,
    mixture_bernoulli_sequences,
    test_exchangeability as exchangeability,
    test_independence as independence,
    test_monotone_coupling as monotone_coupling,
    test_shift_ergodicity as shift_ergodicity,
)

S = build_generic(graph_class(), t=2, cap=24, seed=0).top
E = S.table("E")
edges = sorted({tuple(sorted(t)) for t in E})
non_edges = sorted(
    (a, b)
    for a in S.elements
    for b in S.elements
    if a < b and (a, b) not in E and (b, a) not in E
)


def show(v):
    flag = "PASS" if v.passed else "FAIL"
    op = ">=" if v.comparison == "ge" else "<="
    print(
        f"  {v.name:<18} {flag:<4}  statistic {v.statistic:.4g} "
        f"(needs {op} {v.threshold:.4g})"
    )


print("== exchangeability: same 2-type, same order-pattern law ==")
uni = UniformOrderSampler(S)
show(exchangeability(uni, [(edges[0], edges[1])], seed=10, n=20_000))

biased = BiasedEdgeOrderSampler(S, strength=0.2)
# planted defect: scores shift along edges, so an edge pair and a non-edge
# pair disagree.  The type check would refuse this comparison; the escape
# hatch exists exactly for harness self-tests like this one.
show(
    exchangeability(
        biased,
        [(edges[0], non_edges[0])],
        seed=10,
        n=20_000,
        require_equal_types=False,
    )
)

print("\n== independence of eta values ==")
v3 = build_f2_vector_space(3)
dual = DualFunctionalSampler(v3)
show(independence(dual, [(1, 2), (1, 4), (2, 4)], seed=11, n=4_000))
# xi(3) = xi(1) xor xi(2): every pair looks fine, the triple cannot
show(independence(dual, [(1, 2, 3)], seed=11, n=4_000))

print("\n== monotone coupling: order must follow eta ==")
show(monotone_coupling(uni, seed=12, n=20_000))
show(monotone_coupling(BrokenCouplingSampler(S), seed=12, n=20_000))

print("\n== shift ergodicity: block-mean variance vs the i.i.d. value ==")
show(shift_ergodicity(iid_bernoulli_sequences(0.5, 256), block_size=64, seed=13, n=6_000))
mix = mixture_bernoulli_sequences(0.25, 0.75, 256)
v = shift_ergodicity(mix, block_size=64, seed=13, n=6_000)
show(v)
print(f"  mixture block-mean variance {v.details['observed_block_var']:.4f}; "
      f"between-component part 0.25^2 = 0.0625 never averages out")
