"""Alternating 2-type paths: index, verification, BFS search, disjoint families."""

import itertools
from collections import deque

import pytest

from homord.errors import TypeNotRealizedError, ValidationError
from homord.structures import Signature, canonical_type, make_structure
from homord.taupaths import (
    TauPath,
    build_tau_index,
    disjoint_tau_paths,
    find_tau_path,
    verify_tau_path,
)

GSIG = Signature((("E", 2),))


def graph(n, edges):
    sym = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
    return make_structure(GSIG, n, {"E": sym})


EDGE = canonical_type(graph(2, [(0, 1)]), (0, 1))
NONEDGE = canonical_type(graph(2, []), (0, 1))


def shortest_len_brute(S, a, b, tau, avoid=frozenset()):
    """Oracle: BFS over full path states, no index, no pruning tricks."""
    n = S.size

    def tp(x, y):
        return canonical_type(S, (x, y))

    best = None
    queue = deque([(a,)])
    while queue:
        path = queue.popleft()
        if best is not None and len(path) - 1 >= best:
            continue
        y = path[-1]
        for w in range(n):
            if w in path or w in avoid:
                continue
            if tp(y, w) != tau:
                continue
            for y2 in range(n):
                if y2 in path or y2 == w or tp(y2, w) != tau:
                    continue
                if y2 == b:
                    if best is None or len(path) + 1 < best:
                        best = len(path) + 1
                elif y2 not in avoid:
                    queue.append(path + (w, y2))
    return best


class TestIndex:
    def test_matches_direct_type_calls(self):
        S = graph(5, [(0, 1), (1, 2), (3, 4)])
        idx = build_tau_index(S)
        for x, y in itertools.permutations(range(5), 2):
            code = canonical_type(S, (x, y))
            assert y in idx.first[code][x]
            assert x in idx.second[code][y]

    def test_realized(self):
        idx = build_tau_index(graph(3, []))
        assert idx.realized(NONEDGE)
        assert not idx.realized(EDGE)


class TestVerify:
    def test_hand_path(self):
        S = graph(3, [(0, 1), (1, 2)])
        verify_tau_path(S, TauPath(nodes=(0, 1, 2), tau=EDGE))

    def test_tampered_rejected(self):
        S = graph(4, [(0, 1), (1, 2)])
        with pytest.raises(ValidationError):
            verify_tau_path(S, TauPath(nodes=(0, 1, 3), tau=EDGE))
        with pytest.raises(ValidationError):
            verify_tau_path(S, TauPath(nodes=(0, 1), tau=EDGE))
        with pytest.raises(ValidationError):
            verify_tau_path(S, TauPath(nodes=(0, 1, 0), tau=EDGE))


class TestFind:
    def test_direct_hop(self):
        S = graph(3, [(0, 1), (1, 2)])
        path = find_tau_path(S, 0, 2, EDGE)
        assert path is not None and path.nodes == (0, 1, 2)

    def test_no_path_is_none(self):
        S = graph(3, [(0, 1), (1, 2)])
        assert find_tau_path(S, 0, 2, EDGE, avoid={1}) is None

    def test_unrealized_type_raises(self):
        with pytest.raises(TypeNotRealizedError):
            find_tau_path(graph(3, []), 0, 2, EDGE)

    def test_bad_arguments(self):
        S = graph(3, [(0, 1)])
        with pytest.raises(ValidationError):
            find_tau_path(S, 0, 0, EDGE)
        with pytest.raises(ValidationError):
            find_tau_path(S, 0, 9, EDGE)
        with pytest.raises(ValidationError):
            find_tau_path(S, 0, 2, EDGE, avoid={0})

    def test_shortest_against_brute_force(self):
        # random graphs, both 2-types, every endpoint pair
        import random

        rng = random.Random(11)
        for trial in range(12):
            n = rng.randrange(4, 7)
            edges = [
                (a, b)
                for a, b in itertools.combinations(range(n), 2)
                if rng.random() < 0.45
            ]
            S = graph(n, edges)
            idx = build_tau_index(S)
            for tau in (EDGE, NONEDGE):
                if not idx.realized(tau):
                    continue
                for a, b in itertools.combinations(range(n), 2):
                    want = shortest_len_brute(S, a, b, tau)
                    got = find_tau_path(S, a, b, tau, index=idx)
                    if want is None:
                        assert got is None
                    else:
                        assert got is not None and got.length == want

    def test_avoid_respected(self):
        S = graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
        path = find_tau_path(S, 0, 2, EDGE, avoid={1})
        assert path is not None
        assert 1 not in path.nodes
        assert path.length == shortest_len_brute(S, 0, 2, EDGE, avoid={1})

    def test_alternation_on_built_graph(self, graph_top):
        idx = build_tau_index(graph_top)
        E = graph_top.table("E")
        path = find_tau_path(graph_top, 0, 5, EDGE, avoid={1, 2}, index=idx)
        assert path is not None
        nodes = path.nodes
        for i in range(1, len(nodes), 2):
            assert (nodes[i - 1], nodes[i]) in E
            assert (nodes[i + 1], nodes[i]) in E
        assert not {1, 2} & set(path.interior)


class TestDisjoint:
    def test_interiors_disjoint(self, graph_top):
        # 0 and 4 share five neighbors in this build, so three length-2
        # paths with distinct middles exist
        fam = disjoint_tau_paths(graph_top, 0, 4, EDGE, count=3)
        assert fam.achieved == 3
        seen = set()
        for p in fam.paths:
            verify_tau_path(graph_top, p)
            inner = set(p.interior)
            assert not inner & seen
            seen |= inner
        lengths = {p.length for p in fam.paths}
        assert len(lengths) == 1

    def test_shortage_reported(self):
        # only one interior vertex available, so a second path cannot exist
        S = graph(3, [(0, 1), (1, 2)])
        fam = disjoint_tau_paths(S, 0, 2, EDGE, count=2)
        assert fam.achieved == 1 and fam.shortage

    def test_zero_count(self, graph_top):
        fam = disjoint_tau_paths(graph_top, 0, 5, EDGE, count=0)
        assert fam.paths == () and not fam.shortage

    def test_negative_count(self, graph_top):
        with pytest.raises(ValidationError):
            disjoint_tau_paths(graph_top, 0, 5, EDGE, count=-1)
