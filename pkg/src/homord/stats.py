"""Monte Carlo estimation and hypothesis tests for order samplers.

The tests turn distributional claims into falsifiable checks at fixed n:

  exchangeability   -- two same-type tuples must show the same order-pattern
                       distribution (two-sample chi-square, Bonferroni).
  independence      -- eta values at given points must look like a product
                       (correlation z-test plus a grid chi-square; tuples of
                       three or more get a joint multiway table, which is what
                       catches xor-style dependence that every pair hides).
  monotone coupling -- the order never inverts eta: a before b while
                       eta(a) > eta(b) counts as a violation, and the pass
                       bar is exactly zero violations.
  shift ergodicity  -- across-sample variance of block means against the
                       i.i.d. prediction sigma^2/B; mixtures inflate it.

Alpha defaults to 0.001 with Bonferroni correction inside a suite, so a
failing verdict means a real defect at these sample sizes, not noise.
BiasedEdgeOrderSampler and BrokenCouplingSampler are deliberately defective
samplers used to prove the harness has power against its target failure
modes; their effect sizes have closed forms, derived in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import ValidationError
from .samplers import CHUNK, OrderSamplerBase, OrderSample, _chunk_rngs, derive_seed
from .structures import FinStructure


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int
    ci99: tuple[float, float]

    @staticmethod
    def frequency(count: int, n: int) -> "Estimate":
        p = count / n
        se = math.sqrt(p * (1 - p) / n)
        lo = max(0.0, p - 2.576 * se)
        hi = min(1.0, p + 2.576 * se)
        return Estimate(p, se, n, (lo, hi))


@dataclass(frozen=True)
class TestVerdict:
    """comparison 'ge' means pass iff statistic >= threshold; 'le' the
    reverse.  details carries the per-pair numbers behind the headline."""

    name: str
    statistic: float
    threshold: float
    passed: bool
    seed: int
    n: int
    comparison: str
    details: dict = field(default_factory=dict, compare=False)


def order_pattern(order: tuple[int, ...], points: tuple[int, ...]) -> tuple[int, ...]:
    """Indices of `points` in order of appearance, e.g. (1, 0) when the
    second listed point comes first."""
    pos = {a: i for i, a in enumerate(order)}
    return tuple(sorted(range(len(points)), key=lambda i: pos[points[i]]))


def estimate_order_event(
    sampler,
    points: tuple[int, ...],
    target_order: tuple[int, ...],
    n: int,
    seed: int,
) -> Estimate:
    """Frequency of the points appearing in exactly target_order."""
    if n <= 0:
        raise ValidationError("n must be positive")
    if len(set(points)) != len(points):
        raise ValidationError("points repeat")
    if sorted(target_order) != sorted(points):
        raise ValidationError("target_order is not a permutation of points")
    count = 0
    for s in sampler.stream(seed, n):
        pos = {a: i for i, a in enumerate(s.order)}
        if all(pos[target_order[i]] < pos[target_order[i + 1]]
               for i in range(len(target_order) - 1)):
            count += 1
    return Estimate.frequency(count, n)


# --- exchangeability ----------------------------------------------------------


def _pattern_counts(sampler, points: tuple[int, ...], seed: int, n: int) -> dict:
    counts: dict[tuple[int, ...], int] = {}
    for s in sampler.stream(seed, n):
        pat = order_pattern(s.order, points)
        counts[pat] = counts.get(pat, 0) + 1
    return counts


def _two_sample_pvalue(ca: dict, cb: dict) -> float:
    pats = sorted(set(ca) | set(cb))
    if len(pats) <= 1:
        return 1.0
    table = np.array([[ca.get(p, 0) for p in pats], [cb.get(p, 0) for p in pats]])
    return float(sps.chi2_contingency(table).pvalue)


def test_exchangeability(
    sampler,
    tuple_pairs: list[tuple[tuple[int, ...], tuple[int, ...]]],
    seed: int,
    n: int,
    alpha: float = 0.001,
    require_equal_types: bool = True,
) -> TestVerdict:
    """Same-type tuples must induce the same order-pattern law.

    Each pair draws two independent streams (derived seeds) and compares the
    empirical pattern distributions.  Tuples whose types differ are a usage
    error unless require_equal_types=False, the harness-self-test escape
    hatch for demonstrating detection of a real asymmetry."""
    if not tuple_pairs:
        raise ValidationError("no tuple pairs")
    pvals = []
    details = {}
    for idx, (ta, tb) in enumerate(tuple_pairs):
        if len(ta) != len(tb):
            raise ValidationError(f"pair {idx}: tuple lengths differ")
        ca, cb = sampler.pattern_type(ta), sampler.pattern_type(tb)
        if require_equal_types and ca != cb:
            raise ValidationError(
                f"pair {idx}: tuples have different types; "
                "exchangeability only binds equal types"
            )
        counts_a = _pattern_counts(sampler, ta, derive_seed(seed, idx, 0), n)
        counts_b = _pattern_counts(sampler, tb, derive_seed(seed, idx, 1), n)
        p = _two_sample_pvalue(counts_a, counts_b)
        pvals.append(p)
        details[f"pair{idx}_pvalue"] = p
        details[f"pair{idx}_same_type"] = bool(ca == cb)
    bar = alpha / len(tuple_pairs)
    worst = min(pvals)
    return TestVerdict(
        name="exchangeability",
        statistic=worst,
        threshold=bar,
        passed=worst >= bar,
        seed=seed,
        n=n,
        comparison="ge",
        details=details,
    )


# --- independence -------------------------------------------------------------


def _bin_column(col: np.ndarray) -> np.ndarray:
    """Integer bin labels: distinct values if few, else quartiles."""
    uniq = np.unique(col)
    if len(uniq) <= 4:
        lookup = {v: i for i, v in enumerate(uniq.tolist())}
        return np.array([lookup[v] for v in col.tolist()])
    edges = np.quantile(col, [0.25, 0.5, 0.75])
    return np.searchsorted(np.unique(edges), col, side="right")


def _joint_chi2_pvalue(cols: list[np.ndarray]) -> float:
    """Chi-square of the joint table against the product of marginals.

    dof = prod(r_i) - 1 - sum(r_i - 1), the multiway mutual-independence
    count; for two columns this is the usual (r-1)(c-1)."""
    n = len(cols[0])
    binned = [_bin_column(c) for c in cols]
    sizes = [int(b.max()) + 1 for b in binned]
    marg = [np.bincount(b, minlength=s) / n for b, s in zip(binned, sizes)]
    flat = np.zeros(int(np.prod(sizes)))
    idx = np.ravel_multi_index([b for b in binned], sizes)
    np.add.at(flat, idx, 1.0)
    expected = n * np.ones_like(flat)
    for axis, m in enumerate(marg):
        reps_inner = int(np.prod(sizes[axis + 1:])) if axis + 1 < len(sizes) else 1
        pattern = np.repeat(m, reps_inner)
        expected *= np.tile(pattern, int(len(flat) // len(pattern)))
    dof = int(np.prod(sizes)) - 1 - sum(s - 1 for s in sizes)
    if dof <= 0:
        return 1.0
    mask = expected > 0
    stat = float(((flat[mask] - expected[mask]) ** 2 / expected[mask]).sum())
    return float(sps.chi2.sf(stat, dof))


def _corr_pvalue(x: np.ndarray, y: np.ndarray) -> float:
    n = len(x)
    if np.std(x) == 0 or np.std(y) == 0:
        return 1.0
    r = float(np.corrcoef(x, y)[0, 1])
    z = abs(r) * math.sqrt(n)
    return float(2 * sps.norm.sf(z))


def test_independence(
    sampler,
    point_tuples: list[tuple[int, ...]],
    seed: int,
    n: int,
    alpha: float = 0.001,
) -> TestVerdict:
    """Are eta values at these points jointly independent?

    Pairs get a correlation z-test plus a grid chi-square; longer tuples get
    the joint multiway chi-square, which detects parity-style dependence
    invisible to every pairwise test."""
    if not point_tuples:
        raise ValidationError("no point tuples")
    pts = sorted({p for tup in point_tuples for p in tup})
    values = {p: np.empty(n) for p in pts}
    got_eta = False
    for i, s in enumerate(sampler.stream(seed, n)):
        if s.eta is None:
            raise ValidationError("sampler does not expose eta")
        got_eta = True
        for p in pts:
            values[p][i] = s.eta[p]
    if not got_eta:
        raise ValidationError("empty stream")
    pvals = []
    details = {}
    for idx, tup in enumerate(point_tuples):
        if len(tup) < 2:
            raise ValidationError(f"tuple {idx} too short")
        cols = [values[p] for p in tup]
        p_grid = _joint_chi2_pvalue(cols)
        pvals.append(p_grid)
        details[f"tuple{idx}_grid_pvalue"] = p_grid
        if len(tup) == 2:
            p_corr = _corr_pvalue(cols[0], cols[1])
            pvals.append(p_corr)
            details[f"tuple{idx}_corr_pvalue"] = p_corr
    bar = alpha / len(pvals)
    worst = min(pvals)
    return TestVerdict(
        name="independence",
        statistic=worst,
        threshold=bar,
        passed=worst >= bar,
        seed=seed,
        n=n,
        comparison="ge",
        details=details,
    )


# --- monotone coupling ---------------------------------------------------------


def test_monotone_coupling(
    sampler,
    seed: int,
    n: int,
    pairs: list[tuple[int, int]] | None = None,
) -> TestVerdict:
    """Count samples where some pair has a before b but eta(a) > eta(b).

    With no explicit pairs all pairs are covered: a violating pair exists
    exactly when eta ever decreases along the order, so scanning adjacent
    order positions is a complete check."""
    all_pairs = pairs is None
    violations = 0
    checked = 0
    for s in sampler.stream(seed, n):
        if s.eta is None:
            raise ValidationError("sampler does not expose eta")
        if all_pairs:
            checked = len(s.order) * (len(s.order) - 1) // 2
            eta_along = [s.eta[a] for a in s.order]
            if any(x > y for x, y in zip(eta_along, eta_along[1:])):
                violations += 1
        else:
            checked = len(pairs)
            pos = {a: i for i, a in enumerate(s.order)}
            for a, b in pairs:
                lo, hi = (a, b) if pos[a] < pos[b] else (b, a)
                if s.eta[lo] > s.eta[hi]:
                    violations += 1
                    break
    return TestVerdict(
        name="monotone_coupling",
        statistic=float(violations),
        threshold=0.0,
        passed=violations == 0,
        seed=seed,
        n=n,
        comparison="le",
        details={"violating_samples": violations, "pairs_checked": checked},
    )


# --- shift ergodicity -----------------------------------------------------------


def test_shift_ergodicity(
    source,
    block_size: int,
    seed: int,
    n: int,
    name: str = "shift_ergodicity",
) -> TestVerdict:
    """Across-sample variance of block means vs the i.i.d. value sigma^2/B.

    source(seed, n) must return an (n, L) array with L a multiple of
    block_size.  A mixture of components with different means inflates the
    observed variance by the between-component variance, which does not
    shrink with B, so mixtures fail decisively."""
    arr = np.asarray(source(seed, n), dtype=float)
    if arr.ndim != 2 or arr.shape[0] != n:
        raise ValidationError("source must return an (n, L) array")
    length = arr.shape[1]
    if block_size <= 0 or length % block_size or length // block_size < 1:
        raise ValidationError("degenerate block sizes")
    if n < 2:
        raise ValidationError("need at least 2 sequences")
    blocks = arr.reshape(n, length // block_size, block_size).mean(axis=2)
    observed = float(blocks.var(ddof=1))
    predicted = float(arr.var(ddof=1)) / block_size
    m = blocks.size
    se_null = predicted * math.sqrt(2 / (m - 1))
    z = abs(observed - predicted) / se_null if se_null > 0 else math.inf
    return TestVerdict(
        name=name,
        statistic=z,
        threshold=3.0,
        passed=z <= 3.0,
        seed=seed,
        n=n,
        comparison="le",
        details={
            "observed_block_var": observed,
            "iid_predicted_var": predicted,
            "blocks": m,
        },
    )


# --- sequence sources ------------------------------------------------------------


def _sequence_source(draw_chunk):
    def source(seed: int, n: int) -> np.ndarray:
        rows = []
        remaining = n
        for rng in _chunk_rngs(seed):
            if remaining <= 0:
                break
            batch = draw_chunk(rng)
            take = min(CHUNK, remaining)
            rows.append(batch[:take])
            remaining -= take
        return np.vstack(rows)

    return source


def iid_uniform_sequences(length: int):
    return _sequence_source(lambda rng: rng.random((CHUNK, length)))


def iid_bernoulli_sequences(p: float, length: int):
    return _sequence_source(
        lambda rng: (rng.random((CHUNK, length)) < p).astype(float)
    )


def mixture_bernoulli_sequences(p_low: float, p_high: float, length: int):
    """Each sequence flips a fair coin for its component, then is i.i.d."""

    def draw(rng: np.random.Generator) -> np.ndarray:
        comp = rng.integers(0, 2, size=CHUNK)
        probs = np.where(comp == 0, p_low, p_high)[:, None]
        return (rng.random((CHUNK, length)) < probs).astype(float)

    return _sequence_source(draw)


def constant_mixture_sequences(length: int):
    """Half the sequences all-zero, half all-one; maximally non-ergodic."""

    def draw(rng: np.random.Generator) -> np.ndarray:
        comp = rng.integers(0, 2, size=CHUNK).astype(float)
        return np.repeat(comp[:, None], length, axis=1)

    return _sequence_source(draw)


# --- eta covariance ---------------------------------------------------------------


def estimate_eta_covariance(
    sampler, pair: tuple[int, int], seed: int, n: int
) -> Estimate:
    """Sample covariance of eta at two points, with a moment-based stderr."""
    if n < 2:
        raise ValidationError("need n >= 2")
    a, b = pair
    xs = np.empty(n)
    ys = np.empty(n)
    for i, s in enumerate(sampler.stream(seed, n)):
        if s.eta is None:
            raise ValidationError("sampler does not expose eta")
        xs[i] = s.eta[a]
        ys[i] = s.eta[b]
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    cov = float((dx * dy).sum() / (n - 1))
    m22 = float((dx * dx * dy * dy).mean())
    se = math.sqrt(max(m22 - cov * cov, 0.0) / n)
    return Estimate(cov, se, n, (cov - 2.576 * se, cov + 2.576 * se))


# --- deliberately defective samplers (harness power self-tests) -------------------


class BiasedEdgeOrderSampler(OrderSamplerBase):
    """Scores z(a) + strength * sum over neighbors b of sign(a - b).

    Order-pattern laws then depend on adjacency, so exchangeability across
    an edge/non-edge type mismatch must fail.  The 2-point event has a
    closed form via the triangular law of a difference of uniforms:
    P(score(a) < score(b)) = F(delta) with delta the offset gap."""

    def __init__(self, S: FinStructure, strength: float):
        if not (0 <= strength <= 0.5):
            raise ValidationError("strength must sit in [0, 0.5]")
        self.structure = S
        self.strength = strength
        self.elements = tuple(S.elements)
        edges = S.table("E")
        self._offset = {
            a: strength * sum(
                (1 if a > b else -1) for x, b in edges if x == a
            )
            for a in self.elements
        }

    def _draw(self, rng: np.random.Generator, m: int) -> list[OrderSample]:
        k = len(self.elements)
        z = rng.random((m, k))
        out = []
        for row in z:
            latent = dict(zip(self.elements, row.tolist()))
            score = {a: latent[a] + self._offset[a] for a in self.elements}
            order = tuple(sorted(self.elements, key=lambda a: (score[a], a)))
            out.append(OrderSample(order=order, latent=latent, eta=score))
        return out


class BrokenCouplingSampler(OrderSamplerBase):
    """Order drawn from one latent batch, eta reported from another.

    Exists to prove test_monotone_coupling detects decoupling."""

    def __init__(self, S: FinStructure):
        self.structure = S
        self.elements = tuple(S.elements)

    def _draw(self, rng: np.random.Generator, m: int) -> list[OrderSample]:
        k = len(self.elements)
        z_order = rng.random((m, k))
        z_eta = rng.random((m, k))
        out = []
        for row_o, row_e in zip(z_order, z_eta):
            latent = dict(zip(self.elements, row_o.tolist()))
            eta = dict(zip(self.elements, row_e.tolist()))
            order = tuple(self.elements[i] for i in np.argsort(row_o, kind="stable"))
            out.append(OrderSample(order=order, latent=latent, eta=eta))
        return out
