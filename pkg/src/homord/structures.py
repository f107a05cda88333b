"""Finite relational structures, induced substructures, and tuple type codes.

Everything downstream (builders, orbit machinery, path search, samplers, the
rational order-system) works over `FinStructure`: a finite universe {0..n-1},
a purely relational signature, explicit tuple tables, and optional sort labels.

A tuple's *type code* is a canonical byte string determined by the induced
tables on the tuple with positions named.  Two tuples get equal codes exactly
when the position-respecting map between them is an isomorphism of induced
substructures.  Codes are deterministic across runs and platforms: they are
built by direct serialization, never from `hash()`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import ResourceLimitError, ValidationError

# Opaque canonical byte string for a tuple's quantifier-free type.
TypeCode = bytes

# How many k-tuples enumerate_types is willing to walk.
_ENUM_CAP = 2_000_000


@dataclass(frozen=True)
class Signature:
    """Relation names with arities.  Purely relational: no function symbols."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate relation name in signature")
        for name, arity in self.relations:
            if not name or any(ch.isspace() for ch in name):
                raise ValidationError(f"bad relation name {name!r}")
            if arity < 1:
                raise ValidationError(f"relation {name}: arity {arity} < 1")

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for rel, arity in self.relations:
            if rel == name:
                return arity
        raise ValidationError(f"unknown relation {name!r}")


@dataclass(frozen=True)
class FinStructure:
    """Finite structure on universe {0..size-1} with explicit tuple tables.

    tables maps every relation name of the signature to a frozenset of
    int tuples.  sorts, when present, labels each element with a sort name;
    sorts are part of the structure (isomorphisms must preserve them).
    """

    signature: Signature
    size: int
    tables: dict[str, frozenset[tuple[int, ...]]]
    sorts: tuple[str, ...] | None = None

    @property
    def elements(self) -> range:
        return range(self.size)

    def table(self, name: str) -> frozenset[tuple[int, ...]]:
        try:
            return self.tables[name]
        except KeyError:
            raise ValidationError(f"unknown relation {name!r}") from None

    def holds(self, name: str, points: tuple[int, ...]) -> bool:
        return points in self.table(name)

    def sort_of(self, element: int) -> str | None:
        if self.sorts is None:
            return None
        return self.sorts[element]

    def elements_of_sort(self, label: str) -> tuple[int, ...]:
        if self.sorts is None:
            raise ValidationError("structure has no sorts")
        return tuple(i for i in self.elements if self.sorts[i] == label)


def make_structure(
    signature: Signature,
    size: int,
    tables: dict[str, set[tuple[int, ...]] | frozenset[tuple[int, ...]]],
    sorts: tuple[str, ...] | list[str] | None = None,
) -> FinStructure:
    """Validate eagerly and freeze.  Missing relations get empty tables.

    Rejected: negative size, tuples out of range, arity mismatches, table
    entries for relations not in the signature, sort vector of wrong length.
    """
    if size < 0:
        raise ValidationError(f"size {size} < 0")
    declared = set(signature.names())
    for name in tables:
        if name not in declared:
            raise ValidationError(f"table for undeclared relation {name!r}")
    frozen: dict[str, frozenset[tuple[int, ...]]] = {}
    for name, arity in signature.relations:
        rows = tables.get(name, frozenset())
        out = set()
        for tup in rows:
            tup = tuple(tup)
            if len(tup) != arity:
                raise ValidationError(
                    f"relation {name}: tuple {tup} has arity {len(tup)}, expected {arity}"
                )
            for x in tup:
                if not isinstance(x, int) or isinstance(x, bool) or not (0 <= x < size):
                    raise ValidationError(f"relation {name}: point {x!r} out of range")
            out.add(tup)
        frozen[name] = frozenset(out)
    sort_tuple: tuple[str, ...] | None = None
    if sorts is not None:
        sort_tuple = tuple(sorts)
        if len(sort_tuple) != size:
            raise ValidationError("sorts length does not match size")
    return FinStructure(signature=signature, size=size, tables=frozen, sorts=sort_tuple)


def _check_points(S: FinStructure, points: tuple[int, ...]) -> None:
    for p in points:
        if not (0 <= p < S.size):
            raise ValidationError(f"point {p} out of range")
    if len(set(points)) != len(points):
        raise ValidationError(f"repeated point in {points}")


def induced_substructure(S: FinStructure, points: tuple[int, ...]) -> FinStructure:
    """Pull back along position i -> points[i]; result lives on {0..k-1}."""
    points = tuple(points)
    _check_points(S, points)
    k = len(points)
    tables: dict[str, frozenset[tuple[int, ...]]] = {}
    for name, arity in S.signature.relations:
        table = S.tables[name]
        rows = set()
        for idx in itertools.product(range(k), repeat=arity):
            if tuple(points[i] for i in idx) in table:
                rows.add(idx)
        tables[name] = frozenset(rows)
    sorts = None
    if S.sorts is not None:
        sorts = tuple(S.sorts[p] for p in points)
    return FinStructure(signature=S.signature, size=k, tables=tables, sorts=sorts)


def canonical_type(S: FinStructure, points: tuple[int, ...]) -> TypeCode:
    """Canonical code of the tuple's quantifier-free type, positions named.

    Serializes k, the per-position sort labels, and for each relation the
    sorted set of index tuples that hold on the tuple.  No canonical labeling
    search is needed: positions are named, so the induced tables are already
    a complete invariant.
    """
    points = tuple(points)
    _check_points(S, points)
    k = len(points)
    parts = [f"k{k}"]
    if S.sorts is not None:
        parts.append("s" + ",".join(S.sorts[p] for p in points))
    for name, arity in S.signature.relations:
        table = S.tables[name]
        hits = []
        for idx in itertools.product(range(k), repeat=arity):
            if tuple(points[i] for i in idx) in table:
                hits.append(idx)
        hits.sort()
        parts.append(name + "=" + ";".join(",".join(map(str, h)) for h in hits))
    return "|".join(parts).encode("ascii")


def type_code_str(code: TypeCode) -> str:
    """Printable form of a type code (used by JSON output)."""
    return code.decode("ascii")


def _element_invariant(S: FinStructure, x: int):
    """Cheap per-element invariant for isomorphism pruning."""
    counts = []
    for name, arity in S.signature.relations:
        for pos in range(arity):
            counts.append(sum(1 for tup in S.tables[name] if tup[pos] == x))
    return (S.sort_of(x), tuple(counts))


def find_isomorphism(S: FinStructure, T: FinStructure) -> list[int] | None:
    """Backtracking isomorphism search; returns image list or None.

    Prunes on element invariants (sort label, incidence counts per relation
    position) and checks partial maps in both directions.
    """
    if S.size != T.size or S.signature != T.signature:
        return None
    n = S.size
    if n == 0:
        return []
    inv_s = [_element_invariant(S, x) for x in range(n)]
    inv_t = [_element_invariant(T, x) for x in range(n)]
    if sorted(inv_s) != sorted(inv_t):
        return None

    candidates = [[y for y in range(n) if inv_t[y] == inv_s[x]] for x in range(n)]
    # most constrained first
    order = sorted(range(n), key=lambda x: len(candidates[x]))
    image: list[int | None] = [None] * n
    used = [False] * n

    rels = S.signature.relations

    def consistent(x: int, y: int) -> bool:
        # check all tuples fully inside the assigned domain that touch x / y
        assigned = [(a, image[a]) for a in range(n) if image[a] is not None]
        dom = {a for a, _ in assigned}
        dom.add(x)
        img = {b for _, b in assigned}
        img.add(y)
        trial = dict(assigned)
        trial[x] = y
        inverse = {b: a for a, b in trial.items()}
        for name, arity in rels:
            ts, tt = S.tables[name], T.tables[name]
            for tup in ts:
                if x in tup and all(p in dom for p in tup):
                    if tuple(trial[p] for p in tup) not in tt:
                        return False
            for tup in tt:
                if y in tup and all(q in img for q in tup):
                    if tuple(inverse[q] for q in tup) not in ts:
                        return False
        return True

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        x = order[depth]
        for y in candidates[x]:
            if used[y]:
                continue
            if consistent(x, y):
                image[x] = y
                used[y] = True
                if extend(depth + 1):
                    return True
                image[x] = None
                used[y] = False
        return False

    if extend(0):
        return [image[x] for x in range(n)]  # type: ignore[misc]
    return None


def enumerate_types(S: FinStructure, k: int) -> set[TypeCode]:
    """All type codes of distinct k-tuples.  k=0 gives the singleton empty type."""
    if k < 0:
        raise ValidationError(f"k {k} < 0")
    if k == 0:
        return {canonical_type(S, ())}
    if k > S.size:
        raise ValidationError(f"k {k} exceeds size {S.size}")
    count = 1
    for i in range(k):
        count *= S.size - i
    if count > _ENUM_CAP:
        raise ResourceLimitError(f"{count} tuples exceed enumeration cap {_ENUM_CAP}")
    return {canonical_type(S, tup) for tup in itertools.permutations(range(S.size), k)}


# --- text format and JSON mirror ------------------------------------------
#
# sig E:2 R:1
# size 4
# sorts M M Mp Mp        (optional)
# rel E 0 1
#
# The JSON mirror uses keys sig/size/sorts/rel with the same content.


def structure_to_text(S: FinStructure) -> str:
    lines = ["sig " + " ".join(f"{name}:{arity}" for name, arity in S.signature.relations)]
    lines[0] = lines[0].rstrip()
    lines.append(f"size {S.size}")
    if S.sorts is not None:
        lines.append("sorts " + " ".join(S.sorts))
    for name, _ in S.signature.relations:
        for tup in sorted(S.tables[name]):
            lines.append("rel " + name + " " + " ".join(map(str, tup)))
    return "\n".join(lines) + "\n"


def structure_from_text(text: str) -> FinStructure:
    sig: Signature | None = None
    size: int | None = None
    sorts: tuple[str, ...] | None = None
    tables: dict[str, set[tuple[int, ...]]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "sig":
            rels = []
            for item in rest:
                if ":" not in item:
                    raise ValidationError(f"bad sig item {item!r}")
                name, arity = item.rsplit(":", 1)
                rels.append((name, int(arity)))
            sig = Signature(tuple(rels))
        elif head == "size":
            size = int(rest[0])
        elif head == "sorts":
            sorts = tuple(rest)
        elif head == "rel":
            name = rest[0]
            tables.setdefault(name, set()).add(tuple(int(x) for x in rest[1:]))
        else:
            raise ValidationError(f"unknown line {line!r}")
    if sig is None or size is None:
        raise ValidationError("missing sig or size line")
    return make_structure(sig, size, tables, sorts)


def structure_to_json(S: FinStructure) -> dict:
    return {
        "sig": [[name, arity] for name, arity in S.signature.relations],
        "size": S.size,
        "sorts": list(S.sorts) if S.sorts is not None else None,
        "rel": {name: sorted([list(t) for t in S.tables[name]]) for name, _ in S.signature.relations},
    }


def structure_from_json(obj: dict) -> FinStructure:
    sig = Signature(tuple((name, int(arity)) for name, arity in obj["sig"]))
    tables = {
        name: {tuple(int(x) for x in tup) for tup in rows}
        for name, rows in obj.get("rel", {}).items()
    }
    sorts = obj.get("sorts")
    return make_structure(sig, int(obj["size"]), tables, tuple(sorts) if sorts else None)


def structure_dumps(S: FinStructure) -> str:
    return json.dumps(structure_to_json(S), sort_keys=True)
