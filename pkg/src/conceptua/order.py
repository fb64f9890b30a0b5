"""Finite preorders and posets, monotone maps, limits, and power lattices."""

import os
from dataclasses import dataclass
from typing import Iterator

from .errors import CarrierMismatchError, SizeLimitError, UnknownElementError
from .finrel import (
    FinFunction,
    FinSet,
    Relation,
    Subset,
    compose,
    derive_forward,
    derive_reverse,
    transpose,
)

__all__ = [
    "Preorder",
    "Poset",
    "MonotoneMap",
    "OrderBimodule",
    "EndorelationFlags",
    "same_order",
    "same_map",
    "pointwise_le",
    "pointwise_equiv",
    "all_monotone_maps",
    "classify_endorelation",
    "quotient",
    "product",
    "terminal",
    "equalizer",
    "PowerOrder",
    "power_order",
    "carrier_bound",
    "opposite",
    "up_segment",
    "down_segment",
    "bounds",
    "bimodule_of_map",
    "bimodule_01_embedding",
    "bimodule_10_embedding",
    "poset_join",
    "poset_meet",
    "is_complete_lattice",
    "find_order_isomorphism",
    "hasse_edges",
    "preorder_to_json",
    "preorder_from_json",
    "preorder_to_dot",
]

DEFAULT_CARRIER_BOUND = 20


def carrier_bound() -> int:
    """Power-order size cap; CONCEPTUA_MAX_CARRIER overrides the default of 20."""
    return int(os.environ.get("CONCEPTUA_MAX_CARRIER", DEFAULT_CARRIER_BOUND))


@dataclass(frozen=True)
class EndorelationFlags:
    reflexive: bool
    transitive: bool
    symmetric: bool
    antisymmetric: bool


def classify_endorelation(r: Relation) -> EndorelationFlags:
    """Test the four order axioms by the inclusion formulations."""
    if r.source != r.target:
        raise CarrierMismatchError("classify_endorelation: not an endorelation")
    ident = Relation.identity(r.source)
    rt = transpose(r)
    return EndorelationFlags(
        reflexive=ident <= r,
        transitive=compose(r, r) <= r,
        symmetric=r == rt,
        antisymmetric=r.intersection(rt) <= ident,
    )


@dataclass(frozen=True)
class Preorder:
    """A carrier with a reflexive, transitive endorelation."""

    carrier: FinSet
    leq: Relation

    def __post_init__(self):
        if self.leq.source != self.carrier or self.leq.target != self.carrier:
            raise CarrierMismatchError("order relation must be an endorelation on the carrier")
        flags = classify_endorelation(self.leq)
        if not flags.reflexive:
            raise ValueError("order relation is not reflexive")
        if not flags.transitive:
            raise ValueError("order relation is not transitive")

    @classmethod
    def discrete(cls, carrier: FinSet) -> "Preorder":
        return cls(carrier, Relation.identity(carrier))

    @classmethod
    def chain(cls, *labels: str) -> "Poset":
        n = len(labels)
        carrier = FinSet(tuple(labels))
        rows = tuple(((1 << n) - 1) & ~((1 << i) - 1) for i in range(n))
        return Poset(carrier, Relation(carrier, carrier, rows))

    @classmethod
    def from_pairs(cls, carrier: FinSet, pairs) -> "Preorder":
        """Reflexive-transitive closure of the given pairs."""
        rows = [1 << i for i in range(carrier.size)]
        for a, b in pairs:
            rows[carrier.index(a)] |= 1 << carrier.index(b)
        changed = True
        while changed:
            changed = False
            for i in range(carrier.size):
                acc = rows[i]
                for j in range(carrier.size):
                    if acc >> j & 1:
                        acc |= rows[j]
                if acc != rows[i]:
                    rows[i] = acc
                    changed = True
        return cls(carrier, Relation(carrier, carrier, tuple(rows)))

    @property
    def size(self) -> int:
        return self.carrier.size

    def le(self, a: str, b: str) -> bool:
        return self.leq.holds(a, b)

    def le_idx(self, i: int, j: int) -> bool:
        return self.leq.holds_idx(i, j)

    def is_poset(self) -> bool:
        return classify_endorelation(self.leq).antisymmetric

    def elements(self) -> tuple[str, ...]:
        return self.carrier.elements


@dataclass(frozen=True)
class Poset(Preorder):
    """A preorder whose order relation is also antisymmetric."""

    def __post_init__(self):
        super().__post_init__()
        if not classify_endorelation(self.leq).antisymmetric:
            raise ValueError("order relation is not antisymmetric")


def same_order(p: Preorder, q: Preorder) -> bool:
    """Carrier-label plus matrix equality, regardless of Preorder/Poset class."""
    return p.carrier == q.carrier and p.leq == q.leq


def opposite(p: Preorder) -> Preorder:
    cls = Poset if isinstance(p, Poset) else Preorder
    return cls(p.carrier, transpose(p.leq))


@dataclass(frozen=True)
class MonotoneMap:
    """An order-preserving function between preorders."""

    source: Preorder
    target: Preorder
    func: FinFunction

    def __post_init__(self):
        if self.func.source != self.source.carrier or self.func.target != self.target.carrier:
            raise CarrierMismatchError("function carriers do not match the orders")
        for i in range(self.source.size):
            row = self.source.leq.rows[i]
            fi = self.func.table[i]
            for j in range(self.source.size):
                if row >> j & 1 and not self.target.le_idx(fi, self.func.table[j]):
                    raise ValueError(
                        f"not monotone: {self.source.carrier.elements[i]} <= "
                        f"{self.source.carrier.elements[j]} but images are not ordered"
                    )

    @classmethod
    def identity(cls, p: Preorder) -> "MonotoneMap":
        return cls(p, p, FinFunction.identity(p.carrier))

    @classmethod
    def from_map(cls, source: Preorder, target: Preorder, mapping: dict) -> "MonotoneMap":
        return cls(source, target, FinFunction.from_map(source.carrier, target.carrier, mapping))

    def __call__(self, i: int) -> int:
        return self.func.table[i]

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        if not same_order(self.target, other.source):
            raise CarrierMismatchError("composing monotone maps with mismatched orders")
        return MonotoneMap(self.source, other.target, self.func.then(other.func))

    def is_isotone(self) -> bool:
        """Order is both preserved and reflected."""
        for i in range(self.source.size):
            for j in range(self.source.size):
                if self.source.le_idx(i, j) != self.target.le_idx(self.func.table[i], self.func.table[j]):
                    return False
        return True


def pointwise_le(f: MonotoneMap, g: MonotoneMap) -> bool:
    """Compare parallel monotone maps: f <= g iff f(a) <= g(a) everywhere."""
    if not same_order(f.source, g.source) or not same_order(f.target, g.target):
        raise CarrierMismatchError("pointwise_le: maps are not parallel")
    return all(f.target.le_idx(f.func.table[i], g.func.table[i]) for i in range(f.source.size))


def same_map(f: MonotoneMap, g: MonotoneMap) -> bool:
    """Structural equality: same orders (up to Poset/Preorder class) and table."""
    return (
        same_order(f.source, g.source)
        and same_order(f.target, g.target)
        and f.func.table == g.func.table
    )


def pointwise_equiv(f: MonotoneMap, g: MonotoneMap) -> bool:
    return pointwise_le(f, g) and pointwise_le(g, f)


@dataclass(frozen=True)
class OrderBimodule:
    """A relation between preorders closed under both orders."""

    source: Preorder
    target: Preorder
    rel: Relation

    def __post_init__(self):
        if self.rel.source != self.source.carrier or self.rel.target != self.target.carrier:
            raise CarrierMismatchError("bimodule relation carriers do not match the orders")
        if not compose(self.source.leq, self.rel) <= self.rel:
            raise ValueError("not left-closed: leq o rel exceeds rel")
        if not compose(self.rel, self.target.leq) <= self.rel:
            raise ValueError("not right-closed: rel o leq exceeds rel")


def bimodule_of_map(f: MonotoneMap, direction: str = "forward") -> OrderBimodule:
    """Forward: rel(a,b) iff f(a) <= b.  Reverse: rel(b,a) iff b <= f(a).

    Over ordered carriers the two are not transposes of each other; they
    agree with transposition exactly when the target order is discrete.
    """
    tgt = f.target
    if direction == "forward":
        rows = tuple(tgt.leq.rows[f.func.table[i]] for i in range(f.source.size))
        return OrderBimodule(f.source, tgt, Relation(f.source.carrier, tgt.carrier, rows))
    if direction == "reverse":
        rows = []
        for b in range(tgt.size):
            mask = 0
            for a in range(f.source.size):
                if tgt.le_idx(b, f.func.table[a]):
                    mask |= 1 << a
            rows.append(mask)
        return OrderBimodule(tgt, f.source, Relation(tgt.carrier, f.source.carrier, tuple(rows)))
    raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")


def bimodule_01_embedding(r: OrderBimodule) -> MonotoneMap:
    """Collapse a bimodule to a map by taking the meet of each row.

    Inverts ``bimodule_of_map(f, "forward")`` when the target is a complete
    lattice: the meet of {b | f(a) <= b} is f(a).
    """
    table = []
    for i in range(r.source.size):
        j = poset_meet(r.target, Subset(r.target.carrier, r.rel.rows[i]))
        if j is None:
            raise ValueError("row has no meet; target is not a complete lattice")
        table.append(j)
    return MonotoneMap(r.source, r.target,
                       FinFunction(r.source.carrier, r.target.carrier, tuple(table)))


def bimodule_10_embedding(r: OrderBimodule) -> MonotoneMap:
    """Collapse a bimodule to a map by taking the join of each column.

    Inverts ``bimodule_of_map(f, "reverse")`` when the bimodule's source is a
    complete lattice: the join of {b | b <= f(a)} is f(a).
    """
    cols = transpose(r.rel)
    table = []
    for j in range(r.target.size):
        i = poset_join(r.source, Subset(r.source.carrier, cols.rows[j]))
        if i is None:
            raise ValueError("column has no join; source is not a complete lattice")
        table.append(i)
    return MonotoneMap(r.target, r.source,
                       FinFunction(r.target.carrier, r.source.carrier, tuple(table)))


def quotient(p: Preorder) -> tuple[Poset, MonotoneMap]:
    """Collapse each a == b (both a<=b and b<=a) class to one poset element.

    Class representatives are the minimum element index; the class label is
    the representative's label wrapped in braces.
    """
    n = p.size
    equiv_rows = [p.leq.rows[i] & transpose(p.leq).rows[i] for i in range(n)]
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for i in range(n):
        if i not in rep_of:
            cls_idx = len(reps)
            reps.append(i)
            for j in range(i, n):
                if equiv_rows[i] >> j & 1:
                    rep_of[j] = cls_idx
    labels = tuple("{" + p.carrier.elements[r] + "}" for r in reps)
    qcarrier = FinSet(labels)
    rows = []
    for r in reps:
        mask = 0
        for c, s in enumerate(reps):
            if p.le_idx(r, s):
                mask |= 1 << c
        rows.append(mask)
    q = Poset(qcarrier, Relation(qcarrier, qcarrier, tuple(rows)))
    canon = MonotoneMap(p, q, FinFunction(p.carrier, qcarrier, tuple(rep_of[i] for i in range(n))))
    return q, canon


@dataclass(frozen=True)
class OrderProduct:
    order: Preorder
    proj0: MonotoneMap
    proj1: MonotoneMap


def product(p: Preorder, q: Preorder) -> OrderProduct:
    """Componentwise order on pairs, with its two projections."""
    labels = tuple(f"({a},{b})" for a in p.carrier.elements for b in q.carrier.elements)
    carrier = FinSet(labels)
    m = q.size
    rows = []
    for i in range(p.size):
        for j in range(q.size):
            mask = 0
            prow, qrow = p.leq.rows[i], q.leq.rows[j]
            for i2 in range(p.size):
                if prow >> i2 & 1:
                    for j2 in range(q.size):
                        if qrow >> j2 & 1:
                            mask |= 1 << (i2 * m + j2)
            rows.append(mask)
    cls = Poset if isinstance(p, Poset) and isinstance(q, Poset) else Preorder
    order = cls(carrier, Relation(carrier, carrier, tuple(rows)))
    proj0 = MonotoneMap(order, p, FinFunction(carrier, p.carrier, tuple(k // m for k in range(p.size * m))))
    proj1 = MonotoneMap(order, q, FinFunction(carrier, q.carrier, tuple(k % m for k in range(p.size * m))))
    return OrderProduct(order, proj0, proj1)


def terminal() -> Poset:
    one = FinSet(("*",))
    return Poset(one, Relation.identity(one))


def equalizer(f: MonotoneMap, g: MonotoneMap) -> tuple[Preorder, MonotoneMap]:
    """Sub-preorder where f and g agree, with the kernel order and inclusion."""
    if not same_order(f.source, g.source) or not same_order(f.target, g.target):
        raise CarrierMismatchError("equalizer needs a parallel pair")
    kept = [i for i in range(f.source.size) if f.func.table[i] == g.func.table[i]]
    carrier = FinSet(tuple(f.source.carrier.elements[i] for i in kept))
    rows = []
    for i in kept:
        mask = 0
        for c, j in enumerate(kept):
            if f.source.le_idx(i, j):
                mask |= 1 << c
        rows.append(mask)
    cls = Poset if isinstance(f.source, Poset) else Preorder
    sub = cls(carrier, Relation(carrier, carrier, tuple(rows)))
    incl = MonotoneMap(sub, f.source, FinFunction(carrier, f.source.carrier, tuple(kept)))
    return sub, incl


@dataclass(frozen=True)
class PowerOrder:
    """The lattice of all subsets of a base carrier, ordered by inclusion.

    Carrier element i is the subset with bitset value i, so indices double as
    bitmasks; the element order is bitset value ascending.
    """

    base: FinSet
    poset: Poset

    @property
    def size(self) -> int:
        return self.poset.size

    def subset_at(self, i: int) -> Subset:
        return Subset(self.base, i)

    def index_of(self, x: Subset) -> int:
        if x.carrier != self.base:
            raise CarrierMismatchError("subset not over this power order's base")
        return x.bits

    def meet(self, i: int, j: int) -> int:
        return i & j

    def join(self, i: int, j: int) -> int:
        return i | j

    def implies(self, i: int, j: int) -> int:
        return (~i | j) & self.base.full_mask

    def family_intersection(self, indices) -> int:
        acc = self.base.full_mask
        for i in indices:
            acc &= i
        return acc

    def family_union(self, indices) -> int:
        acc = 0
        for i in indices:
            acc |= i
        return acc


def power_order(a: FinSet, bound: int | None = None) -> PowerOrder:
    """Materialize the full subset lattice of ``a``; refuses above the bound."""
    limit = carrier_bound() if bound is None else bound
    if a.size > limit:
        raise SizeLimitError(f"power order of a {a.size}-element carrier exceeds the bound {limit}")
    n = 1 << a.size
    labels = tuple("{" + ",".join(Subset(a, i).labels()) + "}" for i in range(n))
    carrier = FinSet(labels)
    rows = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if i & ~j == 0:
                mask |= 1 << j
        rows.append(mask)
    return PowerOrder(a, Poset(carrier, Relation(carrier, carrier, tuple(rows))))


def up_segment(p: Preorder, a: str) -> Subset:
    """All x with a <= x."""
    return Subset(p.carrier, p.leq.rows[p.carrier.index(a)])


def down_segment(p: Preorder, a: str) -> Subset:
    """All x with x <= a."""
    j = p.carrier.index(a)
    mask = 0
    for i, row in enumerate(p.leq.rows):
        if row >> j & 1:
            mask |= 1 << i
    return Subset(p.carrier, mask)


def bounds(p: Preorder, x: Subset) -> tuple[Subset, Subset]:
    """Common upper and lower bounds of x; both are the full carrier for x empty."""
    if x.carrier != p.carrier:
        raise CarrierMismatchError("bounds: subset not over the order's carrier")
    upper = derive_forward(p.leq, x)
    lower = derive_reverse(p.leq, x)
    return upper, lower


def poset_join(p: Preorder, x: Subset) -> int | None:
    """Least upper bound of x as a carrier index, or None if it does not exist."""
    upper, _ = bounds(p, x)
    for i in upper.indices():
        if all(p.le_idx(i, j) for j in upper.indices()):
            return i
    return None


def poset_meet(p: Preorder, x: Subset) -> int | None:
    """Greatest lower bound of x as a carrier index, or None."""
    _, lower = bounds(p, x)
    for i in lower.indices():
        if all(p.le_idx(j, i) for j in lower.indices()):
            return i
    return None


def is_complete_lattice(p: Preorder) -> bool:
    """For finite posets: antisymmetric, nonempty, and closed under pair joins/meets."""
    if p.size == 0 or not p.is_poset():
        return False
    if poset_join(p, Subset.empty(p.carrier)) is None:  # bottom
        return False
    if poset_meet(p, Subset.empty(p.carrier)) is None:  # top
        return False
    for i in range(p.size):
        for j in range(i + 1, p.size):
            pair = Subset(p.carrier, (1 << i) | (1 << j))
            if poset_join(p, pair) is None or poset_meet(p, pair) is None:
                return False
    return True


def find_order_isomorphism(p: Preorder, q: Preorder) -> FinFunction | None:
    """Backtracking search for an order isomorphism; practical up to ~10 elements."""
    n = p.size
    if n != q.size:
        return None

    def profile(order: Preorder, i: int) -> tuple[int, int]:
        up = sum(1 for j in range(order.size) if order.le_idx(i, j))
        down = sum(1 for j in range(order.size) if order.le_idx(j, i))
        return up, down

    p_prof = [profile(p, i) for i in range(n)]
    q_prof = [profile(q, i) for i in range(n)]
    assignment: list[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for cand in range(n):
            if used[cand] or p_prof[i] != q_prof[cand]:
                continue
            ok = True
            for prev in range(i):
                if p.le_idx(i, prev) != q.le_idx(cand, assignment[prev]):
                    ok = False
                    break
                if p.le_idx(prev, i) != q.le_idx(assignment[prev], cand):
                    ok = False
                    break
            if ok:
                used[cand] = True
                assignment.append(cand)
                if extend(i + 1):
                    return True
                assignment.pop()
                used[cand] = False
        return False

    if extend(0):
        return FinFunction(p.carrier, q.carrier, tuple(assignment))
    return None


def is_pseudo_epimorphism(e: MonotoneMap, probe_size: int = 3) -> bool:
    """Bounded check: no parallel pair into a probe preorder merges under e.

    Probes range over all preorders on at most ``probe_size`` elements, so
    this refutes pseudo-epiness when a small counterexample exists.
    """
    for c in _all_preorders(probe_size):
        maps = list(_all_monotone_maps(e.target, c))
        for f in maps:
            for g in maps:
                ef = e.then(f)
                eg = e.then(g)
                if pointwise_equiv(ef, eg) and not pointwise_equiv(f, g):
                    return False
    return True


def is_pseudo_monomorphism(m: MonotoneMap, probe_size: int = 3) -> bool:
    """Bounded dual check against parallel pairs out of a probe preorder."""
    for c in _all_preorders(probe_size):
        maps = list(_all_monotone_maps(c, m.source))
        for f in maps:
            for g in maps:
                if pointwise_equiv(f.then(m), g.then(m)) and not pointwise_equiv(f, g):
                    return False
    return True


def _all_preorders(max_size: int) -> Iterator[Preorder]:
    import itertools

    for n in range(max_size + 1):
        carrier = FinSet(tuple(f"e{i}" for i in range(n)))
        strict = [(i, j) for i in range(n) for j in range(n) if i != j]
        for picks in itertools.product((False, True), repeat=len(strict)):
            rows = [1 << i for i in range(n)]
            for (i, j), on in zip(strict, picks):
                if on:
                    rows[i] |= 1 << j
            rel = Relation(carrier, carrier, tuple(rows))
            flags = classify_endorelation(rel)
            if flags.transitive:
                yield Preorder(carrier, rel)


def _all_monotone_maps(p: Preorder, q: Preorder) -> Iterator[MonotoneMap]:
    import itertools

    for table in itertools.product(range(q.size), repeat=p.size):
        ok = True
        for i in range(p.size):
            for j in range(p.size):
                if p.le_idx(i, j) and not q.le_idx(table[i], table[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield MonotoneMap(p, q, FinFunction(p.carrier, q.carrier, table))


def all_monotone_maps(p: Preorder, q: Preorder) -> Iterator[MonotoneMap]:
    """Enumerate every monotone map p -> q (exponential; keep carriers small)."""
    return _all_monotone_maps(p, q)


def hasse_edges(p: Preorder) -> list[tuple[int, int]]:
    """Covering pairs (i, j) of the reflexive-transitive reduction."""
    n = p.size
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not p.le_idx(i, j) or p.le_idx(j, i):
                continue
            if any(
                k != i and k != j and p.le_idx(i, k) and p.le_idx(k, j)
                and not p.le_idx(k, i) and not p.le_idx(j, k)
                for k in range(n)
            ):
                continue
            edges.append((i, j))
    return edges


def preorder_to_json(p: Preorder) -> dict:
    return {
        "elements": list(p.carrier.elements),
        "leq": [[i, j] for i in range(p.size) for j in range(p.size) if p.le_idx(i, j)],
    }


def preorder_from_json(data: dict) -> Preorder:
    carrier = FinSet(tuple(data["elements"]))
    rows = [0] * carrier.size
    for i, j in data["leq"]:
        if not (0 <= i < carrier.size and 0 <= j < carrier.size):
            raise UnknownElementError(f"leq pair [{i}, {j}] outside the carrier")
        rows[i] |= 1 << j
    return Preorder(carrier, Relation(carrier, carrier, tuple(rows)))


def preorder_to_dot(p: Preorder, name: str = "order") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for label in p.carrier.elements:
        lines.append(f'  "{label}";')
    for i, j in hasse_edges(p):
        lines.append(f'  "{p.carrier.elements[i]}" -> "{p.carrier.elements[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
