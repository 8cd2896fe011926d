"""Finite meet-semilattices, monotone maps and exhaustive adjoint search.

Every law of a doctrine eventually becomes a question about a finite poset:
an inequality between two fiber elements, or the existence of a Galois
adjoint to a monotone map.  Fibers come in three flavours here:

* :class:`FiniteSemilattice` -- explicit elements with a closed order matrix;
* :class:`PowersetLattice` -- subsets of ``{0..n-1}`` encoded as bitmasks,
  enumerated lazily so that single elements of huge fibers stay usable;
* :class:`SubSemilattice` -- a meet-closed subset of another fiber, used for
  descent data.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Sequence

import numpy as np

from .report import FiberTooLarge, MalformedInput, NoAdjoint, StructureReport

#: Largest fiber the checkers will enumerate.  Larger fibers are still usable
#: element-wise but quantification over them is reported as skipped.
FIBER_LIMIT = 1024


def set_fiber_limit(limit: int) -> int:
    global FIBER_LIMIT
    previous, FIBER_LIMIT = FIBER_LIMIT, int(limit)
    return previous


class MeetSemilattice:
    """Interface shared by all fibers."""

    top: Hashable

    @property
    def size(self) -> int:
        raise NotImplementedError

    def elements(self) -> Sequence:
        raise NotImplementedError

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def meet(self, x, y):
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        raise NotImplementedError

    def enumerable(self) -> bool:
        return self.size <= FIBER_LIMIT

    def eq(self, x, y) -> bool:
        return x == y

    def meet_all(self, xs: Iterable):
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out

    def show(self, x) -> str:
        return repr(x)


class FiniteSemilattice(MeetSemilattice):
    """Explicit finite meet-semilattice.

    ``leq`` is stored as a boolean matrix indexed by element position; meets
    come either from a table or from a callable, memoised on first use.
    """

    def __init__(self, elements, le_matrix, top, meet=None, name=""):
        self._elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self._elements)}
        self._le = np.asarray(le_matrix, dtype=bool)
        self.top = top
        self._meet_fn = meet
        self._meet_cache: dict = {}
        self.name = name

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pairs(cls, elements, pairs, top=None, meet=None, close=True, name=""):
        """Build from a pair list; raises :class:`MalformedInput` on bad data.

        Reflexive pairs are always added; with ``close=True`` the list is
        also closed transitively.  ``meet`` may be a mapping ``(x, y) -> z``;
        when omitted meets are computed as greatest lower bounds.
        """
        report = check_semilattice(elements, pairs, top, meet, close=close)
        if not report:
            raise MalformedInput(f"not a meet-semilattice: {report.counterexample}")
        elements = tuple(elements)
        le = order_matrix(elements, pairs, close=close)
        top = top if top is not None else _maximum(elements, le)
        lattice = cls(elements, le, top, name=name)
        if meet is not None:
            table = dict(meet)
            lattice._meet_fn = lambda x, y: table[(x, y)] if (x, y) in table else table[(y, x)]
        return lattice

    @classmethod
    def from_leq(cls, elements, leq: Callable, top, meet: Callable | None = None, name=""):
        elements = tuple(elements)
        le = np.array([[bool(leq(x, y)) for y in elements] for x in elements], dtype=bool)
        return cls(elements, le, top, meet, name=name)

    # -- interface --------------------------------------------------------

    @property
    def size(self):
        return len(self._elements)

    def elements(self):
        return self._elements

    def index(self, x) -> int:
        return self._index[x]

    def __contains__(self, x):
        try:
            return x in self._index
        except TypeError:
            return False

    def leq(self, x, y):
        return bool(self._le[self._index[x], self._index[y]])

    def meet(self, x, y):
        key = (x, y)
        hit = self._meet_cache.get(key)
        if hit is not None:
            return hit
        z = self._meet_fn(x, y) if self._meet_fn is not None else self._glb(x, y)
        self._meet_cache[key] = z
        return z

    def _glb(self, x, y):
        i, j = self._index[x], self._index[y]
        lower = np.flatnonzero(self._le[:, i] & self._le[:, j])
        for k in lower:
            if self._le[lower, k].all():
                return self._elements[k]
        raise MalformedInput(f"no meet for {x!r}, {y!r}")

    def matrix(self) -> np.ndarray:
        return self._le.copy()

    def __repr__(self):
        return f"FiniteSemilattice({self.name or self.size})"


class PowersetLattice(MeetSemilattice):
    """Subsets of ``{0, ..., n-1}`` as integer bitmasks, ordered by inclusion."""

    def __init__(self, n: int):
        self.n = n
        self.top = (1 << n) - 1

    @property
    def size(self):
        return 1 << self.n

    def elements(self):
        if self.size > FIBER_LIMIT:
            raise FiberTooLarge(f"powerset of {self.n} points has {self.size} elements")
        return range(self.size)

    def __contains__(self, x):
        return isinstance(x, int) and 0 <= x <= self.top

    def leq(self, x, y):
        return x & ~y == 0

    def meet(self, x, y):
        return x & y

    def show(self, x):
        return "{" + ",".join(str(i) for i in members(x)) + "}"

    def __eq__(self, other):
        return isinstance(other, PowersetLattice) and other.n == self.n

    def __hash__(self):
        return hash(("powerset", self.n))

    def __repr__(self):
        return f"PowersetLattice({self.n})"


def members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(points: Iterable[int]) -> int:
    out = 0
    for p in points:
        out |= 1 << p
    return out


class SubSemilattice(MeetSemilattice):
    """A top-containing, meet-closed subset of ``parent`` with the induced order."""

    def __init__(self, parent: MeetSemilattice, elements, name=""):
        self.parent = parent
        self._elements = tuple(elements)
        self._set = frozenset(self._elements)
        self.top = parent.top
        self.name = name

    @property
    def size(self):
        return len(self._elements)

    def elements(self):
        return self._elements

    def __contains__(self, x):
        return x in self._set

    def leq(self, x, y):
        return self.parent.leq(x, y)

    def meet(self, x, y):
        return self.parent.meet(x, y)

    def show(self, x):
        return self.parent.show(x)

    def __repr__(self):
        return f"SubSemilattice({self.name or self.size} of {self.parent!r})"


class MonotoneMap:
    """A map between fibers given by a callable, memoised per argument."""

    def __init__(self, source: MeetSemilattice, target: MeetSemilattice, fn, name=""):
        self.source = source
        self.target = target
        self._fn = fn
        self._cache: dict = {}
        self.name = name

    def __call__(self, x):
        try:
            return self._cache[x]
        except KeyError:
            y = self._cache[x] = self._fn(x)
            return y

    def graph(self) -> dict:
        return {x: self(x) for x in self.source.elements()}

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        return MonotoneMap(self.source, other.target, lambda x: other(self(x)),
                           f"{other.name}.{self.name}")

    def __repr__(self):
        return f"MonotoneMap({self.name})"


def identity_map(lattice: MeetSemilattice) -> MonotoneMap:
    return MonotoneMap(lattice, lattice, lambda x: x, "id")


def table_map(source, target, graph: dict, name="") -> MonotoneMap:
    return MonotoneMap(source, target, graph.__getitem__, name)


# ---------------------------------------------------------------------------
# validation


def order_matrix(elements: Sequence, pairs, close=True) -> np.ndarray:
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    le = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        if a not in index or b not in index:
            raise MalformedInput(f"order pair ({a!r}, {b!r}) names an unknown element")
        le[index[a], index[b]] = True
    le |= np.eye(n, dtype=bool)
    if close:
        for k in range(n):  # Warshall
            le |= np.outer(le[:, k], le[k, :])
    return le


def _maximum(elements, le):
    for k, x in enumerate(elements):
        if le[:, k].all():
            return x
    return None


def check_semilattice(elements, pairs, top=None, meet=None, close=True) -> StructureReport:
    """Validate raw order data against the meet-semilattice axioms.

    ``meet`` may be ``None`` (greatest lower bounds are then required to
    exist) or a mapping ``(x, y) -> z`` that must agree with them.
    """
    name = "semilattice"
    elements = list(elements)
    if not elements:
        raise MalformedInput("a fiber needs at least one element")
    if len(set(elements)) != len(elements):
        raise MalformedInput("duplicate element identifiers")
    le = order_matrix(elements, pairs, close=close)
    n = len(elements)
    checked = 0
    for i in range(n):
        checked += 1
        if not le[i, i]:
            return StructureReport.fail(name, {"axiom": "reflexivity", "element": elements[i]}, checked)
    for i in range(n):
        for j in range(n):
            checked += 1
            if i != j and le[i, j] and le[j, i]:
                return StructureReport.fail(
                    name, {"axiom": "antisymmetry", "pair": (elements[i], elements[j])}, checked)
            if le[i, j]:
                bad = np.flatnonzero(le[j] & ~le[i])
                if bad.size:
                    return StructureReport.fail(
                        name, {"axiom": "transitivity",
                               "triple": (elements[i], elements[j], elements[bad[0]]),
                               "missing_pair": (elements[i], elements[bad[0]])}, checked)
    maximum = _maximum(elements, le)
    if maximum is None:
        return StructureReport.fail(name, {"axiom": "no maximum"}, checked)
    if top is not None:
        if top not in elements:
            raise MalformedInput(f"top {top!r} is not an element")
        if top != maximum:
            return StructureReport.fail(name, {"axiom": "top is not the maximum", "top": top}, checked)
    table = dict(meet) if meet is not None else None
    for i in range(n):
        for j in range(n):
            checked += 1
            lower = np.flatnonzero(le[:, i] & le[:, j])
            glb = [k for k in lower if le[lower, k].all()]
            if not glb:
                return StructureReport.fail(
                    name, {"axiom": "meet exists", "pair": (elements[i], elements[j])}, checked)
            if table is not None:
                given = table.get((elements[i], elements[j]), table.get((elements[j], elements[i])))
                if given is None or given not in elements:
                    raise MalformedInput(f"meet table misses ({elements[i]!r}, {elements[j]!r})")
                if given != elements[glb[0]]:
                    return StructureReport.fail(
                        name, {"axiom": "meet is greatest lower bound",
                               "pair": (elements[i], elements[j]), "given": given,
                               "expected": elements[glb[0]]}, checked)
    return StructureReport.ok(name, checked)


def is_monotone(m: MonotoneMap) -> StructureReport:
    checked = 0
    src, tgt = m.source, m.target
    xs = list(src.elements())
    for x in xs:
        for y in xs:
            checked += 1
            if src.leq(x, y) and not tgt.leq(m(x), m(y)):
                return StructureReport.fail("monotone", {"pair": (x, y)}, checked)
    return StructureReport.ok("monotone", checked)


def preserves_meets(m: MonotoneMap) -> StructureReport:
    """Exhaustively test ``m(top) = top`` and ``m(x ^ y) = m(x) ^ m(y)``."""
    name = "preserves meets"
    src, tgt = m.source, m.target
    if not tgt.eq(m(src.top), tgt.top):
        return StructureReport.fail(name, {"clause": "top", "image": m(src.top)}, 1)
    xs = list(src.elements())
    checked = 1
    for i, x in enumerate(xs):
        for y in xs[i:]:
            checked += 1
            if not tgt.eq(m(src.meet(x, y)), tgt.meet(m(x), m(y))):
                return StructureReport.fail(name, {"clause": "meet", "pair": (x, y)}, checked)
    return StructureReport.ok(name, checked)


# ---------------------------------------------------------------------------
# adjoints


def _extreme(lattice, candidates, upward: bool):
    """Maximum (``upward``) or minimum of ``candidates``, or ``None``.

    One climbing pass reaches the extreme whenever it exists; a second pass
    confirms it dominates every candidate.
    """
    if not candidates:
        return None
    best = candidates[0]
    for c in candidates[1:]:
        if (lattice.leq(best, c) if upward else lattice.leq(c, best)):
            best = c
    for c in candidates:
        if not (lattice.leq(c, best) if upward else lattice.leq(best, c)):
            return None
    return best


def left_adjoint_at(m: MonotoneMap, p):
    """The value at ``p`` of the left adjoint of ``m``: min { q : p <= m(q) }."""
    cands = [q for q in m.source.elements() if m.target.leq(p, m(q))]
    best = _extreme(m.source, cands, upward=False)
    if best is None:
        raise NoAdjoint(f"no least q with {p!r} <= m(q)", witness={"p": p, "candidates": cands})
    return best


def right_adjoint_at(m: MonotoneMap, p):
    """The value at ``p`` of the right adjoint of ``m``: max { q : m(q) <= p }."""
    cands = [q for q in m.source.elements() if m.target.leq(m(q), p)]
    best = _extreme(m.source, cands, upward=True)
    if best is None:
        raise NoAdjoint(f"no greatest q with m(q) <= {p!r}", witness={"p": p, "candidates": cands})
    return best


def left_adjoint(m: MonotoneMap, verify: bool = True) -> MonotoneMap:
    """Exhaustive search for ``L`` with ``L(p) <= q  iff  p <= m(q)``.

    Raises :class:`NoAdjoint` naming the first ``p`` (in enumeration order)
    whose candidate set has no minimum.
    """
    graph = {p: left_adjoint_at(m, p) for p in m.target.elements()}
    adj = table_map(m.target, m.source, graph, f"L({m.name})")
    if verify:
        _verify_adjunction(adj, m)
    return adj


def right_adjoint(m: MonotoneMap, verify: bool = True) -> MonotoneMap:
    graph = {p: right_adjoint_at(m, p) for p in m.target.elements()}
    adj = table_map(m.target, m.source, graph, f"R({m.name})")
    if verify:
        _verify_adjunction(m, adj)
    return adj


def _verify_adjunction(left: MonotoneMap, right: MonotoneMap) -> None:
    """Assert ``left(p) <= q  iff  p <= right(q)`` for every p, q."""
    lo, hi = left.source, left.target
    for p in lo.elements():
        lp = left(p)
        for q in hi.elements():
            if hi.leq(lp, q) != lo.leq(p, right(q)):
                raise NoAdjoint("adjunction fails", witness={"p": p, "q": q})


def adjunction_holds(left: MonotoneMap, right: MonotoneMap) -> StructureReport:
    try:
        _verify_adjunction(left, right)
    except NoAdjoint as exc:
        return StructureReport.fail("adjunction", exc.witness)
    return StructureReport.ok("adjunction", left.source.size * left.target.size)


def maps_equal(f: MonotoneMap, g: MonotoneMap) -> bool:
    return all(f.target.eq(f(x), g(x)) for x in f.source.elements())


def is_order_isomorphism(m: MonotoneMap) -> StructureReport:
    """Bijective, order-preserving and order-reflecting."""
    name = "order isomorphism"
    src, tgt = m.source, m.target
    xs = list(src.elements())
    if len(xs) != tgt.size:
        return StructureReport.fail(name, {"sizes": (len(xs), tgt.size)})
    images = [m(x) for x in xs]
    if any(y not in tgt for y in images) or len(set(images)) != len(xs):
        return StructureReport.fail(name, {"clause": "not bijective"})
    checked = 0
    for x, fx in zip(xs, images):
        for y, fy in zip(xs, images):
            checked += 1
            if src.leq(x, y) != tgt.leq(fx, fy):
                return StructureReport.fail(name, {"clause": "order", "pair": (x, y)}, checked)
    return StructureReport.ok(name, checked)


def chain(n: int) -> FiniteSemilattice:
    """The total order ``0 < 1 < ... < n-1`` with string identifiers."""
    els = [str(i) for i in range(n)]
    return FiniteSemilattice.from_pairs(els, [(els[i], els[i + 1]) for i in range(n - 1)],
                                        name=f"chain{n}")


def diamond() -> FiniteSemilattice:
    return FiniteSemilattice.from_pairs(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")], name="diamond")
