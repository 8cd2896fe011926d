"""Example doctrines and the total category of a doctrine."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .category import (
    Arrow,
    Category,
    FiniteCategory,
    FinSet,
    FunctorData,
    SetoidCategory,
    is_mono,
    preserves_products,
)
from .doctrine import Doctrine
from . import order
from .order import FiniteSemilattice, MeetSemilattice, PowersetLattice, mask_of, members
from .report import FiberTooLarge, MalformedInput, MissingPullback, ProductNotPreserved


# ---------------------------------------------------------------------------
# subsets of finite sets


def _preimage(f: Arrow, mask: int) -> int:
    out = 0
    for i, v in enumerate(f.data):
        if mask >> v & 1:
            out |= 1 << i
    return out


def _image(f: Arrow, mask: int) -> int:
    out = 0
    for i, v in enumerate(f.data):
        if mask >> i & 1:
            out |= 1 << v
    return out


def _forall_image(f: Arrow, mask: int) -> int:
    # b survives iff every point over b lies in mask
    out = (1 << f.target) - 1
    for i, v in enumerate(f.data):
        if not mask >> i & 1:
            out &= ~(1 << v)
    return out


def _subset_candidates(c: Category):
    def candidates(a, x):
        pts = members(x)
        for n in c.candidate_objects(at_least=a):
            for data in itertools.product(pts, repeat=n):
                yield Arrow(n, a, data)
    return candidates


def powerset_doctrine(base: FinSet | int) -> Doctrine:
    """Subsets of finite sets with preimage reindexing.

    Images, the pointwise universal image, pointwise implication and the
    diagonal subset are supplied as closed forms; the law checkers confirm
    them against adjoint search on small fibers.
    """
    c = FinSet(base) if isinstance(base, int) else base
    ops = {
        "exists": _image,
        "forall": _forall_image,
        "implies": lambda a, x, y: (~x | y) & ((1 << a) - 1),
        "delta": lambda a: mask_of(i * a + i for i in range(a)),
    }
    return Doctrine(c, PowersetLattice, lambda f, x: _preimage(f, x), name="powerset",
                    ops=ops, comprehension_candidates=_subset_candidates(c))


# ---------------------------------------------------------------------------
# classes of arrows into a fixed object


@dataclass(frozen=True)
class SubobjectClass:
    carrier: object
    rep: Arrow

    def __repr__(self):
        return f"[{self.rep.data}:{self.rep.source}]"


WeakSliceClass = SubobjectClass


def _sorted_nondecreasing(a: int):
    for n in range(a + 1):
        for data in itertools.combinations_with_replacement(range(a), n):
            yield Arrow(n, a, data)


class _ClassFiber:
    """Classes of arrows into ``a`` under mutual factoring, as a semilattice.

    The first arrow met in each class (enumeration is by domain size, then
    arrow order) is the canonical representative.
    """

    def __init__(self, c: Category, a, arrows, meet_span, name):
        self.c = c
        self.a = a
        self.meet_span = meet_span
        reps: list[Arrow] = []
        for g in arrows:
            if not any(self._same(g, r) for r in reps):
                reps.append(g)
        self.reps = reps
        self._lookup: dict = {r: SubobjectClass(a, r) for r in reps}
        els = [self._lookup[r] for r in reps]
        top = self.classify(c.identity(a))
        self.lattice = FiniteSemilattice.from_leq(
            els, lambda x, y: c.factors(x.rep, y.rep), top, meet=self._meet, name=name)

    def _same(self, g, h) -> bool:
        return self.c.factors(g, h) and self.c.factors(h, g)

    def classify(self, g: Arrow) -> SubobjectClass:
        hit = self._lookup.get(g)
        if hit is not None:
            return hit
        for r in self.reps:
            if self._same(g, r):
                self._lookup[g] = cls = SubobjectClass(self.a, r)
                return cls
        raise MalformedInput(f"{g} is outside the enumerated classes over {self.a!r}")

    def _meet(self, x, y):
        v, p, q = self.meet_span(x.rep, y.rep)
        return self.classify(self.c.compose(x.rep, p))


GENERIC_CLASS_LIMIT = 4


class _ImageFiber(MeetSemilattice):
    """Arrows into a finite set up to mutual factoring, keyed by their image.

    In FinSet two arrows into ``a`` factor through each other exactly when
    their images agree, and the first representative the generic grouping
    meets is the increasing injection onto that image; this fiber produces
    the same classes without enumerating arrows.
    """

    def __init__(self, a: int, name):
        self.a = a
        self.name = name
        self.top = SubobjectClass(a, Arrow(a, a, tuple(range(a))))

    def _cls(self, image) -> SubobjectClass:
        pts = tuple(sorted(image))
        return SubobjectClass(self.a, Arrow(len(pts), self.a, pts))

    @property
    def size(self):
        return 1 << self.a

    def elements(self):
        if self.size > order.FIBER_LIMIT:
            raise FiberTooLarge(f"{self.name} has {self.size} classes")
        return [self._cls(pts) for n in range(self.a + 1)
                for pts in itertools.combinations(range(self.a), n)]

    def __contains__(self, x):
        return isinstance(x, SubobjectClass) and x.carrier == self.a and x == self._cls(x.rep.data)

    def leq(self, x, y):
        return set(x.rep.data) <= set(y.rep.data)

    def meet(self, x, y):
        return self._cls(set(x.rep.data) & set(y.rep.data))

    def classify(self, g: Arrow) -> SubobjectClass:
        return self._cls(set(g.data))

    @property
    def lattice(self):
        return self


def _monos_into(c: Category, a):
    if isinstance(c, FinSet):
        for n in range(a + 1):
            for data in itertools.combinations(range(a), n):
                yield Arrow(n, a, data)
        return
    for x in c.candidate_objects(at_least=a):
        for g in c.hom(x, a):
            if is_mono(c, g):
                yield g


def _arrows_into(c: Category, a):
    if isinstance(c, FinSet):
        # nondecreasing maps with domain at most |a|: any arrow into a
        # mutually factors with one of these (domain permutations are isos)
        yield from _sorted_nondecreasing(a)
        return
    for x in c.candidate_objects(at_least=a):
        yield from c.hom(x, a)


def _chosen_pullback_or_fail(c):
    def span(f, g):
        try:
            return c.chosen_pullback(f, g)
        except Exception as exc:
            raise MissingPullback(f"no pullback of {f}, {g}", witness={"cospan": (f, g)}) from exc
    return span


def _class_doctrine(c: Category, arrows_into, name, existential_by_composition):
    span = _chosen_pullback_or_fail(c)
    fibers: dict = {}

    def fiber_of(a):
        if a not in fibers:
            if isinstance(c, FinSet) and a > GENERIC_CLASS_LIMIT:
                fibers[a] = _ImageFiber(a, name=f"{name}({a})")
            else:
                fibers[a] = _ClassFiber(c, a, arrows_into(c, a), span, name=f"{name}({a})")
        return fibers[a]

    def reindex(f, x):
        v, p, q = span(x.rep, f)
        return fiber_of(f.source).classify(q)

    ops = {}
    if existential_by_composition:
        ops["exists"] = lambda pr, x: fiber_of(pr.target).classify(c.compose(pr, x.rep))

    def candidates(a, x):
        yield x.rep

    P = Doctrine(c, lambda a: fiber_of(a).lattice, reindex, name=name, ops=ops,
                 comprehension_candidates=candidates)
    P.classify = lambda a, g: fiber_of(a).classify(g)
    return P


def subobject_doctrine(c: Category) -> Doctrine:
    """Mono classes ordered by factoring; reindexing and meets by pullback."""
    return _class_doctrine(c, _monos_into, "Sub", existential_by_composition=False)


def weak_subobject_doctrine(c: Category) -> Doctrine:
    """Classes of all arrows into an object under mutual factoring.

    Reindexing takes the second leg of the chosen (weak) pullback; the
    existential adjoint along any arrow is post-composition.
    """
    return _class_doctrine(c, _arrows_into, "Psi", existential_by_composition=True)


# ---------------------------------------------------------------------------
# total category


class TotalCategory(Category):
    """Objects ``(A, a)`` with ``a`` in ``P(A)``; arrows ``f`` with ``a <= P_f(b)``."""

    def __init__(self, P: Doctrine):
        self.P = P
        self.base = P.base
        self.name = f"Total({P.name})"
        self.terminal = (self.base.terminal, P.top(self.base.terminal))

    def objects(self):
        return [(a, x) for a in self.base.objects() for x in self.P.fiber(a).elements()]

    def object_size(self, a):
        return self.base.object_size(a[0])

    def _lift(self, f: Arrow, src, tgt) -> Arrow:
        return Arrow(src, tgt, f)

    def hom(self, s, t):
        P = self.P
        return [Arrow(s, t, f) for f in self.base.hom(s[0], t[0])
                if P.leq(s[0], s[1], P(f, t[1]))]

    def identity(self, a):
        return Arrow(a, a, self.base.identity(a[0]))

    def compose(self, g, f):
        if f.target != g.source:
            raise MalformedInput(f"cannot compose {g} after {f}")
        return Arrow(f.source, g.target, self.base.compose(g.data, f.data))

    def to_terminal(self, a):
        return Arrow(a, self.terminal, self.base.to_terminal(a[0]))

    def product(self, s, t):
        P, c = self.P, self.base
        p, pr1, pr2 = c.product(s[0], t[0])
        obj = (p, P.meet(p, P(pr1, s[1]), P(pr2, t[1])))
        return obj, Arrow(obj, s, pr1), Arrow(obj, t, pr2)

    def pair(self, f, g):
        obj = self.product(f.target, g.target)[0]
        return Arrow(f.source, obj, self.base.pair(f.data, g.data))


def grothendieck_total(P: Doctrine):
    """The total category with its projection and top-section functors."""
    total = TotalCategory(P)
    proj = FunctorData(total, P.base, lambda a: a[0], lambda f: f.data, name="p")
    section = FunctorData(P.base, total, lambda a: (a, P.top(a)),
                          lambda f: Arrow((f.source, P.top(f.source)), (f.target, P.top(f.target)), f),
                          name="top")
    return total, proj, section


def check_section_adjunction(P: Doctrine):
    """Arrows ``(A, a) -> (B, top)`` correspond to base arrows ``A -> B``."""
    from .report import StructureReport
    total, proj, section = grothendieck_total(P)
    checked = 0
    for s in total.objects():
        for b in P.base.objects():
            checked += 1
            lifted = [f.data for f in total.hom(s, section(b))]
            if lifted != list(P.base.hom(s[0], b)):
                return StructureReport.fail("top section right adjoint", {"object": s, "base": b}, checked)
    return StructureReport.ok("top section right adjoint", checked, scope=P.base.window_note())


# ---------------------------------------------------------------------------
# change of base


def _strict_products(F: FunctorData) -> bool:
    c, d = F.source, F.target
    for a, b in itertools.product(c.objects(), repeat=2):
        if not c.has_product(a, b):
            continue
        p, pr1, pr2 = c.product(a, b)
        q, s1, s2 = d.product(F(a), F(b))
        if F(p) != q or F(pr1) != s1 or F(pr2) != s2:
            return False
    return True


def change_of_base(P: Doctrine, F: FunctorData, name=None) -> Doctrine:
    """``P o F^op``: fibers ``P(F D)`` and reindexing along ``F f``."""
    rep = preserves_products(F)
    if not rep:
        raise ProductNotPreserved(f"{F.name} does not preserve products: {rep.counterexample}")
    ops = {}
    if _strict_products(F):
        # quantifiers along chosen projections transport verbatim
        for key in ("exists", "forall"):
            if key in P.ops:
                ops[key] = lambda pr, x, op=P.ops[key]: op(F(pr), x)
        if "implies" in P.ops:
            ops["implies"] = lambda a, x, y: P.ops["implies"](F(a), x, y)
        if "delta" in P.ops:
            ops["delta"] = lambda a: P.ops["delta"](F(a))
    return Doctrine(F.source, lambda d: P.fiber(F(d)), lambda f, x: P(F(f), x),
                    name=name or f"{P.name}.{F.name}", ops=ops)


def restrict_to_window(P: Doctrine, window) -> Doctrine:
    """The same doctrine seen over a smaller FinSet window."""
    c = P.base
    if not isinstance(c, FinSet):
        raise MalformedInput("window restriction needs a FinSet base")
    small = FinSet(window)
    F = FunctorData(small, c, lambda a: a, lambda f: f, name=f"incl{window}")
    return change_of_base(P, F, name=f"{P.name}|{window}")


# ---------------------------------------------------------------------------
# fixtures


def setoid_powerset_doctrine(bound=2) -> Doctrine:
    """Subsets of underlying sets, over setoids and respecting functions.

    Relations here need not be respecting, so unique choice fails: the
    identity graph from the total setoid on two points to the discrete one
    is total and single-valued, yet no respecting function realises it.
    """
    base = SetoidCategory(bound)
    U = base.forgetful()
    P = powerset_doctrine(U.target)
    Q = change_of_base(P, U, name="powerset.setoid")

    def candidates(a, x):
        pts = members(x)
        labels = a[1]
        # subsets as setoids with the restricted relation, then the rest
        sub = tuple(labels[i] for i in pts)
        from .category import setoid
        yield Arrow(setoid(sub), a, tuple(pts))
        for n in base.candidate_objects(at_least=a):
            for h in base.hom(n, a):
                yield h

    Q.comprehension_candidates = candidates
    return Q


def lawvere_fragment():
    """Powers ``1, A, A x A`` of a bare object: arrows are tuples of projections.

    Only the products with ``1`` and ``A x A`` itself are chosen.
    """
    objs = ["1", "A", "AA"]
    arrows = {"!A": ("A", "1"), "!AA": ("AA", "1"), "pr1": ("AA", "A"), "pr2": ("AA", "A"),
              "diag": ("A", "AA"), "e1": ("AA", "AA"), "e2": ("AA", "AA"), "tw": ("AA", "AA")}
    ids = {"1": "id1", "A": "idA", "AA": "idAA"}
    table = {
        ("pr1", "diag"): "idA", ("pr2", "diag"): "idA",
        ("diag", "pr1"): "e1", ("diag", "pr2"): "e2",
        ("pr1", "e1"): "pr1", ("pr2", "e1"): "pr1", ("pr1", "e2"): "pr2", ("pr2", "e2"): "pr2",
        ("e1", "e1"): "e1", ("e1", "e2"): "e2", ("e2", "e1"): "e1", ("e2", "e2"): "e2",
        ("e1", "diag"): "diag", ("e2", "diag"): "diag",
        ("pr1", "tw"): "pr2", ("pr2", "tw"): "pr1", ("tw", "tw"): "idAA", ("tw", "diag"): "diag",
        ("e1", "tw"): "e2", ("e2", "tw"): "e1", ("tw", "e1"): "e1", ("tw", "e2"): "e2",
        ("!A", "pr1"): "!AA", ("!A", "pr2"): "!AA", ("!AA", "diag"): "!A",
        ("!AA", "e1"): "!AA", ("!AA", "e2"): "!AA", ("!AA", "tw"): "!AA",
    }
    products = {
        ("1", "1"): ("1", "id1", "id1"),
        ("1", "A"): ("A", "!A", "idA"), ("A", "1"): ("A", "idA", "!A"),
        ("1", "AA"): ("AA", "!AA", "idAA"), ("AA", "1"): ("AA", "idAA", "!AA"),
        ("A", "A"): ("AA", "pr1", "pr2"),
    }
    return FiniteCategory(objs, arrows, ids, table, terminal="1", products=products,
                          name="powers(A)")


def frobenius_failing_doctrine() -> Doctrine:
    """Over :func:`lawvere_fragment`: equality on ``A x A`` is already top.

    ``P(A x A)`` is the diamond ``bot < m, p < top``; ``m`` restricts to
    bottom on the diagonal while ``p`` restricts to the middle point ``a``
    of ``P(A) = bot < a < top``.
    """
    c = lawvere_fragment()
    fib = {
        "1": FiniteSemilattice.from_pairs(["bot", "top"], [("bot", "top")]),
        "A": FiniteSemilattice.from_pairs(["bot", "a", "top"], [("bot", "a"), ("a", "top")]),
        "AA": FiniteSemilattice.from_pairs(["bot", "m", "p", "top"],
                                           [("bot", "m"), ("bot", "p"), ("m", "top"), ("p", "top")]),
    }
    keep = lambda x: x
    onto_bt = lambda x: "top" if x == "top" else "bot"
    tables = {
        "!A": onto_bt, "!AA": onto_bt,
        "pr1": lambda x: {"bot": "bot", "a": "p", "top": "top"}[x],
        "pr2": lambda x: {"bot": "bot", "a": "p", "top": "top"}[x],
        "diag": lambda x: {"bot": "bot", "m": "bot", "p": "a", "top": "top"}[x],
        "e1": lambda x: {"bot": "bot", "m": "bot", "p": "p", "top": "top"}[x],
        "e2": lambda x: {"bot": "bot", "m": "bot", "p": "p", "top": "top"}[x],
        "tw": keep,
    }

    def reindex(f, x):
        if f.data in ("id1", "idA", "idAA"):
            return x
        return tables[f.data](x)

    return Doctrine(c, fib.__getitem__, reindex, name="collapsed-equality")


def function_lattice_doctrine(lattice: FiniteSemilattice, base: FinSet | int) -> Doctrine:
    """``L``-valued predicates ``X -> L`` on finite sets, reindexed by precomposition."""
    c = FinSet(base) if isinstance(base, int) else base
    fibers: dict = {}

    def fiber(n):
        if n not in fibers:
            els = list(itertools.product(lattice.elements(), repeat=n))
            top = (lattice.top,) * n
            fibers[n] = FiniteSemilattice.from_leq(
                els, lambda x, y: all(lattice.leq(u, v) for u, v in zip(x, y)), top,
                meet=lambda x, y: tuple(lattice.meet(u, v) for u, v in zip(x, y)),
                name=f"{lattice.name or 'L'}^{n}")
        return fibers[n]

    return Doctrine(c, fiber, lambda f, x: tuple(x[v] for v in f.data), name="L-valued")


def corrupt_reindexing(P: Doctrine, arrow: Arrow, fn, name=None) -> Doctrine:
    """A copy of ``P`` whose reindexing along ``arrow`` is replaced by ``fn``."""
    base_reindex = P._reindex_fn

    def reindex(f, x):
        return fn(x) if f == arrow else base_reindex(f, x)

    return Doctrine(P.base, P._fiber_fn, reindex, name=name or f"{P.name}~",
                    comprehension_candidates=P.comprehension_candidates)


def two_point_doctrine() -> Doctrine:
    """Hand-built copy of subsets of ``0`` and ``1``: an initial ``e``, a terminal ``t``.

    ``X(e)`` is a single point and ``X(t)`` is ``no < yes``.  Small enough
    to enumerate every 1-arrow into it.
    """
    c = FiniteCategory(
        ["e", "t"], {"u": ("e", "t")}, {"e": "ide", "t": "idt"}, {}, terminal="t",
        products={("t", "t"): ("t", "idt", "idt"), ("e", "t"): ("e", "ide", "u"),
                  ("t", "e"): ("e", "u", "ide"), ("e", "e"): ("e", "ide", "ide")},
        name="{e->t}")
    fib = {"e": FiniteSemilattice.from_pairs(["*"], []),
           "t": FiniteSemilattice.from_pairs(["no", "yes"], [("no", "yes")])}

    def reindex(f, x):
        return "*" if f.source == "e" else x

    return Doctrine(c, fib.__getitem__, reindex, name="two-point")
