"""Doctrines ``P: C^op -> InfSL`` and their law checkers.

A :class:`Doctrine` pairs a computable base category with a fiber per object
and a reindexing map per arrow.  Quantifiers, implication and equality are
found by adjoint search in the fibers.  A doctrine may additionally *supply*
closed-form operators (``ops``): the checkers compare them against exhaustive
adjoint search on every fiber small enough to enumerate, and the supplied
form is what makes single elements of very large fibers computable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .category import Arrow, Category, is_mono
from .order import (
    MeetSemilattice,
    MonotoneMap,
    SubSemilattice,
    left_adjoint,
    left_adjoint_at,
    preserves_meets,
    right_adjoint,
    right_adjoint_at,
)
from .report import (
    FiberTooLarge,
    MalformedInput,
    MissingWeakComprehension,
    NoAdjoint,
    NotFound,
    PreconditionViolated,
    StructureReport,
)


class Doctrine:
    """An indexed meet-semilattice over a computable category.

    ``fiber(A)`` returns the fiber over ``A``; ``reindex(f, x)`` computes
    ``P_f(x)`` for ``f: A -> B`` and ``x`` in ``P(B)``.  Recognised ``ops``:
    ``exists(pr, x)``, ``forall(pr, x)`` (along projections),
    ``implies(A, x, y)`` and ``delta(A)``.
    """

    def __init__(self, base: Category, fiber, reindex, name="P", ops=None,
                 comprehension_candidates=None):
        self.base = base
        self.name = name
        self._fiber_fn = fiber
        self._reindex_fn = reindex
        self.ops = dict(ops or {})
        self.comprehension_candidates = comprehension_candidates
        self._fibers: dict = {}
        self._maps: dict = {}
        self._memo: dict = {}

    def __repr__(self):
        return f"Doctrine({self.name} over {self.base.name})"

    def fiber(self, a) -> MeetSemilattice:
        fib = self._fibers.get(a)
        if fib is None:
            fib = self._fibers[a] = self._fiber_fn(a)
        return fib

    def reindex(self, f: Arrow) -> MonotoneMap:
        m = self._maps.get(f)
        if m is None:
            fn = self._reindex_fn
            m = self._maps[f] = MonotoneMap(self.fiber(f.target), self.fiber(f.source),
                                            lambda x, f=f: fn(f, x), name=f"P_{f.data}")
        return m

    def __call__(self, f: Arrow, x):
        return self.reindex(f)(x)

    def top(self, a):
        return self.fiber(a).top

    def meet(self, a, x, y):
        return self.fiber(a).meet(x, y)

    def leq(self, a, x, y) -> bool:
        return self.fiber(a).leq(x, y)

    # -- quantifiers and connectives ---------------------------------------

    def _memoised(self, key, compute):
        try:
            return self._memo[key]
        except KeyError:
            val = self._memo[key] = compute()
            return val

    def exists(self, pr: Arrow, x, search=False):
        """Left adjoint to reindexing along ``pr`` evaluated at ``x``."""
        op = self.ops.get("exists")
        if op is not None and not search:
            return op(pr, x)
        return self._memoised(("E", pr, x), lambda: left_adjoint_at(self.reindex(pr), x))

    def forall(self, pr: Arrow, x, search=False):
        op = self.ops.get("forall")
        if op is not None and not search:
            return op(pr, x)
        return self._memoised(("A", pr, x), lambda: right_adjoint_at(self.reindex(pr), x))

    def meet_map(self, a, x) -> MonotoneMap:
        fib = self.fiber(a)
        return MonotoneMap(fib, fib, lambda z: fib.meet(x, z), name=f"{x}^-")

    def implies(self, a, x, y, search=False):
        op = self.ops.get("implies")
        if op is not None and not search:
            return op(a, x, y)
        return self._memoised(("I", a, x, y), lambda: right_adjoint_at(self.meet_map(a, x), y))

    def delta(self, a, search=False):
        """Fibered equality: the left adjoint along the diagonal at top."""
        op = self.ops.get("delta")
        if op is not None and not search:
            return op(a)
        diag = self.base.diagonal(a)
        return self._memoised(("D", a), lambda: left_adjoint_at(self.reindex(diag), self.top(a)))


def delta(P: Doctrine, a):
    try:
        return P.delta(a)
    except NoAdjoint as exc:
        raise NoAdjoint(f"no left adjoint along the diagonal of {a!r}", exc.witness) from None


def enumerate_fiber(P: Doctrine, a):
    """The fiber's elements, or ``None`` if it is too large to list."""
    try:
        fib = P.fiber(a)
        if not fib.enumerable():
            return None
        return list(fib.elements())
    except FiberTooLarge:
        return None


# ---------------------------------------------------------------------------
# primary / elementary


def check_primary(P: Doctrine) -> StructureReport:
    """Functoriality and meet preservation of reindexing on the window."""
    name = "primary"
    c = P.base
    objs = c.objects()
    checked = skipped = 0
    for a in objs:
        els = enumerate_fiber(P, a)
        if els is None:
            skipped += 1
            continue
        idm = P.reindex(c.identity(a))
        for x in els:
            checked += 1
            if idm(x) != x:
                return StructureReport.fail(name, {"clause": "P_id = id", "object": a, "element": x}, checked)
    for a, b in itertools.product(objs, repeat=2):
        for f in c.hom(a, b):
            if enumerate_fiber(P, b) is None:
                skipped += 1
                continue
            rep = preserves_meets(P.reindex(f))
            checked += rep.checked
            if not rep:
                return StructureReport.fail(name, {"clause": "meets", "arrow": f, **rep.counterexample}, checked)
            for e in objs:
                els = enumerate_fiber(P, e)
                if els is None:
                    skipped += 1
                    continue
                for g in c.hom(b, e):
                    gf = c.compose(g, f)
                    for x in els:
                        checked += 1
                        if P(gf, x) != P(f, P(g, x)):
                            return StructureReport.fail(
                                name, {"clause": "P_(g f) = P_f P_g", "arrows": (g, f), "element": x}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def _fibers_small(P, *objs) -> bool:
    return all(enumerate_fiber(P, o) is not None for o in objs)


def check_elementary(P: Doctrine) -> StructureReport:
    """Left adjoints along ``id_C x Delta_A`` with Frobenius reciprocity.

    Also compares a supplied ``delta`` with the searched one.
    """
    name = "elementary"
    c = P.base
    checked = skipped = 0
    for cc, a in itertools.product(c.objects(), repeat=2):
        if not (c.has_product(a, a) and c.has_product(cc, a)
                and c.has_product(cc, c.product(a, a)[0])):
            skipped += 1
            continue
        aa = c.product(a, a)[0]
        cxa = c.product(cc, a)[0]
        cxaa = c.product(cc, aa)[0]
        if not _fibers_small(P, cxa, cxaa):
            skipped += 1
            continue
        m = P.reindex(c.times(c.identity(cc), c.diagonal(a)))
        try:
            lad = left_adjoint(m)
        except NoAdjoint as exc:
            return StructureReport.fail(name, {"clause": "left adjoint", "objects": (cc, a), **exc.witness}, checked)
        big, small = P.fiber(cxaa), P.fiber(cxa)
        for alpha in big.elements():
            ma = m(alpha)
            for beta in small.elements():
                checked += 1
                lhs = lad(small.meet(ma, beta))
                rhs = big.meet(alpha, lad(beta))
                if lhs != rhs:
                    return StructureReport.fail(
                        name, {"clause": "Frobenius", "objects": (cc, a), "alpha": alpha,
                               "beta": beta, "lhs": lhs, "rhs": rhs}, checked)
    for a in c.objects():
        if "delta" in P.ops and c.has_product(a, a) and _fibers_small(P, c.product(a, a)[0]):
            checked += 1
            if P.delta(a) != P.delta(a, search=True):
                return StructureReport.fail(name, {"clause": "supplied delta", "object": a}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def diagonal_identity(P: Doctrine) -> StructureReport:
    """``E_Delta(a) = P_pr1(a) ^ delta = P_pr2(a) ^ delta`` for window objects."""
    name = "diagonal identity"
    c = P.base
    checked = skipped = 0
    for a in c.objects():
        if not c.has_product(a, a):
            skipped += 1
            continue
        aa, pr1, pr2 = c.product(a, a)
        els = enumerate_fiber(P, a)
        if els is None or enumerate_fiber(P, aa) is None:
            skipped += 1
            continue
        diag = P.reindex(c.diagonal(a))
        d = P.delta(a)
        fib = P.fiber(aa)
        for x in els:
            checked += 1
            e = left_adjoint_at(diag, x)
            v1, v2 = fib.meet(P(pr1, x), d), fib.meet(P(pr2, x), d)
            if not (e == v1 == v2):
                return StructureReport.fail(name, {"object": a, "alpha": x, "exists": e,
                                                   "pr1": v1, "pr2": v2}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


# ---------------------------------------------------------------------------
# existential / universal / implicational


def _projection_squares(c: Category):
    """Pullback squares of a chosen projection along window arrows.

    Yields ``(pr, f, pr', f')`` with ``pr: X -> A`` a projection of
    ``X = A1 x A2``, ``f: A' -> A`` and the chosen-product completion
    ``X' = A1 x A'`` (or ``A' x A2``).
    """
    objs = c.objects()
    for a1, a2 in itertools.product(objs, repeat=2):
        if not c.has_product(a1, a2):
            continue
        x, p1, p2 = c.product(a1, a2)
        for side, pr in ((0, p1), (1, p2)):
            target = a1 if side == 0 else a2
            for ap in objs:
                if not c.has_product(*((a1, ap) if side == 1 else (ap, a2))):
                    continue
                for f in c.hom(ap, target):
                    if side == 1:
                        xp, q1, q2 = c.product(a1, ap)
                        yield pr, f, q2, c.times(c.identity(a1), f)
                    else:
                        xp, q1, q2 = c.product(ap, a2)
                        yield pr, f, q1, c.times(f, c.identity(a2))


def _projections(c: Category):
    for a1, a2 in itertools.product(c.objects(), repeat=2):
        if not c.has_product(a1, a2):
            continue
        _, p1, p2 = c.product(a1, a2)
        yield p1
        yield p2


def check_existential(P: Doctrine) -> StructureReport:
    """Left adjoints along window projections, Beck-Chevalley and Frobenius."""
    return _check_quantifier(P, left=True)


def check_universal(P: Doctrine) -> StructureReport:
    """Right adjoints along window projections with Beck-Chevalley."""
    return _check_quantifier(P, left=False)


def _check_quantifier(P: Doctrine, left: bool) -> StructureReport:
    name = "existential" if left else "universal"
    c = P.base
    quant = P.exists if left else P.forall
    checked = skipped = 0
    for pr in _projections(c):
        if not _fibers_small(P, pr.source, pr.target):
            skipped += 1
            continue
        m = P.reindex(pr)
        try:
            adj = left_adjoint(m) if left else right_adjoint(m)
        except NoAdjoint as exc:
            return StructureReport.fail(name, {"clause": "adjoint", "projection": pr, **exc.witness}, checked)
        for x in P.fiber(pr.source).elements():
            checked += 1
            if quant(pr, x) != adj(x):
                return StructureReport.fail(name, {"clause": "supplied operator", "projection": pr,
                                                   "element": x}, checked)
        if left:
            small, big = P.fiber(pr.target), P.fiber(pr.source)
            for a in small.elements():
                pa = m(a)
                for b in big.elements():
                    checked += 1
                    if quant(pr, big.meet(pa, b)) != small.meet(a, quant(pr, b)):
                        return StructureReport.fail(
                            name, {"clause": "Frobenius", "projection": pr, "alpha": a, "beta": b}, checked)
    for pr, f, prp, fp in _projection_squares(c):
        if not _fibers_small(P, pr.source):
            skipped += 1
            continue
        for b in P.fiber(pr.source).elements():
            checked += 1
            lhs = quant(prp, P(fp, b))
            rhs = P(f, quant(pr, b))
            if lhs != rhs:
                return StructureReport.fail(
                    name, {"clause": "Beck-Chevalley", "square": (pr, f, prp, fp), "beta": b,
                           "lhs": lhs, "rhs": rhs}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def check_implicational(P: Doctrine) -> StructureReport:
    """Every ``a ^ -`` has a right adjoint on window fibers."""
    name = "implicational"
    c = P.base
    checked = skipped = 0
    for a in c.objects():
        els = enumerate_fiber(P, a)
        if els is None:
            skipped += 1
            continue
        for x in els:
            m = P.meet_map(a, x)
            try:
                imp = right_adjoint(m)
            except NoAdjoint as exc:
                return StructureReport.fail(name, {"object": a, "alpha": x, **exc.witness}, checked)
            for y in els:
                checked += 1
                if P.implies(a, x, y) != imp(y):
                    return StructureReport.fail(name, {"clause": "supplied implication", "object": a,
                                                       "alpha": x, "beta": y}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def exists_along(P: Doctrine, f: Arrow, x):
    """``E_f(x) = E_pr2(P_{f x id}(delta_B) ^ P_pr1(x))`` on ``A x B``."""
    c = P.base
    a, b = f.source, f.target
    ab, pr1, pr2 = c.product(a, b)
    graph = P(c.times(f, c.identity(b)), delta(P, b))
    return P.exists(pr2, P.meet(ab, graph, P(pr1, x)))


def forall_along(P: Doctrine, f: Arrow, x):
    """``A_f(x) = A_pr2(P_{f x id}(delta_B) => P_pr1(x))`` on ``A x B``."""
    c = P.base
    a, b = f.source, f.target
    ab, pr1, pr2 = c.product(a, b)
    graph = P(c.times(f, c.identity(b)), delta(P, b))
    return P.forall(pr2, P.implies(ab, graph, P(pr1, x)))


# ---------------------------------------------------------------------------
# comprehensions


@dataclass
class Comprehension:
    arrow: Arrow
    strict: bool
    full: bool
    mono: bool
    competitors: int = 0
    skipped_fullness: bool = False


def _satisfies(P: Doctrine, h: Arrow, x) -> bool:
    return P(h, x) == P.top(h.source)


def _competitors(P: Doctrine, a, x):
    c = P.base
    return [g for y in c.objects() for g in c.hom(y, a) if _satisfies(P, g, x)]


def _candidates(P: Doctrine, a, x):
    if P.comprehension_candidates is not None:
        yield from P.comprehension_candidates(a, x)
        return
    c = P.base
    for xo in c.candidate_objects(at_least=a):
        for h in c.hom(xo, a):
            if _satisfies(P, h, x):
                yield h


def comprehension_flags(P: Doctrine, h: Arrow, x, competitors=None) -> Comprehension | None:
    """Classify ``h`` as a weak/strict comprehension of ``x``; ``None`` if neither."""
    c = P.base
    a = h.target
    if not _satisfies(P, h, x):
        return None
    comps = _competitors(P, a, x) if competitors is None else competitors
    strict = True
    for g in comps:
        ks = itertools.islice(c.factorizations(g, h), 2)
        n = sum(1 for _ in ks)
        if n == 0:
            return None
        if n > 1:
            strict = False
    els = enumerate_fiber(P, a)
    full = True
    if els is None:
        skipped = True
    else:
        skipped = False
        fib = P.fiber(a)
        for beta in els:
            if _satisfies(P, h, beta) and not fib.leq(x, beta):
                full = False
                break
    return Comprehension(h, strict, full, is_mono(c, h), len(comps), skipped)


def find_comprehension(P: Doctrine, a, x, mode="weak") -> Comprehension:
    """First window arrow into ``a`` that is a (weak or strict) comprehension of ``x``."""
    if mode not in ("weak", "strict"):
        raise MalformedInput(f"unknown comprehension mode {mode!r}")
    key = ("C", a, x, mode)
    if key in P._memo:
        return P._memo[key]
    comps = _competitors(P, a, x)
    tried = 0
    for h in _candidates(P, a, x):
        tried += 1
        flags = comprehension_flags(P, h, x, comps)
        if flags is None or (mode == "strict" and not flags.strict):
            continue
        P._memo[key] = flags
        return flags
    raise MissingWeakComprehension(f"no {mode} comprehension of {x!r} over {a!r}",
                                   witness={"object": a, "element": x, "candidates_tried": tried})


def has_comprehensions(P: Doctrine, mode="weak", require_full=False) -> StructureReport:
    name = f"{mode}{' full' if require_full else ''} comprehensions"
    checked = skipped = 0
    for a in P.base.objects():
        els = enumerate_fiber(P, a)
        if els is None:
            skipped += 1
            continue
        for x in els:
            checked += 1
            try:
                comp = find_comprehension(P, a, x, mode)
            except NotFound as exc:
                return StructureReport.fail(name, exc.witness, checked, skipped)
            if require_full and not comp.full:
                return StructureReport.fail(name, {"clause": "full", "object": a, "element": x,
                                                   "arrow": comp.arrow}, checked, skipped)
    return StructureReport.ok(name, checked, skipped, scope=P.base.window_note())


def has_comprehensive_equalizers(P: Doctrine, mode="strict") -> StructureReport:
    """Each diagonal is a stable (weak/strict) comprehension of ``delta``.

    Stability is recorded two ways: every reindexing ``P_f(delta)`` along a
    window arrow has a comprehension, and the square it forms with the
    diagonal is a (weak) pullback against window spans.
    """
    name = f"comprehensive {mode} equalizers"
    c = P.base
    checked = skipped = 0
    for a in c.objects():
        aa = c.product(a, a)[0]
        d = delta(P, a)
        diag = c.diagonal(a)
        flags = comprehension_flags(P, diag, d)
        checked += 1
        if flags is None or (mode == "strict" and not flags.strict):
            return StructureReport.fail(name, {"clause": "diagonal comprehends delta", "object": a}, checked)
        for ap in c.objects():
            for f in c.hom(ap, aa):
                checked += 1
                x = P(f, d)
                try:
                    comp = find_comprehension(P, ap, x, mode)
                except NotFound:
                    return StructureReport.fail(name, {"clause": "stable", "object": a, "arrow": f}, checked)
                cp = comp.arrow
                fcp = c.compose(f, cp)
                med = next(c.factorizations(fcp, diag), None)
                if med is None:
                    return StructureReport.fail(name, {"clause": "mediating arrow", "arrow": f}, checked)
                for t in c.objects():
                    for t1 in c.hom(t, ap):
                        for t2 in c.factorizations(c.compose(f, t1), diag):
                            ks = [k for k in c.factorizations(t1, cp) if c.compose(med, k) == t2]
                            if not ks or (mode == "strict" and len(ks) > 1):
                                return StructureReport.fail(
                                    name, {"clause": "pullback square", "arrow": f, "span": (t1, t2)}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def weak_equalizer_via_diagonal(P: Doctrine, f: Arrow, g: Arrow) -> Arrow:
    """The comprehension of ``P_<f,g>(delta_A)``, checked to (weakly) equalize."""
    c = P.base
    if f.source != g.source or f.target != g.target:
        raise MalformedInput("equalizer needs a parallel pair")
    x = P(c.pair(f, g), delta(P, f.target))
    e = find_comprehension(P, f.source, x, "weak").arrow
    if c.compose(f, e) != c.compose(g, e):
        raise PreconditionViolated(f"{e} does not equalize {f}, {g}")
    for y in c.objects():
        for k in c.hom(y, f.source):
            if c.compose(f, k) == c.compose(g, k) and not c.factors(k, e):
                raise PreconditionViolated(f"{k} equalizes but does not factor through {e}")
    return e


def implication_via_comprehension(P: Doctrine, a, x, y):
    """``x => y := A_{c}(P_{c}(y))`` for a full weak comprehension ``c`` of ``x``."""
    comp = find_comprehension(P, a, x, "weak")
    if not comp.full:
        raise NotFound(f"comprehension of {x!r} is not full", witness={"arrow": comp.arrow})
    m = P.reindex(comp.arrow)
    value = right_adjoint_at(m, m(y))
    fib = P.fiber(a)
    for z in fib.elements():
        if fib.leq(z, value) != fib.leq(fib.meet(x, z), y):
            raise NoAdjoint("residuation fails", witness={"gamma": z})
    return value


# ---------------------------------------------------------------------------
# equivalence relations, quotients, descent


@dataclass
class EquivalenceRelationWitness:
    carrier: object
    relation: object
    trace: dict = field(default_factory=dict)


def _relation_parts(P: Doctrine, a, rho):
    c = P.base
    aa, pr1, pr2 = c.product(a, a)
    aaa, (p1, p2, p3) = c.product_of([a, a, a])
    refl = (delta(P, a), rho)
    sym = (rho, P(c.pair(pr2, pr1), rho))
    left = P.meet(aaa, P(c.pair(p1, p2), rho), P(c.pair(p2, p3), rho))
    trans = (left, P(c.pair(p1, p3), rho))
    return aa, aaa, refl, sym, trans


def is_equivalence_relation(P: Doctrine, a, rho) -> StructureReport:
    name = "equivalence relation"
    aa, aaa, refl, sym, trans = _relation_parts(P, a, rho)
    for clause, obj, (lo, hi) in (("reflexivity", aa, refl), ("symmetry", aa, sym),
                                  ("transitivity", aaa, trans)):
        if not P.leq(obj, lo, hi):
            return StructureReport.fail(name, {"clause": clause, "carrier": a, "relation": rho}, 3)
    return StructureReport.ok(name, 3)


def equivalence_witness(P: Doctrine, a, rho) -> EquivalenceRelationWitness:
    rep = is_equivalence_relation(P, a, rho)
    if not rep:
        from .report import NotAnEquivalenceRelation
        raise NotAnEquivalenceRelation(f"not an equivalence relation: {rep.counterexample}")
    return EquivalenceRelationWitness(a, rho, {"reflexivity": True, "symmetry": True,
                                               "transitivity": True})


def equivalence_relations(P: Doctrine, a) -> list:
    els = enumerate_fiber(P, P.base.product(a, a)[0])
    if els is None:
        raise FiberTooLarge(f"cannot enumerate relations on {a!r}")
    return [r for r in els if is_equivalence_relation(P, a, r)]


def kernel_of(P: Doctrine, f: Arrow) -> EquivalenceRelationWitness:
    c = P.base
    k = P(c.times(f, f), delta(P, f.target))
    rep = is_equivalence_relation(P, f.source, k)
    assert rep, f"kernel of {f} is not an equivalence relation: {rep.counterexample}"
    return EquivalenceRelationWitness(f.source, k, {"kernel_of": f})


def is_descent(P: Doctrine, a, rho, x) -> bool:
    c = P.base
    aa, pr1, pr2 = c.product(a, a)
    return P.leq(aa, P.meet(aa, P(pr1, x), rho), P(pr2, x))


def descent_data(P: Doctrine, rho: EquivalenceRelationWitness) -> SubSemilattice:
    a, r = rho.carrier, rho.relation
    fib = P.fiber(a)
    els = [x for x in fib.elements() if is_descent(P, a, r, x)]
    closed = fib.top in els and all(fib.meet(x, y) in els for x in els for y in els)
    assert closed, "descent data must be closed under finite meets"
    return SubSemilattice(fib, els, name=f"des({r})")


@dataclass
class QuotientFlags:
    quotient: bool
    stable: bool
    effective: bool
    effective_descent: bool
    witness: dict = field(default_factory=dict)

    def all(self) -> bool:
        return self.quotient and self.stable and self.effective and self.effective_descent


def _respects(P, a, rho, g) -> bool:
    c = P.base
    return P.leq(c.product(a, a)[0], rho, P(c.times(g, g), delta(P, g.target)))


def is_quotient_arrow(P: Doctrine, rho, q: Arrow, witness=None) -> bool:
    """Window check of the quotient universal property of ``q`` for ``rho``."""
    c = P.base
    a = q.source
    if not _respects(P, a, rho, q):
        return False
    for z in c.objects():
        homs = c.hom(q.target, z)
        for g in c.hom(a, z):
            if not _respects(P, a, rho, g):
                continue
            hs = [h for h in homs if c.compose(h, q) == g]
            if len(hs) != 1:
                if witness is not None:
                    witness.update({"competitor": g, "mediators": hs})
                return False
    return True


def classify_quotient(P: Doctrine, rho: EquivalenceRelationWitness, q: Arrow) -> QuotientFlags:
    c = P.base
    a, r = rho.carrier, rho.relation
    if q.source != a:
        raise MalformedInput("quotient arrow must start at the relation's carrier")
    if not is_equivalence_relation(P, a, r):
        from .report import NotAnEquivalenceRelation
        raise NotAnEquivalenceRelation(f"{r!r} is not an equivalence relation on {a!r}")
    if not _respects(P, a, r, q):
        # nothing to classify: q does not even collapse the relation
        return QuotientFlags(False, False, False, False, {"clause": "q does not respect rho"})
    wit: dict = {}
    quotient = is_quotient_arrow(P, r, q, wit)
    stable = quotient
    window = c.objects()
    skipped = 0
    if quotient:
        for cp in window:
            for f in c.hom(cp, q.target):
                v, fprime, qprime = c.chosen_pullback(q, f)
                if v not in window:
                    skipped += 1
                    continue
                # pairs related upstairs that also lie over a common point
                vv = c.product(v, v)[0]
                pulled = P.meet(vv, P(c.times(fprime, fprime), r),
                                P(c.times(qprime, qprime), delta(P, cp)))
                if not is_quotient_arrow(P, pulled, qprime):
                    stable = False
                    wit["unstable_along"] = f
                    break
            if not stable:
                break
    ker = kernel_of(P, q)
    effective = ker.relation == r
    des = descent_data(P, ker)
    m = P.reindex(q)
    from .order import is_order_isomorphism
    eff_desc = bool(is_order_isomorphism(MonotoneMap(P.fiber(q.target), des, m, "P_q")))
    if skipped:
        wit["pullbacks_outside_window"] = skipped
    return QuotientFlags(quotient, stable, effective, eff_desc, wit)


# ---------------------------------------------------------------------------
# unique choice


def check_auc(P: Doctrine, a, b, evaluation=None) -> StructureReport:
    """Unique choice from ``a`` to ``b`` for a weak evaluation ``w: W x A -> B``.

    For every ``rho`` in ``P(A x B)``: totality and single-valuedness entail
    the existence of ``h`` in ``W`` whose graph lies in ``rho``.
    """
    from .category import find_weak_evaluation
    name = "AUC"
    c = P.base
    w_obj, w = evaluation if evaluation is not None else find_weak_evaluation(c, a, b)
    ab, pa, pb = c.product(a, b)
    rels = enumerate_fiber(P, ab)
    if rels is None:
        raise FiberTooLarge(f"cannot enumerate relations {a!r} -> {b!r}")
    one = c.terminal
    # totality
    to1 = c.to_terminal(a)
    # single-valuedness on A x (B x B)
    bb, q1, q2 = c.product(b, b)
    abb, r1, r23 = c.product(a, bb)
    x1 = r1
    y2 = c.compose(q1, r23)
    y3 = c.compose(q2, r23)
    db = delta(P, b)
    eq23 = P(c.compose(c.pair(q1, q2), r23), db)
    bb_to1 = c.to_terminal(bb)
    # existence of a witness point h
    wa, s1, s2 = c.product(w_obj, a)
    graph = c.pair(s2, w)
    w_to1 = c.to_terminal(w_obj)
    checked = 0
    failures = []
    for rho in rels:
        checked += 1
        total = forall_along(P, to1, P.exists(pa, rho))
        both = P.meet(abb, P(c.pair(x1, y2), rho), P(c.pair(x1, y3), rho))
        single = forall_along(P, bb_to1, P.forall(r23, P.implies(abb, both, eq23)))
        lhs = P.meet(one, total, single)
        rhs = exists_along(P, w_to1, P.forall(s1, P(graph, rho)))
        if not P.leq(one, lhs, rhs):
            failures.append(rho)
    if failures:
        return StructureReport.fail(name, {"relation": failures[0], "failing": len(failures)},
                                    checked, evaluation=(w_obj, w))
    return StructureReport.ok(name, checked, scope=c.window_note(), evaluation=(w_obj, w))
