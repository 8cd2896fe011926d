"""Morphisms and 2-cells of doctrines, the completion's universal property,
and regularity / exactness checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .category import Arrow, Category, FunctorData, is_mono, preserves_products
from .completion import QCategory, embed, q_quotient, quotient_completion
from .doctrine import (
    Doctrine,
    EquivalenceRelationWitness,
    classify_quotient,
    comprehension_flags,
    delta,
    enumerate_fiber,
    equivalence_relations,
    exists_along,
    find_comprehension,
    is_equivalence_relation,
    is_quotient_arrow,
    kernel_of,
)
from .order import MonotoneMap, preserves_meets
from .report import (
    BudgetExhausted,
    FiberTooLarge,
    InvariantViolation,
    NoAdjoint,
    NotFound,
    StructureReport,
)


@dataclass
class DoctrineMorphism:
    """``(F, b)``: a base functor and fiber maps ``b_A : P(A) -> R(F A)``."""

    source: Doctrine
    target: Doctrine
    F: FunctorData
    b: object  # callable (A, x) -> element of R(F A)
    name: str = "m"

    def at(self, a) -> MonotoneMap:
        return MonotoneMap(self.source.fiber(a), self.target.fiber(self.F(a)),
                           lambda x: self.b(a, x), name=f"{self.name}_{a}")


@dataclass
class Doctrine2Cell:
    """``d_A : G A -> F A`` in the target base, for 1-arrows ``(F,b) => (G,c)``."""

    source: DoctrineMorphism
    target: DoctrineMorphism
    d: dict


@dataclass
class MorphismFlags:
    ed: bool
    eed: bool
    eqd: bool
    qd: bool
    witness: dict = field(default_factory=dict)


def identity_morphism(P: Doctrine) -> DoctrineMorphism:
    F = FunctorData(P.base, P.base, lambda a: a, lambda f: f, name="id")
    return DoctrineMorphism(P, P, F, lambda a, x: x, name="id")


def _comparison(m: DoctrineMorphism, a, b) -> Arrow:
    """``<F pr1, F pr2> : F(A x B) -> FA x FB``."""
    c, d = m.source.base, m.target.base
    _, pr1, pr2 = c.product(a, b)
    return d.pair(m.F(pr1), m.F(pr2))


def _transport_relation(m: DoctrineMorphism, a, rho):
    """``b_{AxA}(rho)`` moved to ``FA x FA`` along the inverse comparison."""
    d = m.target.base
    k = _comparison(m, a, a)
    inv = d.inverse(k)
    if inv is None:
        raise InvariantViolation("product comparison is not invertible", {"object": a})
    aa = m.source.base.product(a, a)[0]
    return m.target(inv, m.b(aa, rho))


def check_morphism(m: DoctrineMorphism) -> StructureReport:
    """Product preservation, meets, naturality and the equality clause."""
    name = "ED 1-arrow"
    P, R, F = m.source, m.target, m.F
    c = P.base
    rep = preserves_products(F)
    if not rep:
        return StructureReport.fail(name, {"clause": "products", **rep.counterexample}, rep.checked)
    checked = rep.checked
    for a in c.objects():
        if enumerate_fiber(P, a) is None:
            continue
        r = preserves_meets(m.at(a))
        checked += r.checked
        if not r:
            return StructureReport.fail(name, {"clause": "meets", "object": a, **r.counterexample}, checked)
    for a, b in itertools.product(c.objects(), repeat=2):
        els = enumerate_fiber(P, b)
        if els is None:
            continue
        for f in c.hom(a, b):
            Ff = F(f)
            for x in els:
                checked += 1
                if m.b(a, P(f, x)) != R(Ff, m.b(b, x)):
                    return StructureReport.fail(name, {"clause": "naturality", "arrow": f, "element": x},
                                                checked)
    for a in c.objects():
        checked += 1
        aa = c.product(a, a)[0]
        lhs = m.b(aa, delta(P, a))
        rhs = R(_comparison(m, a, a), delta(R, F(a)))
        if lhs != rhs:
            return StructureReport.fail(name, {"clause": "equality preserved", "object": a,
                                               "lhs": lhs, "rhs": rhs}, checked)
    return StructureReport.ok(name, checked, scope=c.window_note())


def _preserves_existentials(m: DoctrineMorphism, wit) -> bool:
    P, R, F = m.source, m.target, m.F
    c = P.base
    for a1, a2 in itertools.product(c.objects(), repeat=2):
        x, p1, p2 = c.product(a1, a2)
        els = enumerate_fiber(P, x)
        if els is None:
            continue
        for pr in (p1, p2):
            for beta in els:
                try:
                    lhs = m.b(pr.target, P.exists(pr, beta))
                    rhs = exists_along(R, F(pr), m.b(x, beta))
                except NoAdjoint as exc:
                    wit["eed"] = {"projection": pr, "missing": str(exc)}
                    return False
                if lhs != rhs:
                    wit["eed"] = {"projection": pr, "beta": beta}
                    return False
    return True


def _preserves_comprehensions(m: DoctrineMorphism, wit) -> bool:
    P, R, F = m.source, m.target, m.F
    for a in P.base.objects():
        els = enumerate_fiber(P, a)
        if els is None:
            continue
        for alpha in els:
            try:
                comp = find_comprehension(P, a, alpha, "weak").arrow
            except NotFound:
                wit["eqd"] = {"clause": "source lacks comprehension", "object": a, "alpha": alpha}
                return False
            if comprehension_flags(R, F(comp), m.b(a, alpha)) is None:
                wit["eqd"] = {"object": a, "alpha": alpha, "comprehension": comp}
                return False
    return True


def find_quotient(P: Doctrine, a, rho):
    """A quotient arrow of ``rho`` on ``a``; canonical in a completion, searched otherwise."""
    if isinstance(P.base, QCategory):
        return q_quotient(P, a, rho)
    c = P.base
    for z in c.objects():
        for q in c.hom(a, z):
            if is_quotient_arrow(P, rho, q):
                return q
    return None


def _preserves_quotients(m: DoctrineMorphism, wit) -> bool:
    P, R, F = m.source, m.target, m.F
    for a in P.base.objects():
        for rho in equivalence_relations(P, a):
            q = find_quotient(P, a, rho)
            if q is None:
                continue
            if not is_quotient_arrow(R, _transport_relation(m, a, rho), F(q)):
                wit["qd"] = {"object": a, "relation": rho, "quotient": q}
                return False
    return True


def classify_morphism(m: DoctrineMorphism) -> MorphismFlags:
    rep = check_morphism(m)
    if not rep:
        raise InvariantViolation("not an ED 1-arrow", rep.counterexample)
    wit: dict = {}
    eed = _preserves_existentials(m, wit)
    eqd = _preserves_comprehensions(m, wit)
    qd = eqd and _preserves_quotients(m, wit)
    return MorphismFlags(True, eed, eqd, qd, wit)


# ---------------------------------------------------------------------------
# 2-cells


def check_2cell(cell: Doctrine2Cell) -> StructureReport:
    m1, m2, d = cell.source, cell.target, cell.d
    P, R = m1.source, m1.target
    c, dd = P.base, R.base
    checked = 0
    for a, b in itertools.product(c.objects(), repeat=2):
        for f in c.hom(a, b):
            checked += 1
            if dd.compose(m1.F(f), d[a]) != dd.compose(d[b], m2.F(f)):
                return StructureReport.fail("2-cell", {"clause": "naturality", "arrow": f}, checked)
    for a in c.objects():
        for x in enumerate_fiber(P, a) or []:
            checked += 1
            if not R.leq(m2.F(a), R(d[a], m1.b(a, x)), m2.b(a, x)):
                return StructureReport.fail("2-cell", {"clause": "inequality", "object": a, "alpha": x},
                                            checked)
    return StructureReport.ok("2-cell", checked)


def enumerate_2cells(m1: DoctrineMorphism, m2: DoctrineMorphism) -> list[dict]:
    c, dd = m1.source.base, m1.target.base
    objs = c.objects()
    choices = [dd.hom(m2.F(a), m1.F(a)) for a in objs]
    out = []
    for combo in itertools.product(*choices):
        d = dict(zip(objs, combo))
        if check_2cell(Doctrine2Cell(m1, m2, d)):
            out.append(d)
    return out


def is_iso_2cell(m1, m2, d) -> bool:
    dd = m1.target.base
    inv = {}
    for a, arr in d.items():
        k = dd.inverse(arr)
        if k is None:
            return False
        inv[a] = k
    return bool(check_2cell(Doctrine2Cell(m1, m2, d))) and bool(check_2cell(Doctrine2Cell(m2, m1, inv)))


def isomorphic(m1, m2) -> bool:
    return any(is_iso_2cell(m1, m2, d) for d in enumerate_2cells(m1, m2))


# ---------------------------------------------------------------------------
# enumeration of 1-arrows


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, what):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExhausted(f"budget of {self.limit} object maps exhausted while {what}",
                                  coverage={"object_maps": self.used - 1})


def enumerate_functors(c: Category, d: Category, budget: _Budget | int):
    """Product-preserving functors ``c -> d`` on the window of ``c``."""
    if isinstance(budget, int):
        budget = _Budget(budget)
    objs = c.objects()
    arrows = [f for f in c.arrows() if f != c.identity(f.source)]
    for images in itertools.product(d.objects(), repeat=len(objs)):
        budget.spend("enumerating functors")
        omap = dict(zip(objs, images))
        choices = [d.hom(omap[f.source], omap[f.target]) for f in arrows]
        if any(not ch for ch in choices):
            continue
        for combo in itertools.product(*choices):
            amap = dict(zip(arrows, combo))
            for a in objs:
                amap[c.identity(a)] = d.identity(omap[a])
            if not _functorial(c, d, omap, amap):
                continue
            F = FunctorData(c, d, omap.__getitem__, amap.__getitem__, name="F")
            if preserves_products(F):
                yield F


def _functorial(c, d, omap, amap) -> bool:
    for (f, Ff), (g, Fg) in itertools.product(amap.items(), repeat=2):
        if g.source == f.target and c.compose(g, f) in amap:
            if amap[c.compose(g, f)] != d.compose(Fg, Ff):
                return False
    return True


def _fiber_maps(P, R, a, Fa):
    src = list(P.fiber(a).elements())
    tgt = list(R.fiber(Fa).elements())
    for combo in itertools.product(tgt, repeat=len(src)):
        table = dict(zip(src, combo))
        m = MonotoneMap(P.fiber(a), R.fiber(Fa), table.__getitem__)
        if preserves_meets(m):
            yield table


def enumerate_morphisms(P: Doctrine, R: Doctrine, budget: _Budget | int, kind="EqD"):
    """All ``kind`` 1-arrows ``P -> R`` on the window (``ED``, ``EqD`` or ``QD``).

    ``budget`` caps the candidate object maps tried.
    """
    if isinstance(budget, int):
        budget = _Budget(budget)
    objs = P.base.objects()
    out = []
    for F in enumerate_functors(P.base, R.base, budget):
        per_obj = [list(_fiber_maps(P, R, a, F(a))) for a in objs]
        for tables in itertools.product(*per_obj):
            tab = dict(zip(objs, tables))
            m = DoctrineMorphism(P, R, F, lambda a, x, tab=tab: tab[a][x], name="m")
            if not check_morphism(m):
                continue
            wit: dict = {}
            if kind in ("EqD", "QD") and not _preserves_comprehensions(m, wit):
                continue
            if kind == "QD" and not _preserves_quotients(m, wit):
                continue
            out.append(m)
    return out


def restrict(m: DoctrineMorphism, P: Doctrine, J: FunctorData) -> DoctrineMorphism:
    """``(G, c) o (J, j)`` with ``j`` the identity."""
    G = m.F
    F = FunctorData(P.base, m.target.base, lambda a: G(J(a)), lambda f: G(J(f)), name=f"{G.name}J")
    return DoctrineMorphism(P, m.target, F, lambda a, x: m.b(J(a), x), name=f"{m.name}J")


def extend_along_quotients(P: Doctrine, Q: Doctrine, m: DoctrineMorphism) -> DoctrineMorphism:
    """Extend ``(F, b): P -> X`` to the completion by sending ``(A, rho)``
    to a quotient of the transported relation on ``F A``."""
    X, F = m.target, m.F
    QC, xc = Q.base, X.base
    quot = {}
    for s in QC.objects():
        rel = _transport_relation(m, s.carrier, s.relation)
        q = find_quotient(X, F(s.carrier), rel)
        if q is None:
            raise NotFound(f"no quotient in the target for {s}", witness={"object": s})
        quot[s] = q
    omap = {s: q.target for s, q in quot.items()}
    amap = {}
    for s, t in itertools.product(QC.objects(), repeat=2):
        for f in QC.hom(s, t):
            target = xc.compose(quot[t], F(f.data))
            hs = [h for h in xc.hom(omap[s], omap[t]) if xc.compose(h, quot[s]) == target]
            if len(hs) != 1:
                raise InvariantViolation("extension is not determined on arrows", {"arrow": f, "hits": hs})
            amap[f] = hs[0]

    def c_map(s, alpha):
        want = m.b(s.carrier, alpha)
        hits = [g for g in X.fiber(omap[s]).elements() if X(quot[s], g) == want]
        if len(hits) != 1:
            raise InvariantViolation("descent is not effective", {"object": s, "alpha": alpha})
        return hits[0]

    G = FunctorData(QC, xc, omap.__getitem__, amap.__getitem__, name="G")
    return DoctrineMorphism(Q, X, G, c_map, name="ext")


def verify_universal_property(P: Doctrine, X: Doctrine, budget=10 ** 4, Q: Doctrine | None = None
                              ) -> StructureReport:
    """Precomposition with ``(J, j)`` is an essential equivalence on the window.

    Checks: every comprehension-preserving 1-arrow ``P -> X`` extends along
    ``J`` (the extension is built from quotients and must preserve
    quotients and comprehensions), extensions are unique up to vertical
    iso, and restriction is a bijection on 2-cells.
    """
    name = "universal property"
    if Q is None:
        Q = quotient_completion(P)
    J, _ = embed(P, Q)
    spent = _Budget(budget)
    eqd = enumerate_morphisms(P, X, spent, "EqD")
    qd = enumerate_morphisms(Q, X, spent, "QD")
    checked = 0
    for m in eqd:
        checked += 1
        ext = extend_along_quotients(P, Q, m)
        flags = classify_morphism(ext)
        if not flags.qd:
            return StructureReport.fail(name, {"clause": "extension preserves structure",
                                               "witness": flags.witness}, checked)
        if not isomorphic(m, restrict(ext, P, J)):
            return StructureReport.fail(name, {"clause": "restriction of extension", "morphism": m.name},
                                        checked)
        matches = [g for g in qd if isomorphic(m, restrict(g, P, J))]
        if not matches:
            return StructureReport.fail(name, {"clause": "essential surjectivity"}, checked)
        for g1, g2 in itertools.combinations(matches + [ext], 2):
            checked += 1
            if not isomorphic(g1, g2):
                return StructureReport.fail(name, {"clause": "uniqueness up to iso"}, checked)
    for g in qd:
        checked += 1
        if not _preserves_comprehensions(restrict(g, P, J), {}):
            return StructureReport.fail(name, {"clause": "restriction lands in EqD"}, checked)
    for g1, g2 in itertools.product(qd, repeat=2):
        checked += 1
        up = enumerate_2cells(g1, g2)
        down = enumerate_2cells(restrict(g1, P, J), restrict(g2, P, J))
        images = [{a: d[J(a)] for a in P.base.objects()} for d in up]
        keyed = {tuple(sorted(d.items(), key=repr)) for d in images}
        if len(keyed) != len(up) or sorted(map(repr, images)) != sorted(map(repr, down)):
            return StructureReport.fail(name, {"clause": "2-cell bijection", "up": len(up),
                                               "down": len(down)}, checked)
    return StructureReport.ok(name, checked, scope=f"{P.base.window_note()}; budget={budget}",
                              eqd_arrows=len(eqd), qd_arrows=len(qd), object_maps=spent.used)


# ---------------------------------------------------------------------------
# regularity and exactness


def _kernel_pair_report(c: Category, f: Arrow, wit) -> bool:
    v, k1, k2 = c.chosen_pullback(f, f)
    if c.compose(f, k1) != c.compose(f, k2):
        wit.update({"clause": "kernel pair commutes", "arrow": f})
        return False
    for t in c.objects():
        for t1 in c.hom(t, f.source):
            for t2 in c.factorizations(c.compose(f, t1), f):
                us = [u for u in c.factorizations(t1, k1) if c.compose(k2, u) == t2]
                if len(us) != 1:
                    wit.update({"clause": "kernel pair is a limit", "arrow": f, "span": (t1, t2)})
                    return False
    return True


def check_regular(P: Doctrine) -> StructureReport:
    """Kernel pairs, coequalizers of kernels and their stability on the window.

    The coequalizer of the kernel pair of ``f`` is taken to be the quotient
    of the kernel relation of ``f``.  Existence of coequalizers is checked
    for every arrow first, then their stability, then kernel pairs.
    """
    name = "regular"
    c = P.base
    arrows = [f for a in c.objects() for b in c.objects() for f in c.hom(a, b)]
    checked = 0
    found = []
    for f in arrows:
        checked += 1
        ker = kernel_of(P, f)
        q = find_quotient(P, f.source, ker.relation)
        if q is None:
            return StructureReport.fail(name, {"clause": "coequalizer", "arrow": f,
                                               "kernel": ker.relation}, checked)
        found.append((f, ker, q))
    for f, ker, q in found:
        checked += 1
        v, k1, k2 = c.chosen_pullback(f, f)
        if c.compose(q, k1) != c.compose(q, k2):
            return StructureReport.fail(name, {"clause": "coequalizes kernel pair", "arrow": f}, checked)
        flags = classify_quotient(P, ker, q)
        if not (flags.quotient and flags.stable):
            return StructureReport.fail(name, {"clause": "stable coequalizer", "arrow": f,
                                               **flags.witness}, checked)
    for f in arrows:
        checked += 1
        wit: dict = {}
        if not _kernel_pair_report(c, f, wit):
            return StructureReport.fail(name, wit, checked)
    return StructureReport.ok(name, checked, scope=c.window_note())


def _mono_classes(c: Category, a):
    classes = []
    for x in c.candidate_objects(at_least=a):
        for g in c.hom(x, a):
            if not is_mono(c, g):
                continue
            if not any(c.factors(g, r) and c.factors(r, g) for r in classes):
                classes.append(g)
    return classes


def _fiber_matches_subobjects(P: Doctrine, a, wit) -> bool:
    c = P.base
    els = enumerate_fiber(P, a)
    if els is None:
        raise FiberTooLarge(f"fiber over {a!r}")
    monos = _mono_classes(c, a)
    image = {}
    for alpha in els:
        comp = find_comprehension(P, a, alpha, "weak").arrow
        hit = [i for i, r in enumerate(monos) if c.factors(comp, r) and c.factors(r, comp)]
        if len(hit) != 1:
            wit.update({"object": a, "alpha": alpha, "clause": "comprehension is not a listed mono"})
            return False
        image[alpha] = hit[0]
    if sorted(image.values()) != list(range(len(monos))):
        wit.update({"object": a, "clause": "fiber vs subobjects", "fiber": len(els),
                    "subobjects": len(monos)})
        return False
    fib = P.fiber(a)
    for x, y in itertools.product(els, repeat=2):
        if fib.leq(x, y) != c.factors(monos[image[x]], monos[image[y]]):
            wit.update({"object": a, "clause": "order", "pair": (x, y)})
            return False
    return True


def check_exact_characterization(P: Doctrine) -> StructureReport:
    """Monos are comprehensions (left) versus exactness of the base (right).

    Right side: every equivalence relation on a window object has a stable
    effective quotient, and each fiber is order-isomorphic, via
    comprehension, to the subobjects of its object.
    """
    c = P.base
    left_wit: dict = {}
    left = True
    checked = 0
    for a in c.objects():
        els = enumerate_fiber(P, a) or []
        for x in c.objects():
            for m in c.hom(x, a):
                if not is_mono(c, m):
                    continue
                checked += 1
                ok = any((fl := comprehension_flags(P, m, alpha)) is not None and fl.strict
                         for alpha in els)
                if not ok:
                    left = False
                    left_wit = {"mono": m}
                    break
            if not left:
                break
        if not left:
            break
    right_wit: dict = {}
    right = True
    for a in c.objects():
        if not _fiber_matches_subobjects(P, a, right_wit):
            right = False
            break
        for rho in equivalence_relations(P, a):
            checked += 1
            q = find_quotient(P, a, rho)
            flags = None if q is None else classify_quotient(P, EquivalenceRelationWitness(a, rho), q)
            if flags is None or not (flags.quotient and flags.stable and flags.effective):
                right = False
                right_wit = {"object": a, "relation": rho, "quotient": q}
                break
        if not right:
            break
    details = {"monos_are_comprehensions": left, "exact": right,
               "left_witness": left_wit, "right_witness": right_wit}
    if left != right:
        return StructureReport.fail("exactness characterization", details, checked, scope=c.window_note())
    return StructureReport.ok("exactness characterization", checked, scope=c.window_note(), **details)


def check_quotients(P: Doctrine) -> StructureReport:
    """Every equivalence relation on a window object has a stable effective
    quotient of effective descent."""
    name = "quotients"
    checked = 0
    for a in P.base.objects():
        for rho in equivalence_relations(P, a):
            checked += 1
            q = find_quotient(P, a, rho)
            if q is None:
                return StructureReport.fail(name, {"clause": "existence", "object": a, "relation": rho},
                                            checked)
            flags = classify_quotient(P, EquivalenceRelationWitness(a, rho), q)
            if not flags.all():
                return StructureReport.fail(name, {"object": a, "relation": rho, "quotient": q,
                                                   "flags": vars(flags)}, checked)
    return StructureReport.ok(name, checked, scope=P.base.window_note())
