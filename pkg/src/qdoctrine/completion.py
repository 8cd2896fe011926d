"""The elementary quotient completion of a doctrine.

Objects are pairs ``(A, rho)`` with ``rho`` an equivalence relation in the
doctrine; arrows are classes of relation-preserving base arrows; the fiber
over ``(A, rho)`` is the poset of descent data for ``rho``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .category import Arrow, Category, FinSet, FunctorData, SetoidCategory, find_weak_evaluation
from .doctrine import (
    Doctrine,
    EquivalenceRelationWitness,
    check_existential,
    classify_quotient,
    delta,
    enumerate_fiber,
    equivalence_relations,
    find_comprehension,
    is_descent,
    is_equivalence_relation,
)
from .order import MeetSemilattice, MonotoneMap, is_order_isomorphism
from .report import (
    FiberTooLarge,
    InvariantViolation,
    MalformedInput,
    NotAnEquivalenceRelation,
    StructureReport,
)

HOM_LIMIT = 1 << 16
TABLE_LIMIT = 256


@dataclass(frozen=True)
class QObject:
    carrier: object
    relation: object

    def __repr__(self):
        return f"({self.carrier},{self.relation})"


class DescentLattice(MeetSemilattice):
    """Descent data for ``rho``: a meet-closed subset of ``P(A)``."""

    def __init__(self, P: Doctrine, obj: QObject):
        self.P = P
        self.obj = obj
        self.parent = P.fiber(obj.carrier)
        self.top = self.parent.top
        self.name = f"des{obj}"
        self._els = None

    def enumerable(self):
        return self.parent.enumerable()

    def elements(self):
        if self._els is None:
            if not self.parent.enumerable():
                raise FiberTooLarge(f"descent data over {self.obj} not enumerable")
            self._els = [x for x in self.parent.elements() if x in self]
        return self._els

    @property
    def size(self):
        return len(self.elements())

    def __contains__(self, x):
        return x in self.parent and is_descent(self.P, self.obj.carrier, self.obj.relation, x)

    def leq(self, x, y):
        return self.parent.leq(x, y)

    def meet(self, x, y):
        return self.parent.meet(x, y)

    def show(self, x):
        return self.parent.show(x)

    def __repr__(self):
        return self.name


class QCategory(Category):
    """Base category of the completion.

    ``carriers`` fixes the window (defaults to the base window); products and
    comprehensions may produce objects on larger carriers, which are admitted
    on demand.
    """

    def __init__(self, P: Doctrine, carriers=None):
        self.P = P
        self.c = P.base
        self.carriers = list(carriers) if carriers is not None else self.c.objects()
        self.name = f"Q[{P.name}]"
        self._objects = None
        self._homs: dict = {}
        self._class_of: dict = {}
        self._projections: dict = {}
        self._product_cache: dict = {}
        t = self.c.terminal
        self.terminal = QObject(t, delta(P, t))

    # -- objects -----------------------------------------------------------

    def objects(self):
        if self._objects is None:
            self._objects = [QObject(a, r) for a in self.carriers
                             for r in equivalence_relations(self.P, a)]
        return list(self._objects)

    def object_size(self, a):
        return self.c.object_size(a.carrier)

    def window_note(self):
        return f"{self.name} carriers={self.carriers}"

    def obj(self, carrier, relation) -> QObject:
        rep = is_equivalence_relation(self.P, carrier, relation)
        if not rep:
            raise NotAnEquivalenceRelation(f"{relation!r} on {carrier!r}: {rep.counterexample}")
        return QObject(carrier, relation)

    # -- arrows ------------------------------------------------------------

    def admissible(self, f: Arrow, s: QObject, t: QObject) -> bool:
        P, c = self.P, self.c
        return P.leq(c.product(s.carrier, s.carrier)[0], s.relation, P(c.times(f, f), t.relation))

    def equivalent(self, f: Arrow, g: Arrow, s: QObject, t: QObject) -> bool:
        P, c = self.P, self.c
        return P.leq(c.product(s.carrier, s.carrier)[0], s.relation, P(c.times(f, g), t.relation))

    def _hom_bound(self, a, b) -> int:
        c = self.c
        if isinstance(c, (FinSet, SetoidCategory)):
            return c.object_size(b) ** c.object_size(a)
        return len(c.hom(a, b))

    def _classes(self, s, t):
        key = (s, t)
        if key in self._homs:
            return self._homs[key]
        base_hom = self.c.hom(s.carrier, t.carrier)
        if len(base_hom) > HOM_LIMIT:
            raise FiberTooLarge(f"hom {s} -> {t} has {len(base_hom)} base arrows")
        reps: list[Arrow] = []
        members: dict = {}
        by_descent = len(base_hom) > TABLE_LIMIT and isinstance(self.c, (FinSet, SetoidCategory))
        for f in base_hom:
            if not self.admissible(f, s, t):
                continue
            if by_descent:
                hit = self._descend(f, s, t)
                if not self.equivalent(hit, f, s, t):
                    raise InvariantViolation("class relation is not symmetric", {"arrows": (f, hit)})
                if hit not in members:
                    reps.append(hit)
                members.setdefault(hit, []).append(f)
                self._class_of[(s, t, f)] = hit
                continue
            hit = None
            for r in reps:
                if self.equivalent(f, r, s, t):
                    if not self.equivalent(r, f, s, t):
                        raise InvariantViolation("class relation is not symmetric", {"arrows": (f, r)})
                    if hit is not None:
                        raise InvariantViolation("class relation is not transitive",
                                                 {"arrow": f, "classes": (hit, r)})
                    hit = r
            if hit is None:
                reps.append(f)
                hit = f
            members.setdefault(hit, []).append(f)
            self._class_of[(s, t, f)] = hit
        self._check_well_defined(t, members)
        self._homs[key] = [Arrow(s, t, r) for r in reps]
        return self._homs[key]

    def _check_well_defined(self, t, members):
        # equivalent arrows reindex descent data identically
        fib = self.P.fiber(t.carrier)
        if not fib.enumerable() or fib.size > 256:
            return
        des = [x for x in fib.elements() if is_descent(self.P, t.carrier, t.relation, x)]
        for r, fs in members.items():
            if len(fs) < 2:
                continue
            for beta in des:
                if len({self.P(f, beta) for f in fs}) > 1:
                    raise InvariantViolation("reindexing depends on the representative",
                                             {"class": r, "beta": beta})

    def _descend(self, f: Arrow, s, t) -> Arrow:
        # least member by lowering one coordinate at a time; exact when a
        # class is a product of per-point choices, as for relations on sets
        c = self.c
        data = list(f.data)
        for i in range(len(data)):
            for v in range(data[i]):
                cand = data.copy()
                cand[i] = v
                if isinstance(c, SetoidCategory) and not c.respects(f.source, f.target, cand):
                    continue
                g = Arrow(f.source, f.target, tuple(cand))
                if self.admissible(g, s, t) and self.equivalent(g, f, s, t):
                    data = cand
                    break
        return Arrow(f.source, f.target, tuple(data))

    def hom(self, s, t):
        return self._classes(s, t)

    def arrow(self, f: Arrow, s: QObject, t: QObject) -> Arrow:
        """The class of an admissible base arrow."""
        key = (s, t, f)
        hit = self._class_of.get(key)
        if hit is None:
            if self._hom_bound(s.carrier, t.carrier) <= TABLE_LIMIT:
                self._classes(s, t)
                hit = self._class_of.get(key)
            elif isinstance(self.c, (FinSet, SetoidCategory)) and self.admissible(f, s, t):
                hit = self._class_of[key] = self._descend(f, s, t)
            else:
                raise FiberTooLarge(f"hom {s} -> {t} too large to classify {f}")
        if hit is None:
            raise MalformedInput(f"{f} does not preserve the relations {s} -> {t}")
        return Arrow(s, t, hit)

    def identity(self, a):
        return self.arrow(self.c.identity(a.carrier), a, a)

    def compose(self, g, f):
        if f.target != g.source:
            raise MalformedInput(f"cannot compose {g} after {f}")
        return self.arrow(self.c.compose(g.data, f.data), f.source, g.target)

    def to_terminal(self, a):
        return self.arrow(self.c.to_terminal(a.carrier), a, self.terminal)

    def boxtimes(self, s: QObject, t: QObject):
        """``P_<pr1,pr3>(rho) ^ P_<pr2,pr4>(sigma)`` on ``(A x B) x (A x B)``."""
        P, c = self.P, self.c
        ab, p1, p2 = c.product(s.carrier, t.carrier)
        abab, q1, q2 = c.product(ab, ab)
        pr = [c.compose(p1, q1), c.compose(p2, q1), c.compose(p1, q2), c.compose(p2, q2)]
        left = P(c.pair(pr[0], pr[2]), s.relation)
        right = P(c.pair(pr[1], pr[3]), t.relation)
        return P.meet(abab, left, right)

    def product(self, s, t):
        key = (s, t)
        if key not in self._product_cache:
            c = self.c
            ab, p1, p2 = c.product(s.carrier, t.carrier)
            obj = QObject(ab, self.boxtimes(s, t))
            q1, q2 = self.arrow(p1, obj, s), self.arrow(p2, obj, t)
            self._projections.setdefault(q1, p1)
            self._projections.setdefault(q2, p2)
            self._product_cache[key] = (obj, q1, q2)
        return self._product_cache[key]

    def base_projection(self, pr: Arrow) -> Arrow:
        """The base projection underlying a chosen product projection class."""
        try:
            return self._projections[pr]
        except KeyError:
            raise MalformedInput(f"{pr} is not a chosen projection") from None

    def pair(self, f, g):
        obj = self.product(f.target, g.target)[0]
        return self.arrow(self.c.pair(f.data, g.data), f.source, obj)

    def chosen_pullback(self, f, g):
        """Comprehension of ``P_{f x g}(gamma)`` over the product of the sources."""
        P, c = self.P, self.c
        if f.target != g.target:
            raise MalformedInput("cospan legs must share a codomain")
        prod, q1, q2 = self.product(f.source, g.source)
        gamma = f.target.relation
        x = P(c.times(f.data, g.data), gamma)
        e = find_comprehension(P, prod.carrier, x, "weak").arrow
        v = QObject(e.source, P(c.times(e, e), prod.relation))
        left = self.arrow(c.compose(q1.data, e), v, f.source)
        right = self.arrow(c.compose(q2.data, e), v, g.source)
        return v, left, right


def _q_comprehension_candidates(QC: QCategory):
    P, c = QC.P, QC.c

    def candidates(s, beta):
        comp = find_comprehension(P, s.carrier, beta, "weak").arrow
        x = QObject(comp.source, P(c.times(comp, comp), s.relation))
        yield QC.arrow(comp, x, s)
    return candidates


def quotient_completion(P: Doctrine, carriers=None) -> Doctrine:
    """The completion as a doctrine over :class:`QCategory`.

    Equality over ``(A, rho)`` is ``rho`` itself, implication and universal
    quantifiers are those of the underlying doctrine (they preserve descent
    data); existential quantifiers are installed by :func:`lift_existential`.
    """
    QC = QCategory(P, carriers)
    fibers: dict = {}

    def fiber(s):
        if s not in fibers:
            fibers[s] = DescentLattice(P, s)
        return fibers[s]

    def reindex(f, x):
        return P(f.data, x)

    ops = {
        "delta": lambda s: s.relation,
        "implies": lambda s, x, y: P.implies(s.carrier, x, y),
        "forall": lambda pr, x: P.forall(QC.base_projection(pr), x),
    }
    Q = Doctrine(QC, fiber, reindex, name=f"Q({P.name})", ops=ops,
                 comprehension_candidates=_q_comprehension_candidates(QC))
    Q.underlying = P
    return Q


def lift_existential(Q: Doctrine) -> StructureReport:
    """Install existential quantifiers along projections and check them.

    The adjoint along a product projection is the underlying doctrine's
    adjoint along the base projection.  Passes when the completion is
    existential and the embedding preserves the adjoints.
    """
    P, QC = Q.underlying, Q.base
    Q.ops["exists"] = lambda pr, x: P.exists(QC.base_projection(pr), x)
    rep = check_existential(Q)
    if not rep:
        return rep
    J, _ = embed(P, Q)
    checked = rep.checked
    c = P.base
    for a1, a2 in itertools.product(c.objects(), repeat=2):
        x, p1, p2 = c.product(a1, a2)
        for pr in (p1, p2):
            els = enumerate_fiber(P, x)
            if els is None:
                continue
            qpr = QC.product(J(a1), J(a2))[1 if pr == p1 else 2]
            for beta in els:
                checked += 1
                if Q.exists(qpr, beta) != P.exists(pr, beta):
                    return StructureReport.fail("lifted existential", {"projection": pr, "beta": beta},
                                                checked)
    return StructureReport.ok("lifted existential", checked, rep.skipped, scope=QC.window_note())


def q_quotient(Q: Doctrine, s: QObject, tau) -> Arrow:
    """``[id_A] : (A, rho) -> (A, tau)`` for an equivalence relation ``tau`` over ``(A, rho)``."""
    rep = is_equivalence_relation(Q, s, tau)
    if not rep:
        raise NotAnEquivalenceRelation(f"{tau!r} over {s}: {rep.counterexample}")
    QC = Q.base
    target = QC.obj(s.carrier, tau)
    return QC.arrow(QC.c.identity(s.carrier), s, target)


def q_quotient_flags(Q: Doctrine, s: QObject, tau):
    q = q_quotient(Q, s, tau)
    return q, classify_quotient(Q, EquivalenceRelationWitness(s, tau), q)


def embed(P: Doctrine, Q: Doctrine):
    """``J(A) = (A, delta_A)`` on objects, classes of arrows on arrows; ``j`` is the identity."""
    QC = Q.base

    def on_obj(a):
        return QObject(a, delta(P, a))

    J = FunctorData(P.base, QC, on_obj, lambda f: QC.arrow(f, on_obj(f.source), on_obj(f.target)),
                    name="J")
    j = {a: MonotoneMap(P.fiber(a), Q.fiber(on_obj(a)), lambda x: x, name=f"j_{a}")
         for a in P.base.objects()}
    return J, j


def embedding_report(P: Doctrine, Q: Doctrine) -> StructureReport:
    """Fullness, faithfulness (hom counting) and bijectivity of each ``j_A``."""
    J, j = embed(P, Q)
    c = P.base
    checked = 0
    for a, b in itertools.product(c.objects(), repeat=2):
        checked += 1
        base_n = len(c.hom(a, b))
        q_n = len(Q.base.hom(J(a), J(b)))
        if base_n != q_n:
            return StructureReport.fail("J full and faithful", {"objects": (a, b), "base": base_n,
                                                                 "classes": q_n}, checked)
    for a, m in j.items():
        checked += 1
        if not is_order_isomorphism(m):
            return StructureReport.fail("j_A iso", {"object": a}, checked)
    return StructureReport.ok("embedding", checked, scope=c.window_note())


# ---------------------------------------------------------------------------
# evaluations and unique choice


@dataclass
class LiftedEvaluation:
    exponent: QObject
    arrow: Arrow
    weak: tuple
    report: StructureReport


def lift_weak_evaluation(Q: Doctrine, s: QObject, t: QObject, weak=None) -> LiftedEvaluation:
    """A strict evaluation ``(F, psi) x s -> t`` built from a weak one in the base.

    ``phi`` on ``W x W`` says two codes send related inputs to related
    outputs; ``F`` comprehends its diagonal and ``psi`` restricts ``phi``.
    """
    P, QC = Q.underlying, Q.base
    c = P.base
    a, b = s.carrier, t.carrier
    w_obj, w = weak if weak is not None else find_weak_evaluation(c, a, b)
    y, (q1, q2, q3, q4) = c.product_of([w_obj, w_obj, a, a])
    ww, _ = c.product_of([w_obj, w_obj])
    wwa, _ = c.product_of([w_obj, w_obj, a])
    _, down4, _ = c.product(wwa, a)
    _, down3, _ = c.product(ww, a)
    hyp = P(c.pair(q3, q4), s.relation)
    w13 = c.compose(w, c.pair(q1, q3))
    w24 = c.compose(w, c.pair(q2, q4))
    concl = P(c.pair(w13, w24), t.relation)
    phi = P.forall(down3, P.forall(down4, P.implies(y, hyp, concl)))
    diag_w = c.diagonal(w_obj)
    comp = find_comprehension(P, w_obj, P(diag_w, phi), "weak").arrow
    psi = P(c.times(comp, comp), phi)
    exponent = QC.obj(comp.source, psi)
    prod, _, _ = QC.product(exponent, s)
    ev_base = c.compose(w, c.times(comp, c.identity(a)))
    ev = QC.arrow(ev_base, prod, t)
    report = _strict_evaluation_report(QC, exponent, s, t, ev)
    return LiftedEvaluation(exponent, ev, (w_obj, w), report)


def _strict_evaluation_report(QC: QCategory, exponent, s, t, ev) -> StructureReport:
    name = "strict evaluation"
    checked = 0
    ids = QC.identity(s)
    for x in QC.objects():
        xs = QC.product(x, s)[0]
        for g in QC.hom(xs, t):
            checked += 1
            ks = [k for k in QC.hom(x, exponent) if QC.compose(ev, QC.times(k, ids)) == g]
            if len(ks) != 1:
                return StructureReport.fail(name, {"competitor": g, "factorizations": len(ks)}, checked)
    return StructureReport.ok(name, checked, scope=QC.window_note())


def q_check_auc_transfer(P: Doctrine, a, b, Q: Doctrine | None = None) -> StructureReport:
    """Unique choice from ``a`` to ``b`` holds in ``P`` iff it holds between their images."""
    from .doctrine import check_auc
    if Q is None:
        Q = quotient_completion(P)
    if "exists" not in Q.ops:
        lift_existential(Q)
    J, _ = embed(P, Q)
    left = check_auc(P, a, b)
    lifted = lift_weak_evaluation(Q, J(a), J(b))
    right = check_auc(Q, J(a), J(b), evaluation=(lifted.exponent, lifted.arrow))
    details = {"base": left.passed, "completion": right.passed,
               "base_counterexample": left.counterexample,
               "completion_counterexample": right.counterexample}
    if left.passed != right.passed:
        return StructureReport.fail("AUC transfer", details, left.checked + right.checked)
    return StructureReport.ok("AUC transfer", left.checked + right.checked,
                              scope=Q.base.window_note(), **details)
