"""Acceptance suite: one PASS/FAIL line per criterion.

Run ``python3 tests/test_acceptance.py`` for the plain listing, or
``pytest -s tests/test_acceptance.py`` to see the same lines under pytest.
"""

import sys
import time
from functools import cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import bell, hom_classes, partitions, subset_lattice_iso_count, unions_of_blocks  # noqa: E402
from qdoctrine.builders import (  # noqa: E402
    change_of_base,
    powerset_doctrine,
    setoid_powerset_doctrine,
    subobject_doctrine,
    two_point_doctrine,
    weak_subobject_doctrine,
)
from qdoctrine.category import FinSet  # noqa: E402
from qdoctrine.completion import (  # noqa: E402
    QObject,
    embed,
    embedding_report,
    lift_existential,
    lift_weak_evaluation,
    q_check_auc_transfer,
    q_quotient_flags,
    quotient_completion,
)
from qdoctrine.doctrine import (  # noqa: E402
    check_elementary,
    check_existential,
    check_implicational,
    check_primary,
    check_universal,
    diagonal_identity,
    equivalence_relations,
    find_comprehension,
    has_comprehensions,
    has_comprehensive_equalizers,
)
from qdoctrine.order import MonotoneMap, is_order_isomorphism, mask_of  # noqa: E402
from qdoctrine.twocat import (  # noqa: E402
    DoctrineMorphism,
    check_exact_characterization,
    check_regular,
    classify_morphism,
    verify_universal_property,
)


@cache
def pow2():
    return powerset_doctrine(FinSet(2))


@cache
def psi2():
    return weak_subobject_doctrine(FinSet(2))


@cache
def q_pow2():
    return quotient_completion(pow2())


@cache
def q_psi2():
    return quotient_completion(psi2())


def _failures(reports):
    return [f"{r.name}: {r.counterexample}" for r in reports if not r]


def _relation(n, partition):
    return mask_of(x * n + y for block in partition for x in block for y in block)


def _partition(n, mask):
    return next(p for p in partitions(range(n)) if _relation(n, p) == mask)


def law_ladder():
    P = powerset_doctrine(FinSet(3))
    start = time.perf_counter()
    reports = [check(P) for check in (check_primary, check_elementary, check_existential,
                                      check_implicational, check_universal)]
    bad = _failures(reports)
    for a in P.base.objects():
        for x in P.fiber(a).elements():
            comp = find_comprehension(P, a, x, "strict")
            if not comp.full:
                bad.append(f"comprehension of {x} over {a} is not full")
    reports.append(has_comprehensive_equalizers(P, "strict"))
    bad += _failures(reports[-1:])
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        bad.append(f"took {elapsed:.1f}s")
    return not bad, f"{elapsed:.1f}s " + ("; ".join(bad) or "all rungs hold")


def diagonal_identity_holds():
    reports = [diagonal_identity(powerset_doctrine(FinSet(3))), diagonal_identity(psi2())]
    bad = _failures(reports)
    return not bad, "; ".join(bad) or f"{sum(r.checked for r in reports)} predicates compared"


def completion_counts():
    Q, QC = q_pow2(), q_pow2().base
    bad = []
    small = [s for s in QC.objects() if s.carrier <= 1]
    if len(small) != sum(bell(n) for n in (0, 1)) or len(small) != 2:
        bad.append(f"{len(small)} objects over carriers up to 1")
    total, disc = QObject(2, 0b1111), QObject(2, _relation(2, [[0], [1]]))
    expected = hom_classes(2, [[0, 1]], 2, [[0], [1]])
    if len(QC.hom(total, disc)) != expected or expected != 2:
        bad.append(f"hom(total, equality) has {len(QC.hom(total, disc))} classes")
    for s in QC.objects():
        want = sorted(mask_of(x) for x in unions_of_blocks(s.carrier, _partition(s.carrier, s.relation)))
        if sorted(Q.fiber(s).elements()) != want:
            bad.append(f"descent fiber over {s}")
    if Q.fiber(total).size != 2:
        bad.append("descent data on the total relation")
    flagged = 0
    for s in QC.objects():
        for tau in equivalence_relations(Q, s):
            flagged += 1
            _, flags = q_quotient_flags(Q, s, tau)
            if not (flags.quotient and flags.stable and flags.effective and flags.effective_descent):
                bad.append(f"quotient of {s} by {tau}: {flags}")
    return not bad, "; ".join(bad) or f"{flagged} quotients carry every flag"


def embedding():
    P, Q = pow2(), q_pow2()
    bad = _failures([embedding_report(P, Q)])
    J, _ = embed(P, Q)
    back = change_of_base(Q, J)
    for a in P.base.objects():
        if list(back.fiber(a).elements()) != list(P.fiber(a).elements()):
            bad.append(f"fiber over {a} differs after change of base")
        for b in P.base.objects():
            for f in P.base.hom(a, b):
                if any(back(f, x) != P(f, x) for x in P.fiber(b).elements()):
                    bad.append(f"reindexing along {f} differs after change of base")
    return not bad, "; ".join(bad) or "full, faithful, fiberwise iso, conservative"


def completion_structure():
    reports = []
    for Q in (q_pow2(), q_psi2()):
        reports += [check_elementary(Q), has_comprehensions(Q, "strict", require_full=True),
                    has_comprehensive_equalizers(Q, "strict")]
    bad = _failures(reports)
    return not bad, "; ".join(bad) or f"{len(reports)} checks on both completions"


def existential_lift():
    bad = _failures([lift_existential(q_pow2())])
    J, _ = embed(pow2(), q_pow2())
    flags = classify_morphism(DoctrineMorphism(pow2(), q_pow2(), J, lambda a, x: x, name="J"))
    if not flags.eed:
        bad.append(f"embedding is not existential-preserving: {flags.witness}")
    return not bad, "; ".join(bad) or "quantifiers lift; embedding preserves them"


def evaluation_lift():
    Q = quotient_completion(powerset_doctrine(FinSet(4)), carriers=[0, 1, 2])
    d2 = QObject(2, 0b1001)
    lifted = lift_weak_evaluation(Q, d2, d2)
    bad = _failures([lifted.report])
    collapsed = lift_weak_evaluation(Q, d2, QObject(2, 0b1111))
    if len(Q.base.hom(Q.base.terminal, collapsed.exponent)) != 1:
        bad.append("collapsed codomain does not give a one-point exponential")
    return not bad, "; ".join(bad) or f"{lifted.report.checked} competitors factor uniquely"


def unique_choice():
    sets = q_check_auc_transfer(powerset_doctrine(FinSet(3)), 2, 2)
    setoids = q_check_auc_transfer(setoid_powerset_doctrine(), (2, (0, 0)), (2, (0, 1)))
    bad = _failures([sets, setoids])
    if sets and not (sets.details["base"] and sets.details["completion"]):
        bad.append("unique choice fails for sets")
    if setoids and (setoids.details["base"] or setoids.details["completion"]):
        bad.append("unique choice unexpectedly holds for setoids")
    return not bad, "; ".join(bad) or "agree on sets (both hold) and setoids (both fail)"


def universal_property():
    start = time.perf_counter()
    rep = verify_universal_property(powerset_doctrine(FinSet(1)), two_point_doctrine(), budget=10 ** 4)
    elapsed = time.perf_counter() - start
    bad = _failures([rep])
    if elapsed >= 300:
        bad.append(f"took {elapsed:.1f}s")
    return not bad, f"{elapsed:.1f}s " + ("; ".join(bad) or f"{rep.details['object_maps']} object maps")


def regularity_and_exactness():
    reports = [check_regular(q_pow2()), check_regular(q_psi2())]
    bad = _failures(reports)
    exact = check_exact_characterization(q_pow2())
    escaping = check_exact_characterization(quotient_completion(setoid_powerset_doctrine()))
    bad += _failures([exact, escaping])
    if exact and not exact.details["exact"]:
        bad.append("completion of sets judged not exact")
    if escaping and escaping.details["exact"]:
        bad.append("completion of setoids judged exact")
    return not bad, "; ".join(bad) or "both completions regular; characterization agrees (exact, not exact)"


def weak_subobjects_are_subsets():
    sub2, P = subobject_doctrine(FinSet(2)), pow2()
    bad = []
    for a in P.base.objects():
        for D in (psi2(), sub2):
            fib = D.fiber(a)
            iso = MonotoneMap(fib, P.fiber(a), lambda x: mask_of(x.rep.data))
            if fib.size != subset_lattice_iso_count(a) or not is_order_isomorphism(iso):
                bad.append(f"{D.name} over {a}")
    return not bad, "; ".join(bad) or f"{len(P.base.objects())} fibers isomorphic"


CRITERIA = [
    (1, "law ladder on sets", law_ladder),
    (2, "diagonal identity", diagonal_identity_holds),
    (3, "completion counts", completion_counts),
    (4, "embedding", embedding),
    (5, "completion structure", completion_structure),
    (6, "existential lift", existential_lift),
    (7, "evaluation lift", evaluation_lift),
    (8, "unique choice transfer", unique_choice),
    (9, "universal property", universal_property),
    (10, "regularity and exactness", regularity_and_exactness),
    (11, "weak subobjects are subsets", weak_subobjects_are_subsets),
]


def _line(number, title, fn):
    passed, detail = fn()
    print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'} {title}: {detail}", flush=True)
    return passed


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[t for _, t, _ in CRITERIA])
def test_criterion(number, title, fn):
    assert _line(number, title, fn)


if __name__ == "__main__":
    results = [_line(*c) for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
