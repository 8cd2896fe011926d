import itertools

import pytest

from oracles import auc_failures, hom_classes, partitions, respecting, unions_of_blocks
from qdoctrine.builders import change_of_base, powerset_doctrine
from qdoctrine.category import FinSet, fn
from qdoctrine.completion import (
    QObject,
    embed,
    embedding_report,
    lift_existential,
    lift_weak_evaluation,
    q_check_auc_transfer,
    q_quotient,
    q_quotient_flags,
    quotient_completion,
)
from qdoctrine.doctrine import (
    check_elementary,
    check_implicational,
    check_primary,
    check_universal,
    diagonal_identity,
    equivalence_relations,
    has_comprehensions,
    has_comprehensive_equalizers,
)
from qdoctrine.order import mask_of
from qdoctrine.report import MalformedInput, NotAnEquivalenceRelation


def relation_of(n, partition):
    return mask_of(x * n + y for block in partition for x in block for y in block)


def partition_of(n, mask):
    for p in partitions(range(n)):
        if relation_of(n, p) == mask:
            return p
    raise AssertionError(mask)


def test_objects_are_partitions(q_pow2):
    objs = q_pow2.base.objects()
    assert len([s for s in objs if s.carrier <= 1]) == 2
    assert len(objs) == 1 + 1 + 2


def test_hom_classes_match_oracle(q_pow2):
    QC = q_pow2.base
    for s, t in itertools.product(QC.objects(), repeat=2):
        expected = hom_classes(s.carrier, partition_of(s.carrier, s.relation),
                               t.carrier, partition_of(t.carrier, t.relation))
        assert len(QC.hom(s, t)) == expected, (s, t)


def test_named_hom_counts(q_pow2):
    QC = q_pow2.base
    total, disc = QObject(2, 0b1111), QObject(2, relation_of(2, [[0], [1]]))
    assert len(QC.hom(total, disc)) == 2
    assert len(QC.hom(disc, total)) == 1


def test_descent_fibers_match_oracle(q_pow2):
    for s in q_pow2.base.objects():
        expected = unions_of_blocks(s.carrier, partition_of(s.carrier, s.relation))
        assert sorted(q_pow2.fiber(s).elements()) == sorted(mask_of(x) for x in expected)
    assert q_pow2.fiber(QObject(2, 0b1111)).size == 2


def test_objects_must_carry_equivalence_relations(q_pow2):
    with pytest.raises(NotAnEquivalenceRelation):
        q_pow2.base.obj(2, 0b0001)


def test_inadmissible_arrow_is_refused(q_pow2):
    QC = q_pow2.base
    with pytest.raises(MalformedInput):
        QC.arrow(QC.c.identity(2), QObject(2, 0b1111), QObject(2, 0b1001))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_canonical_quotients_have_every_flag(q_pow2, n):
    for s in [s for s in q_pow2.base.objects() if s.carrier == n]:
        for tau in equivalence_relations(q_pow2, s):
            q, flags = q_quotient_flags(q_pow2, s, tau)
            assert flags.quotient and flags.stable and flags.effective and flags.effective_descent
            assert q.target == QObject(n, tau)


def test_quotient_of_discrete_two_by_total(q_pow2):
    q = q_quotient(q_pow2, QObject(2, 0b1001), 0b1111)
    assert q.target.relation == 0b1111


def test_embedding_is_full_faithful_and_fiberwise_iso(pow2, q_pow2):
    rep = embedding_report(pow2, q_pow2)
    assert rep, rep.counterexample


def test_change_of_base_along_embedding_recovers_fibers(pow2, q_pow2):
    J, _ = embed(pow2, q_pow2)
    back = change_of_base(q_pow2, J)
    for a in pow2.base.objects():
        assert list(back.fiber(a).elements()) == list(pow2.fiber(a).elements())
        for b in pow2.base.objects():
            for f in pow2.base.hom(a, b):
                for x in pow2.fiber(b).elements():
                    assert back(f, x) == pow2(f, x)


@pytest.mark.parametrize("fixture", ["q_pow2", "q_psi2"])
@pytest.mark.parametrize("check", [
    check_primary, check_elementary, diagonal_identity,
    lambda Q: has_comprehensions(Q, "strict", require_full=True),
    lambda Q: has_comprehensive_equalizers(Q, "strict"),
])
def test_completion_structure(request, fixture, check):
    rep = check(request.getfixturevalue(fixture))
    assert rep, rep.counterexample


def test_existential_lifts_and_embedding_preserves_it(q_pow2):
    rep = lift_existential(q_pow2)
    assert rep, rep.counterexample
    assert check_implicational(q_pow2) and check_universal(q_pow2)


def test_evaluation_lift_is_strict():
    P = powerset_doctrine(FinSet(4))
    Q = quotient_completion(P, carriers=[0, 1, 2])
    d2 = QObject(2, 0b1001)
    lifted = lift_weak_evaluation(Q, d2, d2)
    assert lifted.exponent == QObject(4, mask_of(i * 4 + i for i in range(4)))
    assert lifted.report, lifted.report.counterexample
    assert lifted.report.checked > 0


def test_collapsed_codomain_gives_one_point_exponential():
    P = powerset_doctrine(FinSet(4))
    Q = quotient_completion(P, carriers=[0, 1, 2])
    lifted = lift_weak_evaluation(Q, QObject(2, 0b1001), QObject(2, 0b1111))
    assert lifted.exponent.relation == (1 << 16) - 1
    assert len(Q.base.hom(Q.base.terminal, lifted.exponent)) == 1


def test_unique_choice_transfers_for_sets(pow3):
    rep = q_check_auc_transfer(pow3, 2, 2)
    assert rep and rep.details["base"] and rep.details["completion"]


def test_unique_choice_failure_transfers_for_setoids(setoids):
    a, b = (2, (0, 0)), (2, (0, 1))
    assert len(auc_failures(2, 2, respecting((0, 0), (0, 1)))) == 2
    rep = q_check_auc_transfer(setoids, a, b)
    assert rep, rep.counterexample
    assert rep.details["base"] is False and rep.details["completion"] is False
