import pytest

from qdoctrine.builders import powerset_doctrine, two_point_doctrine
from qdoctrine.category import FinSet, FunctorData
from qdoctrine.completion import embed, quotient_completion
from qdoctrine.twocat import (
    Doctrine2Cell,
    DoctrineMorphism,
    _Budget,
    check_2cell,
    check_exact_characterization,
    check_morphism,
    check_regular,
    classify_morphism,
    enumerate_2cells,
    enumerate_morphisms,
    extend_along_quotients,
    identity_morphism,
    is_iso_2cell,
    isomorphic,
    restrict,
    verify_universal_property,
)
from qdoctrine.report import BudgetExhausted, InvariantViolation


@pytest.fixture(scope="module")
def micro():
    return powerset_doctrine(FinSet(1)), two_point_doctrine()


def test_identity_is_a_full_strength_morphism(pow2):
    flags = classify_morphism(identity_morphism(pow2))
    assert flags.ed and flags.eed and flags.eqd and flags.qd


def test_non_natural_fiber_maps_are_rejected(pow2):
    m = identity_morphism(pow2)
    bad = DoctrineMorphism(pow2, pow2, m.F, lambda a, x: pow2.fiber(a).top, name="const-top")
    rep = check_morphism(bad)
    assert not rep
    with pytest.raises(InvariantViolation):
        classify_morphism(bad)


def test_embedding_classifies_in_every_class(pow2, q_pow2):
    J, _ = embed(pow2, q_pow2)
    flags = classify_morphism(DoctrineMorphism(pow2, q_pow2, J, lambda a, x: x, name="J"))
    assert flags.ed and flags.eed and flags.eqd
    # sets already have quotients, and J carries them to quotients
    assert flags.qd


def test_identity_two_cell_and_its_inverse(pow2):
    m = identity_morphism(pow2)
    d = {a: pow2.base.identity(a) for a in pow2.base.objects()}
    assert check_2cell(Doctrine2Cell(m, m, d))
    assert is_iso_2cell(m, m, d)


def test_micro_enumeration(micro):
    P, X = micro
    eqd = enumerate_morphisms(P, X, _Budget(100), "EqD")
    assert len(eqd) == 2
    for m in eqd:
        assert m.F(1) == "t"  # terminal goes to terminal


def test_budget_is_enforced(micro):
    P, X = micro
    with pytest.raises(BudgetExhausted) as err:
        enumerate_morphisms(P, X, _Budget(2), "EqD")
    assert err.value.coverage["object_maps"] == 2


def test_universal_property_on_micro_fixture(micro):
    P, X = micro
    rep = verify_universal_property(P, X, budget=10 ** 4)
    assert rep, rep.counterexample
    assert rep.details["eqd_arrows"] == rep.details["qd_arrows"] == 2


def test_extension_of_embedding_is_the_identity(pow2, q_pow2):
    J, _ = embed(pow2, q_pow2)
    m = DoctrineMorphism(pow2, q_pow2, J, lambda a, x: x, name="J")
    ext = extend_along_quotients(pow2, q_pow2, m)
    assert isomorphic(ext, identity_morphism(q_pow2))
    back = restrict(identity_morphism(q_pow2), pow2, J)
    for f in pow2.base.arrows():
        assert back.F(f) == J(f)


def test_restriction_is_bijective_on_two_cells(micro):
    P, X = micro
    Q = quotient_completion(P)
    J, _ = embed(P, Q)
    qd = enumerate_morphisms(Q, X, _Budget(100), "QD")
    for g1 in qd:
        for g2 in qd:
            up = enumerate_2cells(g1, g2)
            down = enumerate_2cells(restrict(g1, P, J), restrict(g2, P, J))
            assert len(up) == len(down)


def test_completions_are_regular(q_pow2, q_psi2):
    for Q in (q_pow2, q_psi2):
        rep = check_regular(Q)
        assert rep, rep.counterexample


def test_missing_three_element_set_fails_at_the_coequalizer():
    base = FinSet(4, sizes=[0, 1, 2] + list(range(4, 17)))
    rep = check_regular(powerset_doctrine(base))
    assert not rep
    assert rep.counterexample["clause"] == "coequalizer"
    assert len(set(rep.counterexample["arrow"].data)) == 3


def test_exactness_sides_agree_on_the_completion(q_pow2):
    rep = check_exact_characterization(q_pow2)
    assert rep
    assert rep.details["monos_are_comprehensions"] and rep.details["exact"]


def test_exactness_sides_agree_when_monos_escape(setoids):
    Q = quotient_completion(setoids)
    rep = check_exact_characterization(Q)
    assert rep
    assert not rep.details["monos_are_comprehensions"] and not rep.details["exact"]
