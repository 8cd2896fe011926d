import pytest
from hypothesis import given, settings, strategies as st

from qdoctrine.order import (
    FiniteSemilattice,
    MonotoneMap,
    PowersetLattice,
    adjunction_holds,
    chain,
    check_semilattice,
    diamond,
    is_order_isomorphism,
    left_adjoint,
    mask_of,
    members,
    preserves_meets,
    right_adjoint,
    table_map,
)
from qdoctrine.report import FiberTooLarge, MalformedInput, NoAdjoint


def test_closure_is_computed_from_cover_pairs():
    c = chain(4)
    assert c.leq("0", "3") and not c.leq("3", "0")
    assert c.meet("1", "3") == "1"
    assert c.top == "3"


def test_diamond_meets():
    d = diamond()
    assert d.meet("a", "b") == "bot"
    assert d.meet("a", "top") == "a"


def test_non_transitive_order_is_reported_with_the_pair():
    rep = check_semilattice(["x", "y", "z"], [("x", "y"), ("y", "z")], close=False)
    assert not rep
    assert rep.counterexample["missing_pair"] == ("x", "z")


def test_missing_meet_rejected():
    # two maximal elements below a top, but two incomparable lower bounds
    els = ["a", "b", "c", "d", "top"]
    pairs = [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b"), ("a", "top"), ("b", "top")]
    with pytest.raises(MalformedInput):
        FiniteSemilattice.from_pairs(els, pairs)


def test_powerset_masks_round_trip():
    assert members(mask_of([0, 2])) == [0, 2]
    lat = PowersetLattice(3)
    assert lat.size == 8 and lat.meet(0b110, 0b011) == 0b010


def test_powerset_refuses_huge_enumeration():
    with pytest.raises(FiberTooLarge):
        list(PowersetLattice(11).elements())


def _preimage_const(n):
    """Preimage along the constant map n -> 1."""
    return MonotoneMap(PowersetLattice(1), PowersetLattice(n), lambda x: (1 << n) - 1 if x else 0)


def test_identity_adjoints_are_identity():
    c = chain(3)
    m = MonotoneMap(c, c, lambda x: x)
    assert left_adjoint(m).graph() == {x: x for x in c.elements()}
    assert right_adjoint(m).graph() == {x: x for x in c.elements()}


def test_preimage_along_constant():
    # left adjoint is the image, right adjoint the "all points" quantifier
    m = _preimage_const(2)
    assert left_adjoint(m).graph() == {0: 0, 1: 1, 2: 1, 3: 1}
    assert right_adjoint(m).graph() == {0: 0, 1: 0, 2: 0, 3: 1}
    assert m(0) == 0 and m(1) == 3


def test_no_left_adjoint_when_meets_are_not_preserved():
    # diamond -> chain2 sending a, b to top and bot to bot does not preserve a ^ b
    d, c = diamond(), chain(2)
    m = table_map(d, c, {"bot": "0", "a": "1", "b": "1", "top": "1"})
    assert not preserves_meets(m)
    with pytest.raises(NoAdjoint):
        left_adjoint(m)


def test_no_right_adjoint_when_joins_are_not_preserved():
    # a and b both go to the middle, their join to the top
    d, c = diamond(), chain(3)
    m = table_map(d, c, {"bot": "0", "a": "1", "b": "1", "top": "2"})
    with pytest.raises(NoAdjoint):
        right_adjoint(m)


def test_order_isomorphism_detects_reversal():
    c = chain(2)
    swap = table_map(c, c, {"0": "1", "1": "0"})
    assert not is_order_isomorphism(swap)
    assert is_order_isomorphism(table_map(c, c, {"0": "0", "1": "1"}))


monotone_on_chain = st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 4), min_size=n, max_size=n).map(sorted)))


@settings(max_examples=60, deadline=None)
@given(monotone_on_chain)
def test_adjoints_satisfy_the_galois_condition(data):
    n, values = data
    src, tgt = chain(n), chain(5)
    m = table_map(src, tgt, {str(i): str(v) for i, v in enumerate(values)})
    try:
        L = left_adjoint(m)
    except NoAdjoint:
        L = None
    if L is not None:
        assert adjunction_holds(L, m)
        for p in tgt.elements():
            assert tgt.leq(p, m(L(p)))
        for q in src.elements():
            assert src.leq(L(m(q)), q)
    # on chains a left adjoint exists iff the top is hit
    assert (L is not None) == (values[-1] == 4) or L is None


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_right_adjoint_of_preimage_is_universal_image(n, data):
    # along any map f: n -> 2, preimage has both adjoints
    f = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    pre = MonotoneMap(PowersetLattice(2), PowersetLattice(n),
                      lambda x: mask_of(i for i in range(n) if x >> f[i] & 1))
    L, R = left_adjoint(pre), right_adjoint(pre)
    for s in range(1 << n):
        pts = members(s)
        assert L(s) == mask_of({f[i] for i in pts})
        assert R(s) == mask_of(y for y in range(2) if all(i in pts for i in range(n) if f[i] == y))
