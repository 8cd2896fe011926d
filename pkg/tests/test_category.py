import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qdoctrine.category import (
    FiniteCategory,
    FinSet,
    SetoidCategory,
    check_category,
    find_weak_evaluation,
    fn,
    is_mono,
    weak_pullback,
)
from qdoctrine.report import MalformedInput, NotFound, NoWeakEvaluation


def point_category():
    return FiniteCategory(["*"], {}, {"*": "id"}, {}, terminal="*",
                          products={("*", "*"): ("*", "id", "id")}, name="point")


def test_one_object_category_passes():
    assert check_category(point_category())


def test_finset_window_three_passes_all_laws():
    rep = check_category(FinSet(3))
    assert rep and rep.checked > 1000


@pytest.mark.parametrize("a,b", [(0, 0), (0, 3), (2, 0), (1, 3), (3, 2), (2, 3)])
def test_hom_counts_are_powers(a, b):
    assert len(FinSet(3).hom(a, b)) == b ** a


def test_composition_table_with_wrong_codomain_fails():
    arrows = {"f": ("A", "B"), "g": ("B", "A")}
    table = {("g", "f"): "f"}  # g o f should be an endo of A
    c = FiniteCategory(["A", "B"], arrows, {"A": "idA", "B": "idB"}, table, name="bad")
    rep = check_category(c)
    assert not rep


def test_dangling_arrow_is_malformed():
    with pytest.raises(MalformedInput):
        FiniteCategory(["A"], {"f": ("A", "Z")}, {"A": "idA"}, {})


def test_mono_examples():
    c = FinSet(2)
    assert is_mono(c, c.identity(2))
    assert is_mono(c, fn(1, 2, 0))
    assert not is_mono(c, fn(2, 1, 0, 0))


def test_pairing_laws_in_finset():
    c = FinSet(3)
    for x in (0, 1, 2):
        for f in c.hom(x, 2):
            for g in c.hom(x, 3):
                p, pr1, pr2 = c.product(2, 3)
                h = c.pair(f, g)
                assert c.compose(pr1, h) == f and c.compose(pr2, h) == g
    p, pr1, pr2 = c.product(2, 2)
    assert c.pair(pr1, pr2) == c.identity(p)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_times_after_pair_is_pair_of_composites(data):
    c = FinSet(3)
    x = data.draw(st.integers(0, 3))
    a, b, a2, b2 = (data.draw(st.integers(1, 3)) for _ in range(4))
    pick = lambda s, t: data.draw(st.sampled_from(list(c.hom(s, t))))
    h, k = pick(x, a), pick(x, b)
    f, g = pick(a, a2), pick(b, b2)
    assert c.compose(c.times(f, g), c.pair(h, k)) == c.pair(c.compose(f, h), c.compose(g, k))


def test_pullback_of_identities():
    c = FinSet(2)
    v, p, q = weak_pullback(c, c.identity(2), c.identity(2), require_strict=True)
    assert v == 2 and p == q == c.identity(2)


def test_finset_pullback_is_the_fibre_product():
    c = FinSet(4)
    f, g = fn(3, 2, 0, 1, 1), fn(2, 2, 1, 1)
    v, p, q = weak_pullback(c, f, g, require_strict=True)
    pairs = {(a, b) for a in range(3) for b in range(2) if f.data[a] == g.data[b]}
    assert v == len(pairs)
    assert {(p.data[i], q.data[i]) for i in range(v)} == pairs


def weak_only_category():
    """A square V over a cospan, and a competitor T reaching V in two ways."""
    objs = ["A", "B", "C", "V", "T"]
    arrows = {"f": ("A", "C"), "g": ("B", "C"), "p": ("V", "A"), "q": ("V", "B"), "h": ("V", "C"),
              "t1": ("T", "A"), "t2": ("T", "B"), "k": ("T", "C"), "u": ("T", "V"), "u2": ("T", "V")}
    table = {("f", "p"): "h", ("g", "q"): "h", ("f", "t1"): "k", ("g", "t2"): "k",
             ("p", "u"): "t1", ("p", "u2"): "t1", ("q", "u"): "t2", ("q", "u2"): "t2",
             ("h", "u"): "k", ("h", "u2"): "k"}
    ids = {o: f"id{o}" for o in objs}
    return FiniteCategory(objs, arrows, ids, table, name="weak-square")


def test_strict_pullback_missing_where_only_weak_exists():
    c = weak_only_category()
    assert check_category(c)
    f, g = c.arrow("f"), c.arrow("g")
    v, p, q = weak_pullback(c, f, g)
    assert v == "V"
    with pytest.raises(NotFound) as err:
        weak_pullback(c, f, g, require_strict=True)
    assert len(err.value.witness["mediators"]) == 2


def test_weak_evaluation_into_terminal():
    c = FinSet(2)
    w_obj, w = find_weak_evaluation(c, 2, 1)
    assert w_obj in (0, 1)
    assert w.target == 1


def test_weak_evaluation_is_the_function_set():
    c = FinSet(4)
    w_obj, w = find_weak_evaluation(c, 2, 2)
    assert w_obj == 4
    rows = {w.data[2 * e:2 * e + 2] for e in range(4)}
    assert rows == set(itertools.product(range(2), repeat=2))


def test_weak_evaluation_needs_room():
    with pytest.raises(NoWeakEvaluation):
        find_weak_evaluation(FinSet(2), 2, 2, candidates=[0, 1, 2, 3])


def test_setoid_forgetful_and_respecting_maps():
    s = SetoidCategory(2)
    assert check_category(s)
    total, discrete = (2, (0, 0)), (2, (0, 1))
    assert len(s.hom(total, discrete)) == 2  # constants only
    assert len(s.hom(discrete, total)) == 4
    U = s.forgetful()
    assert U(total) == 2
