import json

import pytest

from qdoctrine.builders import frobenius_failing_doctrine, powerset_doctrine, two_point_doctrine
from qdoctrine.category import FinSet
from qdoctrine.cli import run
from qdoctrine.completion import quotient_completion
from qdoctrine.doctrine import check_primary
from qdoctrine.io import ParseError, ValidationError, emit, parse_doctrine, parse_text, to_document

TINY = """\
name: tiny
base:
  objects: [A]
  arrows: {}
  compose: []
  terminal: A
  products: [[A, A, A, idA, idA]]
fibers:
  A: {elements: [lo, hi], order: [[lo, hi]], top: hi}
reindex: {}
"""

NON_TRANSITIVE = TINY.replace(
    "A: {elements: [lo, hi], order: [[lo, hi]], top: hi}",
    "A: {elements: [lo, mid, hi], order: [[lo, mid], [mid, hi]], top: hi, closed: false}")


def test_builtin_powerset():
    P = parse_text("builtin: powerset bound=2")
    assert P.base.objects() == [0, 1, 2]
    assert P.fiber(2).size == 4


def test_explicit_singleton_base():
    P = parse_text(TINY)
    assert P.base.objects() == ["A"]
    assert list(P.fiber("A").elements()) == ["lo", "hi"]
    assert check_primary(P)


def test_non_transitive_order_names_the_pair():
    with pytest.raises(ValidationError) as err:
        parse_text(NON_TRANSITIVE)
    assert "('lo', 'hi')" in str(err.value)
    assert "line" in str(err.value)


def test_bad_yaml_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_text("base: [unclosed")


def test_wrong_section_shape_is_located():
    with pytest.raises(ParseError) as err:
        parse_text("base:\n  objects: A\n")
    assert "line 2" in str(err.value)


def test_reindexing_must_be_total():
    doc = TINY.replace("arrows: {}", "arrows: {e: [A, A]}").replace(
        "compose: []", "compose: [[e, e, e]]")
    with pytest.raises(ValidationError):
        parse_text(doc)


@pytest.mark.parametrize("make", [
    lambda: powerset_doctrine(FinSet(2)),
    two_point_doctrine,
    frobenius_failing_doctrine,
    lambda: quotient_completion(powerset_doctrine(FinSet(2))),
])
def test_round_trip_is_a_fixed_point(make):
    D = make()
    back = parse_text(emit(D))
    assert to_document(back)["base"] == to_document(D)["base"]
    assert to_document(back)["fibers"] == to_document(D)["fibers"]
    assert to_document(back)["reindex"] == to_document(D)["reindex"]
    for a, b in zip(D.base.objects(), back.base.objects()):
        assert D.fiber(a).size == back.fiber(b).size


def test_check_command_passes_on_sets(capsys):
    assert run(["check", "builtin-powerset-2"]) == 0
    out = capsys.readouterr().out
    for name in ("primary", "elementary", "existential", "implicational", "universal",
                 "comprehensions", "equalizers", "quotients"):
        assert "PASS" in out and name in out


def test_check_command_fails_with_counterexample(capsys):
    assert run(["check", "builtin-frobenius-failing"]) == 1
    assert "Frobenius" in capsys.readouterr().out


def test_input_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(NON_TRANSITIVE)
    assert run(["check", str(bad)]) == 2
    assert run(["check", str(tmp_path / "missing.yaml")]) == 2
    assert run(["check", "builtin-nonsense-2"]) == 2
    assert "input error" in capsys.readouterr().err


def test_complete_emits_the_completion(tmp_path):
    out = tmp_path / "q.yaml"
    assert run(["complete", "builtin-powerset-2", "-o", str(out)]) == 0
    Q = parse_doctrine(out)
    small = [o for o in Q.base.objects() if o.startswith(("(0,", "(1,"))]
    assert len(small) == 2


def test_verify_universal_on_micro_pair(capsys):
    assert run(["verify-universal", "builtin-powerset-1", "builtin-two-point"]) == 0
    assert "PASS universal property" in capsys.readouterr().out


def test_verify_universal_reports_budget(capsys):
    assert run(["--budget", "2", "verify-universal", "builtin-powerset-1", "builtin-two-point"]) == 1
    assert "budget" in capsys.readouterr().out


def test_report_is_deterministic_json(capsys):
    run(["report", "builtin-powerset-1"])
    first = capsys.readouterr().out
    run(["report", "builtin-powerset-1"])
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["passed"] and {r["verdict"] for r in doc["results"]} == {"pass"}


def test_auc_command(capsys):
    assert run(["--format", "machine", "auc", "builtin-powerset-2", "2", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in doc["results"]] == ["AUC", "AUC transfer"]


def test_strict_products_rejects_partial_bases():
    assert run(["--strict-products", "check", "builtin-frobenius-failing"]) == 2
