import json

import pytest

from qiso_workbench.cyclotomic import Matrix, sqrt2, zeta
from qiso_workbench.dsl import (
    ParseError,
    load_model,
    load_presentation,
    model_from_json,
    model_to_json,
    parse_polynomial,
    parse_presentation,
    parse_relation,
    presentation,
)
from qiso_workbench.models import preset
from qiso_workbench.relations import (
    StarPolynomial,
    check,
    coproduct_check,
    evaluate,
)

I4 = zeta(4)
PAULI = {
    "A": Matrix.from_rows([[0, 1], [1, 0]]).scale(sqrt2() / 2),
    "B": Matrix.from_rows([[0, -I4], [I4, 0]]).scale(sqrt2() / 2),
}


def test_parse_quadratic():
    p = parse_polynomial("A^2 + B^2 - 1")
    assert len(p.terms) == 3
    assert p.terms[()] == -1
    assert p.terms[(("A", False), ("A", False))] == 1


def test_products_in_different_orders_stay_separate():
    assert len(parse_polynomial("A B + B A").terms) == 2
    assert parse_polynomial("A B - B A") != 0


def test_cyclotomic_coefficient():
    p = parse_polynomial("1/2 z(8,1) A* A - A")
    assert p.terms[(("A", True), ("A", False))] == zeta(8) / 2
    assert str(p) == "-A + (1/2 z(8,1)) A* A"


def test_adjoint_spellings_agree():
    assert parse_polynomial("A^*") == parse_polynomial("A*")
    assert parse_polynomial("(A B)*") == parse_polynomial("B* A*")
    assert parse_polynomial("A*^2") == parse_polynomial("A* A*")
    assert parse_polynomial("A * B") == parse_polynomial("A B")


def test_unknown_generator_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_polynomial("A + Q", generators=["A"])
    assert (exc.value.line, exc.value.col) == (1, 5)


@pytest.mark.parametrize("text", ["A +", "A ^", "(A", "1/0", "A $ B", "z(0,1)"])
def test_malformed_input(text):
    with pytest.raises(ParseError):
        parse_polynomial(text, generators=["A", "B"])


def test_relation_chain_splits_into_pairs():
    rels = parse_relation("L* L = L L* = 1")
    assert [r.text for r in rels] == ["L* L = L L*", "L L* = 1"]


def test_partial_isometry_relation_on_permutation():
    p = parse_polynomial("A A* A - A")
    assert evaluate(p, {"A": Matrix.permutation([2, 0, 1])}).is_zero()


def test_pauli_commutator_is_i_sigma3():
    value = evaluate(parse_polynomial("A B - B A"), PAULI)
    assert value == Matrix.diag([I4, -I4])


def test_unit_evaluates_to_identity():
    assert evaluate(parse_polynomial("1"), PAULI) == Matrix.identity(2)


def test_failing_relation_reports_residual():
    pres = presentation(["A"], ["A - 1"])
    rep = check(pres, {"A": Matrix.zeros(2)})
    assert not rep.ok
    assert rep.failures[0].text == "A - 1"
    assert rep.failures[0].residual_norm == 2


def test_z3_and_pauli_presentations_pass():
    for name in ("zn:3", "z4_pauli"):
        p = preset(name)
        assert check(p.presentation, p.model).ok


@pytest.mark.parametrize("n", [3, 5, 6])
def test_cyclic_coproduct(n):
    p = preset("zn", n)
    assert coproduct_check(p.presentation, p.model).ok


def test_coproduct_detects_non_corepresentation():
    pres = presentation(["A", "B"], ["A A* + B B* = 1"], [["A", "B"], ["B*", "A*"]])
    half = sqrt2() / 2
    model = {"A": Matrix.scalar(half), "B": Matrix.scalar(half)}
    rep = coproduct_check(pres, model)
    assert not rep.ok


PRES_TEXT = """\
# cyclic group of order three
generators: A, B
corep:
  A, B
  B*, A*
relations:
  A A* = A* A
  A A* + B B* = 1
  A^2 = A*
"""


def test_presentation_file_round_trip(tmp_path):
    pres = parse_presentation(PRES_TEXT)
    assert pres.generators == ("A", "B")
    assert len(pres.relations) == 3
    assert pres.corep_grid[1][0] == StarPolynomial.atom("B", True)
    path = tmp_path / "z3.pres"
    path.write_text(PRES_TEXT)
    assert len(load_presentation(path).relations) == 3


def test_presentation_file_errors_carry_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_presentation("generators: A\nrelations:\n  A + Q\n", source="x.pres")
    assert exc.value.line == 3
    assert str(exc.value).startswith("x.pres:3:")
    with pytest.raises(ParseError):
        parse_presentation("relations:\n A\n")


def test_model_json_round_trip(tmp_path):
    model = preset("z4_pauli").model
    data = model_to_json(model)
    again = model_from_json(json.dumps(data))
    assert again.assign == model.assign
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data))
    assert load_model(path).dim == 2


def test_model_json_rejects_wrong_field():
    with pytest.raises(ParseError):
        model_from_json({"root_order": 4, "dim": 1, "assign": {"A": [["z(8,1)"]]}})
    with pytest.raises(ParseError):
        model_from_json({"dim": 2, "assign": {"A": [["1"]]}})
