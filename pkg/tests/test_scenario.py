import re

import pytest

from localix.anchors import anchor

from localix.errors import ScenarioError, ValidationError
from localix.monad import check_derivation, check_em_module, check_monad_laws
from localix.scenario import (
    BUILTINS,
    builtin_fixtures,
    load_scenario,
    mutation_fixtures,
    parse_scenario,
    scenario_from_text,
)

DUAL = """\
modulus: 2
algebra:
  labels: [1, x]
  unit: [1, 0]
  products:
    - [[1, 0], [0, 1]]
    - [[0, 1], [0, 0]]
derivation:
  - [0, 1]
  - [0, 0]
modules:
  - regular: A
"""


def test_builtins_are_valid():
    fixtures = builtin_fixtures()
    assert len(fixtures) >= 4
    assert [s.name for s in fixtures] == list(BUILTINS)
    for s in fixtures:
        assert s.valid
        assert check_monad_laws(s.algebra).passed
        assert check_derivation(s.algebra, s.derivation).passed
        assert all(check_em_module(M).passed for M in s.modules.values())


def test_builtin_corpora_have_quotients_and_a_non_cyclic_module():
    for s in builtin_fixtures():
        kinds = set(s.kinds.values())
        assert {"regular", "quotient"} <= kinds
        assert any(M.carrier.rank >= 2 and M.carrier.factors[0] > 1 for M in s.modules.values())


def test_upper_triangular_inner_derivation():
    s = parse_scenario("builtin:upper-triangular")
    assert not s.derivation.is_zero()
    assert check_derivation(s.algebra, s.derivation).passed


def test_inline_scenario():
    s = scenario_from_text(DUAL)
    assert s.valid and list(s.modules) == ["A"]


def test_mutations_fail_with_witnesses():
    found = {s.name: s.failures() for s in mutation_fixtures()}
    (_, assoc), = found["broken-associativity"]
    assert assoc.check == "monad-laws" and assoc.witness["law"] == "associativity"
    assert assoc.witness["indices"] == (1, 2, 2)
    (_, unit), = found["broken-unit"]
    assert unit.witness["law"] == "unit: theta . U eta = 1"
    (_, leib), = found["broken-leibniz"]
    assert leib.check == "derivation" and leib.witness["indices"] == (0, 0)
    assert (assoc.anchor, unit.anchor, leib.anchor) == (anchor("monad-laws"), anchor("monad-laws"), anchor("derivation"))


def test_parse_raises_validation_error():
    with pytest.raises(ValidationError, match=re.escape(anchor("monad-laws"))):
        parse_scenario("builtin:broken-associativity")


def test_empty_file(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    with pytest.raises(ScenarioError) as err:
        load_scenario(str(path))
    assert (err.value.line, err.value.column) == (1, 1)


def test_yaml_syntax_error_has_position():
    with pytest.raises(ScenarioError) as err:
        scenario_from_text("modulus: 2\nalgebra: [1, 2\n")
    assert err.value.line is not None and err.value.column is not None


def test_unknown_module_points_at_the_reference():
    text = DUAL + "  - name: B\n    sum: [A, C]\n"
    with pytest.raises(ScenarioError, match="unknown module 'C'") as err:
        scenario_from_text(text)
    assert err.value.line == 14


@pytest.mark.parametrize("patch,message", [
    (("modulus: 2", "modulus: 1"), "modulus"),
    (("unit: [1, 0]", "unit: [1, 0, 0]"), "expected 3 rows"),
    (("  - [0, 1]\n  - [0, 0]\n", "  - [0, 1]\n"), "derivation"),
    (("  - regular: A\n", "  - {}\n"), "module entry"),
])
def test_shape_errors(patch, message):
    with pytest.raises(ScenarioError, match=message):
        scenario_from_text(DUAL.replace(*patch))


def test_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/scenario.yaml")


def test_unknown_builtin():
    with pytest.raises(ScenarioError):
        load_scenario("builtin:nope")


def test_explicit_filter_and_bounds():
    text = DUAL + "filter:\n  - [[1, 0]]\nbounds:\n  elements: 100\n  ideals: 5\n"
    s = scenario_from_text(text)
    assert len(s.filter) == 1 and s.filter.ideals[0].is_whole()
    assert s.bounds == {"elements": 100, "lattice": 5}


def test_invalid_explicit_filter_is_a_validation_failure():
    s = scenario_from_text(DUAL + "filter:\n  - [[1, 0]]\n  - [[0, 1]]\n")
    assert not s.valid
    (_, rep), = s.failures()
    assert rep.check == "gabriel-filter"
