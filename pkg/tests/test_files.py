from __future__ import annotations

import pytest

from f0lab import catalog
from f0lab.errors import InputError, ModelFileError
from f0lab.files import dump_golden, dump_model, load_model, parse_golden, parse_model, shipped_model
from f0lab.model import DegreeTuple, is_finite_dimensional

GOOD = """\
even_generators:
  - {name: x, degree: 4}
  - {name: y, degree: 6}
odd_generators:
  - {name: a, degree: 9, differential: "x*y"}
  - {name: b, degree: 11, differential: "x^3 + y^2"}
"""


def test_parse_good():
    m = parse_model(GOOD)
    assert m.degree_tuple() == DegreeTuple.from_degrees((4, 6, 9, 11))
    assert m.gens.names == ("x", "y") and m.odd_names == ("a", "b")
    assert m.describe() == ["da = x*y", "db = x^3 + y^2"]


@pytest.mark.parametrize("name", ["cp8", "hp3", "wedge", "s6xs6", "4_6_9_11", "4_4_6_7_9_11"])
def test_shipped_models_load(name):
    m = load_model(shipped_model(name))
    if m.is_balanced:
        assert is_finite_dimensional(m)


def test_shipped_repaired_model_matches_catalog():
    m = load_model(shipped_model("4_4_6_7_9_11"))
    assert [str(p) for p in m.differentials] == [str(p) for p in catalog.model_4_4_6_7_9_11().differentials]


@pytest.mark.parametrize("text, line, field", [
    (GOOD.replace('"x*y"', '"x*y + x"'), 5, "odd_generators[0].differential"),
    (GOOD.replace('"x^3 + y^2"', '"x^3 + z^2"'), 6, "odd_generators[1].differential"),
    (GOOD.replace('"x*y"', '"x*(y"'), 5, "odd_generators[0].differential"),
    (GOOD.replace("degree: 6}", "degree: six}"), 3, "even_generators[1].degree"),
    (GOOD.replace("  - {name: x, degree: 4}\n", "  - {name: x}\n"), 2, "even_generators[0].degree"),
    (GOOD + "extra: 1\n", 7, "extra"),
    (GOOD.replace("odd_generators:", "odd_generators: 3\nfoo:"), None, None),
])
def test_parse_errors_carry_location(text, line, field):
    with pytest.raises(ModelFileError) as exc:
        parse_model(text)
    if line is not None:
        assert exc.value.line == line
        assert exc.value.field == field
        assert f"line {line}" in str(exc.value)


def test_bad_yaml_and_missing_file(tmp_path):
    with pytest.raises(ModelFileError) as exc:
        parse_model("even_generators: [\n  {name: x\n")
    assert exc.value.line is not None
    with pytest.raises(ModelFileError):
        parse_model("")
    with pytest.raises(ModelFileError):
        load_model(tmp_path / "nope.yaml")
    assert issubclass(ModelFileError, InputError)


def test_model_roundtrip():
    for m in [catalog.model_4_6_9_11(), catalog.model_2_6_7_11(), catalog.s6xs6_family(1),
              catalog.model_4_4_6_7_9_11(), catalog.complex_projective(4)]:
        back = parse_model(dump_model(m))
        assert back == m


def test_golden_roundtrip():
    rows = [(DegreeTuple.from_degrees((2, 5)), 3), (DegreeTuple.from_degrees((4, 7)), 2),
            (DegreeTuple.from_degrees((2, 2, 3, 3)), 4)]
    table = parse_golden(dump_golden(4, rows))
    assert table.dimension == 4 and list(table.rows) == rows
