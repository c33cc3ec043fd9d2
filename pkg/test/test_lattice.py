# -*- coding: utf-8 -*-

import pytest

from core.exceptions import ConfigError
from apps.analysis.lattice import FiniteLattice, parse_lattice, validate_lattice


def read(config_dir, name: str) -> FiniteLattice:
    path = config_dir.joinpath(name)
    return parse_lattice(path.read_text(encoding="utf-8"), source=str(path))


@pytest.mark.parametrize("name", ["resources.lattice", "access.lattice", "military.lattice", "grades.lattice"])
def test_bundled_lattices_are_valid(config_dir, name):
    report = validate_lattice(read(config_dir, name))
    assert report.ok, report.violation


def test_order_is_transitive_closure(config_dir):
    lattice = read(config_dir, "military.lattice")
    assert lattice.leq("unclassified", "top_secret")
    assert lattice.lt("confidential", "secret")
    assert not lattice.leq("secret", "confidential")


def test_join_and_meet(config_dir):
    lattice = read(config_dir, "resources.lattice")
    assert lattice.join("cpu", "enrg") == "expensive"
    assert lattice.meet("cpu", "enrg") == "cheap"
    assert lattice.combine("cheap", "cpu") == "cpu"
    assert lattice.meet_all([]) == "expensive"
    assert lattice.meet_all(["cpu", "expensive"]) == "cpu"


def test_missing_lub_is_reported():
    lattice = FiniteLattice.from_relations(["b", "x", "y"], [("b", "x"), ("b", "y")], bottom="b")
    assert validate_lattice(lattice).violation == "lub missing: x, y"
    with pytest.raises(ConfigError):
        lattice.join("x", "y")


def test_incomparable_upper_bounds_have_no_lub():
    elements = ["b", "x", "y", "u", "v"]
    order = [("b", "x"), ("b", "y"), ("x", "u"), ("y", "u"), ("x", "v"), ("y", "v")]
    report = validate_lattice(FiniteLattice.from_relations(elements, order, bottom="b"))
    assert report.violation == "lub missing: x, y"


def test_wrong_bottom_is_reported():
    lattice = FiniteLattice.from_relations(["lo", "hi"], [("lo", "hi")], bottom="hi")
    assert validate_lattice(lattice).violation == "bottom not least: hi"


def test_plus_entry_differing_from_lub():
    lattice = FiniteLattice.from_relations(
        ["lo", "mid", "hi"], [("lo", "mid"), ("mid", "hi")], bottom="lo", plus={("mid", "mid"): "hi"}
    )
    assert validate_lattice(lattice).violation == "⊕ differs from lub: mid, mid"


def test_bottom_not_identity():
    lattice = FiniteLattice.from_relations(
        ["lo", "hi"], [("lo", "hi")], bottom="lo", plus={("lo", "lo"): "hi"}
    )
    assert validate_lattice(lattice).violation == "⊥ not identity: lo"


def test_parse_errors_carry_line():
    with pytest.raises(ConfigError) as info:
        parse_lattice("elements: a, b\nbottom: a\nleq: a < c\n", source="bad.lattice")
    assert info.value.exit_code == 4
    assert info.value.details == {"source": "bad.lattice", "line": 3}


def test_parse_requires_bottom():
    with pytest.raises(ConfigError):
        parse_lattice("elements: a\n")


def test_parse_unknown_directive():
    with pytest.raises(ConfigError):
        parse_lattice("elements: a\nbottom: a\nmeet: a\n")


def test_parse_plus_entries():
    lattice = parse_lattice("elements: lo, hi\nbottom: lo\ntop: hi\nleq: lo < hi\nplus: hi + lo = hi\n")
    assert lattice.combine("lo", "hi") == "hi"
    assert validate_lattice(lattice).ok
