import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bindmod.errors import ParseError, ValidationError
from bindmod.model import (GENERIC, Binomial, MatrixA, PartialCharacter, cone_is_pointed,
                           is_standard_homogeneous_prime, parse_problem, prime_of)

from conftest import fixture_path

NAMES = ["counterexample1", "counterexample2", "big_example_1", "big_example_2", "gevrey_example", "cusp_prime"]


def doc(name):
    return json.loads(fixture_path(name).read_text())


def mono(*e):
    return {"plus": {"coeff": "1", "exp": list(e)}}


def binom(a, b, c="1"):
    return {"plus": {"coeff": "1", "exp": list(a)}, "minus": {"coeff": c, "exp": list(b)}}


def reason_of(d, **kw):
    with pytest.raises(ValidationError) as info:
        parse_problem(d, **kw)
    return info.value.reason


@pytest.mark.parametrize("name", NAMES)
def test_fixtures_parse_and_round_trip(name, problems):
    p = problems(name)
    assert any(w.startswith("DecompositionTrusted") for w in p.warnings)
    again = parse_problem(p.dumps())
    assert again == p
    assert again.dumps() == p.dumps()


def test_counterexample2_shape(problems):
    p = problems("counterexample2")
    assert p.A.d == 1 and p.A.n == 4
    (c,) = p.components
    prime = prime_of(c)
    assert [b.to_json() for b in prime.generators(4)] == [
        binom((1, 0, 0, 0), (0, 1, 0, 0)), mono(0, 0, 1, 0), mono(0, 0, 0, 1)]
    assert is_standard_homogeneous_prime(c)


def test_homogeneous_prime_examples(problems):
    p = problems("counterexample1")
    flags = {c.label: is_standard_homogeneous_prime(c) for c in p.components}
    assert flags == {"I_1": True, "I_2": False, "I_3": True}


def test_prime_of_big_example_2(problems):
    c = problems("big_example_2").components[3]
    gens = [str(b) for b in prime_of(c).generators(6)]
    assert gens == ["d5^2 - d6", "d1", "d2", "d3", "d4"]


def test_cone_not_pointed():
    d = doc("counterexample2")
    d["A"] = [[1, -1, 2, 3]]
    assert reason_of(d) == "ConeNotPointed"
    assert not cone_is_pointed([(1, 0), (-1, 0), (0, 1)])
    assert cone_is_pointed([(1, 0), (1, 1), (0, 1)])


def test_not_a_graded():
    d = doc("counterexample2")
    d["ideal"].append(binom((0, 0, 1, 0), (1, 0, 0, 0)))
    assert reason_of(d) == "NotAGraded"


def test_lattice_not_in_kernel():
    d = doc("counterexample2")
    d["components"][0]["lattice"] = [[2, -1, 0, 0]]
    assert reason_of(d) == "LatticeNotInKernel"
    d["components"][0]["lattice"] = [[1, 0, -1, 0]]
    assert reason_of(d) == "LatticeNotInKernel"


def test_lattice_not_saturated():
    d = doc("counterexample2")
    d["components"][0]["lattice"] = [[2, -2, 0, 0]]
    assert reason_of(d) == "LatticeNotSaturated"


def test_b_not_in_mj():
    d = doc("counterexample2")
    d["components"][0]["B"].append(binom((1, 0, 0, 0), (0, 1, 0, 0)))
    assert reason_of(d) == "BNotInMJ"


def test_component_must_contain_ideal():
    d = doc("counterexample2")
    d["components"][0]["B"] = d["components"][0]["B"][1:]
    assert reason_of(d) == "ComponentDoesNotContainIdeal"


def test_b_without_power_of_mj():
    d = doc("counterexample2")
    d["ideal"] = d["ideal"][:1]
    d["components"][0]["B"] = [binom((0, 0, 3, 0), (0, 0, 0, 2))]
    assert reason_of(d) == "NotArtinian"


def test_columns_do_not_span():
    d = doc("counterexample2")
    d["A"] = [[2, 2, 4, 6]]
    assert reason_of(d, strict_span=True) == "ColumnsDoNotSpan"
    p = parse_problem(d)
    assert any(w.startswith("ColumnsDoNotSpan") for w in p.warnings)


def test_zero_column():
    d = doc("counterexample2")
    d["A"] = [[1, 1, 0, 3]]
    assert reason_of(d) == "ZeroColumn"


def test_character_rules():
    d = doc("counterexample2")
    d["components"][0]["character"] = ["sqrt2"]
    assert reason_of(d) == "CharacterNotRational"
    d["components"][0]["character"] = ["0"]
    assert reason_of(d) == "CharacterNotInvertible"


@pytest.mark.parametrize("mutate", [
    lambda d: "not json",
    lambda d: {k: v for k, v in d.items() if k != "A"},
    lambda d: dict(d, A=[[1, 2], [3]]),
    lambda d: dict(d, beta=["1", "2"]),
    lambda d: dict(d, beta=3),
    lambda d: dict(d, components=[]),
    lambda d: dict(d, components=[{"J": [9]}]),
])
def test_parse_errors(mutate):
    d = mutate(doc("counterexample2"))
    with pytest.raises(ParseError):
        parse_problem(d if isinstance(d, dict) else d)


def test_binomial_rules():
    with pytest.raises(ValidationError):
        Binomial((1, 0), Fraction(1), (1, 0), Fraction(-1))
    with pytest.raises(ValidationError):
        Binomial((1, 0), Fraction(0))
    b = Binomial.of((2, 0), (0, 1), 3)
    assert b.to_poly() == {(2, 0): 1, (0, 1): -3}
    assert b.to_json()["minus"]["coeff"] == "3"


def test_character_evaluation():
    ch = PartialCharacter.from_basis([(2, -2)], [Fraction(4)], 2)
    assert ch((-4, 4)) == Fraction(1, 16)
    with pytest.raises(ValueError):
        ch((1, -1))
    ch = PartialCharacter.from_basis([(1, -1)], [Fraction(3)], 2)
    assert ch((-2, 2)) == Fraction(1, 9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=2, max_size=2))
def test_beta_round_trip(beta):
    d = doc("counterexample1")
    d["beta"] = [str(b) for b in beta]
    p = parse_problem(d)
    assert p.beta == tuple(beta)
    assert parse_problem(p.dumps()) == p


def test_generic_beta(problems):
    assert problems("big_example_1").beta == GENERIC
    assert problems("counterexample1").with_beta(GENERIC).generic
