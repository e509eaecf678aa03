import json
import random
from fractions import Fraction

import pytest

from hermharm.exterior import BigradedForm, Monomial, phi, wedge
from hermharm.graded import GradedOperator, scalar_operator
from hermharm.model import (
    EXAMPLES,
    ConventionError,
    SpecError,
    build_lefschetz,
    build_structure,
    derivation,
    load_spec,
    parse_spec,
    rescale_spec,
    spec_to_text,
)
from hermharm.sampling import random_spec, random_specs
from hermharm.scalar import I, Scalar


def test_examples_load():
    for name in EXAMPLES:
        spec = load_spec(name)
        assert spec.name == name


def test_both_kodaira_thurston_inputs_agree():
    a = load_spec("kodaira_thurston")
    b = load_spec("kodaira_thurston_real")
    assert a.d_phi == b.d_phi
    assert a.d_phi[1] == BigradedForm(2, {Monomial((1,), (1,)): I / 2})


def test_iwasawa_differential():
    spec = load_spec("iwasawa")
    assert spec.d_phi[2] == wedge(phi(3, 1), phi(3, 2)).scale(-1)
    assert not spec.d_phi[0] and not spec.d_phi[1]


def test_coefficient_syntax():
    spec = parse_spec("n = 2\nd phi2 = (1/2 - 3i) * phi1^phibar1 + 2i * phi1^phibar1 - i*phi1^phibar1")
    assert spec.d_phi[1] == BigradedForm(2, {Monomial((1,), (1,)): Scalar(Fraction(1, 2), -2)})


def test_json_input():
    doc = json.dumps({"name": "iw", "n": 3, "d": {"phi3": "-1 * phi1^phi2"}})
    spec = parse_spec(doc)
    assert spec.name == "iw"
    assert spec.d_phi == load_spec("iwasawa").d_phi


def test_text_round_trip():
    for name in EXAMPLES:
        spec = load_spec(name)
        again = parse_spec(spec_to_text(spec))
        assert again.d_phi == spec.d_phi


@pytest.mark.parametrize(
    "doc, line, col, fragment",
    [
        ("n = 2\nd phi2 = 0.5 * phi1^phibar1", 2, 11, "non-rational"),
        ("n = 2\nd phi2 = sqrt(2) * phi1^phibar1", 2, 10, "non-rational"),
        ("n = 2\nd phi2 = 1 * phi1", 2, 14, "degree 1"),
        ("n = 2\nd phi2 = phibar1^phibar1", 2, 10, "repeated"),
        ("n = 2\nd phi3 = phi1^phi2", 2, None, "out of range"),
        ("n = 2\nd phi2 = phi1^phibar1\nd phi2 = phi1^phi2", 3, None, "twice"),
        ("n = 3\nd phi2 = phibar1^phibar3", 2, None, "integrability"),
        ("n = 2\n\nd phi2 = 1 * phibar1^phi1\nd phi1 = 1*phi2^phibar2", 4, None, "d^2"),
        ("n = 2\nd e3 = e1^e2\nd phi2 = phi1^phibar1", 2, None, "mix"),
        ("hello", 1, 1, "expected"),
        ("n = two", 1, 5, "integer"),
    ],
)
def test_errors_carry_positions(doc, line, col, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(doc)
    assert info.value.line == line
    assert info.value.col == col
    assert fragment in str(info.value)


def test_missing_header():
    with pytest.raises(SpecError, match="missing"):
        parse_spec("d phi1 = phi1^phi2")


def test_bad_json():
    with pytest.raises(SpecError) as info:
        parse_spec('{"n": 3, "d": {"phi3": "-1 * phi1^"}}')
    assert "phi3" in str(info.value) and info.value.col == 11
    with pytest.raises(SpecError) as info:
        parse_spec('{"n": 3,')
    assert info.value.line == 1


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_spec("/nonexistent/structure.struct")


# operators ------------------------------------------------------------------

@pytest.mark.parametrize("name", EXAMPLES)
def test_d_squared_and_splitting(name):
    h = build_structure(load_spec(name))
    d, de, db = h["d"], h["del"], h["delbar"]
    assert (d @ d).is_zero()
    assert d == de + db
    assert (de @ de).is_zero() and (db @ db).is_zero()


@pytest.mark.parametrize("name", EXAMPLES)
def test_weight_operator(name):
    h = build_structure(load_spec(name))
    n = h.n
    assert h["H"] == scalar_operator(n, lambda d: d[0] + d[1] - n)


@pytest.mark.parametrize("name", EXAMPLES)
def test_lambda_two_constructions(name):
    h = build_structure(load_spec(name))
    from hermharm.graded import graded_commutator

    lam = graded_commutator(h["del"], h["L"])
    direct = GradedOperator.wedge_with(h.del_omega) if h.del_omega else GradedOperator.zero(h.n, 1)
    assert lam.first_difference(direct) is None


def test_kahler_flags():
    assert build_structure(load_spec("torus_n2")).is_kahler()
    kt = build_structure(load_spec("kodaira_thurston"))
    assert not kt.is_kahler() and kt.is_pluriclosed()
    iw = build_structure(load_spec("iwasawa"))
    assert not iw.is_kahler() and not iw.is_pluriclosed()


def test_derivation_leibniz():
    spec = load_spec("iwasawa")
    a, b = phi(3, 3), phi(3, 1).conj()
    lhs = derivation(spec, wedge(a, b))
    rhs = wedge(derivation(spec, a), b) - wedge(a, derivation(spec, b))
    assert lhs == rhs


def test_convention_error_on_wrong_weight():
    h = build_structure(load_spec("kodaira_thurston"))
    with pytest.raises(ConventionError):
        build_lefschetz(h, weight_scale=2)


def test_omega_scale_rescales_weight():
    h = build_structure(load_spec("iwasawa"), omega_scale=3)
    assert h["H"] == scalar_operator(3, lambda d: 9 * (d[0] + d[1] - 3))


def test_rescale_spec():
    spec = load_spec("iwasawa")
    scaled = rescale_spec(spec, 2)
    assert scaled.d_phi[2] == spec.d_phi[2].scale(Scalar(Fraction(1, 2)))


def test_random_specs_are_reproducible_and_valid():
    a = random_specs(3, 5, seed=7)
    b = random_specs(3, 5, seed=7)
    assert [s.d_phi for s in a] == [s.d_phi for s in b]
    for s in a:
        assert any(s.d_phi)
        build_structure(s)


def test_random_spec_rejects_bad_draws():
    rng = random.Random(0)
    outcomes = [random_spec(3, rng, density=1.0) for _ in range(50)]
    # dense draws usually violate d^2 = 0 and are discarded
    assert any(o is None for o in outcomes)
