from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermharm.exterior import BigradedForm, Monomial, phi, phibar, wedge
from hermharm.harmonic import (
    BettiVector,
    DimensionTable,
    betti_numbers,
    box_kernels,
    box_structure_check,
    box_table,
    duality_check,
    hodge_table,
    holomorphic_form_check,
    inequality_report,
    kernel_table,
    lambda_cohomology_table,
    laplacian_table,
    lefschetz_check,
    lefschetz_rank,
    pluriclosed_equivalence,
    pointwise_injectivity,
    primitive_dims,
)
from hermharm.model import EXAMPLES, build_structure, load_spec, rescale_spec
from hermharm.sampling import random_specs

import reference as ref

STRUCTS = {name: build_structure(load_spec(name)) for name in EXAMPLES}
RANDOM = [build_structure(s) for s in random_specs(2, 5, seed=21) + random_specs(3, 5, seed=22)]
ALL = list(STRUCTS.values()) + RANDOM


def ids(hs):
    return [h.name for h in hs]


# tables -----------------------------------------------------------------------

def test_box_tables():
    assert box_table(STRUCTS["kodaira_thurston"]).entries == ref.KT_BOX
    assert box_table(STRUCTS["kodaira_thurston_real"]).entries == ref.KT_BOX
    assert box_table(STRUCTS["iwasawa"]).entries == ref.IWASAWA_BOX


def test_hodge_tables():
    assert hodge_table(STRUCTS["kodaira_thurston"]).entries == ref.KT_HODGE
    assert hodge_table(STRUCTS["iwasawa"]).entries == ref.IWASAWA_HODGE


@pytest.mark.parametrize("n", [2, 3])
def test_torus_tables_are_binomial(n):
    h = STRUCTS[f"torus_n{n}"]
    expected = tuple(tuple(comb(n, p) * comb(n, q) for q in range(n + 1)) for p in range(n + 1))
    assert box_table(h).entries == expected
    assert hodge_table(h).entries == expected


def test_display_layout_matches_printed_grids():
    assert box_table(STRUCTS["kodaira_thurston"]).grid() == ref.PRINTED_KT_BOX
    assert hodge_table(STRUCTS["kodaira_thurston"]).grid() == ref.PRINTED_KT_HODGE
    assert hodge_table(STRUCTS["iwasawa"]).grid() == ref.PRINTED_IWASAWA_HODGE


def test_iwasawa_box_differs_from_printed_only_in_the_middle():
    grid = box_table(STRUCTS["iwasawa"]).grid()
    diff = [(r, c) for r in range(4) for c in range(4) if grid[r][c] != ref.PRINTED_IWASAWA_BOX[r][c]]
    assert diff == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert [grid[r][c] for r, c in diff] == [3, 3, 3, 3]


def test_iwasawa_harmonic_11_forms():
    # kernel spanned by phi1^phibar2, phi2^phibar1, phi1^phibar1 - phi2^phibar2
    h = STRUCTS["iwasawa"]
    n = 3
    b = h.box
    inside = [
        wedge(phi(n, 1), phibar(n, 2)),
        wedge(phi(n, 2), phibar(n, 1)),
        wedge(phi(n, 1), phibar(n, 1)) - wedge(phi(n, 2), phibar(n, 2)),
    ]
    for f in inside:
        assert not b.apply(f)
    assert b.apply(wedge(phi(n, 1), phibar(n, 1)) + wedge(phi(n, 2), phibar(n, 2)))
    assert b.apply(wedge(phi(n, 3), phibar(n, 3)))
    assert box_kernels(h)[(1, 1)].dim == 3


def test_kodaira_thurston_constants_are_not_harmonic():
    h = STRUCTS["kodaira_thurston"]
    # lam(1) = del omega is nonzero
    assert h["lam"].apply(BigradedForm.one(2))
    assert box_table(h)[0, 0] == 0


def test_kernel_table_rejects_shifting_operators():
    with pytest.raises(ValueError):
        kernel_table(STRUCTS["iwasawa"]["del"])


def test_kt_delbar_laplacian_on_10_and_01():
    h = STRUCTS["kodaira_thurston"]
    lap = laplacian_table(h, ("delbar",))
    assert lap[1, 0] == 1 and lap[0, 1] == 2
    from hermharm.linalg import rank

    d = h.laplacian("delbar")
    assert rank(d.block((1, 0), (1, 0))) == 1
    assert d.block((0, 1), (0, 1)).is_zero()


def test_dimension_table_layout_round_trip():
    t = DimensionTable(2, ref.KT_BOX)
    assert DimensionTable.from_grid(t.grid()) == t
    assert t.transpose().transpose() == t
    with pytest.raises(ValueError):
        DimensionTable(1, ((1, 2), (1, 1)))
    assert "q=2" in t.render("box")


# Betti numbers ----------------------------------------------------------------

def test_betti_numbers():
    assert betti_numbers(load_spec("kodaira_thurston")).b == ref.KT_BETTI
    assert betti_numbers(load_spec("iwasawa")).b == ref.IWASAWA_BETTI
    assert betti_numbers(load_spec("torus_n2")).b == (1, 4, 6, 4, 1)


@pytest.mark.parametrize("h", RANDOM, ids=ids(RANDOM))
def test_betti_poincare_duality_on_nilpotent_input(h):
    b = betti_numbers(h.spec)
    assert b.poincare_duality() and b[0] == 1
    assert BettiVector((1, 2, 1)).poincare_duality()


# theorem-level checks on every structure ---------------------------------------

@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_dualities(h):
    rep = duality_check(h)
    assert rep.verdict, [c.label for c in rep.failures()][:3]


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_lefschetz(h):
    rep, witnesses = lefschetz_check(h)
    assert rep.verdict, [c.label for c in rep.failures()][:3]
    assert all(w["rank"] == w["dim_source"] == w["dim_target"] for w in witnesses)


def test_iwasawa_lefschetz_witnesses():
    h = STRUCTS["iwasawa"]
    assert lefschetz_rank(h, (0, 1), (2, 3)) == 0
    assert lefschetz_rank(h, (2, 0), (3, 1)) == 2
    assert lefschetz_rank(h, (0, 2), (1, 3)) == 2
    with pytest.raises(ValueError):
        lefschetz_rank(h, (1, 0), (0, 1))


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_primitives(h):
    table, rep = primitive_dims(h)
    assert rep.verdict, [c.label for c in rep.failures()][:3]


def test_torus_primitives_match_reference():
    table, _ = primitive_dims(STRUCTS["torus_n2"])
    assert table.entries == ref.TORUS2_PRIMITIVE
    n = 3
    table3, _ = primitive_dims(STRUCTS["torus_n3"])
    for p in range(n + 1):
        for q in range(n + 1 - p):
            low = comb(n, p - 1) * comb(n, q - 1) if p and q else 0
            assert table3[p, q] == comb(n, p) * comb(n, q) - low


def test_kt_primitive_11():
    table, _ = primitive_dims(STRUCTS["kodaira_thurston"])
    # nothing harmonic in degree 0, so every harmonic (1,1)-form is primitive
    assert table[1, 1] == 2 and table[0, 0] == 0


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_inequalities(h):
    rep = inequality_report(h)
    assert rep.verdict, [c.label for c in rep.failures()][:3]


def test_inequality_examples():
    h = STRUCTS["iwasawa"]
    rep = inequality_report(h)
    check = next(c for c in rep.checks if c.label == "box: sum over p+q=1 <= b^1")
    assert check.detail == "0 <= 4"
    kt = inequality_report(STRUCTS["kodaira_thurston"])
    check = next(c for c in kt.checks if c.label.startswith("box: (1,1) <="))
    assert check.detail == "2 <= 2"


def test_torus_inequalities_are_equalities():
    h = STRUCTS["torus_n2"]
    b = betti_numbers(h.spec)
    t = box_table(h)
    for k in range(5):
        assert sum(t.get((p, k - p)) for p in range(k + 1)) == b[k]


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_lambda_cohomology(h):
    for which in ("lam", "lambar"):
        table, rep = lambda_cohomology_table(h, which)
        assert rep.verdict, [c.label for c in rep.failures()][:3]


def test_lambda_cohomology_values():
    t, _ = lambda_cohomology_table(STRUCTS["torus_n2"])
    assert t.entries == ((1, 2, 1), (2, 4, 2), (1, 2, 1))
    # lam(1) = del omega, so functions are not lam-harmonic off the Kaehler case
    t, _ = lambda_cohomology_table(STRUCTS["kodaira_thurston"])
    assert t[0, 0] == 0
    with pytest.raises(ValueError):
        lambda_cohomology_table(STRUCTS["torus_n2"], "tau")


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_pluriclosed(h):
    rep = pluriclosed_equivalence(h)
    assert rep.verdict
    if h.is_pluriclosed():
        assert sum(1 for c in rep.checks if "D4" in c.label) == 2 * (h.n + 1) ** 2


def test_iwasawa_is_not_pluriclosed():
    rep = pluriclosed_equivalence(STRUCTS["iwasawa"])
    flag = rep.checks[0]
    assert flag.informational and not flag.ok


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_holomorphic_forms(h):
    rep, results = holomorphic_form_check(h)
    assert rep.verdict


def test_holomorphic_examples():
    _, res = holomorphic_form_check(STRUCTS["torus_n3"])
    assert [r.dim for r in res] == [1, 3, 3, 1]
    _, res = holomorphic_form_check(STRUCTS["iwasawa"])
    # phi1, phi2 are closed but phi_i ^ d omega != 0
    assert [r.dim for r in res] == [0, 0, 2, 1]
    h = STRUCTS["iwasawa"]
    for k in (1, 2):
        assert wedge(h.d_omega, phi(3, k))
    _, res = holomorphic_form_check(STRUCTS["kodaira_thurston"])
    assert [r.dim for r in res] == [0, 1, 1]
    assert not wedge(STRUCTS["kodaira_thurston"].d_omega, phi(2, 1))


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_injectivity(h):
    rep, rows = pointwise_injectivity(h)
    assert rep.verdict
    if h.is_kahler():
        assert not any(r["injective"] for r in rows)


def test_injectivity_kt():
    _, rows = pointwise_injectivity(STRUCTS["kodaira_thurston"])
    on_functions = {r["operator"] for r in rows if r["bidegree"] == (0, 0) and r["injective"]}
    assert on_functions == {"tau", "taubar", "lam", "lambar"}


@pytest.mark.parametrize("h", ALL, ids=ids(ALL))
def test_box_structure(h):
    rep = box_structure_check(h)
    assert rep.verdict, [c.label for c in rep.failures()][:3]


# scale invariance -------------------------------------------------------------

@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["kodaira_thurston", "iwasawa"]), st.sampled_from([2, 3, 5, "1/2", "2/3"]))
def test_scale_invariance(name, c):
    from fractions import Fraction

    h = build_structure(rescale_spec(load_spec(name), Fraction(c)))
    base = STRUCTS[name]
    assert box_table(h) == box_table(base)
    assert hodge_table(h) == hodge_table(base)


@pytest.mark.parametrize("scale", [2, 3])
def test_omega_scale_does_not_change_tables(scale):
    base = STRUCTS["iwasawa"]
    h = build_structure(base.spec, omega_scale=scale)
    assert box_table(h) == box_table(base)
