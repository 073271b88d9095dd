"""Type detection from jets, duality, codimensions, and the generic-type tables."""

import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from framedcurves import (
    DegeneracyError,
    DimensionMismatch,
    FiniteTypeError,
    codim_adapted,
    codim_osculating,
    detect_type,
    detect_type_report,
    dual_type,
    enumerate_generic_types,
    exact_rank_profile,
    float_rank_profile,
    monomial_curve,
    schubert_number,
    validate_type_vector,
)

OSCULATING_N2 = [
    (1, 2, 3),
    (1, 2, 4),
    (1, 2, 5),
    (1, 3, 4),
    (1, 3, 5),
    (1, 4, 5),
    (2, 3, 4),
    (2, 3, 5),
    (2, 4, 5),
    (3, 4, 5),
]

increasing_triples = st.lists(
    st.integers(min_value=1, max_value=9), min_size=3, max_size=3, unique=True
).map(lambda xs: tuple(sorted(xs)))


@pytest.mark.parametrize("a", OSCULATING_N2)
def test_monomial_curve_detects_exactly(a):
    assert detect_type(monomial_curve(a), 0, mode="exact") == a


@pytest.mark.parametrize("a", OSCULATING_N2[:6])
def test_monomial_curve_detects_in_float_mode(a):
    report = detect_type_report(monomial_curve(a), 0.0, mode="float")
    assert report.type == a
    assert report.confidence == "high"


def test_monomial_curve_is_regular_away_from_zero():
    curve = monomial_curve((1, 3, 5))
    assert detect_type(curve, Fraction(1, 2), mode="exact") == (1, 2, 3)
    assert detect_type(curve, -0.37, mode="float") == (1, 2, 3)


def test_detection_invariant_under_linear_maps():
    # the rank profile of the jet flag only sees the curve up to GL(4)
    curve = monomial_curve((2, 3, 5))
    g = [
        [1, 0, 0, 0],
        [Fraction(1, 2), 3, 0, 0],
        [0, -1, 1, 4],
        [2, 0, 0, -1],
    ]
    mapped = curve.linearly_mapped(g)
    assert detect_type(mapped, 0, mode="exact") == (2, 3, 5)
    assert detect_type(mapped, 0.0, mode="float") == (2, 3, 5)


def test_detection_sees_through_reparametrization():
    from framedcurves import Poly

    curve = monomial_curve((1, 2, 4))
    # phi(t) = t + t^2 fixes 0 with phi'(0) = 1, so the type at 0 survives
    phi = Poly.t() + Poly.t() * Poly.t()
    assert detect_type(curve.reparametrized(phi), 0, mode="exact") == (1, 2, 4)


@given(increasing_triples)
def test_dual_type_is_an_involution(a):
    assert dual_type(dual_type(a)) == a


@given(increasing_triples)
def test_codimension_chain(a):
    assert 0 <= codim_osculating(a) <= codim_adapted(a) <= schubert_number(a)


@given(increasing_triples)
def test_osculating_codimension_is_dual_invariant(a):
    # duality fixes the top entry, so a3 - (n+1) is shared with the dual
    assert codim_osculating(dual_type(a)) == codim_osculating(a)


def test_codimension_values():
    table = {
        (1, 2, 3): (0, 0, 0),
        (1, 2, 4): (1, 1, 1),
        (1, 2, 5): (2, 2, 2),
        (1, 3, 4): (2, 1, 2),
        (2, 3, 4): (2, 1, 3),
        (3, 4, 5): (4, 2, 6),
    }
    for a, (cd, cc, sch) in table.items():
        assert codim_adapted(a) == cd
        assert codim_osculating(a) == cc
        assert schubert_number(a) == sch


def test_dual_type_values():
    assert dual_type((1, 2, 3)) == (1, 2, 3)
    assert dual_type((2, 3, 4)) == (1, 2, 4)
    assert dual_type((3, 4, 5)) == (1, 2, 5)
    assert dual_type((1, 3, 4)) == (1, 3, 4)
    assert dual_type((2, 4, 5)) == (1, 3, 5)


def test_enumerate_generic_types_n2():
    ordinary = enumerate_generic_types(2, budget=2)
    assert ordinary == [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4)]
    adapted = enumerate_generic_types(2, budget=2, mode="adapted")
    assert adapted == ordinary + [(2, 3, 4)]
    osculating = enumerate_generic_types(2, budget=2, mode="osculating")
    assert osculating == OSCULATING_N2


def test_enumerate_budget_filters():
    assert enumerate_generic_types(2, budget=1) == [(1, 2, 3), (1, 2, 4)]
    assert enumerate_generic_types(2, budget=0) == [(1, 2, 3)]


def test_enumerate_is_lex_sorted():
    for mode in ("ordinary", "adapted", "osculating"):
        for n in (1, 2, 3):
            out = enumerate_generic_types(n, budget=3, mode=mode)
            assert out == sorted(out)
            assert len(set(out)) == len(out)


def test_exact_rank_profile_counts_pivots():
    cols = [
        [Fraction(1), Fraction(0), Fraction(0)],
        [Fraction(2), Fraction(0), Fraction(0)],  # dependent
        [Fraction(0), Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1)],
    ]
    assert exact_rank_profile(cols) == [1, 1, 2, 3]


def test_float_rank_profile_is_monotone_unit_step():
    rng = np.random.default_rng(2)
    m = rng.normal(size=(4, 6))
    ranks, gap = float_rank_profile(m)
    assert ranks[0] >= 0 and gap > 0
    for r0, r1 in zip(ranks, ranks[1:]):
        assert r1 - r0 in (0, 1)


def test_degenerate_curve_raises():
    # all components proportional: the jet flag never reaches full dimension
    curve = monomial_curve((1,), dim=4)
    with pytest.raises((DegeneracyError, FiniteTypeError)):
        detect_type(curve, 0, mode="exact")


def test_validate_type_vector_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        validate_type_vector((2, 2, 3))
    with pytest.raises(DimensionMismatch):
        validate_type_vector((0, 1, 2))
    assert validate_type_vector((1, 2, 3)) == (1, 2, 3)
