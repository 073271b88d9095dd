"""Moving frames: orthonormalization, the structure equation, and dual curves."""

import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from framedcurves import (
    AmbientForm,
    CurvatureData,
    DegeneracyError,
    DomainError,
    Frame,
    frame_dual,
    frame_field_from_function,
    gram_defect,
    gram_schmidt_signed,
    inner_product,
    integrate_structure_equation,
    legendre_residuals,
    monomial_curve,
    osculating_frame,
    reorthonormalize,
    space_form,
    structure_matrix,
    structure_poly_matrix,
)
from framedcurves.examples import helix_frenet_field, radial_circle_field
from framedcurves.ratpoly import Poly


# -- signed Gram-Schmidt -------------------------------------------------------


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=30)
def test_gram_schmidt_definite_properties(seed):
    rng = np.random.default_rng(seed)
    form = AmbientForm(4)
    vectors = rng.normal(size=(4, 4)) + 2.0 * np.eye(4)
    out = gram_schmidt_signed(list(vectors), form)
    for i, e in enumerate(out):
        assert abs(inner_product(e, e, form) - 1.0) < 1e-10
        # sign convention: positive pairing with the input it came from
        assert inner_product(vectors[i], e, form) > 0
        for f in out[:i]:
            assert abs(inner_product(e, f, form)) < 1e-10
    # leading flags agree: each input lies in the span of the outputs so far
    for k in range(1, 5):
        basis = np.stack(out[:k], axis=1)
        coeff, res, _, _ = np.linalg.lstsq(basis, vectors[k - 1], rcond=None)
        assert np.linalg.norm(basis @ coeff - vectors[k - 1]) < 1e-9


def test_gram_schmidt_lorentz_timelike_first():
    form = AmbientForm(4, "lorentz")
    vectors = [
        np.array([2.0, 0.5, 0.0, 0.0]),  # timelike
        np.array([0.0, 1.0, 0.3, 0.0]),
        np.array([0.0, 0.0, 1.0, -0.2]),
        np.array([0.0, 0.0, 0.0, 1.0]),
    ]
    out = gram_schmidt_signed(vectors, form)
    gram = np.array([[inner_product(a, b, form) for b in out] for a in out])
    assert np.allclose(gram, np.diag([-1.0, 1.0, 1.0, 1.0]), atol=1e-10)


def test_gram_schmidt_null_vector_raises():
    form = AmbientForm(4, "lorentz")
    with pytest.raises(DegeneracyError):
        gram_schmidt_signed([np.array([1.0, 1.0, 0.0, 0.0])], form)  # null outright
    vectors = [
        np.array([0.0, 1.0, 0.0, 0.0]),
        np.array([1.0, 1.0, 1.0, 0.0]),  # null once the e1 component is removed
    ]
    with pytest.raises(DegeneracyError):
        gram_schmidt_signed(vectors, form)


def test_gram_schmidt_orientation_flips():
    form = AmbientForm(3)
    vectors = [np.array([2.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0])]
    plain = gram_schmidt_signed(vectors, form)
    flipped = gram_schmidt_signed(vectors, form, orientation=[1, -1])
    assert np.allclose(flipped[0], plain[0])
    assert np.allclose(flipped[1], -plain[1])


# -- structure matrices --------------------------------------------------------


@pytest.mark.parametrize("delta,kind", [(0, "euclidean"), (1, "spherical"), (-1, "hyperbolic")])
def test_structure_matrix_is_form_antisymmetric_where_it_should_be(delta, kind):
    # frames stay orthonormal iff K^T J + J K = 0 on the spatial block;
    # the euclidean first row is the affine translation channel instead
    K = structure_matrix(delta, (0.7, -0.3, 1.1))
    sf = space_form(kind)
    J = sf.form.matrix
    M = K.T @ J + J @ K
    if delta == 0:
        assert np.allclose(M[1:, 1:], 0.0)
    else:
        assert np.allclose(M, 0.0)


def test_structure_poly_matrix_matches_pointwise():
    kappa = (Poly.t(), Poly.const(1), Poly.from_t_coeffs([0, 0, Fraction(1, 2)]))
    curv = CurvatureData.from_polys(1, kappa)
    Kp = structure_poly_matrix(curv)
    for t in (0.0, 0.5, -1.25):
        K = structure_matrix(1, tuple(k(t) for k in curv.kappa))
        vals = np.array([[p.evalf(t) for p in row] for row in Kp])
        assert np.allclose(vals, K, atol=1e-12)


def test_curvature_constant_requires_exact_values():
    with pytest.raises((TypeError, DomainError)):
        CurvatureData.constant(0, (0.1, 0.0, 0.0))
    curv = CurvatureData.constant(0, (1, 0, 0))
    assert curv.kappa[0](3.7) == 1.0


# -- integration of the structure equation --------------------------------------


@pytest.mark.parametrize(
    "kind,delta,kappa",
    [("euclidean", 0, (1, 0, 0)), ("spherical", 1, (1, 0, 0)), ("hyperbolic", -1, (2, 0, 0))],
)
def test_integration_preserves_gram_structure(kind, delta, kappa):
    sf = space_form(kind)
    init = Frame(np.eye(4), sf)
    curv = CurvatureData.constant(delta, kappa)
    field = integrate_structure_equation(init, curv, (0.0, 8.0), tol=1e-10)
    assert float(np.max(field.gram_defects())) < 1e-8


def test_integration_solves_the_ode():
    # central differences of the frames against E * K at interior nodes
    sf = space_form("spherical")
    curv = CurvatureData.constant(1, (1, 0, 0))
    nodes = np.linspace(0.0, 2.0, 401)
    field = integrate_structure_equation(Frame(np.eye(4), sf), curv, (0.0, 2.0), nodes=nodes)
    h = nodes[1] - nodes[0]
    K = structure_matrix(1, (1.0, 0.0, 0.0))
    worst = 0.0
    for i in range(1, len(nodes) - 1, 25):
        dE = (field.matrices[i + 1] - field.matrices[i - 1]) / (2 * h)
        worst = max(worst, float(np.max(np.abs(dE - field.matrices[i] @ K))))
    assert worst < 1e-4  # second-order stencil error, not integrator error


def test_integration_euclidean_circle_base_point():
    # delta=0, kappa=(1,0,0): the base point traces a unit-speed circle
    sf = space_form("euclidean")
    curv = CurvatureData.constant(0, (1, 0, 0))
    nodes = np.linspace(0.0, 2 * np.pi, 201)
    field = integrate_structure_equation(Frame(np.eye(4), sf), curv, (0.0, 2 * np.pi), nodes=nodes)
    pts = np.stack([m[1:, 0] for m in field.matrices])
    radii = np.hypot(pts[:, 0] - 0.0, pts[:, 1] - 1.0)  # center sits at (0, 1, 0)
    assert float(np.max(np.abs(radii - 1.0))) < 1e-8
    # and it closes up after a full period
    assert np.allclose(field.matrices[-1], field.matrices[0], atol=1e-8)


# -- reorthonormalization --------------------------------------------------------


def test_reorthonormalize_repairs_small_drift():
    sf = space_form("spherical")
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    drifted = q + 1e-6 * rng.normal(size=(4, 4))
    fixed = reorthonormalize(drifted, sf)
    assert gram_defect(Frame(fixed, sf)) < 1e-12
    assert np.max(np.abs(fixed - q)) < 1e-5


# -- closed-form frame fields and their duals -------------------------------------


def test_builtin_fields_are_orthonormal():
    for factory in (radial_circle_field, helix_frenet_field):
        curve, field = factory()
        assert float(np.max(field.gram_defects())) < 1e-12


def test_builtin_fields_are_integral_lifts():
    for factory in (radial_circle_field, helix_frenet_field):
        curve, field = factory()
        assert float(np.max(legendre_residuals(field, curve))) < 1e-12


def test_radial_circle_dual_values():
    # last frame vector is the radial direction, so the hyperplane through
    # gamma with that conormal has euclidean offset -1 at every node
    curve, field = radial_circle_field()
    dual = frame_dual(field)
    assert dual.kind == "offset-sphere"
    expect = np.stack(
        [np.array([-1.0, np.cos(t), np.sin(t), 0.0]) for t in field.s]
    )
    assert np.allclose(dual.values, expect, atol=1e-12)


def test_dual_jets_match_finite_differences():
    curve, field = helix_frenet_field()
    dual = frame_dual(field)
    h = field.s[1] - field.s[0]
    for idx in (40, 100, 157):
        t = field.s[idx]
        jet = dual.jet(t, 2)
        fd1 = (dual.values[idx + 1] - dual.values[idx - 1]) / (2 * h)
        fd2 = (dual.values[idx + 1] - 2 * dual.values[idx] + dual.values[idx - 1]) / h**2
        assert np.allclose(jet[:, 0], dual.values[idx], atol=1e-12)
        assert np.allclose(jet[:, 1], fd1, atol=1e-3)
        assert np.allclose(jet[:, 2], fd2, atol=1e-2)


def test_dual_coefficient_recursion():
    # the coefficient jets d_k satisfy d_{k+1} = d_k' - K^T d_k with d_0 = last axis
    from framedcurves.frames import dual_coefficient_jets

    kappa = (Poly.t(), Poly.const(2), Poly.t() * Poly.t())
    curv = CurvatureData.from_polys(-1, kappa)
    d = dual_coefficient_jets(curv, 4)
    K = structure_poly_matrix(curv)
    for i in range(3):
        assert d[0][i].is_zero()
    assert (d[0][3] - Poly.const(1)).is_zero()
    for k in range(4):
        for i in range(4):
            derived = d[k][i].diff_t()
            for j in range(4):
                derived = derived - K[j][i] * d[k][j]
            assert (derived - d[k + 1][i]).is_zero()


# -- frames from curve jets -------------------------------------------------------


def test_osculating_frame_of_monomial_curve():
    sf = space_form("euclidean")
    curve = monomial_curve((1, 2, 3))
    fr = osculating_frame(curve, 0.0, sf)
    assert gram_defect(fr) < 1e-12
    # at t=0 the jets already point along the axes
    assert np.allclose(fr.matrix, np.eye(4), atol=1e-12)


def test_frame_field_from_function_spacing():
    curve, field = radial_circle_field(np.linspace(0.0, 1.0, 11))
    assert len(field.s) == 11
    assert abs(field.node_spacing() - 0.1) < 1e-12
