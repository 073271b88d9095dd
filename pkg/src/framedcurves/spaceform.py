"""Constant-curvature ambient models and their shared linear algebra.

All three geometries live in an (n+2)-dimensional coordinate space:

* ``euclidean``  -- the affine slice {x0 = 1}; points carry a leading 1,
  tangent vectors a leading 0; the bilinear form is the standard dot.
* ``spherical``  -- the unit quadric {x . x = +1} of the standard dot.
* ``hyperbolic`` -- the upper sheet {x . x = -1, x0 > 0} of the Lorentz
  form  x . y = -x0 y0 + x1 y1 + ... .

Hyperplane elements pair a unit conormal with an offset; in the two quadric
geometries the offset is unused and the conormal lives on the dual quadric
(unit sphere, respectively de Sitter space).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError

POSITIVE_DEFINITE = "positive-definite"
LORENTZ = "lorentz"

EUCLIDEAN = "euclidean"
SPHERICAL = "spherical"
HYPERBOLIC = "hyperbolic"

_KINDS = (EUCLIDEAN, SPHERICAL, HYPERBOLIC)


@dataclass(frozen=True)
class AmbientForm:
    """Symmetric bilinear form on coordinate (n+2)-space.

    Parameters
    ----------
    dimension : int
        Ambient dimension, at least 3.
    signature : str
        ``"positive-definite"`` or ``"lorentz"`` (one minus sign, first slot).
    """

    dimension: int
    signature: str = POSITIVE_DEFINITE

    def __post_init__(self):
        if self.dimension < 3:
            raise DimensionMismatch(f"ambient dimension must be >= 3, got {self.dimension}")
        if self.signature not in (POSITIVE_DEFINITE, LORENTZ):
            raise DomainError(f"unknown signature {self.signature!r}")

    @property
    def signs(self) -> np.ndarray:
        s = np.ones(self.dimension)
        if self.signature == LORENTZ:
            s[0] = -1.0
        return s

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.signs)


def inner_product(u, v, form: AmbientForm) -> float:
    """Evaluate the bilinear form on a pair of coordinate vectors.

    Raises
    ------
    DimensionMismatch
        If either vector does not have ``form.dimension`` entries.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (form.dimension,) or v.shape != (form.dimension,):
        raise DimensionMismatch(
            f"expected vectors of length {form.dimension}, got {u.shape} and {v.shape}"
        )
    prod = u * v
    if form.signature == LORENTZ:
        return float(prod[1:].sum() - prod[0])
    return float(prod.sum())


@dataclass(frozen=True)
class SpaceForm:
    """One of the three curve geometries, with its ambient form and dual model."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown geometry {self.kind!r}")
        if self.n < 1:
            raise DimensionMismatch("curve codimension parameter n must be >= 1")

    @property
    def dim(self) -> int:
        """Ambient coordinate dimension n+2."""
        return self.n + 2

    @property
    def form(self) -> AmbientForm:
        sig = LORENTZ if self.kind == HYPERBOLIC else POSITIVE_DEFINITE
        return AmbientForm(self.dim, sig)

    @property
    def form_spatial(self) -> AmbientForm:
        """Positive-definite form on the spatial coordinates (affine charts)."""
        return AmbientForm(self.dim - 1, POSITIVE_DEFINITE)

    @property
    def delta(self) -> int:
        """Curvature sign in the structure equation: 0, +1, -1."""
        return {EUCLIDEAN: 0, SPHERICAL: 1, HYPERBOLIC: -1}[self.kind]

    @property
    def dual_kind(self) -> str:
        """Name of the space the hyperplane conormals live in."""
        return {
            EUCLIDEAN: "offset-sphere",   # R x S^n: (offset, unit conormal)
            SPHERICAL: "sphere",          # unit sphere of the same dimension
            HYPERBOLIC: "de-sitter",      # {x . x = +1} of the Lorentz form
        }[self.kind]


def space_form(kind: str, n: int = 2) -> SpaceForm:
    return SpaceForm(kind, n)


@dataclass(frozen=True)
class Hyperplane:
    """A totally geodesic hyperplane: unit conormal plus (euclidean) offset.

    For the quadric geometries the hyperplane is {x : x . conormal = 0} and
    ``offset`` must be 0.  For euclidean it is {x : x . conormal + offset = 0}
    with a conormal of leading coordinate 0.
    """

    conormal: tuple
    offset: float = 0.0

    def vector(self) -> np.ndarray:
        return np.asarray(self.conormal, dtype=float)


def normalize_to_model(x, sf: SpaceForm) -> np.ndarray:
    """Scale a coordinate vector onto the model.

    euclidean: divide by the leading coordinate (must be nonzero);
    spherical: positive scaling onto {x.x = 1} (x must be nonzero);
    hyperbolic: scaling onto {x.x = -1} with a sign flip onto the upper
    sheet x0 > 0 (x must be timelike).
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (sf.dim,):
        raise DimensionMismatch(f"expected a vector of length {sf.dim}, got {x.shape}")
    if sf.kind == EUCLIDEAN:
        if x[0] == 0.0:
            raise DomainError("euclidean point has zero leading coordinate; not in the affine chart")
        return x / x[0]
    q = inner_product(x, x, sf.form)
    if sf.kind == SPHERICAL:
        if q <= 0.0:
            raise DomainError("cannot scale the zero vector onto the sphere quadric {x.x = 1}")
        return x / np.sqrt(q)
    # hyperbolic
    if q >= 0.0:
        raise DomainError("vector is not timelike; cannot scale onto the quadric {x.x = -1}")
    y = x / np.sqrt(-q)
    if y[0] < 0.0:
        y = -y
    return y


def model_residual(x, sf: SpaceForm) -> float:
    """Distance of x from the defining equation of the model (0 when on it)."""
    x = np.asarray(x, dtype=float)
    if sf.kind == EUCLIDEAN:
        return abs(x[0] - 1.0)
    target = 1.0 if sf.kind == SPHERICAL else -1.0
    return abs(inner_product(x, x, sf.form) - target)


def hyperplane_eval(x, h: Hyperplane, sf: SpaceForm) -> float:
    """Signed incidence value of a point against a hyperplane (0 = on it)."""
    x = np.asarray(x, dtype=float)
    v = h.vector()
    if sf.kind == EUCLIDEAN:
        return inner_product(x, v, sf.form) + h.offset
    if h.offset != 0.0:
        raise DomainError(f"{sf.kind} hyperplanes carry no offset")
    return inner_product(x, v, sf.form)


def tangent_residual(x, v, sf: SpaceForm) -> float:
    """How far v is from being tangent to the model at x (0 = tangent).

    In the quadric geometries tangency is x . v = 0; in the euclidean chart
    tangent vectors are exactly those with vanishing leading coordinate.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (sf.dim,):
        raise DimensionMismatch(f"expected a vector of length {sf.dim}, got {v.shape}")
    if sf.kind == EUCLIDEAN:
        return abs(float(v[0]))
    return abs(inner_product(x, v, sf.form))


def random_isometry(sf: SpaceForm, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """A random element of the isometry group, as an ambient matrix.

    Used by invariance tests and the verification suite.  For euclidean the
    matrix acts on the affine chart (block [[1, 0], [b, R]]); for the quadric
    geometries it is the exponential of a form-antisymmetric generator, which
    lands in the identity component.
    """
    from scipy.linalg import expm

    d = sf.dim
    if sf.kind == EUCLIDEAN:
        A = rng.normal(scale=scale, size=(d - 1, d - 1))
        S = A - A.T
        R = expm(S)
        b = rng.normal(scale=scale, size=d - 1)
        g = np.eye(d)
        g[1:, 1:] = R
        g[1:, 0] = b
        return g
    A = rng.normal(scale=scale, size=(d, d))
    S = A - A.T
    if sf.kind == SPHERICAL:
        return expm(S)
    J = sf.form.matrix
    return expm(J @ S)


def transform_hyperplane(g: np.ndarray, h: Hyperplane, sf: SpaceForm) -> Hyperplane:
    """Push a hyperplane forward by an isometry so incidence is preserved."""
    v = h.vector()
    if sf.kind == EUCLIDEAN:
        R = g[1:, 1:]
        b = g[1:, 0]
        w = np.zeros_like(v)
        w[1:] = R @ v[1:]
        return Hyperplane(tuple(w), h.offset - float(b @ w[1:]))
    J = sf.form.matrix
    # conormals transform by the inverse transpose with respect to the form
    w = J @ np.linalg.inv(g).T @ J @ v
    return Hyperplane(tuple(w), 0.0)
