"""Curve representations that can produce jets (point + derivative columns).

Three representations are supported:

* :class:`PolynomialCurve` -- exact rational coefficients; jets at rational
  parameters are exact, which is what the rank decisions downstream want.
* :class:`ClosedFormCurve` -- analytic callables for each derivative order.
* :class:`SampledCurve` -- dense uniform samples differentiated with central
  stencils; trusted only up to modest derivative orders.

All components are ambient coordinate vectors of length n+2 (euclidean curves
carry their leading 1 explicitly, so derivatives carry a leading 0).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np

from .errors import CapabilityError, DimensionMismatch
from .ratpoly import Poly, as_fraction


class PolynomialCurve:
    """Curve whose components are exact rational polynomials in t."""

    exact = True

    def __init__(self, components):
        comps = []
        for comp in components:
            if isinstance(comp, Poly):
                if comp.deg_u() > 0:
                    raise DimensionMismatch("curve components must be univariate in t")
                comps.append(comp)
            else:
                comps.append(Poly.from_t_coeffs(comp))
        if len(comps) < 3:
            raise DimensionMismatch("need at least 3 components (ambient dimension n+2 >= 3)")
        self.components = tuple(comps)
        self._derivs = [self.components]

    @property
    def dim(self):
        return len(self.components)

    def max_order(self, t=None):
        return None  # unlimited

    def _deriv_row(self, k):
        while len(self._derivs) <= k:
            self._derivs.append(tuple(p.diff_t() for p in self._derivs[-1]))
        return self._derivs[k]

    def jet(self, t, r):
        """Float jet matrix of shape (dim, r+1): columns are gamma, gamma', ..."""
        t = float(t)
        out = np.empty((self.dim, r + 1))
        for k in range(r + 1):
            row = self._deriv_row(k)
            for i, p in enumerate(row):
                out[i, k] = p.evalf(t)
        return out

    def jet_exact(self, t, r):
        """Exact jet columns as nested lists of Fractions (t must be rational)."""
        tq = as_fraction(t)
        cols = []
        for k in range(r + 1):
            row = self._deriv_row(k)
            cols.append([p.eval(tq) for p in row])
        return cols

    def reparametrized(self, phi: Poly) -> "PolynomialCurve":
        """Exact composition gamma(phi(t)) for reparametrization checks."""
        return PolynomialCurve([p.compose_t(phi) for p in self.components])

    def linearly_mapped(self, matrix) -> "PolynomialCurve":
        """Apply an exact constant linear map (rows of rationals) to the curve."""
        rows = [[as_fraction(x) for x in row] for row in matrix]
        if any(len(row) != self.dim for row in rows):
            raise DimensionMismatch("matrix width must equal the curve dimension")
        comps = []
        for row in rows:
            acc = Poly()
            for a, p in zip(row, self.components):
                acc = acc + Poly.const(a) * p
            comps.append(acc)
        return PolynomialCurve(comps)


class ClosedFormCurve:
    """Curve given by analytic derivative callables.

    Parameters
    ----------
    derivative_fns : sequence of callables
        ``derivative_fns[k](t)`` returns the k-th derivative as a length-dim
        array.  The list length bounds the available jet order.
    """

    exact = False

    def __init__(self, derivative_fns, dim):
        if not derivative_fns:
            raise CapabilityError("need at least the order-0 callable")
        self.derivative_fns = tuple(derivative_fns)
        self.dim = dim

    def max_order(self, t=None):
        return len(self.derivative_fns) - 1

    def jet(self, t, r):
        if r > self.max_order():
            raise CapabilityError(
                f"closed form provides derivatives up to order {self.max_order()}, requested {r}"
            )
        cols = [np.asarray(f(float(t)), dtype=float) for f in self.derivative_fns[: r + 1]]
        for c in cols:
            if c.shape != (self.dim,):
                raise DimensionMismatch("derivative callable returned wrong length")
        return np.stack(cols, axis=1)


# Central difference stencils on uniform grids: {order: (offsets, weights, accuracy)}
_FD_STENCILS = {
    1: ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
    2: ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12)),
    3: ((-3, -2, -1, 1, 2, 3), (1 / 8, -1, 13 / 8, -13 / 8, 1, -1 / 8)),
    4: ((-3, -2, -1, 0, 1, 2, 3), (-1 / 6, 2, -13 / 2, 28 / 3, -13 / 2, 2, -1 / 6)),
}


class SampledCurve:
    """Uniformly sampled curve differentiated with 4th-order central stencils.

    Derivatives above ``max_trusted_order`` (default 4) are refused: stacked
    finite differences at those orders no longer carry usable precision.
    """

    exact = False

    def __init__(self, t0, dt, values, max_trusted_order=4):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise DimensionMismatch("values must be (dim, N)")
        self.t0 = float(t0)
        self.dt = float(dt)
        self.values = values
        self.max_trusted_order = int(max_trusted_order)

    @property
    def dim(self):
        return self.values.shape[0]

    def max_order(self, t=None):
        return min(self.max_trusted_order, len(_FD_STENCILS))

    def _index_of(self, t):
        idx = round((float(t) - self.t0) / self.dt)
        if abs(self.t0 + idx * self.dt - float(t)) > 1e-9 * max(1.0, abs(self.dt)):
            raise CapabilityError("sampled curves can only be differentiated at grid nodes")
        return int(idx)

    def jet(self, t, r):
        if r > self.max_order():
            raise CapabilityError(
                f"finite differences are trusted to order {self.max_order()}, requested {r}"
            )
        idx = self._index_of(t)
        n = self.values.shape[1]
        cols = [self.values[:, idx].copy()]
        for k in range(1, r + 1):
            offsets, weights = _FD_STENCILS[k]
            if idx + offsets[0] < 0 or idx + offsets[-1] >= n:
                raise CapabilityError("not enough samples around t for the requested order")
            col = np.zeros(self.dim)
            for off, w in zip(offsets, weights):
                col += w * self.values[:, idx + off]
            cols.append(col / self.dt**k)
        return np.stack(cols, axis=1)


# -- stock curves used across tests, examples, and the CLI -------------------


def monomial_curve(a, dim=None) -> PolynomialCurve:
    """The model curve (1, t^{a1}/a1!, ..., t^{ak}/ak!) of a given type vector."""
    a = tuple(int(x) for x in a)
    if dim is None:
        dim = len(a) + 1
    if dim < len(a) + 1:
        raise DimensionMismatch("ambient dimension too small for the type vector")
    comps = [Poly.const(1)]
    comps += [Poly.monomial_t(ai, Fraction(1, factorial(ai))) for ai in a]
    comps += [Poly() for _ in range(dim - len(a) - 1)]
    return PolynomialCurve(comps)


def circle_curve() -> ClosedFormCurve:
    """Unit circle in the euclidean plane z = 0, ambient (1, cos t, sin t, 0)."""

    def deriv(k):
        def f(t, k=k):
            lead = 1.0 if k == 0 else 0.0
            c = np.cos(t + k * np.pi / 2)
            s = np.sin(t + k * np.pi / 2)
            return np.array([lead, c, s, 0.0])

        return f

    return ClosedFormCurve([deriv(k) for k in range(12)], dim=4)


def helix_curve() -> ClosedFormCurve:
    """Arc-length helix (cos t, sin t, t)/sqrt(2), ambient leading 1."""
    rt2 = np.sqrt(2.0)

    def deriv(k):
        def f(t, k=k):
            lead = 1.0 if k == 0 else 0.0
            c = np.cos(t + k * np.pi / 2) / rt2
            s = np.sin(t + k * np.pi / 2) / rt2
            if k == 0:
                z = t / rt2
            elif k == 1:
                z = 1.0 / rt2
            else:
                z = 0.0
            return np.array([lead, c, s, z])

        return f

    return ClosedFormCurve([deriv(k) for k in range(12)], dim=4)


def great_circle_curve() -> ClosedFormCurve:
    """Great circle (cos t, sin t, 0, 0) on the unit 3-sphere."""

    def deriv(k):
        def f(t, k=k):
            c = np.cos(t + k * np.pi / 2)
            s = np.sin(t + k * np.pi / 2)
            return np.array([c, s, 0.0, 0.0])

        return f

    return ClosedFormCurve([deriv(k) for k in range(12)], dim=4)


STOCK_CURVES = {
    "circle": circle_curve,
    "helix": helix_curve,
    "great-circle": great_circle_curve,
}
