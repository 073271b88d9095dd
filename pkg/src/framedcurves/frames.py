"""Adapted and osculating frames along curves in the three model geometries.

A frame is an (n+2)x(n+2) matrix whose columns are (e_0, ..., e_{n+1}) with
e_0 the base point on the model.  Signed orthonormality means E^T J E = J for
the quadric models; in the euclidean affine convention e_0 has leading
coordinate 1, the remaining columns have leading coordinate 0 and spatially
orthonormal parts, and the position part of e_0 is unconstrained.

For n = 2 the structure equation in arc length reads

    e_0' = e_1
    e_1' = -delta e_0 + kappa_1 e_2 + kappa_2 e_3
    e_2' = -kappa_1 e_1 + kappa_3 e_3
    e_3' = -kappa_2 e_1 - kappa_3 e_2

i.e. E' = E K with the coefficient matrix K below.  The dual curve of a frame
field is gamma_hat = E^{-T} w, w = (0, ..., 0, 1); its derivative jets satisfy
the companion recursion d_{k+1} = d_k' + L d_k with L = -K^T, which stays in
exact rational arithmetic whenever the curvatures are polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .curves import SampledCurve
from .errors import (
    CapabilityError,
    DegeneracyError,
    DimensionMismatch,
    DomainError,
    IntegrationError,
)
from .jets import DEFAULT_RANK_TOL, detect_type_report
from .ratpoly import Poly, as_fraction
from .spaceform import SpaceForm, inner_product, normalize_to_model

_GS_TOL = 1e-12


# -- frames -------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Frame matrix with columns (e_0, ..., e_{n+1}) over a space form."""

    matrix: np.ndarray
    sf: SpaceForm

    def column(self, i):
        return self.matrix[:, i]

    @property
    def base_point(self):
        return self.matrix[:, 0]

    @property
    def dim(self):
        return self.matrix.shape[0]


def gram_defect(frame, sf=None):
    """How far a frame matrix is from signed orthonormality (sup norm).

    Euclidean frames are affine: the defect combines the leading-row pattern
    (1, 0, ..., 0) with orthonormality of the spatial block of e_1..e_{n+1};
    the position part of e_0 is free.
    """
    if isinstance(frame, Frame):
        matrix, sf = frame.matrix, frame.sf
    else:
        matrix = np.asarray(frame, dtype=float)
        if sf is None:
            raise DimensionMismatch("need a SpaceForm for a bare matrix")
    if sf.kind == "euclidean":
        lead = max(abs(matrix[0, 0] - 1.0), float(np.max(np.abs(matrix[0, 1:]))))
        block = matrix[1:, 1:]
        ortho = float(np.max(np.abs(block.T @ block - np.eye(block.shape[1]))))
        return max(lead, ortho)
    j = sf.form.matrix
    return float(np.max(np.abs(matrix.T @ j @ matrix - j)))


# -- signed Gram-Schmidt ------------------------------------------------------


def gram_schmidt_signed(vectors, form, orientation=None):
    """Orthonormalize an ordered list against a (possibly indefinite) form.

    Each output vector spans the same leading flag as the input.  The sign of
    output k is chosen so that <input_k, output_k> > 0, then multiplied by
    orientation[k] if given.  A vector whose projection is null for the form
    (|<v,v>| below tolerance relative to its size) raises a degeneracy error
    naming its index.
    """
    out = []
    signs = []
    for i, v in enumerate(vectors):
        v = np.asarray(v, dtype=float).copy()
        for e, sgn in zip(out, signs):
            v -= sgn * inner_product(v, e, form) * e
        q = inner_product(v, v, form)
        scale = float(np.dot(v, v))
        if abs(q) <= _GS_TOL * max(scale, 1.0):
            raise DegeneracyError(i)
        e = v / np.sqrt(abs(q))
        if orientation is not None and orientation[i] < 0:
            e = -e
        out.append(e)
        signs.append(1.0 if q > 0 else -1.0)
    return out


# -- curvature data and structure matrices ------------------------------------


@dataclass
class CurvatureData:
    """delta in {0, 1, -1} plus the curvature functions (kappa_1..kappa_3).

    ``kappa`` holds callables of arc length; ``kappa_polys`` optionally holds
    the same functions as exact polynomials, unlocking exact dual jets.
    """

    delta: int
    kappa: tuple
    kappa_polys: tuple = None

    def __post_init__(self):
        if self.delta not in (0, 1, -1):
            raise DomainError(f"delta must be 0, 1 or -1, got {self.delta}")
        if len(self.kappa) != 3:
            raise DimensionMismatch("structure equation is wired for n = 2 (three curvatures)")

    @classmethod
    def from_polys(cls, delta, polys):
        polys = tuple(p if isinstance(p, Poly) else Poly.from_t_coeffs(p) for p in polys)
        fns = tuple((lambda s, p=p: p.evalf(s)) for p in polys)
        return cls(delta, fns, polys)

    @classmethod
    def constant(cls, delta, values):
        return cls.from_polys(delta, [[as_fraction(v)] for v in values])

    def values(self, s):
        return tuple(f(s) for f in self.kappa)


def structure_matrix(delta, kappa_values):
    """K with E' = E K for n = 2."""
    k1, k2, k3 = kappa_values
    return np.array(
        [
            [0.0, -delta, 0.0, 0.0],
            [1.0, 0.0, -k1, -k2],
            [0.0, k1, 0.0, -k3],
            [0.0, k2, k3, 0.0],
        ]
    )


def structure_poly_matrix(curv: CurvatureData):
    """K as a 4x4 matrix of exact polynomials (needs kappa_polys)."""
    if curv.kappa_polys is None:
        raise CapabilityError("exact structure matrix needs polynomial curvatures")
    k1, k2, k3 = curv.kappa_polys
    z, d = Poly(), Poly.const(curv.delta)
    return [
        [z, Poly() - d, z, z],
        [Poly.const(1), z, Poly() - k1, Poly() - k2],
        [z, k1, z, Poly() - k3],
        [z, k2, k3, z],
    ]


def dual_coefficient_jets(curv: CurvatureData, r):
    """Exact jets of the dual curve in the co-moving basis.

    gamma_hat = E^{-T} w satisfies gamma_hat^{(k)} = E^{-T} d_k with d_0 = w
    and d_{k+1} = d_k' + L d_k, L = -K^T.  Because E^{-T} is invertible, rank
    questions about the dual's jets reduce to the d_k alone.
    """
    if curv.kappa_polys is None:
        raise CapabilityError("exact dual jets need polynomial curvatures")
    k = structure_poly_matrix(curv)
    size = 4
    l_matrix = [[Poly() - k[j][i] for j in range(size)] for i in range(size)]
    d = [Poly(), Poly(), Poly(), Poly.const(1)]
    out = [d]
    for _ in range(r):
        nxt = []
        for i in range(size):
            acc = d[i].diff_t()
            for j in range(size):
                acc = acc + l_matrix[i][j] * d[j]
            nxt.append(acc)
        d = nxt
        out.append(d)
    return out


# -- frame fields --------------------------------------------------------------


@dataclass
class FrameField:
    """Frames sampled along arc length / parameter nodes.

    ``matrix_derivative_fn(t, k)``, when present, returns the k-th derivative
    of the full frame matrix (analytic channel); ``curvature`` enables the
    structure-equation channels.
    """

    sf: SpaceForm
    s: np.ndarray
    matrices: np.ndarray  # (N, dim, dim)
    curvature: CurvatureData = None
    matrix_derivative_fn: object = None
    meta: dict = dataclass_field(default_factory=dict)

    def __len__(self):
        return len(self.s)

    @property
    def dim(self):
        return self.matrices.shape[1]

    def frame(self, i) -> Frame:
        return Frame(self.matrices[i], self.sf)

    def node_spacing(self):
        ds = np.diff(self.s)
        if len(ds) and not np.allclose(ds, ds[0], rtol=1e-9, atol=1e-12):
            return None
        return float(ds[0]) if len(ds) else 0.0

    def gram_defects(self):
        return np.array([gram_defect(m, self.sf) for m in self.matrices])


def frame_field_from_function(sf, matrix_fn, nodes, matrix_derivative_fn=None):
    """Sample a closed-form frame field at the given nodes."""
    nodes = np.asarray(nodes, dtype=float)
    mats = np.stack([np.asarray(matrix_fn(t), dtype=float) for t in nodes])
    return FrameField(sf, nodes, mats, matrix_derivative_fn=matrix_derivative_fn)


# -- re-orthonormalization -----------------------------------------------------


def reorthonormalize(matrix, sf: SpaceForm, noise_floor=1e-10):
    """Project a near-frame back onto the signed-orthonormal set.

    Lorentz frames far out on the upper sheet have coordinates of size e^s,
    and evaluating the indefinite form there cancels catastrophically: the
    projection injects relative noise of order |column|^2 * eps per call.
    Once that exceeds ``noise_floor`` (the integration tolerance, when called
    from the integrator) the matrix is returned unchanged -- the raw
    integrator output is strictly better than a noisy projection.
    """
    matrix = np.asarray(matrix, dtype=float)
    if sf.kind == "euclidean":
        out = matrix.copy()
        out[0, 0] = 1.0
        out[0, 1:] = 0.0
        spatial = gram_schmidt_signed(list(matrix[1:, 1:].T), sf.form_spatial)
        for j, col in enumerate(spatial):
            out[1:, j + 1] = col
        return out
    if sf.kind == "hyperbolic":
        size2 = float(np.max(np.sum(matrix * matrix, axis=0)))
        if size2 * np.finfo(float).eps > noise_floor:
            return matrix
    try:
        cols = gram_schmidt_signed(list(matrix.T), sf.form)
    except DegeneracyError:
        return matrix
    return np.stack(cols, axis=1)


# -- structure-equation integration (hand-rolled Dormand-Prince 5(4)) ----------

_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def _dp54_step(f, t, y, h):
    k = []
    for ci, ai in zip(_DP_C, _DP_A):
        yi = y if not ai else y + h * sum(a * kj for a, kj in zip(ai, k))
        k.append(f(t + ci * h, yi))
    y5 = y + h * sum(b * kj for b, kj in zip(_DP_B5, k))
    y4 = y + h * sum(b * kj for b, kj in zip(_DP_B4, k))
    return y5, y5 - y4


def integrate_structure_equation(init: Frame, curv: CurvatureData, span, tol=1e-10, nodes=None):
    """Propagate a frame by E' = E K(s), returning a FrameField at the nodes.

    Adaptive embedded Runge-Kutta 5(4) with signed re-orthonormalization after
    every accepted step, so the group constraint does not accumulate drift.
    """
    if init.dim != 4:
        raise DimensionMismatch("structure-equation integration is wired for n = 2")
    s0, s1 = float(span[0]), float(span[1])
    if nodes is None:
        nodes = np.linspace(s0, s1, 201)
    nodes = np.asarray(nodes, dtype=float)
    direction = 1.0 if s1 >= s0 else -1.0
    order = np.argsort(direction * nodes)
    sorted_nodes = nodes[order]

    sf = init.sf

    def rhs(s, y):
        e = y.reshape(4, 4)
        return (e @ structure_matrix(curv.delta, curv.values(s))).ravel()

    y = init.matrix.astype(float).ravel()
    s = s0
    h = direction * max(abs(s1 - s0), 1e-12) / 100.0
    out = np.empty((len(nodes), 4, 4))
    next_idx = 0

    # emit any nodes at (or numerically before) the start
    while next_idx < len(sorted_nodes) and direction * (sorted_nodes[next_idx] - s) <= 1e-14:
        out[order[next_idx]] = y.reshape(4, 4)
        next_idx += 1

    min_h = 1e-13 * max(abs(s1 - s0), 1.0)
    while next_idx < len(sorted_nodes):
        target = sorted_nodes[next_idx]
        if direction * (s + h - target) > 0:
            h = target - s
        y5, err_vec = _dp54_step(rhs, s, y, h)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(err_vec) / scale))
        if err <= 1.0:
            s = s + h
            y = reorthonormalize(y5.reshape(4, 4), sf, noise_floor=tol).ravel()
            while (
                next_idx < len(sorted_nodes)
                and direction * (sorted_nodes[next_idx] - s) <= 1e-12 * max(1.0, abs(s))
            ):
                out[order[next_idx]] = y.reshape(4, 4)
                next_idx += 1
        factor = 0.9 * (err ** -0.2) if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        if abs(h) < min_h:
            raise IntegrationError(s)

    return FrameField(sf, nodes, out, curvature=curv)


# -- osculating frames ----------------------------------------------------------


def _signed_det_fix(cols):
    """Flip the last column if needed so the matrix determinant is positive."""
    m = np.stack(cols, axis=1)
    if np.linalg.det(m) < 0:
        cols[-1] = -cols[-1]
    return cols


def osculating_frame(curve, t, sf: SpaceForm, rank_tol=DEFAULT_RANK_TOL) -> Frame:
    """Frame spanning the osculating flag of the curve at t.

    The flag generators are gamma and the derivatives at the rank-jump orders
    gamma^(a_1), ..., gamma^(a_{n+1}); Gram-Schmidt against the model's form
    produces the frame.  Signs: e_k keeps the direction of its generator for
    k <= n, and e_{n+1} is flipped if needed to make det > 0.
    """
    report = detect_type_report(curve, t, rank_tol=rank_tol)
    a = report.type
    jet = curve.jet(t, a[-1])
    cols = [jet[:, 0]] + [jet[:, ai] for ai in a]

    if sf.kind == "euclidean":
        base = normalize_to_model(cols[0], sf)
        spatial = gram_schmidt_signed([c[1:] for c in cols[1:]], sf.form_spatial)
        spatial = _signed_det_fix(spatial)
        dim = curve.dim
        mat = np.zeros((dim, dim))
        mat[:, 0] = base
        for j, col in enumerate(spatial):
            mat[1:, j + 1] = col
        return Frame(mat, sf)

    cols[0] = normalize_to_model(cols[0], sf)
    frame_cols = gram_schmidt_signed(cols, sf.form)
    frame_cols = _signed_det_fix(frame_cols)
    return Frame(np.stack(frame_cols, axis=1), sf)


def osculating_frame_field(curve, sf: SpaceForm, nodes, rank_tol=DEFAULT_RANK_TOL) -> FrameField:
    """Pointwise osculating frames at each node."""
    nodes = np.asarray(nodes, dtype=float)
    mats = np.stack([osculating_frame(curve, t, sf, rank_tol).matrix for t in nodes])
    return FrameField(sf, nodes, mats)


# -- frame dual -----------------------------------------------------------------


def _dual_value(matrix, sf: SpaceForm):
    e_last = matrix[:, -1]
    if sf.kind == "euclidean":
        point = matrix[1:, 0]
        return np.concatenate(([-float(point @ e_last[1:])], e_last[1:]))
    return e_last.copy()


class DualCurve:
    """The dual curve gamma_hat of a framed curve; acts as a jet provider.

    Values per geometry: euclidean -> (-gamma . e_{n+1}, e_{n+1}) in the
    offset-sphere model; spherical/hyperbolic -> e_{n+1} itself.
    """

    exact = False

    def __init__(self, field: FrameField):
        self.field = field
        self.kind = field.sf.dual_kind
        self.s = field.s
        self.values = np.stack([_dual_value(m, field.sf) for m in field.matrices])
        self._sampled = None
        spacing = field.node_spacing()
        if field.matrix_derivative_fn is None and field.curvature is None and spacing:
            self._sampled = SampledCurve(field.s[0], spacing, self.values.T)

    @property
    def dim(self):
        return self.values.shape[1]

    def max_order(self, t=None):
        if self.field.matrix_derivative_fn is not None:
            return None
        if self.field.curvature is not None:
            return None
        return self._sampled.max_order(t) if self._sampled is not None else 0

    def _node_index(self, t):
        idx = int(np.argmin(np.abs(self.s - float(t))))
        if abs(self.s[idx] - float(t)) > 1e-9 * max(1.0, float(np.max(np.abs(self.s)))):
            return None
        return idx

    def jet(self, t, r):
        sf = self.field.sf
        fn = self.field.matrix_derivative_fn
        if fn is not None:
            mats = [np.asarray(fn(float(t), k), dtype=float) for k in range(r + 1)]
            return self._jet_from_matrix_derivs(mats, sf)
        if self.field.curvature is not None and self.field.curvature.kappa_polys is not None:
            idx = self._node_index(t)
            if idx is None:
                raise CapabilityError("dual jets from curvature data are available at nodes only")
            d = dual_coefficient_jets(self.field.curvature, r)
            e = self.field.matrices[idx]
            f = np.linalg.inv(e).T
            cols = []
            for k in range(r + 1):
                dk = np.array([p.evalf(float(t)) for p in d[k]])
                col = f @ dk
                if sf.kind == "hyperbolic":
                    col = sf.form.matrix @ col  # J e_{n+1} -> e_{n+1}
                cols.append(col)
            return np.stack(cols, axis=1)
        if self._sampled is not None:
            return self._sampled.jet(t, r)
        raise CapabilityError("frame field provides no derivative channel for dual jets")

    def _jet_from_matrix_derivs(self, mats, sf):
        e_last = [m[:, -1] for m in mats]
        if sf.kind != "euclidean":
            return np.stack(e_last, axis=1)
        gamma = [m[1:, 0] for m in mats]
        r = len(mats) - 1
        cols = []
        binom = [[1]]
        for k in range(1, r + 1):
            binom.append([1] + [binom[-1][j - 1] + binom[-1][j] for j in range(1, k)] + [1])
        for k in range(r + 1):
            off = -sum(binom[k][j] * float(gamma[j] @ e_last[k - j][1:]) for j in range(k + 1))
            cols.append(np.concatenate(([off], e_last[k][1:])))
        return np.stack(cols, axis=1)


def frame_dual(field: FrameField) -> DualCurve:
    """Dual curve of a frame field (per-geometry hyperplane coordinates)."""
    return DualCurve(field)


# -- Legendre (integrality) residuals -------------------------------------------


def legendre_residuals(field: FrameField, curve=None):
    """Per-node |<gamma_hat, gamma'>| -- zero iff the lift is integral.

    With no curve given, gamma' is read off the structure equation as e_1.
    The pairing is the dual space's incidence pairing: plain dot against the
    (0, gamma'-spatial) vector in the euclidean affine convention, the ambient
    form otherwise.
    """
    sf = field.sf
    res = np.empty(len(field.s))
    for i, t in enumerate(field.s):
        m = field.matrices[i]
        if curve is None:
            vel = m[:, 1]
        else:
            vel = curve.jet(t, 1)[:, 1]
        dual = _dual_value(m, sf)
        if sf.kind == "euclidean":
            res[i] = abs(float(dual[1:] @ vel[1:]))
        else:
            res[i] = abs(inner_product(dual, vel, sf.form))
    return res
