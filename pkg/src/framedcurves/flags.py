"""Flag coordinates near a base frame, integrality residuals, reconstruction.

A full flag close to the standard one has a unique basis in column echelon
form: column j is e_j plus multiples x_i^j of the later e_i (0 <= j < i <=
n+1).  Concretely, the coordinates of a frame field E(t) relative to a base
frame are the unit-lower-triangular factor of base^{-1} E(t).

Two exterior systems live on these coordinates:

* C (osculating lifts):  dx_i^j - x_i^{j+1} dx_{j+1}^j = 0  for j+1 < i,
  whose integral curves are determined by the diagonal entries x_{j+1}^j;
* D (Legendre lifts): the single condition coupling the point column to the
  hyperplane row, computed through the annihilating covector of the
  penultimate subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import PolynomialCurve
from .errors import ChartError, DimensionMismatch, DomainError
from .ratpoly import Poly

_PIVOT_TOL = 1e-10


# -- data types ----------------------------------------------------------------


@dataclass
class FlagCurve:
    """Lower-triangular flag coordinates, exact (polys) or sampled (arrays).

    ``derivs``, when present, holds per-node coordinate derivatives computed
    without finite differencing (see flag_from_curve); the residual tables
    prefer it over the interior-stencil fallback.
    """

    dim: int
    polys: dict = None  # (i, j) -> Poly
    s: np.ndarray = None
    coords: dict = None  # (i, j) -> array over s
    derivs: dict = None  # (i, j) -> array over s
    base: np.ndarray = None

    def pairs(self):
        return [(i, j) for j in range(self.dim - 1) for i in range(j + 1, self.dim)]

    def coord_poly(self, i, j) -> Poly:
        return self.polys[(i, j)]

    def coord_values(self, i, j, nodes=None):
        if self.polys is not None:
            nodes = self.s if nodes is None else np.asarray(nodes, dtype=float)
            return np.array([self.polys[(i, j)].evalf(t) for t in nodes])
        return self.coords[(i, j)]

    def diagonal(self) -> "DiagonalData":
        if self.polys is not None:
            return DiagonalData(polys=tuple(self.polys[(j + 1, j)] for j in range(self.dim - 1)))
        return DiagonalData(
            s=self.s,
            values=np.stack([self.coords[(j + 1, j)] for j in range(self.dim - 1)]),
        )

    def diagonal_orders(self):
        """Vanishing orders of the diagonal entries at t = 0 (exact path)."""
        if self.polys is None:
            raise DomainError("diagonal orders need exact polynomial coordinates")
        orders = []
        for j in range(self.dim - 1):
            p = self.polys[(j + 1, j)]
            degs = [d for (d, du), c in p.c.items() if c]
            if not degs:
                raise DomainError(f"diagonal entry {j + 1},{j} is identically zero")
            orders.append(min(degs))
        return tuple(orders)


@dataclass
class DiagonalData:
    """The diagonal entries x_j^{j-1}(t): exact polys, or samples, or callables."""

    polys: tuple = None
    fns: tuple = None
    dfns: tuple = None
    s: np.ndarray = None
    values: np.ndarray = None

    def size(self):
        if self.polys is not None:
            return len(self.polys)
        if self.fns is not None:
            return len(self.fns)
        return self.values.shape[0]


# -- chart extraction -----------------------------------------------------------


def _unit_lower_factor(matrix, t):
    """L of the pivot-free factorization M = L U (L unit lower triangular)."""
    m = np.asarray(matrix, dtype=float)
    dim = m.shape[0]
    u = m.copy()
    lower = np.eye(dim)
    scale = max(1.0, float(np.max(np.abs(m))))
    for k in range(dim):
        piv = u[k, k]
        if abs(piv) <= _PIVOT_TOL * scale:
            raise ChartError(t)
        for i in range(k + 1, dim):
            f = u[i, k] / piv
            lower[i, k] = f
            u[i, :] -= f * u[k, :]
    return lower


def flag_from_frame(field, base=None) -> FlagCurve:
    """Flag coordinates of a frame field relative to a base frame.

    The chart is centered at the base (default: the field's first frame), so
    a frame field equal to the base has all coordinates zero.  A singular
    pivot minor means the field left the chart: ChartError with the exit
    parameter.
    """
    base_matrix = field.matrices[0] if base is None else getattr(base, "matrix", base)
    base_matrix = np.asarray(base_matrix, dtype=float)
    dim = base_matrix.shape[0]
    coords = {(i, j): np.empty(len(field.s)) for j in range(dim - 1) for i in range(j + 1, dim)}
    for idx, t in enumerate(field.s):
        m = np.linalg.solve(base_matrix, field.matrices[idx])
        lower = _unit_lower_factor(m, float(t))
        for (i, j), arr in coords.items():
            arr[idx] = lower[i, j]
    return FlagCurve(dim=dim, s=np.asarray(field.s, dtype=float), coords=coords, base=base_matrix)


def _lu_pair(m, t, exact):
    """Doolittle L (unit lower) and U of a nested-list matrix, no pivoting.

    Works over Fractions (exact=True) and floats alike; any degenerate pivot
    raises ChartError (the derivative formula below needs U invertible, so
    the last pivot is checked too).
    """
    dim = len(m)
    u = [list(row) for row in m]
    one = 1 if exact else 1.0
    zero = 0 if exact else 0.0
    lower = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
    scale = 1.0 if exact else max(1.0, max(abs(float(x)) for row in m for x in row))
    for k in range(dim):
        piv = u[k][k]
        bad = (piv == 0) if exact else (abs(piv) <= _PIVOT_TOL * scale)
        if bad:
            raise ChartError(t)
        for i in range(k + 1, dim):
            f = u[i][k] / piv
            lower[i][k] = f
            for c in range(k, dim):
                u[i][c] = u[i][c] - f * u[k][c]
    return lower, u


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def _solve_unit_lower(lower, b):
    """Y with L Y = B, L unit lower triangular."""
    n, p = len(b), len(b[0])
    y = [list(row) for row in b]
    for i in range(n):
        for k in range(i):
            f = lower[i][k]
            for j in range(p):
                y[i][j] = y[i][j] - f * y[k][j]
    return y


def _solve_right_upper(y, u):
    """X with X U = Y, U upper triangular."""
    n, p = len(y), len(y[0])
    x = [[None] * p for _ in range(n)]
    for r in range(n):
        for c in range(p):
            acc = y[r][c]
            for k in range(c):
                acc = acc - x[r][k] * u[k][c]
            x[r][c] = acc / u[c][c]
    return x


def _invert(m, exact):
    """Inverse via Gauss-Jordan with partial pivoting, generic entries."""
    dim = len(m)
    a = [list(row) for row in m]
    one = 1 if exact else 1.0
    zero = 0 if exact else 0.0
    inv = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
    for k in range(dim):
        piv_row = max(range(k, dim), key=lambda r: abs(float(a[r][k])))
        if a[piv_row][k] == 0:
            raise DomainError("singular base matrix for the flag chart")
        a[k], a[piv_row] = a[piv_row], a[k]
        inv[k], inv[piv_row] = inv[piv_row], inv[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        inv[k] = [x / piv for x in inv[k]]
        for i in range(dim):
            if i == k:
                continue
            f = a[i][k]
            if f == 0:
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            inv[i] = [x - f * y for x, y in zip(inv[i], inv[k])]
    return inv


def flag_from_curve(curve, nodes, base=None) -> FlagCurve:
    """Osculating flag chart of a curve, with truncation-free derivatives.

    The unit-lower chart depends only on the column spans, so the raw jet
    matrix stands in for any orthonormalization of it (the change of basis is
    upper triangular and falls out of the LU factor).  Differentiating
    M = L U gives strictlower(L^-1 M' U^-1) = L^-1 L', so both the chart and
    its derivative come out exactly at each node -- rationally for exact
    curves, to roundoff otherwise.  Degenerate nodes (where the plain jet
    matrix loses rank) raise ChartError; sample around them.
    """
    nodes = np.asarray(nodes, dtype=float)
    dim = curve.dim
    exact = bool(getattr(curve, "exact", False))

    def jets_at(t):
        if exact:
            tq = Fraction(float(t))
            cols = curve.jet_exact(tq, dim)
            return (
                [[cols[k][i] for k in range(dim)] for i in range(dim)],
                [[cols[k + 1][i] for k in range(dim)] for i in range(dim)],
            )
        cols = np.asarray(curve.jet(float(t), dim), dtype=float)
        return cols[:, :dim].tolist(), cols[:, 1 : dim + 1].tolist()

    if base is None:
        base, _ = jets_at(nodes[0])
    elif not exact:
        base = np.asarray(base, dtype=float).tolist()
    inv_base = _invert(base, exact)

    coords = {key: np.empty(len(nodes)) for key in
              [(i, j) for j in range(dim - 1) for i in range(j + 1, dim)]}
    derivs = {key: np.empty(len(nodes)) for key in coords}
    for idx, t in enumerate(nodes):
        j_mat, jd_mat = jets_at(t)
        m = _matmul(inv_base, j_mat)
        md = _matmul(inv_base, jd_mat)
        lower, upper = _lu_pair(m, float(t), exact)
        x = _solve_right_upper(_solve_unit_lower(lower, md), upper)
        strict = [[x[i][j] if i > j else (0 if exact else 0.0) for j in range(dim)]
                  for i in range(dim)]
        ld = _matmul(lower, strict)
        for (i, j) in coords:
            coords[(i, j)][idx] = float(lower[i][j])
            derivs[(i, j)][idx] = float(ld[i][j])
    base_arr = np.array([[float(x) for x in row] for row in base])
    return FlagCurve(dim=dim, s=nodes, coords=coords, derivs=derivs, base=base_arr)


def flag_segments(field):
    """flag_from_frame with re-centering: each chart exit starts a new segment."""
    segments = []
    start = 0
    n = len(field.s)
    while start < n:
        base = field.matrices[start]
        stop = start + 1
        while stop < n:
            m = np.linalg.solve(base, field.matrices[stop])
            try:
                _unit_lower_factor(m, float(field.s[stop]))
            except ChartError:
                break
            stop += 1
        segments.append(flag_from_frame(_FieldSlice(field, start, stop)))
        start = stop
    return segments


class _FieldSlice:
    def __init__(self, field, start, stop=None):
        self.s = field.s[start:stop]
        self.matrices = field.matrices[start:stop]


# -- derivatives on sampled coordinates ------------------------------------------

_FD5 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _sampled_derivative(values, ds):
    """4th-order central derivative at interior nodes (2 trimmed per side)."""
    v = np.asarray(values, dtype=float)
    if len(v) < 5:
        raise DimensionMismatch("need at least 5 nodes for the residual stencils")
    return (
        _FD5[0] * v[:-4] + _FD5[1] * v[1:-3] + _FD5[2] * v[2:-2] + _FD5[3] * v[3:-1] + _FD5[4] * v[4:]
    ) / ds


def _uniform_spacing(s):
    ds = np.diff(s)
    if not len(ds) or not np.allclose(ds, ds[0], rtol=1e-9, atol=1e-12):
        raise DomainError("sampled residuals need uniform nodes")
    return float(ds[0])


def _coord_and_derivative_tables(fc: FlagCurve, nodes):
    """values[(i,j)] and derivatives[(i,j)] over a common node set."""
    if fc.polys is not None:
        nodes = np.asarray(nodes, dtype=float)
        vals = {key: fc.coord_values(*key, nodes=nodes) for key in fc.pairs()}
        ders = {
            key: np.array([fc.polys[key].diff_t().evalf(t) for t in nodes]) for key in fc.pairs()
        }
        return nodes, vals, ders
    if fc.derivs is not None:
        return fc.s, dict(fc.coords), dict(fc.derivs)
    ds = _uniform_spacing(fc.s)
    inner = fc.s[2:-2]
    vals = {key: fc.coords[key][2:-2] for key in fc.pairs()}
    ders = {key: _sampled_derivative(fc.coords[key], ds) for key in fc.pairs()}
    return inner, vals, ders


def c_integrality_residual(fc: FlagCurve, nodes=None):
    """Per-node max |dx_i^j - x_i^{j+1} dx_{j+1}^j| over all couplings j+1 < i."""
    if nodes is None and fc.polys is not None:
        nodes = np.linspace(-0.5, 0.5, 21)
    grid, vals, ders = _coord_and_derivative_tables(fc, nodes)
    res = np.zeros(len(grid))
    for i in range(fc.dim):
        for j in range(i - 1):
            gap = np.abs(ders[(i, j)] - vals[(i, j + 1)] * ders[(j + 1, j)])
            res = np.maximum(res, gap)
    return res


def d_integrality_residual(fc: FlagCurve, nodes=None):
    """Per-node Legendre residual of the projected (point, hyperplane) curve.

    The hyperplane V_{n+1} is annihilated by the covector w with w_{n+1} = 1,
    w_j = -sum_{i>j} w_i x_i^j; the residual is |sum_i w_i dx_i^0|.
    """
    if nodes is None and fc.polys is not None:
        nodes = np.linspace(-0.5, 0.5, 21)
    grid, vals, ders = _coord_and_derivative_tables(fc, nodes)
    last = fc.dim - 1
    w = {last: np.ones(len(grid))}
    for j in range(last - 1, 0, -1):
        acc = np.zeros(len(grid))
        for i in range(j + 1, fc.dim):
            acc -= w[i] * vals[(i, j)]
        w[j] = acc
    res = np.zeros(len(grid))
    for i in range(1, fc.dim):
        res = res + w[i] * ders[(i, 0)]
    return np.abs(res)


# -- reconstruction ---------------------------------------------------------------


def c_integral_reconstruct(diag: DiagonalData, tol=1e-10, window=(-1.0, 1.0), num=201):
    """The unique C-integral flag curve through the base with a given diagonal.

    Rows are filled in increasing i-j order: each x_i^j integrates the already
    known x_i^{j+1} (x_{j+1}^j)'.  Polynomial diagonals reconstruct exactly;
    callable diagonals (with derivative callables) integrate numerically.
    """
    size = diag.size()
    dim = size + 1
    if diag.polys is not None:
        polys = {(j + 1, j): p for j, p in enumerate(diag.polys)}
        for gap in range(2, dim):
            for j in range(0, dim - gap):
                i = j + gap
                polys[(i, j)] = (polys[(i, j + 1)] * polys[(j + 1, j)].diff_t()).integrate_t()
        return FlagCurve(dim=dim, polys=polys)

    if diag.fns is None or diag.dfns is None:
        raise DomainError("numeric reconstruction needs diagonal callables and derivatives")

    from scipy.integrate import solve_ivp

    keys = [(j + 1, j) for j in range(size)]
    for gap in range(2, dim):
        keys += [(j + gap, j) for j in range(0, dim - gap)]
    off_keys = [k for k in keys if k[0] - k[1] >= 2]
    index = {key: pos for pos, key in enumerate(off_keys)}

    def value(key, t, y):
        i, j = key
        return diag.fns[j](t) if i - j == 1 else y[index[key]]

    def rhs(t, y):
        dy = np.empty(len(off_keys))
        for key, pos in index.items():
            i, j = key
            dy[pos] = value((i, j + 1), t, y) * diag.dfns[j](t)
        return dy

    nodes = np.linspace(window[0], window[1], num)
    # pin the integration constants where the exact branch pins them: the
    # off-diagonals vanish at t = 0 when the window straddles it, at the left
    # endpoint otherwise
    t0 = 0.0 if window[0] <= 0.0 <= window[1] else window[0]

    def _solve(t_end, t_eval):
        if len(t_eval) == 0 or t_end == t0:
            return np.zeros((len(off_keys), len(t_eval)))
        sol = solve_ivp(
            rhs,
            (t0, t_end),
            np.zeros(len(off_keys)),
            t_eval=t_eval,
            rtol=tol,
            atol=tol,
            method="RK45",
        )
        return sol.y

    left = nodes[nodes < t0][::-1]
    right = nodes[nodes >= t0]
    y = np.concatenate([_solve(window[0], left)[:, ::-1], _solve(window[1], right)], axis=1)
    coords = {key: np.array([diag.fns[key[1]](t) for t in nodes]) for key in keys if key[0] - key[1] == 1}
    for key, pos in index.items():
        coords[key] = y[pos]
    return FlagCurve(dim=dim, s=nodes, coords=coords)


def projection_curve(fc: FlagCurve) -> PolynomialCurve:
    """The point curve (1, x_1^0, ..., x_{n+1}^0) of an exact flag curve."""
    if fc.polys is None:
        raise DomainError("projection to a polynomial curve needs exact coordinates")
    comps = [Poly.const(1)] + [fc.polys[(i, 0)] for i in range(1, fc.dim)]
    return PolynomialCurve(comps)


# -- order bookkeeping -------------------------------------------------------------


def type_from_diagonal_orders(orders):
    """Partial sums: a_i = d_1 + ... + d_i."""
    orders = tuple(int(d) for d in orders)
    if any(d < 1 for d in orders):
        raise DomainError("diagonal orders must be positive")
    out = []
    acc = 0
    for d in orders:
        acc += d
        out.append(acc)
    return tuple(out)


# -- monomial C-lifts and the dual extraction ---------------------------------------


def _monomial_term(p: Poly):
    terms = [((dt, du), c) for (dt, du), c in p.c.items() if c]
    if len(terms) != 1 or terms[0][0][1] != 0:
        raise DomainError("expected a monomial in t")
    (dt, _), c = terms[0]
    return dt, c


def _monomial_div(p: Poly, q: Poly) -> Poly:
    dp, cp = _monomial_term(p)
    dq, cq = _monomial_term(q)
    if dp < dq:
        raise DomainError("monomial division with negative exponent")
    return Poly.monomial_t(dp - dq, Fraction(cp, 1) / Fraction(cq, 1))


def c_lift_monomial(a) -> FlagCurve:
    """Exact C-integral lift of the monomial curve of type a.

    Column 0 carries the curve itself; the integrality relations propagate
    x_i^{j+1} = (x_i^j)' / (x_{j+1}^j)', which stays monomial.
    """
    from math import factorial

    a = tuple(int(x) for x in a)
    dim = len(a) + 1
    polys = {}
    for i in range(1, dim):
        polys[(i, 0)] = Poly.monomial_t(a[i - 1], Fraction(1, factorial(a[i - 1])))
    for j in range(1, dim - 1):
        for i in range(j + 1, dim):
            polys[(i, j)] = _monomial_div(polys[(i, j - 1)].diff_t(), polys[(j, j - 1)].diff_t())
    return FlagCurve(dim=dim, polys=polys)


def dual_curve_from_clift(fc: FlagCurve) -> PolynomialCurve:
    """Dual curve read off a C-integral lift: (1, x_{n+1}^n, ..., x_{n+1}^0)."""
    if fc.polys is None:
        raise DomainError("dual extraction needs exact coordinates")
    last = fc.dim - 1
    comps = [Poly.const(1)] + [fc.polys[(last, j)] for j in range(last - 1, -1, -1)]
    return PolynomialCurve(comps)
