"""Finite-type detection and the codimension calculus on type vectors.

A curve gamma in an (n+2)-dimensional ambient space is *of finite type* at t0
when the jet matrices A_r = (gamma, gamma', ..., gamma^(r)) eventually reach
full rank n+2.  The type vector a = (a_1, ..., a_{n+1}) records the minimal
orders at which the rank jumps to 2, 3, ..., n+2.

Two rank back-ends are provided: an exact fraction-free path for polynomial
curves at rational parameters, and a singular-value path for everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegeneracyError, DimensionMismatch, FiniteTypeError

DEFAULT_RANK_TOL = 1e-8
RANK_GAP_MIN = 1e3


def validate_type_vector(a):
    a = tuple(int(x) for x in a)
    if len(a) < 1:
        raise DimensionMismatch("type vector must have at least one entry")
    if a[0] < 1 or any(x >= y for x, y in zip(a, a[1:])):
        raise DimensionMismatch(f"type vector must be strictly increasing naturals, got {a}")
    return a


# -- jets ---------------------------------------------------------------------


def jet_matrix(curve, t, r):
    """Columns gamma(t), gamma'(t), ..., gamma^(r)(t) as a float array."""
    return curve.jet(t, r)


def jet_matrix_exact(curve, t, r):
    """Exact jet columns (list of Fraction columns) for exact providers."""
    return curve.jet_exact(t, r)


# -- rank profiles ------------------------------------------------------------


def exact_rank_profile(columns):
    """Ranks of the column prefixes of an exact matrix.

    Incremental fraction-free elimination: we keep an echelonized basis of the
    span so far and reduce each new column against it.
    """
    basis = []
    pivots = []
    ranks = []
    for col in columns:
        v = [Fraction(x) for x in col]
        for row, p in zip(basis, pivots):
            if v[p]:
                f = v[p] / row[p]
                v = [vi - f * ri for vi, ri in zip(v, row)]
        pivot = next((i for i, x in enumerate(v) if x != 0), None)
        if pivot is not None:
            basis.append(v)
            pivots.append(pivot)
        ranks.append(len(basis))
    return ranks


def _prefix_rank_svd(matrix, ncols, rank_tol):
    """(rank, gap) of the first ncols columns, each column normalized."""
    m = np.array(matrix[:, :ncols], dtype=float)
    norms = np.linalg.norm(m, axis=0)
    scale = np.where(norms > 0, norms, 1.0)
    sv = np.linalg.svd(m / scale, compute_uv=False)
    if sv[0] <= 0:
        return 0, np.inf
    rank = int(np.sum(sv > rank_tol * sv[0]))
    if rank == 0 or rank >= len(sv) or sv[rank] == 0:
        gap = np.inf
    else:
        gap = sv[rank - 1] / sv[rank]
    return rank, gap


def float_rank_profile(matrix, rank_tol=DEFAULT_RANK_TOL):
    """(ranks, min_gap) over column prefixes of a float matrix.

    Ranks are forced monotone non-decreasing with unit steps, which is what
    prefix ranks of a genuine jet matrix satisfy; min_gap is the smallest
    accepted/rejected singular value ratio seen at any truncation decision.
    """
    matrix = np.asarray(matrix, dtype=float)
    ranks = []
    min_gap = np.inf
    prev = 0
    for r in range(matrix.shape[1]):
        rank, gap = _prefix_rank_svd(matrix, r + 1, rank_tol)
        rank = max(prev, min(rank, prev + 1))
        if rank < r + 1:
            min_gap = min(min_gap, gap)
        ranks.append(rank)
        prev = rank
    return ranks, min_gap


# -- type detection -----------------------------------------------------------


@dataclass
class TypeDetection:
    """Full record of a finite-type detection."""

    type: tuple
    ranks: list
    mode: str  # "exact" or "float"
    confidence: str  # "high" / "low" (float path gap certificate)
    min_gap: float
    r_used: int


def _ranks_to_type(ranks, dim, r_max):
    if not ranks or ranks[0] == 0:
        raise DegeneracyError(0)
    a = []
    for target in range(2, dim + 1):
        hits = [r for r, rk in enumerate(ranks) if rk == target]
        if not hits:
            raise FiniteTypeError(max(ranks), r_max)
        a.append(hits[0])
    return tuple(a)


def detect_type_report(curve, t, r_max=None, rank_tol=DEFAULT_RANK_TOL, mode="auto"):
    """Detect the type vector at t along with the evidence used."""
    dim = curve.dim
    if r_max is None:
        r_max = dim + 4  # n + 6
    cap = curve.max_order(t)
    r_used = r_max if cap is None else min(r_max, cap)

    use_exact = mode == "exact" or (mode == "auto" and getattr(curve, "exact", False))
    if use_exact:
        try:
            cols = curve.jet_exact(t, r_used)
        except (TypeError, ValueError):
            if mode == "exact":
                raise
            use_exact = False
    if use_exact:
        ranks = exact_rank_profile(cols)
        try:
            a = _ranks_to_type(ranks, dim, r_max)
        except FiniteTypeError:
            if r_used < r_max:
                raise FiniteTypeError(max(ranks), r_used)
            raise
        return TypeDetection(a, ranks, "exact", "high", np.inf, r_used)

    jet = curve.jet(t, r_used)
    ranks, min_gap = float_rank_profile(jet, rank_tol)
    try:
        a = _ranks_to_type(ranks, dim, r_max)
    except FiniteTypeError:
        if r_used < r_max:
            raise FiniteTypeError(max(ranks), r_used)
        raise
    confidence = "high" if min_gap >= RANK_GAP_MIN else "low"
    return TypeDetection(a, ranks, "float", confidence, float(min_gap), r_used)


def detect_type(curve, t, r_max=None, rank_tol=DEFAULT_RANK_TOL, mode="auto"):
    """Type vector (a_1, ..., a_{n+1}) of the curve at t."""
    return detect_type_report(curve, t, r_max=r_max, rank_tol=rank_tol, mode=mode).type


# -- codimension calculus -----------------------------------------------------


def schubert_number(a):
    """s(a) = sum_i (a_i - i)."""
    a = validate_type_vector(a)
    return sum(ai - i for i, ai in enumerate(a, start=1))


def codim_adapted(a):
    """Codimension within adapted frame families: sum_{i>=2} (a_i - i)."""
    a = validate_type_vector(a)
    return sum(ai - i for i, ai in enumerate(a, start=1) if i >= 2)


def codim_osculating(a):
    """Codimension within osculating-frame families: a_{n+1} - (n+1)."""
    a = validate_type_vector(a)
    return a[-1] - len(a)


def dual_type(a):
    """Arnold-Scherbak dual: (a_{n+1}-a_n, ..., a_{n+1}-a_1, a_{n+1})."""
    a = validate_type_vector(a)
    top = a[-1]
    return tuple(top - x for x in reversed(a[:-1])) + (top,)


_CODIM_BY_MODE = {
    "ordinary": schubert_number,
    "adapted": codim_adapted,
    "osculating": codim_osculating,
}


def enumerate_generic_types(n, budget, mode="ordinary"):
    """All type vectors of length n+1 whose mode-codimension is <= budget.

    Sorted lexicographically.  The budget bounds every entry (a_i <= i +
    budget for the entries the mode's codimension counts), so the search space
    is finite.
    """
    if n < 1:
        raise DimensionMismatch("need n >= 1")
    if mode not in _CODIM_BY_MODE:
        raise DimensionMismatch(f"unknown enumeration mode {mode!r}")
    codim = _CODIM_BY_MODE[mode]
    top_bound = (n + 1) + budget
    out = []

    def extend(prefix):
        i = len(prefix) + 1
        lo = prefix[-1] + 1 if prefix else 1
        for ai in range(lo, top_bound + 1):
            cand = prefix + (ai,)
            if len(cand) == n + 1:
                if codim(cand) <= budget:
                    out.append(cand)
            else:
                extend(cand)

    extend(())
    out.sort()
    return out
