"""Wavefront singularity classes and bifurcation scans of framed-curve families.

The frame dual of a generically framed curve has type (1, 2, 3), and its
envelope is a tangent developable: a cuspidal edge along the regular part of
its singular locus.  Rarer dual types produce rarer wavefront germs, and in a
one-parameter family those germs appear along curves in the (t, lambda)
plane (persistent strata) or at isolated points (momentary events).  This
module names the germs, classifies single points through the frame dual's
type vector, and scans exact polynomial families for the full bifurcation
picture: strata polylines, momentary events, and degenerate regions.

All scanning is done on exact rational polynomials: per parameter line the
detector polynomial is made square-free over Q, its real roots are isolated
numerically and polished, and candidate special points are re-verified in
exact arithmetic whenever they admit a small rational representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegeneracyError, DomainError, FiniteTypeError
from .fileio import atomic_write_text, format_float
from .flags import type_from_diagonal_orders
from .frames import CurvatureData, dual_coefficient_jets, frame_dual, legendre_residuals
from .jets import (
    DEFAULT_RANK_TOL,
    RANK_GAP_MIN,
    _ranks_to_type,
    codim_adapted,
    codim_osculating,
    detect_type_report,
    dual_type,
    exact_rank_profile,
    float_rank_profile,
    schubert_number,
)
from .ratpoly import Poly, as_fraction, poly_det

__all__ = [
    "SingularityClass",
    "REGULAR",
    "CUSPIDAL_EDGE",
    "SWALLOWTAIL",
    "CUSPIDAL_BEAKS",
    "CUSPIDAL_BUTTERFLY",
    "FULL_FOLDED_UMBRELLA",
    "DEGENERATE",
    "unresolved",
    "CLASS_BY_DUAL_TYPE",
    "class_of",
    "consistency_check",
    "classify_point",
    "CurvatureFamily",
    "DiagonalFamily",
    "BifurcationEvent",
    "Stratum",
    "ScanResult",
    "scan_family",
    "classify_osculating_scan",
    "export_events_csv",
    "EVENT_CSV_HEADER",
]


# -- singularity classes -------------------------------------------------------


@dataclass(frozen=True)
class SingularityClass:
    """A wavefront germ name, with the unrecognized type attached if any."""

    name: str
    type: tuple = None

    def __str__(self):
        if self.name == "Unresolved" and self.type:
            return "Unresolved(%s)" % ",".join(str(x) for x in self.type)
        return self.name


REGULAR = SingularityClass("Regular")
CUSPIDAL_EDGE = SingularityClass("CuspidalEdge")
SWALLOWTAIL = SingularityClass("Swallowtail")
#: also seen spelled "cuspidal breaks", and known as the Mond surface
CUSPIDAL_BEAKS = SingularityClass("CuspidalBeaks")
CUSPIDAL_BUTTERFLY = SingularityClass("CuspidalButterfly")
FULL_FOLDED_UMBRELLA = SingularityClass("FullFoldedUmbrella")
DEGENERATE = SingularityClass("Degenerate")


def unresolved(a):
    """Finite type outside the classified table."""
    return SingularityClass("Unresolved", tuple(int(x) for x in a))


#: Envelope germ along the singular locus, by type vector of the frame dual.
CLASS_BY_DUAL_TYPE = {
    (1, 2, 3): CUSPIDAL_EDGE,
    (1, 2, 4): SWALLOWTAIL,
    (1, 3, 4): CUSPIDAL_BEAKS,
    (1, 2, 5): CUSPIDAL_BUTTERFLY,
    (2, 3, 4): FULL_FOLDED_UMBRELLA,
}

#: The developable of the frame dual of type a is swept by the dual flag; for
#: the five classified types that partner developable has the frozen type below
#: (the duality pairing is an involution on this set).
_DEVELOPABLE_PAIRING = {
    (1, 2, 3): (1, 2, 3),
    (1, 2, 4): (2, 3, 4),
    (1, 2, 5): (3, 4, 5),
    (1, 3, 4): (1, 3, 4),
    (2, 3, 4): (1, 2, 4),
}


def class_of(a):
    """Wavefront germ for a frame dual of finite type ``a``."""
    a = tuple(int(x) for x in a)
    return CLASS_BY_DUAL_TYPE.get(a, unresolved(a))


def consistency_check(type_of_dual):
    """(singularity class, partner type) for a frame dual's type vector.

    Cross-checks the duality formula against the frozen pairing table for the
    classified types; a mismatch means the codimension calculus and the class
    table have drifted apart, which is a programming error worth an exception.
    """
    a = tuple(int(x) for x in type_of_dual)
    partner = dual_type(a)
    expected = _DEVELOPABLE_PAIRING.get(a)
    if expected is not None and expected != partner:
        raise DomainError(
            f"duality pairing broke: {a} -> {partner}, table says {expected}"
        )
    return class_of(a), partner


_ADAPTED_TOL = 1e-6


def classify_point(curve, field, t, tol=DEFAULT_RANK_TOL):
    """Classify the envelope germ of a framed curve at parameter t.

    The decision runs entirely through the frame dual: detect its type at t
    and look the germ up in the class table.  When the curve is supplied the
    field is first checked to be adapted to it (the hyperplanes must actually
    be tangent, else the envelope is not a wavefront of this curve).  A dual
    that never reaches full rank within the jet budget is reported Degenerate
    rather than raising.
    """
    if curve is not None:
        res = legendre_residuals(field, curve)
        node = int(np.argmin(np.abs(np.asarray(field.s) - t)))
        if res[node] > _ADAPTED_TOL:
            raise DomainError(
                f"field is not adapted to the curve near t={t}: residual {res[node]:.3g}"
            )
    dual = frame_dual(field)
    try:
        report = detect_type_report(dual, t, rank_tol=tol)
    except (FiniteTypeError, DegeneracyError):
        return DEGENERATE
    return class_of(report.type)


# -- polynomial families ---------------------------------------------------------


def _family_poly(p):
    if isinstance(p, Poly):
        return p
    return Poly.const(as_fraction(p))


@dataclass(frozen=True)
class CurvatureFamily:
    """Curvatures kappa_i(t, lambda) as exact bivariate polynomials.

    ``u`` is the family parameter lambda.  Fixing lambda gives ordinary
    polynomial curvature data, so every per-line question reduces to the
    single-curve machinery.
    """

    delta: int
    kappa: tuple

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(_family_poly(p) for p in self.kappa))
        if self.delta not in (0, 1, -1):
            raise DomainError(f"delta must be 0, 1 or -1, got {self.delta}")
        if len(self.kappa) != 3:
            raise DomainError("need exactly kappa_1, kappa_2, kappa_3")

    @classmethod
    def frenet(cls, kappa1, kappa3, delta=0):
        """Family with kappa_2 identically zero."""
        return cls(delta, (_family_poly(kappa1), Poly(), _family_poly(kappa3)))

    def at_lambda(self, lam):
        """Exact single-curve curvature data on the line lambda = lam."""
        polys = tuple(p.subs_u(as_fraction(lam)) for p in self.kappa)
        return CurvatureData.from_polys(self.delta, polys)

    def _carrier(self):
        # CurvatureData carrying the bivariate polynomials; the callables are
        # the lambda = 0 slice and are never used by the exact jet machinery.
        fns = tuple((lambda s, p=p: p.evalf(s, 0.0)) for p in self.kappa)
        return CurvatureData(self.delta, fns, self.kappa)

    def dual_jet_polys(self, r):
        """Co-moving dual jets d_0 .. d_r as 4-vectors of (t, u) polynomials."""
        return dual_coefficient_jets(self._carrier(), r)

    def detector(self):
        """det[d_0 .. d_3](t, u): zero exactly where the dual type leaves (1,2,3)."""
        d = self.dual_jet_polys(3)
        return poly_det([[d[j][i] for j in range(4)] for i in range(4)])


@dataclass(frozen=True)
class DiagonalFamily:
    """Chart-diagonal entries x_{i}^{i-1}(t, lambda) of an osculating family.

    The reconstruction of a full flag curve from its diagonal makes these
    three entries a complete set of invariants; the type at (t, lambda) is the
    partial-sum vector of 1 + (vanishing order of each entry's t-derivative).
    """

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(_family_poly(p) for p in self.entries))
        if len(self.entries) != 3:
            raise DomainError("need exactly three diagonal entries")

    def derivative_polys(self):
        return tuple(p.diff_t() for p in self.entries)

    def detector(self):
        """Product of the entry derivatives: zero where the type leaves (1,2,3)."""
        out = Poly.const(1)
        for p in self.derivative_polys():
            out = out * p
        return out


# -- scan records ---------------------------------------------------------------


@dataclass(frozen=True)
class BifurcationEvent:
    """A momentary special point of a one-parameter family."""

    lam: float
    t: float
    type: tuple
    class_: SingularityClass
    dual: tuple
    codim_d: int
    codim_c: int
    schubert: int
    confidence: str  # "exact" / "high" / "low"


@dataclass
class Stratum:
    """A persistent special-type branch, sampled once per lambda line."""

    type: tuple
    class_: SingularityClass
    params: np.ndarray  # rows (lambda, t)
    confidence: str


@dataclass
class ScanResult:
    """Events, strata and degenerate regions of a family scan."""

    events: list
    strata: list
    degenerate: bool = False
    degenerate_regions: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _event_from_type(lam, t, a, confidence):
    if a is None:
        return BifurcationEvent(float(lam), float(t), None, DEGENERATE, None,
                                None, None, None, confidence)
    return BifurcationEvent(
        float(lam),
        float(t),
        a,
        class_of(a),
        dual_type(a),
        codim_adapted(a),
        codim_osculating(a),
        schubert_number(a),
        confidence,
    )


# -- exact square-free part -------------------------------------------------------


def _trim(coeffs):
    out = list(coeffs)
    while out and not out[-1]:
        out.pop()
    return out


def _poly_divmod(a, b):
    """Quotient and remainder of Fraction coefficient lists (low degree first)."""
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        if len(r) < len(b) + k:
            continue
        c = r[len(b) + k - 1] / lead
        if c:
            q[k] = c
            for i, bi in enumerate(b):
                r[k + i] -= c * bi
        del r[len(b) + k - 1]
    return q, _trim(r)


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, rem = _poly_divmod(a, b)
        a, b = b, rem
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _squarefree(coeffs):
    """Square-free part of a Fraction coefficient list (monic, low degree first)."""
    p = _trim(coeffs)
    if len(p) <= 1:
        return p
    dp = [k * c for k, c in enumerate(p)][1:]
    g = _poly_gcd(p, dp)
    if len(g) <= 1:
        lead = p[-1]
        return [c / lead for c in p]
    q, rem = _poly_divmod(p, g)
    if rem:
        raise ArithmeticError("square-free division left a remainder")
    q = _trim(q)
    lead = q[-1]
    return [c / lead for c in q]


def _real_roots_squarefree(sq, lo, hi):
    """Polished real roots in [lo, hi] of a square-free Fraction coeff list."""
    if len(sq) <= 1:
        return []
    arr = np.array([float(c) for c in sq])
    scale = np.max(np.abs(arr))
    roots = np.roots(arr[::-1] / scale)
    poly = Poly.from_t_coeffs(sq)
    dpoly = poly.diff_t()
    span = abs(hi - lo)
    out = []
    for z in roots:
        if abs(z.imag) > 1e-7 * max(1.0, abs(z.real)) + 1e-10:
            continue
        x = float(z.real)
        for _ in range(60):
            fp = dpoly.evalf(x)
            if fp == 0.0:
                break
            step = poly.evalf(x) / fp
            x -= step
            if abs(step) < 1e-16 * max(1.0, abs(x)):
                break
        if lo - 1e-9 * span <= x <= hi + 1e-9 * span:
            out.append(min(max(x, lo), hi))
    out.sort()
    merged = []
    for x in out:
        if merged and abs(x - merged[-1]) < 1e-12 * max(1.0, abs(x)):
            continue
        merged.append(x)
    return merged


# -- the scan core ---------------------------------------------------------------


_RATIONAL_LADDER = (1, 10**3, 10**6, 10**9)


def _rational_candidates(x):
    """Small-denominator rationals near x, simplest first."""
    out = []
    fx = Fraction(float(x))
    for cap in _RATIONAL_LADDER:
        q = fx.limit_denominator(cap)
        if q not in out:
            out.append(q)
    return out


class _AdaptedTypeOracle:
    """Type detection for a curvature family, exact when the point is rational."""

    def __init__(self, family: CurvatureFamily, rank_tol, r_max=8):
        self.jets = family.dual_jet_polys(r_max)
        self.detector = family.detector()
        self.rank_tol = rank_tol
        self.r_max = r_max

    def _columns_exact(self, tq, lamq):
        return [[p.eval(tq, lamq) for p in d] for d in self.jets]

    def exact_type(self, tq, lamq):
        ranks = exact_rank_profile(self._columns_exact(tq, lamq))
        return _ranks_to_type(ranks, 4, self.r_max)

    def float_type(self, t, lam):
        cols = np.array([[p.evalf(t, lam) for p in d] for d in self.jets]).T
        # a jet column that vanishes at the point comes out ~1e-16 with a
        # perfectly clean direction; per-column normalization would promote it
        # to a full new direction, so kill columns far below the matrix scale
        norms = np.linalg.norm(cols, axis=0)
        cols[:, norms <= self.rank_tol * max(float(np.max(norms)), 1.0)] = 0.0
        ranks, min_gap = float_rank_profile(cols, self.rank_tol)
        a = _ranks_to_type(ranks, 4, self.r_max)
        confidence = "high" if min_gap >= RANK_GAP_MIN else "low"
        return a, confidence

    def classify(self, t, lam_q):
        """(type, confidence) at float t on the exact line u = lam_q."""
        line = self.detector.subs_u(lam_q)
        for tq in _rational_candidates(t):
            if line.eval(tq) == 0:
                try:
                    return self.exact_type(tq, lam_q), "exact"
                except (FiniteTypeError, DegeneracyError):
                    return None, "exact"
        try:
            return self.float_type(float(t), float(lam_q))
        except (FiniteTypeError, DegeneracyError):
            return None, "low"

    def classify_event(self, t, lam):
        """(type, confidence, t, lam) with exact snapping of a double point."""
        d_t = self.detector.diff_t()
        for lamq in _rational_candidates(lam):
            for tq in _rational_candidates(t):
                if self.detector.eval(tq, lamq) == 0 and d_t.eval(tq, lamq) == 0:
                    try:
                        a = self.exact_type(tq, lamq)
                    except (FiniteTypeError, DegeneracyError):
                        return None, "exact", float(tq), float(lamq)
                    return a, "exact", float(tq), float(lamq)
        try:
            a, confidence = self.float_type(float(t), float(lam))
        except (FiniteTypeError, DegeneracyError):
            return None, "low", float(t), float(lam)
        return a, confidence, float(t), float(lam)


class _OsculatingTypeOracle:
    """Type detection from diagonal-entry derivatives of an osculating family."""

    _MAX_ORDER = 9

    def __init__(self, family: DiagonalFamily, rank_tol):
        self.derivs = family.derivative_polys()
        self.detector = family.detector()
        self.rank_tol = rank_tol

    def _order_exact(self, p, tq, lamq):
        for k in range(self._MAX_ORDER):
            if p.eval(tq, lamq) != 0:
                return k
            p = p.diff_t()
        raise FiniteTypeError(0, self._MAX_ORDER)

    def _order_float(self, p, t, lam):
        scale = max(1.0, max((abs(float(c)) for c in p.c.values()), default=0.0))
        best_gap = np.inf
        for k in range(self._MAX_ORDER):
            val = abs(p.evalf(t, lam))
            if val > self.rank_tol * scale:
                return k, min(best_gap, val / (self.rank_tol * scale))
            if val > 0:
                best_gap = min(best_gap, self.rank_tol * scale / val)
            p = p.diff_t()
        raise FiniteTypeError(0, self._MAX_ORDER)

    def exact_type(self, tq, lamq):
        orders = [1 + self._order_exact(p, tq, lamq) for p in self.derivs]
        return type_from_diagonal_orders(orders)

    def float_type(self, t, lam):
        orders = []
        min_gap = np.inf
        for p in self.derivs:
            k, gap = self._order_float(p, t, lam)
            orders.append(1 + k)
            min_gap = min(min_gap, gap)
        a = type_from_diagonal_orders(orders)
        return a, ("high" if min_gap >= RANK_GAP_MIN else "low")

    def classify(self, t, lam_q):
        line = self.detector.subs_u(lam_q)
        for tq in _rational_candidates(t):
            if line.eval(tq) == 0:
                try:
                    return self.exact_type(tq, lam_q), "exact"
                except (FiniteTypeError, DegeneracyError):
                    return None, "exact"
        try:
            return self.float_type(float(t), float(lam_q))
        except (FiniteTypeError, DegeneracyError):
            return None, "low"

    def classify_event(self, t, lam):
        d_t = self.detector.diff_t()
        for lamq in _rational_candidates(lam):
            for tq in _rational_candidates(t):
                if self.detector.eval(tq, lamq) == 0 and d_t.eval(tq, lamq) == 0:
                    try:
                        a = self.exact_type(tq, lamq)
                    except (FiniteTypeError, DegeneracyError):
                        return None, "exact", float(tq), float(lamq)
                    return a, "exact", float(tq), float(lamq)
        try:
            a, confidence = self.float_type(float(t), float(lam))
        except (FiniteTypeError, DegeneracyError):
            return None, "low", float(t), float(lam)
        return a, confidence, float(t), float(lam)


def _line_roots(detector: Poly, lam_q, window):
    """(roots, degenerate) of the square-free detector on one lambda line."""
    line = detector.subs_u(lam_q)
    coeffs = _trim(line.t_coeffs())
    if not coeffs:
        return None, True
    sq = _squarefree(coeffs)
    return _real_roots_squarefree(sq, window[0], window[1]), False


def _match_roots(prev, cur, gap):
    """Greedy nearest matching between two sorted root lists."""
    pairs = []
    used_prev, used_cur = set(), set()
    cand = sorted(
        (abs(p - c), i, j) for i, p in enumerate(prev) for j, c in enumerate(cur)
    )
    for d, i, j in cand:
        if d > gap:
            break
        if i in used_prev or j in used_cur:
            continue
        used_prev.add(i)
        used_cur.add(j)
        pairs.append((i, j))
    return pairs, used_prev, used_cur


def _refine_event(detector, lam_lo, lam_hi, window, depth=48):
    """Bisect a root-count change to its (t, lambda), to ~1e-9 in lambda.

    Returns (t_estimate, lam_estimate) or None when the change is a root
    leaving through the window boundary rather than an interior collision.
    """
    roots_lo, _ = _line_roots(detector, lam_lo, window)
    roots_hi, _ = _line_roots(detector, lam_hi, window)
    for _ in range(depth):
        if abs(float(lam_hi - lam_lo)) <= 1e-9:
            break
        mid = (lam_lo + lam_hi) / 2
        roots_mid, degenerate = _line_roots(detector, mid, window)
        if degenerate:
            break
        if len(roots_mid) == len(roots_lo):
            lam_lo, roots_lo = mid, roots_mid
        else:
            lam_hi, roots_hi = mid, roots_mid
    lam_star = float(lam_lo + lam_hi) / 2.0
    span = window[1] - window[0]
    margin = 1e-3 * span
    rich, poor = (roots_lo, roots_hi) if len(roots_lo) > len(roots_hi) else (roots_hi, roots_lo)
    _, used_rich, _ = _match_roots(rich, poor, gap=0.05 * span)
    extra = [r for i, r in enumerate(rich) if i not in used_rich]
    if not extra:
        extra = rich
    if len(extra) >= 2:
        gaps = [(extra[i + 1] - extra[i], i) for i in range(len(extra) - 1)]
        _, i = min(gaps)
        t_star = 0.5 * (extra[i] + extra[i + 1])
    elif extra:
        t_star = extra[0]
    else:
        return None
    if t_star < window[0] + margin or t_star > window[1] - margin:
        return None
    # the collision point is a root of the t-derivative of the detector; a few
    # Newton steps there sharpen t well below the bisection's sqrt-width blur
    d_t = detector.diff_t().subs_u(Fraction(lam_star).limit_denominator(10**12))
    x = t_star
    for _ in range(80):
        fp = d_t.diff_t().evalf(x)
        if fp == 0.0:
            break
        step = d_t.evalf(x) / fp
        x -= step
        if abs(step) < 1e-15 * max(1.0, abs(x)):
            break
    if abs(x - t_star) < 0.05 * span:
        t_star = x
    return t_star, lam_star


def _scan_core(detector, oracle, t_grid, lambda_grid, chain_gap):
    t_grid = np.asarray(t_grid, dtype=float)
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    window = (float(t_grid[0]), float(t_grid[-1]))
    if window[1] <= window[0] or len(lambda_grid) < 2:
        raise DomainError("scan grids must be increasing with at least two lambda lines")
    if chain_gap is None:
        chain_gap = 12.0 * (window[1] - window[0]) / max(len(t_grid) - 1, 1)

    if detector.is_zero():
        return ScanResult(
            events=[],
            strata=[],
            degenerate=True,
            degenerate_regions=[{"lambda": None, "t_window": window}],
            meta={"reason": "detector vanishes identically"},
        )

    lam_fracs = [Fraction(float(l)) for l in lambda_grid]
    lines = []
    degenerate_regions = []
    for lam, lam_q in zip(lambda_grid, lam_fracs):
        roots, degenerate = _line_roots(detector, lam_q, window)
        if degenerate:
            degenerate_regions.append({"lambda": float(lam), "t_window": window})
            lines.append(None)
        else:
            lines.append(roots)

    # persistent strata: classify each root and chain across lines
    samples = []
    for lam, lam_q, roots in zip(lambda_grid, lam_fracs, lines):
        row = []
        if roots:
            for r in roots:
                a, confidence = oracle.classify(r, lam_q)
                row.append({"lam": float(lam), "t": float(r), "type": a,
                            "confidence": confidence})
        samples.append(row)

    strata = []
    open_chains = []
    for row in samples:
        next_open = []
        unmatched = list(range(len(row)))
        for chain in open_chains:
            best = None
            for idx in unmatched:
                s = row[idx]
                if s["type"] != chain["type"]:
                    continue
                d = abs(s["t"] - chain["last_t"])
                if d <= chain_gap and (best is None or d < best[0]):
                    best = (d, idx)
            if best is not None:
                idx = best[1]
                unmatched.remove(idx)
                chain["points"].append((row[idx]["lam"], row[idx]["t"]))
                chain["last_t"] = row[idx]["t"]
                chain["confidence"] = _weaker(chain["confidence"], row[idx]["confidence"])
                next_open.append(chain)
            else:
                strata.append(chain)
        for idx in unmatched:
            s = row[idx]
            next_open.append({"type": s["type"], "points": [(s["lam"], s["t"])],
                              "last_t": s["t"], "confidence": s["confidence"]})
        open_chains = next_open
    strata.extend(open_chains)
    strata_out = [
        Stratum(
            type=ch["type"],
            class_=class_of(ch["type"]) if ch["type"] is not None else DEGENERATE,
            params=np.array(ch["points"]),
            confidence=ch["confidence"],
        )
        for ch in strata
        if len(ch["points"]) >= 2
    ]

    # momentary events: interior root-count changes between adjacent lines
    events = []
    boundary = []
    for i in range(len(lines) - 1):
        if lines[i] is None or lines[i + 1] is None:
            continue
        if len(lines[i]) == len(lines[i + 1]):
            continue
        hit = _refine_event(detector, lam_fracs[i], lam_fracs[i + 1], window)
        if hit is None:
            boundary.append((float(lambda_grid[i]), float(lambda_grid[i + 1])))
            continue
        t_star, lam_star = hit
        a, confidence, t_fin, lam_fin = oracle.classify_event(t_star, lam_star)
        events.append(_event_from_type(lam_fin, t_fin, a, confidence))

    events = _dedup_events(events)
    events.sort(key=lambda e: (e.lam, e.t))
    strata_out.sort(key=lambda s: (s.params[0, 0], s.params[0, 1]))
    return ScanResult(
        events=events,
        strata=strata_out,
        degenerate=False,
        degenerate_regions=degenerate_regions,
        meta={"boundary_crossings": boundary, "chain_gap": float(chain_gap)},
    )


def _weaker(a, b):
    order = {"exact": 0, "high": 1, "low": 2}
    return a if order[a] >= order[b] else b


def _dedup_events(events, tol=1e-5):
    kept = []
    order = {"exact": 0, "high": 1, "low": 2}
    for ev in sorted(events, key=lambda e: order[e.confidence]):
        if any(abs(ev.lam - k.lam) <= tol and abs(ev.t - k.t) <= tol for k in kept):
            continue
        kept.append(ev)
    return kept


def scan_family(family: CurvatureFamily, t_grid, lambda_grid, tol=DEFAULT_RANK_TOL,
                chain_gap=None) -> ScanResult:
    """Bifurcation scan of a one-parameter family of framed curves.

    The detector det[d_0 .. d_3] of the frame dual's co-moving jets vanishes
    exactly where the dual type leaves (1, 2, 3).  Per lambda line its
    square-free part is solved for real roots (persistent strata); changes in
    the interior root count between neighbouring lines are bisected to the
    momentary event and snapped to exact rationals when possible.  The t grid
    fixes the window and the chaining scale; the roots themselves come from
    the polynomial, not the grid.
    """
    oracle = _AdaptedTypeOracle(family, tol)
    return _scan_core(oracle.detector, oracle, t_grid, lambda_grid, chain_gap)


def classify_osculating_scan(family: DiagonalFamily, t_grid, lambda_grid,
                             tol=DEFAULT_RANK_TOL, chain_gap=None) -> ScanResult:
    """Bifurcation scan of an osculating family given by chart diagonals.

    Same sweep as ``scan_family`` with the detector replaced by the product of
    the diagonal-entry derivatives, whose vanishing orders give the type
    directly as partial sums.  The admitted types are the full osculating
    list, so events outside the classified table come back Unresolved rather
    than Degenerate.
    """
    oracle = _OsculatingTypeOracle(family, tol)
    return _scan_core(oracle.detector, oracle, t_grid, lambda_grid, chain_gap)


# -- event table export ------------------------------------------------------------


EVENT_CSV_HEADER = "lambda,t,a1,a2,a3,class,codim_D,codim_C,schubert,confidence"


def export_events_csv(events, path):
    """Write bifurcation events as a deterministic CSV table."""
    rows = [EVENT_CSV_HEADER]
    for ev in sorted(events, key=lambda e: (e.lam, e.t)):
        a = ev.type if ev.type is not None else ("", "", "")
        rows.append(",".join([
            format_float(ev.lam),
            format_float(ev.t),
            str(a[0]), str(a[1]), str(a[2]),
            str(ev.class_),
            "" if ev.codim_d is None else str(ev.codim_d),
            "" if ev.codim_c is None else str(ev.codim_c),
            "" if ev.schubert is None else str(ev.schubert),
            ev.confidence,
        ]))
    atomic_write_text(path, "\n".join(rows) + "\n")


if __name__ == "__main__":
    fam = CurvatureFamily.frenet(1, Poly.t() * Poly.t() - Poly.u())
    res = scan_family(fam, np.linspace(-1, 1, 400), np.linspace(-0.2, 0.2, 81))
    print("events:")
    for ev in res.events:
        print(" ", ev)
    print("strata:", [(s.type, len(s.params)) for s in res.strata])
