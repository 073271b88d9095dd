"""Run configuration: strict JSON in, fully resolved settings out.

The config file is plain JSON with a fixed vocabulary; unknown keys anywhere
are rejected rather than ignored so a typo cannot silently change a run.
Exact coefficients are written as decimal or fraction strings ("0.5", "1/3")
and parsed to rationals; bare JSON floats are refused in exact slots because
they would smuggle in binary rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classify import CurvatureFamily
from .curves import circle_curve, great_circle_curve, helix_curve, PolynomialCurve
from .errors import ConfigError
from .examples import BUILTIN_FIELDS, builtin_field
from .frames import CurvatureData, Frame, integrate_structure_equation
from .ratpoly import Poly
from .spaceform import space_form

__all__ = ["RunConfig", "DEFAULTS"]


DEFAULTS = {
    "geometry": "euclidean",
    "n": 2,
    "curve": {"kind": "builtin", "name": "helix-frenet"},
    "grids": {
        "t": [-1.0, 1.0, 200],
        "s": [-1.5, 1.5, 50],
        "lambda": [-0.2, 0.2, 81],
    },
    "tolerances": {"rank_tol": 1e-8, "ode_tol": 1e-10, "mesh_tol": 1e-9},
    "outputs": {"mesh": "envelope.obj", "events": "events.csv", "report": "report.json"},
    "seed": 0,
}

_GEOMETRIES = ("euclidean", "spherical", "hyperbolic")
_BUILTIN_CURVES = {
    "circle": circle_curve,
    "helix": helix_curve,
    "great-circle": great_circle_curve,
}


def _check_keys(mapping, allowed, where):
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where} must be an object, got {type(mapping).__name__}")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}; allowed: {sorted(allowed)}")


def _exact_number(value, where):
    """int or decimal/fraction string -> Fraction; bare floats are refused."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{where}: cannot parse {value!r} as an exact number") from exc
    if isinstance(value, float):
        raise ConfigError(
            f"{where}: write exact coefficients as strings (got float {value!r})"
        )
    raise ConfigError(f"{where}: expected an exact number, got {type(value).__name__}")


def _parse_kappa(spec, where):
    """Univariate coefficient list or {'i' / 'i,j': coeff} term map -> Poly."""
    if isinstance(spec, list):
        return Poly.from_t_coeffs([_exact_number(c, where) for c in spec])
    if isinstance(spec, dict):
        terms = {}
        for key, coeff in spec.items():
            parts = str(key).split(",")
            if len(parts) not in (1, 2):
                raise ConfigError(f"{where}: term key {key!r} is not 'i' or 'i,j'")
            try:
                i = int(parts[0])
                j = int(parts[1]) if len(parts) == 2 else 0
            except ValueError as exc:
                raise ConfigError(f"{where}: term key {key!r} is not integral") from exc
            if i < 0 or j < 0:
                raise ConfigError(f"{where}: term key {key!r} has negative degree")
            terms[(i, j)] = _exact_number(coeff, f"{where}[{key}]")
        return Poly(terms)
    raise ConfigError(f"{where}: expected a coefficient list or a term map")


def _parse_grid(value, where):
    if (not isinstance(value, list) or len(value) != 3
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise ConfigError(f"{where} must be [lo, hi, count]")
    lo, hi, count = float(value[0]), float(value[1]), value[2]
    if int(count) != count or int(count) < 2:
        raise ConfigError(f"{where}: count must be an integer >= 2")
    if not lo < hi:
        raise ConfigError(f"{where}: need lo < hi")
    return [lo, hi, int(count)]


def _parse_curve(spec):
    _check_keys(spec, {"kind", "name", "coefficients", "delta", "kappa"}, "curve")
    kind = spec.get("kind")
    if kind == "builtin":
        name = spec.get("name")
        if name not in _BUILTIN_CURVES and name not in BUILTIN_FIELDS:
            known = sorted(_BUILTIN_CURVES) + sorted(BUILTIN_FIELDS)
            raise ConfigError(f"curve: unknown builtin {name!r}; choose from {known}")
        return {"kind": "builtin", "name": name}
    if kind == "polynomial":
        comps = spec.get("coefficients")
        if not isinstance(comps, list) or len(comps) < 3:
            raise ConfigError("curve: polynomial needs >= 3 component coefficient lists")
        parsed = []
        for idx, comp in enumerate(comps):
            if not isinstance(comp, list) or not comp:
                raise ConfigError(f"curve: component {idx} must be a nonempty list")
            parsed.append([str(_exact_number(c, f"curve.coefficients[{idx}]")) for c in comp])
        return {"kind": "polynomial", "coefficients": parsed}
    if kind == "curvature":
        delta = spec.get("delta")
        if delta not in (0, 1, -1):
            raise ConfigError("curve: curvature delta must be 0, 1 or -1")
        kappa = spec.get("kappa")
        if not isinstance(kappa, list) or len(kappa) != 3:
            raise ConfigError("curve: curvature needs exactly three kappa entries")
        polys = [_parse_kappa(k, f"curve.kappa[{i}]") for i, k in enumerate(kappa)]
        return {
            "kind": "curvature",
            "delta": delta,
            "kappa": [{f"{i},{j}": str(v) for (i, j), v in p.c.items()} for p in polys],
        }
    raise ConfigError(
        f"curve: kind must be 'builtin', 'polynomial' or 'curvature', got {kind!r}"
    )


@dataclass(frozen=True)
class RunConfig:
    """Fully validated, fully defaulted run settings."""

    geometry: str
    n: int
    curve: dict
    grids: dict
    tolerances: dict
    outputs: dict
    seed: int

    # -- construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        _check_keys(data, set(DEFAULTS), "config")
        geometry = data.get("geometry", DEFAULTS["geometry"])
        if geometry not in _GEOMETRIES:
            raise ConfigError(f"geometry must be one of {_GEOMETRIES}, got {geometry!r}")
        n = data.get("n", DEFAULTS["n"])
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ConfigError(f"n must be a positive integer, got {n!r}")

        curve = _parse_curve(data.get("curve", DEFAULTS["curve"]))

        grids_in = data.get("grids", {})
        _check_keys(grids_in, set(DEFAULTS["grids"]), "grids")
        grids = {key: _parse_grid(grids_in.get(key, default), f"grids.{key}")
                 for key, default in DEFAULTS["grids"].items()}

        tol_in = data.get("tolerances", {})
        _check_keys(tol_in, set(DEFAULTS["tolerances"]), "tolerances")
        tolerances = {}
        for key, default in DEFAULTS["tolerances"].items():
            value = tol_in.get(key, default)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"tolerances.{key} must be a positive number")
            tolerances[key] = float(value)

        out_in = data.get("outputs", {})
        _check_keys(out_in, set(DEFAULTS["outputs"]), "outputs")
        outputs = {}
        for key, default in DEFAULTS["outputs"].items():
            value = out_in.get(key, default)
            if not isinstance(value, str) or not value:
                raise ConfigError(f"outputs.{key} must be a nonempty path string")
            outputs[key] = value

        seed = data.get("seed", DEFAULTS["seed"])
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError(f"seed must be an integer, got {seed!r}")

        return cls(geometry=geometry, n=n, curve=curve, grids=grids,
                   tolerances=tolerances, outputs=outputs, seed=seed)

    @classmethod
    def from_text(cls, text) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_text(text)

    # -- resolved view -------------------------------------------------------

    def resolved(self) -> dict:
        """The complete effective config; re-running from it reproduces a run."""
        return {
            "geometry": self.geometry,
            "n": self.n,
            "curve": self.curve,
            "grids": self.grids,
            "tolerances": self.tolerances,
            "outputs": self.outputs,
            "seed": self.seed,
        }

    # -- derived objects ------------------------------------------------------

    def space(self):
        return space_form(self.geometry, self.n)

    def _axis(self, name):
        lo, hi, count = self.grids[name]
        return np.linspace(lo, hi, count)

    def t_grid(self):
        return self._axis("t")

    def s_grid(self):
        return self._axis("s")

    def lambda_grid(self):
        return self._axis("lambda")

    @property
    def rank_tol(self):
        return self.tolerances["rank_tol"]

    @property
    def ode_tol(self):
        return self.tolerances["ode_tol"]

    @property
    def mesh_tol(self):
        return self.tolerances["mesh_tol"]

    def _require_n2(self, what):
        if self.n != 2:
            raise ConfigError(f"{what} is wired for n = 2 (4x4 frames); config has n = {self.n}")

    def _kappa_polys(self):
        return tuple(
            Poly({tuple(int(p) for p in key.split(",")): Fraction(coeff)
                  for key, coeff in term_map.items()})
            for term_map in self.curve["kappa"]
        )

    def curvature_family(self) -> CurvatureFamily:
        """The lambda-dependent curvature model (scan subcommand)."""
        self._require_n2("scanning")
        if self.curve["kind"] != "curvature":
            raise ConfigError("scanning needs a curve of kind 'curvature'")
        return CurvatureFamily(self.curve["delta"], self._kappa_polys())

    def build_curve(self):
        """A bare curve object, for type detection and osculating frames."""
        kind = self.curve["kind"]
        if kind == "polynomial":
            return PolynomialCurve([[Fraction(c) for c in comp]
                                    for comp in self.curve["coefficients"]])
        if kind == "builtin":
            name = self.curve["name"]
            if name in _BUILTIN_CURVES:
                return _BUILTIN_CURVES[name]()
            return builtin_field(name)[0]
        raise ConfigError("curvature-data configs define a frame field, not a bare curve")

    def build_field(self, lam=None):
        """(curve, field): built-in framed curves or integrated curvature data.

        curve is None for curvature data (the frame field is the whole datum).
        """
        self._require_n2("frame construction")
        kind = self.curve["kind"]
        if kind == "builtin" and self.curve["name"] in BUILTIN_FIELDS:
            nodes = self.t_grid()
            return builtin_field(self.curve["name"], nodes)
        if kind == "curvature":
            polys = self._kappa_polys()
            if lam is not None:
                polys = tuple(p.subs_u(Fraction(float(lam))) for p in polys)
            elif any(p.deg_u() > 0 for p in polys):
                polys = tuple(p.subs_u(0) for p in polys)
            curv = CurvatureData.from_polys(self.curve["delta"], polys)
            sf = self.space()
            t = self.t_grid()
            field = integrate_structure_equation(
                Frame(np.eye(self.n + 2), sf), curv, (float(t[0]), float(t[-1])),
                tol=self.ode_tol, nodes=t,
            )
            return None, field
        raise ConfigError(
            f"no frame construction for curve spec {self.curve!r}; use a framed "
            f"builtin ({sorted(BUILTIN_FIELDS)}) or curvature data"
        )
