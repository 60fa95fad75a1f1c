"""Scenario files: JSON descriptions of maps, fields and evaluation points.

Example::

    {
      "dimension": 2,
      "lambda": 0.3,
      "maps": {
        "f": {"expr": ["x1 + x2^2", "x2"]},
        "m": {"moebius": [[1, 0, 0], [0, 1, 0], [0.2, 0.1, 1]]},
        "a": {"affine": {"matrix": [[2, 0], [0, 1]], "offset": [0, 1]}},
        "h": {"compose": ["m", "f"]},
        "g": {"inverse": "f"}
      },
      "connection": {"kind": "pi", "entries": {"1,2,2": "x1"}},
      "operator": {"a2": {"1,1": "1 + x1"}, "a1": {"2": "x2"}, "a0": "3"},
      "potential": "x1^2",
      "points": [[0.3, 0.7]],
      "seed": 0,
      "tol": 1e-9
    }

A map may also be given as a bare list of component expressions. Index
labels are 1-based; a connection entry ``"k,i,j"`` given without its
``"k,j,i"`` partner is mirrored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .connection import ChristoffelField, ProjectiveField, flat_connection, pi_from_gamma
from .density import OperatorCoeffs
from .diffeo import (
    Affine,
    Composition,
    ExprDiffeo,
    Moebius,
    PolynomialDiffeo,
    invert,
)
from .errors import ParseError, ProjSchwarzError, ScenarioError
from .expr import parse_expression
from .fields import ConstantField, PolynomialField, sparse_field, zero_field


@dataclass
class Scenario:
    dimension: int
    maps: dict
    connection: object
    operator: object = None
    potential: object = None
    lam: float | None = None
    points: list = field(default_factory=list)
    seed: int = 0
    tol: float | None = None

    def map(self, name):
        if name not in self.maps:
            known = ", ".join(sorted(self.maps)) or "none"
            raise ScenarioError(f"unknown map {name!r} (defined: {known})")
        return self.maps[name]


def _require(cond, msg):
    if not cond:
        raise ScenarioError(msg)


def _expr_field(src, n):
    if isinstance(src, (int, float)) and not isinstance(src, bool):
        return ConstantField(n, float(src))
    _require(isinstance(src, str), f"expected an expression string, got {src!r}")
    return parse_expression(src, n)


def _build_map(name, spec, n, raw, built, stack):
    if name in built:
        return built[name]
    _require(name not in stack, f"map definitions form a cycle through {name!r}")
    stack = stack + [name]

    def ref(other):
        _require(isinstance(other, str), f"map {name!r}: references must be map names")
        _require(other in raw, f"map {name!r} refers to unknown map {other!r}")
        return _build_map(other, raw[other], n, raw, built, stack)

    if isinstance(spec, list):
        spec = {"expr": spec}
    _require(isinstance(spec, dict) and len(spec) == 1, f"map {name!r}: expected one of "
             "expr, moebius, affine, polynomial, compose, inverse")
    (kind, body), = spec.items()
    if kind == "expr":
        _require(isinstance(body, list) and len(body) == n,
                 f"map {name!r}: need {n} component expressions")
        f = ExprDiffeo(body, dim=n)
    elif kind == "moebius":
        m = np.asarray(body, dtype=float)
        _require(m.shape == (n + 1, n + 1), f"map {name!r}: projective matrix must be {n + 1}x{n + 1}")
        f = Moebius(m)
    elif kind == "affine":
        _require(isinstance(body, dict) and "matrix" in body, f"map {name!r}: affine needs a matrix")
        a = np.asarray(body["matrix"], dtype=float)
        _require(a.shape == (n, n), f"map {name!r}: affine matrix must be {n}x{n}")
        f = Affine(a, body.get("offset"))
    elif kind == "polynomial":
        _require(isinstance(body, dict) and {"exponents", "coeffs"} <= set(body),
                 f"map {name!r}: polynomial needs exponents and coeffs")
        f = PolynomialDiffeo(PolynomialField(n, body["exponents"], body["coeffs"]))
    elif kind == "compose":
        _require(isinstance(body, list) and body, f"map {name!r}: compose needs a list of names")
        f = Composition([ref(o) for o in body])
    elif kind == "inverse":
        f = invert(ref(body))
    else:
        raise ScenarioError(f"map {name!r}: unknown kind {kind!r}")
    built[name] = f
    return f


def _build_connection(spec, n):
    if spec is None:
        return flat_connection(n)
    _require(isinstance(spec, dict), "connection must be an object")
    kind = spec.get("kind", "pi")
    entries = spec.get("entries", {})
    _require(isinstance(entries, dict), "connection entries must be an object")
    if not entries:
        return flat_connection(n)
    fld = sparse_field(n, (n, n, n), entries, lambda s: parse_expression(s, n), [(1, 2)])
    if kind == "gamma":
        return pi_from_gamma(ChristoffelField(fld))
    if kind == "pi":
        return ProjectiveField(fld)
    raise ScenarioError(f"connection kind must be 'gamma' or 'pi', got {kind!r}")


def _build_operator(spec, n):
    if spec is None:
        return None
    _require(isinstance(spec, dict), "operator must be an object")
    parse = lambda s: parse_expression(s, n)  # noqa: E731
    a2 = sparse_field(n, (n, n), spec.get("a2", {}), parse, [(0, 1)])
    a1 = sparse_field(n, (n,), spec.get("a1", {}), parse)
    a0 = _expr_field(spec.get("a0", 0.0), n)
    return OperatorCoeffs(a2, a1, a0)


def load_scenario(source):
    """Build a :class:`Scenario` from a path, JSON text or a parsed dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else source
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    _require(isinstance(data, dict), "scenario must be a JSON object")
    n = data.get("dimension")
    _require(isinstance(n, int) and n >= 1, "dimension must be a positive integer")
    raw = data.get("maps", {})
    _require(isinstance(raw, dict), "maps must be an object")
    try:
        built = {}
        for name, spec in raw.items():
            _build_map(name, spec, n, raw, built, [])
        scenario = Scenario(
            dimension=n,
            maps=built,
            connection=_build_connection(data.get("connection"), n),
            operator=_build_operator(data.get("operator"), n),
            potential=None if data.get("potential") is None else _expr_field(data["potential"], n),
            lam=None if data.get("lambda") is None else float(data["lambda"]),
            points=[np.asarray(p, dtype=float) for p in data.get("points", [])],
            seed=int(data.get("seed", 0)),
            tol=None if data.get("tol") is None else float(data["tol"]),
        )
    except (ScenarioError, ParseError):
        raise
    except ProjSchwarzError as exc:
        raise ScenarioError(f"{type(exc).__name__}: {exc}") from exc
    for p in scenario.points:
        _require(p.shape == (n,), f"point {p.tolist()} does not have {n} coordinates")
        for name, f in scenario.maps.items():
            _require(f.in_domain(p), f"point {p.tolist()} is outside the domain of map {name!r}")
    return scenario


def zero_operator(n):
    return OperatorCoeffs(zero_field(n, (n, n)), zero_field(n, (n,)), zero_field(n))
