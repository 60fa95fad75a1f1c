"""Concrete local diffeomorphisms of R^n and their jets.

All maps live in one global chart. A :class:`Diffeo` evaluates on float
points (``f(x)``) and expands as a :class:`~projschwarz.jet.MapJet`
(``f.jet(x, order)``); :func:`jet_at` adds the domain and Jacobian checks.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, DomainError, EvaluationError, SingularJacobianError
from .expr import parse
from .fields import PolynomialField
from .jet import (
    Jet,
    MapJet,
    contract,
    coordinate_jets,
    inv,
    is_local_diffeo,
    jet_space,
    map_compose,
    map_inverse,
    recenter,
)

DENOMINATOR_ATOL = 1e-9
NEWTON_MAXITER = 50
NEWTON_TOL = 1e-12


class Diffeo:
    """Base class. Subclasses implement ``_eval`` and ``_jet``."""

    dim: int

    def __call__(self, x):
        x = self._point(x)
        return np.asarray(self._eval(x), dtype=float)

    def jet(self, x, order):
        x = self._point(x)
        return self._jet(x, order)

    def in_domain(self, x):
        try:
            self(x)
        except (DomainError, EvaluationError, ConvergenceError):
            return False
        return True

    def _point(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            raise DomainError(f"expected a point in R^{self.dim}, got shape {x.shape}")
        return x

    def _eval(self, x):
        raise NotImplementedError

    def _jet(self, x, order):
        raise NotImplementedError

    def __matmul__(self, other):
        return compose_diffeos(self, other)


def jet_at(f, x, order):
    """Order-``order`` jet of ``f`` at ``x``.

    Raises :class:`DomainError` outside the domain and
    :class:`SingularJacobianError` where ``f`` is not a local diffeomorphism.
    Orientation-reversing points are accepted; see :func:`orientation`.
    """
    F = f.jet(x, order)
    if order >= 1 and not is_local_diffeo(F):
        raise SingularJacobianError(
            f"Jacobian of {f!r} is singular at {np.asarray(x).tolist()}"
        )
    return F


def orientation(F):
    """+1 or -1: sign of the Jacobian determinant of a map jet."""
    return 1 if np.linalg.det(F.linear_part()) > 0 else -1


class Identity(Diffeo):
    def __init__(self, dim):
        self.dim = dim

    def __repr__(self):
        return f"Identity({self.dim})"

    def _eval(self, x):
        return x.copy()

    def _jet(self, x, order):
        return coordinate_jets(x, order)


def identity(dim):
    return Identity(dim)


class Moebius(Diffeo):
    """Linear-fractional map ``x -> (A x + b) / (c.x + d)``.

    ``matrix`` is the ``(n+1) x (n+1)`` array ``[[A, b], [c, d]]``; its scale is
    irrelevant and not normalized.
    """

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError(f"projective matrix must be square of size n+1 >= 2, got {m.shape}")
        n = m.shape[0] - 1
        scale = np.max(np.abs(m))
        if scale == 0 or abs(np.linalg.det(m)) < 1e-12 * scale ** (n + 1):
            raise SingularJacobianError("projective matrix is singular")
        self.dim = n
        self.matrix = m

    def __repr__(self):
        return f"Moebius({self.matrix.tolist()})"

    def _denominator(self, x):
        den = self.matrix[-1, :-1] @ x + self.matrix[-1, -1]
        if abs(den) < DENOMINATOR_ATOL:
            raise DomainError(f"{self!r} is undefined at {x.tolist()} (c.x + d = 0)")
        return den

    def _eval(self, x):
        den = self._denominator(x)
        return (self.matrix[:-1, :-1] @ x + self.matrix[:-1, -1]) / den

    def _jet(self, x, order):
        self._denominator(x)
        X = coordinate_jets(x, order)
        num = contract("ij,j->i", self.matrix[:-1, :-1], X) + self.matrix[:-1, -1]
        den = contract("j,j->", self.matrix[-1, :-1], X) + self.matrix[-1, -1]
        return MapJet.from_jet(num * inv(den))


def make_moebius(matrix):
    return Moebius(matrix)


class Affine(Diffeo):
    """``x -> A x + b``."""

    def __init__(self, matrix, offset=None):
        a = np.atleast_2d(np.asarray(matrix, dtype=float))
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("affine matrix must be square")
        if abs(np.linalg.det(a)) < 1e-12 * max(np.max(np.abs(a)), 1e-300) ** n:
            raise SingularJacobianError("affine matrix is singular")
        self.dim = n
        self.matrix = a
        self.offset = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)

    def __repr__(self):
        return f"Affine({self.matrix.tolist()}, {self.offset.tolist()})"

    def _eval(self, x):
        return self.matrix @ x + self.offset

    def _jet(self, x, order):
        X = coordinate_jets(x, order)
        return MapJet.from_jet(contract("ij,j->i", self.matrix, X) + self.offset)


def make_affine(matrix, offset=None):
    return Affine(matrix, offset)


class ExprDiffeo(Diffeo):
    """Map whose components are expressions in ``x1 .. xn``."""

    def __init__(self, components, dim=None):
        components = list(components)
        self.dim = len(components) if dim is None else dim
        if len(components) != self.dim:
            raise ValueError(f"need {self.dim} component expressions, got {len(components)}")
        self.sources = [c if isinstance(c, str) else str(c) for c in components]
        self.trees = [parse(c, self.dim) if isinstance(c, str) else c for c in components]

    def __repr__(self):
        return f"ExprDiffeo({self.sources})"

    def _eval(self, x):
        env = [float(v) for v in x]
        try:
            return np.array([float(t.evaluate(env)) for t in self.trees])
        except EvaluationError as exc:
            raise DomainError(str(exc)) from exc

    def _jet(self, x, order):
        X = list(coordinate_jets(x, order))
        space = jet_space(self.dim, order)
        comps = []
        try:
            for t in self.trees:
                out = t.evaluate(X)
                comps.append(out if isinstance(out, Jet) else Jet.constant(space, out))
        except EvaluationError as exc:
            raise DomainError(str(exc)) from exc
        return MapJet(space, np.stack([c.coeffs for c in comps]), x)


class PolynomialDiffeo(Diffeo):
    """Map with polynomial components, backed by a :class:`PolynomialField`."""

    def __init__(self, field):
        if field.shape != (field.dim,):
            raise ValueError("polynomial map needs a field of shape (n,)")
        self.dim = field.dim
        self.field = field

    def __repr__(self):
        return f"PolynomialDiffeo({list(self.field.to_expressions())})"

    def _eval(self, x):
        return self.field.value(x)

    def _jet(self, x, order):
        return MapJet.from_jet(self.field.jet(x, order))

    def to_expressions(self):
        return list(self.field.to_expressions())


class CallableDiffeo(Diffeo):
    """Map given by a Python function that works on floats and on jets.

    ``fn`` receives a sequence of n coordinates (floats or scalar jets) and
    returns a sequence of n components, e.g.
    ``CallableDiffeo(lambda x: [exp(x[0])], 1)`` with :func:`projschwarz.jet.exp`.
    """

    def __init__(self, fn, dim, name=None):
        self.fn = fn
        self.dim = dim
        self.name = name or getattr(fn, "__name__", "fn")

    def __repr__(self):
        return f"CallableDiffeo({self.name})"

    def _eval(self, x):
        return np.array([float(v) for v in self.fn([float(v) for v in x])])

    def _jet(self, x, order):
        X = list(coordinate_jets(x, order))
        space = X[0].space
        comps = [c if isinstance(c, Jet) else Jet.constant(space, c) for c in self.fn(X)]
        return MapJet(space, np.stack([c.coeffs for c in comps]), x)


class Composition(Diffeo):
    """``maps[0] o maps[1] o ... o maps[-1]``."""

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise ValueError("empty composition")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise ValueError(f"cannot compose maps of dimensions {sorted(dims)}")
        self.dim = maps[0].dim
        self.maps = maps

    def __repr__(self):
        return " o ".join(repr(m) for m in self.maps)

    def _eval(self, x):
        for m in reversed(self.maps):
            x = m(x)
        return x

    def _jet(self, x, order):
        F = self.maps[-1].jet(x, order)
        for m in reversed(self.maps[:-1]):
            F = map_compose(m.jet(F.value, order), F)
        return F


def compose_diffeos(f, g):
    """The map ``f o g``."""
    parts = []
    for m in (f, g):
        parts.extend(m.maps if isinstance(m, Composition) else [m])
    return Composition(parts)


class Inverse(Diffeo):
    """Pointwise local inverse of ``f``: Newton for values, jet reversion for jets."""

    def __init__(self, f, guess=None):
        self.f = f
        self.dim = f.dim
        self.guess = guess

    def __repr__(self):
        return f"Inverse({self.f!r})"

    def _solve(self, y):
        x = np.array(y if self.guess is None else self.guess(y), dtype=float)
        for _ in range(NEWTON_MAXITER):
            F = self.f.jet(x, 1)
            resid = F.value - y
            if np.max(np.abs(resid)) <= NEWTON_TOL * max(1.0, np.max(np.abs(y))):
                return x
            if not is_local_diffeo(F):
                break
            x = x - np.linalg.solve(F.linear_part(), resid)
        raise ConvergenceError(f"could not invert {self.f!r} near {y.tolist()}")

    def _eval(self, y):
        return self._solve(y)

    def _jet(self, y, order):
        x = self._solve(y)
        F = self.f.jet(x, order)
        if order == 0:
            return MapJet(F.space, x[:, None], y)
        G = map_inverse(F)
        return MapJet.from_jet(recenter(G, y))


def invert(f):
    """Inverse map; exact for structured maps, pointwise Newton otherwise."""
    if isinstance(f, Identity):
        return f
    if isinstance(f, Moebius):
        return Moebius(np.linalg.inv(f.matrix))
    if isinstance(f, Affine):
        a_inv = np.linalg.inv(f.matrix)
        return Affine(a_inv, -a_inv @ f.offset)
    if isinstance(f, Composition):
        return Composition([invert(m) for m in reversed(f.maps)])
    if isinstance(f, Inverse):
        return f.f
    return Inverse(f)


def polynomial_map(dim, degree, coeffs):
    return PolynomialDiffeo(PolynomialField.dense(dim, degree, coeffs))
