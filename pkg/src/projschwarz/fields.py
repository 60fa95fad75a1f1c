"""Scalar and tensor fields on R^n that can be expanded as jets.

Every field has a ``shape`` (``()`` for scalars), a dimension ``dim`` and
two methods: ``jet(x, order)`` returning a :class:`Jet` of that shape based at
``x``, and ``value(x)`` returning the plain array.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, EvaluationError, JetError
from .jet import Jet, _monomial_table, _multi_indices, coordinate_jets, jet_space


class Field:
    dim: int
    shape: tuple = ()

    def jet(self, x, order):
        raise NotImplementedError

    def value(self, x):
        v = self.jet(np.asarray(x, dtype=float), 0).value
        return np.asarray(v)

    @property
    def is_zero(self):
        return False


class ExprField(Field):
    """Scalar field given by a parsed expression tree."""

    def __init__(self, tree, dim, source=None):
        self.tree = tree
        self.dim = dim
        self.shape = ()
        self.source = source if source is not None else str(tree)

    def __repr__(self):
        return f"ExprField({self.source!r})"

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        if order == 0:
            space = jet_space(self.dim, 0)
            return Jet.constant(space, self.evaluate(x), x)
        X = coordinate_jets(x, order)
        out = self.tree.evaluate(list(X))
        if not isinstance(out, Jet):
            return Jet.constant(X.space, out, x)
        return out

    def evaluate(self, x):
        try:
            return float(self.tree.evaluate([float(v) for v in x]))
        except (ZeroDivisionError, OverflowError) as exc:
            raise EvaluationError(f"cannot evaluate {self.source!r} at {list(x)}") from exc

    def value(self, x):
        return np.asarray(self.evaluate(x))


class ConstantField(Field):
    def __init__(self, dim, value):
        self.dim = dim
        self.const = np.asarray(value, dtype=float)
        self.shape = self.const.shape

    def jet(self, x, order):
        return Jet.constant(jet_space(self.dim, order), self.const, x)

    @property
    def is_zero(self):
        return not np.any(self.const)


def zero_field(dim, shape=()):
    return ConstantField(dim, np.zeros(shape))


class PolynomialField(Field):
    """Tensor field with polynomial components.

    ``coeffs[..., m]`` multiplies the monomial ``x**exponents[m]``.
    """

    def __init__(self, dim, exponents, coeffs):
        self.dim = dim
        self.exponents = [tuple(int(e) for e in a) for a in exponents]
        for a in self.exponents:
            if len(a) != dim or min(a, default=0) < 0:
                raise ValueError(f"bad exponent {a} for dimension {dim}")
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape[-1] != len(self.exponents):
            raise ValueError("last axis of coeffs must match the number of monomials")
        self.shape = self.coeffs.shape[:-1]
        self.degree = max((sum(a) for a in self.exponents), default=0)
        position = {a: p for p, a in enumerate(_multi_indices(dim, self.degree))}
        self._rows = np.array([position[a] for a in self.exponents], dtype=np.intp)

    @classmethod
    def dense(cls, dim, degree, coeffs):
        """All monomials of total degree <= ``degree`` in graded order."""
        return cls(dim, _multi_indices(dim, degree), coeffs)

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        space = jet_space(self.dim, order)
        coords = np.zeros((self.dim, space.size))
        coords[:, 0] = x
        if order:
            coords[:, 1 : self.dim + 1] = np.eye(self.dim)
        table = _monomial_table(space, coords, self.dim, self.degree)
        return Jet(space, self.coeffs @ table[self._rows], x)

    def evaluate_on(self, X):
        """Evaluate the polynomial on ring elements ``X`` (floats or jets).

        Returns a nested list matching ``shape``; used to cross-check jet
        composition by direct substitution.
        """
        monos = []
        for a in self.exponents:
            term = 1.0
            for xj, e in zip(X, a):
                for _ in range(e):
                    term = term * xj
            monos.append(term)

        def build(idx):
            if len(idx) == len(self.shape):
                out = 0.0
                for c, m in zip(self.coeffs[idx], monos):
                    if c != 0:
                        out = out + float(c) * m
                return out
            return [build(idx + (k,)) for k in range(self.shape[len(idx)])]

        return build(())

    def to_expressions(self):
        """Component expression strings (grammar of :mod:`projschwarz.expr`)."""
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            parts = []
            for a, c in zip(self.exponents, self.coeffs[idx]):
                if c == 0:
                    continue
                mono = "*".join(
                    f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(a) if e
                )
                parts.append(f"({float(c)!r})" + (f"*{mono}" if mono else ""))
            out[idx] = " + ".join(parts) if parts else "0"
        return out

    @property
    def is_zero(self):
        return not np.any(self.coeffs)


class StackedField(Field):
    """Tensor field assembled from an object array of scalar fields."""

    def __init__(self, dim, components):
        self.dim = dim
        self.components = np.asarray(components, dtype=object)
        self.shape = self.components.shape

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        space = jet_space(self.dim, order)
        coeffs = np.zeros(self.shape + (space.size,))
        for idx in np.ndindex(*self.shape):
            comp = self.components[idx]
            if comp is None:
                continue
            coeffs[idx] = comp.jet(x, order).coeffs
        return Jet(space, coeffs, x)

    @property
    def is_zero(self):
        return all(
            c is None or c.is_zero for c in self.components.reshape(-1)
        )


class FunctionField(Field):
    """Field defined by a callable ``fn(x, order) -> Jet``."""

    def __init__(self, dim, shape, fn, name="field"):
        self.dim = dim
        self.shape = tuple(shape)
        self.fn = fn
        self.name = name

    def __repr__(self):
        return f"FunctionField({self.name})"

    def jet(self, x, order):
        out = self.fn(np.asarray(x, dtype=float), order)
        if out.shape != self.shape:
            raise JetError(f"{self.name} produced shape {out.shape}, expected {self.shape}")
        return out


def sparse_field(dim, shape, entries, parse_fn, symmetric_pairs=()):
    """Build a :class:`StackedField` from ``{"i,j,...": expression}`` (1-based).

    ``symmetric_pairs`` lists axis pairs to mirror when only one of two
    transposed entries is given; if both are given they are kept as-is, so
    asymmetric input is detected downstream rather than silently repaired.
    """
    comps = np.full(shape, None, dtype=object)
    given = {}
    for key, src in entries.items():
        try:
            idx = tuple(int(k) - 1 for k in str(key).split(","))
        except ValueError as exc:
            raise DomainError(f"bad index label {key!r}") from exc
        if len(idx) != len(shape) or any(not 0 <= i < s for i, s in zip(idx, shape)):
            raise DomainError(f"index label {key!r} out of range for shape {shape}")
        comps[idx] = parse_fn(src) if isinstance(src, str) else ConstantField(dim, float(src))
        given[idx] = True
    for idx in list(given):
        for p, q in symmetric_pairs:
            mirror = list(idx)
            mirror[p], mirror[q] = mirror[q], mirror[p]
            mirror = tuple(mirror)
            if mirror not in given:
                comps[mirror] = comps[idx]
    return StackedField(dim, comps)
