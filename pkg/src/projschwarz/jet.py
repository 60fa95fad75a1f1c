"""Truncated multivariate Taylor series ("jets").

A :class:`Jet` stores the Taylor coefficients ``d^a f(x0) / a!`` of one or
more functions of ``n`` variables, for all multi-indices ``|a| <= K``. The
coefficient axis is always the *last* axis of :attr:`Jet.coeffs`; any leading
axes make the jet tensor-valued, so a whole Christoffel array or a Jacobian
matrix is a single ``Jet`` and tensor formulas are written with
:func:`contract`, an ``einsum`` over the jet ring.

Multi-indices are laid out in graded-lexicographic order, so the space of
order ``K - 1`` is a prefix of the space of order ``K`` and truncation is a
slice.

Example::

    >>> X = coordinate_jets([2.0, 3.0], 3)
    >>> (X[0] * X[1]).to_dict()
    {(0, 0): 6.0, (1, 0): 3.0, (0, 1): 2.0, (1, 1): 1.0}
"""

from __future__ import annotations

import itertools
import math
import string
from functools import lru_cache

import numpy as np

from .errors import JetError, SingularJacobianError

MAX_DIM = 8
MAX_ORDER = 6

# |det A| < SINGULAR_RTOL * (max row norm)**n counts as singular.
SINGULAR_RTOL = 1e-9
BASE_ATOL = 1e-12


def _multi_indices(n, order):
    out = []
    for degree in range(order + 1):
        # lexicographically descending within a degree: (2,0), (1,1), (0,2)
        level = [
            a
            for a in itertools.product(range(degree, -1, -1), repeat=n)
            if sum(a) == degree
        ]
        out.extend(level)
    return out


class JetSpace:
    """Index bookkeeping for jets of ``n`` variables truncated at ``order``.

    Obtain instances through :func:`jet_space`; they are cached.
    """

    def __init__(self, n, order):
        if not 1 <= n <= MAX_DIM:
            raise JetError(f"dimension must be in 1..{MAX_DIM}, got {n}")
        if not 0 <= order <= MAX_ORDER:
            raise JetError(f"order must be in 0..{MAX_ORDER}, got {order}")
        self.n = n
        self.order = order
        self.indices = _multi_indices(n, order)
        self.size = len(self.indices)
        self.position = {a: p for p, a in enumerate(self.indices)}
        self.degrees = np.array([sum(a) for a in self.indices])
        self.factorials = np.array(
            [math.prod(math.factorial(k) for k in a) for a in self.indices], dtype=float
        )

        left, right, target = [], [], []
        for p, a in enumerate(self.indices):
            for q, b in enumerate(self.indices):
                if self.degrees[p] + self.degrees[q] > order:
                    continue
                c = tuple(x + y for x, y in zip(a, b))
                left.append(p)
                right.append(q)
                target.append(self.position[c])
        self._left = np.array(left, dtype=np.intp)
        self._right = np.array(right, dtype=np.intp)
        scatter = np.zeros((len(target), self.size))
        scatter[np.arange(len(target)), target] = 1.0
        self._scatter = scatter

        # derivative tables: lower space index -> (source index, factor)
        self._deriv = []
        if order >= 1:
            lower = self.indices[: int(np.sum(self.degrees <= order - 1))]
            for i in range(n):
                src = []
                fac = []
                for b in lower:
                    a = list(b)
                    a[i] += 1
                    src.append(self.position[tuple(a)])
                    fac.append(float(a[i]))
                self._deriv.append((np.array(src, dtype=np.intp), np.array(fac)))

    def __repr__(self):
        return f"JetSpace(n={self.n}, order={self.order})"

    def product(self, a, b):
        """Truncated Cauchy product of raw coefficient arrays (broadcasting)."""
        return (a[..., self._left] * b[..., self._right]) @ self._scatter

    def lower(self, order):
        return jet_space(self.n, order)


@lru_cache(maxsize=None)
def jet_space(n, order):
    return JetSpace(n, order)


def _as_base(base):
    if base is None:
        return None
    return np.asarray(base, dtype=float)


class Jet:
    """A (possibly tensor-valued) truncated Taylor expansion.

    ``coeffs[..., p]`` is the Taylor coefficient of ``space.indices[p]``.
    ``base`` is the expansion point when known; arithmetic does not check it.
    """

    __slots__ = ("space", "coeffs", "base", "_cache")
    __array_ufunc__ = None

    def __init__(self, space, coeffs, base=None):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim == 0 or coeffs.shape[-1] != space.size:
            raise JetError(
                f"coefficient axis has length {coeffs.shape[-1:] or 0}, "
                f"expected {space.size} for {space!r}"
            )
        self.space = space
        self.coeffs = coeffs
        self.base = _as_base(base)
        self._cache = None

    # construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, space, value, base=None):
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros(value.shape + (space.size,))
        coeffs[..., 0] = value
        return cls(space, coeffs, base)

    @classmethod
    def zeros(cls, space, shape=(), base=None):
        return cls(space, np.zeros(tuple(shape) + (space.size,)), base)

    @classmethod
    def from_dict(cls, n, order, terms, base=None):
        """Build a scalar jet from ``{multi_index: taylor_coefficient}``."""
        space = jet_space(n, order)
        coeffs = np.zeros(space.size)
        for alpha, c in terms.items():
            alpha = tuple(alpha)
            if len(alpha) != n:
                raise JetError(f"multi-index {alpha} does not have {n} components")
            if alpha not in space.position:
                raise JetError(f"multi-index {alpha} exceeds order {order}")
            coeffs[space.position[alpha]] = c
        return cls(space, coeffs, base)

    # basic properties ------------------------------------------------------

    @property
    def dim(self):
        return self.space.n

    @property
    def order(self):
        return self.space.order

    @property
    def shape(self):
        return self.coeffs.shape[:-1]

    @property
    def value(self):
        v = self.coeffs[..., 0]
        return float(v) if v.ndim == 0 else v.copy()

    def __len__(self):
        if not self.shape:
            raise TypeError("scalar jet has no length")
        return self.shape[0]

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        if len(key) > len(self.shape) or any(k is Ellipsis for k in key):
            raise IndexError("jet indices address tensor axes only")
        return Jet(self.space, self.coeffs[key], self.base)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self):
        shape = f", shape={self.shape}" if self.shape else ""
        return f"Jet(n={self.dim}, order={self.order}{shape})"

    def to_dict(self, tol=0.0):
        """Nonzero Taylor coefficients of a scalar jet keyed by multi-index."""
        if self.shape:
            raise JetError("to_dict() needs a scalar jet")
        return {
            a: float(c)
            for a, c in zip(self.space.indices, self.coeffs)
            if abs(c) > tol
        }

    def stack_like(self, coeffs):
        return Jet(self.space, coeffs, self.base)

    # arithmetic ----------------------------------------------------------

    def _check(self, other):
        if other.space is not self.space:
            raise JetError(f"jet space mismatch: {self.space!r} vs {other.space!r}")

    def _lift(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return other.coeffs
        other = np.asarray(other, dtype=float)
        coeffs = np.zeros(other.shape + (self.space.size,))
        coeffs[..., 0] = other
        return coeffs

    def __add__(self, other):
        return Jet(self.space, self.coeffs + self._lift(other), self.base)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.space, self.coeffs - self._lift(other), self.base)

    def __rsub__(self, other):
        return Jet(self.space, self._lift(other) - self.coeffs, self.base)

    def __neg__(self):
        return Jet(self.space, -self.coeffs, self.base)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.space, self.space.product(self.coeffs, other.coeffs), self.base)
        other = np.asarray(other, dtype=float)
        return Jet(self.space, self.coeffs * other[..., None], self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * inv(other)
        other = np.asarray(other, dtype=float)
        if np.any(other == 0):
            raise JetError("division by zero")
        return Jet(self.space, self.coeffs / other[..., None], self.base)

    def __rtruediv__(self, other):
        return inv(self) * other

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            if p < 0:
                return inv(self) ** (-p)
            result = Jet.constant(self.space, np.ones(self.shape), self.base)
            square = self
            while p:
                if p & 1:
                    result = result * square
                p >>= 1
                if p:
                    square = square * square
            return result
        return power(self, p)

    # calculus ------------------------------------------------------------

    def truncate(self, order):
        if order > self.order:
            raise JetError(f"cannot raise jet order from {self.order} to {order}")
        if order == self.order:
            return self
        lower = self.space.lower(order)
        return Jet(lower, self.coeffs[..., : lower.size], self.base)

    def derivative(self, i):
        """Jet of ``d/dx^i`` (0-based ``i``), one order lower."""
        if self.order < 1:
            raise JetError("cannot differentiate an order-0 jet")
        if not 0 <= i < self.dim:
            raise JetError(f"variable index {i} out of range for dimension {self.dim}")
        src, fac = self.space._deriv[i]
        return Jet(self.space.lower(self.order - 1), self.coeffs[..., src] * fac, self.base)

    def gradient(self):
        """Jet with a new trailing tensor axis holding ``d/dx^0 .. d/dx^{n-1}``."""
        parts = [self.derivative(i).coeffs for i in range(self.dim)]
        return Jet(self.space.lower(self.order - 1), np.stack(parts, axis=-2), self.base)

    def derivative_tensor(self, m):
        """Array of all m-th partial derivatives at the base point.

        The result has shape ``self.shape + (n,) * m``.
        """
        jet = self
        for _ in range(m):
            jet = jet.gradient()
        return jet.value if jet.shape else np.asarray(jet.value)


def jet_var(i, value, n, order):
    """Jet of the coordinate function ``x^i`` (``i`` is 1-based)."""
    if not 1 <= i <= n:
        raise JetError(f"variable index {i} out of range 1..{n}")
    if order < 1:
        raise JetError("coordinate jets need order >= 1")
    space = jet_space(n, order)
    coeffs = np.zeros(space.size)
    coeffs[0] = value
    unit = [0] * n
    unit[i - 1] = 1
    coeffs[space.position[tuple(unit)]] = 1.0
    return Jet(space, coeffs)


def coordinate_jets(point, order):
    """The identity map as a :class:`MapJet` based at ``point``."""
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    space = jet_space(n, order)
    coeffs = np.zeros((n, space.size))
    coeffs[:, 0] = point
    if order >= 1:
        coeffs[:, 1 : n + 1] = np.eye(n)
    return MapJet(space, coeffs, point)


def partial(a, alpha):
    """True partial derivative ``d^alpha a`` at the base point."""
    alpha = tuple(alpha)
    if len(alpha) != a.dim:
        raise JetError(f"multi-index {alpha} does not have {a.dim} components")
    if sum(alpha) > a.order:
        raise JetError(f"|{alpha}| exceeds jet order {a.order}")
    p = a.space.position[alpha]
    out = a.coeffs[..., p] * a.space.factorials[p]
    return float(out) if out.ndim == 0 else out


def _split(a):
    c0 = a.coeffs[..., 0]
    rest = a.coeffs.copy()
    rest[..., 0] = 0.0
    return c0, rest


def _series(a, u_coeffs, weights):
    """sum_m weights[m] * u**m by Horner's rule, ``u`` nilpotent."""
    space = a.space
    out = np.zeros_like(u_coeffs)
    out[..., 0] = weights[-1]
    for w in reversed(weights[:-1]):
        out = space.product(out, u_coeffs)
        out[..., 0] += w
    return out


def inv(a):
    """Multiplicative inverse; the constant term must be nonzero."""
    c0, rest = _split(a)
    if np.any(c0 == 0):
        raise JetError("inverse of a jet with zero constant term")
    u = rest / c0[..., None]
    K = a.order
    series = _series(a, u, [(-1.0) ** m for m in range(K + 1)])
    return Jet(a.space, series / c0[..., None], a.base)


def log(a):
    """Natural logarithm; the constant term must be strictly positive."""
    c0, rest = _split(a)
    if np.any(c0 <= 0):
        raise JetError("log of a jet with non-positive constant term")
    u = rest / c0[..., None]
    K = a.order
    weights = [0.0] + [(-1.0) ** (m + 1) / m for m in range(1, K + 1)]
    series = _series(a, u, weights)
    series[..., 0] += np.log(c0)
    return Jet(a.space, series, a.base)


def exp(a):
    if not isinstance(a, Jet):
        return np.exp(a)
    c0, rest = _split(a)
    K = a.order
    series = _series(a, rest, [1.0 / math.factorial(m) for m in range(K + 1)])
    return Jet(a.space, series * np.exp(c0)[..., None], a.base)


def power(a, p):
    """``a**p`` for real ``p``; the constant term must be strictly positive."""
    c0, rest = _split(a)
    if np.any(c0 <= 0):
        raise JetError("real power of a jet with non-positive constant term")
    u = rest / c0[..., None]
    K = a.order
    weights = [1.0]
    for m in range(1, K + 1):
        weights.append(weights[-1] * (p - m + 1) / m)
    series = _series(a, u, weights)
    return Jet(a.space, series * (c0**p)[..., None], a.base)


# tensor contractions ------------------------------------------------------


def _parse_subscripts(subscripts, count):
    if "->" not in subscripts:
        raise ValueError("contract() needs explicit '->' output subscripts")
    lhs, out = subscripts.replace(" ", "").split("->")
    terms = lhs.split(",")
    if len(terms) != count:
        raise ValueError(f"{len(terms)} subscript groups for {count} operands")
    for t in terms + [out]:
        if any(ch not in string.ascii_letters for ch in t):
            raise ValueError(f"bad subscripts {t!r}")
    return terms, out


def _pair(sa, a, sb, b, keep):
    if isinstance(a, Jet) and isinstance(b, Jet):
        a._check(b)
        space = a.space
        prod = np.einsum(
            f"{sa}...,{sb}...->{keep}...",
            a.coeffs[..., space._left],
            b.coeffs[..., space._right],
        )
        return Jet(space, prod @ space._scatter, a.base)
    if isinstance(a, Jet):
        return Jet(a.space, np.einsum(f"{sa}...,{sb}->{keep}...", a.coeffs, b), a.base)
    if isinstance(b, Jet):
        return Jet(b.space, np.einsum(f"{sa},{sb}...->{keep}...", a, b.coeffs), b.base)
    return np.einsum(f"{sa},{sb}->{keep}", a, b)


def contract(subscripts, *operands):
    """``einsum`` in which products of jets are truncated jet products.

    Operands may be :class:`Jet` or plain arrays (constants). Every tensor
    axis must be named; the jet coefficient axis is implicit.
    """
    terms, out = _parse_subscripts(subscripts, len(operands))
    operands = [op if isinstance(op, Jet) else np.asarray(op, dtype=float) for op in operands]
    acc, acc_sub = operands[0], terms[0]
    for k in range(1, len(operands)):
        later = set(out).union(*terms[k + 1 :])
        keep = "".join(dict.fromkeys(ch for ch in acc_sub + terms[k] if ch in later))
        acc = _pair(acc_sub, acc, terms[k], operands[k], keep)
        acc_sub = keep
    if isinstance(acc, Jet):
        return Jet(acc.space, np.einsum(f"{acc_sub}...->{out}...", acc.coeffs), acc.base)
    return np.einsum(f"{acc_sub}->{out}", acc)


def matmul(a, b):
    return contract("ij,jk->ik", a, b)


def matinv(m):
    """Inverse of a square matrix of jets via a terminating Neumann series."""
    if len(m.shape) != 2 or m.shape[0] != m.shape[1]:
        raise JetError(f"matinv needs a square matrix jet, got shape {m.shape}")
    a0 = m.value
    try:
        a0_inv = np.linalg.inv(a0)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobianError("constant part of the matrix is singular") from exc
    nil = m - a0
    x = contract("ij,jk->ik", -a0_inv, nil)
    eye = np.eye(m.shape[0])
    result = Jet.constant(m.space, eye, m.base)
    for _ in range(m.order):
        result = contract("ij,jk->ik", x, result) + eye
    return contract("ij,jk->ik", result, a0_inv)


def det(m):
    """Determinant of a square matrix of jets by Leibniz expansion."""
    n = m.shape[0]
    total = Jet.zeros(m.space, base=m.base)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = m[0, perm[0]]
        for i in range(1, n):
            term = term * m[i, perm[i]]
        total = total - term if inversions % 2 else total + term
    return total


# maps -----------------------------------------------------------------------


class MapJet(Jet):
    """Jet of a map ``R^n -> R^n``: a Jet of shape ``(n,)``.

    ``base`` is the source point, ``value`` the image point.
    """

    __slots__ = ()

    def __init__(self, space, coeffs, base=None):
        super().__init__(space, coeffs, base)
        if self.shape != (space.n,):
            raise JetError(f"map jet needs shape ({space.n},), got {self.shape}")

    @classmethod
    def from_jet(cls, jet):
        return cls(jet.space, jet.coeffs, jet.base)

    @classmethod
    def from_components(cls, components, base=None):
        components = list(components)
        space = components[0].space
        for c in components:
            if c.space is not space:
                raise JetError("map components disagree on dimension or order")
        if base is None:
            base = components[0].base
        return cls(space, np.stack([c.coeffs for c in components]), base)

    def linear_part(self):
        """The n x n matrix ``dF^i/dx^j`` at the base point."""
        if self.order < 1:
            raise JetError("order-0 map jet has no linear part")
        n = self.dim
        return self.coeffs[:, 1 : n + 1].copy()

    def truncate(self, order):
        return MapJet.from_jet(super().truncate(order))

    def jacobian(self):
        """Jet (order K-1) of the matrix ``dF^i/dx^j``."""
        return self.gradient()

    def monomials(self, center):
        """Rows: jets of ``prod_j (F^j - center^j)**a_j`` for every index a."""
        center = np.asarray(center, dtype=float)
        key = center.tobytes()
        if self._cache is None:
            self._cache = {}
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        space = self.space
        disp = self.coeffs - np.concatenate(
            [center[:, None], np.zeros((self.dim, space.size - 1))], axis=1
        )
        mons = _monomial_table(space, disp, space.n, space.order)
        self._cache[key] = mons
        return mons


def _monomial_table(space, disp, m, order):
    """Jets of all monomials of degree <= order in the m rows of ``disp``."""
    indices = _multi_indices(m, order)
    table = np.zeros((len(indices), space.size))
    table[0, 0] = 1.0
    position = {a: p for p, a in enumerate(indices)}
    for p, a in enumerate(indices[1:], start=1):
        j = next(k for k, e in enumerate(a) if e > 0)
        prev = list(a)
        prev[j] -= 1
        table[p] = space.product(table[position[tuple(prev)]], disp[j])
    return table


def is_local_diffeo(F):
    a = F.linear_part()
    n = a.shape[0]
    scale = max(np.max(np.linalg.norm(a, axis=1)), 1e-300)
    d = abs(np.linalg.det(a))
    return d > 0.0 and d >= SINGULAR_RTOL * scale**n


def compose(g, F, check_base=True):
    """Jet of ``g o F``.

    ``g`` is a (tensor) jet in ``m`` variables based at ``F.value``; ``F`` a
    map jet with ``m`` components. Both must have the same order.
    """
    if not isinstance(F, Jet) or len(F.shape) != 1:
        raise JetError("compose() needs a map jet as its second argument")
    m = F.shape[0]
    if g.dim != m:
        raise JetError(f"outer jet has {g.dim} variables but the map has {m} components")
    if g.order != F.order:
        raise JetError(f"order mismatch in compose: {g.order} vs {F.order}")
    center = F.value
    if g.base is not None:
        if check_base and np.max(np.abs(g.base - center)) > BASE_ATOL:
            raise JetError(
                f"base point mismatch in compose: {g.base.tolist()} vs {center.tolist()}"
            )
        center = g.base
    if not isinstance(F, MapJet) or F.dim != m:
        # inner map between spaces of different dimension
        disp = F.coeffs.copy()
        disp[..., 0] -= center
        table = _monomial_table(F.space, disp, m, F.order)
    else:
        table = F.monomials(center)
    return Jet(F.space, g.coeffs @ table, F.base)


def map_compose(F, G):
    """Jet of ``F o G``."""
    return MapJet.from_jet(compose(F, G))


def map_inverse(F):
    """Jet of the local inverse of ``F``, based at ``F.value``."""
    if F.order < 1:
        raise JetError("map_inverse needs order >= 1")
    a = F.linear_part()
    if not is_local_diffeo(F):
        raise SingularJacobianError(
            "linear part is singular: the map is not a local diffeomorphism here"
        )
    a_inv = np.linalg.inv(a)
    n, K = F.dim, F.order
    space = F.space
    y0 = F.value
    x0 = F.base if F.base is not None else np.zeros(n)

    nonlinear = F.coeffs.copy()
    nonlinear[:, : n + 1] = 0.0
    h = coordinate_jets(np.zeros(n), K).coeffs  # displacement y - y0
    disp = a_inv @ h
    for _ in range(K - 1):
        table = _monomial_table(space, disp, n, K)
        disp = a_inv @ (h - nonlinear @ table)
    coeffs = disp.copy()
    coeffs[:, 0] = x0
    return MapJet(space, coeffs, y0)


def jacobian_det(F):
    """Jet (order K-1) of ``det(dF^i/dx^j)``."""
    if F.order < 1:
        raise JetError("jacobian_det needs order >= 1")
    return det(F.jacobian())


def recenter(g, new_base):
    """Re-expand a jet around ``new_base`` (a small shift of its base point)."""
    new_base = np.asarray(new_base, dtype=float)
    shift = coordinate_jets(new_base, g.order)
    out = compose(g, shift, check_base=False)
    return Jet(out.space, out.coeffs, new_base)
