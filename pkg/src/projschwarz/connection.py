"""Projective connection symbols, the tensor cocycle ``ell`` and operator symbols.

Index conventions: a (2,1)-tensor or connection array is stored as
``P[k, i, j]`` (upper index first, symmetric in ``i, j``). A first-order
operator ``A: S^2 -> C^oo``, ``A(a) = (t^k_ij d_k + u_ij) a^ij``, is an
:class:`S2OperatorValue` with ``t[k, i, j]`` and ``u[i, j]``.

Pullbacks use ``f`` itself as the coordinate change: ``(f*P)(x)`` is built
from ``P`` at ``f(x)`` and the jets of ``f`` at ``x``. With this direction
``ell(f) = f*P - P`` satisfies ``ell(f o g) = g* ell(f) + ell(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffeo import jet_at
from .errors import DataError, DimensionError
from .fields import FunctionField
from .jet import (
    Jet,
    compose,
    contract,
    det,
    log,
    map_inverse,
    matinv,
)

SYMMETRY_ATOL = 1e-12
TRACE_ATOL = 1e-10


def _labels(array, offset=1):
    out = {}
    for idx in np.ndindex(*array.shape):
        v = float(array[idx])
        if v != 0.0:
            out[",".join(str(i + offset) for i in idx)] = v
    return out


@dataclass(frozen=True)
class Tensor21Value:
    """Pointwise value ``t[k, i, j]`` of a (2,1)-tensor field."""

    entries: np.ndarray

    @property
    def dim(self):
        return self.entries.shape[0]

    def __add__(self, other):
        return Tensor21Value(self.entries + other.entries)

    def __sub__(self, other):
        return Tensor21Value(self.entries - other.entries)

    def flat(self):
        return self.entries.reshape(-1)

    def trace(self):
        """Contraction ``t^k_ik`` (a covector)."""
        return np.einsum("kik->i", self.entries)

    def to_json(self):
        return _labels(self.entries)


@dataclass(frozen=True)
class S2OperatorValue:
    """Pointwise coefficients of ``a -> (t^k_ij d_k + u_ij) a^ij``."""

    t: np.ndarray
    u: np.ndarray

    @property
    def dim(self):
        return self.u.shape[0]

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, n, n)), np.zeros((n, n)))

    def __add__(self, other):
        return S2OperatorValue(self.t + other.t, self.u + other.u)

    def __sub__(self, other):
        return S2OperatorValue(self.t - other.t, self.u - other.u)

    def flat(self):
        return np.concatenate([self.t.reshape(-1), self.u.reshape(-1)])

    def apply(self, a, da):
        """Evaluate on a field with value ``a[i, j]`` and derivatives ``da[i, j, k]``."""
        return float(np.einsum("kij,ijk->", self.t, da) + np.einsum("ij,ij->", self.u, a))

    def to_json(self):
        return {"t": _labels(self.t), "u": _labels(self.u)}


def _check_symmetric(values, what):
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 0.0)
    if np.max(np.abs(values - np.swapaxes(values, -1, -2)), initial=0.0) > SYMMETRY_ATOL * scale:
        raise DataError(f"{what} is not symmetric in its lower indices")


class ChristoffelField:
    """Symbols ``Gamma^k_ij`` of an affine connection (torsion-free)."""

    def __init__(self, field):
        if field.shape != (field.dim,) * 3:
            raise ValueError(f"connection field must have shape (n, n, n), got {field.shape}")
        self.field = field
        self.dim = field.dim

    def jet(self, x, order):
        out = self.field.jet(x, order)
        _check_symmetric(np.asarray(out.value), "Christoffel field")
        return out

    def value(self, x):
        return np.asarray(self.jet(x, 0).value)

    @property
    def is_zero(self):
        return self.field.is_zero


class ProjectiveField:
    """Symbols ``Pi^k_ij`` of a projective connection: symmetric and trace-free.

    ``flat=True`` means the symbols vanish identically in this chart.
    """

    def __init__(self, field, flat=False, check=True):
        if field.shape != (field.dim,) * 3:
            raise ValueError(f"connection field must have shape (n, n, n), got {field.shape}")
        if flat and not field.is_zero:
            raise DataError("a flat projective field must be identically zero")
        self.field = field
        self.dim = field.dim
        self.flat = flat
        self.check = check

    @classmethod
    def zero(cls, n):
        from .fields import zero_field

        return cls(zero_field(n, (n, n, n)), flat=True)

    def jet(self, x, order):
        out = self.field.jet(x, order)
        if self.check:
            v = np.asarray(out.value)
            _check_symmetric(v, "projective field")
            scale = max(1.0, float(np.max(np.abs(v))))
            if np.max(np.abs(np.einsum("kik->i", v))) > TRACE_ATOL * scale:
                raise DataError("projective field is not trace-free")
        return out

    def value(self, x):
        return np.asarray(self.jet(x, 0).value)


def flat_connection(n):
    return ProjectiveField.zero(n)


def trace_projection(g):
    """``G^k_ij - (d^k_i G^l_jl + d^k_j G^l_il) / (n+1)`` for a Jet or array."""
    n = g.shape[0]
    tr = contract("lil->i", g)
    eye = np.eye(n)
    corr = contract("ki,j->kij", eye, tr) + contract("kj,i->kij", eye, tr)
    return g - corr * (1.0 / (n + 1))


def pi_from_gamma(gamma):
    """Projective symbols of an affine connection (a ProjectiveField).

    Accepts a :class:`ChristoffelField`, a :class:`ProjectiveField` (the
    projection is idempotent) or a bare field of shape ``(n, n, n)``.
    """
    if isinstance(gamma, (ChristoffelField, ProjectiveField)):
        src, getter = gamma.field, gamma.jet
    else:
        src, getter = gamma, gamma.jet
    n = src.dim
    if src.is_zero:
        return ProjectiveField.zero(n)
    field = FunctionField(
        n, (n, n, n), lambda x, r: trace_projection(getter(x, r)), name="pi_from_gamma"
    )
    return ProjectiveField(field)


# -- the cocycle ell ---------------------------------------------------------


def log_jacobian_gradient(F):
    """Jet (order K-2) of ``d log|J_F| / dx^i``."""
    J = det(F.jacobian())
    sign = 1.0 if J.value > 0 else -1.0
    return log(J * sign).gradient()


def ell_flat_jet(F):
    """Flat-structure cocycle of a map jet of order K, as a Jet of order K-2.

    ``ell^k_ij = d2 f^l/dx^i dx^j  dx^k/df^l
    - (d^k_j dlogJ/dx^i + d^k_i dlogJ/dx^j) / (n+1)``.
    """
    n, K = F.dim, F.order
    if K < 2:
        raise ValueError("ell needs the 2-jet of the map")
    D = F.jacobian()
    D2 = D.gradient()
    Dinv = matinv(D).truncate(K - 2)
    L = log_jacobian_gradient(F)
    gamma = contract("kl,lij->kij", Dinv, D2)
    eye = np.eye(n)
    corr = contract("kj,i->kij", eye, L) + contract("ki,j->kij", eye, L)
    return gamma - corr * (1.0 / (n + 1))


def _pulled_tensor_part(P, F, r):
    """``P^c_ab(F(x)) dF^a/dx^i dF^b/dx^j dx^k/dF^c`` as a jet of order r."""
    y0 = F.value
    Fr = F.truncate(r)
    D = F.jacobian().truncate(r)
    Dinv = matinv(D)
    Py = P.jet(y0, r)
    Px = compose(Py, Fr)
    return contract("cab,ai,bj,kc->kij", Px, D, D, Dinv)


def pullback_connection_jet(P, F, r):
    """Jet of order ``r`` of ``f*P`` at the base of ``F`` (needs order >= r+2)."""
    F = F.truncate(r + 2)
    out = ell_flat_jet(F)
    if not getattr(P, "flat", False):
        out = out + _pulled_tensor_part(P, F, r)
    return out


def affine_pullback_jet(gamma, F, r):
    """Jet of order ``r`` of the affine pullback ``Dinv (Gamma(F) DF DF + d2F)``."""
    F = F.truncate(r + 2)
    D = F.jacobian()
    D2 = D.gradient()
    Dinv = matinv(D.truncate(r))
    inhom = contract("kl,lij->kij", Dinv, D2)
    if getattr(gamma, "is_zero", False) or getattr(gamma, "flat", False):
        return inhom
    return inhom + _pulled_tensor_part(gamma, F, r)


def pullback_connection(f, P, method="law"):
    """The projective field ``f*P``.

    ``method="law"`` applies the transformation law of projective symbols
    (tensorial part plus the flat cocycle); ``method="affine"`` pulls ``P``
    back as an affine connection and projects to trace-free symbols. The two
    must agree.
    """
    n = f.dim
    if method == "law":
        fn = lambda x, r: pullback_connection_jet(P, jet_at(f, x, r + 2), r)
    elif method == "affine":
        fn = lambda x, r: trace_projection(affine_pullback_jet(P, jet_at(f, x, r + 2), r))
    else:
        raise ValueError(f"unknown pullback method {method!r}")
    return ProjectiveField(FunctionField(n, (n, n, n), fn, name=f"pullback[{method}]"))


def ell_flat(f, x):
    """Flat-structure cocycle ``ell(f)`` at ``x``."""
    return Tensor21Value(np.asarray(ell_flat_jet(jet_at(f, x, 2)).value))


def ell_cocycle(f, P, x, method="law"):
    """``ell(f) = f*P - P`` at ``x``."""
    pulled = pullback_connection(f, P, method=method).value(x)
    return Tensor21Value(pulled - P.value(x))


def tensor21_pullback(f, t, x):
    """Natural pullback of a (2,1)-tensor whose value at ``f(x)`` is ``t``."""
    F = jet_at(f, x, 1)
    D = F.linear_part()
    entries = t.entries if isinstance(t, Tensor21Value) else np.asarray(t)
    out = np.einsum("cab,ai,bj,kc->kij", entries, D, D, np.linalg.inv(D))
    return Tensor21Value(out)


# -- operator symbols --------------------------------------------------------


def _require_multidim(n):
    if n < 2:
        raise DimensionError(
            "operator symbols need dimension >= 2; use classical_schwarzian in dimension 1"
        )


def default_coefficients(n):
    """The pair ``(alpha, beta) = (-2/(n-1), (n+1)/(n-1))``."""
    _require_multidim(n)
    return -2.0 / (n - 1), (n + 1.0) / (n - 1)


def operator_symbols_jet(P):
    """``(t, u)`` jets of order r-1 from a projective-symbol jet of order r >= 1."""
    n, r = P.shape[0], P.order
    _require_multidim(n)
    div = contract("kijk->ij", P.gradient())
    quad = contract("kil,lkj->ij", P, P).truncate(r - 1)
    u = (div - quad * ((n + 1) / 2.0)) * (-2.0 / (n - 1))
    return P.truncate(r - 1), u


def operator_symbols(P, x):
    """Operator symbols ``T_ij`` of the projective field ``P`` at ``x``."""
    _require_multidim(P.dim)
    t, u = operator_symbols_jet(P.jet(x, 1))
    return S2OperatorValue(np.asarray(t.value), np.asarray(u.value))


def t_difference(P_tilde, P, x, alpha=None, beta=None):
    """The operator ``T~ - T`` at ``x``, written with coefficients (alpha, beta).

    With the default coefficients this is coordinate-independent; other
    values are accepted to exhibit that the invariance fails for them.
    """
    n = P.dim
    a0, b0 = default_coefficients(n)
    alpha = a0 if alpha is None else alpha
    beta = b0 if beta is None else beta
    jt = P_tilde.jet(x, 1)
    jp = P.jet(x, 1)
    pt, pp = np.asarray(jt.value), np.asarray(jp.value)
    d_diff = np.asarray((jt - jp).gradient().value)  # [k, i, j, m]
    div = np.einsum("kijk->ij", d_diff)
    quad = np.einsum("kli,ljk->ij", pt, pt) - np.einsum("kli,ljk->ij", pp, pp)
    return S2OperatorValue(pt - pp, alpha * div + beta * quad)


def _operator_at(A, point):
    return A(point) if callable(A) else A


def pullback_s2_operator(f, A, x):
    """Pull back a first-order operator ``S^2 -> C^oo`` along ``f`` to ``x``.

    ``A`` is the operator's value at ``f(x)`` (or a callable returning it).
    The principal part transforms tensorially; the scalar part picks up
    ``-2 t^c_ab d2x^k/dy^c dy^l dy^a/dx^k dy^b/dx^(i dy^l/dx^j)`` with the
    symmetrization weight 1/2, where ``y = f(x)``.
    """
    F = jet_at(f, x, 2)
    A = _operator_at(A, F.value)
    G = map_inverse(F)
    DF = F.linear_part()
    DG = G.linear_part()
    D2G = np.asarray(G.gradient().gradient().value)  # [k, c, l]
    t = np.einsum("cab,ai,bj,kc->kij", A.t, DF, DF, DG)
    extra = np.einsum("cab,kcl,ak,bi,lj->ij", A.t, D2G, DF, DF, DF)
    u = np.einsum("ab,ai,bj->ij", A.u, DF, DF) - (extra + extra.T)
    return S2OperatorValue(t, u)


def pullback_s2_operator_probe(f, A, x):
    """Same as :func:`pullback_s2_operator`, computed as ``a -> f*(A(f_* a))``.

    Probe fields ``a = E_pq`` and ``a = E_pq (x^m - x0^m)`` are pushed forward
    along ``f`` in jet arithmetic, ``A`` is applied at ``f(x)``, and the
    coefficients are read off. Independent of the closed-form law.
    """
    F = jet_at(f, x, 2)
    A = _operator_at(A, F.value)
    n = F.dim
    DF = F.jacobian().truncate(1)
    G1 = map_inverse(F.truncate(1))
    space = DF.space
    x0 = F.base
    probes = [Jet.constant(space, 1.0, x0)]
    for m in range(n):
        c = np.zeros(space.size)
        c[1 + m] = 1.0
        probes.append(Jet(space, c, x0))
    t = np.zeros((n, n, n))
    u = np.zeros((n, n))
    for p in range(n):
        for q in range(p, n):
            E = np.zeros((n, n))
            E[p, q] = E[q, p] = 1.0
            weight = 1.0 if p == q else 2.0
            for s, phi in enumerate(probes):
                a = contract("cp,dq,pq->cd", DF, DF, E) * phi
                b = compose(a, G1)
                value = A.apply(np.asarray(b.value), np.asarray(b.gradient().value))
                if s == 0:
                    u[p, q] = u[q, p] = value / weight
                else:
                    t[s - 1, p, q] = t[s - 1, q, p] = value / weight
    return S2OperatorValue(t, u)
