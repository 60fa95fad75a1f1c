"""Second-order operators on tensor densities and their symbols.

An operator ``A = a2^ij d_i d_j + a1^i d_i + a0`` acts on densities of weight
``lam``. A diffeomorphism ``f`` pulls densities back by
``f* phi = (phi o f) J_f^lam`` and acts on operators by conjugation,
``f(A) = (f*)^-1 o A o f*``. This is a left action:
``act(f o g) = act(f) o act(g)``. Given coefficients near a source point
``x``, the conjugated operator lives near ``y = f(x)``.

The symbol map ``sigma_lam`` sends ``(a2, a1, a0)`` to a triple of tensor
fields; conjugation then becomes the explicit action of :func:`act_explicit`
built from the cocycles ``ell`` and ``S`` of the inverse map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import _require_multidim, ell_flat_jet
from .diffeo import invert, jet_at
from .errors import DimensionError, DomainError
from .fields import ConstantField, FunctionField
from .jet import Jet, compose, contract, coordinate_jets, det, map_inverse, power
from .schwarzian import classical_schwarzian, schwarzian_flat_jet


# -- value types ---------------------------------------------------------------


def _labels(a):
    a = np.asarray(a, dtype=float)
    if a.ndim == 0:
        return float(a)
    return {
        ",".join(str(i + 1) for i in idx): float(a[idx])
        for idx in np.ndindex(*a.shape)
        if a[idx] != 0.0
    }


@dataclass(frozen=True)
class _Triple:
    a2: np.ndarray
    a1: np.ndarray
    a0: float

    @property
    def dim(self):
        return len(self.a1)

    def flat(self):
        return np.concatenate([np.ravel(self.a2), np.ravel(self.a1), [self.a0]])

    def __sub__(self, other):
        return type(self)(self.a2 - other.a2, self.a1 - other.a1, self.a0 - other.a0)

    def to_json(self):
        return {"a2": _labels(self.a2), "a1": _labels(self.a1), "a0": float(self.a0)}


class OperatorValue(_Triple):
    """Pointwise coefficients ``(a2^ij, a1^i, a0)`` of a second-order operator."""


class SymbolTriple(_Triple):
    """Pointwise symbol ``(a2bar^ij, a1bar^i, a0bar)``."""


def _triple_from_jets(cls, jets):
    a2, a1, a0 = jets
    return cls(np.asarray(a2.value), np.asarray(a1.value), float(a0.value))


# -- field types ---------------------------------------------------------------


class TripleField:
    """Three jet-evaluable fields of shapes ``(n, n)``, ``(n,)`` and ``()``."""

    def __init__(self, a2, a1, a0):
        n = a2.dim
        if a2.shape != (n, n) or a1.shape != (n,) or a0.shape != ():
            raise ValueError(
                f"expected shapes (n,n), (n,), (); got {a2.shape}, {a1.shape}, {a0.shape}"
            )
        if a1.dim != n or a0.dim != n:
            raise ValueError("component fields disagree on the dimension")
        self.a2, self.a1, self.a0 = a2, a1, a0
        self.dim = n

    def jets(self, x, order):
        x = np.asarray(x, dtype=float)
        a2 = self.a2.jet(x, order)
        v = np.asarray(a2.value)
        if np.max(np.abs(v - v.T)) > 1e-12 * max(1.0, np.max(np.abs(v))):
            raise DomainError(f"second-order coefficient is not symmetric at {x.tolist()}")
        return a2, self.a1.jet(x, order), self.a0.jet(x, order)


class OperatorCoeffs(TripleField):
    """Coefficient fields of ``a2^ij d_i d_j + a1^i d_i + a0``."""

    def value(self, x):
        return _triple_from_jets(OperatorValue, self.jets(x, 0))

    @classmethod
    def constant(cls, a2, a1, a0):
        a2 = np.asarray(a2, dtype=float)
        n = a2.shape[0]
        return cls(ConstantField(n, a2), ConstantField(n, a1), ConstantField(n, a0))


class SymbolField(TripleField):
    """Symbol fields ``(a2bar, a1bar, a0bar)``."""

    def value(self, x):
        return _triple_from_jets(SymbolTriple, self.jets(x, 0))


def _triple_field(cls, n, fn, name):
    """Triple field whose three components are computed together by ``fn``."""
    cache = {}

    def part(k):
        def get(x, order):
            key = (x.tobytes(), order)
            if key not in cache:
                cache.clear()
                cache[key] = fn(x, order)
            return cache[key][k]

        return get

    shapes = [(n, n), (n,), ()]
    return cls(*(FunctionField(n, s, part(k), name=f"{name}[{k}]") for k, s in enumerate(shapes)))


# -- densities -----------------------------------------------------------------


def _positive_jacobian(F):
    J = det(F.jacobian())
    if not J.value > 0:
        raise DomainError(
            "density pullback needs an orientation-preserving map "
            f"(J = {float(J.value):.6g} at {F.base.tolist()})"
        )
    return J


def density_pullback(f, lam, phi, x, order):
    """Jet of ``(phi o f) J_f^lam`` at ``x``."""
    F = jet_at(f, x, order + 1)
    J = _positive_jacobian(F)
    Fr = F.truncate(order)
    return compose(phi.jet(Fr.value, order), Fr) * power(J, lam)


# -- symbol map ----------------------------------------------------------------


def _sigma_coefficients(n, lam):
    c1 = 2.0 * ((n + 1) * lam + 1) / (n + 3)
    c0 = lam * ((n + 1) * lam + 1) / (n + 2)
    return c1, c0


def symbol_from_jets(a2, a1, a0, lam):
    """Symbol jets (order r) from coefficient jets of order r+2."""
    n, r = a1.dim, a1.order - 2
    if r < 0:
        raise ValueError("symbol map needs coefficient jets of order >= 2")
    c1, c0 = _sigma_coefficients(n, lam)
    d_a2 = a2.gradient()
    div2 = contract("ijj->i", d_a2).truncate(r)
    div1 = contract("ii->", a1.gradient()).truncate(r)
    ddiv2 = contract("ijij->", d_a2.gradient())
    return (
        a2.truncate(r),
        a1.truncate(r) - div2 * c1,
        a0.truncate(r) - div1 * lam + ddiv2 * c0,
    )


def coeffs_from_symbol_jets(b2, b1, b0, lam):
    """Inverse of :func:`symbol_from_jets` (order r+2 in, order r out)."""
    n, r = b1.dim, b1.order - 2
    if r < 0:
        raise ValueError("inverse symbol map needs symbol jets of order >= 2")
    c1, c0 = _sigma_coefficients(n, lam)
    d_b2 = b2.gradient()
    a1 = b1.truncate(r + 1) + contract("ijj->i", d_b2) * c1
    div1 = contract("ii->", a1.gradient())
    ddiv2 = contract("ijij->", d_b2.gradient())
    return b2.truncate(r), a1.truncate(r), b0.truncate(r) + div1 * lam - ddiv2 * c0


def symbol_map_jets(A, lam, x, order=0):
    return symbol_from_jets(*A.jets(x, order + 2), lam)


def symbol_map(A, lam, x):
    """``sigma_lam(A)`` at ``x``."""
    return _triple_from_jets(SymbolTriple, symbol_map_jets(A, lam, x))


def symbol_map_field(A, lam):
    """``sigma_lam(A)`` as a :class:`SymbolField`."""
    return _triple_field(
        SymbolField, A.dim, lambda x, r: symbol_map_jets(A, lam, x, r), "symbol"
    )


def symbol_map_inverse(sigma, lam, x):
    """Coefficients of the operator whose symbol field is ``sigma``, at ``x``."""
    return _triple_from_jets(OperatorValue, coeffs_from_symbol_jets(*sigma.jets(x, 2), lam))


# -- the action by conjugation -------------------------------------------------


def _apply(a2, a1, a0, phi, r):
    """``A(phi)`` as a jet of order r (coefficient jets and ``phi`` of order r+2)."""
    g = phi.gradient()
    h = g.gradient()
    return (
        contract("ij,ij->", a2.truncate(r), h)
        + contract("i,i->", a1.truncate(r), g.truncate(r))
        + a0.truncate(r) * phi.truncate(r)
    )


def act_direct_jets(f, lam, A, x, order=0, mu=None):
    """Jets (order ``order``) at ``f(x)`` of the coefficients of ``f(A)``.

    ``f(A)`` is applied to the probe densities ``1``, ``y^k - y0^k`` and
    their pairwise products; the coefficients are read off triangularly.
    ``mu`` is the weight of the target density module (default ``lam``).
    """
    mu = lam if mu is None else mu
    r = order
    F = jet_at(f, x, r + 3)
    n = F.dim
    J = _positive_jacobian(F)
    Jl = power(J, lam)
    Jmu = power(J.truncate(r), -mu)
    Fp = F.truncate(r + 2)
    y0 = F.value
    disp = [Fp[k] - y0[k] for k in range(n)]
    a2, a1, a0 = A.jets(F.base, r + 2)

    G = map_inverse(F.truncate(max(r, 1))).truncate(r)

    def image(phi):
        return compose(_apply(a2, a1, a0, phi * Jl, r) * Jmu, G)

    Y = coordinate_jets(y0, r)
    psi = [Y[k] - y0[k] for k in range(n)]
    b0 = image(Jet.constant(Fp.space, 1.0, Fp.base))
    b1 = [image(disp[k]) - b0 * psi[k] for k in range(n)]
    b2 = [[None] * n for _ in range(n)]
    for k in range(n):
        for l in range(k, n):
            rest = b1[k] * psi[l] + b1[l] * psi[k] + b0 * psi[k] * psi[l]
            b2[k][l] = b2[l][k] = (image(disp[k] * disp[l]) - rest) * 0.5
    space = b0.space
    return (
        Jet(space, np.array([[c.coeffs for c in row] for row in b2]), y0),
        Jet(space, np.array([c.coeffs for c in b1]), y0),
        b0,
    )


def act_direct(f, lam, A, x, mu=None):
    """Coefficients of ``(f*)^-1 o A o f*`` at ``f(x)``."""
    return _triple_from_jets(OperatorValue, act_direct_jets(f, lam, A, x, 0, mu=mu))


def act_direct_field(f, lam, A, mu=None):
    """``f(A)`` as an :class:`OperatorCoeffs` field on the target side."""
    f_inv = invert(f)

    def jets(y, r):
        out = act_direct_jets(f, lam, A, f_inv(y), r, mu=mu)
        return tuple(Jet(c.space, c.coeffs, y) for c in out)

    return _triple_field(OperatorCoeffs, A.dim, jets, "act")


def tensor_pushforward(f, sigma, x):
    """Plain tensorial transport of a symbol triple from ``x`` to ``f(x)``."""
    F = jet_at(f, x, 1)
    D = F.linear_part()
    s = sigma.value(x) if isinstance(sigma, TripleField) else sigma
    return SymbolTriple(D @ s.a2 @ D.T, D @ s.a1, s.a0)


S_TERM_COEFFICIENTS = ("n+1", "2")


def act_explicit(f, lam, sigma, x, s_coefficient="n+1"):
    """Symbol of ``f(A)`` at ``f(x)`` from the symbol field ``sigma`` of ``A``.

    ``a2bar`` and ``a1bar`` are transported tensorially, then corrected by
    ``(2 lam - 1)(n+1)/(n+3) ell(f^-1)^i_kl a2'^kl`` and
    ``-c lam (lam - 1)/(n+2) S(f^-1)(a2')``, with the flat cocycles of the
    inverse map taken at ``f(x)`` and ``a2'`` the transported ``a2bar`` field.

    ``c = n + 1`` makes the result agree with conjugation (:func:`act_direct`
    followed by :func:`symbol_map`); ``s_coefficient="2"`` selects ``c = 2``,
    which agrees only in dimension 1.
    """
    if s_coefficient not in S_TERM_COEFFICIENTS:
        raise ValueError(f"s_coefficient must be one of {S_TERM_COEFFICIENTS}")
    n = f.dim
    _require_multidim(n)
    F = jet_at(f, x, 3)
    D = F.jacobian().truncate(1)
    s2, s1, s0 = sigma.jets(F.base, 1)
    pushed = contract("ai,ij,bj->ab", D, s2, D)
    G = map_inverse(F)
    a2p = compose(pushed, G.truncate(1))
    A2 = np.asarray(a2p.value)
    A1 = np.asarray(D.value) @ np.asarray(s1.value)
    A0 = float(s0.value)
    ell = np.asarray(ell_flat_jet(G.truncate(2)).value)
    S = schwarzian_flat_jet(G)
    A1 = A1 + (2 * lam - 1) * (n + 1) / (n + 3) * np.einsum("ikl,kl->i", ell, A2)
    s_term = S.apply(A2, np.asarray(a2p.gradient().value))
    c = n + 1.0 if s_coefficient == "n+1" else 2.0
    A0 = A0 - c * lam * (lam - 1) / (n + 2) * s_term
    return SymbolTriple(A2, A1, A0)


# -- dimension one -------------------------------------------------------------

STURM_LIOUVILLE_WEIGHTS = (-0.5, 1.5)


def sturm_liouville_operator(u):
    """``-2 d^2/dx^2 + u`` as :class:`OperatorCoeffs` on the line."""
    return OperatorCoeffs(ConstantField(1, [[-2.0]]), ConstantField(1, [0.0]), u)


def sturm_liouville_act(f, u, x):
    """Potential ``v`` of ``f(-2 d^2 + u) = -2 d^2 + v`` at ``y = f(x)``.

    ``v(y) = (u(x) + S(f)(x)) / f'(x)^2`` with ``S`` the classical Schwarzian,
    i.e. ``u o f^-1 ((f^-1)')^2`` plus the quadratic differential ``S(f)``
    carried to ``y``; equivalently ``u o f^-1 ((f^-1)')^2 - S(f^-1)(y)``.
    This is conjugation from densities of weight -1/2 to weight 3/2.
    Returns ``(v, metadata)``.
    """
    if f.dim != 1:
        raise DimensionError("the Sturm-Liouville action is one-dimensional")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    F = jet_at(f, x, 1)
    d1 = float(F.linear_part()[0, 0])
    v = (float(u.value(x)) + classical_schwarzian(f, x)) / d1**2
    lam, mu = STURM_LIOUVILLE_WEIGHTS
    meta = {
        "source_point": x.tolist(),
        "target_point": F.value.tolist(),
        "weights": {"lambda": lam, "mu": mu},
        "convention": "v(f(x)) = (u(x) + S(f)(x)) / f'(x)^2",
    }
    return v, meta
