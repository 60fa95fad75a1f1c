"""Projectively equivariant Schwarzian derivative and the classical 1-D one.

Three routes compute the same operator ``S(f)`` on flat structures:

* :func:`schwarzian` takes ``T(f*Pi) - T(Pi)`` for any projective field;
* :func:`schwarzian_flat` builds it from the 1-jet of ``ell(f)``;
* :func:`schwarzian_coord` uses third derivatives of ``f`` and of ``J_f``.

>>> from projschwarz.diffeo import ExprDiffeo
>>> classical_schwarzian(ExprDiffeo(["x1^2"]), [1.0])
-1.5
"""

from __future__ import annotations

import numpy as np

from .connection import (
    S2OperatorValue,
    _require_multidim,
    default_coefficients,
    ell_flat_jet,
    pullback_connection,
    t_difference,
)
from .diffeo import jet_at
from .errors import DimensionError, SingularJacobianError
from .jet import det, matinv


def schwarzian(f, P, x):
    """``S(f)`` at ``x`` relative to the projective field ``P`` (n >= 2)."""
    _require_multidim(f.dim)
    return t_difference(pullback_connection(f, P), P, x)


def schwarzian_flat_jet(F):
    """``S(f)`` for the flat structure from a map jet of order >= 3."""
    n = F.dim
    alpha, beta = default_coefficients(n)
    ell = ell_flat_jet(F.truncate(3))
    L = np.asarray(ell.value)
    div = np.einsum("kijk->ij", np.asarray(ell.gradient().value))
    quad = np.einsum("kim,mkj->ij", L, L)
    return S2OperatorValue(L, alpha * div + beta * quad)


def schwarzian_flat(f, x):
    """``S(f)`` at ``x`` for the flat structure, from the 1-jet of ``ell(f)``."""
    _require_multidim(f.dim)
    return schwarzian_flat_jet(jet_at(f, x, 3))


def _third_order_terms(F):
    """Pointwise arrays used by the coordinate formula (F of order >= 3)."""
    F = F.truncate(3)
    D = F.jacobian()
    Dinv = np.asarray(matinv(D).value)
    d2 = D.gradient()
    d3 = np.asarray(d2.gradient().value)  # [k, i, j, l] = d3 f^k / dx^i dx^j dx^l
    J = det(D)
    J0 = float(J.value)
    if J0 == 0.0:
        raise SingularJacobianError("Jacobian vanishes")
    dJ = J.gradient()
    return {
        "D3": np.einsum("kijl,lk->ij", d3, Dinv),
        "Q": np.einsum("kim,ljs,ml,sk->ij", np.asarray(d2.value), np.asarray(d2.value), Dinv, Dinv),
        "J": J0,
        "dJ": np.asarray(dJ.value),
        "d2J": np.asarray(dJ.gradient().value),
    }


def schwarzian_coord(f, x):
    """``S(f)`` at ``x`` from derivatives of ``f`` and ``J_f`` (any n >= 1).

    In dimension 1 the scalar part is minus the classical Schwarzian.
    """
    F = jet_at(f, x, 3)
    n = F.dim
    d = _third_order_terms(F)
    J, dJ = d["J"], d["dJ"]
    u = (
        d["D3"]
        - (n + 3.0) / (n + 1.0) * d["d2J"] / J
        + (n + 2.0) / (n + 1.0) * np.outer(dJ, dJ) / J**2
    )
    return S2OperatorValue(np.asarray(ell_flat_jet(F.truncate(2)).value), u)


def jacobian_identity_residual(f, x, sign=-1.0):
    """Max-norm of ``D3 - Q - J^-1 d2J + sign * (-J^-2 dJ dJ)``.

    ``D3 = d3f^k/dx^i dx^j dx^l dx^l/df^k`` and
    ``Q = d2f^k/dx^i dx^m d2f^l/dx^j dx^s dx^m/df^l dx^s/df^k``.
    The identity holds with ``sign=-1``, i.e.
    ``D3 - Q = J^-1 d2J - J^-2 dJ dJ``; ``sign=+1`` gives the variant with
    the last sign flipped, which does not vanish in general.
    """
    d = _third_order_terms(jet_at(f, x, 3))
    J, dJ = d["J"], d["dJ"]
    resid = d["D3"] - d["Q"] - d["d2J"] / J + sign * (-np.outer(dJ, dJ) / J**2)
    return float(np.max(np.abs(resid)))


def verify_jacobian_identity(f, x):
    """Residual of ``D3 - Q = J^-1 d2J - J^-2 dJ dJ`` at ``x``; should be ~0."""
    return jacobian_identity_residual(f, x, sign=-1.0)


def classical_schwarzian(f, x):
    """``f'''/f' - 3/2 (f''/f')^2`` at ``x`` for a map of the line."""
    if f.dim != 1:
        raise DimensionError(f"classical Schwarzian needs dimension 1, got {f.dim}")
    c = jet_at(f, x, 3).coeffs[0]
    d1, d2, d3 = c[1], 2.0 * c[2], 6.0 * c[3]
    if d1 == 0.0:
        raise SingularJacobianError(f"critical point of {f!r} at {np.asarray(x).tolist()}")
    return float(d3 / d1 - 1.5 * (d2 / d1) ** 2)
