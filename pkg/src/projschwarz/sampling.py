"""Seeded random test data shared by the property suite.

The generator is a 64-bit linear congruential generator so that other
implementations can reproduce every trial from the seed alone::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64
    uniform = (state >> 11) * 2^-53

Each check derives its own stream from ``(seed, check name)`` via
:func:`stream_seed`. Every generator draws in a fixed order documented on
the function.
"""

from __future__ import annotations

import zlib

import numpy as np

from .connection import ProjectiveField
from .density import OperatorCoeffs
from .diffeo import Moebius, PolynomialDiffeo, jet_at
from .errors import DomainError
from .fields import PolynomialField
from .jet import _multi_indices

LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

POINT_BOX = 0.5
MOEBIUS_MIN_DET = 0.1
MOEBIUS_MIN_DENOMINATOR = 0.25
CUBIC_EPS = 0.1
CUBIC_MIN_DET = 0.5
PI_COEFF_RANGE = 0.5
OPERATOR_COEFF_RANGE = 1.0
LAMBDAS = (0.0, 0.3, 0.5, 1.0)
MAX_REJECTIONS = 1000


class LCG:
    """The 64-bit LCG described in the module docstring."""

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (LCG_A * self.state + LCG_C) & MASK64
        return self.state

    def uniform(self, lo=0.0, hi=1.0):
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0**-53)

    def uniforms(self, count, lo=0.0, hi=1.0):
        return np.array([self.uniform(lo, hi) for _ in range(count)])

    def randint(self, k):
        """Integer in ``[0, k)``."""
        return int(self.uniform() * k) % k

    def choice(self, options):
        return options[self.randint(len(options))]


def stream_seed(seed, name):
    return (int(seed) + zlib.crc32(name.encode()) * GOLDEN) & MASK64


def rng_for(seed, name):
    return LCG(stream_seed(seed, name))


def random_point(rng, n, box=POINT_BOX):
    return rng.uniforms(n, -box, box)


def random_moebius(rng, n, x=None, orientation=False):
    """Matrix entries uniform in [-1, 1], |det| > 0.1.

    With ``x`` given, also require ``|c.x + d| >= 0.25`` there and, if
    ``orientation`` is set, a positive Jacobian at ``x``.
    """
    for _ in range(MAX_REJECTIONS):
        m = rng.uniforms((n + 1) ** 2, -1.0, 1.0).reshape(n + 1, n + 1)
        if abs(np.linalg.det(m)) <= MOEBIUS_MIN_DET:
            continue
        if x is not None:
            if abs(m[-1, :-1] @ x + m[-1, -1]) < MOEBIUS_MIN_DENOMINATOR:
                continue
            f = Moebius(m)
            if orientation and np.linalg.det(f.jet(x, 1).linear_part()) <= 0:
                continue
            return f
        return Moebius(m)
    raise DomainError("could not draw a Moebius map")


def random_cubic(rng, n, eps=CUBIC_EPS, x=None, min_det=CUBIC_MIN_DET, degree=3):
    """``id + eps * P`` with P of degree 1..3, coefficients uniform in [-1, 1].

    Redrawn until the Jacobian determinant at ``x`` (default: the origin)
    exceeds ``min_det``.
    """
    mons = _multi_indices(n, degree)
    probes = [np.zeros(n)] if x is None else [np.asarray(x, dtype=float)]
    for _ in range(MAX_REJECTIONS):
        c = rng.uniforms(n * len(mons), -1.0, 1.0).reshape(n, len(mons)) * eps
        c[:, 0] = 0.0
        c[:, 1 : n + 1] += np.eye(n)
        f = PolynomialDiffeo(PolynomialField(n, mons, c))
        if all(np.linalg.det(f.jet(p, 1).linear_part()) > min_det for p in probes):
            return f
    raise DomainError("could not draw a cubic perturbation")


def random_map(rng, n, x, orientation=False):
    """Moebius or cubic perturbation with equal probability."""
    if rng.uniform() < 0.5:
        return random_moebius(rng, n, x=x, orientation=orientation)
    return random_cubic(rng, n, x=x)


def random_polynomial_field(rng, n, shape, degree=2, scale=1.0):
    mons = _multi_indices(n, degree)
    size = int(np.prod(shape, dtype=int)) * len(mons)
    c = rng.uniforms(size, -scale, scale).reshape(tuple(shape) + (len(mons),))
    return PolynomialField(n, mons, c)


def random_projective_field(rng, n, degree=2, scale=PI_COEFF_RANGE):
    """Trace-free projection of a random symmetric polynomial Gamma."""
    g = random_polynomial_field(rng, n, (n, n, n), degree, scale)
    c = 0.5 * (g.coeffs + np.swapaxes(g.coeffs, 1, 2))
    tr = np.einsum("lil...->i...", c)
    eye = np.eye(n)
    corr = np.einsum("ki,j...->kij...", eye, tr) + np.einsum("kj,i...->kij...", eye, tr)
    proj = c - corr / (n + 1)
    return ProjectiveField(PolynomialField(n, g.exponents, proj))


def random_operator(rng, n, degree=2, scale=OPERATOR_COEFF_RANGE):
    """Polynomial coefficients ``(a2 symmetric, a1, a0)`` of degree <= 2."""
    a2 = random_polynomial_field(rng, n, (n, n), degree, scale)
    c = 0.5 * (a2.coeffs + np.swapaxes(a2.coeffs, 0, 1))
    return OperatorCoeffs(
        PolynomialField(n, a2.exponents, c),
        random_polynomial_field(rng, n, (n,), degree, scale),
        random_polynomial_field(rng, n, (), degree, scale),
    )


def is_valid_at(f, x, order=1):
    try:
        jet_at(f, x, order)
    except (DomainError, ArithmeticError, ValueError):
        return False
    return True
