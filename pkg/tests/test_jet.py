import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from projschwarz.errors import JetError, SingularJacobianError
from projschwarz.jet import (
    Jet,
    MapJet,
    compose,
    coordinate_jets,
    exp,
    inv,
    jacobian_det,
    jet_space,
    jet_var,
    log,
    map_compose,
    map_inverse,
    partial,
    power,
)

from oracles import coords, taylor


def close_dict(got, want, tol=1e-12):
    keys = set(got) | set(want)
    return all(abs(got.get(k, 0.0) - want.get(k, 0.0)) <= tol for k in keys)


def test_jet_var():
    assert jet_var(1, 0.5, 2, 3).to_dict() == {(0, 0): 0.5, (1, 0): 1.0}
    with pytest.raises(JetError):
        jet_var(2, 0.0, 1, 3)


def test_square_of_shifted_variable():
    h = jet_var(1, 2.0, 1, 2)
    assert close_dict((h * h).to_dict(), {(0,): 4.0, (1,): 4.0, (2,): 1.0})


def test_products_and_truncation():
    h = jet_var(1, 0.0, 1, 2)
    assert close_dict(((1 + h) * (1 - h)).to_dict(), {(0,): 1.0, (2,): -1.0})
    h1 = jet_var(1, 0.0, 1, 1)
    assert close_dict(((1 + h1) * (1 + h1)).to_dict(), {(0,): 1.0, (1,): 2.0})
    x, y = jet_var(1, 2.0, 2, 3), jet_var(2, 3.0, 2, 3)
    assert close_dict((x * y).to_dict(), {(0, 0): 6.0, (1, 0): 3.0, (0, 1): 2.0, (1, 1): 1.0})


def test_mismatched_spaces_raise():
    with pytest.raises(JetError):
        jet_var(1, 0.0, 1, 2) + jet_var(1, 0.0, 1, 3)


def test_elementary_functions():
    h = jet_var(1, 0.0, 1, 2)
    assert close_dict(inv(1 + h).to_dict(), {(0,): 1.0, (1,): -1.0, (2,): 1.0})
    h3 = jet_var(1, 0.0, 1, 3)
    assert close_dict(log(1 + h3).to_dict(), {(1,): 1.0, (2,): -0.5, (3,): 1.0 / 3})
    two = Jet.constant(jet_space(1, 3), 2.0)
    assert inv(two).to_dict() == {(0,): 0.5}
    with pytest.raises(JetError):
        inv(h3)
    with pytest.raises(JetError):
        log(h3 - 1)


def test_compose_examples():
    F = MapJet.from_components([1 + jet_var(1, 0.0, 1, 2) * (1 + jet_var(1, 0.0, 1, 2))])
    y = jet_var(1, 1.0, 1, 2)
    g = y * y
    g.base = np.array([1.0])
    assert close_dict(compose(g, F).to_dict(), {(0,): 1.0, (1,): 2.0, (2,): 3.0})
    const = Jet.constant(jet_space(1, 2), 7.0, [1.0])
    assert compose(const, F).to_dict() == {(0,): 7.0}
    X = coordinate_jets([1.0], 2)
    assert np.allclose(compose(X[0], F).coeffs, F.coeffs[0])


def test_compose_base_mismatch():
    F = coordinate_jets([0.0, 0.0], 2)
    g = coordinate_jets([1.0, 0.0], 2)[0]
    with pytest.raises(JetError):
        compose(g, F)


def test_map_inverse_series_reversion():
    h = jet_var(1, 0.0, 1, 3)
    F = MapJet.from_components([h + h * h], base=[0.0])
    G = map_inverse(F)
    assert close_dict(G[0].to_dict(), {(1,): 1.0, (2,): -1.0, (3,): 2.0})
    ident = map_compose(F, G)
    assert np.allclose(ident.coeffs, coordinate_jets([0.0], 3).coeffs, atol=1e-12)


def test_map_inverse_linear_and_singular():
    M = np.array([[2.0, 1.0], [0.5, 3.0]])
    X = coordinate_jets([0.0, 0.0], 2)
    F = MapJet(X.space, M @ X.coeffs, [0.0, 0.0])
    G = map_inverse(F)
    assert np.allclose(G.linear_part(), np.linalg.inv(M))
    assert np.allclose(G.coeffs[:, 3:], 0.0)
    Z = MapJet(X.space, np.zeros_like(X.coeffs), [0.0, 0.0])
    with pytest.raises(SingularJacobianError):
        map_inverse(Z)


def test_jacobian_det_examples():
    X = coordinate_jets([0.3, -0.2], 3)
    assert close_dict(jacobian_det(X).to_dict(), {(0, 0): 1.0})
    x, y = X
    F = MapJet.from_components([x + y * y, y])
    assert close_dict(jacobian_det(F).to_dict(), {(0, 0): 1.0})
    h = jet_var(1, 0.0, 1, 3)
    G = MapJet.from_components([h + h * h], base=[0.0])
    assert close_dict(jacobian_det(G).to_dict(), {(0,): 1.0, (1,): 2.0})


def test_partial():
    x = jet_var(1, 1.0, 1, 3)
    assert partial(x * x, (2,)) == pytest.approx(2.0)
    assert partial(x * x, (0,)) == pytest.approx(1.0)
    X = coordinate_jets([2.0, 3.0], 3)
    assert partial(X[0] * X[1], (1, 1)) == pytest.approx(1.0)
    with pytest.raises(JetError):
        partial(x, (4,))


def test_jets_match_symbolic_derivatives():
    xs = coords(2)
    expr = sp.exp(xs[0]) * sp.log(1 + xs[1] ** 2) / (2 + xs[0] * xs[1])
    p = (0.3, -0.7)
    X = coordinate_jets(p, 4)
    x, y = X
    got = exp(x) * log(1 + y * y) * inv(2 + x * y)
    want = taylor(expr, xs, p, 4)
    assert close_dict(got.to_dict(), want, tol=1e-12)


def test_power_matches_symbolic():
    xs = coords(1)
    expr = (1 + xs[0] + xs[0] ** 2) ** sp.Rational(3, 10)
    X = coordinate_jets([0.4], 5)
    got = power(1 + X[0] + X[0] * X[0], 0.3)
    assert close_dict(got.to_dict(), taylor(expr, xs, (0.4,), 5), tol=1e-12)


def test_finite_difference_cross_check():
    def fn(x, y):
        return math.sin(x) * math.exp(y) + x * x * y

    p = np.array([0.2, 0.5])
    x, y = coordinate_jets(p, 2)
    jet = exp(y) * _sin(x) + x * x * y
    step = 1e-3
    fd = np.array(
        [
            (fn(p[0] + step, p[1]) - fn(p[0] - step, p[1])) / (2 * step),
            (fn(p[0], p[1] + step) - fn(p[0], p[1] - step)) / (2 * step),
        ]
    )
    grad = np.asarray(jet.gradient().value)
    assert np.max(np.abs(grad - fd)) <= 1e-4 * np.max(np.abs(grad))


def _sin(a):
    c = a.value
    d = a - c
    out = Jet.constant(a.space, math.sin(c), a.base)
    term = Jet.constant(a.space, 1.0, a.base)
    derivs = [math.sin(c), math.cos(c), -math.sin(c), -math.cos(c)]
    for k in range(1, a.order + 1):
        term = term * d
        out = out + term * (derivs[k % 4] / math.factorial(k))
    return out


jet_dims = st.integers(1, 3)
jet_orders = st.integers(0, 3)


def _random_jet(seed, n, K):
    rng = np.random.default_rng(seed)
    space = jet_space(n, K)
    return Jet(space, rng.uniform(-1, 1, space.size))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), jet_dims, jet_orders)
def test_ring_laws(seed, n, K):
    a, b, c = (_random_jet(seed + i, n, K) for i in range(3))
    assert np.max(np.abs(((a * b) * c).coeffs - (a * (b * c)).coeffs)) < 1e-13 * 8
    assert np.max(np.abs((a * (b + c)).coeffs - (a * b + a * c).coeffs)) < 1e-13 * 8
    assert np.max(np.abs((a * b).coeffs - (b * a).coeffs)) < 1e-14


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), jet_dims, jet_orders)
def test_inverse_is_reciprocal(seed, n, K):
    a = _random_jet(seed, n, K)
    a.coeffs[0] = 1.5
    unit = (a * inv(a)).coeffs
    want = np.zeros_like(unit)
    want[0] = 1.0
    assert np.max(np.abs(unit - want)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_map_inverse_is_right_inverse(seed, n, K):
    rng = np.random.default_rng(seed)
    X = coordinate_jets(rng.uniform(-1, 1, n), K)
    pert = rng.uniform(-0.2, 0.2, X.coeffs.shape)
    pert[:, 0] = 0.0
    F = MapJet(X.space, X.coeffs + pert, X.base)
    G = map_inverse(F)
    ident = map_compose(F, G)
    assert np.max(np.abs(ident.coeffs - coordinate_jets(F.value, K).coeffs)) < 1e-10
