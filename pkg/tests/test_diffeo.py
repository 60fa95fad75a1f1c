import numpy as np
import pytest

from projschwarz.diffeo import (
    CallableDiffeo,
    ExprDiffeo,
    Moebius,
    compose_diffeos,
    identity,
    invert,
    jet_at,
    make_affine,
    make_moebius,
    orientation,
)
from projschwarz.errors import ConvergenceError, DomainError, SingularJacobianError
from projschwarz.jet import coordinate_jets, map_compose

from oracles import coords, taylor


def test_identity_jets_are_coordinate_jets():
    x = [0.2, -0.4, 0.1]
    F = jet_at(identity(3), x, 3)
    assert np.array_equal(F.coeffs, coordinate_jets(x, 3).coeffs)


def test_one_dimensional_moebius_coefficients():
    F = jet_at(make_moebius([[2.0, 1.0], [1.0, 1.0]]), [0.0], 3)
    assert np.allclose(F.coeffs[0], [1.0, 1.0, -1.0, 1.0])


def test_moebius_matches_fractional_linear_formula():
    a, b, c, d = 0.7, -0.2, 0.4, 1.3
    f = make_moebius([[a, b], [c, d]])
    for x in (-0.5, 0.1, 0.9):
        assert f([x])[0] == pytest.approx((a * x + b) / (c * x + d), rel=1e-14)


def test_moebius_identity_and_domain():
    f = make_moebius(np.eye(3))
    assert np.allclose(f([0.3, 0.4]), [0.3, 0.4])
    g = make_moebius([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    assert not g.in_domain([-1.0, 0.0])
    with pytest.raises(DomainError):
        g([-1.0, 0.0])
    with pytest.raises(DomainError):
        jet_at(g, [-1.0, 0.0], 2)
    with pytest.raises(SingularJacobianError):
        make_moebius(np.zeros((3, 3)))


def test_moebius_group_law():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m1, m2 = rng.uniform(-1, 1, (2, 3, 3)) + 2 * np.eye(3)
        x = rng.uniform(-0.3, 0.3, 2)
        lhs = jet_at(compose_diffeos(make_moebius(m1), make_moebius(m2)), x, 3)
        rhs = jet_at(make_moebius(m1 @ m2), x, 3)
        assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) <= 1e-11 * np.max(np.abs(rhs.coeffs))


def test_invert_moebius_matches_inverse_matrix():
    m = np.array([[1.0, 0.2, 0.1], [0.3, 1.1, -0.2], [0.1, -0.3, 1.0]])
    g = invert(make_moebius(m))
    h = make_moebius(np.linalg.inv(m))
    for x in ([0.1, 0.2], [-0.4, 0.3]):
        assert np.max(np.abs(g(x) - h(x))) < 1e-12


def test_invert_identity():
    assert invert(identity(2)) is not None
    assert np.allclose(invert(identity(2))([0.5, 0.6]), [0.5, 0.6])


def test_newton_inverse():
    f = ExprDiffeo(["x1 + x2^2", "x2"])
    g = invert(f)
    assert np.allclose(g([1.25, 0.5]), [1.0, 0.5], atol=1e-12)
    exact = ExprDiffeo(["x1 - x2^2", "x2"])
    assert np.allclose(jet_at(g, [1.25, 0.5], 3).coeffs, jet_at(exact, [1.25, 0.5], 3).coeffs)


def test_newton_inverse_failure():
    g = invert(ExprDiffeo(["x1^2 + 1"]))
    with pytest.raises(ConvergenceError):
        g([0.0])


def test_chain_rule_against_composition():
    f = ExprDiffeo(["x1 + 0.1*x2^3", "x2 - 0.2*x1*x2"])
    g = make_moebius([[1, 0.1, 0], [0.2, 1, 0.1], [0.1, 0.2, 1]])
    x = np.array([0.3, -0.1])
    lhs = jet_at(compose_diffeos(f, g), x, 4)
    G = jet_at(g, x, 4)
    rhs = map_compose(jet_at(f, G.value, 4), G)
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-13


def test_expression_map_against_symbolic_taylor():
    xs = coords(2)
    comps = [xs[0] + xs[1] ** 2 / (1 + xs[0] ** 2), xs[1] * (1 + xs[0]) ** 3]
    f = ExprDiffeo(["x1 + x2^2/(1 + x1^2)", "x2*(1 + x1)^3"])
    p = (0.4, -0.3)
    F = jet_at(f, p, 4)
    for k, c in enumerate(comps):
        want = taylor(c, xs, p, 4)
        got = F[k].to_dict()
        assert all(abs(got.get(a, 0.0) - v) < 1e-12 for a, v in want.items())


def test_orientation_flag():
    f = make_affine([[-1.0, 0.0], [0.0, 1.0]])
    F = jet_at(f, [0.0, 0.0], 1)
    assert orientation(F) == -1
    assert orientation(jet_at(identity(2), [0.0, 0.0], 1)) == 1


def test_singular_jacobian():
    f = ExprDiffeo(["x1^2", "x2"])
    with pytest.raises(SingularJacobianError):
        jet_at(f, [0.0, 0.5], 2)


def test_callable_diffeo():
    from projschwarz.jet import exp

    f = CallableDiffeo(lambda x: [exp(x[0])] if not isinstance(x[0], float) else [np.exp(x[0])], 1)
    F = jet_at(f, [0.0], 3)
    assert np.allclose(F.coeffs[0], [1.0, 1.0, 0.5, 1.0 / 6])


def test_moebius_is_a_moebius_instance():
    assert isinstance(make_moebius(np.eye(2)), Moebius)
