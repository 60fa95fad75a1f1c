import zlib

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from projschwarz.sampling import (
    LCG,
    random_cubic,
    random_moebius,
    random_projective_field,
    rng_for,
    stream_seed,
)


def test_lcg_recurrence():
    g = LCG(1)
    s = (6364136223846793005 * 1 + 1442695040888963407) % 2**64
    assert g.next_u64() == s
    g = LCG(1)
    assert g.uniform() == (s >> 11) * 2.0**-53


@given(st.integers(0, 2**64 - 1))
def test_uniform_range(seed):
    g = LCG(seed)
    u = g.uniforms(20, -0.5, 0.5)
    assert np.all(u >= -0.5) and np.all(u < 0.5)


def test_stream_seed():
    want = (5 + zlib.crc32(b"jet-ring") * 0x9E3779B97F4A7C15) % 2**64
    assert stream_seed(5, "jet-ring") == want
    assert rng_for(5, "a").next_u64() != rng_for(5, "b").next_u64()


def test_generators_respect_constraints():
    rng = LCG(9)
    x = np.array([0.1, -0.2])
    for _ in range(20):
        m = random_moebius(rng, 2, x=x, orientation=True)
        assert abs(np.linalg.det(m.matrix)) > 0.1
        assert abs(m.matrix[-1, :-1] @ x + m.matrix[-1, -1]) >= 0.25
        assert np.linalg.det(m.jet(x, 1).linear_part()) > 0
        f = random_cubic(rng, 2, x=x)
        assert np.linalg.det(f.jet(x, 1).linear_part()) > 0.5
        P = random_projective_field(rng, 3)
        v = P.value([0.1, 0.2, 0.3])
        assert np.max(np.abs(np.einsum("kik->i", v))) < 1e-12
