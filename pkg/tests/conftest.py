import numpy as np
import pytest

from lrpc_rings import ExtensionDesc, Zmod, galois_ring, quotient_ring


@pytest.fixture(scope="session")
def z4():
    return Zmod(4)


@pytest.fixture(scope="session")
def z9():
    return Zmod(9)


@pytest.fixture(scope="session")
def z8():
    return Zmod(8)


@pytest.fixture(scope="session")
def rxi():
    """Z4[x]/(x^2), the running local-ring example."""
    return quotient_ring(2, 2, [0, 0, 1])


@pytest.fixture(scope="session")
def gr42():
    return galois_ring(2, 2, 2)


@pytest.fixture(scope="session")
def s5(z4):
    """Z4[t]/(t^5+t^2+1), the worked-example extension."""
    return ExtensionDesc(z4, 5, f=[1, 0, 1, 0, 0, 1])


@pytest.fixture()
def rng():
    return np.random.default_rng(0xC0FFEE)


def schoolbook_ext_mul(ext, a, b):
    """Oracle: polynomial multiplication over R followed by long division
    by the extension modulus (independent of the structure tensor)."""
    ring = ext.base
    m = ext.m
    av = ext.vec_rep(np.asarray(a))
    bv = ext.vec_rep(np.asarray(b))
    conv = np.zeros((2 * m - 1 if m > 1 else 1, ring.D), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            conv[i + j] = ring.add(conv[i + j], ring.mul(av[i], bv[j]))
    for deg in range(conv.shape[0] - 1, m - 1, -1):
        c = conv[deg].copy()
        if not c.any():
            continue
        conv[deg] = 0
        red = ring.mul(c[None, :], ext.f[:m])
        conv[deg - m:deg] = (conv[deg - m:deg] - red) % ring.char
    return ext.unrep(conv[:m] % ring.char)


def brute_solution_set(ring, a, b):
    """All x with A x = b by exhaustive enumeration (vectorized)."""
    elems = ring.enumerate_elements()
    n = a.shape[1]
    idx = np.indices([len(elems)] * n).reshape(n, -1).T
    xs = elems[idx]
    prod = ring.mul(a[None, :, :, :], xs[:, None, :, :])
    out = prod.sum(axis=2) % ring.char
    ok = (out == b[None]).all(axis=(1, 2))
    return {x.tobytes() for x in xs[ok]}
