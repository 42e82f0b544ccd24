"""
Miscellaneous utility functions for tests (common fixtures,
oracles, etc).
"""

import itertools

import numpy as np
import pytest


@pytest.fixture
def tmpfile(request, tmpdir_factory):
    """Fixture to create a temporary file"""
    return make_tmpfile(request, tmpdir_factory)


def make_tmpfile(request, tmpdir_factory, name='tmpfile'):
    my_dir = tmpdir_factory.mktemp('tmpdir')
    request.addfinalizer(lambda: my_dir.remove(rec=1))
    path_value = str(my_dir.join(name))
    open(path_value, 'a').close()
    return path_value


def write_file(path, text):
    with open(path, 'w') as f:
        f.write(text)
    return path


def random_skew(d, rng, scale=1.0):
    g = rng.standard_normal((d, d))
    return scale * 0.5 * (g - g.T)


def parity_vertices(d):
    """The 2^(d-1) vertices of {-1, 1}^d with an even number of -1 entries"""
    return np.array([v for v in itertools.product([1.0, -1.0], repeat=d)
                     if sum(x < 0 for x in v) % 2 == 0])


def brute_force_parity_projection(v):
    """
    Projection onto the even-parity polytope by enumeration: for every
    subset of vertices, project onto its affine hull and keep the candidate
    if its barycentric weights are nonnegative. The nearest candidate is the
    projection (it lies in the relative interior of some face).
    """
    v = np.asarray(v, dtype=np.float64)
    verts = parity_vertices(len(v))
    best, best_dist = None, np.inf
    for r in range(1, len(verts) + 1):
        for subset in itertools.combinations(range(len(verts)), r):
            vs = verts[list(subset)]
            kkt = np.zeros((r + 1, r + 1))
            kkt[:r, :r] = 2.0 * vs @ vs.T
            kkt[:r, r] = 1.0
            kkt[r, :r] = 1.0
            rhs = np.concatenate([2.0 * vs @ v, [1.0]])
            sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
            if np.linalg.norm(kkt @ sol - rhs) > 1e-9:
                continue
            w = sol[:r]
            if np.any(w < -1e-12) or abs(np.sum(w) - 1.0) > 1e-9:
                continue
            x = w @ vs
            dist = np.linalg.norm(x - v)
            if dist < best_dist:
                best, best_dist = x, dist
    return best
