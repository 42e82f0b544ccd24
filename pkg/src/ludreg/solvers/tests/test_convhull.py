import numpy as np
import pytest

from ludreg import config
from ludreg.exceptions import DimensionTooLarge
from ludreg.python.test.util import brute_force_parity_projection, \
    parity_vertices
from ludreg.sogeom import random_rotation
from ludreg.solvers import Membership, signed_svd, project_even_parity, \
    project_conv_so, membership_conv_so
from ludreg.solvers.convhull import MAX_MEMBERSHIP_DIM, parity_operators


def test01_signed_svd(rng, dims):
    a = rng.standard_normal((dims, dims))
    spectrum = signed_svd(a)
    assert np.allclose(spectrum.recompose(), a, atol=1e-12)
    assert np.linalg.det(spectrum.u_frame @ spectrum.v_frame.T) \
        == pytest.approx(1.0)
    s = spectrum.signed_values
    assert np.all(np.diff(s[:-1]) <= 0)
    assert s[-2] >= abs(s[-1])
    assert np.sign(s[-1]) == np.sign(np.linalg.det(a))


def test02_even_parity_cases():
    assert np.allclose(project_even_parity([1.0, 1.0, -1.0]),
                       [1 / 3, 1 / 3, -1 / 3])
    # Points of the cube satisfying every facet are kept
    assert np.allclose(project_even_parity([0.2, -0.5, 0.1]),
                       [0.2, -0.5, 0.1])
    assert np.allclose(project_even_parity([3.0, 2.0, 5.0]), [1, 1, 1])
    for v in parity_vertices(4):
        assert np.array_equal(project_even_parity(v), v)
    # In two dimensions the polytope is the segment between (1, 1) and
    # (-1, -1)
    assert np.allclose(project_even_parity([1.0, -1.0]), [0.0, 0.0])
    assert np.allclose(project_even_parity([0.5, 0.1]), [0.3, 0.3])


def test03_even_parity_against_enumeration(rng, small_dims):
    for _ in range(20):
        v = 1.5 * rng.standard_normal(small_dims)
        assert np.allclose(project_even_parity(v),
                           brute_force_parity_projection(v), atol=1e-9)


def test04_projection_properties(rng):
    for _ in range(50):
        a = 2.0 * rng.standard_normal((3, 3))
        b = 2.0 * rng.standard_normal((3, 3))
        pa, pb = project_conv_so(a), project_conv_so(b)
        assert np.allclose(project_conv_so(pa), pa, atol=1e-10)
        assert np.linalg.norm(pa - pb) <= np.linalg.norm(a - b) + 1e-10

    r = random_rotation(4, rng).matrix
    assert np.allclose(project_conv_so(r), r, atol=1e-12)
    assert np.allclose(project_conv_so(np.zeros((3, 3))), 0.0)


def test05_membership_status():
    cert = membership_conv_so(0.9 * np.eye(3))
    assert cert.status is Membership.MEMBER
    assert cert.slack == pytest.approx(0.1)
    assert cert.is_member

    cert = membership_conv_so(np.diag([1.0, 1.0, -1.0]))
    assert cert.status is Membership.NON_MEMBER
    assert not cert.is_member

    cert = membership_conv_so(np.diag([1.0, 1.0, -1.0]) / 3.0)
    assert cert.status is Membership.BOUNDARY
    assert cert.slack == pytest.approx(0.0, abs=1e-12)
    assert 'status=boundary' in repr(cert)

    cert = membership_conv_so(2.0 * np.eye(3))
    assert cert.status is Membership.NON_MEMBER
    assert cert.operator_slack == pytest.approx(-1.0)


def test06_membership_of_rotations(rng, dims):
    # Every rotation is an extreme point, hence on the boundary
    r = random_rotation(dims, rng).matrix
    cert = membership_conv_so(r)
    assert cert.status is Membership.BOUNDARY
    assert cert.is_member
    assert abs(cert.slack) <= cert.margin
    reflection = r.copy()
    reflection[0] = -reflection[0]
    if dims > 2:
        assert membership_conv_so(reflection).status \
            is Membership.NON_MEMBER


def test07_membership_in_two_dimensions(rng):
    # conv SO(2) is two dimensional, its interior points meet the parity
    # condition with equality
    a = np.array([[0.3, -0.2], [0.2, 0.3]])
    cert = membership_conv_so(a)
    assert cert.status is Membership.BOUNDARY
    assert cert.operator_slack > 0.5
    assert membership_conv_so(np.diag([0.5, 0.1])).status \
        is Membership.NON_MEMBER


def test08_parity_operators():
    ops = parity_operators(3)
    assert ops.shape == (3, 3, 4, 4)
    assert np.allclose(ops, np.swapaxes(ops, 2, 3))
    assert not ops.flags.writeable
    assert parity_operators(3) is ops


def test09_dimension_too_large():
    with pytest.raises(DimensionTooLarge) as excinfo:
        membership_conv_so(np.eye(MAX_MEMBERSHIP_DIM + 1))
    assert 'd = 9 exceeds the supported maximum of 8' in str(excinfo.value)
    # The projection itself has no dimension limit
    assert np.allclose(project_conv_so(np.eye(12)), np.eye(12))


def test10_debug_certification(monkeypatch, rng):
    monkeypatch.setattr(config, 'DEBUG', True)
    a = 3.0 * rng.standard_normal((4, 4))
    assert membership_conv_so(project_conv_so(a)).is_member


@pytest.mark.slow
@pytest.mark.parametrize('d', [2, 3, 4])
def test11_projection_acceptance(rng, d):
    rotations = [random_rotation(d, rng).matrix for _ in range(200)]
    for _ in range(200):
        a = 2.0 * rng.standard_normal((d, d))
        p = project_conv_so(a)

        spectrum = signed_svd(a)
        expected = spectrum.recompose(
            brute_force_parity_projection(spectrum.signed_values))
        assert np.allclose(p, expected, atol=1e-6)

        assert membership_conv_so(p, margin=1e-6).is_member
        # Variational inequality <A - P, Q - P> <= 0 for Q in conv SO(d)
        inner = [np.sum((a - p) * (q - p)) for q in rotations]
        assert max(inner) <= 1e-8
