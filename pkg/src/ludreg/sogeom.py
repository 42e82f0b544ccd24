"""
Geometry of the special orthogonal group SO(d).

Rotations and tangent vectors are wrapped in the small immutable value types
:py:class:`Rotation` and :py:class:`SkewSym`, which validate their invariants
on construction. The exponential and the principal logarithm are both
computed from a real Schur factorization, which splits a rotation (or a skew
matrix) into mutually orthogonal 2-planes. In every plane the map reduces to
the closed form

    exp(theta * A2) = [[cos(theta), -sin(theta)], [sin(theta), cos(theta)]]

with ``A2 = [[0, -1], [1, 0]]``.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.stats

from .config import ROTATION_TOL, SKEW_TOL, ANGLE_PI_TOL
from .exceptions import NotARotation, DomainError, IllConditionedLog, \
    DegenerateProjection

log = logging.getLogger(__name__)

A2 = np.array([[0.0, -1.0], [1.0, 0.0]])
A2.setflags(write=False)


def _square(matrix, name):
    m = np.array(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError('%s: expected a square matrix, got shape %s'
                         % (name, m.shape))
    return m


def _format_matrix(m):
    return np.array2string(m, precision=6, suppress_small=True,
                           prefix='  matrix = ').replace('\n', '\n  ')


def planar_rotation(theta):
    """Returns the 2x2 rotation matrix ``exp(theta * A2)``"""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class Rotation:
    """
    A proper rotation matrix of size d >= 2.

    Parameter ``matrix`` (array_like):
        A ``d x d`` matrix. It is copied and frozen.

    Parameter ``check`` (bool):
        Verify ``|R^T R - I|_F <= 1e-9`` and ``|det R - 1| <= 1e-9``. Only
        internal code that produces rotations by construction passes
        ``False``.
    """

    __slots__ = ('_matrix',)

    def __init__(self, matrix, check=True):
        if isinstance(matrix, Rotation):
            matrix = matrix._matrix
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise NotARotation('Rotation(): expected a square matrix of size '
                               '>= 2, got shape %s' % (m.shape,))
        if check:
            d = m.shape[0]
            err = np.linalg.norm(m.T @ m - np.eye(d))
            if not err <= ROTATION_TOL:
                raise NotARotation('Rotation(): matrix is not orthogonal '
                                   '(|R^T R - I|_F = %.3g)' % err)
            det = np.linalg.det(m)
            if not abs(det - 1.0) <= ROTATION_TOL:
                raise NotARotation('Rotation(): determinant is %.12g, '
                                   'expected 1' % det)
        m.setflags(write=False)
        self._matrix = m

    @staticmethod
    def identity(d):
        return Rotation(np.eye(d), check=False)

    @property
    def matrix(self):
        """Read-only ``d x d`` array"""
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    @property
    def T(self):
        return Rotation(self._matrix.T, check=False)

    def __array__(self, dtype=None, copy=None):
        if copy:
            return np.array(self._matrix, dtype=dtype)
        return np.asarray(self._matrix, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, Rotation):
            return Rotation(self._matrix @ other._matrix, check=False)
        return self._matrix @ np.asarray(other)

    def __rmatmul__(self, other):
        return np.asarray(other) @ self._matrix

    def __repr__(self):
        return 'Rotation[\n  dim = %i,\n  matrix = %s\n]' % (
            self.dim, _format_matrix(self._matrix))


class SkewSym:
    """
    A skew-symmetric ``d x d`` matrix, i.e. an element of the Lie algebra
    so(d). Tangent vectors at a rotation ``R`` are represented by their
    coordinates ``S`` such that the tangent vector is ``R @ S``.
    """

    __slots__ = ('_matrix',)

    def __init__(self, matrix, check=True):
        if isinstance(matrix, SkewSym):
            matrix = matrix._matrix
        m = _square(matrix, 'SkewSym()')
        if check:
            err = np.linalg.norm(m + m.T)
            if not err <= SKEW_TOL * max(1.0, np.linalg.norm(m)):
                raise ValueError('SkewSym(): matrix is not skew-symmetric '
                                 '(|S + S^T|_F = %.3g)' % err)
        m.setflags(write=False)
        self._matrix = m

    @classmethod
    def from_matrix(cls, matrix):
        """Returns the skew-symmetric part ``(M - M^T) / 2``"""
        m = np.asarray(matrix, dtype=np.float64)
        return cls(0.5 * (m - m.T), check=False)

    @staticmethod
    def zero(d):
        return SkewSym(np.zeros((d, d)), check=False)

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    def norm(self):
        """Frobenius norm"""
        return float(np.linalg.norm(self._matrix))

    def inner(self, other):
        """Frobenius inner product with another skew matrix"""
        return float(np.sum(self._matrix * np.asarray(other)))

    def __array__(self, dtype=None, copy=None):
        if copy:
            return np.array(self._matrix, dtype=dtype)
        return np.asarray(self._matrix, dtype=dtype)

    def __neg__(self):
        return SkewSym(-self._matrix, check=False)

    def __add__(self, other):
        return SkewSym(self._matrix + SkewSym(other)._matrix, check=False)

    def __mul__(self, scalar):
        return SkewSym(float(scalar) * self._matrix, check=False)

    __rmul__ = __mul__

    def __repr__(self):
        return 'SkewSym[\n  dim = %i,\n  matrix = %s\n]' % (
            self.dim, _format_matrix(self._matrix))


def as_rotation(value):
    return value if isinstance(value, Rotation) else Rotation(value)


def as_skew(value):
    return value if isinstance(value, SkewSym) else SkewSym(value)


def planar_generator(d, i, j):
    """Embeds ``A2`` into the coordinate plane ``(i, j)`` of R^d"""
    m = np.zeros((d, d))
    m[j, i] = 1.0
    m[i, j] = -1.0
    return SkewSym(m, check=False)


@dataclass(frozen=True)
class PlanarDecomposition:
    """
    Decomposition ``R = I + sum_i U_i (R_{sigma_i} - I_2) U_i^T`` of a
    rotation into commuting rotations of mutually orthogonal planes.

    ``angles`` are sorted in descending order (ties keep the order of the
    Schur blocks) and lie in ``[0, pi]``; ``frames[i]`` is the ``d x 2``
    orthonormal basis of plane ``i``. ``degenerate`` is set when the largest
    angle is within 1e-6 of pi, in which case the frame of that plane is not
    unique.
    """

    angles: np.ndarray
    frames: tuple
    dim: int
    degenerate: bool = field(default=False)

    @property
    def principal_angle(self):
        return float(self.angles[0])

    def stacked_frame(self):
        return np.hstack(self.frames)

    def reconstruct(self):
        m = np.eye(self.dim)
        for sigma, frame in zip(self.angles, self.frames):
            m += frame @ (planar_rotation(sigma) - np.eye(2)) @ frame.T
        return Rotation(m, check=False)

    def generator(self):
        """The principal logarithm ``sum_i sigma_i U_i A2 U_i^T``"""
        m = np.zeros((self.dim, self.dim))
        for sigma, frame in zip(self.angles, self.frames):
            m += sigma * (frame @ A2 @ frame.T)
        return SkewSym.from_matrix(m)

    def __repr__(self):
        return 'PlanarDecomposition[\n  dim = %i,\n  angles = %s,\n' \
            '  degenerate = %s\n]' % (self.dim, np.array2string(
                np.asarray(self.angles), precision=6), self.degenerate)


def _schur_blocks(t):
    """Yields ``(offset, size)`` of the diagonal blocks of a real Schur form"""
    d = t.shape[0]
    i = 0
    while i < d:
        if i + 1 < d and t[i + 1, i] != 0.0:
            yield i, 2
            i += 2
        else:
            yield i, 1
            i += 1


def _rotation_planes(m):
    """
    Splits an orthogonal matrix into ``floor(d/2)`` planes. Returns a list of
    ``(angle, frame, position)`` tuples sorted by decreasing angle. Pairs of
    -1 eigenvalues become angle-pi planes, pairs of +1 eigenvalues angle-0
    planes.
    """
    t, z = scipy.linalg.schur(m, output='real')
    planes, flips, fixed = [], [], []
    for i, size in _schur_blocks(t):
        if size == 2:
            c = 0.5 * (t[i, i] + t[i + 1, i + 1])
            s = 0.5 * (t[i + 1, i] - t[i, i + 1])
            theta = np.arctan2(s, c)
            cols = [i, i + 1] if theta >= 0 else [i + 1, i]
            planes.append((abs(theta), z[:, cols], i))
        elif t[i, i] < 0:
            flips.append(i)
        else:
            fixed.append(i)

    if len(flips) % 2 == 1:
        raise NotARotation('planar_decompose(): odd number of -1 eigenvalues '
                           '(determinant is not +1)')

    for j, k in zip(flips[0::2], flips[1::2]):
        planes.append((np.pi, z[:, [j, k]], j))
    for j, k in zip(fixed[0::2], fixed[1::2]):
        planes.append((0.0, z[:, [j, k]], j))

    planes.sort(key=lambda plane: (-plane[0], plane[2]))
    return planes


def planar_decompose(rotation):
    """
    Planar decomposition of a rotation.

    Emits :py:class:`~ludreg.exceptions.IllConditionedLog` when an angle is
    within 1e-6 of pi; the returned decomposition is still valid.
    """
    r = as_rotation(rotation)
    planes = _rotation_planes(r.matrix)

    angles = np.array([p[0] for p in planes])
    frames = []
    for _, frame, _ in planes:
        frame = np.array(frame)
        frame.setflags(write=False)
        frames.append(frame)
    angles.setflags(write=False)

    degenerate = bool(angles[0] > np.pi - ANGLE_PI_TOL)
    if degenerate:
        warnings.warn('planar angle %.12g is within %g of pi: the rotation '
                      'plane is not unique' % (angles[0], ANGLE_PI_TOL),
                      IllConditionedLog, stacklevel=2)

    return PlanarDecomposition(angles=angles, frames=tuple(frames),
                               dim=r.dim, degenerate=degenerate)


def _skew_planes(m):
    t, z = scipy.linalg.schur(m, output='real')
    return [(0.5 * (t[i + 1, i] - t[i, i + 1]), z[:, [i, i + 1]])
            for i, size in _schur_blocks(t) if size == 2]


def expm_skew(m):
    """
    Exponential of a skew-symmetric array, returned as a plain array. The
    solvers call this directly inside their line searches.
    """
    d = m.shape[0]
    if d == 2:
        return planar_rotation(0.5 * (m[1, 0] - m[0, 1]))
    result = np.eye(d)
    for theta, frame in _skew_planes(m):
        result += frame @ (planar_rotation(theta) - np.eye(2)) @ frame.T
    return result


def exp_so(skew):
    """Matrix exponential of a skew-symmetric matrix"""
    s = as_skew(skew)
    return Rotation(expm_skew(s.matrix))


def log_so(rotation):
    """
    Principal logarithm of a rotation. The result satisfies
    ``|log R|_2 <= pi``; at angle pi a valid branch is returned together with
    an :py:class:`~ludreg.exceptions.IllConditionedLog` warning.
    """
    return planar_decompose(rotation).generator()


def principal_angle(rotation):
    """Returns ``|log R|_2``, the largest planar angle"""
    m = np.asarray(rotation, dtype=np.float64)
    return float(np.max(np.abs(np.angle(np.linalg.eigvals(m)))))


def geodesic(rotation, skew, t):
    """The geodesic ``gamma(t) = R exp(t S)``"""
    r = as_rotation(rotation)
    s = as_skew(skew)
    return r @ exp_so(t * s)


def riemannian_distance(r, q):
    """``D_SO(R, Q) = |log(Q^T R)|_F``"""
    r, q = as_rotation(r), as_rotation(q)
    return log_so(q.T @ r).norm()


def project_to_so(matrix):
    """
    Frobenius-nearest rotation ``U diag(1, .., 1, det(U V^T)) V^T``.

    Emits :py:class:`~ludreg.exceptions.DegenerateProjection` when the
    minimizer is not unique, i.e. when the last singular vector pair has to
    be flipped and the two smallest singular values coincide.
    """
    a = _square(matrix, 'project_to_so()')
    u, s, vh = np.linalg.svd(a)
    if np.linalg.det(u) * np.linalg.det(vh) < 0:
        if abs(s[-1] - s[-2]) <= 1e-12 * max(1.0, s[0]):
            warnings.warn('project_to_so(): the two smallest singular values '
                          'coincide (%.12g), the nearest rotation is not '
                          'unique' % s[-1], DegenerateProjection, stacklevel=2)
        u = u.copy()
        u[:, -1] = -u[:, -1]
    return Rotation(u @ vh)


def random_rotation(d, rng):
    """Haar-distributed random rotation"""
    m = scipy.stats.special_ortho_group.rvs(d, random_state=rng)
    return Rotation(m)


def random_rotation_with_angle(d, s, rng):
    """
    Random rotation with principal angle ``s``: the plane of the largest
    angle is a random 2-frame, the other planar angles are uniform on
    ``[0, s]``.
    """
    if not 0.0 <= s < np.pi:
        raise DomainError('random_rotation_with_angle(): angle %g is outside '
                          'of [0, pi)' % s)
    q = random_rotation(d, rng).matrix
    angles = np.empty(d // 2)
    angles[0] = s
    angles[1:] = rng.uniform(0.0, s, size=len(angles) - 1)

    block = np.eye(d)
    for k, theta in enumerate(angles):
        block[2 * k:2 * k + 2, 2 * k:2 * k + 2] = planar_rotation(theta)
    return Rotation(q @ block @ q.T)
