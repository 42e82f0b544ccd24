"""
Registration instances under the replace-with-independent-draw corruption
model: ``y_i = R0 x_i`` for the uncorrupted pairs and ``y_i`` an independent
draw from the source distribution for ``i`` in the corrupted set ``C``, with
``|C| = round(p N)``.

Two sources are supported: the uniform distribution on the unit sphere and
the uniform distribution over the points of a (normalized) point cloud.
"""

import hashlib
import logging
import os
import re
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidLevel, ParseError, DimensionMismatch, \
    DegenerateCloud
from .sogeom import Rotation, as_rotation

log = logging.getLogger(__name__)

SPHERE = 'sphere'


def _frozen(array):
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def seed_sequence(base_seed, n, p, trial):
    """
    Seed of one experiment trial. The entropy is a digest of the tuple
    ``(base_seed, N, p, trial)``, so any cell of a grid can be regenerated
    independently of the others.
    """
    key = repr((int(base_seed), int(n), float(p), int(trial))).encode('ascii')
    digest = hashlib.blake2b(key, digest_size=16).digest()
    return np.random.SeedSequence(int.from_bytes(digest, 'little'))


def trial_rng(base_seed, n, p, trial):
    return np.random.default_rng(seed_sequence(base_seed, n, p, trial))


def corrupted_count(n, p):
    """``round(p N)`` with halves rounded up"""
    return int(np.floor(p * n + 0.5))


def sample_sphere(d, n, rng):
    """
    Draws ``n`` i.i.d. points from the uniform distribution on the unit
    sphere in R^d (normalized standard Gaussians).
    """
    if d < 2 or n < 1:
        raise ValueError('sample_sphere(): need d >= 2 and n >= 1, got '
                         'd=%i, n=%i' % (d, n))
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@dataclass(frozen=True)
class DiscreteCloud:
    """
    Uniform distribution over the rows of ``points`` (an ``M x d`` array).
    """

    points: np.ndarray

    def __post_init__(self):
        points = _frozen(self.points)
        if points.ndim != 2 or points.shape[0] < 1:
            raise ValueError('DiscreteCloud: expected a non-empty M x d '
                             'array, got shape %s' % (points.shape,))
        object.__setattr__(self, 'points', points)

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def weights(self):
        return np.full(self.size, 1.0 / self.size)

    def sample(self, n, rng):
        """Draws ``n`` points with replacement"""
        return self.points[rng.integers(self.size, size=n)]

    def __repr__(self):
        return 'DiscreteCloud[size=%i, dim=%i]' % (self.size, self.dim)


@dataclass(frozen=True)
class RegistrationInstance:
    """
    Paired point sets ``points_x``, ``points_y`` (both ``N x d``), the ground
    truth rotation and the sorted indices of the corrupted pairs. ``level``
    is the requested corruption level; ``len(corrupted) == round(level N)``.
    """

    points_x: np.ndarray
    points_y: np.ndarray
    ground_truth: Rotation
    corrupted: np.ndarray
    level: float

    def __post_init__(self):
        x, y = _frozen(self.points_x), _frozen(self.points_y)
        if x.ndim != 2 or x.shape != y.shape:
            raise ValueError('RegistrationInstance: point sets have shapes '
                             '%s and %s' % (x.shape, y.shape))
        r0 = as_rotation(self.ground_truth)
        if r0.dim != x.shape[1]:
            raise ValueError('RegistrationInstance: ground truth has size %i '
                             'but points have dimension %i'
                             % (r0.dim, x.shape[1]))
        c = np.array(self.corrupted, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, 'points_x', x)
        object.__setattr__(self, 'points_y', y)
        object.__setattr__(self, 'ground_truth', r0)
        object.__setattr__(self, 'corrupted', c)

    @property
    def dim(self):
        return self.points_x.shape[1]

    @property
    def size(self):
        return self.points_x.shape[0]

    @property
    def mask(self):
        """Boolean array, ``True`` for corrupted pairs"""
        m = np.zeros(self.size, dtype=bool)
        m[self.corrupted] = True
        return m

    def rotated_sources(self, rotation):
        """
        Instance with ``x_i -> P x_i`` and ``R0 -> R0 P^T``; the LUD cost
        satisfies ``L'(A P^T) = L(A)``.
        """
        p = as_rotation(rotation)
        return RegistrationInstance(
            points_x=self.points_x @ p.matrix.T, points_y=self.points_y,
            ground_truth=self.ground_truth @ p.T, corrupted=self.corrupted,
            level=self.level)

    def rotated_targets(self, rotation):
        """
        Instance with ``y_i -> P y_i`` and ``R0 -> P R0``; the LUD cost
        satisfies ``L'(P A) = L(A)``.
        """
        p = as_rotation(rotation)
        return RegistrationInstance(
            points_x=self.points_x, points_y=self.points_y @ p.matrix.T,
            ground_truth=p @ self.ground_truth, corrupted=self.corrupted,
            level=self.level)

    def __repr__(self):
        return 'RegistrationInstance[\n  dim = %i,\n  size = %i,\n' \
            '  level = %g,\n  corrupted = %i\n]' % (
                self.dim, self.size, self.level, len(self.corrupted))


def generate_instance(d, n, p, r0=None, source=SPHERE, rng=None):
    """
    Generates a registration instance.

    Parameter ``d`` (int):
        Dimension of the ambient space

    Parameter ``n`` (int):
        Number of point pairs

    Parameter ``p`` (float):
        Corruption level in ``[0, 1)``

    Parameter ``r0`` (:py:class:`Rotation`):
        Ground truth rotation, identity by default

    Parameter ``source`` (``'sphere'`` or :py:class:`DiscreteCloud`):
        Distribution of the source points and of the corrupted targets

    Parameter ``rng`` (``numpy.random.Generator``):
        Random number generator
    """
    if not 0.0 <= p < 1.0:
        raise InvalidLevel('generate_instance(): corruption level %g is '
                           'outside of [0, 1)' % p)
    if n < 1:
        raise ValueError('generate_instance(): need at least one point pair')
    if rng is None:
        rng = np.random.default_rng()
    r0 = Rotation.identity(d) if r0 is None else as_rotation(r0)
    if r0.dim != d:
        raise ValueError('generate_instance(): ground truth has size %i, '
                         'expected %i' % (r0.dim, d))

    if isinstance(source, DiscreteCloud):
        if source.dim != d:
            raise ValueError('generate_instance(): cloud has dimension %i, '
                             'expected %i' % (source.dim, d))

        def draw(k):
            return source.sample(k, rng)
    elif source == SPHERE:
        def draw(k):
            return sample_sphere(d, k, rng)
    else:
        raise ValueError('generate_instance(): unknown source %r' % (source,))

    x = draw(n)
    y = x @ r0.matrix.T
    k = corrupted_count(n, p)
    corrupted = np.sort(rng.choice(n, size=k, replace=False))
    if k > 0:
        y[corrupted] = draw(k)

    log.debug('generated instance d=%i, N=%i, p=%g with %i corrupted pairs',
              d, n, p, k)
    return RegistrationInstance(points_x=x, points_y=y, ground_truth=r0,
                                corrupted=corrupted, level=float(p))


_separator = re.compile(r'[,\s]+')


def _parse_row(path, line_no, text):
    try:
        return [float(v) for v in _separator.split(text.strip()) if v]
    except ValueError:
        raise ParseError(path, line_no, 'could not parse %r as a row of '
                         'real numbers' % text.strip()) from None


def _load_csv(path, lines):
    rows, width = [], None
    for line_no, text in enumerate(lines, 1):
        if not text.strip() or text.lstrip().startswith('#'):
            continue
        row = _parse_row(path, line_no, text)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DimensionMismatch(path, line_no, 'row has %i coordinates, '
                                    'expected %i' % (len(row), width))
        rows.append(row)
    if not rows:
        raise ParseError(path, None, 'file contains no points')
    return np.array(rows)


def _load_ply(path, lines):
    if not lines or lines[0].strip() != 'ply':
        raise ParseError(path, 1, "missing 'ply' magic")

    elements = []  # [name, count, property names]
    body = None
    for line_no, text in enumerate(lines[1:], 2):
        tokens = text.split()
        if not tokens or tokens[0] in ('comment', 'obj_info'):
            continue
        if tokens[0] == 'format':
            if len(tokens) < 2 or tokens[1] != 'ascii':
                raise ParseError(path, line_no, 'only ASCII PLY files are '
                                 'supported (found %r)' % text.strip())
        elif tokens[0] == 'element':
            if len(tokens) != 3:
                raise ParseError(path, line_no, 'malformed element line')
            try:
                elements.append([tokens[1], int(tokens[2]), []])
            except ValueError:
                raise ParseError(path, line_no, 'invalid element count') \
                    from None
        elif tokens[0] == 'property':
            if not elements:
                raise ParseError(path, line_no, 'property outside of an '
                                 'element')
            elements[-1][2].append(tokens[-1])
        elif tokens[0] == 'end_header':
            body = line_no
            break
        else:
            raise ParseError(path, line_no, 'unexpected header line %r'
                             % text.strip())
    if body is None:
        raise ParseError(path, None, "missing 'end_header'")

    offset = body
    for name, count, props in elements:
        if name != 'vertex':
            offset += count
            continue
        try:
            columns = [props.index(c) for c in ('x', 'y', 'z')]
        except ValueError:
            raise ParseError(path, None, 'vertex element lacks x/y/z '
                             'properties') from None
        if offset + count > len(lines):
            raise ParseError(path, None, 'file ends before all %i vertices '
                             'were read' % count)
        points = np.empty((count, 3))
        for k in range(count):
            line_no = offset + k + 1
            row = _parse_row(path, line_no, lines[offset + k])
            if len(row) != len(props):
                raise DimensionMismatch(path, line_no, 'vertex has %i values, '
                                        'expected %i' % (len(row), len(props)))
            points[k] = [row[c] for c in columns]
        if count == 0:
            raise ParseError(path, None, 'file contains no vertices')
        return points
    raise ParseError(path, None, 'no vertex element')


def load_cloud(path, format=None):
    """
    Loads a point cloud from an ``xyz-csv`` or ``ascii-ply`` file. When no
    format is given it is inferred from the file extension. The points are
    not normalized.
    """
    path = os.fspath(path)
    if format is None:
        format = 'ascii-ply' if path.lower().endswith('.ply') else 'xyz-csv'
    try:
        with open(path, 'r') as f:
            lines = f.read().splitlines()
    except UnicodeDecodeError:
        raise ParseError(path, None, 'file is not ASCII text (binary PLY '
                         'files are not supported)') from None

    if format == 'xyz-csv':
        points = _load_csv(path, lines)
    elif format == 'ascii-ply':
        points = _load_ply(path, lines)
    else:
        raise ValueError('load_cloud(): unknown format %r' % format)

    log.info('loaded %i points of dimension %i from "%s"', points.shape[0],
             points.shape[1], path)
    return DiscreteCloud(points)


def normalize_cloud(cloud):
    """Centers the cloud at zero and scales it to a maximum norm of one"""
    centered = cloud.points - np.mean(cloud.points, axis=0)
    radius = np.max(np.linalg.norm(centered, axis=1))
    scale = max(1.0, float(np.max(np.abs(cloud.points))))
    if not radius > 1e-12 * scale:
        raise DegenerateCloud('normalize_cloud(): all %i points coincide'
                              % cloud.size)
    return DiscreteCloud(centered / radius)
