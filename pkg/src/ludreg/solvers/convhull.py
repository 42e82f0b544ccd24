"""
The convex hull conv SO(d).

A matrix ``A = U diag(s) V^T`` with ``det(U V^T) = +1`` (signed singular
values, only ``s_d`` may be negative) lies in conv SO(d) iff ``s`` lies in
the even-parity polytope

    PP_d = conv{x in {-1, 1}^d : x has an even number of -1 entries}
         = [-1, 1]^d  intersected with  {x : a.x <= d - 2 for every a in
           {-1, 1}^d with an odd number of -1 entries}

so the Frobenius projection onto conv SO(d) reduces to a projection onto
PP_d. Membership is certified independently by the semidefinite description
of conv SO(d) through Kronecker products of 2x2 matrices (size 2^(d-1)).
"""

import enum
import functools
import logging
from dataclasses import dataclass

import numpy as np

from .. import config
from ..exceptions import DimensionTooLarge

log = logging.getLogger(__name__)

MAX_MEMBERSHIP_DIM = 8


@dataclass(frozen=True)
class SignedSpectrum:
    """
    ``A = u_frame @ diag(signed_values) @ v_frame.T`` with
    ``det(u_frame @ v_frame.T) = +1`` and
    ``s_1 >= ... >= s_{d-1} >= |s_d|``.
    """

    u_frame: np.ndarray
    v_frame: np.ndarray
    signed_values: np.ndarray

    def recompose(self, values=None):
        values = self.signed_values if values is None else values
        return (self.u_frame * values) @ self.v_frame.T


def signed_svd(matrix):
    a = np.asarray(matrix, dtype=np.float64)
    u, s, vh = np.linalg.svd(a)
    if np.linalg.det(u) * np.linalg.det(vh) < 0:
        u[:, -1] = -u[:, -1]
        s[-1] = -s[-1]
    return SignedSpectrum(u_frame=u, v_frame=vh.T, signed_values=s)


def project_even_parity(v):
    """
    Euclidean projection onto the even-parity polytope.

    The point is first clipped to the cube. The facet ``a.x <= d - 2`` that
    the clipped point violates most has ``a = sign(v)`` with the sign of the
    entry of smallest magnitude flipped if needed to make the number of -1
    entries odd. If it is satisfied the clipped point is the projection;
    otherwise the projection lies on that facet and is
    ``a * clip(a * v - beta, -1, 1)``, where ``beta`` is the root of the
    piecewise linear, non-increasing ``sum_i clip(a_i v_i - beta, -1, 1)
    = d - 2``.
    """
    v = np.asarray(v, dtype=np.float64)
    n = len(v)
    clipped = np.clip(v, -1.0, 1.0)

    a = np.where(v >= 0, 1.0, -1.0)
    if np.count_nonzero(a < 0) % 2 == 0:
        i = np.argmin(np.abs(v))
        a[i] = -a[i]
    if a @ clipped <= n - 2:
        return clipped

    w = a * v
    breaks = np.sort(np.concatenate([w - 1.0, w + 1.0]))
    totals = np.clip(w[None, :] - breaks[:, None], -1.0, 1.0).sum(axis=1)
    target = n - 2
    j = int(np.searchsorted(-totals, -target, side='left'))
    b0, b1 = breaks[j - 1], breaks[j]
    t0, t1 = totals[j - 1], totals[j]
    if t0 == t1:
        beta = b1
    else:
        beta = b0 + (t0 - target) * (b1 - b0) / (t0 - t1)
    return a * np.clip(w - beta, -1.0, 1.0)


def project_conv_so(matrix):
    """Frobenius-nearest point of conv SO(d)"""
    spectrum = signed_svd(matrix)
    result = spectrum.recompose(project_even_parity(spectrum.signed_values))
    if config.DEBUG and len(result) <= MAX_MEMBERSHIP_DIM:
        certificate = membership_conv_so(result, margin=1e-9)
        assert certificate.is_member, \
            'project_conv_so(): output failed certification: %s' % certificate
    return result


class Membership(enum.Enum):
    """
    Outcome of :py:func:`membership_conv_so`. ``MEMBER`` and ``BOUNDARY``
    both mean that the matrix lies in conv SO(d); ``BOUNDARY`` marks points
    where a condition holds with equality, which includes every rotation.
    """

    MEMBER = 'member'
    BOUNDARY = 'boundary'
    NON_MEMBER = 'non-member'


@dataclass(frozen=True)
class MembershipCertificate:
    """
    Slacks of the two semidefinite conditions, ``1 - lambda_max`` of
    ``[[0, X], [X^T, 0]]`` (operator norm) and ``(d - 2) - lambda_max`` of
    the parity matrix; ``slack`` is their minimum.
    """

    status: Membership
    slack: float
    operator_slack: float
    parity_slack: float
    margin: float

    @property
    def is_member(self):
        """True for both ``MEMBER`` and ``BOUNDARY``"""
        return self.status is not Membership.NON_MEMBER

    def __repr__(self):
        return 'MembershipCertificate[status=%s, slack=%.3g, operator_slack=' \
            '%.3g, parity_slack=%.3g]' % (self.status.value, self.slack,
                                          self.operator_slack,
                                          self.parity_slack)


def _kron_chain(factors):
    return functools.reduce(np.kron, factors)


@functools.lru_cache(maxsize=None)
def parity_operators(n):
    """
    Symmetric matrices ``A^(ij) = -P^T lambda_i rho_j P`` of size
    ``2^(n-1)``, returned as an ``n x n x 2^(n-1) x 2^(n-1)`` array, with

        lambda_i = D^(x i-1) (x) A2 (x) I^(x n-i)
        rho_j    = I^(x j-1) (x) A2 (x) D^(x n-j)
        P        = 1/2 [1; 1] (x) I^(x n-1) + 1/2 [1; -1] (x) D^(x n-1)

    where ``D = diag(1, -1)``, ``A2 = [[0, -1], [1, 0]]`` and ``P`` restricts
    to the even subspace.
    """
    i2 = np.eye(2)
    d2 = np.diag([1.0, -1.0])
    a2 = np.array([[0.0, -1.0], [1.0, 0.0]])
    lam = [_kron_chain([d2] * i + [a2] + [i2] * (n - i - 1))
           for i in range(n)]
    rho = [_kron_chain([i2] * j + [a2] + [d2] * (n - j - 1))
           for j in range(n)]
    p = 0.5 * np.kron(np.array([[1.0], [1.0]]), _kron_chain([i2] * (n - 1))) \
        + 0.5 * np.kron(np.array([[1.0], [-1.0]]), _kron_chain([d2] * (n - 1)))

    size = 2 ** (n - 1)
    ops = np.empty((n, n, size, size))
    for i in range(n):
        left = p.T @ lam[i]
        for j in range(n):
            ops[i, j] = -left @ (rho[j] @ p)
    ops.setflags(write=False)
    return ops


def membership_conv_so(matrix, margin=1e-9):
    """
    Certifies membership of ``X`` in conv SO(d) through

        [[0, X], [X^T, 0]] <= I_2d   and
        sum_ij A^(ij) (D X)_ij <= (d - 2) I

    in the semidefinite order, with ``D = diag(1, ..., 1, -1)``.
    The status is ``MEMBER`` when both slacks exceed ``margin``,
    ``BOUNDARY`` when the smaller slack is within ``margin`` of zero and
    ``NON_MEMBER`` otherwise. Rotations are extreme points of the hull; they
    are reported as ``BOUNDARY``, which counts as membership.
    """
    x = np.asarray(matrix, dtype=np.float64)
    n = x.shape[0]
    if n > MAX_MEMBERSHIP_DIM:
        raise DimensionTooLarge('membership_conv_so(): d = %i exceeds the '
                                'supported maximum of %i (matrices of size '
                                '2^(d-1))' % (n, MAX_MEMBERSHIP_DIM))

    block = np.zeros((2 * n, 2 * n))
    block[:n, n:] = x
    block[n:, :n] = x.T
    operator_slack = 1.0 - np.linalg.eigvalsh(block)[-1]

    dx = x.copy()
    dx[-1] = -dx[-1]
    m = np.tensordot(dx, parity_operators(n), axes=([0, 1], [0, 1]))
    parity_slack = (n - 2) - np.linalg.eigvalsh(0.5 * (m + m.T))[-1]

    slack = float(min(operator_slack, parity_slack))
    if slack > margin:
        status = Membership.MEMBER
    elif slack >= -margin:
        status = Membership.BOUNDARY
    else:
        status = Membership.NON_MEMBER
    return MembershipCertificate(status=status, slack=slack,
                                 operator_slack=float(operator_slack),
                                 parity_slack=float(parity_slack),
                                 margin=margin)
