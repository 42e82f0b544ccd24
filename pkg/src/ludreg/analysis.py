"""
Closed-form quantities of the corruption model for data uniform on the unit
sphere: the beta function, the admissible corruption threshold p~(d) of the
convex relaxations, the failure witness scale lambda*, the time bound T(s)
of the subgradient flow on SO(d), and sphere expectations used to validate
the model.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.special
import scipy.stats

from .exceptions import DomainError

log = logging.getLogger(__name__)

# Limit of p_tilde(d) for d -> infinity
P_TILDE_LIMIT = 1.0 / (1.0 + 1.0 / np.sqrt(2.0))


def beta_fn(m, n):
    """Beta function ``Gamma(m) Gamma(n) / Gamma(m + n)`` via log-gamma"""
    if not (m > 0 and n > 0):
        raise DomainError('beta_fn(): arguments must be positive, got '
                          '(%g, %g)' % (m, n))
    return float(np.exp(scipy.special.betaln(m, n)))


def _check_dim(d, minimum, name):
    if int(d) != d or d < minimum:
        raise DomainError('%s(): dimension must be an integer >= %i, got %s'
                          % (name, minimum, d))


def beta_ratio(d):
    """``B(d - 1, 1/2) / B((d - 1) / 2, 1/2)``"""
    _check_dim(d, 2, 'beta_ratio')
    return float(np.exp(scipy.special.betaln(d - 1, 0.5)
                        - scipy.special.betaln((d - 1) / 2, 0.5)))


def p_tilde(d):
    """
    Admissible corruption threshold of the convex relaxations,
    ``(1 + B(d - 1, 1/2) / B((d - 1) / 2, 1/2))^-1``. Equals 0.6 for d = 3
    and decreases towards ``(1 + 1/sqrt(2))^-1``.
    """
    return 1.0 / (1.0 + beta_ratio(d))


@dataclass(frozen=True)
class ThresholdTable:
    dim: int
    p_tilde: float
    beta_ratio: float

    def __repr__(self):
        return 'ThresholdTable[dim=%i, p_tilde=%.12g, beta_ratio=%.12g]' % (
            self.dim, self.p_tilde, self.beta_ratio)


def threshold_table(d):
    ratio = beta_ratio(d)
    return ThresholdTable(dim=int(d), p_tilde=1.0 / (1.0 + ratio),
                          beta_ratio=ratio)


def lambda_star(d, p):
    """
    Scale of the failure witness ``(1 - lambda*) I`` of the convex
    relaxations above the threshold,

        lambda* = (p - p~) / (p~ p) * B((d-1)/2, 1/2) / B((d-2)/2, 1/2)
    """
    _check_dim(d, 3, 'lambda_star')
    pt = p_tilde(d)
    if not pt < p < 1.0:
        raise DomainError('lambda_star(): corruption level %g is outside of '
                          '(p_tilde(%i), 1) = (%.6g, 1)' % (p, d, pt))
    ratio = np.exp(scipy.special.betaln((d - 1) / 2, 0.5)
                   - scipy.special.betaln((d - 2) / 2, 0.5))
    return float((p - pt) / (pt * p) * ratio)


def witness_gap(d, p):
    """
    Upper bound ``-(lambda* / (2 p~)) (p - p~)`` on the expected cost
    difference ``L((1 - lambda*) I) - L(I)``.
    """
    pt = p_tilde(d)
    return -lambda_star(d, p) / (2.0 * pt) * (p - pt)


def finite_time_bound(d, p, s):
    """
    Flow time ``T(s) = 2 d / (1 - p) * arccosh(sec(s / 2))`` needed to reach
    the ground truth from a start at principal angle ``s`` (large-N form).
    """
    if not 0.0 <= s < np.pi:
        raise DomainError('finite_time_bound(): angle %g is outside of '
                          '[0, pi)' % s)
    if not p < 1.0:
        raise DomainError('finite_time_bound(): corruption level must be '
                          'below 1, got %g' % p)
    return float(2.0 * d / (1.0 - p) * np.arccosh(1.0 / np.cos(0.5 * s)))


@dataclass(frozen=True)
class SphereExpectations:
    """
    Expectations over independent ``x, y`` uniform on the unit sphere:
    ``mean_dist = E|x - y|``, ``inv_prod_mean = E[1 / (|x - y| |x + y|)]``
    and ``cross_coeff``, the coefficient of ``I`` in
    ``E[(x - y) x^T / |x - y|]``.
    """

    dim: int
    mean_dist: float
    inv_prod_mean: float
    cross_coeff: float


def sphere_expectations(d):
    _check_dim(d, 3, 'sphere_expectations')
    b = scipy.special.betaln
    half = (d - 1) / 2
    mean_dist = 2.0 * np.exp(b(d - 1, 0.5) - b(half, 0.5))
    inv_prod_mean = 0.5 * np.exp(b((d - 2) / 2, 0.5) - b(half, 0.5))
    return SphereExpectations(dim=int(d), mean_dist=float(mean_dist),
                              inv_prod_mean=float(inv_prod_mean),
                              cross_coeff=float(mean_dist / (2 * d)))


def small_ball_bound(d, delta):
    """``delta^d / (5 sqrt(d))``"""
    if not 0.0 < delta < 2.0:
        raise DomainError('small_ball_bound(): radius %g is outside of '
                          '(0, 2)' % delta)
    return float(delta ** d / (5.0 * np.sqrt(d)))


def small_ball_probability(d, delta):
    """
    Exact ``P(|x - y| < delta)``: ``(1 - x.y) / 2`` follows a
    Beta((d-1)/2, (d-1)/2) distribution, so the probability is a regularized
    incomplete beta function evaluated at ``delta^2 / 4``.
    """
    _check_dim(d, 2, 'small_ball_probability')
    if not delta > 0.0:
        raise DomainError('small_ball_probability(): radius must be '
                          'positive, got %g' % delta)
    a = (d - 1) / 2
    return float(scipy.special.betainc(a, a, min(delta * delta / 4, 1.0)))


def convex_threshold_curve(d, n, c=1.0):
    """``p~(d) - c sqrt(log N / N)``; accepts an array of sample sizes"""
    n = np.asarray(n, dtype=np.float64)
    return p_tilde(d) - c * np.sqrt(np.log(n) / n)


def nonconvex_threshold_curve(n, c=1.0):
    """``1 - c sqrt(log N / N)``; accepts an array of sample sizes"""
    n = np.asarray(n, dtype=np.float64)
    return 1.0 - c * np.sqrt(np.log(n) / n)


@dataclass(frozen=True)
class EnvelopeStatistics:
    """
    Agreement of measured convergence times with ``T(s)``: the fitted
    additive offset, the fraction of starts with
    ``T_cvg <= factor * T(s) + offset`` and Spearman's rank correlation of
    ``T_cvg`` with ``s``.
    """

    offset: float
    fraction: float
    spearman: float
    count: int


def envelope_offset(angles, times, d, p):
    """Least-squares additive offset ``max(0, mean(T_cvg - T(s)))``"""
    bound = np.array([finite_time_bound(d, p, s) for s in angles])
    if len(bound) == 0:
        return 0.0
    return max(0.0, float(np.mean(np.asarray(times) - bound)))


def envelope_statistics(angles, times, d, p, factor=2.0, offset=None):
    angles = np.asarray(angles, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if len(angles) < 2:
        raise DomainError('envelope_statistics(): need at least two '
                          'converged starts')
    if offset is None:
        offset = envelope_offset(angles, times, d, p)
    bound = np.array([finite_time_bound(d, p, s) for s in angles])
    fraction = float(np.mean(times <= factor * bound + offset))
    rho, _ = scipy.stats.spearmanr(angles, times)
    return EnvelopeStatistics(offset=offset, fraction=fraction,
                              spearman=float(rho), count=len(angles))
