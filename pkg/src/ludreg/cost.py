"""
Least unsquared deviation (LUD) and least squares (LS) costs

    L(A) = 1/N sum_i |A x_i - y_i|_2,      LS(A) = 1/N sum_i |A x_i - y_i|_2^2

and the generalized gradients of the LUD cost, in the Euclidean sense and on
SO(d). Sums over the point pairs use numpy's pairwise reduction, so the
results do not depend on how the terms are scheduled.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .config import DEGENERACY_TOL
from .sogeom import SkewSym

log = logging.getLogger(__name__)


class Selection(enum.Enum):
    """
    Element of the unit ball used for a residual that is (numerically) zero,
    where the generalized gradient of ``|r|`` is set-valued.

    ``ZERO`` picks the zero vector. ``SMOOTHED`` picks ``r / (tol + |r|)``,
    the guard used by the descent scheme on SO(d).
    """

    ZERO = 'zero'
    SMOOTHED = 'smoothed'


@dataclass(frozen=True)
class GradientEvaluation:
    """
    Cost value and one element ``euclid_grad`` of the generalized gradient.
    ``degenerate_indices`` lists the pairs whose residual norm is below the
    degeneracy tolerance, ``chosen_selection`` (one row per degenerate index)
    the unit-ball vectors used for them.
    """

    value: float
    euclid_grad: np.ndarray
    degenerate_indices: np.ndarray
    chosen_selection: np.ndarray


def residuals(matrix, inst):
    """Rows ``A x_i - y_i``"""
    a = np.asarray(matrix, dtype=np.float64)
    return inst.points_x @ a.T - inst.points_y


def lud_cost(matrix, inst):
    norms = np.linalg.norm(residuals(matrix, inst), axis=1)
    return float(np.sum(norms) / inst.size)


def ls_cost(matrix, inst):
    r = residuals(matrix, inst)
    return float(np.sum(np.einsum('ij,ij->i', r, r)) / inst.size)


def lud_subgradient(matrix, inst, degeneracy_tol=DEGENERACY_TOL,
                    selection=Selection.ZERO):
    """
    Euclidean generalized gradient ``1/N sum_i b_i x_i^T`` of the LUD cost,
    with ``b_i = r_i / |r_i|`` for residuals of norm at least
    ``degeneracy_tol``; the other terms use ``selection``.
    """
    if not degeneracy_tol > 0:
        raise ValueError('lud_subgradient(): degeneracy_tol must be positive')
    r = residuals(matrix, inst)
    norms = np.linalg.norm(r, axis=1)
    degenerate = norms < degeneracy_tol

    directions = np.empty_like(r)
    regular = ~degenerate
    directions[regular] = r[regular] / norms[regular, None]
    if selection is Selection.SMOOTHED:
        directions[degenerate] = r[degenerate] / \
            (degeneracy_tol + norms[degenerate, None])
    else:
        directions[degenerate] = 0.0

    grad = directions.T @ inst.points_x / inst.size
    return GradientEvaluation(
        value=float(np.sum(norms) / inst.size),
        euclid_grad=grad,
        degenerate_indices=np.flatnonzero(degenerate),
        chosen_selection=directions[degenerate])


def skew(matrix):
    m = np.asarray(matrix, dtype=np.float64)
    return 0.5 * (m - m.T)


def riemannian_subgradient(rotation, inst, degeneracy_tol=DEGENERACY_TOL,
                           selection=Selection.ZERO):
    """
    Riemannian generalized gradient at ``R`` in tangent coordinates,
    ``G = skew(R^T g)`` for a Euclidean element ``g``; the tangent vector is
    ``R G``.
    """
    r = np.asarray(rotation, dtype=np.float64)
    ev = lud_subgradient(r, inst, degeneracy_tol, selection)
    return SkewSym(skew(r.T @ ev.euclid_grad), check=False)


def norm_difference_bounds(u, v):
    """
    Two-sided bound on ``|u + v| - |v|`` for non-parallel nonzero ``u, v``:

        u.v / |v|  <=  |u + v| - |v|  <=  u.v / |v| + |u|^3 / (2 h)

    with ``h = sqrt(|u|^2 |v|^2 - (u.v)^2)``. Returns ``(lower, upper)``.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv, uv = np.linalg.norm(u), np.linalg.norm(v), float(u @ v)
    h = np.sqrt(max(nu * nu * nv * nv - uv * uv, 0.0))
    lower = uv / nv
    upper = lower + nu ** 3 / (2.0 * h) if h > 0 else np.inf
    return lower, upper
