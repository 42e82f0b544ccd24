"""
LUD over all d x d matrices by smoothed iteratively reweighted least squares.

With weights ``w_i = 1 / max(|r_i|, eps)`` every iteration solves the
weighted normal equations

    A (sum_i w_i x_i x_i^T) = sum_i w_i y_i x_i^T

The smoothing ``eps`` starts at ``cfg.irls_smoothing`` and is halved every
time the cost stagnates, until it reaches ``cfg.irls_smoothing_floor``.
"""

import logging
import warnings

import numpy as np

from ..cost import lud_cost
from ..exceptions import SingularReweighting
from .config import SolverConfig, Termination, make_report
from .wahba import solve_wahba_ls

log = logging.getLogger(__name__)

# Condition number above which the normal equations are regularized
MAX_CONDITION = 1e12


def _reweighted_solution(inst, a, eps):
    r = inst.points_x @ a.T - inst.points_y
    w = 1.0 / np.maximum(np.linalg.norm(r, axis=1), eps)
    xw = inst.points_x * w[:, None]
    cxx = xw.T @ inst.points_x
    cyx = inst.points_y.T @ xw

    singular = np.linalg.cond(cxx) > MAX_CONDITION
    if singular:
        cxx = cxx + eps * max(1.0, np.trace(cxx) / len(cxx)) * np.eye(len(cxx))
    # cxx is symmetric: A = cyx cxx^-1 = (cxx^-1 cyx^T)^T
    return np.linalg.solve(cxx, cyx.T).T, singular


def solve_lud_unconstrained(inst, a_init=None, cfg=None):
    """
    Minimizes the LUD cost over R^{d x d}, starting from ``a_init`` (the
    least-squares rotation by default). Returns the best iterate seen.
    """
    cfg = SolverConfig() if cfg is None else cfg
    a = np.array(solve_wahba_ls(inst).matrix if a_init is None else a_init,
                 dtype=np.float64)
    cost = lud_cost(a, inst)
    iterates, costs, flows = [a], [cost], [0.0]
    best, best_cost = a, cost
    eps = cfg.irls_smoothing
    termination = Termination.MAX_ITERS
    flags = set()

    for k in range(1, cfg.max_iters + 1):
        if best_cost == 0.0:
            termination = Termination.CONVERGED
            break
        a, singular = _reweighted_solution(inst, a, eps)
        if singular and 'singular_reweighting' not in flags:
            flags.add('singular_reweighting')
            warnings.warn('solve_lud_unconstrained(): reweighted normal '
                          'equations are rank deficient at iteration %i, '
                          'regularized with eps = %g' % (k, eps),
                          SingularReweighting, stacklevel=2)
        previous = costs[-1]
        cost = lud_cost(a, inst)
        iterates.append(a)
        costs.append(cost)
        flows.append(0.0)
        if cost < best_cost:
            best, best_cost = a, cost

        if previous - cost < cfg.stop_tol:
            if eps <= cfg.irls_smoothing_floor:
                termination = Termination.CONVERGED
                break
            eps = max(0.5 * eps, cfg.irls_smoothing_floor)

    log.info('solve_lud_unconstrained(): %s after %i iterations, cost %.6g '
             '(smoothing %.3g)', termination.value, len(iterates) - 1,
             best_cost, eps)
    return make_report(iterates, costs, flows, termination,
                       inst.ground_truth, final=best, flags=tuple(flags))
