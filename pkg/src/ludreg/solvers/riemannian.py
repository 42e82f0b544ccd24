"""
Descent on SO(d) with a geodesic backtracking line search.

Each iteration evaluates the Riemannian generalized gradient ``G`` (tangent
coordinates, degenerate residuals smoothed) and moves along the geodesic
``R exp(-alpha G)``. The step ``alpha`` is the first of
``alpha_max, alpha_max * shrink, ...`` that strictly decreases the cost, so
the cost trace never increases. The accumulated step sizes form the flow
time of the discretized subgradient flow.
"""

import logging

import numpy as np

from ..cost import lud_cost, lud_subgradient, skew, Selection
from ..exceptions import LineSearchFailed
from ..sogeom import Rotation, as_rotation, expm_skew
from .config import SolverConfig, Termination, make_report

log = logging.getLogger(__name__)


def geodesic_line_search(r, g, cost, inst, cfg):
    """
    Returns ``(alpha, R exp(-alpha G), cost)`` for the first probed step that
    decreases the cost. Raises :py:class:`LineSearchFailed` otherwise.
    """
    alpha = cfg.alpha_max
    for _ in range(cfg.line_search.max_probes):
        candidate = r @ expm_skew(-alpha * g)
        value = lud_cost(candidate, inst)
        if value < cost:
            return alpha, candidate, value
        alpha *= cfg.line_search.shrink
    raise LineSearchFailed('no decrease after %i probes (last step %.3g)'
                           % (cfg.line_search.max_probes, alpha))


def solve_lud_so(inst, r_init, cfg=None):
    """
    Minimizes the LUD cost over SO(d).

    Parameter ``inst`` (:py:class:`~ludreg.datamodel.RegistrationInstance`):
        Point pairs

    Parameter ``r_init`` (:py:class:`~ludreg.sogeom.Rotation`):
        Initial rotation

    Parameter ``cfg`` (:py:class:`SolverConfig`):
        Iteration budget, line search and tolerances

    Returns → :py:class:`SolverReport`:
        Every iterate is a rotation and the cost trace is non-increasing.
    """
    cfg = SolverConfig() if cfg is None else cfg
    r = np.array(as_rotation(r_init).matrix)
    cost = lud_cost(r, inst)
    iterates, costs, flows = [r], [cost], [0.0]
    termination = Termination.MAX_ITERS

    for k in range(1, cfg.max_iters + 1):
        ev = lud_subgradient(r, inst, cfg.degeneracy_tol, Selection.SMOOTHED)
        g = skew(r.T @ ev.euclid_grad)
        if not np.any(g):
            termination = Termination.CONVERGED
            break
        try:
            alpha, r_next, cost = geodesic_line_search(r, g, cost, inst, cfg)
        except LineSearchFailed as e:
            log.debug('solve_lud_so(): iteration %i stalled: %s', k, e)
            termination = Termination.STALLED
            break

        step = np.linalg.norm(r_next - r)
        r = r_next
        iterates.append(r)
        costs.append(cost)
        flows.append(flows[-1] + alpha)

        if k % 500 == 0:
            log.debug('solve_lud_so(): iteration %i, cost %.6g, step %.3g',
                      k, cost, step)
        if step < cfg.stop_tol:
            termination = Termination.CONVERGED
            break

    # Re-validates the final iterate as a rotation
    final = Rotation(iterates[-1])
    log.info('solve_lud_so(): %s after %i iterations, cost %.6g, flow time '
             '%.6g', termination.value, len(iterates) - 1, costs[-1],
             flows[-1])
    return make_report(iterates, costs, flows, termination,
                       inst.ground_truth, final=final.matrix)
