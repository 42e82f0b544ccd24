import logging

import numpy as np

from ..cost import lud_subgradient, Selection
from .config import SolverConfig, Termination, make_report
from .convhull import project_conv_so, membership_conv_so, MAX_MEMBERSHIP_DIM
from .wahba import solve_wahba_ls

log = logging.getLogger(__name__)

CERTIFICATE_MARGIN = 1e-6


def solve_lud_conv_so(inst, a_init=None, cfg=None):
    """
    Minimizes the LUD cost over conv SO(d) by projected subgradient descent

        A_k = project_conv_so(A_{k-1} - eta_k g_k),   eta_k = eta_0 / k^decay

    with ``g_k`` the Euclidean generalized gradient (zero selection for
    degenerate residuals). The best-cost iterate is returned; for d <= 8 it
    carries a membership certificate with margin 1e-6.

    Parameter ``a_init`` (array):
        Initial point, projected onto conv SO(d). Defaults to the
        least-squares rotation.
    """
    cfg = SolverConfig() if cfg is None else cfg
    if a_init is None:
        a_init = solve_wahba_ls(inst).matrix
    a = project_conv_so(a_init)
    ev = lud_subgradient(a, inst, cfg.degeneracy_tol, Selection.ZERO)
    iterates, costs, flows = [a], [ev.value], [0.0]
    best, best_cost = a, ev.value
    termination = Termination.MAX_ITERS

    for k in range(1, cfg.convex_max_iters + 1):
        if not np.any(ev.euclid_grad):
            termination = Termination.CONVERGED
            break
        eta = cfg.step_schedule(k)
        a_next = project_conv_so(a - eta * ev.euclid_grad)
        step = np.linalg.norm(a_next - a)
        a = a_next
        ev = lud_subgradient(a, inst, cfg.degeneracy_tol, Selection.ZERO)
        iterates.append(a)
        costs.append(ev.value)
        flows.append(flows[-1] + eta)
        if ev.value < best_cost:
            best, best_cost = a, ev.value
        if step < cfg.stop_tol:
            termination = Termination.CONVERGED
            break

    certificate = None
    if inst.dim <= MAX_MEMBERSHIP_DIM:
        certificate = membership_conv_so(best, margin=CERTIFICATE_MARGIN)
        if not certificate.is_member:
            log.warning('solve_lud_conv_so(): returned iterate failed '
                        'certification: %s', certificate)

    log.info('solve_lud_conv_so(): %s after %i iterations, best cost %.6g',
             termination.value, len(iterates) - 1, best_cost)
    return make_report(iterates, costs, flows, termination,
                       inst.ground_truth, final=best, certificate=certificate)
