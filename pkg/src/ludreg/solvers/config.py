import enum
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..config import DEGENERACY_TOL


@dataclass(frozen=True)
class LineSearch:
    """Backtracking along the geodesic: ``alpha_max * shrink^k``"""

    shrink: float = 0.5
    max_probes: int = 30

    def __post_init__(self):
        if not 0.0 < self.shrink < 1.0:
            raise ValueError('LineSearch: shrink factor must lie in (0, 1), '
                             'got %g' % self.shrink)
        if self.max_probes < 1:
            raise ValueError('LineSearch: max_probes must be positive')


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes ``eta_k = initial_step / k^decay`` of the convex solvers"""

    initial_step: float = 1.0
    decay: float = 0.5

    def __post_init__(self):
        if not (self.initial_step > 0 and self.decay > 0):
            raise ValueError('StepSchedule: initial step and decay exponent '
                             'must be positive')

    def __call__(self, k):
        return self.initial_step / k ** self.decay


@dataclass(frozen=True)
class SolverConfig:
    """
    Parameters shared by the solvers.

    Parameter ``max_iters`` (int):
        Iteration budget of the descent on SO(d) and of the reweighting
        solver (default 5000)

    Parameter ``convex_max_iters`` (int):
        Iteration budget of the projected subgradient solver over
        conv SO(d), whose diminishing steps need a longer run (default 20000)

    Parameter ``alpha_max`` (float):
        First step probed by the line search

    Parameter ``stop_tol`` (float):
        Stop once ``|R_k - R_{k-1}|_F`` (resp. the cost decrease of the
        reweighting solver) falls below this value

    Parameter ``degeneracy_tol`` (float):
        Residual norm below which a residual is treated as zero

    Parameter ``irls_smoothing`` (float):
        Initial smoothing ``eps_0`` of the reweighting solver, halved on
        stagnation down to ``irls_smoothing_floor``
    """

    max_iters: int = 5000
    convex_max_iters: int = 20000
    alpha_max: float = 1.0
    stop_tol: float = 1e-8
    degeneracy_tol: float = DEGENERACY_TOL
    line_search: LineSearch = field(default_factory=LineSearch)
    step_schedule: StepSchedule = field(default_factory=StepSchedule)
    irls_smoothing: float = 1e-2
    irls_smoothing_floor: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, (int, float)) and not value > 0:
                raise ValueError('SolverConfig: %s must be positive, got %s'
                                 % (f.name, value))
        if self.irls_smoothing_floor > self.irls_smoothing:
            raise ValueError('SolverConfig: irls_smoothing_floor exceeds '
                             'irls_smoothing')

    def replace(self, **changes):
        return replace(self, **changes)


class Termination(enum.Enum):
    CONVERGED = 'converged'
    MAX_ITERS = 'max_iters'
    STALLED = 'stalled'


@dataclass(frozen=True)
class SolverReport:
    """
    Outcome of a solver run.

    ``iterates`` holds every accepted iterate (the initialization first),
    ``cost_trace`` their costs and ``flow_trace`` the accumulated step sizes
    at each of them, so that ``flow_time == flow_trace[-1]``. The convex
    solver returns its best-cost iterate as ``final_iterate`` together with
    its membership ``certificate``.
    """

    final_iterate: np.ndarray
    iterates: np.ndarray
    cost_trace: np.ndarray
    flow_trace: np.ndarray
    iterations: int
    termination: Termination
    recovery_error: float = None
    certificate: object = None
    flags: tuple = ()

    @property
    def flow_time(self):
        return float(self.flow_trace[-1])

    @property
    def best_cost(self):
        return float(np.min(self.cost_trace))

    def __repr__(self):
        return 'SolverReport[\n  iterations = %i,\n  termination = %s,\n' \
            '  best_cost = %.12g,\n  flow_time = %.12g,\n' \
            '  recovery_error = %s\n]' % (
                self.iterations, self.termination.value, self.best_cost,
                self.flow_time, self.recovery_error)


def make_report(iterates, costs, flows, termination, ground_truth,
                final=None, **kwargs):
    """Freezes the traces of a run into a :py:class:`SolverReport`"""
    iterates = np.array(iterates)
    final = iterates[-1] if final is None else np.array(final)
    error = None
    if ground_truth is not None:
        error = float(np.linalg.norm(final - np.asarray(ground_truth)))
    for array in (iterates, final):
        array.setflags(write=False)
    costs, flows = np.array(costs), np.array(flows)
    costs.setflags(write=False)
    flows.setflags(write=False)
    return SolverReport(final_iterate=final, iterates=iterates,
                        cost_trace=costs, flow_trace=flows,
                        iterations=len(iterates) - 1,
                        termination=termination, recovery_error=error,
                        **kwargs)
