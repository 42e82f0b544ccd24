"""
Experiment drivers: recovery phase-transition grids, initialization
envelopes of the descent on SO(d), and single runs.

Every trial draws its instance from ``trial_rng(base_seed, N, p, trial)``,
so results are reproducible cell by cell and independent of the order in
which cells are evaluated.
"""

import logging
import time
from dataclasses import dataclass, field, fields, asdict

import numpy as np

from ..analysis import envelope_statistics
from ..datamodel import SPHERE, generate_instance, load_cloud, \
    normalize_cloud, trial_rng
from ..sogeom import principal_angle, project_to_so, \
    random_rotation_with_angle
from ..solvers import SolverConfig, solve_wahba_ls, solve_lud_so, \
    solve_lud_unconstrained, solve_lud_conv_so
from .settings import UsageError, parse_grid, parse_solvers

log = logging.getLogger(__name__)

KINDS = ('phase_grid', 'init_envelope', 'single_run')

# Rows of a grid result; 'conv' is also reported after projection onto SO(d)
ROWS = ('ls', 'so', 'unconstrained', 'conv', 'conv_projected')

CONVERGENCE_ANGLE = 1e-2

DEFAULTS = {
    'phase_grid': dict(
        dim=3, n_values=tuple(2 ** k for k in range(2, 11)),
        p_values=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99),
        trials=10),
    'init_envelope': dict(dim=4, n_values=(24, 32, 64, 128),
                          p_values=(0.75,), trials=1, solvers=('so',)),
    'single_run': dict(dim=3, n_values=(1024,), p_values=(0.4,), trials=1),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Description of an experiment. ``source`` is ``'sphere'`` or the path of
    a point cloud file. ``alpha_max``, ``max_iters`` and
    ``convex_max_iters`` override the solver defaults when set. ``starts``
    is the number of random initializations of an envelope experiment and
    ``overlay_c`` the constant of the threshold curves drawn on figures.
    """

    kind: str
    dim: int = 3
    n_values: tuple = (1024,)
    p_values: tuple = (0.4,)
    trials: int = 10
    recovery_tol: float = 1e-2
    solvers: tuple = ('ls', 'so', 'unconstrained', 'conv')
    source: str = SPHERE
    base_seed: int = 0
    alpha_max: float = None
    max_iters: int = None
    convex_max_iters: int = None
    starts: int = 100
    overlay_c: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError('unknown experiment kind %r' % (self.kind,))
        object.__setattr__(self, 'n_values', parse_grid(self.n_values, int))
        object.__setattr__(self, 'p_values', parse_grid(self.p_values))
        object.__setattr__(self, 'solvers', parse_solvers(self.solvers))
        if self.dim < 2:
            raise UsageError('dimension must be at least 2')
        if self.trials < 1 or self.starts < 1:
            raise UsageError('trials and starts must be at least 1')
        if min(self.n_values) < 1:
            raise UsageError('sample sizes must be positive')
        if not all(0.0 <= p < 1.0 for p in self.p_values):
            raise UsageError('corruption levels must lie in [0, 1)')
        if not self.recovery_tol > 0:
            raise UsageError('recovery tolerance must be positive')
        try:
            self.solver_config()
        except ValueError as e:
            raise UsageError(str(e)) from None

    @classmethod
    def for_kind(cls, kind, **overrides):
        """Spec with the defaults of ``kind``; ``None`` values are ignored"""
        values = dict(DEFAULTS.get(kind, {}))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(kind=kind, **values)

    def solver_config(self):
        changes = {name: getattr(self, name) for name in
                   ('alpha_max', 'max_iters', 'convex_max_iters')
                   if getattr(self, name) is not None}
        return SolverConfig(**changes)

    def to_dict(self):
        d = asdict(self)
        for key in ('n_values', 'p_values', 'solvers'):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def load_source(spec):
    if spec.source == SPHERE:
        return SPHERE
    cloud = normalize_cloud(load_cloud(spec.source))
    if cloud.dim != spec.dim:
        raise UsageError('cloud "%s" has dimension %i but --dim is %i'
                         % (spec.source, cloud.dim, spec.dim))
    return cloud


@dataclass(frozen=True)
class TrialOutcome:
    error: float
    iterations: int
    flow_time: float
    elapsed: float = field(default=0.0, compare=False)
    failed: bool = False


FAILED = TrialOutcome(error=np.nan, iterations=0, flow_time=np.nan,
                      failed=True)


def _outcome(report, elapsed):
    return TrialOutcome(error=report.recovery_error,
                        iterations=report.iterations,
                        flow_time=report.flow_time, elapsed=elapsed)


def solve_trial(inst, solvers, cfg):
    """
    Runs the selected solvers on one instance, all initialized at the
    least-squares rotation. Returns a dictionary mapping row names to
    :py:class:`TrialOutcome`; a solver that raises is recorded as failed.
    """
    outcomes = {}
    r0 = inst.ground_truth.matrix
    start = time.perf_counter()
    try:
        r_ls = solve_wahba_ls(inst)
    except Exception as e:
        log.error('least-squares initialization failed: %s', e)
        for name in solvers:
            outcomes[name] = FAILED
        if 'conv' in solvers:
            outcomes['conv_projected'] = FAILED
        return outcomes
    ls_elapsed = time.perf_counter() - start

    for name in solvers:
        start = time.perf_counter()
        try:
            if name == 'ls':
                outcomes[name] = TrialOutcome(
                    error=float(np.linalg.norm(r_ls.matrix - r0)),
                    iterations=0, flow_time=0.0, elapsed=ls_elapsed)
            elif name == 'so':
                report = solve_lud_so(inst, r_ls, cfg)
                outcomes[name] = _outcome(report, time.perf_counter() - start)
            elif name == 'unconstrained':
                report = solve_lud_unconstrained(inst, r_ls.matrix, cfg)
                outcomes[name] = _outcome(report, time.perf_counter() - start)
            elif name == 'conv':
                report = solve_lud_conv_so(inst, r_ls.matrix, cfg)
                elapsed = time.perf_counter() - start
                outcomes[name] = _outcome(report, elapsed)
                projected = project_to_so(report.final_iterate)
                outcomes['conv_projected'] = TrialOutcome(
                    error=float(np.linalg.norm(projected.matrix - r0)),
                    iterations=report.iterations,
                    flow_time=report.flow_time, elapsed=elapsed)
        except Exception as e:
            log.error('solver "%s" failed: %s', name, e)
            outcomes[name] = FAILED
            if name == 'conv':
                outcomes['conv_projected'] = FAILED
    return outcomes


@dataclass(frozen=True)
class GridCell:
    """
    Aggregate of one (solver, N, p) cell. Means are taken over the trials
    that did not fail; ``wall_time`` is excluded from comparisons.
    """

    solver: str
    n: int
    p: float
    trials: int
    recoveries: int
    failures: int
    mean_error: float
    mean_iters: float
    mean_flow_time: float
    wall_time: float = field(default=0.0, compare=False)

    @property
    def probability(self):
        return self.recoveries / self.trials


def aggregate(solver, n, p, outcomes, recovery_tol):
    ok = [o for o in outcomes if not o.failed]

    def mean(values):
        return float(np.mean(values)) if values else float('nan')

    return GridCell(
        solver=solver, n=n, p=p, trials=len(outcomes),
        recoveries=sum(1 for o in ok if o.error <= recovery_tol),
        failures=len(outcomes) - len(ok),
        mean_error=mean([o.error for o in ok]),
        mean_iters=mean([o.iterations for o in ok]),
        mean_flow_time=mean([o.flow_time for o in ok]),
        wall_time=float(sum(o.elapsed for o in outcomes)))


@dataclass(frozen=True)
class GridResult:
    spec: ExperimentSpec
    cells: tuple

    def cell(self, solver, n, p):
        for c in self.cells:
            if c.solver == solver and c.n == n and c.p == p:
                return c
        raise KeyError((solver, n, p))

    def rows(self):
        """Row names present in the result, in canonical order"""
        present = {c.solver for c in self.cells}
        return [r for r in ROWS if r in present]

    def probabilities(self, solver):
        """``len(p_values) x len(n_values)`` array of recovery rates"""
        spec = self.spec
        table = np.zeros((len(spec.p_values), len(spec.n_values)))
        for i, p in enumerate(spec.p_values):
            for j, n in enumerate(spec.n_values):
                table[i, j] = self.cell(solver, n, p).probability
        return table


def run_phase_grid(spec):
    """
    Empirical recovery probability of every selected solver for every
    combination of sample size and corruption level.
    """
    cfg = spec.solver_config()
    source = load_source(spec)
    rows = [r for r in ROWS if r in spec.solvers or
            (r == 'conv_projected' and 'conv' in spec.solvers)]

    cells = []
    for n in spec.n_values:
        for p in spec.p_values:
            outcomes = {r: [] for r in rows}
            for trial in range(spec.trials):
                rng = trial_rng(spec.base_seed, n, p, trial)
                try:
                    inst = generate_instance(spec.dim, n, p, source=source,
                                             rng=rng)
                except Exception as e:
                    log.error('N=%i, p=%g, trial %i: could not generate the '
                              'instance: %s', n, p, trial, e)
                    for r in rows:
                        outcomes[r].append(FAILED)
                    continue
                for r, outcome in solve_trial(inst, spec.solvers,
                                              cfg).items():
                    outcomes[r].append(outcome)
            for r in rows:
                cells.append(aggregate(r, n, p, outcomes[r],
                                       spec.recovery_tol))
            log.info('N=%i, p=%g: %s', n, p, ', '.join(
                '%s %i/%i' % (c.solver, c.recoveries, c.trials)
                for c in cells[-len(rows):]))

    cells.sort(key=lambda c: (ROWS.index(c.solver), c.n, c.p))
    return GridResult(spec=spec, cells=tuple(cells))


def run_single(spec):
    """One instance (first sample size and level), every selected solver"""
    single = ExperimentSpec.from_dict(dict(
        spec.to_dict(), kind='single_run', n_values=spec.n_values[:1],
        p_values=spec.p_values[:1], trials=1))
    return run_phase_grid(single)


@dataclass(frozen=True)
class StartRecord:
    """
    One initialization of an envelope experiment. ``flow_time`` is the flow
    time at the first iterate within ``1e-2`` of the ground truth (NaN when
    the run did not converge).
    """

    initial_angle: float
    converged: bool
    flow_time: float
    final_angle: float
    iterations: int


@dataclass(frozen=True)
class EnvelopeSeries:
    """
    Starts of one sample size, plus the trajectory points
    ``(angle, remaining flow time)`` of the converged runs.
    """

    n: int
    starts: tuple
    trajectory: np.ndarray = field(compare=False)

    def converged(self):
        return [s for s in self.starts if s.converged]


@dataclass(frozen=True)
class EnvelopeResult:
    spec: ExperimentSpec
    series: tuple

    def series_for(self, n):
        for s in self.series:
            if s.n == n:
                return s
        raise KeyError(n)

    def statistics(self, n, factor=2.0):
        """:py:class:`~ludreg.analysis.EnvelopeStatistics` of sample size n"""
        done = self.series_for(n).converged()
        return envelope_statistics([s.initial_angle for s in done],
                                   [s.flow_time for s in done],
                                   self.spec.dim, self.spec.p_values[0],
                                   factor=factor)


def track_start(inst, r_start, cfg):
    """
    Runs the descent on SO(d) from ``r_start`` and returns the
    :py:class:`StartRecord` and the trajectory points of the run.
    """
    report = solve_lud_so(inst, r_start, cfg)
    r0t = inst.ground_truth.matrix.T
    angles = np.array([principal_angle(r0t @ r) for r in report.iterates])
    hits = np.flatnonzero(angles < CONVERGENCE_ANGLE)
    converged = bool(angles[-1] < CONVERGENCE_ANGLE and len(hits) > 0)

    if converged:
        k = hits[0]
        t_cvg = float(report.flow_trace[k])
        trajectory = np.column_stack([angles[:k + 1],
                                      t_cvg - report.flow_trace[:k + 1]])
    else:
        t_cvg = float('nan')
        trajectory = np.empty((0, 2))

    record = StartRecord(initial_angle=float(angles[0]), converged=converged,
                         flow_time=t_cvg, final_angle=float(angles[-1]),
                         iterations=report.iterations)
    return record, trajectory


def run_init_envelope(spec):
    """
    Convergence times of the descent on SO(d) from random initializations
    whose principal angle to the ground truth is uniform on [0, pi). The
    initializations are the same for every sample size.
    """
    cfg = spec.solver_config()
    source = load_source(spec)
    p = spec.p_values[0]
    series = []
    for n in spec.n_values:
        inst = generate_instance(spec.dim, n, p, source=source,
                                 rng=trial_rng(spec.base_seed, n, p, 0))
        start_rng = trial_rng(spec.base_seed, 0, p, 0)
        records, points = [], []
        for k in range(spec.starts):
            s = start_rng.uniform(0.0, np.pi)
            r_start = inst.ground_truth @ random_rotation_with_angle(
                spec.dim, s, start_rng)
            record, trajectory = track_start(inst, r_start, cfg)
            records.append(record)
            points.append(trajectory)
        trajectory = np.vstack(points)
        trajectory.setflags(write=False)
        series.append(EnvelopeSeries(n=n, starts=tuple(records),
                                     trajectory=trajectory))
        log.info('N=%i: %i/%i starts converged', n,
                 sum(r.converged for r in records), spec.starts)
    return EnvelopeResult(spec=spec, series=tuple(series))


def run_experiment(spec):
    if spec.kind == 'phase_grid':
        return run_phase_grid(spec)
    elif spec.kind == 'init_envelope':
        return run_init_envelope(spec)
    return run_single(spec)
