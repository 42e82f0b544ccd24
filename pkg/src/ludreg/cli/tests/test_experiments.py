import numpy as np
import pytest

from ludreg.analysis import finite_time_bound
from ludreg.cli.experiments import ROWS, ExperimentSpec, GridResult, \
    EnvelopeResult, TrialOutcome, aggregate, run_experiment, \
    run_init_envelope, run_phase_grid, solve_trial, track_start
from ludreg.cli.settings import UsageError
from ludreg.datamodel import generate_instance, trial_rng
from ludreg.python.test.util import write_file
from ludreg.sogeom import random_rotation, random_rotation_with_angle
from ludreg.solvers import SolverConfig


def test01_clean_grid():
    spec = ExperimentSpec.for_kind('phase_grid', n_values='16,32',
                                   p_values='0.0', trials=2)
    result = run_phase_grid(spec)
    assert result.rows() == list(ROWS)
    assert len(result.cells) == 2 * len(ROWS)
    for cell in result.cells:
        assert cell.probability == 1.0
        assert cell.failures == 0
    assert result.probabilities('so').shape == (1, 2)
    # Cells are ordered by row, then N, then p
    assert [(c.solver, c.n) for c in result.cells[:3]] == \
        [('ls', 16), ('ls', 32), ('so', 16)]


def test02_deterministic():
    spec = ExperimentSpec.for_kind('phase_grid', n_values='24',
                                   p_values='0.2,0.5', trials=2,
                                   solvers='ls,so', base_seed=7)
    a, b = run_experiment(spec), run_experiment(spec)
    assert isinstance(a, GridResult)
    assert a.cells == b.cells
    assert a.rows() == ['ls', 'so']

    c = run_experiment(ExperimentSpec.from_dict(
        dict(spec.to_dict(), base_seed=8)))
    assert c.cells != a.cells


def test03_single_run():
    spec = ExperimentSpec.for_kind('single_run', n_values='64,128',
                                   p_values='0.3,0.4', solvers='conv',
                                   convex_max_iters=50)
    result = run_experiment(spec)
    assert result.spec.kind == 'single_run'
    assert result.spec.n_values == (64,) and result.spec.p_values == (0.3,)
    assert result.rows() == ['conv', 'conv_projected']
    cell = result.cell('conv', 64, 0.3)
    assert cell.trials == 1 and cell.mean_iters <= 50
    with pytest.raises(KeyError):
        result.cell('so', 64, 0.3)


def test04_solve_trial(rng):
    inst = generate_instance(3, 50, 0.2, rng=rng)
    outcomes = solve_trial(inst, ('ls', 'unconstrained', 'conv'),
                           SolverConfig(max_iters=10, convex_max_iters=10))
    assert set(outcomes) == {'ls', 'unconstrained', 'conv', 'conv_projected'}
    assert outcomes['ls'].iterations == 0
    assert outcomes['unconstrained'].flow_time == 0.0
    assert not any(o.failed for o in outcomes.values())
    # Projecting onto SO(d) never moves away from R0 by more than twice
    assert outcomes['conv_projected'].error <= \
        2 * outcomes['conv'].error + 1e-12


def test05_aggregate_failures():
    outcomes = [TrialOutcome(error=1e-3, iterations=4, flow_time=1.0),
                TrialOutcome(error=0.5, iterations=8, flow_time=3.0),
                TrialOutcome(error=np.nan, iterations=0, flow_time=np.nan,
                             failed=True)]
    cell = aggregate('so', 16, 0.3, outcomes, 1e-2)
    assert (cell.trials, cell.recoveries, cell.failures) == (3, 1, 1)
    assert cell.probability == pytest.approx(1 / 3)
    assert cell.mean_iters == 6.0 and cell.mean_flow_time == 2.0


def test06_cloud_source(tmpfile):
    lines = ['%g,%g,%g' % tuple(v) for v in
             np.random.default_rng(3).standard_normal((40, 3))]
    write_file(tmpfile, '\n'.join(lines) + '\n')
    spec = ExperimentSpec.for_kind('single_run', source=tmpfile,
                                   p_values='0.0', n_values='20',
                                   solvers='ls')
    assert run_experiment(spec).cell('ls', 20, 0.0).probability == 1.0

    with pytest.raises(UsageError) as excinfo:
        run_experiment(ExperimentSpec.from_dict(dict(spec.to_dict(), dim=4)))
    assert 'has dimension 3 but --dim is 4' in str(excinfo.value)


def test07_track_start(rng):
    r0 = random_rotation(3, rng)
    inst = generate_instance(3, 100, 0.0, r0=r0, rng=rng)

    record, trajectory = track_start(inst, r0, SolverConfig())
    assert record.converged and record.flow_time == 0.0
    assert record.iterations == 0
    assert trajectory.shape == (1, 2)

    r_start = r0 @ random_rotation_with_angle(3, 0.5, rng)
    record, trajectory = track_start(inst, r_start, SolverConfig())
    assert record.initial_angle == pytest.approx(0.5)
    assert record.converged and record.final_angle < 1e-2
    assert record.flow_time > 0
    # Remaining flow time decreases to zero at the first hit
    assert trajectory[0, 1] == pytest.approx(record.flow_time)
    assert trajectory[-1, 1] == 0.0 and trajectory[-1, 0] < 1e-2
    assert np.all(trajectory[:-1, 0] >= 1e-2)


def test08_envelope_starts_shared():
    spec = ExperimentSpec.for_kind('init_envelope', dim=3,
                                   n_values='32,64', p_values='0.2',
                                   starts=4, max_iters=200)
    result = run_experiment(spec)
    assert isinstance(result, EnvelopeResult)
    a, b = result.series_for(32), result.series_for(64)
    assert len(a.starts) == len(b.starts) == 4
    assert np.allclose([s.initial_angle for s in a.starts],
                       [s.initial_angle for s in b.starts], atol=1e-9)
    assert all(0 <= s.initial_angle < np.pi for s in a.starts)
    with pytest.raises(KeyError):
        result.series_for(128)


@pytest.mark.slow
def test09_envelope_acceptance():
    result = run_init_envelope(ExperimentSpec.for_kind('init_envelope'))
    stats = result.statistics(128)
    assert stats.fraction >= 0.95
    assert stats.spearman > 0.5


def test10_flow_time_tracks_bound():
    # Converged flow times stay within a factor 2 of T(s) on both sides
    n, p = 128, 0.75
    inst = generate_instance(4, n, p, rng=trial_rng(0, n, p, 0))
    rng = trial_rng(0, 0, p, 0)
    for s in [1.0, 1.5, 2.0]:
        r_start = inst.ground_truth @ random_rotation_with_angle(4, s, rng)
        record, _ = track_start(inst, r_start, SolverConfig())
        assert record.converged, s
        bound = finite_time_bound(4, p, s)
        assert 0.5 * bound <= record.flow_time <= 2.0 * bound, s


@pytest.mark.slow
def test11_recovery_monotone_in_p():
    spec = ExperimentSpec.for_kind('phase_grid', n_values='1024',
                                   p_values='0.3,0.6,0.9,0.99', trials=2,
                                   solvers='so')
    prob = run_phase_grid(spec).probabilities('so')[:, 0]
    assert prob[0] == 1.0
    assert np.all(np.diff(prob) <= 0)
    assert prob[-1] < prob[0]


@pytest.mark.slow
def test12_recovery_region_grows_with_n():
    spec = ExperimentSpec.for_kind('init_envelope', n_values='24,128',
                                   starts=30)
    result = run_init_envelope(spec)

    def largest_converged(n):
        done = result.series_for(n).converged()
        return max([s.initial_angle for s in done], default=0.0)

    small, large = result.series_for(24), result.series_for(128)
    assert len(large.converged()) >= len(small.converged())
    assert len(large.converged()) >= 0.9 * spec.starts
    assert largest_converged(128) >= largest_converged(24)
