import numpy as np
import pytest

from ludreg.cost import ls_cost
from ludreg.datamodel import generate_instance, trial_rng
from ludreg.sogeom import random_rotation
from ludreg.solvers import solve_wahba_ls


def test01_noiseless(rng):
    for d in [2, 3, 5]:
        r0 = random_rotation(d, rng)
        inst = generate_instance(d, 20, 0.0, r0=r0, rng=rng)
        assert np.allclose(solve_wahba_ls(inst).matrix, r0.matrix,
                           atol=1e-12)


def test02_minimizes_least_squares(rng):
    inst = generate_instance(3, 100, 0.3, r0=random_rotation(3, rng),
                             rng=rng)
    r = solve_wahba_ls(inst).matrix
    for _ in range(500):
        q = random_rotation(3, rng).matrix
        assert ls_cost(r, inst) <= ls_cost(q, inst) + 1e-12


def test03_equivariance(rng):
    inst = generate_instance(4, 60, 0.2, r0=random_rotation(4, rng), rng=rng)
    p = random_rotation(4, rng).matrix
    r = solve_wahba_ls(inst).matrix
    assert np.allclose(solve_wahba_ls(inst.rotated_targets(p)).matrix,
                       p @ r, atol=1e-12)
    assert np.allclose(solve_wahba_ls(inst.rotated_sources(p)).matrix,
                       r @ p.T, atol=1e-12)


@pytest.mark.slow
def test04_sensitivity_to_corruption():
    # Even 10% corruption moves the least-squares rotation by more than 1e-2
    errors = []
    for trial in range(10):
        rng = trial_rng(0, 1024, 0.1, trial)
        inst = generate_instance(3, 1024, 0.1, r0=random_rotation(3, rng),
                                 rng=rng)
        errors.append(np.linalg.norm(solve_wahba_ls(inst).matrix
                                     - inst.ground_truth.matrix))
    assert np.median(errors) > 1e-2
