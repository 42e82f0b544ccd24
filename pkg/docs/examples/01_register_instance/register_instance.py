import numpy as np

from ludreg.datamodel import generate_instance, trial_rng
from ludreg.sogeom import random_rotation
from ludreg.solvers import solve_wahba_ls, solve_lud_so, \
    solve_lud_unconstrained, solve_lud_conv_so

# Reproducible generator for (base_seed, N, p, trial)
rng = trial_rng(0, 1024, 0.4, 0)

# 1024 pairs in dimension 3, 40% of the targets replaced by random points
r0 = random_rotation(3, rng)
inst = generate_instance(3, 1024, 0.4, r0=r0, rng=rng)

# Least squares is biased by the corrupted pairs
r_ls = solve_wahba_ls(inst)
print('least squares error: %.3g' % np.linalg.norm(r_ls.matrix - r0.matrix))

# The LUD estimators recover R0 exactly below their thresholds
for solver in (solve_lud_so, solve_lud_unconstrained, solve_lud_conv_so):
    start = r_ls if solver is solve_lud_so else r_ls.matrix
    report = solver(inst, start)
    print('%s: %s after %i iterations, error %.3g' % (
        solver.__name__, report.termination.value, report.iterations,
        report.recovery_error))

# The convex solver also certifies that its estimate lies in conv SO(3)
print(solve_lud_conv_so(inst, r_ls.matrix).certificate)
