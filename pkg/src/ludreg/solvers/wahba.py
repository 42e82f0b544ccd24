import numpy as np

from ..sogeom import project_to_so


def solve_wahba_ls(inst):
    """
    Least-squares rotation (Wahba's problem): the nearest rotation to
    ``M = sum_i y_i x_i^T``. Emits
    :py:class:`~ludreg.exceptions.DegenerateProjection` when the minimizer is
    not unique.
    """
    if inst.size < 1:
        raise ValueError('solve_wahba_ls(): instance has no point pairs')
    m = inst.points_y.T @ inst.points_x
    return project_to_so(m)
