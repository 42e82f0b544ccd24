"""
ludreg: robust rotation registration with least unsquared deviations.

The package estimates a rotation R0 from point pairs y_i = R0 x_i when a
fraction of the pairs has been replaced by independent draws. It contains
the geometry of SO(d) (:py:mod:`ludreg.sogeom`), the corruption model
(:py:mod:`ludreg.datamodel`), the LUD/LS costs (:py:mod:`ludreg.cost`), the
estimators (:py:mod:`ludreg.solvers`), closed-form threshold quantities
(:py:mod:`ludreg.analysis`) and the experiment driver (:py:mod:`ludreg.cli`).
"""

from .config import LUDREG_VERSION as __version__  # noqa: F401
