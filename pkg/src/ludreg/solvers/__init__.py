"""
Estimators of the rotation R0:

* :py:func:`solve_wahba_ls` - least squares over SO(d), closed form
* :py:func:`solve_lud_so` - LUD over SO(d), geodesic descent
* :py:func:`solve_lud_unconstrained` - LUD over all d x d matrices, IRLS
* :py:func:`solve_lud_conv_so` - LUD over conv SO(d), projected subgradient
"""

from .config import LineSearch, StepSchedule, SolverConfig, SolverReport, \
    Termination
from .convhull import SignedSpectrum, Membership, MembershipCertificate, \
    signed_svd, project_even_parity, project_conv_so, membership_conv_so
from .irls import solve_lud_unconstrained
from .projected import solve_lud_conv_so
from .riemannian import solve_lud_so
from .wahba import solve_wahba_ls

SOLVERS = ('ls', 'so', 'unconstrained', 'conv')

__all__ = [
    'LineSearch', 'StepSchedule', 'SolverConfig', 'SolverReport',
    'Termination', 'SignedSpectrum', 'Membership', 'MembershipCertificate',
    'signed_svd', 'project_even_parity', 'project_conv_so',
    'membership_conv_so', 'solve_wahba_ls', 'solve_lud_so',
    'solve_lud_unconstrained', 'solve_lud_conv_so', 'SOLVERS',
]
