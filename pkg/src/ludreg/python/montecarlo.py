import logging
import time

import numpy as np
import scipy.integrate
import scipy.stats

from ..analysis import beta_fn, sphere_expectations, \
    small_ball_probability, small_ball_bound
from ..datamodel import sample_sphere

log = logging.getLogger(__name__)


def inv_prod_tail(d, clip):
    """
    ``E[max(0, 1 / (|x - y| |x + y|) - clip)]``, the part of
    ``inv_prod_mean`` removed by clipping at ``clip``. With ``t = x.y``,
    ``|x - y| |x + y| = 2 sqrt(1 - t^2)`` and ``t`` has density
    proportional to ``(1 - t^2)^((d - 3) / 2)``.
    """
    a = (d - 3) / 2
    tau = np.sqrt(1.0 - 0.25 / (clip * clip))
    head = scipy.integrate.quad(lambda t: 0.5 * (1 + t) ** (a - 0.5), tau, 1,
                                weight='alg', wvar=(0, a - 0.5), epsabs=0.0)[0]
    body = scipy.integrate.quad(lambda t: clip * (1 + t) ** a, tau, 1,
                                weight='alg', wvar=(0, a), epsabs=0.0)[0]
    # Both halves of [-1, 1]
    return 2.0 * (head - body) / beta_fn(0.5, (d - 1) / 2)


class SphereMomentTest:
    """
    Compares Monte Carlo estimates over independent pairs ``x, y`` uniform on
    the unit sphere against the closed forms of
    :py:func:`ludreg.analysis.sphere_expectations` and
    :py:func:`ludreg.analysis.small_ball_probability`, using a two-sided
    z-test per quantity.

    Parameter ``dim`` (int):
       Dimension of the ambient space (at least 3)

    Parameter ``sample_count`` (int):
       Number of sampled pairs. The default value is ``1000000``.

    Parameter ``deltas`` (tuple):
       Radii at which ``P(|x - y| < delta)`` is checked. The default value is
       ``(0.1, 0.5, 1.0)``.

    Parameter ``seed`` (int):
       Seed of the random number generator

    Parameter ``batch_size`` (int):
       Number of pairs drawn at once, bounding the memory footprint

    Parameter ``clip`` (float):
       Clip level of the ``1 / (|x - y| |x + y|)`` samples. The unclipped
       statistic has infinite variance in dimension 3; the clipped mean is
       compared with ``inv_prod_mean - inv_prod_tail(dim, clip)``. The
       default value is ``50``.

    Notes:

    The following attributes are part of the public API:

    messages: string
        The implementation may generate a number of messages while running the
        test, which can be retrieved via this attribute.

    estimates: dict
        Maps every quantity name to ``(estimate, standard_error, reference)``;
        populated by ``tabulate()``.

    bound_violations: list
        Radii at which the empirical small-ball probability exceeds
        ``small_ball_bound``.
    """

    def __init__(self, dim, sample_count=1000000, deltas=(0.1, 0.5, 1.0),
                 seed=0, batch_size=200000, clip=50.0):
        assert dim >= 3, "The 'dim' parameter must be >= 3!"
        assert sample_count > 1
        assert clip > 0.5, "The 'clip' parameter must exceed 1/2!"

        self.dim = dim
        self.sample_count = sample_count
        self.deltas = tuple(deltas)
        self.seed = seed
        self.batch_size = batch_size
        self.clip = clip
        self.estimates = None
        self.bound_violations = []
        self.messages = ''
        self.fail = False

    def tabulate(self):
        """Draws the pairs and accumulates first and second moments"""
        rng = np.random.default_rng(self.seed)
        n = self.sample_count
        sums = np.zeros(3)
        squares = np.zeros(3)
        hits = np.zeros(len(self.deltas))

        start = time.time()
        remaining = n
        while remaining > 0:
            k = min(remaining, self.batch_size)
            x = sample_sphere(self.dim, k, rng)
            y = sample_sphere(self.dim, k, rng)
            dist = np.linalg.norm(x - y, axis=1)
            dist_plus = np.linalg.norm(x + y, axis=1)
            dot = np.einsum('ij,ij->i', x, y)
            values = np.stack([
                dist,
                np.minimum(1.0 / (dist * dist_plus), self.clip),
                (1.0 - dot) / (self.dim * dist)
            ])
            sums += values.sum(axis=1)
            squares += (values * values).sum(axis=1)
            hits += [np.count_nonzero(dist < delta) for delta in self.deltas]
            remaining -= k
        elapsed = (time.time() - start) * 1000

        means = sums / n
        stderr = np.sqrt(np.maximum(squares / n - means ** 2, 0) / (n - 1))
        ref = sphere_expectations(self.dim)
        tail = inv_prod_tail(self.dim, self.clip)
        self.estimates = {
            'mean_dist': (means[0], stderr[0], ref.mean_dist),
            'inv_prod_mean': (means[1], stderr[1], ref.inv_prod_mean - tail),
            'cross_coeff': (means[2], stderr[2], ref.cross_coeff),
        }

        self.bound_violations = []
        for delta, count in zip(self.deltas, hits):
            p_ref = small_ball_probability(self.dim, delta)
            # Binomial standard error under the null hypothesis
            err = np.sqrt(p_ref * (1 - p_ref) / n)
            self.estimates['small_ball(%g)' % delta] = (count / n, err, p_ref)
            if count / n > small_ball_bound(self.dim, delta):
                self.bound_violations.append(delta)

        self._log('Drew %i pairs in dimension %i (%.2f ms)'
                  % (n, self.dim, elapsed))
        self._log('Clipped inv_prod_mean at %g, tail %.6g'
                  % (self.clip, tail))
        for delta in self.bound_violations:
            self._log('Empirical P(|x - y| < %g) = %.6g exceeds the bound '
                      'delta^d / (5 sqrt(d)) = %.6g' % (
                          delta, self.estimates['small_ball(%g)' % delta][0],
                          small_ball_bound(self.dim, delta)))

    def run(self, significance_level=0.0027, test_count=1, quiet=False):
        """
        Run the z-tests

        Parameter ``significance_level`` (float):
            Denotes the desired significance level of each quantity. The
            default corresponds to a deviation of three standard errors.

        Parameter ``test_count`` (int):
            Specifies the total number of statistical tests run by the user.
            This value will be used to adjust the provided significance level
            so that the combination of the entire set of tests has the provided
            significance level.

        Returns → bool:
            ``True`` upon success, ``False`` if a closed form was rejected.
        """
        if self.estimates is None:
            self.tabulate()

        # Šidák correction for running several tests in sequence
        significance_level = 1.0 - \
            (1.0 - significance_level) ** (1.0 / test_count)
        threshold = scipy.stats.norm.isf(significance_level / 2)

        result = not self.fail
        for name, (estimate, err, reference) in self.estimates.items():
            if err > 0:
                z = abs(estimate - reference) / err
            else:
                z = 0.0 if estimate == reference else np.inf
            if not np.isfinite(z) or z > threshold:
                self._log('***** Rejected ***** %s: estimate %.8g, closed '
                          'form %.8g (z = %.2f, threshold %.2f)'
                          % (name, estimate, reference, z, threshold))
                result = False
            else:
                self._log('Accepted %s: estimate %.8g +- %.2g, closed form '
                          '%.8g (z = %.2f)' % (name, estimate, err,
                                               reference, z))
        if not quiet:
            print(self.messages)
        return result

    def _log(self, msg):
        log.debug(msg)
        self.messages += msg + '\n'
