"""
Result persistence: CSV tables, the run manifest and SVG figures.

CSV files are written with a fixed row order and ``%.12g`` reals, so that
emitting the same result twice produces identical bytes. Figures are
rendered off-screen with a fixed SVG hash salt and without a date stamp.
"""

import csv
import json
import logging
import os
import platform

import numpy as np
import scipy
import matplotlib
from matplotlib.figure import Figure

from ..analysis import convex_threshold_curve, nonconvex_threshold_curve, \
    finite_time_bound, envelope_offset
from ..config import LUDREG_VERSION
from ..exceptions import DomainError
from .experiments import GridResult, EnvelopeResult

log = logging.getLogger(__name__)

GRID_HEADER = ('solver', 'N', 'p', 'trials', 'recoveries', 'mean_error',
               'mean_iters', 'mean_flow_time')
ENVELOPE_HEADER = ('N', 'start', 'initial_angle', 'converged', 'flow_time',
                   'final_angle', 'iterations')

SEED_DERIVATION = ('numpy.random.default_rng(SeedSequence(int.from_bytes('
                   'blake2b(repr((base_seed, N, float(p), trial)), '
                   'digest_size=16), "little")))')

SVG_RC = {'svg.hashsalt': 'ludreg', 'svg.fonttype': 'none'}


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return '%i' % value
    return '%.12g' % value


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v)
                             for v in row])


def write_grid_csv(result, path):
    _write_csv(path, GRID_HEADER, (
        (c.solver, c.n, c.p, c.trials, c.recoveries, c.mean_error,
         c.mean_iters, c.mean_flow_time) for c in result.cells))


def write_envelope_csv(result, path):
    _write_csv(path, ENVELOPE_HEADER, (
        (series.n, k, s.initial_angle, s.converged, s.flow_time,
         s.final_angle, s.iterations)
        for series in result.series for k, s in enumerate(series.starts)))


def manifest(result):
    """Reproducibility record: spec, seed derivation and package versions"""
    return {
        'ludreg': LUDREG_VERSION,
        'versions': {
            'python': platform.python_version(),
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'matplotlib': matplotlib.__version__,
        },
        'seed_derivation': SEED_DERIVATION,
        'spec': result.spec.to_dict(),
    }


def write_manifest(result, path):
    with open(path, 'w') as f:
        json.dump(manifest(result), f, indent=2, sort_keys=True)
        f.write('\n')


def _save(fig, path):
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format='svg', metadata={'Date': None})


def plot_heatmap(result, solver, path, c=1.0):
    """
    Recovery probability of ``solver`` over the (N, p) grid, with the convex
    and non-convex threshold curves ``p~(d) - c sqrt(log N / N)`` and
    ``1 - c sqrt(log N / N)`` overlaid.
    """
    spec = result.spec
    table = result.probabilities(solver)
    n = np.array(spec.n_values, dtype=np.float64)

    fig = Figure(figsize=(5.5, 4.2))
    ax = fig.add_subplot()
    image = ax.imshow(table, origin='lower', aspect='auto', cmap='gray',
                      vmin=0.0, vmax=1.0, interpolation='nearest')
    fig.colorbar(image, ax=ax, label='recovery probability')

    # Curves are drawn in cell coordinates: N is indexed, p interpolated
    cols = np.arange(len(n))
    p_axis = np.array(spec.p_values)

    def to_rows(p):
        return np.interp(p, p_axis, np.arange(len(p_axis)),
                         left=np.nan, right=np.nan)

    curves = [('non-convex', nonconvex_threshold_curve(n, c))]
    try:
        curves.append(('convex', convex_threshold_curve(spec.dim, n, c)))
    except DomainError:
        pass
    for label, values in curves:
        ax.plot(cols, to_rows(values), label='%s threshold (c = %g)'
                % (label, c), linewidth=1.5)

    ax.set_xticks(cols)
    ax.set_xticklabels(['%i' % v for v in spec.n_values], rotation=45)
    ax.set_yticks(np.arange(len(p_axis)))
    ax.set_yticklabels(['%g' % v for v in p_axis])
    ax.set_xlabel('N')
    ax.set_ylabel('p')
    ax.set_title('%s, d = %i' % (solver, spec.dim))
    ax.legend(loc='lower right', fontsize='small')
    fig.tight_layout()
    _save(fig, path)


def plot_envelope(result, path):
    """
    Convergence time against initial angle for every sample size, the
    trajectory points of the converged runs and ``T(s) + offset``.
    """
    spec = result.spec
    p = spec.p_values[0]
    fig = Figure(figsize=(6, 4.2))
    ax = fig.add_subplot()

    angles, times = [], []
    for series in result.series:
        traj = series.trajectory
        if len(traj) > 0:
            ax.scatter(traj[:, 0], traj[:, 1], s=2, alpha=0.25)
        done = series.converged()
        a = [s.initial_angle for s in done]
        t = [s.flow_time for s in done]
        ax.scatter(a, t, s=10, label='N = %i' % series.n)
        angles += a
        times += t

    try:
        offset = envelope_offset(angles, times, spec.dim, p)
        s = np.linspace(0.0, np.pi - 1e-2, 200)
        bound = np.array([finite_time_bound(spec.dim, p, v) for v in s])
        ax.plot(s, spec.overlay_c * bound + offset, color='k',
                label='%g T(s) + %.3g' % (spec.overlay_c, offset))
    except DomainError as e:
        log.warning('plot_envelope(): no bound curve: %s', e)

    ax.set_xlabel('initial angle s')
    ax.set_ylabel('flow time to convergence')
    ax.set_title('d = %i, p = %g' % (spec.dim, p))
    ax.legend(loc='upper left', fontsize='small')
    fig.tight_layout()
    _save(fig, path)


def emit_outputs(result, out_dir):
    """
    Writes ``results.csv``, ``manifest.json`` and the SVG figures of
    ``result`` to ``out_dir`` (created if necessary) and returns the list of
    written paths. IO failures are re-raised with the offending path.
    """
    written = []

    def target(name):
        path = os.path.join(out_dir, name)
        written.append(path)
        return path

    path = out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
        if isinstance(result, GridResult):
            write_grid_csv(result, path := target('results.csv'))
            write_manifest(result, path := target('manifest.json'))
            if result.spec.kind == 'phase_grid':
                for solver in result.rows():
                    plot_heatmap(result, solver,
                                 path := target('heatmap_%s.svg' % solver),
                                 c=result.spec.overlay_c)
        elif isinstance(result, EnvelopeResult):
            write_envelope_csv(result, path := target('envelope.csv'))
            write_manifest(result, path := target('manifest.json'))
            plot_envelope(result, path := target('envelope.svg'))
        else:
            raise TypeError('emit_outputs(): unsupported result type %s'
                            % type(result).__name__)
    except OSError as e:
        raise OSError(e.errno, '%s: %s' % (path, e.strerror or e)) from e

    log.info('emit_outputs(): wrote %s', ', '.join(written))
    return written
