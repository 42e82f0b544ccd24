"""
Command line and configuration file settings.

A configuration file is a JSON document whose keys mirror the command line
flags (``"n-grid"`` or ``"n_grid"`` for ``--n-grid``, ...). Lines may carry
``#`` comments. A run manifest written by ``emit_outputs`` is accepted as
well, in which case its ``spec`` section is used.
"""

import json
import math
import re

from ..solvers import SOLVERS


class UsageError(ValueError):
    """Invalid flags, grid strings or configuration values"""


# Flag names -> ExperimentSpec field names
ALIASES = {
    'n_grid': 'n_values',
    'p_grid': 'p_values',
    'seed': 'base_seed',
    'cloud': 'source',
    'dim': 'dim',
}

KEYS = ('kind', 'dim', 'n_values', 'p_values', 'trials', 'solvers',
        'base_seed', 'source', 'recovery_tol', 'alpha_max', 'max_iters',
        'convex_max_iters', 'starts', 'overlay_c', 'out')


def _number(text, kind):
    try:
        return kind(text)
    except ValueError:
        raise UsageError('invalid number %r' % text) from None


def parse_grid(value, kind=float):
    """
    Parses a grid given as a list, a comma separated string, ``a:b:geometric``
    (a, 2a, 4a, ... up to b) or ``a:b:step`` (arithmetic progression).
    """
    if isinstance(value, (list, tuple)):
        values = [kind(v) for v in value]
    elif isinstance(value, (int, float)):
        values = [kind(value)]
    else:
        text = str(value).strip()
        if ':' in text:
            parts = text.split(':')
            if len(parts) != 3:
                raise UsageError('grid %r: expected "a:b:geometric" or '
                                 '"a:b:step"' % text)
            a, b = _number(parts[0], float), _number(parts[1], float)
            if parts[2] == 'geometric':
                if not 0 < a <= b:
                    raise UsageError('grid %r: need 0 < a <= b' % text)
                count = int(math.floor(math.log2(b / a) + 1e-9)) + 1
                values = [kind(a * 2 ** k) for k in range(count)]
            else:
                step = _number(parts[2], float)
                if not step > 0 or b < a:
                    raise UsageError('grid %r: need a positive step and '
                                     'a <= b' % text)
                count = int(math.floor((b - a) / step + 1e-9)) + 1
                values = [kind(round(a + k * step, 12)) for k in range(count)]
        else:
            values = [_number(v, kind) for v in text.split(',') if v.strip()]
    if not values:
        raise UsageError('empty grid %r' % (value,))
    return tuple(values)


def parse_solvers(value):
    if isinstance(value, str):
        names = [v.strip() for v in value.split(',') if v.strip()]
    else:
        names = list(value)
    unknown = [n for n in names if n not in SOLVERS]
    if unknown or not names:
        raise UsageError('unknown solver(s) %s, expected a subset of %s'
                         % (', '.join(unknown) or '(none)',
                            ', '.join(SOLVERS)))
    # Canonical order keeps the output stable
    return tuple(n for n in SOLVERS if n in names)


def normalize_key(key):
    key = key.replace('-', '_')
    return ALIASES.get(key, key)


def load_config(path):
    """
    Reads a configuration file and returns a dictionary keyed by
    ``ExperimentSpec`` field names. Raises ``OSError`` when the file cannot
    be read and :py:class:`UsageError` when it is malformed.
    """
    with open(path, 'r') as f:
        # Strip comments
        text = re.sub(r'(?m)^\s*#.*$', '', f.read())
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError('%s: %s' % (path, e)) from None
    if not isinstance(doc, dict):
        raise UsageError('%s: expected a JSON object' % path)
    if isinstance(doc.get('spec'), dict):
        doc = doc['spec']

    config = {}
    for key, value in doc.items():
        name = normalize_key(key)
        if name not in KEYS:
            raise UsageError('%s: unknown key "%s"' % (path, key))
        config[name] = value
    return config
