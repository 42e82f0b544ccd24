import json
import os

import pytest

from ludreg.cli.experiments import ExperimentSpec, run_experiment
from ludreg.cli.output import GRID_HEADER, ENVELOPE_HEADER, emit_outputs, \
    fmt, manifest
from ludreg.cli.settings import load_config


@pytest.fixture(scope='module')
def grid_result():
    spec = ExperimentSpec.for_kind('phase_grid', n_values='16,32',
                                   p_values='0.1,0.3', trials=2,
                                   solvers='ls,so', base_seed=5)
    return run_experiment(spec)


def test01_fmt():
    assert fmt(True) == '1' and fmt(False) == '0'
    assert fmt(1024) == '1024'
    assert fmt(0.1) == '0.1'
    assert fmt(float('nan')) == 'nan'
    assert fmt(1 / 3) == '0.333333333333'


def test02_grid_outputs(grid_result, tmpdir):
    out = str(tmpdir.join('run'))
    written = emit_outputs(grid_result, out)
    assert [os.path.basename(p) for p in written] == [
        'results.csv', 'manifest.json', 'heatmap_ls.svg', 'heatmap_so.svg']
    for path in written:
        assert os.path.getsize(path) > 0

    with open(written[0]) as f:
        lines = f.read().splitlines()
    assert lines[0] == ','.join(GRID_HEADER)
    # Two rows of four cells
    assert len(lines) == 1 + 2 * 4
    assert lines[1].startswith('ls,16,0.1,2,')
    assert lines[-1].startswith('so,32,0.3,2,')

    with open(written[2]) as f:
        svg = f.read()
    assert '<svg' in svg and 'dc:date' not in svg


def test03_reemit_identical(grid_result, tmpdir):
    a = emit_outputs(grid_result, str(tmpdir.join('a')))
    b = emit_outputs(grid_result, str(tmpdir.join('b')))
    for pa, pb in zip(a, b):
        with open(pa, 'rb') as fa, open(pb, 'rb') as fb:
            assert fa.read() == fb.read(), pa


def test04_manifest_round_trip(grid_result, tmpdir):
    out = str(tmpdir.join('run'))
    emit_outputs(grid_result, out)
    path = os.path.join(out, 'manifest.json')
    with open(path) as f:
        doc = json.load(f)
    assert doc == json.loads(json.dumps(manifest(grid_result)))
    assert set(doc['versions']) == {'python', 'numpy', 'scipy',
                                    'matplotlib'}
    assert 'blake2b' in doc['seed_derivation']

    values = load_config(path)
    kind = values.pop('kind')
    assert ExperimentSpec.for_kind(kind, **values) == grid_result.spec


def test05_single_run_has_no_heatmap(tmpdir):
    spec = ExperimentSpec.for_kind('single_run', n_values='16', solvers='ls')
    written = emit_outputs(run_experiment(spec), str(tmpdir))
    assert [os.path.basename(p) for p in written] == ['results.csv',
                                                      'manifest.json']


def test06_envelope_outputs(tmpdir):
    spec = ExperimentSpec.for_kind('init_envelope', dim=3, n_values='16',
                                   p_values='0.1', starts=3, max_iters=100)
    written = emit_outputs(run_experiment(spec), str(tmpdir))
    assert [os.path.basename(p) for p in written] == [
        'envelope.csv', 'manifest.json', 'envelope.svg']
    with open(written[0]) as f:
        lines = f.read().splitlines()
    assert lines[0] == ','.join(ENVELOPE_HEADER)
    assert len(lines) == 4
    assert [line.split(',')[1] for line in lines[1:]] == ['0', '1', '2']


def test07_io_errors(grid_result, tmpdir):
    blocker = tmpdir.join('file')
    blocker.write('')
    with pytest.raises(OSError) as excinfo:
        emit_outputs(grid_result, str(blocker))
    assert str(blocker) in str(excinfo.value)

    with pytest.raises(TypeError) as excinfo:
        emit_outputs(grid_result.spec, str(tmpdir))
    assert 'unsupported result type ExperimentSpec' in str(excinfo.value)


def test08_rerun_from_manifest(grid_result, tmpdir):
    first = str(tmpdir.join('first'))
    written = emit_outputs(grid_result, first)

    values = load_config(os.path.join(first, 'manifest.json'))
    spec = ExperimentSpec.for_kind(values.pop('kind'), **values)
    rerun = emit_outputs(run_experiment(spec), str(tmpdir.join('second')))
    assert len(rerun) == len(written)
    for pa, pb in zip(written, rerun):
        with open(pa, 'rb') as fa, open(pb, 'rb') as fb:
            assert fa.read() == fb.read(), os.path.basename(pa)
