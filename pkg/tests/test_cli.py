"""
Tests for the command-line front end: exit codes, written files and
byte-for-byte reproducibility.
"""

import csv
import json
from pathlib import Path

import pytest
import yaml

from src.cli import ConfigError, expand_batches, load_config, main

REPO = Path(__file__).parent.parent


def _config(tmp_path, data, name="config.yaml"):
    path = tmp_path / name
    if name.endswith(".json"):
        path.write_text(json.dumps(data))
    else:
        path.write_text(yaml.safe_dump(data))
    return path


def _run(*argv):
    return main([str(a) for a in argv])


DISK = {
    'schema': 1, 'kind': 'enclose',
    'hypothesis': {'type': 'disk_complement', 'R': 5.0},
    'perturbation': {'type': 'relbound', 'a': 0.3, 'b': 0.2},
    'window': [-6, 6, -6, 6],
}


def _validate(**overrides):
    config = {
        'schema': 1, 'kind': 'validate', 'name': 'tiny',
        'matrix': {'n': [4, 8], 'scenarios': 3, 'seed': 5, 'contraction': 'unitary'},
        'hypothesis': {'type': 'disk_complement', 'R': 5.0},
        'perturbation': {'type': 'relbound', 'a': 0.3, 'b': 0.2},
        'resolvent_points': 5,
        'window': [-6, 6, -6, 6],
    }
    config.update(overrides)
    return config


# =============================================================================
# Config handling
# =============================================================================

def test_load_config_checks_schema(tmp_path):
    path = _config(tmp_path, {'kind': 'enclose'})
    with pytest.raises(ConfigError, match="schema"):
        load_config(path)


def test_load_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.yaml")


def test_expand_batches_inherits_shared_keys():
    config = {'schema': 1, 'matrix': {'seed': 1, 'n': 4},
              'batches': [{'name': 'a', 'matrix': {'n': 8}}, {'name': 'b'}]}
    out = expand_batches(config)
    assert [b['name'] for b in out] == ['a', 'b']
    assert out[0]['matrix'] == {'seed': 1, 'n': 8}
    assert out[1]['matrix'] == {'seed': 1, 'n': 4}
    assert expand_batches({'schema': 1}) == [{'schema': 1}]


def test_shipped_configs_load():
    for path in sorted((REPO / "experiments" / "config").iterdir()):
        config = load_config(path)
        assert config['kind'] in ('enclose', 'validate', 'compare-bounds', 'stargraph', 'oracle')


@pytest.mark.parametrize("command,config", [
    ('enclose', {'kind': 'enclose'}),
    ('enclose', dict(DISK, kind='validate')),
    ('enclose', dict(DISK, hypothesis={'type': 'annulus'})),
    ('enclose', dict(DISK, window=[1, 0, 0, 1])),
    ('validate', _validate(matrix={'n': 4, 'scenarios': 1})),
    ('compare-bounds', {'schema': 1, 'perturbation': {'type': 'subordinate', 'c': 1, 'p': 0.5},
                        'sector': {'vertex': 0, 'theta': 0.3}}),
    ('oracle', {'schema': 1, 'matrix': {'count': 1}}),
])
def test_config_errors_exit_2(tmp_path, command, config):
    path = _config(tmp_path, config)
    assert _run(command, '--config', path, '--out', tmp_path / 'out') == 2


def test_bad_window_flag(tmp_path):
    path = _config(tmp_path, DISK)
    assert _run('enclose', '--config', path, '--out', tmp_path, '--window', '1,2') == 2


# =============================================================================
# enclose
# =============================================================================

def test_enclose_writes_report(tmp_path):
    path = _config(tmp_path, DISK)
    out = tmp_path / 'out'
    assert _run('enclose', '--config', path, '--out', out, '--grid', '5') == 0
    report = json.loads((out / 'enclosure.json').read_text())
    assert report['theorem'] == 'disk_complement'
    assert report['applicable'] is True
    assert len(report['bound_samples']) == 25
    assert (out / 'boundary.csv').read_text().startswith("re,im,source\n")


def test_enclose_boundary_has_region_and_hypothesis_circles(tmp_path):
    assert _run('enclose', '--config', REPO / 'experiments' / 'config' / 'disk.json', '--out', tmp_path) == 0
    r = json.loads((tmp_path / 'enclosure.json').read_text())['constants']['r']
    radii = {False: [], True: []}
    for line in (tmp_path / 'boundary.csv').read_text().splitlines()[1:]:
        if line:
            x, y, source = line.split(',')
            radii[source.startswith('hypothesis/')].append(abs(complex(float(x), float(y))))
    assert radii[False] and radii[True]
    assert max(abs(v - r) for v in radii[False]) < 1e-9
    assert max(abs(v - 5.0) for v in radii[True]) < 1e-9


def test_enclose_json_config(tmp_path):
    path = _config(tmp_path, DISK, name="disk.json")
    assert _run('enclose', '--config', path, '--out', tmp_path / 'out') == 0


def test_enclose_inapplicable_exit_3(tmp_path):
    config = dict(DISK, hypothesis={'type': 'disk_complement', 'R': 1.0},
                  perturbation={'type': 'relbound', 'a': 1.0, 'b': 0.5})
    path = _config(tmp_path, config)
    out = tmp_path / 'out'
    assert _run('enclose', '--config', path, '--out', out) == 3
    report = json.loads((out / 'enclosure.json').read_text())
    assert report['reason'] == 'radius_nonpositive'
    assert report['constants']['r'] < 0


def test_enclose_explicit_theorem(tmp_path):
    config = dict(DISK, hypothesis={'type': 'strip', 'g1': -1.0, 'g2': 1.0}, theorem='strip_symmetric')
    path = _config(tmp_path, config)
    out = tmp_path / 'out'
    assert _run('enclose', '--config', path, '--out', out) == 0
    assert json.loads((out / 'enclosure.json').read_text())['theorem'] == 'strip_symmetric'


# =============================================================================
# validate
# =============================================================================

def _tree(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob('*')) if p.is_file()}


def test_validate_passes_and_is_reproducible(tmp_path):
    path = _config(tmp_path, _validate())
    assert _run('validate', '--config', path, '--out', tmp_path / 'a') == 0
    assert _run('validate', '--config', path, '--out', tmp_path / 'b', '--jobs', '2') == 0
    a, b = _tree(tmp_path / 'a'), _tree(tmp_path / 'b')
    assert a == b
    assert Path('tiny/batch_summary.json') in a
    assert Path('tiny/scenarios/disk_complement-0002.json') in a


def test_validate_prints_batch_banner(tmp_path, capsys):
    path = _config(tmp_path, _validate())
    assert _run('validate', '--config', path, '--out', tmp_path) == 0
    out = capsys.readouterr().out
    assert 'Validation Batch: tiny' in out
    assert 'Theorem: disk_complement' in out
    assert 'Passed: 3/3' in out
    assert 'All batches passed' in out


def test_validate_seed_override(tmp_path):
    path = _config(tmp_path, _validate())
    assert _run('validate', '--config', path, '--out', tmp_path, '--seed', '99') == 0
    scenario = json.loads((tmp_path / 'tiny' / 'scenarios' / 'disk_complement-0001.json').read_text())
    assert scenario['seed'] == 100


def test_validate_negative_control_exit_1(tmp_path):
    config = _validate(shrink=1.25, resolvent_points=0,
                       matrix={'n': [4, 16], 'scenarios': 4, 'seed': 11, 'contraction': 'aligned'})
    path = _config(tmp_path, config)
    assert _run('validate', '--config', path, '--out', tmp_path) == 1
    summary = json.loads((tmp_path / 'tiny' / 'batch_summary.json').read_text())
    assert summary['pass'] is False
    assert summary['theorem'] == 'disk_complement_shrunk'


def test_validate_batches(tmp_path):
    config = _validate(batches=[
        {'name': 'disk'},
        {'name': 'strip_gap', 'hypothesis': {'type': 'strip_gap', 'g1': -1.0, 'g2': 1.0,
                                             'alphaT': -2.0, 'betaT': 6.0}},
    ])
    path = _config(tmp_path, config)
    assert _run('validate', '--config', path, '--out', tmp_path) == 0
    assert (tmp_path / 'disk' / 'batch_summary.json').exists()
    assert (tmp_path / 'strip_gap' / 'report.json').exists()


# =============================================================================
# compare-bounds, stargraph, oracle
# =============================================================================

def _compare(tmp_path, vertex):
    tmp_path.mkdir(parents=True, exist_ok=True)
    config = {'schema': 1, 'kind': 'compare-bounds',
              'perturbation': {'type': 'relbound', 'a': 0.3, 'b': 0.2},
              'sector': {'vertex': vertex, 'theta': 0.3},
              'window': [vertex - 6, vertex + 6, -6, 6], 'grid': 6}
    path = _config(tmp_path, config)
    assert _run('compare-bounds', '--config', path, '--out', tmp_path) == 0
    summary = json.loads((tmp_path / 'sector_compare.json').read_text())
    with open(tmp_path / 'sector_compare.csv', newline='') as f:
        rows = list(csv.DictReader(f))
    return summary, rows


@pytest.mark.parametrize("vertex", [2.0, 0.0, -2.0])
def test_compare_bounds_sign_rule(tmp_path, vertex):
    summary, rows = _compare(tmp_path, vertex)
    assert summary['sign_rule_mismatches'] == 0
    assert summary['rows'] == len(rows) > 0
    header = (tmp_path / 'sector_compare.csv').read_text().splitlines()[0]
    assert header == "re,im,branch,primary,alt,difference,predicted,observed"
    predicted = [int(r['predicted']) for r in rows]
    observed = [int(r['observed']) for r in rows]
    if vertex == 0:
        # both estimates coincide at the origin
        assert set(predicted) == {0}
        assert set(observed) == {0}
    else:
        assert observed == predicted
        assert set(observed) == {-1, 1}


def test_compare_bounds_sign_pattern_flips_with_vertex(tmp_path):
    _, right = _compare(tmp_path / 'right', 2.0)
    _, left = _compare(tmp_path / 'left', -2.0)
    assert [r['branch'] for r in right] == [r['branch'] for r in left]
    assert [-int(r['observed']) for r in right] == [int(r['observed']) for r in left]


def test_stargraph_real(tmp_path):
    config = {'schema': 1, 'kind': 'stargraph',
              'graph': {'lengths': [1.0], 'c': 'inf', 'count': 3, 'N': 16,
                        'subordinate': {'c': 0.02, 'p': 0.5}}}
    path = _config(tmp_path, config)
    assert _run('stargraph', '--config', path, '--out', tmp_path) == 0
    spectrum = json.loads((tmp_path / 'spectrum.json').read_text())
    assert spectrum['complete'] is True
    assert len(spectrum['eigenvalues']) == 3
    assert json.loads((tmp_path / 'discretized.json').read_text())['size'] == 16
    assert (tmp_path / 'gaps.json').exists()
    assert not (tmp_path / 'weyl.json').exists()
    assert not (tmp_path / 'imag_tail.json').exists()


def test_stargraph_complex_writes_tail(tmp_path):
    config = {'schema': 1, 'kind': 'stargraph',
              'graph': {'lengths': [1.0, 1.3], 'c': [1.0, 1.0], 'count': 4, 'tail_R': 10.0}}
    path = _config(tmp_path, config)
    assert _run('stargraph', '--config', path, '--out', tmp_path) == 0
    tail = json.loads((tmp_path / 'imag_tail.json').read_text())
    assert tail['bound'] == pytest.approx(2 * 2 * 0.5 / 2.3)


def test_stargraph_too_fine(tmp_path):
    config = {'schema': 1, 'kind': 'stargraph',
              'graph': {'lengths': [1.0, 1.0, 1.0, 1.0, 1.0], 'count': 2, 'N': 100}}
    path = _config(tmp_path, config)
    assert _run('stargraph', '--config', path, '--out', tmp_path) == 2


def test_oracle(tmp_path):
    config = {'schema': 1, 'kind': 'oracle', 'matrix': {'seed': 1, 'count': 2, 'n': 6}}
    path = _config(tmp_path, config)
    assert _run('oracle', '--config', path, '--out', tmp_path) == 0
    report = json.loads((tmp_path / 'oracle.json').read_text())
    assert report['failed'] == 0
    assert [r['seed'] for r in report['rows']] == [1, 2]
