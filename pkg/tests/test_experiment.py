"""
Tests for seeded validation batches.
"""

import json
import logging

import pytest

from src.experiment import ValidationRunner, run_validation


def _config(**overrides):
    config = {
        'name': 'unit',
        'matrix': {'n': [4, 12], 'scenarios': 4, 'seed': 100},
        'hypothesis': {'type': 'strip_gap', 'g1': -1.0, 'g2': 1.0, 'alphaT': -2.0, 'betaT': 6.0},
        'perturbation': {'type': 'relbound', 'a': 0.3, 'b': 0.2},
        'resolvent_points': 4,
        'window': [-5, 9, -5, 5],
    }
    config.update(overrides)
    return config


def test_scenario_seed_is_base_plus_index(tmp_path):
    runner = ValidationRunner(_config(), tmp_path)
    result = runner.run_scenario(3)
    assert result.seed == 103
    assert result.scenario_id == 'strip_gap-0003'
    assert 4 <= result.n <= 12
    assert result.passed


def test_scenario_is_independent_of_order(tmp_path):
    runner = ValidationRunner(_config(), tmp_path)
    later = runner.run_scenario(2).to_dict()
    runner.run_scenario(0)
    assert runner.run_scenario(2).to_dict() == later


def test_jobs_do_not_change_results(tmp_path):
    one = ValidationRunner(_config(), tmp_path / 'one', jobs=1).run()
    two = ValidationRunner(_config(), tmp_path / 'two', jobs=2).run()
    assert [s.to_dict() for s in one.scenarios] == [s.to_dict() for s in two.scenarios]
    assert (tmp_path / 'one' / 'unit' / 'batch_summary.json').read_bytes() == \
        (tmp_path / 'two' / 'unit' / 'batch_summary.json').read_bytes()


def test_run_writes_files(tmp_path):
    result = run_validation(_config(), tmp_path)
    assert result.passed
    assert result.n_scenarios == 4
    root = tmp_path / 'unit'
    assert json.loads((root / 'report.json').read_text())['theorem'] == 'strip_gap'
    assert len(list((root / 'scenarios').glob('*.json'))) == 4
    summary = json.loads((root / 'batch_summary.json').read_text())
    assert summary == {'batch_id': 'unit', 'theorem': 'strip_gap', 'applicable': True, 'reason': None,
                       'n_scenarios': 4, 'n_failed': 0, 'failures': [], 'pass': True}


def test_timings_only_on_request(tmp_path):
    plain = ValidationRunner(_config(), tmp_path).run_scenario(0)
    assert plain.timings == {}
    timed = ValidationRunner(_config(record_timings=True), tmp_path).run_scenario(0)
    assert set(timed.timings) == {'eig_s', 'total_s'}


def test_subordinate_batch(tmp_path):
    config = _config(perturbation={'type': 'subordinate', 'c': 0.5, 'p': 0.5},
                     hypothesis={'type': 'strip_gap', 'g1': -1.0, 'g2': 1.0, 'alphaT': -2.0, 'betaT': 30.0},
                     window=[-5, 35, -5, 5])
    result = ValidationRunner(config, tmp_path).run()
    assert result.theorem == 'psub_strip'
    assert result.passed


def test_inapplicable_batch_passes_vacuously(tmp_path):
    config = _config(hypothesis={'type': 'disk_complement', 'R': 1.0},
                     perturbation={'type': 'relbound', 'a': 1.0, 'b': 0.5})
    result = ValidationRunner(config, tmp_path).run()
    assert not result.applicable
    assert result.reason == 'radius_nonpositive'
    assert result.passed
    assert all(s.resolvent is None for s in result.scenarios)


def test_fixed_matrix_size(tmp_path):
    runner = ValidationRunner(_config(matrix={'n': 6, 'scenarios': 2, 'seed': 1}), tmp_path)
    assert runner.n_range == (6, 6)
    assert runner.run_scenario(1).n == 6


@pytest.mark.parametrize("matrix", [{'n': [0, 4], 'seed': 1}, {'n': [8, 4], 'seed': 1}])
def test_rejects_bad_size_range(tmp_path, matrix):
    with pytest.raises(ValueError):
        ValidationRunner(_config(matrix=matrix), tmp_path)


def test_missing_seed(tmp_path):
    with pytest.raises(KeyError):
        ValidationRunner(_config(matrix={'n': 4}), tmp_path)


def test_run_logs_and_leaves_stdout_to_caller(tmp_path, capsys, caplog):
    caplog.set_level(logging.INFO, logger='src.experiment')
    ValidationRunner(_config(), tmp_path).run()
    assert capsys.readouterr().out == ''
    assert 'batch unit: all 4 scenarios passed' in caplog.text
