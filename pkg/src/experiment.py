"""
Seeded scenario batches for enclosure soundness.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Each scenario draws a spectrum satisfying the hypothesis, builds a normal
matrix T and an admissible perturbation A, and checks that no eigenvalue
of T + A lies in the guaranteed region and that the resolvent bound holds
at sampled points of the region. Scenario i uses seed base_seed + i, so a
batch is reproducible scenario by scenario and independent of --jobs.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import enclosures as enc
from . import oplab
from .bounds import RelBound, Subordinate, perturbation_from_dict
from .hypotheses import hypothesis_from_dict
from .regions import Window
from .report_writer import ReportWriter

logger = logging.getLogger(__name__)

__all__ = ['ScenarioResult', 'BatchResult', 'ValidationRunner', 'run_validation']

DEFAULT_N_RANGE = (4, 64)
DEFAULT_WINDOW = Window(-20.0, 20.0, -20.0, 20.0)


@dataclass
class ScenarioResult:
    """Outcome of one seeded scenario."""
    scenario_id: str
    index: int
    seed: int
    n: int
    theorem: str
    hypothesis: Dict[str, Any]
    model: Dict[str, Any]
    enclosure: oplab.Verdict
    resolvent: Optional[oplab.Verdict] = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.enclosure.passed and (self.resolvent is None or self.resolvent.passed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scenario_id': self.scenario_id,
            'seed': self.seed,
            'n': self.n,
            'theorem': self.theorem,
            'hypothesis': self.hypothesis,
            'model': self.model,
            'pass': self.passed,
            'offenders': self.enclosure.to_dict()['offenders'],
            'enclosure': self.enclosure.to_dict(),
            'resolvent': None if self.resolvent is None else self.resolvent.to_dict(),
            'timings': self.timings,
        }


@dataclass
class BatchResult:
    """Results from a full scenario batch."""
    batch_id: str
    theorem: str
    applicable: bool
    reason: Optional[str]
    scenarios: List[ScenarioResult]

    @property
    def n_scenarios(self) -> int:
        return len(self.scenarios)

    @property
    def failures(self) -> List[str]:
        return [s.scenario_id for s in self.scenarios if not s.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            'batch_id': self.batch_id,
            'theorem': self.theorem,
            'applicable': self.applicable,
            'reason': self.reason,
            'n_scenarios': self.n_scenarios,
            'n_failed': len(self.failures),
            'failures': self.failures,
            'pass': self.passed,
        }


def _n_range(matrix: Dict[str, Any]):
    n = matrix.get('n', list(DEFAULT_N_RANGE))
    if isinstance(n, int):
        return n, n
    lo, hi = int(n[0]), int(n[1])
    if not 1 <= lo <= hi:
        raise ValueError(f"matrix.n must satisfy 1 <= lo <= hi, got {n}")
    return lo, hi


class ValidationRunner:
    """
    Runs a seeded batch of soundness scenarios for one hypothesis and
    perturbation model.

    The enclosure is computed once per batch; scenarios differ only in the
    sampled spectrum, the unitary basis and the contraction.
    """

    def __init__(self, config: Dict[str, Any], output_dir: Path, jobs: int = 1):
        """
        Initialize validation runner.

        Args:
            config: Parsed scenario config (hypothesis, perturbation, matrix, ...)
            output_dir: Directory for per-scenario JSON and the batch summary
            jobs: Worker threads for the scenario loop
        """
        self.config = config
        self.output_dir = Path(output_dir)
        self.jobs = max(1, int(jobs))

        self.hypothesis = hypothesis_from_dict(config['hypothesis'])
        self.model = perturbation_from_dict(config['perturbation'])
        self.theorem = config.get('theorem')
        self.options = dict(config.get('options', {}))

        matrix = config.get('matrix', {})
        self.n_range = _n_range(matrix)
        self.scenarios = int(matrix.get('scenarios', 200))
        self.base_seed = int(matrix['seed'])
        self.conjugate = bool(matrix.get('conjugate', True))
        self.contraction = matrix.get('contraction', 'unitary')
        self.reach = float(matrix.get('reach', 10.0))

        oracle = config.get('oracle', {})
        self.eig_method = oracle.get('eig', 'lapack')
        self.smin_method = oracle.get('smin', 'svd')
        self.resolvent_points = int(config.get('resolvent_points', 50))
        self.window = Window(*config['window']) if config.get('window') else DEFAULT_WINDOW
        self.shrink = config.get('shrink')
        self.record_timings = bool(config.get('record_timings', False))

        self.report = self._build_report()

    def _build_report(self) -> enc.EnclosureReport:
        report = enc.enclose(self.hypothesis, self.model, self.theorem, **self.options)
        if self.shrink:
            report = oplab.shrink_report(report, float(self.shrink))
        if not report.applicable:
            logger.warning("%s inapplicable: %s", report.theorem, report.reason)
        return report

    def _perturbation(self, T: oplab.NormalModel, seed: int) -> np.ndarray:
        if isinstance(self.model, RelBound):
            return oplab.build_relbounded(T, self.model, seed, self.contraction)
        if isinstance(self.model, Subordinate):
            return oplab.build_subordinate(T, self.model, seed, self.contraction)
        raise ValueError(f"unsupported perturbation model: {self.model!r}")

    def run_scenario(self, index: int) -> ScenarioResult:
        """Run scenario `index` with seed base_seed + index."""
        seed = self.base_seed + index
        rng = np.random.default_rng(seed)
        n = int(rng.integers(self.n_range[0], self.n_range[1] + 1))
        spectrum = oplab.sample_spectrum(self.hypothesis, n, seed, reach=self.reach)
        T = oplab.build_normal(spectrum, self.conjugate, seed)
        A = self._perturbation(T, seed)

        verdict = oplab.verify_enclosure(T, A, self.report, self.eig_method,
                                         record_timings=self.record_timings)
        resolvent = None
        if self.report.applicable and self.report.bound_fn is not None and self.resolvent_points > 0:
            zs = oplab.sample_region_points(self.report, self.window, self.resolvent_points, seed)
            if zs.size:
                resolvent = oplab.verify_resolvent_bound(T, A, self.report, zs, self.smin_method)

        return ScenarioResult(
            scenario_id=f"{self.report.theorem}-{index:04d}",
            index=index,
            seed=seed,
            n=n,
            theorem=self.report.theorem,
            hypothesis=self.hypothesis.to_dict(),
            model=self.model.to_dict(),
            enclosure=verdict,
            resolvent=resolvent,
            timings=verdict.timings,
        )

    def run(self, batch_id: Optional[str] = None) -> BatchResult:
        """
        Run every scenario and write results.

        Returns:
            BatchResult with scenarios in index order
        """
        batch_id = batch_id or self.config.get('name') or self.report.theorem
        writer = ReportWriter(self.output_dir / batch_id)
        logger.info("batch %s: theorem=%s scenarios=%d seed=%d jobs=%d", batch_id,
                    self.report.theorem, self.scenarios, self.base_seed, self.jobs)

        if self.jobs == 1:
            scenarios = [self.run_scenario(i) for i in range(self.scenarios)]
        else:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                scenarios = list(pool.map(self.run_scenario, range(self.scenarios)))

        result = BatchResult(batch_id, self.report.theorem, self.report.applicable,
                             self.report.reason, scenarios)

        writer.write_json("report.json", self.report)
        for s in scenarios:
            writer.write_json(f"scenarios/{s.scenario_id}.json", s)
        writer.write_json("batch_summary.json", result)

        if not self.report.applicable:
            logger.warning("batch %s: hypothesis inapplicable (%s)", batch_id, self.report.reason)
        if result.failures:
            logger.warning("batch %s: %d scenario(s) violated: %s", batch_id,
                           len(result.failures), ", ".join(result.failures[:10]))
        else:
            logger.info("batch %s: all %d scenarios passed", batch_id, result.n_scenarios)
        return result


def run_validation(config: Dict[str, Any], output_dir: Optional[Path] = None, jobs: int = 1) -> BatchResult:
    """
    Convenience function to run one validation batch.

    Args:
        config: Parsed scenario config
        output_dir: Output directory (default: experiments/runs)
        jobs: Worker threads

    Returns:
        BatchResult
    """
    if output_dir is None:
        output_dir = Path("experiments/runs")
    return ValidationRunner(config, output_dir, jobs).run()
