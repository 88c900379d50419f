"""
Canonical report emission for spectral inclusion runs.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

Writes JSON with sorted keys and shortest round-trip floats, so identical
inputs give identical bytes, and CSV polylines for plotting region
boundaries. Non-finite floats are written as the strings "inf", "-inf"
and "nan"; complex numbers as [re, im] pairs.
"""

import csv
import json
import logging
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import regions as rg

logger = logging.getLogger(__name__)

__all__ = ['ReportWriter', 'canonical', 'dumps', 'polyline_rows']


def canonical(obj: Any) -> Any:
    """Convert obj into plain JSON types with the non-finite and complex conventions."""
    if hasattr(obj, 'to_dict'):
        return canonical(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return canonical(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [canonical(float(obj.real)), canonical(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return 'nan'
        if math.isinf(x):
            return 'inf' if x > 0 else '-inf'
        return x
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def polyline_rows(polylines: Sequence[rg.BoundaryPolyline], include_masked: bool = False) -> List[List[Tuple]]:
    """Split boundary polylines into CSV blocks, dropping masked runs unless asked."""
    blocks = []
    for line in polylines:
        keep = np.ones(line.points.size, dtype=bool) if include_masked or line.masked.size == 0 else ~line.masked
        current: List[Tuple] = []
        for p, flag in zip(line.points, keep):
            if flag:
                current.append((repr(float(p.real)), repr(float(p.imag)), line.source))
            elif current:
                blocks.append(current)
                current = []
        if current:
            blocks.append(current)
    return blocks


class ReportWriter:
    """
    Writes JSON reports and CSV files under one output directory.

    Writes are whole-file and go through a single instance per output path.
    """

    def __init__(self, output_dir: Path):
        """
        Initialize report writer.

        Args:
            output_dir: Directory for report files (created if missing)
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def _path(self, name: str) -> Path:
        path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        return path

    def write_json(self, name: str, obj: Any) -> Path:
        path = self._path(name)
        path.write_text(dumps(obj), encoding="utf-8")
        logger.debug("wrote %s", path)
        return path

    def write_polylines(self, name: str, polylines: Sequence[rg.BoundaryPolyline],
                        include_masked: bool = False) -> Path:
        """CSV with header re,im,source and a blank line between polylines."""
        path = self._path(name)
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["re", "im", "source"])
            for i, block in enumerate(polyline_rows(polylines, include_masked)):
                if i:
                    w.writerow([])
                w.writerows(block)
        return path

    def write_region(self, name: str, region: rg.RegionExpr, window: rg.Window,
                     max_step: Optional[float] = None) -> Path:
        """Boundary polylines of a region inside the window."""
        return self.write_regions(name, [("", region)], window, max_step)

    def write_regions(self, name: str, regions: Sequence[Tuple[str, rg.RegionExpr]],
                      window: rg.Window, max_step: Optional[float] = None) -> Path:
        """Boundary polylines of several regions in one file; sources carry each prefix."""
        step = max_step or window.radius / 200.0
        polylines = []
        for prefix, region in regions:
            polylines.extend(rg.boundary_samples(region, window, step, prefix))
        return self.write_polylines(name, polylines)

    def write_table(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Plain CSV table; floats in shortest round-trip form."""
        path = self._path(name)
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(list(header))
            for row in rows:
                w.writerow([_cell(v) for v in row])
        return path


def _cell(v: Any) -> Any:
    c = canonical(v)
    if isinstance(c, float):
        return repr(c)
    return c
