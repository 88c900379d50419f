"""
Spectral Inclusions - resolvent regions for perturbed normal operators

Guaranteed subsets of the resolvent set of T + A for normal T and
relatively bounded or p-subordinate A, with resolvent estimates and a
numerical lab that checks them against computed spectra.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A
"""

__version__ = "0.1.0"

# Geometry and estimates
from .regions import (
    Window,
    RegionExpr,
    TransformedRegion,
    leaf,
    union_all,
    intersection_all,
    contains,
    boundary_samples,
    BoundaryPolyline,
    EMPTY,
    FULL,
)
from .bounds import (
    RelBound,
    Subordinate,
    SupBound,
    perturbation_from_dict,
    resolvent_bound,
    compare_sector_estimates,
    young_linear_constant,
    subordination_to_relbound,
)
from .hypotheses import SpectrumHypothesis, hypothesis_from_dict

# Inclusion theorems
from .enclosures import (
    EnclosureReport,
    RectContour,
    THEOREMS,
    enclose,
    default_theorem,
    selfadjoint_reference,
    route_comparison,
)

# Numerical lab
from .linalg import ConvergenceError, qr_eigvals, jacobi_eigvalsh
from .oplab import (
    NormalModel,
    Verdict,
    build_normal,
    build_relbounded,
    build_subordinate,
    eig,
    smin,
    verify_enclosure,
    verify_resolvent_bound,
    homotopy_multiplicity,
    sample_spectrum,
    shrink_report,
)
from .stargraph import (
    StarGraph,
    GraphSpectrum,
    DiscretizationError,
    secular,
    find_eigs,
    discretize,
    weyl_gap_report,
    graph_gap_persistence,
)

# Batches and output
from .report_writer import ReportWriter
from .experiment import ValidationRunner, BatchResult, ScenarioResult

__all__ = [
    # Version
    "__version__",
    # Regions
    "Window",
    "RegionExpr",
    "TransformedRegion",
    "leaf",
    "union_all",
    "intersection_all",
    "contains",
    "boundary_samples",
    "BoundaryPolyline",
    "EMPTY",
    "FULL",
    # Bounds
    "RelBound",
    "Subordinate",
    "SupBound",
    "perturbation_from_dict",
    "resolvent_bound",
    "compare_sector_estimates",
    "young_linear_constant",
    "subordination_to_relbound",
    # Hypotheses
    "SpectrumHypothesis",
    "hypothesis_from_dict",
    # Enclosures
    "EnclosureReport",
    "RectContour",
    "THEOREMS",
    "enclose",
    "default_theorem",
    "selfadjoint_reference",
    "route_comparison",
    # Linear algebra
    "ConvergenceError",
    "qr_eigvals",
    "jacobi_eigvalsh",
    # Lab
    "NormalModel",
    "Verdict",
    "build_normal",
    "build_relbounded",
    "build_subordinate",
    "eig",
    "smin",
    "verify_enclosure",
    "verify_resolvent_bound",
    "homotopy_multiplicity",
    "sample_spectrum",
    "shrink_report",
    # Star graph
    "StarGraph",
    "GraphSpectrum",
    "DiscretizationError",
    "secular",
    "find_eigs",
    "discretize",
    "weyl_gap_report",
    "graph_gap_persistence",
    # Batches
    "ReportWriter",
    "ValidationRunner",
    "BatchResult",
    "ScenarioResult",
]
