#!/usr/bin/env python3
"""
Spectral inclusion command-line entry point.

Usage:
    python scripts/spectral_inclusions.py enclose --config experiments/config/strip_gap.yaml --out out/
    python scripts/spectral_inclusions.py validate --config experiments/config/validate_default.yaml --jobs 4
    python scripts/spectral_inclusions.py compare-bounds --config experiments/config/compare_sector.yaml
    python scripts/spectral_inclusions.py stargraph --config experiments/config/stargraph_real.yaml
    python scripts/spectral_inclusions.py oracle --config experiments/config/oracle.yaml
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
