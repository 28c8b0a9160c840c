"""
Report emission: JSON documents and plot-ready CSV tables.
"""

from __future__ import annotations

import json
import logging
import platform
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
import scipy

from . import __version__
from .ensemble import EnsembleReport
from .exceptions import ConfigError

__all__ = ["CSV_COLUMNS", "environment", "build_document", "to_json", "reports_frame", "to_csv", "write_text"]

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "relation_id",
    "dims",
    "samples",
    "violations",
    "min_margin",
    "mean_margin",
    "max_margin",
    "saturation_count",
    "seed",
    "status",
]


def environment() -> Dict[str, str]:
    """Floating-point environment the numbers were produced in."""
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "machine": platform.machine(),
        "system": platform.system(),
    }


def _report_entry(report: EnsembleReport) -> Dict[str, Any]:
    return report.model_dump(mode="json", exclude={"run_config"})


def build_document(
    config: Dict[str, Any],
    reports: Sequence[EnsembleReport],
    runtime_seconds: Optional[float] = None,
) -> Dict[str, Any]:
    """Top-level report: tool_version, config, reports, runtime_seconds, environment."""
    return {
        "tool_version": __version__,
        "config": config,
        "reports": [_report_entry(r) for r in reports],
        "runtime_seconds": runtime_seconds,
        "environment": environment(),
    }


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def reports_frame(reports: Sequence[EnsembleReport]) -> pd.DataFrame:
    """One row per (relation, profile) in the fixed CSV column order."""
    rows = [
        {
            "relation_id": r.relation_id,
            "dims": r.dims,
            "samples": r.samples,
            "violations": r.violations,
            "min_margin": r.min_margin,
            "mean_margin": r.mean_margin,
            "max_margin": r.max_margin,
            "saturation_count": r.saturation_count,
            "seed": r.run_config.get("seed"),
            "status": r.status,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def to_csv(reports: Sequence[EnsembleReport]) -> str:
    return reports_frame(reports).to_csv(index=False, float_format="%.17g")


def write_text(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        logger.error(f"Could not write report to {path}: {e}")
        raise ConfigError(f"Could not write report to {path}: {e}") from e
    logger.info(f"Report written to {path}")
    return path
