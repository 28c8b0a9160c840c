"""
Plain-text state records.

A record looks like::

    wpduality-state v1
    dims 2x2
    labels A,B
    0 0 0.5 0
    0 3 0.5 0
    ...

Each entry line is `row col re im` with 17 significant digits, which
round-trips IEEE doubles exactly. Zero entries are omitted.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import Union

import numpy as np

from .exceptions import DualityError, SerializationError
from .profile import DimensionProfile
from .states import DensityMatrix

__all__ = ["to_record", "from_record", "fingerprint", "read_state_file", "write_state_file"]

logger = logging.getLogger(__name__)

HEADER = "wpduality-state v1"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_record(rho: DensityMatrix) -> str:
    """Serialize a density matrix to its text record."""
    lines = [HEADER, f"dims {rho.profile.spec}", f"labels {','.join(rho.profile.labels)}"]
    m = rho.matrix
    rows, cols = np.nonzero(m)
    for r, c in zip(rows.tolist(), cols.tolist()):
        z = m[r, c]
        lines.append(f"{r} {c} {_fmt(z.real)} {_fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def from_record(text: str) -> DensityMatrix:
    """Parse a text record back into a validated density matrix."""
    lines = [line.strip() for line in text.strip().splitlines() if line.strip() and not line.startswith("#")]
    if len(lines) < 3 or lines[0] != HEADER:
        raise SerializationError(f"Not a state record: expected header '{HEADER}'")
    try:
        key, dims_spec = lines[1].split(None, 1)
        if key != "dims":
            raise SerializationError(f"Expected 'dims' line, got '{lines[1]}'")
        key, labels_spec = lines[2].split(None, 1)
        if key != "labels":
            raise SerializationError(f"Expected 'labels' line, got '{lines[2]}'")
        profile = DimensionProfile.parse(dims_spec, labels_spec.split(","))
        n = profile.total_dim
        matrix = np.zeros((n, n), dtype=np.complex128)
        for line in lines[3:]:
            parts = line.split()
            if len(parts) != 4:
                raise SerializationError(f"Malformed entry line '{line}'")
            r, c = int(parts[0]), int(parts[1])
            if not (0 <= r < n and 0 <= c < n):
                raise SerializationError(f"Entry ({r}, {c}) out of range for dim {n}")
            matrix[r, c] = complex(float(parts[2]), float(parts[3]))
        return DensityMatrix.from_array(matrix, profile)
    except SerializationError:
        raise
    except (ValueError, DualityError) as e:
        raise SerializationError(f"Invalid state record: {e}") from e


def fingerprint(rho: DensityMatrix) -> str:
    """Short stable hash of a state's record."""
    return hashlib.sha256(to_record(rho).encode("utf-8")).hexdigest()[:16]


def read_state_file(path: Union[str, Path]) -> DensityMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Could not read state file {path}: {e}")
        raise SerializationError(f"Could not read state file {path}: {e}") from e
    return from_record(text)


def write_state_file(rho: DensityMatrix, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(to_record(rho), encoding="utf-8")
    return path
