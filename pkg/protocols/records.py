"""On-disk formats for raw shot data."""

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, List

import numpy as np

from protocols.bell import BellRecord
from protocols.matching import LayerShotMatrix
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)


def write_bell_records(record: BellRecord, path: Path) -> Path:
    """
    Write one JSON object per shot (seed, shot, u, v, lambda, swap).

    Args:
        record: Bell shots
        path: Output file

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for row in record.to_records():
            f.write(json.dumps(row, sort_keys=True) + "\n")
    logger.info(f"Wrote {len(record)} Bell shots to {path}")
    return path


def read_bell_records(path: Path, n_qubits: int) -> BellRecord:
    """Load a record written by ``write_bell_records``."""
    us: List[int] = []
    vs: List[int] = []
    seed = None
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                us.append(int(row["u"], 16))
                vs.append(int(row["v"], 16))
            except (json.JSONDecodeError, KeyError, ValueError) as e:
                raise ContractViolationError(f"{path}:{line_number}: malformed Bell record ({e})")
            seed = row.get("seed", seed)
    return BellRecord(n_qubits, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), seed)


def layer_rows(shots: Iterable[LayerShotMatrix]) -> List[List[int]]:
    """Rows ``layer, shot, x_1..x_n`` for every shot matrix."""
    rows = []
    for matrix in shots:
        for shot, outcome in enumerate(matrix.outcomes):
            rows.append([matrix.layer, shot] + [int(x) for x in outcome])
    return rows


def write_layer_csv(shots: List[LayerShotMatrix], path: Path) -> Path:
    """Write layer outcomes as CSV with header ``layer, shot, x_1..x_n``."""
    if not shots:
        raise ContractViolationError("No layer shots to write")
    n = shots[0].outcomes.shape[1]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["layer", "shot"] + [f"x_{e}" for e in range(1, n + 1)])
        writer.writerows(layer_rows(shots))
    return path
