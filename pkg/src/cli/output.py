"""Deterministic writers and threaded grid evaluation."""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from ..config import Config
from ..utils.logger import logger
from ..verify.reports import dumps

CSV_FORMAT = "%.17g"
MIN_CHUNK = 256


def evaluate_grid(fn: Callable[[np.ndarray], np.ndarray], points: np.ndarray, threads: int = Config.THREADS) -> np.ndarray:
    """fn over row chunks of `points`, merged back in row order."""
    points = np.asarray(points, dtype=float)
    workers = max(1, int(threads))
    chunks = max(1, min(workers, points.shape[0] // MIN_CHUNK))
    if chunks == 1:
        return np.asarray(fn(points), dtype=float)
    parts = np.array_split(points, chunks)
    logger.debug(f"Evaluating {points.shape[0]} grid points in {chunks} chunks on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(fn, parts))
    return np.concatenate([np.asarray(r, dtype=float) for r in results])


def _ensure_parent(path: str):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_csv(path: str, columns: Sequence[str], data: np.ndarray):
    _ensure_parent(path)
    data = np.asarray(data, dtype=float).reshape(-1, len(columns))
    np.savetxt(path, data, fmt=CSV_FORMAT, delimiter=",", header=",".join(columns), comments="")
    logger.info(f"Wrote {data.shape[0]} rows to {path}")


def write_json(path: str, document: dict):
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(document))
    logger.info(f"Wrote {path}")
