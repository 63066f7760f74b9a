"""On-disk cache of Fourier tables keyed by ``(gamma, K, eps)``.

Each entry is an ``.npz`` file holding a JSON header and the raw float64
coefficients, so a re-read is bit-identical. Writers hold a per-key file lock
and publish by atomic rename; a corrupt or mismatched file counts as a miss.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
from fractions import Fraction
from pathlib import Path

import numpy as np
from filelock import FileLock

from .cantor_set import CantorParams, fraction_str
from .riesz_coeffs import FourierTable, table

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _key(gamma: Fraction, K: int, eps: float) -> str:
    return f"gamma{gamma.numerator}_{gamma.denominator}_K{K}_eps{eps!r}"


def _header(gamma: Fraction, K: int, eps: float) -> dict:
    return {"format": FORMAT_VERSION, "gamma": fraction_str(gamma), "K": K, "eps": repr(float(eps))}


class TableCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self._counter_lock = threading.Lock()

    def path(self, gamma: Fraction, K: int, eps: float) -> Path:
        return self.directory / (_key(gamma, K, eps) + ".npz")

    def lookup(self, params: CantorParams, K: int, eps: float) -> FourierTable | None:
        """The cached table, or ``None`` on a miss (including unreadable files)."""
        path = self.path(params.gamma, K, eps)
        if not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as data:
                header = json.loads(str(data["header"]))
                values = np.array(data["values"], dtype=np.float64)
            expected = _header(params.gamma, K, eps)
            if any(header.get(k) != v for k, v in expected.items()):
                raise ValueError(f"header mismatch: {header}")
            if values.shape != (2 * K + 1,):
                raise ValueError(f"bad array shape {values.shape}")
            return FourierTable(
                params.gamma, K, int(header["J"]), float(eps), values, float(header["err_bound"])
            )
        except Exception as exc:
            log.warning("ignoring corrupt cache entry %s: %s", path, exc)
            return None

    def store(self, t: FourierTable) -> Path:
        path = self.path(t.gamma, t.K, t.eps)
        header = _header(t.gamma, t.K, t.eps) | {"J": t.J, "err_bound": t.err_bound}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                np.savez(fh, header=np.array(json.dumps(header)), values=t.values)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path

    def get(self, params: CantorParams, K: int, eps: float) -> FourierTable:
        """Look up, computing and storing on a miss; one computation per key across racers."""
        t = self.lookup(params, K, eps)
        if t is None:
            lock = FileLock(str(self.path(params.gamma, K, eps)) + ".lock")
            with lock:
                t = self.lookup(params, K, eps)
                if t is None:
                    t = table(params, K, eps)
                    self.store(t)
                    with self._counter_lock:
                        self.misses += 1
                    return t
        with self._counter_lock:
            self.hits += 1
        return t


def cache_lookup(cache_dir, gamma, K: int, eps: float) -> FourierTable | None:
    return TableCache(cache_dir).lookup(CantorParams(gamma), K, eps)
