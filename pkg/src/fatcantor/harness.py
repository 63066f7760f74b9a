"""Experiment runner: reproduces the coefficient plots, the alpha grid and the diagnostics.

Every artifact is written atomically and carries ``#`` provenance lines. The
only line that differs between two runs of the same spec is ``# generated:``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .cache import TableCache
from .cantor_set import CantorParams, as_fraction, fraction_str
from .diagnostics import (
    density_vs_measure,
    sigma_ratio_check,
    sobolev_partial_sums,
    translation_inequality_check,
)
from .riesz_coeffs import DEFAULT_EPS, FourierTable, table
from .spectral_gap import alpha, alpha_sequence, default_schedule
from .symbolic_sequences import (
    density_schedule,
    is_cover,
    parse_index_set,
    truncate,
)

EXPERIMENTS = ("fig1", "fig2", "fig34", "alpha", "coeffs", "density", "sobolev", "cover", "check-theorem31")

DEFAULT_GRID = tuple(Fraction(2 * i + 1, 20) for i in range(10))
CHECK_GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


class SpecError(ValueError):
    """Invalid experiment parameters."""


@dataclass
class ExperimentSpec:
    experiment: str
    gamma: Fraction | None = None
    gamma_grid: list[Fraction] | None = None
    K: int | None = None
    eps: float = DEFAULT_EPS
    schedule: list[int] | None = None
    n: int = 4095
    F: str = "thue-morse"
    out: Path = Path("out")
    cache: Path | None = None
    eigvec: bool = False
    s: list[float] = field(default_factory=lambda: [0.0, 0.15, 0.3, 0.5])
    j_max: int = 10
    J: int = 12
    window: int = 4096
    search: int = 2**20
    shifts: int = 3
    cover_radius: int = 10**6
    jobs: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise SpecError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        try:
            if self.gamma is not None:
                self.gamma = as_fraction(self.gamma)
                CantorParams(self.gamma)
            if self.gamma_grid is not None:
                self.gamma_grid = [as_fraction(g) for g in self.gamma_grid]
                for g in self.gamma_grid:
                    CantorParams(g)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise SpecError(str(exc)) from exc
        if not self.eps > 0:
            raise SpecError("eps must be positive")
        if self.K is not None and self.K < 0:
            raise SpecError("K must be nonnegative")
        if self.schedule is not None:
            if not self.schedule or any(n < 0 for n in self.schedule) or self.schedule != sorted(self.schedule):
                raise SpecError("schedule must be a nonempty ascending list of nonnegative integers")
        if self.n < 0:
            raise SpecError("n must be nonnegative")
        self.out = Path(self.out)
        if self.cache is not None:
            self.cache = Path(self.cache)

    def grid(self, default) -> list[Fraction]:
        if self.gamma_grid is not None:
            return list(self.gamma_grid)
        if self.gamma is not None:
            return [self.gamma]
        return list(default)

    def single_gamma(self) -> Fraction:
        if self.gamma is None:
            raise SpecError(f"{self.experiment} needs --gamma")
        return self.gamma

    def provenance(self) -> dict:
        return {
            "experiment": self.experiment,
            "gamma": fraction_str(self.gamma) if self.gamma is not None else None,
            "gamma_grid": [fraction_str(g) for g in self.gamma_grid] if self.gamma_grid else None,
            "K": self.K,
            "eps": repr(self.eps),
            "schedule": self.schedule,
            "n": self.n,
            "F": self.F,
        }


@dataclass
class RunResult:
    experiment: str
    outputs: list[Path]
    headline: dict
    wall_time: float = 0.0
    cache_hits: int = 0
    cache_misses: int = 0

    def summary(self) -> dict:
        return {
            "experiment": self.experiment,
            "wall_time_s": round(self.wall_time, 3),
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
            "headline": self.headline,
            "outputs": [str(p) for p in self.outputs],
        }


def write_atomic(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def _comment_block(meta: dict) -> str:
    lines = [f"# fatcantor {__version__}"]
    lines += [f"# {k}: {json.dumps(v)}" for k, v in meta.items()]
    lines.append(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    return "\n".join(lines) + "\n"


def _csv(meta: dict, header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(_comment_block(meta))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(meta: dict, body: dict) -> str:
    return json.dumps({"provenance": meta, **body}, indent=2, default=str) + "\n"


def _fmt(x: float) -> str:
    return repr(float(x))


class Runner:
    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.cache = TableCache(spec.cache) if spec.cache is not None else None

    def table(self, gamma: Fraction, K: int) -> FourierTable:
        params = CantorParams(gamma)
        if self.cache is not None:
            return self.cache.get(params, K, self.spec.eps)
        return table(params, K, self.spec.eps)

    def meta(self, **extra) -> dict:
        return self.spec.provenance() | extra

    def run(self) -> RunResult:
        start = time.perf_counter()
        handler = getattr(self, "_run_" + self.spec.experiment.replace("-", "_"))
        result = handler()
        result.wall_time = time.perf_counter() - start
        if self.cache is not None:
            result.cache_hits, result.cache_misses = self.cache.hits, self.cache.misses
        return result

    def _coeff_file(self, gamma: Fraction, K: int, first: int, name: str) -> RunResult:
        t = self.table(gamma, K)
        meta = self.meta(gamma=fraction_str(gamma), K=K, J=t.J, err_bound=t.err_bound)
        rows = ((k, _fmt(v)) for k, v in zip(range(first, K + 1), t.nonnegative[first:]))
        path = write_atomic(self.spec.out / name, _csv(meta, ["k", "coeff"], rows))
        return RunResult(self.spec.experiment, [path], {"gamma": fraction_str(gamma), "K": K, "J": t.J})

    def _run_coeffs(self):
        gamma = self.spec.single_gamma()
        K = self.spec.K if self.spec.K is not None else 4095
        tag = f"{gamma.numerator}_{gamma.denominator}"
        return self._coeff_file(gamma, K, 0, f"coeffs_gamma{tag}_K{K}.csv")

    def _run_fig1(self):
        return self._coeff_file(Fraction(1, 4), self.spec.K or 4095, 1, "coeffs_gamma025.csv")

    def _run_fig2(self):
        return self._coeff_file(Fraction(3, 4), self.spec.K or 4095, 1, "coeffs_gamma075.csv")

    def _run_fig34(self):
        spec = self.spec
        grid = spec.grid(DEFAULT_GRID)
        schedule = spec.schedule or default_schedule()
        F = parse_index_set(spec.F)
        K = max(schedule)

        def row(g):
            t = self.table(g, K)
            return g, t.J, alpha_sequence(CantorParams(g), F, schedule, t=t)

        if spec.jobs > 1:
            with ThreadPoolExecutor(spec.jobs) as pool:
                results = list(pool.map(row, grid))
        else:
            results = [row(g) for g in grid]

        rows, headline, convexity = [], {}, {}
        for g, J, points in results:
            for p in points:
                rows.append([_fmt(g), p.n, _fmt(p.L), _fmt(p.alpha), _fmt(p.log10_alpha)])
            headline[f"alpha(gamma={float(g):g}, n={points[-1].n})"] = points[-1].alpha
            convexity[f"{float(g):g}"] = log_alpha_convexity(points)
        meta = self.meta(K=K, J=[J for _, J, _ in results], schedule=schedule,
                         gamma_grid=[fraction_str(g) for g in grid])
        path = write_atomic(spec.out / "alpha_grid.csv",
                            _csv(meta, ["gamma", "n", "L", "alpha", "log10_alpha"], rows))
        conv_path = write_atomic(spec.out / "alpha_grid_convexity.json",
                                 _json(meta, {"log_alpha_second_differences": convexity}))
        return RunResult(spec.experiment, [path, conv_path], headline)

    def _run_alpha(self):
        spec = self.spec
        gamma = spec.single_gamma()
        F = parse_index_set(spec.F)
        schedule = spec.schedule or [spec.n]
        t = self.table(gamma, max(schedule))
        points = alpha_sequence(CantorParams(gamma), F, schedule, t=t)
        tag = f"{gamma.numerator}_{gamma.denominator}"
        meta = self.meta(K=t.K, J=t.J, schedule=schedule)
        rows = [[p.n, _fmt(p.L), _fmt(p.alpha), _fmt(p.log10_alpha)] for p in points]
        outputs = [write_atomic(spec.out / f"alpha_gamma{tag}.csv",
                                _csv(meta, ["n", "L", "alpha", "log10_alpha"], rows))]
        if spec.eigvec:
            G = truncate(F, schedule[-1]).members
            pair = alpha(t, G)
            vrows = [[k, _fmt(c)] for k, c in zip(G, pair.eigenvector)]
            outputs.append(write_atomic(
                spec.out / f"eigvec_gamma{tag}_n{schedule[-1]}.csv",
                _csv(meta | {"alpha": pair.eigenvalue, "residual": pair.residual}, ["k", "coeff"], vrows),
            ))
        headline = {f"alpha(gamma={float(gamma):g}, n={points[-1].n})": points[-1].alpha}
        return RunResult(spec.experiment, outputs, headline)

    def _run_density(self):
        spec = self.spec
        F = parse_index_set(spec.F)
        a, b = -spec.search, spec.search
        exps = [m for m in range(1, 31) if 2**m <= min(spec.window, b - a)]
        table_rows = [{"k": k, "estimate": fraction_str(e), "float": float(e)}
                      for k, e in density_schedule(F, a, b, exps)]
        verdicts = [density_vs_measure(F, CantorParams(g), spec.window, a, b).to_json()
                    for g in spec.grid(CHECK_GRID)]
        body = {"search": [a, b], "schedule": table_rows, "verdicts": verdicts}
        path = write_atomic(spec.out / "density.json", _json(self.meta(window=spec.window), body))
        return RunResult(spec.experiment, [path], {"estimate": table_rows[-1]["float"] if table_rows else None})

    def _run_sobolev(self):
        spec = self.spec
        K = spec.K if spec.K is not None else 65536
        probes = []
        for g in spec.grid([Fraction(3, 4)]):
            t = self.table(g, K)
            for s in spec.s:
                probes.append(sobolev_partial_sums(t, s).to_json())
        body = {"probes": probes,
                "sigma_ratio": {fraction_str(g): sigma_ratio_check(CantorParams(g))
                                for g in spec.grid([Fraction(3, 4)])}}
        path = write_atomic(spec.out / "sobolev.json", _json(self.meta(K=K), body))
        headline = {f"gamma={p['gamma']}, s={p['s']}": p["signature"] for p in probes}
        return RunResult(spec.experiment, [path], headline)

    def _run_cover(self):
        spec = self.spec
        F = parse_index_set(spec.F)
        a, b = -spec.cover_radius, spec.cover_radius
        results = {}
        for m in range(1, spec.shifts + 1):
            res = is_cover([F.shift(i) for i in range(m)], a, b)
            results[f"shifts_0..{m - 1}"] = {"covered": res.covered, "first_uncovered": res.first_uncovered}
        path = write_atomic(spec.out / "cover.json",
                            _json(self.meta(window=[a, b], shifts=spec.shifts), {"results": results}))
        return RunResult(spec.experiment, [path], {k: v["covered"] for k, v in results.items()})

    def _run_check_theorem31(self):
        spec = self.spec
        reports = []
        for g in spec.grid(CHECK_GRID):
            params = CantorParams(g)
            for j in range(1, spec.j_max + 1):
                reports.append(translation_inequality_check(params, j, max(spec.J, j)).to_json())
        passed = all(r["passed"] for r in reports)
        path = write_atomic(spec.out / "translation_inequality.json",
                            _json(self.meta(J=spec.J, j_max=spec.j_max), {"passed": passed, "reports": reports}))
        return RunResult(spec.experiment, [path], {"all_passed": passed, "checks": len(reports)})


def log_alpha_convexity(points) -> dict:
    """Second differences of ``ln alpha`` against ``L``; reported, never asserted."""
    usable = [p for p in points if p.alpha > 0]
    if len(usable) < 3:
        return {"second_differences": [], "convex": None}
    L = np.array([p.L for p in usable])
    y = np.log(np.array([p.alpha for p in usable]))
    slopes = np.diff(y) / np.diff(L)
    second = np.diff(slopes).tolist()
    return {"second_differences": second, "convex": bool(all(d >= 0 for d in second))}


def run(spec: ExperimentSpec) -> RunResult:
    return Runner(spec).run()
