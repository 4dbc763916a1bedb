"""Seeded experiment runner: random term families, error sweeps over n,
convergence-order fits and report serialization."""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .bounds import BoundReport, suzuki_bound
from .formulas import FORMULAS, exact_exp_sum
from .jets import jet_identity_deviation
from .linalg import MAX_DIM, MatrixOverflowError, NormKind, TermSet, norm
from .rng import MASK64, RngStream

REPORT_VERSION = "1"
EXPM_TOL = 1e-12
NOISE_FLOOR = 1e2 * EXPM_TOL
FIT_MIN_N = 8
BOUND_SLACK = 1e-9
JET_RTOL = 1e-13
THREADS_ENV = "TROTTER_JORDAN_THREADS"

# formulas covered by the 1/(3n^2) bound
BOUNDED_FORMULAS = frozenset({"g", "h", "symmetrized"})


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class InsufficientPointsError(ValueError):
    """Too few usable points for a convergence-order fit."""


def random_terms(
    rng: RngStream,
    dim: int,
    m: int,
    norm_scale: float,
    hermitian: bool = False,
    commuting: bool = False,
    norm_kind: NormKind = NormKind.SPECTRAL,
) -> TermSet:
    """Draw ``m`` random ``dim x dim`` terms with ``sum ||A_j|| = norm_scale``.

    Entries are standard complex normal.  ``hermitian`` symmetrizes each draw
    as ``(X + Xᴴ)/2``; ``commuting`` draws diagonal matrices.  All terms share
    one rescaling factor, so their relative sizes stay random.
    """
    if not 2 <= dim <= MAX_DIM:
        raise ConfigError(f"dim must be in 2..{MAX_DIM}, got {dim}")
    if m < 1:
        raise ConfigError(f"need at least one term, got m={m}")
    if not norm_scale > 0:
        raise ConfigError(f"norm_scale must be positive, got {norm_scale}")
    raw = []
    for _ in range(m):
        if commuting:
            x = np.diag(rng.complex_normal((dim,)))
        else:
            x = rng.complex_normal((dim, dim))
        if hermitian:
            x = (x + x.conj().T) / 2
        raw.append(x)
    total = sum(norm(x, norm_kind) for x in raw)
    if total == 0.0:
        raise ConfigError("degenerate draw: all terms vanish")
    factor = norm_scale / total
    return TermSet(tuple(factor * x for x in raw), norm_kind)


def fit_order(points: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares slope of ``ln error`` against ``ln n`` and the RMS residual."""
    pts = [(float(n), float(e)) for n, e in points if e > 0 and n > 0]
    if len(pts) < 3:
        raise InsufficientPointsError(f"need at least 3 positive points, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    return float(slope), float(np.sqrt(np.mean(resid**2)))


def resolve_threads(requested: int | None = None) -> int:
    """Worker count: ``requested`` (default: CPU count), capped by the env var."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, n)


def map_ordered(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """``[fn(x) for x in items]`` on a thread pool; output keeps input order."""
    workers = resolve_threads(threads)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepConfig:
    dim: int
    m: int
    formula: str
    n_grid: tuple[int, ...]
    norm_kind: NormKind = NormKind.SPECTRAL
    trials: int = 1
    seed: int = 0
    norm_scale: float = 1.0
    hermitian: bool = False
    commuting: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        try:
            object.__setattr__(self, "norm_kind", NormKind(self.norm_kind))
        except ValueError:
            raise ConfigError(f"unknown norm kind {self.norm_kind!r}") from None
        if not 2 <= self.dim <= MAX_DIM:
            raise ConfigError(f"dim must be in 2..{MAX_DIM}, got {self.dim}")
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.formula not in FORMULAS:
            raise ConfigError(f"unknown formula {self.formula!r}; choose from {sorted(FORMULAS)}")
        if self.formula == "h" and self.m % 2 == 0:
            raise ConfigError(f"formula h needs an odd number of terms, got m={self.m}")
        if not self.n_grid:
            raise ConfigError("n_grid is empty")
        if any(n < 1 for n in self.n_grid):
            raise ConfigError("n_grid entries must be positive")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly ascending")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not 0 < self.norm_scale <= 10:
            raise ConfigError(f"norm_scale must lie in (0, 10], got {self.norm_scale}")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "m": self.m,
            "formula": self.formula,
            "norm_kind": self.norm_kind.value,
            "n_grid": list(self.n_grid),
            "trials": self.trials,
            "seed": self.seed,
            "norm_scale": self.norm_scale,
            "hermitian": self.hermitian,
            "commuting": self.commuting,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        return cls(
            dim=d["dim"],
            m=d["m"],
            formula=d["formula"],
            norm_kind=NormKind(d["norm_kind"]),
            n_grid=tuple(d["n_grid"]),
            trials=d["trials"],
            seed=d["seed"],
            norm_scale=d["norm_scale"],
            hermitian=d["hermitian"],
            commuting=d["commuting"],
        )


@dataclass(frozen=True)
class SweepRecord:
    trial: int
    report: BoundReport


@dataclass(frozen=True)
class TrialFit:
    trial: int
    slope: float | None
    residual: float | None

    @property
    def fitted(self) -> bool:
        return self.slope is not None


@dataclass
class SweepReport:
    config: SweepConfig
    records: list[SweepRecord]
    fits: list[TrialFit]
    diagnostics: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def max_ratio(self) -> float:
        return max((r.report.ratio for r in self.records), default=0.0)

    def slopes(self) -> list[float | None]:
        return [f.slope for f in self.fits]

    def violations(self, slack: float = BOUND_SLACK) -> list[SweepRecord]:
        if self.config.formula not in BOUNDED_FORMULAS:
            return []
        return [r for r in self.records if not r.report.holds(slack)]


@dataclass
class _TrialOutcome:
    records: list[SweepRecord]
    fit: TrialFit
    diagnostic: str | None
    timings: dict[str, float]


def _run_trial(config: SweepConfig, trial: int) -> _TrialOutcome:
    timings = {"draw": 0.0, "exact": 0.0, "formula": 0.0}
    formula = FORMULAS[config.formula]
    t0 = time.perf_counter()
    terms = random_terms(
        RngStream(config.seed, trial),
        config.dim,
        config.m,
        config.norm_scale,
        hermitian=config.hermitian,
        commuting=config.commuting,
        norm_kind=config.norm_kind,
    )
    t1 = time.perf_counter()
    timings["draw"] = t1 - t0
    records = []
    try:
        exact = exact_exp_sum(terms)
        t2 = time.perf_counter()
        timings["exact"] = t2 - t1
        for n in config.n_grid:
            err = norm(exact - formula(terms, n), config.norm_kind)
            rep = BoundReport(n, terms.total, err, suzuki_bound(terms.total, n), config.norm_kind)
            records.append(SweepRecord(trial, rep))
        timings["formula"] = time.perf_counter() - t2
    except (MatrixOverflowError, RuntimeError) as exc:
        return _TrialOutcome([], TrialFit(trial, None, None), f"trial {trial}: {exc}", timings)

    usable = [
        (r.report.n, r.report.measured_error)
        for r in records
        if r.report.n >= FIT_MIN_N and r.report.measured_error >= NOISE_FLOOR
    ]
    try:
        slope, resid = fit_order(usable)
        fit = TrialFit(trial, slope, resid)
    except InsufficientPointsError:
        fit = TrialFit(trial, None, None)
    return _TrialOutcome(records, fit, None, timings)


def run_sweep(config: SweepConfig, threads: int | None = None) -> SweepReport:
    """Run every trial of ``config``; trial ``t`` draws from stream ``(seed, t)``."""
    start = time.perf_counter()
    outcomes = map_ordered(lambda t: _run_trial(config, t), range(config.trials), threads)
    records, fits, diagnostics = [], [], []
    timings = {"draw": 0.0, "exact": 0.0, "formula": 0.0}
    for out in outcomes:
        records.extend(out.records)
        fits.append(out.fit)
        if out.diagnostic:
            diagnostics.append(out.diagnostic)
        for k, v in out.timings.items():
            timings[k] += v
    timings["wall"] = time.perf_counter() - start
    return SweepReport(config, records, fits, diagnostics, timings)


# -- serialization ------------------------------------------------------------


def report_to_dict(report: SweepReport) -> dict:
    return {
        "version": REPORT_VERSION,
        "config": report.config.to_dict(),
        "records": [
            {
                "trial": r.trial,
                "n": r.report.n,
                "s": r.report.s,
                "error": r.report.measured_error,
                "bound": r.report.bound,
                "ratio": r.report.ratio,
            }
            for r in report.records
        ],
        "slopes": [
            {"trial": f.trial, "slope": f.slope, "residual": f.residual} for f in report.fits
        ],
        "max_ratio": report.max_ratio,
        "diagnostics": list(report.diagnostics),
    }


def report_from_dict(d: dict) -> SweepReport:
    if d.get("version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version {d.get('version')!r}")
    config = SweepConfig.from_dict(d["config"])
    records = [
        SweepRecord(r["trial"], BoundReport(r["n"], r["s"], r["error"], r["bound"], config.norm_kind))
        for r in d["records"]
    ]
    fits = [TrialFit(f["trial"], f["slope"], f["residual"]) for f in d["slopes"]]
    return SweepReport(config, records, fits, list(d.get("diagnostics", [])))


def dumps_json(payload: dict) -> str:
    # json writes floats with repr(), the shortest round-tripping form
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def report_to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "n", "s", "error", "bound", "ratio"])
    for r in report.records:
        rep = r.report
        writer.writerow(
            [r.trial, rep.n, repr(rep.s), repr(rep.measured_error), repr(rep.bound), repr(rep.ratio)]
        )
    return buf.getvalue()


def emit_report(report: SweepReport, path: str | Path, format: str = "json") -> None:
    """Write ``report`` as JSON or CSV; identical reports give identical bytes."""
    if format == "json":
        text = dumps_json(report_to_dict(report))
    elif format == "csv":
        text = report_to_csv(report)
    else:
        raise ConfigError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_report(path: str | Path) -> SweepReport:
    with open(path, encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))


# -- jet identities ------------------------------------------------------------


@dataclass
class JetCheckSummary:
    cases: int = 0
    max_deviation: float = 0.0  # raw, largest over all cases
    max_normalized: float = 0.0  # deviation / (1 + ||S||^2)
    failures: list[str] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def add(self, label: str, deviation: float, scale: float) -> None:
        self.cases += 1
        self.max_deviation = max(self.max_deviation, deviation)
        self.max_normalized = max(self.max_normalized, deviation / scale)
        if deviation > JET_RTOL * scale:
            self.failures.append(f"{label}: deviation {deviation:.3e} > {JET_RTOL:g}*{scale:.3g}")


def jet_check(
    seed: int,
    dim: int,
    m_max: int,
    trials: int,
    norm_scale: float = 1.0,
    bases: Sequence[str] = ("g", "h"),
) -> JetCheckSummary:
    """Compare the degree-2 jets of the g and h bases against ``(I, S, S**2/2)``.

    Each trial draws one family per term count ``m = 1..m_max``; the h base
    is skipped with a notice for even ``m``.
    """
    if not 2 <= dim <= 8:
        raise ConfigError(f"jet-check dim must be in 2..8, got {dim}")
    if m_max < 1 or trials < 1:
        raise ConfigError("m_max and trials must be positive")
    summary = JetCheckSummary()
    if "h" in bases:
        for m in range(2, m_max + 1, 2):
            summary.notices.append(f"h base skipped for even m={m}")
    for t in range(trials):
        for m in range(1, m_max + 1):
            terms = random_terms(RngStream(seed, t * (m_max + 1) + m), dim, m, norm_scale)
            for base in bases:
                if base == "h" and m % 2 == 0:
                    continue
                dev, scale = jet_identity_deviation(terms, base)
                summary.add(f"trial {t} m={m} base={base}", dev, scale)
    return summary
