"""Bound verification over a fixed seeded ensemble.

For every family in the ensemble and every ``n`` in the grid this checks the
global g/h error bounds and the intermediate inequalities used to derive
them: the Taylor remainder of ``C = exp(S/n)``, of the g base ``D`` and the h
base ``H`` against ``F = I + S/n + (S/n)**2/2``, and the telescoping bound on
``||C**n - D**n||``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bounds import F_matrix, suzuki_bound, taylor_remainder_bound, telescoping_bound
from .expm import expm
from .formulas import exact_exp_sum, g_base, h_base
from .harness import BOUND_SLACK, REPORT_VERSION, map_ordered, random_terms
from .linalg import NormKind, mat_power, norm
from .rng import RngStream

DIMS = (2, 3, 4, 8)
SCALES = (0.5, 1.0, 2.0)
G_TERM_COUNTS = (2, 3, 5)
H_TERM_COUNTS = (3, 5, 7)
N_GRID = (1, 2, 4, 8, 16, 32, 64, 128, 256)
NORMS = (NormKind.SPECTRAL, NormKind.FROBENIUS)

# stream ids: g ensemble uses [0, trials), h ensemble [H_STREAM_OFFSET, ...)
H_STREAM_OFFSET = 1 << 32


@dataclass
class CheckStats:
    name: str
    norm_kind: NormKind
    cases: int = 0
    violations: int = 0
    max_ratio: float = 0.0
    worst: dict | None = None

    def add(self, lhs: float, rhs: float, where: dict, slack: float = BOUND_SLACK) -> None:
        self.cases += 1
        if lhs > rhs * (1.0 + slack):
            self.violations += 1
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
        if ratio > self.max_ratio or self.worst is None:
            self.max_ratio = max(ratio, self.max_ratio)
            self.worst = dict(where, lhs=lhs, rhs=rhs)

    def merge(self, other: "CheckStats") -> None:
        self.cases += other.cases
        self.violations += other.violations
        if other.worst is not None and (self.worst is None or other.max_ratio > self.max_ratio):
            self.max_ratio = other.max_ratio
            self.worst = other.worst

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "norm": self.norm_kind.value,
            "cases": self.cases,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "worst": self.worst,
        }


@dataclass
class VerifyReport:
    seed: int
    trials: int
    checks: list[CheckStats] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.violations == 0 for c in self.checks)

    def check(self, name: str, norm_kind: NormKind) -> CheckStats:
        for c in self.checks:
            if c.name == name and c.norm_kind is norm_kind:
                return c
        raise KeyError((name, norm_kind))

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "seed": self.seed,
            "trials": self.trials,
            "n_grid": list(N_GRID),
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def ensemble_shape(index: int, term_counts: Sequence[int]) -> tuple[int, int, float]:
    """``(dim, m, s)`` of family ``index``; cycles through the full product grid."""
    dim = DIMS[index % len(DIMS)]
    m = term_counts[(index // len(DIMS)) % len(term_counts)]
    s = SCALES[(index // (len(DIMS) * len(term_counts))) % len(SCALES)]
    return dim, m, s


def _g_case(seed: int, index: int, kind: NormKind) -> list[CheckStats]:
    dim, m, s = ensemble_shape(index, G_TERM_COUNTS)
    terms = random_terms(RngStream(seed, index), dim, m, s, norm_kind=kind)
    total = terms.total
    exact = exact_exp_sum(terms)
    thm = CheckStats("g_bound", kind)
    c_f = CheckStats("taylor_C", kind)
    d_f = CheckStats("taylor_D", kind)
    tele = CheckStats("telescoping_CD", kind)
    ssum = terms.matrix_sum()
    for n in N_GRID:
        where = {"index": index, "dim": dim, "m": m, "n": n}
        c = expm(ssum / n)
        d = g_base(terms, n)
        f = F_matrix(terms, n)
        taylor = taylor_remainder_bound(total, n)
        c_f.add(norm(c - f, kind), taylor, where)
        d_f.add(norm(d - f, kind), taylor, where)
        dn = mat_power(d, n)
        thm.add(norm(exact - dn, kind), suzuki_bound(total, n), where)
        tele.add(
            norm(mat_power(c, n) - dn, kind),
            telescoping_bound(norm(c, kind), norm(d, kind), norm(c - d, kind), n),
            where,
        )
    return [thm, c_f, d_f, tele]


def _h_case(seed: int, index: int, kind: NormKind) -> list[CheckStats]:
    dim, m, s = ensemble_shape(index, H_TERM_COUNTS)
    terms = random_terms(RngStream(seed, H_STREAM_OFFSET + index), dim, m, s, norm_kind=kind)
    total = terms.total
    exact = exact_exp_sum(terms)
    thm = CheckStats("h_bound", kind)
    h_f = CheckStats("taylor_H", kind)
    tele = CheckStats("telescoping_GH", kind)
    ssum = terms.matrix_sum()
    for n in N_GRID:
        where = {"index": index, "dim": dim, "m": m, "n": n}
        g = expm(ssum / n)
        h = h_base(terms, n)
        h_f.add(norm(h - F_matrix(terms, n), kind), taylor_remainder_bound(total, n), where)
        hn = mat_power(h, n)
        thm.add(norm(exact - hn, kind), suzuki_bound(total, n), where)
        tele.add(
            norm(mat_power(g, n) - hn, kind),
            telescoping_bound(norm(g, kind), norm(h, kind), norm(g - h, kind), n),
            where,
        )
    return [thm, h_f, tele]


def verify_bounds(seed: int = 0, trials: int = 500, threads: int | None = None) -> VerifyReport:
    """Check every bound on ``trials`` g-families and ``trials`` h-families per norm."""
    jobs = [(case, kind, i) for case in ("g", "h") for kind in NORMS for i in range(trials)]

    def run(job):
        case, kind, i = job
        return (_g_case if case == "g" else _h_case)(seed, i, kind)

    results = map_ordered(run, jobs, threads)
    report = VerifyReport(seed, trials)
    merged: dict[tuple[str, NormKind], CheckStats] = {}
    for stats in results:
        for st in stats:
            key = (st.name, st.norm_kind)
            if key not in merged:
                merged[key] = CheckStats(st.name, st.norm_kind)
                report.checks.append(merged[key])
            merged[key].merge(st)
    return report
