"""Symbolic-vs-finite-difference derivative self-test over the corpus.

First derivatives check the symbolic engine against finite differences of
the function itself; mixed and unmixed second derivatives check the second
symbolic level against finite differences of the first symbolic level.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from . import fd
from .corpus import CORPUS, corpus_points


@dataclass(frozen=True)
class ExprCheck:
    text: str
    dimension: int
    points: int
    derivatives_checked: int
    max_rel_error: float
    worst_case: str


@dataclass(frozen=True)
class SelfTestResult:
    checks: tuple
    max_rel_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tolerance


def _rel_err(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def run_selftest(points_per_expr: int = 50, seed: int = 0,
                 tolerance: float = 1e-6) -> SelfTestResult:
    checks = []
    overall = 0.0
    for idx, (text, n, guard) in enumerate(CORPUS):
        f = ex.parse(text, n)
        pts = corpus_points(guard, n, points_per_expr, seed + idx)
        worst = 0.0
        worst_case = ""
        counted = 0
        firsts = {}
        for j in range(1, n + 1):
            for conj_flag in (False, True):
                firsts[(j, conj_flag)] = ex.wirtinger(f, j, conj_flag)
        for z in pts:
            for (j, conj_flag), sym_tree in firsts.items():
                sym = ex.evaluate(sym_tree, z)
                num = fd.wirtinger_fd(f, z, j, conj_flag)
                err = _rel_err(sym, num)
                counted += 1
                if err > worst:
                    worst = err
                    worst_case = f"d{'bar' if conj_flag else ''}z{j} at {tuple(z)}"
            for j in range(1, n + 1):
                base = firsts[(j, False)]
                for k in range(1, n + 1):
                    for conj_flag in (True, False):
                        sym = ex.evaluate(ex.wirtinger(base, k, conj_flag), z)
                        num = fd.wirtinger_fd(base, z, k, conj_flag)
                        err = _rel_err(sym, num)
                        counted += 1
                        if err > worst:
                            worst = err
                            worst_case = (f"d2 z{j} {'bar' if conj_flag else ''}z{k}"
                                          f" at {tuple(z)}")
        checks.append(ExprCheck(text, n, len(pts), counted, worst, worst_case))
        overall = max(overall, worst)
    return SelfTestResult(tuple(checks), overall, tolerance)
