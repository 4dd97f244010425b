"""Exhaustive comparison of the decomposition enumerator with the brute-force oracle."""

import time
from dataclasses import dataclass
from functools import lru_cache

from hermcusp.decomp import ORACLE_CAP, DecompProblem, constraints_hold, decomp_enumerate, decomp_oracle, partitions


def all_problems(prime, cap=ORACLE_CAP):
    """Every ``(m, a)`` whose group order ``prime^(m + sum i a_i)`` is within the cap.

    Each quotient appears once unpadded and once with a trailing zero.
    """
    n_max = 0
    while prime ** (n_max + 1) <= cap:
        n_max += 1
    for n in range(1, n_max + 1):
        for m in range(1, n + 1):
            for q in partitions(n - m):
                top = max(q) if q else 1
                a = tuple(q.count(i) for i in range(1, top + 1))
                yield DecompProblem(m, a)
                yield DecompProblem(m, a + (0,))


@dataclass(frozen=True)
class EquivalenceRun:
    prime: int
    problems: int
    bad: tuple
    broken: tuple
    seconds: float


@lru_cache(maxsize=None)
def equivalence_run(prime, cap=ORACLE_CAP):
    """Compare on every problem within the cap; ``broken`` lists solutions failing their own constraints."""
    start = time.perf_counter()
    problems = list(all_problems(prime, cap))
    bad, broken = [], []
    for p in problems:
        sols = decomp_enumerate(p)
        for s in sols:
            if not constraints_hold(p, s.indices, s.multiplicities) or sum(s.structure) != p.total:
                broken.append((p, s))
        if sorted({s.structure for s in sols}) != decomp_oracle(prime, p):
            bad.append(p)
    return EquivalenceRun(prime, len(problems), tuple(bad), tuple(broken), time.perf_counter() - start)
