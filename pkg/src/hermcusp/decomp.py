"""Extensions ``0 -> O/p^m -> N -> prod (O/p^i)^(a_i) -> 0`` over a PID.

``decomp_enumerate`` lists the index/multiplicity tuples and the resulting
structures of ``N``; ``decomp_oracle`` finds the same structures by searching
finite abelian p-groups directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


class DecompError(ValueError):
    code = "decomp"


@dataclass(frozen=True)
class DecompProblem:
    m: int
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.m < 1:
            raise DecompError("m must be at least 1")
        if not self.a or any(x < 0 for x in self.a):
            raise DecompError("a must be a nonempty list of non-negative integers")

    @property
    def s(self) -> int:
        return len(self.a)

    def a_at(self, i: int) -> int:
        return self.a[i - 1] if 1 <= i <= len(self.a) else 0

    @property
    def total(self) -> int:
        return self.m + sum(i * x for i, x in enumerate(self.a, start=1))

    def quotient(self) -> tuple[int, ...]:
        """Exponents of ``prod (O/p^i)^(a_i)`` as a partition."""
        return tuple(sorted((i for i, x in enumerate(self.a, start=1) for _ in range(x)), reverse=True))


@dataclass(frozen=True)
class DecompSolution:
    indices: tuple[int, ...]
    multiplicities: tuple[int, ...]
    structure: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.indices) - 1


def constraints_hold(p: DecompProblem, indices: Sequence[int], mults: Sequence[int]) -> bool:
    k = len(indices) - 1
    if k < 0 or len(mults) != len(indices):
        return False
    if any(indices[t] >= indices[t + 1] for t in range(k)):
        return False
    if any(i < 0 or i > p.s for i in indices):
        return False
    if any(p.a_at(indices[t]) <= 0 for t in range(1, k + 1)):
        return False
    if indices[0] > 0 and p.a_at(indices[0]) <= 0:
        return False
    if sum(mults) != p.m or any(x <= 0 for x in mults):
        return False
    return all(0 < mults[t] < indices[t + 1] - indices[t] for t in range(k))


def structure_of(p: DecompProblem, indices: Sequence[int], mults: Sequence[int]) -> tuple[int, ...]:
    parts: list[int] = []
    for i, mi in zip(indices, mults):
        if i > 0:
            parts.extend([i] * (p.a_at(i) - 1))
        parts.append(mi + i)
    for j in range(1, p.s + 1):
        if j not in indices:
            parts.extend([j] * p.a_at(j))
    return tuple(sorted((x for x in parts if x > 0), reverse=True))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total > 0:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def decomp_enumerate(p: DecompProblem) -> list[DecompSolution]:
    allowed = [0] + [i for i in range(1, p.s + 1) if p.a_at(i) > 0]
    out = []
    for k in range(0, min(p.m, len(allowed))):
        for idx in itertools.combinations(allowed, k + 1):
            for mults in _compositions(p.m, k + 1):
                if constraints_hold(p, idx, mults):
                    out.append(DecompSolution(idx, mults, structure_of(p, idx, mults)))
    out.sort(key=lambda s: (s.k, s.indices, s.multiplicities))
    return out


# ---------------------------------------------------------------- oracle

ORACLE_CAP = 3**7


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def torsion_log(lam: Sequence[int], j: int) -> int:
    """``log_p |G[p^j]|`` for ``G = prod Z/p^lam_r``."""
    return sum(min(x, j) for x in lam)


def quotient_profile(lam: Sequence[int], t: Sequence[int], m: int) -> tuple[int, ...]:
    """``log_p |Q[p^j]|`` for ``j = 1..max(lam)``, where ``Q = G/<x>``.

    ``x`` has coordinates ``p^(t_r)`` (``t_r = lam_r`` meaning zero) and order
    ``p^m``.  Uses ``|Q[p^j]| = |G[p^j]| * |<x> ∩ p^j G| / p^m``.
    """
    top = max(lam) if lam else 0
    prof = []
    for j in range(1, top + 1):
        e0 = 0
        for lr, tr in zip(lam, t):
            if tr < lr:
                e0 = max(e0, min(j, lr) - tr)
        e0 = min(e0, m)
        prof.append(torsion_log(lam, j) - e0)
    return tuple(prof)


def profile_of_partition(mu: Sequence[int], top: int) -> tuple[int, ...]:
    return tuple(torsion_log(mu, j) for j in range(1, top + 1))


def _valuation_vectors(lam: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Valuation vectors ``t`` for ``lam``, up to permuting equal parts."""
    blocks = [(e, len(list(grp))) for e, grp in itertools.groupby(lam)]
    choices = [itertools.combinations_with_replacement(range(e + 1), c) for e, c in blocks]
    for combo in itertools.product(*(list(c) for c in choices)):
        yield tuple(x for part in combo for x in part)


def decomp_oracle(prime: int, p: DecompProblem) -> list[tuple[int, ...]]:
    """Partitions ``lam`` of ``m + sum i a_i`` such that ``prod Z/prime^lam_r``
    has a cyclic subgroup of order ``prime^m`` with quotient of the target type.

    Elements are taken up to coordinatewise unit scaling and permutation of
    equal cyclic factors (both automorphisms), so it suffices to try sorted
    coordinates that are powers of ``prime``.
    """
    if prime not in (2, 3):
        raise DecompError("oracle supports p = 2 or 3")
    n = p.total
    if prime**n > ORACLE_CAP:
        raise DecompError(f"group order {prime}^{n} exceeds the cap {ORACLE_CAP}")
    target = p.quotient()
    found = []
    for lam in partitions(n):
        want = profile_of_partition(target, max(lam))
        ok = False
        for t in _valuation_vectors(lam):
            order = max((lr - tr for lr, tr in zip(lam, t)), default=0)
            if order != p.m:
                continue
            if quotient_profile(lam, t, p.m) == want:
                ok = True
                break
        if ok:
            found.append(lam)
    return sorted(found)


def brute_quotient_profile(prime: int, lam: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    """Direct count of ``log_p |Q[p^j]|`` by listing every element (small groups only)."""
    mods = [prime**e for e in lam]
    C = set()
    y = tuple(0 for _ in lam)
    while True:
        C.add(y)
        y = tuple((a + b) % q for a, b, q in zip(y, x, mods))
        if y == tuple(0 for _ in lam):
            break
    prof = []
    for j in range(1, max(lam) + 1):
        pj = prime**j
        cnt = 0
        for z in itertools.product(*(range(q) for q in mods)):
            if tuple((pj * a) % q for a, q in zip(z, mods)) in C:
                cnt += 1
        # |Q[p^j]| = #{z : p^j z in C} / |C|
        size, e = cnt // len(C), 0
        while size > 1:
            size //= prime
            e += 1
        prof.append(e)
    return tuple(prof)


def solution_to_json(s: DecompSolution) -> dict:
    return {"indices": list(s.indices), "multiplicities": list(s.multiplicities), "structure": list(s.structure)}
