"""Clique inequalities for the two-level partition problem.

For a clique ``C`` write ``y(C)`` and ``z(C)`` for the sums of the edge
variables over pairs inside ``C``. Three families are valid:

* y-clique:  ``y(C) >= y_clique_rhs(|C|, k)``                 when |C| > k
* z-clique:  ``z(C) >= z_clique_rhs(|C|, k, k')``             when |C| > kk'
* yz-clique: ``k' z(C) - y(C) >= -yz_clique_rhs_constant(|C|, k')``  when |C| > k'
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

from .cliques import CliqueCatalogue, subcliques

VIOLATION_TOL = 1e-6
SLACK_EPS = 1e-6
DEFAULT_MAX_CUTS = 50


class Family(str, Enum):
    Y = "y-clique"
    Z = "z-clique"
    YZ = "yz-clique"


FAMILY_ORDER = {Family.Y: 0, Family.YZ: 1, Family.Z: 2}


def y_clique_rhs(size: int, k: int) -> int:
    if size <= k:
        raise ValueError(f"y-clique needs |C| > k, got |C|={size}, k={k}")
    t, r = divmod(size, k)
    return comb(t + 1, 2) * r + comb(t, 2) * (k - r)


def z_clique_rhs(size: int, k: int, kprime: int) -> int:
    kk = k * kprime
    if size <= kk:
        raise ValueError(f"z-clique needs |C| > kk', got |C|={size}, kk'={kk}")
    T, R = divmod(size, kk)
    return comb(T + 1, 2) * R + comb(T, 2) * (kk - R)


def yz_clique_rhs_constant(size: int, kprime: int) -> int:
    """Constant ``c`` in ``k' z(C) >= y(C) - c``."""
    if size <= kprime:
        raise ValueError(f"yz-clique needs |C| > k', got |C|={size}, k'={kprime}")
    t, r = divmod(size, kprime)
    return t * comb(kprime, 2) + comb(r, 2)


def is_dominated(family: Family, size: int, k: int, kprime: int) -> bool:
    """Sizes at which a family's inequality is implied by others."""
    if family is Family.Y:
        return size % k == 0
    if family is Family.YZ:
        return size % kprime == 0
    kk = k * kprime
    R = size % kk
    return not (1 < R < kk - 1)


def family_min_size(family: Family, k: int, kprime: int) -> int:
    return {Family.Y: k + 1, Family.Z: k * kprime + 1, Family.YZ: kprime + 1}[family]


@dataclass(frozen=True)
class Cut:
    """One clique inequality, written ``lhs(C) >= rhs``.

    The left-hand side is ``y(C)`` for Y, ``z(C)`` for Z and
    ``k' z(C) - y(C)`` for YZ.
    """

    family: Family
    clique: tuple[int, ...]
    rhs: float

    @classmethod
    def make(cls, family: Family, clique: Iterable[int], k: int, kprime: int) -> Cut:
        family = Family(family)
        c = tuple(sorted(clique))
        s = len(c)
        if family is Family.Y:
            rhs = y_clique_rhs(s, k)
        elif family is Family.Z:
            rhs = z_clique_rhs(s, k, kprime)
        else:
            rhs = -yz_clique_rhs_constant(s, kprime)
        return cls(family, c, float(rhs))

    @property
    def key(self) -> tuple[Family, tuple[int, ...]]:
        return self.family, self.clique

    def pairs(self):
        return combinations(self.clique, 2)

    def lhs(self, y: Mapping, z: Mapping | None, kprime: int) -> float:
        if self.family is Family.Y:
            return sum(y[p] for p in self.pairs())
        if self.family is Family.Z:
            return sum(z[p] for p in self.pairs())
        return sum(kprime * z[p] - y[p] for p in self.pairs())

    def row(self, y_index: Mapping, z_index: Mapping | None, kprime: int):
        """Coefficient map for a :class:`~twolevel.lp.MatrixModel` row."""
        coefs: dict[int, float] = {}
        for p in self.pairs():
            if self.family is not Family.Z:
                coefs[y_index[p]] = 1.0 if self.family is Family.Y else -1.0
            if self.family is not Family.Y:
                coefs[z_index[p]] = 1.0 if self.family is Family.Z else float(kprime)
        return coefs

    def to_dict(self, slack: float | None = None) -> dict:
        d = {"family": self.family.value, "clique": list(self.clique), "rhs": self.rhs}
        if slack is not None:
            d["slack"] = slack
        return d


@dataclass(frozen=True)
class EdgePoint:
    """Values of the edge variables at an LP point, keyed by ``(u, v)``."""

    y: Mapping[tuple[int, int], float]
    z: Mapping[tuple[int, int], float] | None = None

    @classmethod
    def from_vector(cls, x, edges, y_index, z_index=None) -> EdgePoint:
        y = {e: float(x[y_index[e]]) for e in edges}
        z = {e: float(x[z_index[e]]) for e in edges} if z_index is not None else None
        return cls(y, z)


class CutPool:
    """Cuts in insertion order with their slack at the last LP point."""

    def __init__(self, cuts: Iterable[Cut] = ()):
        self._cuts: dict[tuple, Cut] = {}
        self.slack: dict[tuple, float] = {}
        self.add(cuts)

    def add(self, cuts: Iterable[Cut]) -> list[Cut]:
        """Insert cuts not already present; returns those inserted."""
        fresh = []
        for c in cuts:
            if c.key not in self._cuts:
                self._cuts[c.key] = c
                fresh.append(c)
        return fresh

    def __iter__(self):
        return iter(self._cuts.values())

    def __len__(self) -> int:
        return len(self._cuts)

    def __contains__(self, cut: Cut) -> bool:
        return cut.key in self._cuts

    @property
    def cuts(self) -> list[Cut]:
        return list(self._cuts.values())

    def count(self, family: Family) -> int:
        return sum(1 for c in self._cuts.values() if c.family is family)

    def update_slacks(self, point: EdgePoint, kprime: int) -> None:
        self.slack = {key: c.lhs(point.y, point.z, kprime) - c.rhs for key, c in self._cuts.items()}

    def slack_of(self, cut: Cut) -> float:
        return self.slack[cut.key]

    def to_json(self) -> str:
        return json.dumps([c.to_dict(self.slack.get(c.key)) for c in self], indent=1)


def purge_slack(pool: CutPool, point: EdgePoint, kprime: int, eps: float = SLACK_EPS) -> CutPool:
    """Pool without the cuts whose slack at ``point`` exceeds ``eps``."""
    pool.update_slacks(point, kprime)
    kept = CutPool(c for c in pool if pool.slack[c.key] <= eps)
    kept.slack = {key: s for key, s in pool.slack.items() if key in kept._cuts}
    return kept


def separate(
    point: EdgePoint,
    families: Iterable[Family],
    cat: CliqueCatalogue,
    inst,
    max_cuts: int = DEFAULT_MAX_CUTS,
    violation_tol: float = VIOLATION_TOL,
    dominance_filter: bool = True,
) -> list[Cut]:
    """Most violated clique inequalities of the requested families.

    Every clique of the catalogue's graph large enough for some family is
    examined exactly once. With ``dominance_filter`` the sizes at which a
    family is implied by the others are skipped. Returns at most
    ``max_cuts`` cuts, most violated first.
    """
    families = sorted({Family(f) for f in families}, key=FAMILY_ORDER.get)
    if not families:
        return []
    k, kp = inst.k, inst.kprime
    if Family.Z in families or Family.YZ in families:
        if point.z is None:
            raise ValueError("z values are required for z- and yz-clique separation")
    y, z = point.y, point.z

    # Per-size table: list of (family, rhs) that apply.
    min_size = min(family_min_size(f, k, kp) for f in families)
    top = cat.max_size
    table: dict[int, list[tuple[Family, float]]] = {}
    for s in range(min_size, top + 1):
        entries = []
        for f in families:
            if s < family_min_size(f, k, kp):
                continue
            if dominance_filter and is_dominated(f, s, k, kp):
                continue
            entries.append((f, float(Cut.make(f, range(s), k, kp).rhs)))
        if entries:
            table[s] = entries
    if not table:
        return []
    need_y = any(f is not Family.Z for es in table.values() for f, _ in es)
    need_z = any(f is not Family.Y for es in table.values() for f, _ in es)

    found: list[tuple[float, tuple[int, ...], int, Family, float]] = []

    def visit(c):
        entries = table.get(len(c))
        if entries is None:
            return
        pairs = list(combinations(c, 2))
        ys = sum(y[p] for p in pairs) if need_y else 0.0
        zs = sum(z[p] for p in pairs) if need_z else 0.0
        for f, rhs in entries:
            if f is Family.Y:
                lhs = ys
            elif f is Family.Z:
                lhs = zs
            else:
                lhs = kp * zs - ys
            viol = rhs - lhs
            if viol > violation_tol:
                found.append((-viol, c, FAMILY_ORDER[f], f, rhs))

    subcliques(cat, min(table), visit, max_size=max(table))
    found.sort()
    return [Cut(f, c, rhs) for _, c, _, f, rhs in found[:max_cuts]]
