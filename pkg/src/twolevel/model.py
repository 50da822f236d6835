"""Problem instances, colouring costs, symmetry fixings and the 0-1 model."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .cuts import Cut
from .graph import Graph
from .lp import MatrixModel


@dataclass(frozen=True)
class Instance:
    """A graph with the parameters ``k``, ``k'`` and weights ``w >= w' > 0``.

    ``allow_any_weights`` lifts the ``w >= w'`` requirement (positivity is
    always enforced). ``points`` optionally records generator coordinates.
    """

    graph: Graph
    k: int
    kprime: int
    w: float = 1.0
    wprime: float = 1.0
    allow_any_weights: bool = False
    points: tuple[tuple[float, float], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 2 or self.kprime < 2:
            raise ValueError("k and k' must both be at least 2")
        if not (self.w > 0 and self.wprime > 0):
            raise ValueError("weights must be positive")
        if self.w < self.wprime and not self.allow_any_weights:
            raise ValueError("w must be at least w' (pass allow_any_weights to override)")

    @property
    def n_colours(self) -> int:
        return self.k * self.kprime

    def restrict(self, g: Graph) -> Instance:
        """Same parameters on another graph (typically a subgraph)."""
        return Instance(g, self.k, self.kprime, self.w, self.wprime, self.allow_any_weights)

    def objective_step(self) -> float | None:
        """Spacing of attainable objective values when both weights are
        integers, else ``None``."""
        if float(self.w).is_integer() and float(self.wprime).is_integer():
            return float(np.gcd(int(self.w), int(self.wprime)))
        return None


@dataclass(frozen=True)
class Cost:
    y_conflicts: int
    z_conflicts: int
    objective: float


def evaluate_colouring(inst: Instance, col: Mapping[int, int]) -> Cost:
    """Count edges equal mod ``k`` and edges with equal colours."""
    K = inst.n_colours
    for v in inst.graph.nodes:
        if v not in col:
            raise ValueError(f"node {v} has no colour")
        c = col[v]
        if not (0 <= c < K) or int(c) != c:
            raise ValueError(f"colour {c} of node {v} outside 0..{K - 1}")
    y = z = 0
    k = inst.k
    for u, v in inst.graph.edges:
        cu, cv = col[u], col[v]
        if cu % k == cv % k:
            y += 1
            if cu == cv:
                z += 1
    return Cost(y, z, inst.w * y + inst.wprime * z)


def phi(c: int, k: int) -> int:
    return c // k + c % k


@dataclass(frozen=True)
class Fixing:
    """Pairs ``(rank, colour)`` whose assignment variable is fixed to 0.

    Ranks are 1-based positions in the node order of the graph being solved.
    """

    n: int
    k: int
    kprime: int
    pairs: tuple[tuple[int, int], ...]

    def allowed(self, rank: int) -> list[int]:
        """Colours still open to the node of the given 1-based rank."""
        return [c for c in range(self.k * self.kprime) if phi(c, self.k) < rank]


def symmetry_fixings(n: int, k: int, kprime: int) -> Fixing:
    """All ``(v, c)`` with ``phi(c) >= v`` for ranks ``v = 1..n``.

    At least one optimal colouring survives these fixings for any node order.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    phis = [phi(c, k) for c in range(k * kprime)]
    top = max(phis)
    pairs = []
    for v in range(1, min(n, top) + 1):
        pairs.extend((v, c) for c, p in enumerate(phis) if p >= v)
    return Fixing(n, k, kprime, tuple(pairs))


@dataclass(frozen=True)
class IpLayout:
    """Column positions of the x, y and z variables."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    n_colours: int

    def __post_init__(self):
        object.__setattr__(self, "rank", {v: i for i, v in enumerate(self.nodes)})
        object.__setattr__(self, "edge_pos", {e: i for i, e in enumerate(self.edges)})

    @property
    def y0(self) -> int:
        return len(self.nodes) * self.n_colours

    @property
    def z0(self) -> int:
        return self.y0 + len(self.edges)

    def x(self, v: int, c: int) -> int:
        return self.rank[v] * self.n_colours + c

    def y(self, e: tuple[int, int]) -> int:
        return self.y0 + self.edge_pos[e]

    def z(self, e: tuple[int, int]) -> int:
        return self.z0 + self.edge_pos[e]

    def y_index(self) -> dict[tuple[int, int], int]:
        return {e: self.y0 + i for i, e in enumerate(self.edges)}

    def z_index(self) -> dict[tuple[int, int], int]:
        return {e: self.z0 + i for i, e in enumerate(self.edges)}

    def colouring(self, x) -> dict[int, int]:
        """Colour of each node: the column with the largest x value."""
        K = self.n_colours
        xs = np.asarray(x[: self.y0], dtype=float).reshape(len(self.nodes), K) if self.nodes else np.zeros((0, K))
        return {v: int(np.argmax(xs[i])) for i, v in enumerate(self.nodes)}


def build_full_ip(inst: Instance, pool: Iterable[Cut] = (), fix: Fixing | None = None) -> MatrixModel:
    """The 0-1 model: binary ``x_vc``, ``y_e, z_e`` in [0, 1], assignment
    equalities, mod-k and exact linking rows, the given cuts, and the fixings
    as zero upper bounds. The layout is attached as ``model.layout``."""
    g = inst.graph
    k, kp, K = inst.k, inst.kprime, inst.n_colours
    lay = IpLayout(g.nodes, g.edges, K)
    model = MatrixModel()
    for v in g.nodes:
        for c in range(K):
            model.add_variable(0.0, 1.0, 0.0, integer=True, name=f"x_{v}_{c}")
    for u, v in g.edges:
        model.add_variable(0.0, 1.0, inst.w, name=f"y_{u}_{v}")
    for u, v in g.edges:
        model.add_variable(0.0, 1.0, inst.wprime, name=f"z_{u}_{v}")
    if fix is not None:
        if fix.n < g.n or (fix.k, fix.kprime) != (k, kp):
            raise ValueError("fixing does not match the instance")
        for rank, c in fix.pairs:
            if rank <= g.n:
                model.ub[(rank - 1) * K + c] = 0.0
    for v in g.nodes:
        model.add_row({lay.x(v, c): 1.0 for c in range(K)}, "=", 1.0, name=f"assign_{v}")
    for e in g.edges:
        u, v = e
        for c in range(k):
            coefs = {lay.y(e): 1.0}
            for r in range(kp):
                coefs[lay.x(u, c + r * k)] = -1.0
                coefs[lay.x(v, c + r * k)] = -1.0
            model.add_row(coefs, ">=", -1.0, name=f"ylink_{u}_{v}_{c}")
    for e in g.edges:
        u, v = e
        for c in range(K):
            model.add_row({lay.z(e): 1.0, lay.x(u, c): -1.0, lay.x(v, c): -1.0}, ">=", -1.0, name=f"zlink_{u}_{v}_{c}")
    y_index, z_index = lay.y_index(), lay.z_index()
    for i, cut in enumerate(pool):
        model.add_row(cut.row(y_index, z_index, kp), ">=", cut.rhs, name=f"cut{i}_{cut.family.name}")
    model.layout = lay
    model._touch()
    return model
