"""Undirected graphs, neighbourhood-graph generation and the preprocessing
pipeline (k-core peeling, block decomposition and solution recombination).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64


class Graph:
    """Immutable simple undirected graph over integer node ids.

    Node ids are kept in ascending order; ``edges`` holds each edge once as
    ``(u, v)`` with ``u < v``, sorted lexicographically.
    """

    __slots__ = ("_nodes", "_adj", "_edges")

    def __init__(self, nodes: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        node_list = sorted(int(v) for v in nodes)
        if len(set(node_list)) != len(node_list):
            raise ValueError("duplicate node ids")
        adj: dict[int, set[int]] = {v: set() for v in node_list}
        edge_set = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u}, {v}) uses an unknown node")
            e = (u, v) if u < v else (v, u)
            if e in edge_set:
                raise ValueError(f"parallel edge {e}")
            edge_set.add(e)
            adj[u].add(v)
            adj[v].add(u)
        self._nodes = tuple(node_list)
        self._adj = {v: frozenset(s) for v, s in adj.items()}
        self._edges = tuple(sorted(edge_set))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Graph on nodes ``0..n-1``."""
        return cls(range(n), edges)

    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def n(self) -> int:
        return len(self._nodes)

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbours(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._nodes, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def subgraph(self, nodes: Iterable[int]) -> Graph:
        """Induced subgraph on ``nodes``."""
        keep = set(nodes)
        missing = keep.difference(self._adj)
        if missing:
            raise ValueError(f"unknown nodes {sorted(missing)}")
        edges = [(u, v) for u, v in self._edges if u in keep and v in keep]
        return Graph(keep, edges)

    def components(self) -> list[Graph]:
        """Connected components, ordered by smallest node id."""
        seen: set[int] = set()
        comps = []
        for s in self._nodes:
            if s in seen:
                continue
            stack = [s]
            seen.add(s)
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(self.subgraph(comp))
        return comps

    def relabel(self) -> tuple[Graph, dict[int, int]]:
        """Copy on ``0..n-1`` plus the map from old ids to new ones."""
        index = {v: i for i, v in enumerate(self._nodes)}
        return Graph(range(self.n), [(index[u], index[v]) for u, v in self._edges]), index


# ---------------------------------------------------------------- generation


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    radius: float
    seed: int
    metric: str = "torus"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.metric not in ("torus", "plain-euclidean"):
            raise ValueError(f"unknown metric {self.metric!r}")


def sample_points(n: int, seed: int) -> np.ndarray:
    """``n`` points uniform on the unit square; x then y drawn per point."""
    rng = SplitMix64(seed)
    pts = np.empty((n, 2))
    for i in range(n):
        pts[i, 0] = rng.random()
        pts[i, 1] = rng.random()
    return pts


def disk_graph(points: np.ndarray, radius: float, metric: str = "torus") -> Graph:
    """Join points whose distance is at most ``radius``.

    Distances are compared squared (``dx*dx + dy*dy <= r*r``); on the torus
    each coordinate difference is ``min(|d|, 1 - |d|)``.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n == 0:
        return Graph(())
    d = np.abs(pts[:, None, :] - pts[None, :, :])
    if metric == "torus":
        d = np.minimum(d, 1.0 - d)
    elif metric != "plain-euclidean":
        raise ValueError(f"unknown metric {metric!r}")
    dist2 = d[:, :, 0] * d[:, :, 0] + d[:, :, 1] * d[:, :, 1]
    iu, ju = np.nonzero(np.triu(dist2 <= radius * radius, k=1))
    return Graph(range(n), zip(iu.tolist(), ju.tolist()))


def square(g: Graph) -> Graph:
    """Add an edge between every pair of nodes with a common neighbour."""
    edges = set(g.edges)
    for v in g.nodes:
        nb = sorted(g.neighbours(v))
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                edges.add((a, b))
    return Graph(g.nodes, edges)


def generate_neighbourhood_graph(params: GeneratorParams) -> Graph:
    """Square of the seeded random disk graph described by ``params``."""
    pts = sample_points(params.n, params.seed)
    return square(disk_graph(pts, params.radius, params.metric))


# ------------------------------------------------------------ k-core peeling


def peel(g: Graph, k: int) -> tuple[frozenset[int], tuple[int, ...]]:
    """Repeatedly delete every node of degree below ``k``.

    Returns the surviving node set and the deletion order: round by round,
    ascending ids within a round.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    alive = set(g.nodes)
    deg = {v: g.degree(v) for v in g.nodes}
    order: list[int] = []
    low = sorted(v for v in alive if deg[v] < k)
    while low:
        order.extend(low)
        alive.difference_update(low)
        for v in low:
            for u in g.neighbours(v):
                if u in alive:
                    deg[u] -= 1
        low = sorted(v for v in alive if deg[v] < k)
    return frozenset(alive), tuple(order)


def k_core_reduce(g: Graph, k: int) -> list[Graph]:
    """Connected components of the maximal subgraph with min degree >= k."""
    core, _ = peel(g, k)
    if not core:
        return []
    return g.subgraph(core).components()


# -------------------------------------------------------- block decomposition


def _biconnected_edge_sets(g: Graph) -> tuple[list[set[tuple[int, int]]], set[int]]:
    # Iterative Hopcroft-Tarjan over an edge stack.
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[set[tuple[int, int]]] = []
    cut_vertices: set[int] = set()
    counter = 0
    for root in g.nodes:
        if root in index or g.degree(root) == 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, None, iter(sorted(g.neighbours(root))))]
        while stack:
            v, parent, it = stack[-1]
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    edge_stack.append((v, w))
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(sorted(g.neighbours(w)))))
                    if v == root:
                        root_children += 1
                    break
                if index[w] < index[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], index[w])
            else:
                stack.pop()
                if parent is None:
                    continue
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    if parent != root:
                        cut_vertices.add(parent)
                    block = set()
                    while True:
                        a, b = edge_stack.pop()
                        block.add((a, b) if a < b else (b, a))
                        if (a, b) == (parent, v):
                            break
                    blocks.append(block)
        if root_children > 1:
            cut_vertices.add(root)
    return blocks, cut_vertices


def articulation_points(g: Graph) -> list[int]:
    return sorted(_biconnected_edge_sets(g)[1])


def block_decompose(g: Graph) -> list[Graph]:
    """Blocks (biconnected components) of ``g``, ordered by node tuple.

    Each edge lies in exactly one block; isolated nodes give no block.
    """
    edge_sets, _ = _biconnected_edge_sets(g)
    blocks = []
    for es in edge_sets:
        nodes = {u for e in es for u in e}
        blocks.append(Graph(nodes, es))
    blocks.sort(key=lambda b: b.nodes)
    return blocks


# ------------------------------------------------------------- preprocessing

LEAF = "leaf"
KCORE = "k-core"
BLOCKS = "blocks"


@dataclass(frozen=True)
class DecompositionNode:
    """One step of the preprocessing tree.

    ``kind`` is ``"k-core"`` (``eliminated`` holds the deletion order and
    ``children`` the core components), ``"blocks"`` (``children`` are the
    blocks, joined at ``articulation_points``) or ``"leaf"``.
    """

    graph: Graph
    kind: str
    children: tuple[DecompositionNode, ...] = ()
    eliminated: tuple[int, ...] = ()
    articulation_points: tuple[int, ...] = ()


@dataclass(frozen=True)
class DecompositionTree:
    root: DecompositionNode
    k: int
    leaves: tuple[Graph, ...] = field(init=False)

    def __post_init__(self):
        found: list[Graph] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.kind == LEAF:
                found.append(node.graph)
            stack.extend(reversed(node.children))
        object.__setattr__(self, "leaves", tuple(found))

    @property
    def graph(self) -> Graph:
        return self.root.graph

    def edges_eliminated(self) -> int:
        return self.graph.m - sum(leaf.m for leaf in self.leaves)


def _decompose(g: Graph, k: int) -> DecompositionNode:
    core, order = peel(g, k)
    comps = g.subgraph(core).components() if core else []
    if order or len(comps) != 1:
        children = tuple(_decompose(c, k) for c in comps)
        return DecompositionNode(g, KCORE, children, eliminated=order)
    blocks = block_decompose(g)
    if len(blocks) == 1:
        return DecompositionNode(g, LEAF)
    children = tuple(_decompose(b, k) for b in blocks)
    return DecompositionNode(g, BLOCKS, children, articulation_points=tuple(articulation_points(g)))


def preprocess(g: Graph, k: int) -> DecompositionTree:
    """Alternate k-core reduction and block decomposition until every piece
    is biconnected with minimum degree at least ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return DecompositionTree(_decompose(g, k), k)


# -------------------------------------------------------------- recombination


def align_colour(colour: int, source: int, target: int, k: int) -> int:
    """Image of ``colour`` under a cost-preserving permutation taking
    ``source`` to ``target``.

    Swaps residues ``source % k`` and ``target % k`` across every level, then
    swaps levels ``source // k`` and ``target // k`` inside the target's
    residue class. Both swaps keep every mod-k and exact coincidence.
    """
    ra, rb = source % k, target % k
    qa, qb = source // k, target // k
    q, r = divmod(colour, k)
    if r == ra:
        r = rb
    elif r == rb:
        r = ra
    if r == rb:
        if q == qa:
            q = qb
        elif q == qb:
            q = qa
    return q * k + r


def _recolour(node: DecompositionNode, k: int, leaf_iter) -> dict[int, int]:
    if node.kind == LEAF:
        leaf, sol = next(leaf_iter)
        if sol is None:
            raise ValueError(f"missing solution for leaf {leaf!r}")
        out = {int(v): int(c) for v, c in sol.items()}
        if set(out) != set(leaf.nodes):
            raise ValueError(f"leaf solution does not match the nodes of leaf {leaf!r}")
        return out

    child_cols = [_recolour(ch, k, leaf_iter) for ch in node.children]

    if node.kind == KCORE:
        merged: dict[int, int] = {}
        for col in child_cols:
            merged.update(col)
        for v in reversed(node.eliminated):
            used = {merged[u] % k for u in node.graph.neighbours(v) if u in merged}
            merged[v] = min(r for r in range(k) if r not in used)
        return merged

    merged = dict(child_cols[0])
    pending = list(child_cols[1:])
    while pending:
        for i, col in enumerate(pending):
            shared = [v for v in col if v in merged]
            if shared:
                break
        else:
            raise ValueError("blocks do not form a connected block tree")
        if len(shared) != 1:
            raise ValueError("blocks share more than one node")
        v = shared[0]
        src, dst = col[v], merged[v]
        for u, c in col.items():
            merged[u] = align_colour(c, src, dst, k)
        pending.pop(i)
    return merged


def recombine(
    tree: DecompositionTree,
    leaf_solutions: Sequence[Mapping[int, int]] | Mapping[int, Mapping[int, int]],
) -> dict[int, int]:
    """Lift per-leaf colourings back to a colouring of ``tree.graph``.

    ``leaf_solutions`` is either aligned with ``tree.leaves`` or keyed by leaf
    index. The result costs exactly the sum of the leaf costs.
    """
    if isinstance(leaf_solutions, Mapping):
        sols = [leaf_solutions.get(i) for i in range(len(tree.leaves))]
    else:
        sols = list(leaf_solutions)
        if len(sols) != len(tree.leaves):
            raise ValueError(f"expected {len(tree.leaves)} leaf solutions, got {len(sols)}")
    return _recolour(tree.root, tree.k, iter(zip(tree.leaves, sols)))
