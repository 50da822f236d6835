"""Maximal clique enumeration and deduplicated sub-clique iteration."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from itertools import combinations

from .graph import Graph

DEFAULT_MAX_CLIQUES = 10**6
DEFAULT_MAX_VISITS = 10**7


class CliqueLimitError(RuntimeError):
    """Raised when enumeration exceeds its configured work cap."""


@dataclass(frozen=True)
class CliqueCatalogue:
    """Maximal cliques of a graph, sorted by size (descending) then ids."""

    graph: Graph
    maximal_cliques: tuple[tuple[int, ...], ...]
    by_size: dict[int, tuple[tuple[int, ...], ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: dict[int, list[tuple[int, ...]]] = {}
        for c in self.maximal_cliques:
            index.setdefault(len(c), []).append(c)
        object.__setattr__(self, "by_size", {s: tuple(v) for s, v in index.items()})

    @property
    def max_size(self) -> int:
        return len(self.maximal_cliques[0]) if self.maximal_cliques else 0

    def __len__(self) -> int:
        return len(self.maximal_cliques)


def maximal_cliques(g: Graph, max_cliques: int = DEFAULT_MAX_CLIQUES) -> CliqueCatalogue:
    """All maximal cliques of ``g`` by Bron-Kerbosch with Tomita pivoting.

    Isolated nodes are singleton maximal cliques.
    """
    nodes = g.nodes
    pos = {v: i for i, v in enumerate(nodes)}
    nbr = [0] * len(nodes)
    for u, v in g.edges:
        nbr[pos[u]] |= 1 << pos[v]
        nbr[pos[v]] |= 1 << pos[u]

    found: list[int] = []

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    # Explicit stack of (R, P, X) to avoid recursion limits on dense graphs.
    stack = [(0, (1 << len(nodes)) - 1, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                found.append(r)
                if len(found) > max_cliques:
                    raise CliqueLimitError(f"more than {max_cliques} maximal cliques")
            continue
        pivot = max(bits(p | x), key=lambda u: (nbr[u] & p).bit_count())
        for v in bits(p & ~nbr[pivot]):
            vb = 1 << v
            stack.append((r | vb, p & nbr[v], x & nbr[v]))
            p &= ~vb
            x |= vb

    cliques = [tuple(nodes[i] for i in bits(c)) for c in found]
    cliques.sort(key=lambda c: (-len(c), c))
    return CliqueCatalogue(g, tuple(cliques))


def subcliques(
    cat: CliqueCatalogue,
    min_size: int,
    visitor: Callable[[tuple[int, ...]], object],
    max_size: int | None = None,
    max_visits: int = DEFAULT_MAX_VISITS,
) -> int:
    """Call ``visitor`` once for every clique with ``min_size <= |C|`` (and
    ``|C| <= max_size`` if given).

    Every clique lies inside some maximal clique, so iterating subsets of the
    catalogue reaches all of them; a per-call store of sorted id tuples keeps
    shared subsets from being visited twice. Returns the number of visits.
    """
    if min_size < 2:
        raise ValueError("min_size must be at least 2")
    seen: set[tuple[int, ...]] = set()
    visits = 0
    for mc in cat.maximal_cliques:
        top = len(mc) if max_size is None else min(len(mc), max_size)
        for s in range(min_size, top + 1):
            for c in combinations(mc, s):
                if c in seen:
                    continue
                seen.add(c)
                visits += 1
                if visits > max_visits:
                    raise CliqueLimitError(f"more than {max_visits} sub-clique visits")
                visitor(c)
    return visits
