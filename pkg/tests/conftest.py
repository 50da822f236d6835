import itertools

import pytest

from twolevel.graph import Graph, GeneratorParams, generate_neighbourhood_graph


def node(x, y):
    """Id of the grid point (x, y) with x in 0..4 and y in {0.5, 1.5, 2.5}."""
    return 3 * x + int(y - 0.5)


GRID15_EDGES = [
    ((0, .5), (1, .5)), ((1, .5), (2, .5)),
    ((0, .5), (0, 1.5)),
    ((1, .5), (1, 1.5)), ((1, 1.5), (1, 2.5)),
    ((2, .5), (2, 1.5)), ((2, 1.5), (2, 2.5)),
    ((3, .5), (3, 1.5)), ((3, 1.5), (3, 2.5)),
    ((4, .5), (4, 1.5)), ((4, 1.5), (4, 2.5)),
    ((0, .5), (1, 1.5)), ((1, 1.5), (2, 2.5)), ((0, 1.5), (1, .5)), ((1, 1.5), (2, .5)),
    ((2, 1.5), (3, 2.5)), ((3, 1.5), (4, 2.5)), ((3, 2.5), (4, 1.5)),
    ((0, 1.5), (1, 1.5)), ((1, 1.5), (2, 1.5)), ((2, 1.5), (3, 1.5)), ((3, 1.5), (4, 1.5)),
    ((0, 2.5), (1, 2.5)), ((1, 2.5), (2, 2.5)), ((3, 2.5), (4, 2.5)),
]


def ids(points):
    return {node(*p) for p in points}


@pytest.fixture
def grid15():
    return Graph.from_edges(15, [(node(*a), node(*b)) for a, b in GRID15_EDGES])


def complete(n, offset=0):
    return Graph(range(offset, offset + n), itertools.combinations(range(offset, offset + n), 2))


def triangle():
    return complete(3)


def random_graphs(count, n_values, radii, seed0=0):
    """Deterministic stream of generated neighbourhood graphs."""
    out = []
    i = 0
    while len(out) < count:
        n = n_values[i % len(n_values)]
        r = radii[(i // len(n_values)) % len(radii)]
        out.append(generate_neighbourhood_graph(GeneratorParams(n, r, seed0 + i)))
        i += 1
    return out
