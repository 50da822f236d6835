import itertools
from fractions import Fraction
from math import comb

import pytest

from twolevel.cliques import maximal_cliques, subcliques
from twolevel.cuts import (
    Cut,
    CutPool,
    EdgePoint,
    Family,
    is_dominated,
    purge_slack,
    separate,
    y_clique_rhs,
    yz_clique_rhs_constant,
    z_clique_rhs,
)
from twolevel.model import Instance

from conftest import complete, random_graphs


def min_conflicts_brute(size, k, kprime):
    """Minimum of y(C), z(C) and y(C) - k' z(C) over colourings of K_size."""
    best_y = best_z = best_diff = None
    for col in itertools.product(range(k * kprime), repeat=size):
        y = z = 0
        for a, b in itertools.combinations(col, 2):
            if a % k == b % k:
                y += 1
                z += a == b
        diff = y - kprime * z
        best_y = y if best_y is None else min(best_y, y)
        best_z = z if best_z is None else min(best_z, z)
        best_diff = diff if best_diff is None else max(best_diff, diff)
    return best_y, best_z, best_diff


def test_rhs_examples():
    assert y_clique_rhs(3, 2) == 1
    assert y_clique_rhs(4, 3) == 1
    assert y_clique_rhs(5, 2) == 4
    assert z_clique_rhs(5, 2, 2) == 1
    assert yz_clique_rhs_constant(3, 2) == 1
    for bad in (lambda: y_clique_rhs(2, 2), lambda: z_clique_rhs(4, 2, 2), lambda: yz_clique_rhs_constant(2, 2)):
        with pytest.raises(ValueError):
            bad()


def test_rhs_are_tight_minima():
    # The right-hand sides equal the brute-force extremes on small cliques.
    for k, kp in [(2, 2), (2, 3), (3, 2)]:
        for s in range(2, 7):
            by, bz, bd = min_conflicts_brute(s, k, kp)
            if s > k:
                assert y_clique_rhs(s, k) == by
            if s > k * kp:
                assert z_clique_rhs(s, k, kp) == bz
            if s > kp:
                assert yz_clique_rhs_constant(s, kp) == bd


def test_dominance_filters():
    assert is_dominated(Family.Y, 4, 2, 2) and not is_dominated(Family.Y, 5, 2, 2)
    assert is_dominated(Family.YZ, 6, 3, 2) and not is_dominated(Family.YZ, 5, 3, 2)
    # kk' = 4: residues 1 and 3 dominated, 2 kept, 0 dominated.
    assert [is_dominated(Family.Z, s, 2, 2) for s in (5, 6, 7, 8)] == [True, False, True, True]


def test_cut_rows():
    cut = Cut.make("yz-clique", (2, 0, 1), 2, 2)
    assert cut.clique == (0, 1, 2) and cut.rhs == -1.0
    y_index = {(0, 1): 0, (0, 2): 1, (1, 2): 2}
    z_index = {e: i + 3 for e, i in y_index.items()}
    assert cut.row(y_index, z_index, 2) == {0: -1.0, 1: -1.0, 2: -1.0, 3: 2.0, 4: 2.0, 5: 2.0}
    assert Cut.make(Family.Y, (0, 1, 2), 2, 2).row(y_index, None, 2) == {0: 1.0, 1: 1.0, 2: 1.0}


def test_pool_dedup_and_purge():
    a = Cut.make(Family.Y, (0, 1, 2), 2, 2)
    b = Cut.make(Family.Y, (0, 1, 2), 2, 2)
    pool = CutPool([a])
    assert pool.add([b]) == [] and len(pool) == 1
    c = Cut.make(Family.Y, (1, 2, 3), 2, 2)
    pool.add([c])
    y = {(0, 1): 0.5, (0, 2): 0.5, (1, 2): 0.0, (1, 3): 1.0, (2, 3): 1.0}
    kept = purge_slack(pool, EdgePoint(y), 2, 1e-6)
    assert list(kept) == [a]
    assert pool.slack_of(c) == pytest.approx(1.0)
    assert '"slack"' in kept.to_json()


def brute_violations(point, families, g, inst, tol):
    out = {}
    cliques = set()
    subcliques(maximal_cliques(g), 2, cliques.add)
    for c in cliques:
        for f in families:
            try:
                cut = Cut.make(f, c, inst.k, inst.kprime)
            except ValueError:
                continue
            if is_dominated(f, len(c), inst.k, inst.kprime):
                continue
            viol = cut.rhs - cut.lhs(point.y, point.z, inst.kprime)
            if viol > tol:
                out[cut.key] = viol
    return out


def test_separation_is_exact():
    # Every violated non-dominated clique inequality is found, none twice.
    for i, g in enumerate(random_graphs(12, [10, 14], [0.3, 0.45])):
        for k in (2, 3):
            inst = Instance(g, k, 2)
            y = {e: ((e[0] * 31 + e[1] * 17 + i) % 7) / 10 for e in g.edges}
            z = {e: ((e[0] * 13 + e[1] * 5 + i) % 5) / 10 for e in g.edges}
            point = EdgePoint(y, z)
            fams = [Family.Y, Family.YZ, Family.Z]
            found = separate(point, fams, maximal_cliques(g), inst, max_cuts=10**6)
            expect = brute_violations(point, fams, g, inst, 1e-6)
            assert len(found) == len({c.key for c in found})
            assert {c.key for c in found} == set(expect)
            viols = [c.rhs - c.lhs(y, z, 2) for c in found]
            assert all(a >= b - 1e-9 for a, b in zip(viols, viols[1:]))


def test_separation_truncates_to_most_violated():
    g = complete(6)
    inst = Instance(g, 2, 2)
    y = {e: 0.0 for e in g.edges}
    allc = separate(EdgePoint(y), [Family.Y], maximal_cliques(g), inst, max_cuts=1000)
    top = separate(EdgePoint(y), [Family.Y], maximal_cliques(g), inst, max_cuts=3)
    assert top == allc[:3]
    # Size-5 cliques have RHS 4, the largest violation at y = 0.
    assert all(len(c.clique) == 5 for c in top)


def test_dominance_filter_off_adds_sizes():
    g = complete(4)
    inst = Instance(g, 2, 2)
    y = {e: 0.0 for e in g.edges}
    on = separate(EdgePoint(y), [Family.Y], maximal_cliques(g), inst, 100)
    off = separate(EdgePoint(y), [Family.Y], maximal_cliques(g), inst, 100, dominance_filter=False)
    assert {len(c.clique) for c in on} == {3}
    assert {len(c.clique) for c in off} == {3, 4}


def test_z_separation_needs_z_values():
    g = complete(6)
    with pytest.raises(ValueError):
        separate(EdgePoint({e: 0.0 for e in g.edges}), [Family.Z], maximal_cliques(g), Instance(g, 2, 2))


def test_rhs_spec_values():
    assert y_clique_rhs(6, 3) == 3
    assert z_clique_rhs(9, 2, 2) == 6
    assert z_clique_rhs(8, 2, 2) == 4
    assert yz_clique_rhs_constant(4, 2) == 2
    assert yz_clique_rhs_constant(5, 3) == 4


def test_dominance_identity_spot_value():
    # k = k' = 2, T = 1, |C| = 5: (4 + (-2)) / 2 = 1.
    assert y_clique_rhs(5, 2) == 4 and -yz_clique_rhs_constant(5, 2) == -2
    assert (4 + -2) / 2 == z_clique_rhs(5, 2, 2) == 1


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("kp", [2, 3])
@pytest.mark.parametrize("T", [1, 2, 3])
def test_dominance_identities(k, kp, T):
    K = k * kp
    for s in (T * K + 1, T * K + K - 1):
        combined = Fraction(y_clique_rhs(s, k) - yz_clique_rhs_constant(s, kp), kp)
        assert combined == z_clique_rhs(s, k, kp)
    # Closed forms, written out independently of the library.
    s = T * K + 1
    assert y_clique_rhs(s, k) == comb(kp * T + 1, 2) + comb(kp * T, 2) * (k - 1)
    assert -yz_clique_rhs_constant(s, kp) == -T * k * comb(kp, 2)
    assert z_clique_rhs(s, k, kp) == comb(T + 1, 2) + comb(T, 2) * (K - 1)
    s = T * K + K - 1
    assert y_clique_rhs(s, k) == comb(T * kp + kp, 2) * (k - 1) + comb(T * kp + kp - 1, 2)
    assert -yz_clique_rhs_constant(s, kp) == -(T * k + k - 1) * comb(kp, 2) - comb(kp - 1, 2)
    assert z_clique_rhs(s, k, kp) == comb(T + 1, 2) * (K - 1) + comb(T, 2)


def test_separation_examples():
    g = complete(4)
    inst = Instance(g, 3, 2)
    (cut,) = separate(EdgePoint({e: 0.0 for e in g.edges}), [Family.Y], maximal_cliques(g), inst)
    assert cut.clique == (0, 1, 2, 3) and cut.rhs == 1
    g5 = complete(5)
    found = separate(EdgePoint({e: 0.3 for e in g5.edges}), [Family.Y], maximal_cliques(g5), Instance(g5, 2, 2))
    assert found[0].clique == (0, 1, 2, 3, 4)
    assert found[0].rhs - found[0].lhs({e: 0.3 for e in g5.edges}, None, 2) == pytest.approx(1.0)
    assert separate(EdgePoint({e: 1.0 for e in g5.edges}), [Family.Y], maximal_cliques(g5), Instance(g5, 2, 2)) == []
