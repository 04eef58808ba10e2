import random

import pytest

from bartool.errors import LevelCapExceeded, SearchCapExceeded
from bartool.trees import (
    FanSpec,
    Path,
    SpreadSpec,
    binary_fan,
    fan_from_bounds,
    in_spread,
    kary_fan,
    level,
    repair_node,
    repair_path,
)
from conftest import enumerate_level, random_fan


def reference_repair(tree, a):
    """Direct transcription of the defining recursion, used as oracle."""
    if not a:
        return ()
    g = reference_repair(tree, a[:-1])
    if tree.member(g + (a[-1],)):
        return g + (a[-1],)
    m = 0
    while not tree.member(g + (m,)):
        m += 1
    return g + (m,)


def test_in_spread_examples():
    fan = binary_fan()
    assert in_spread(fan, Path.zeros(), 10)
    assert not in_spread(fan, Path.finite((2,)), 1)
    assert in_spread(fan, Path.finite((1, 1)), 2)


def test_level_examples():
    assert level(binary_fan(), 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert level(binary_fan(), 0) == [()]
    assert level(kary_fan(3), 1) == [(0,), (1,), (2,)]


def test_level_is_lexicographic_and_prefix_closed():
    fan = fan_from_bounds(2, {(0,): 1, (1, 1): 0})
    for n in range(1, 6):
        nodes = level(fan, n)
        assert nodes == sorted(nodes)
        parents = set(level(fan, n - 1))
        assert all(a[:-1] in parents for a in nodes)


def test_level_cap():
    with pytest.raises(LevelCapExceeded):
        level(kary_fan(3), 8, cap=100)


def test_repair_examples():
    fan = binary_fan()
    assert repair_node(fan, (0, 1)) == (0, 1)
    assert repair_node(fan, (2, 0)) == (0, 0)
    assert repair_node(fan, (1, 5, 1)) == (1, 0, 1)


def test_repair_laws_exhaustive_small_fans():
    fans = [
        binary_fan(),
        kary_fan(3),
        fan_from_bounds(1, {(0,): 2}),
        fan_from_bounds(2, {(): 1, (1, 1): 0}),
        fan_from_bounds(0, {}),
    ]
    for fan in fans:
        for n in range(7):
            for a in enumerate_level(fan, n):
                assert repair_node(fan, a) == a  # identity on members
    rng = random.Random(2024)
    for fan in fans:
        for _ in range(200):
            a = tuple(rng.randint(0, 6) for _ in range(rng.randint(0, 6)))
            g = repair_node(fan, a)
            assert fan.member(g)
            assert len(g) == len(a)
            assert g == reference_repair(fan, a)


def test_repair_random_fans_against_oracle():
    rng = random.Random(7)
    for _ in range(20):
        fan = random_fan(rng)
        for _ in range(50):
            a = tuple(rng.randint(0, 5) for _ in range(rng.randint(0, 5)))
            assert repair_node(fan, a) == reference_repair(fan, a)


def test_repair_search_cap_on_defective_spread():
    dead_end = SpreadSpec(member=lambda a: len(a) == 0, successor_hint=None)
    with pytest.raises(SearchCapExceeded):
        repair_node(dead_end, (0,), search_cap=16)


def test_repair_path_examples():
    fan = binary_fan()
    assert repair_path(fan, Path.zeros()).prefix(6) == (0,) * 6
    assert repair_path(fan, Path.finite((2,))).prefix(4) == (0, 0, 0, 0)
    assert repair_path(fan, Path.finite((1, 5))).prefix(4) == (1, 0, 0, 0)


def test_repair_path_prefix_consistency():
    # the content of the pointwise extension: prefixes of the repaired
    # path are exactly the repaired prefixes
    rng = random.Random(11)
    fans = [binary_fan(), kary_fan(3), fan_from_bounds(1, {(0,): 2})]
    for fan in fans:
        for _ in range(30):
            a = tuple(rng.randint(0, 4) for _ in range(rng.randint(0, 6)))
            path = Path.finite(a)
            repaired = repair_path(fan, path)
            for n in range(9):
                assert repaired.prefix(n) == repair_node(fan, path.prefix(n))


def test_repaired_path_lies_in_tree():
    fan = kary_fan(3)
    path = Path.finite((7, 1, 9, 0, 2))
    assert in_spread(fan, repair_path(fan, path), 10)


def test_path_support_is_exposed():
    assert Path.finite((1, 2)).support == (1, 2)
    assert Path(lambda n: 0).support is None


def test_fan_from_bounds_is_honest():
    fan = fan_from_bounds(1, {(0,): 3})
    assert fan.member((0, 3))
    assert not fan.member((1, 3))
    assert not fan.member((0, 4))
    assert fan.branch_bound((0,)) == 3
