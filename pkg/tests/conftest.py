"""Shared test helpers: small fan generators and brute-force oracles.

The oracles here are deliberately independent of the library internals:
they recompute everything from definitions (prefix searches, exhaustive
enumeration) so library results can be checked against them.
"""

import random

from bartool.trees import FanSpec, fan_from_bounds, kary_fan


def enumerate_level(fan: FanSpec, n: int):
    """Definitional level enumeration, independent of bartool.trees.level."""
    nodes = [()]
    for _ in range(n):
        nodes = [
            a + (m,)
            for a in nodes
            for m in range(fan.branch_bound(a) + 1)
            if fan.member(a + (m,))
        ]
    return nodes


def least_uniform_depth(fan: FanSpec, holds, max_depth: int):
    """Brute-force least N with: every level-N node has a prefix in the bar.

    This is the definitional existential prefix search, not the monotone
    level reduction.
    """
    for n in range(max_depth + 1):
        if all(
            any(holds(a[:k]) for k in range(n + 1)) for a in enumerate_level(fan, n)
        ):
            return n
    return None


def random_fan(rng: random.Random) -> FanSpec:
    """Small random fan: either k-ary or a pruned bounds-table fan."""
    if rng.random() < 0.4:
        return kary_fan(rng.randint(2, 3))
    default = rng.randint(1, 2)
    overrides = {}
    frontier = [()]
    for _ in range(rng.randint(0, 10)):
        node = rng.choice(frontier)
        child = node + (rng.randint(0, default),)
        overrides[child] = rng.randint(0, 2)
        frontier.append(child)
    # keep override keys member nodes: drop any that break their own chain
    fan = fan_from_bounds(default, overrides)
    overrides = {node: b for node, b in overrides.items() if fan.member(node)}
    return fan_from_bounds(default, overrides)


def random_monotone_holds(rng: random.Random, fan: FanSpec, depth: int):
    """Random monotone bar predicate: prefix closure of seeds, depth fallback.

    The fallback guarantees barhood (every path is caught by ``depth``)
    and monotonicity is by construction.
    """
    seeds = set()
    for _ in range(rng.randint(0, 6)):
        n = rng.randint(0, depth)
        node = ()
        for _ in range(n):
            bound = fan.branch_bound(node)
            node = node + (rng.randint(0, bound),)
            if not fan.member(node):
                node = node[:-1]
                break
        seeds.add(node)

    def holds(a):
        return len(a) >= depth or any(a[: len(s)] == s for s in seeds)

    return holds
