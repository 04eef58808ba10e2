"""Spreads and fans on Baire space.

A spread is an inhabited, prefix-closed decidable set of finite
sequences in which every node has a child; a fan additionally bounds
child labels per node.  Paths are sampling oracles: nothing infinite is
ever materialised, and every operation takes an explicit finite depth
or budget.

Membership predicates must be pure; under that assumption everything
here is referentially transparent and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import LevelCapExceeded, SearchCapExceeded
from .seqcode import EMPTY, FinSeq

DEFAULT_SEARCH_CAP = 1 << 16
DEFAULT_LEVEL_CAP = 1 << 18


@dataclass(frozen=True, kw_only=True)
class SpreadSpec:
    """Decidable tree with a child witness.

    ``member`` must accept the empty sequence and be closed under
    initial segments.  ``successor_hint``, when given, returns for any
    member node some label ``n`` with ``member(a + (n,))``; it bounds
    (but does not replace) the minimum-child search of :func:`repair_node`.
    """

    member: Callable[[FinSeq], bool]
    successor_hint: Optional[Callable[[FinSeq], int]] = None


@dataclass(frozen=True, kw_only=True)
class FanSpec(SpreadSpec):
    """Spread with an honest per-node bound on child labels."""

    branch_bound: Callable[[FinSeq], int]


class Path:
    """Infinite sequence presented as a sampling oracle.

    Finite-support paths ``a * 0^w`` carry their support explicitly so
    evaluation at them stays exact; consumers only ever inspect finite
    prefixes.
    """

    __slots__ = ("_sample", "support")

    def __init__(self, sample: Callable[[int], int], support: Optional[FinSeq] = None):
        self._sample = sample
        self.support = support

    @classmethod
    def finite(cls, entries) -> "Path":
        entries = tuple(entries)

        def sample(n: int, _e=entries) -> int:
            return _e[n] if n < len(_e) else 0

        return cls(sample, support=entries)

    @classmethod
    def zeros(cls) -> "Path":
        return cls.finite(())

    def sample(self, n: int) -> int:
        return self._sample(n)

    def prefix(self, n: int) -> FinSeq:
        return tuple(self._sample(i) for i in range(n))


def universal_spread() -> SpreadSpec:
    """The spread of all finite sequences."""
    return SpreadSpec(member=lambda a: True, successor_hint=lambda a: 0)


def kary_fan(k: int) -> FanSpec:
    """Fan of sequences over labels 0..k-1."""
    if k < 1:
        raise ValueError("fan must have at least one label")
    return FanSpec(
        member=lambda a: all(0 <= e < k for e in a),
        successor_hint=lambda a: 0,
        branch_bound=lambda a: k - 1,
    )


def binary_fan() -> FanSpec:
    return kary_fan(2)


def fan_from_bounds(default: int, overrides: Optional[dict[FinSeq, int]] = None) -> FanSpec:
    """Fan whose label bound at each node comes from a table.

    Membership is by construction: ``a`` belongs iff every entry obeys
    the bound at its parent, so the bound is honest for free.
    """
    table = dict(overrides or {})

    def bound(a: FinSeq) -> int:
        return table.get(a, default)

    def member(a: FinSeq) -> bool:
        return all(0 <= a[i] <= bound(a[:i]) for i in range(len(a)))

    return FanSpec(member=member, successor_hint=lambda a: 0, branch_bound=bound)


def in_spread(tree: SpreadSpec, path: Path, depth: int) -> bool:
    """Whether every prefix of the path up to ``depth`` is a member."""
    return all(tree.member(path.prefix(k)) for k in range(depth + 1))


def level(fan: FanSpec, n: int, *, cap: int = DEFAULT_LEVEL_CAP) -> list[FinSeq]:
    """All members of length ``n``, in lexicographic order."""
    nodes: list[FinSeq] = [EMPTY]
    for _ in range(n):
        nxt: list[FinSeq] = []
        for a in nodes:
            for m in range(fan.branch_bound(a) + 1):
                child = a + (m,)
                if fan.member(child):
                    nxt.append(child)
            if len(nxt) > cap:
                raise LevelCapExceeded(
                    f"level size exceeded cap {cap} while expanding depth {len(a) + 1}"
                )
        nodes = nxt
    return nodes


def _least_child(tree: SpreadSpec, node: FinSeq, search_cap: int) -> int:
    if isinstance(tree, FanSpec):
        for m in range(tree.branch_bound(node) + 1):
            if tree.member(node + (m,)):
                return m
        raise SearchCapExceeded(
            f"fan node {node} has no child within its branch bound (defective fan)"
        )
    limit = search_cap
    if tree.successor_hint is not None:
        limit = min(limit, tree.successor_hint(node))
    for m in range(limit + 1):
        if tree.member(node + (m,)):
            return m
    raise SearchCapExceeded(
        f"no child of {node} found with labels up to {limit} (defective spread or cap too small)"
    )


def repair_node(tree: SpreadSpec, a: FinSeq, *, search_cap: int = DEFAULT_SEARCH_CAP) -> FinSeq:
    """Canonical retraction of an arbitrary sequence into the tree.

    Keeps each entry whose addition stays inside the tree and otherwise
    substitutes the least label that does; the identity on members, and
    length-preserving.
    """
    g: FinSeq = EMPTY
    for entry in a:
        if tree.member(g + (entry,)):
            g = g + (entry,)
        else:
            g = g + (_least_child(tree, g, search_cap),)
    return g


def repair_path(tree: SpreadSpec, path: Path, *, search_cap: int = DEFAULT_SEARCH_CAP) -> Path:
    """Pointwise extension of :func:`repair_node` to paths.

    Lazily repaired: entry ``n`` agrees with ``repair_node`` applied to
    the length ``n + 1`` prefix, so prefixes of the result are exactly
    the repaired prefixes of the input.
    """
    repaired: list[int] = []

    def extend_to(n: int) -> None:
        while len(repaired) < n:
            g = tuple(repaired)
            entry = path.sample(len(repaired))
            if tree.member(g + (entry,)):
                repaired.append(entry)
            else:
                repaired.append(_least_child(tree, g, search_cap))

    def sample(n: int) -> int:
        extend_to(n + 1)
        return repaired[n]

    return Path(sample)
