"""Bar representations on trees and the translations between them.

Three representations are supported:

* ``DecBar``     -- a decidable node predicate;
* ``Pi01Bar``    -- a countable intersection of decidable families,
                    membership checkable only up to an index budget;
* ``CSet``       -- a decidable set ``d`` inducing the node predicate
                    "every extension lands in d", checkable only up to
                    a budget on the code of the extension.

Membership of a c-set node is a universally quantified statement, so
every check here takes an explicit budget and a "holds" answer for the
budgeted kinds means "no counterexample within the budget".  Refutations
are always definitive and carry a concrete witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import KindNotSupportedError
from .seqcode import FinSeq, decode
from .trees import (
    DEFAULT_LEVEL_CAP,
    DEFAULT_SEARCH_CAP,
    FanSpec,
    Path,
    SpreadSpec,
    level,
    repair_node,
)

HOLDS = "holds"
REFUTED = "refuted"
EXHAUSTED = "exhausted"

DEFAULT_BUDGET = 128


@dataclass(frozen=True)
class DecBar:
    holds: Callable[[FinSeq], bool]


@dataclass(frozen=True)
class Pi01Bar:
    """Family indexed by a natural; a node belongs when every index accepts it."""

    family: Callable[[int, FinSeq], bool]


@dataclass(frozen=True)
class CSet:
    """Decidable set whose induced node predicate is "all extensions are in d".

    The induced predicate is monotone by construction.
    """

    d: Callable[[FinSeq], bool]


BarRep = Union[DecBar, Pi01Bar, CSet]


@dataclass(frozen=True)
class PathModulus:
    """Evidence that a c-set bars: maps a path to a depth where it holds."""

    mu: Callable[[Path], int]


@dataclass(frozen=True)
class UniformityVerdict:
    status: str
    witness_node: Optional[FinSeq] = None
    witness_detail: object = None


@dataclass(frozen=True)
class BoundSearch:
    """Result of a least-uniform-depth search.

    ``refutation`` certifies minimality: the verdict one level below the
    returned bound (absent when the bound is 0).
    """

    status: str
    bound: Optional[int] = None
    refutation: Optional[UniformityVerdict] = None


def holds_at(rep: BarRep, a: FinSeq, *, budget: int = DEFAULT_BUDGET):
    """Budgeted node membership; returns (verdict, refuting witness)."""
    if isinstance(rep, DecBar):
        return rep.holds(a), None
    if isinstance(rep, Pi01Bar):
        for n in range(budget + 1):
            if not rep.family(n, a):
                return False, n
        return True, None
    if isinstance(rep, CSet):
        for m in range(budget + 1):
            b = decode(m)
            if not rep.d(a + b):
                return False, b
        return True, None
    raise KindNotSupportedError(f"unknown bar representation {type(rep).__name__}")


def is_uniform_at(
    fan: FanSpec,
    rep: BarRep,
    n: int,
    *,
    budget: int = DEFAULT_BUDGET,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> UniformityVerdict:
    """Whether the bar is met by depth ``n`` on every path of the fan.

    For a monotone representation this reduces to membership at every
    node of level ``n``; the caller asserts monotonicity (automatic for
    c-sets).  Decidable bars are decided exactly; the budgeted kinds are
    checked through their full budget, and a refutation returns the
    failing node together with the failing index or extension.
    """
    for a in level(fan, n, cap=level_cap):
        ok, detail = holds_at(rep, a, budget=budget)
        if not ok:
            return UniformityVerdict(REFUTED, witness_node=a, witness_detail=detail)
    return UniformityVerdict(HOLDS)


def find_uniform_bound(
    fan: FanSpec,
    rep: BarRep,
    *,
    max_depth: int,
    budget: int = DEFAULT_BUDGET,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> BoundSearch:
    """Least depth at which the bar is uniform, with a minimality witness."""
    previous: Optional[UniformityVerdict] = None
    for n in range(max_depth + 1):
        verdict = is_uniform_at(fan, rep, n, budget=budget, level_cap=level_cap)
        if verdict.status == HOLDS:
            return BoundSearch(HOLDS, bound=n, refutation=previous)
        previous = verdict
    return BoundSearch(EXHAUSTED, refutation=previous)


def pullback_bar(
    tree: SpreadSpec, rep: BarRep, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> BarRep:
    """Compose a bar with the canonical retraction into the tree.

    Produces a bar of the universal spread of the same kind.  C-sets are
    rejected: composing the underlying decidable set with the retraction
    does not yield a c-set in general.
    """
    if isinstance(rep, DecBar):
        return DecBar(lambda a: rep.holds(repair_node(tree, a, search_cap=search_cap)))
    if isinstance(rep, Pi01Bar):
        return Pi01Bar(
            lambda n, a: rep.family(n, repair_node(tree, a, search_cap=search_cap))
        )
    raise KindNotSupportedError("pullback of a c-set along the retraction is not supported")


def restrict_to(fan: SpreadSpec, rep: BarRep) -> BarRep:
    """Intersect a bar of the universal spread with the tree.

    Kind-preserving for decidable and intersection bars.  For a c-set
    the intersection is provably not a c-set again (the universal
    quantifier cannot see where the extension left the tree), so the
    kind is rejected rather than silently changed.
    """
    if isinstance(rep, DecBar):
        return DecBar(lambda a: rep.holds(a) and fan.member(a))
    if isinstance(rep, Pi01Bar):
        return Pi01Bar(lambda n, a: rep.family(n, a) and fan.member(a))
    raise KindNotSupportedError("restriction of a c-set is not itself a c-set")


def pi01_to_cbar(
    tree: SpreadSpec, rep: Pi01Bar, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> CSet:
    """C-set refinement of a monotone intersection bar on the tree.

    The decidable set accepts the empty sequence and accepts ``a + (n,)``
    exactly when family member ``n`` accepts the repaired ``a``.  The
    induced predicate is contained in the original on tree nodes, and a
    uniform depth ``N`` for the original transfers to ``N + 1``.
    """
    if not isinstance(rep, Pi01Bar):
        raise KindNotSupportedError("only intersection bars convert to c-sets")

    def d(c: FinSeq) -> bool:
        if not c:
            return True
        return rep.family(c[-1], repair_node(tree, c[:-1], search_cap=search_cap))

    return CSet(d)


def cbar_to_pi01(rep: CSet) -> Pi01Bar:
    """Present a c-set as an intersection bar via the sequence coding.

    Exact: the induced predicates agree pointwise because the coding is
    bijective (index n quantifies the extension decode(n)).
    """
    return Pi01Bar(lambda n, a: rep.d(a + decode(n)))


def monotonize(rep: DecBar) -> DecBar:
    """Close a decidable bar under extensions: holds when any prefix held."""
    return DecBar(lambda a: any(rep.holds(a[:n]) for n in range(len(a) + 1)))
