"""Pointwise continuous functions on Baire space as neighborhood functions.

A function is represented by its finite commitments: a monotone partial
map from nodes to values, where the value at a path is the value of the
first committing prefix.  That makes "the value is determined by the
first N entries" an exactly decidable statement, which is how uniform
continuity near a fan is certified here.

Both directions of the function/bar correspondence are provided: a
function built from a c-set bar (given path evidence for barhood), and
the intersection bar of value agreement built from a function.  For
metric-valued functions, proximity of two values is decided through a
rational distance oracle at a precision derived from the target epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional

from .bars import (
    EXHAUSTED,
    HOLDS,
    BoundSearch,
    CSet,
    PathModulus,
    Pi01Bar,
    find_uniform_bound,
)
from .errors import BudgetExhausted, InstanceValidationError, NoCommitmentError
from .fan_embed import bar_through_image, image_closure, transfer_bound
from .seqcode import FinSeq, decode
from .trees import DEFAULT_LEVEL_CAP, FanSpec, Path, level


@dataclass(frozen=True, kw_only=True)
class NbhdFn:
    """Neighborhood function: monotone partial commitment map.

    ``commit(a)`` returns the value pinned for every path extending
    ``a``, or None when the first ``len(a)`` entries do not determine
    it yet.  ``depth_bound`` declares how deep evaluation may look for
    a commitment before giving up.
    """

    commit: Callable[[FinSeq], Optional[object]]
    depth_bound: int = 128


def constant_fn(value) -> NbhdFn:
    return NbhdFn(commit=lambda a: value, depth_bound=0)


def coordinate_fn(k: int) -> NbhdFn:
    """Value is entry ``k`` of the path."""
    return NbhdFn(commit=lambda a: a[k] if len(a) > k else None, depth_bound=k + 1)


def truncated_sum_fn(length: int) -> NbhdFn:
    """Value is the sum of the first ``length`` entries."""
    return NbhdFn(
        commit=lambda a: sum(a[:length]) if len(a) >= length else None,
        depth_bound=length,
    )


def dyadic_sum_fn(length: int) -> NbhdFn:
    """Rational-valued: sum of entry i times 2^-i over the first ``length`` entries."""

    def commit(a: FinSeq):
        if len(a) < length:
            return None
        return sum(Fraction(a[i], 1 << i) for i in range(length))

    return NbhdFn(commit=commit, depth_bound=length)


def half_power_fn() -> NbhdFn:
    """Rational-valued: 2 to the minus first entry."""
    return NbhdFn(
        commit=lambda a: Fraction(1, 1 << a[0]) if a else None, depth_bound=1
    )


def eval_at(f: NbhdFn, a: FinSeq):
    """Value at the finite-support path ``a * 0^w``.

    Scans prefixes (padding with zeros) until one commits; raises when
    nothing commits within the declared depth bound.
    """
    limit = max(f.depth_bound, len(a))
    for k in range(limit + 1):
        c = a[:k] if k <= len(a) else a + (0,) * (k - len(a))
        v = f.commit(c)
        if v is not None:
            return v
    raise NoCommitmentError(
        f"no commitment within depth {limit} along {a} * 0^w"
    )


def fn_from_cbar(
    cset: CSet,
    modulus: PathModulus,
    *,
    depth_bound: int = 4096,
    honesty_window: int = 4,
) -> NbhdFn:
    """Function whose value at a path is the last depth escaping the set.

    The value at a path is the maximum of 1 and the depths whose prefix
    is outside the underlying decidable set; the path modulus caps that
    search and is spot-checked on use (the set must hold from the
    reported depth onward), so a dishonest modulus is rejected instead
    of producing a wrong value.  Commitment happens at the modulus depth
    of the finite-support path through the node.
    """

    def commit(c: FinSeq):
        path = Path.finite(c)
        k = modulus.mu(path)
        if len(c) < k:
            return None
        for m in range(k, k + honesty_window + 1):
            if not cset.d(path.prefix(m)):
                raise InstanceValidationError(
                    f"path modulus reported depth {k} but the set fails at depth {m}",
                    witness=path.prefix(m),
                )
        escaped = [n for n in range(k + 1) if not cset.d(path.prefix(n))]
        return max(escaped + [1])

    return NbhdFn(commit=commit, depth_bound=depth_bound)


def bar_from_fn(f: NbhdFn) -> Pi01Bar:
    """Intersection bar of value agreement under coded extensions.

    Family member ``n`` accepts a node when the value at the node's
    zero-padded path equals the value after appending the extension
    coded by ``n``.  Monotone, and a bar of any fan the function is
    pointwise continuous on.
    """
    return Pi01Bar(lambda n, a: eval_at(f, a) == eval_at(f, a + decode(n)))


@dataclass(frozen=True, kw_only=True)
class UniformityCertificate:
    """Certified depth at which path prefixes pin function values.

    ``bound`` is verified: every fan node at that level has a committing
    prefix, which is the exact statement that the value is determined by
    the first ``bound`` entries for every extension.  ``search_bound``
    records the depth found by the bar uniformity search before
    commitment verification.
    """

    bound: int
    method: str = "fanSearch"
    epsilon: Optional[Fraction] = None
    search_bound: Optional[int] = None
    budget: Optional[int] = None


def _level_commits(fan: FanSpec, f: NbhdFn, n: int, level_cap: int) -> bool:
    return all(
        any(f.commit(a[:j]) is not None for j in range(len(a) + 1))
        for a in level(fan, n, cap=level_cap)
    )


def uniform_modulus_near_fan(
    fan: FanSpec,
    f: NbhdFn,
    *,
    max_depth: int = 32,
    budget: int = 128,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> UniformityCertificate:
    """Depth after which the value depends only on the prefix, near the fan.

    Runs the uniform-bound search on the agreement bar, then verifies by
    the commitment criterion, retrying deeper when the search bound is
    below the commitment depth.
    """
    search: BoundSearch = find_uniform_bound(
        fan, bar_from_fn(f), max_depth=max_depth, budget=budget, level_cap=level_cap
    )
    if search.status != HOLDS:
        raise BudgetExhausted(
            f"agreement bar not uniform within depth {max_depth} (budget {budget})"
        )
    n = search.bound
    while n <= max_depth:
        if _level_commits(fan, f, n, level_cap):
            return UniformityCertificate(
                bound=n, search_bound=search.bound, budget=budget
            )
        n += 1
    raise BudgetExhausted(
        f"commitment verification failed up to depth {max_depth}"
    )


@dataclass(frozen=True)
class ApproxPointOracle:
    """Rational distance oracle: dist_q(u, v, k) is within 2^-k of the true distance."""

    dist_q: Callable[[object, object, int], Fraction]


def exact_rational_oracle() -> ApproxPointOracle:
    """Oracle for values that are exact rationals (zero approximation error)."""
    return ApproxPointOracle(dist_q=lambda u, v, k: abs(Fraction(u) - Fraction(v)))


def _precision_for(eps: Fraction) -> int:
    """Least k with 2^-k below eps/24."""
    target = eps / 24
    k = 0
    while Fraction(1, 1 << k) >= target:
        k += 1
    return k


def proximity_bit(
    f: NbhdFn,
    oracle: ApproxPointOracle,
    a: FinSeq,
    b: FinSeq,
    eps: Fraction,
) -> int:
    """1 when the values at the two zero-padded paths are certified close.

    Tests the oracle distance against eps/4 at precision below eps/24:
    an answer of 1 guarantees true distance below eps/3, an answer of 0
    guarantees true distance above eps/6.  Any threshold strictly
    between those two would do; this split leaves slack on both sides.
    """
    k = _precision_for(eps)
    q = oracle.dist_q(eval_at(f, a), eval_at(f, b), k)
    return 1 if q < eps / 4 else 0


def uniform_modulus_near_fan_metric(
    fan: FanSpec,
    f: NbhdFn,
    oracle: ApproxPointOracle,
    eps: Fraction,
    *,
    max_depth: int = 16,
    pair_budget: int = 32,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> UniformityCertificate:
    """Metric analogue of :func:`uniform_modulus_near_fan`.

    Scans levels for the first depth where every node both commits on a
    prefix (pinning all subtree values to one representative, hence
    pairwise within any positive distance) and passes the budgeted
    pairwise proximity test over coded extensions.
    """
    eps = Fraction(eps)
    extensions = [decode(m) for m in range(pair_budget + 1)]
    search_bound = None
    for n in range(max_depth + 1):
        nodes = level(fan, n, cap=level_cap)
        pairs_ok = all(
            proximity_bit(f, oracle, a + b, a + c, eps)
            for a in nodes
            for b, c in combinations(extensions, 2)
        )
        if pairs_ok and search_bound is None:
            search_bound = n
        if pairs_ok and _level_commits(fan, f, n, level_cap):
            return UniformityCertificate(
                bound=n,
                epsilon=eps,
                search_bound=search_bound,
                budget=pair_budget,
            )
    raise BudgetExhausted(
        f"no certified uniform depth within {max_depth} at epsilon {eps}"
    )


def uniform_modulus_via_embedding(
    fan: FanSpec,
    f: NbhdFn,
    *,
    max_depth: int = 16,
    budget: int = 128,
    image_max_depth: Optional[int] = None,
    level_cap: int = DEFAULT_LEVEL_CAP,
) -> UniformityCertificate:
    """Modulus obtained through the binary image instead of directly.

    Lifts the agreement bar through the image decoding, searches for a
    uniform depth there, transfers the bound back to the source fan and
    then verifies commitment as usual.  The certificate is marked
    ``transferred``; its bound is sound but need not be minimal.
    """
    img = image_closure(fan)
    if image_max_depth is None:
        from .fan_embed import agreement_modulus

        image_max_depth = agreement_modulus(fan, max_depth, level_cap=level_cap)
    lifted = bar_through_image(img, bar_from_fn(f))
    search = find_uniform_bound(
        img.as_fan(), lifted, max_depth=image_max_depth, budget=budget, level_cap=level_cap
    )
    if search.status != HOLDS:
        raise BudgetExhausted(
            f"lifted agreement bar not uniform within image depth {image_max_depth}"
        )
    m = transfer_bound(img, search.bound, level_cap=level_cap)
    n = m
    while n <= max_depth:
        if _level_commits(fan, f, n, level_cap):
            return UniformityCertificate(
                bound=n, method="transferred", search_bound=m, budget=budget
            )
        n += 1
    raise BudgetExhausted(f"commitment verification failed up to depth {max_depth}")
