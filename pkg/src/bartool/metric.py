"""Presentations of complete separable metric spaces and compact subsets.

A space enters only through a dense sequence of points together with a
rational oracle approximating pairwise distances to any requested
precision; a compact subset enters through finite families of net
indices, one 2^-k net per k.  No abstract real numbers exist anywhere:
all comparisons are exact rational comparisons with explicit error
terms.

From a presentation and a net system two trees are built: the spread of
index chains whose consecutive points are close at a geometric rate, and
the subfan of chains routed through the nets.  Paths of the spread
converge (rate 5 * 2^-k from position k), points of the compact subset
lift to fan paths, and a pointwise continuous function given through
local moduli at dense points yields a uniform continuity modulus near
the compact subset: at depth N every reachable net index pins the
function value, so points closer than 2^-(N+1) to the subset see values
within epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .continuity import NbhdFn, UniformityCertificate
from .errors import (
    BudgetExhausted,
    InstanceValidationError,
    NoNetCandidateError,
)
from .seqcode import FinSeq
from .trees import (
    DEFAULT_SEARCH_CAP,
    FanSpec,
    Path,
    SpreadSpec,
    repair_node,
    repair_path,
)

# d(p at position k, limit point) <= 5 * 2^-k along any chain; see cauchy_radius
_CHAIN_TAIL_FACTOR = 5


@dataclass(frozen=True, kw_only=True)
class MetricPresentation:
    """Dense sequence plus rational distance oracle.

    ``alpha_q(i, j, k)`` must be within 2^-k of the true distance
    between dense points i and j.
    """

    dense_point: Callable[[int], object]
    alpha_q: Callable[[int, int, int], Fraction]


@dataclass(kw_only=True)
class CompactNetSystem:
    """Finite 2^-k net index families for a compact subset.

    ``net_indices(k)`` lists dense-point indices forming a 2^-k net:
    every point of the subset is within 2^-k of a listed point and every
    listed point is within 2^-k of the subset.  Lists are cached; they
    must be deterministic functions of k.
    """

    net_indices: Callable[[int], Sequence[int]]
    _lists: dict = field(default_factory=dict, repr=False, compare=False)
    _sets: dict = field(default_factory=dict, repr=False, compare=False)

    def net_list(self, k: int) -> Sequence[int]:
        if k not in self._lists:
            self._lists[k] = list(self.net_indices(k))
        return self._lists[k]

    def net_set(self, k: int):
        if k not in self._sets:
            self._sets[k] = frozenset(self.net_list(k))
        return self._sets[k]


def _pair_bound(k: int) -> Fraction:
    # chain constraint at position k: distance below 2^(-k+1)
    return Fraction(2, 1 << k)


def cauchy_radius(k: int) -> Fraction:
    """Bound on the distance from chain position k to the chain's limit.

    Consecutive chain points are within 2^(-k+1) + 2^-(k+1) of each
    other, and summing the tail gives 5 * 2^-k.
    """
    return Fraction(_CHAIN_TAIL_FACTOR, 1 << k)


def validate_presentation(
    x: MetricPresentation, *, sample_indices: Sequence[int] = range(8), precision: int = 8
) -> None:
    """Spot-check self-distance and approximate symmetry of the oracle."""
    tol = Fraction(1, 1 << precision)
    for i in sample_indices:
        if x.alpha_q(i, i, precision) >= tol:
            raise InstanceValidationError(
                f"self distance of dense point {i} not below 2^-{precision}", witness=i
            )
        for j in sample_indices:
            gap = abs(x.alpha_q(i, j, precision) - x.alpha_q(j, i, precision))
            if gap >= 2 * tol:
                raise InstanceValidationError(
                    f"distance oracle asymmetric beyond tolerance at ({i}, {j})",
                    witness=(i, j),
                )


def validate_nets(x: MetricPresentation, nets: CompactNetSystem, *, depth: int = 6) -> None:
    """Check the chaining property: every net index has a close successor.

    For every k up to ``depth`` and index i in net k+1, some j in net
    k+2 must be within the chain constraint at position k+1; a violation
    is reported with the offending index.
    """
    for k in range(depth + 1):
        if not nets.net_list(k + 1):
            raise InstanceValidationError(f"net family {k + 1} is empty", witness=k + 1)
        bound = _pair_bound(k)
        for i in nets.net_list(k + 1):
            if not any(
                x.alpha_q(i, j, k + 1) < bound for j in nets.net_list(k + 2)
            ):
                raise InstanceValidationError(
                    f"net index {i} at depth {k + 1} has no chained successor",
                    witness=(k + 1, i),
                )


def build_spreads(
    x: MetricPresentation, nets: CompactNetSystem
) -> tuple[SpreadSpec, FanSpec]:
    """Chain spread and net subfan of a presented space and compact subset.

    A node belongs to the spread when each consecutive index pair (at
    positions k, k+1) is within 2^(-k+1) by the oracle at precision
    k+1; the fan additionally routes position k through net family k+1
    and bounds labels by the largest index there.
    """

    def member_t0(a: FinSeq) -> bool:
        return all(
            x.alpha_q(a[k], a[k + 1], k + 1) < _pair_bound(k)
            for k in range(len(a) - 1)
        )

    def hint_t0(a: FinSeq) -> int:
        # self-chaining: the oracle puts a point within 2^-(k+1) of itself
        return a[-1] if a else 0

    t0 = SpreadSpec(member=member_t0, successor_hint=hint_t0)

    def member_t1(a: FinSeq) -> bool:
        return member_t0(a) and all(
            a[k] in nets.net_set(k + 1) for k in range(len(a))
        )

    def hint_t1(a: FinSeq) -> int:
        k = len(a)
        if k == 0:
            return nets.net_list(1)[0]
        bound = _pair_bound(k - 1)
        for j in nets.net_list(k + 1):
            if x.alpha_q(a[-1], j, k) < bound:
                return j
        raise InstanceValidationError(
            f"net chaining fails below node {a}", witness=a
        )

    t1 = FanSpec(
        member=member_t1,
        successor_hint=hint_t1,
        branch_bound=lambda a: max(nets.net_list(len(a) + 1)),
    )
    return t0, t1


DistOracle = Callable[[int, int], Fraction]
"""Distance from an abstract point to dense point i, within 2^-prec: (i, prec) -> q."""


def point_to_path(
    x: MetricPresentation,
    nets: CompactNetSystem,
    dist: DistOracle,
    *,
    candidate_hint: Optional[Callable[[int], int]] = None,
) -> Path:
    """Net-routed chain converging to a point of the compact subset.

    Position k is an index from net family k+1 certified to be strictly
    within 2^-(k+1) of the point; the certification margin makes the
    resulting chain a fan path.  ``candidate_hint(k)``, when given,
    names a dense index to try first (it must still certify and belong
    to the net).  Fails when no net index certifies, i.e. the point is
    too far from the subset for the supplied nets.
    """
    picked: list[int] = []

    def pick(k: int) -> int:
        target = Fraction(1, 1 << (k + 1))
        prec = k + 4
        tol = Fraction(1, 1 << prec)
        candidates = []
        if candidate_hint is not None:
            hinted = candidate_hint(k)
            if hinted in nets.net_set(k + 1):
                candidates.append(hinted)
        for i in candidates + list(nets.net_list(k + 1)):
            if dist(i, prec) + tol <= target:
                return i
        raise NoNetCandidateError(
            f"no net index at depth {k} certified within 2^-{k + 1} of the point"
        )

    def sample(k: int) -> int:
        while len(picked) <= k:
            picked.append(pick(len(picked)))
        return picked[k]

    return Path(sample)


def chain_point_oracle(x: MetricPresentation, chain: Path) -> DistOracle:
    """Distance oracle for the limit point of a spread chain.

    Approximates d(limit, dense point i) by the oracle distance from a
    chain position deep enough that the tail radius fits the requested
    precision.
    """

    def dist(i: int, prec: int) -> Fraction:
        m = prec + 4  # tail 5 * 2^-m below 2^-(prec+1)
        return x.alpha_q(chain.sample(m), i, prec + 1)

    return dist


@dataclass(frozen=True)
class PointApprox:
    """Dense-point approximation of a path's limit with a certified radius."""

    index: int
    radius: Fraction


def path_to_point(
    x: MetricPresentation,
    t0: SpreadSpec,
    path: Path,
    k: int,
    *,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> PointApprox:
    """Approximant of the point named by an arbitrary path.

    The path is first repaired into the chain spread (identity when it
    already lies there), then position k approximates the limit within
    the Cauchy tail radius 5 * 2^-k.
    """
    repaired = repair_path(t0, path, search_cap=search_cap)
    return PointApprox(index=repaired.sample(k), radius=cauchy_radius(k))


@dataclass(frozen=True, kw_only=True)
class PointMap:
    """Function on the presented space, given through dense-point data.

    ``value(i)`` is the exact codomain handle at dense point i;
    ``modulus_radius(i, eta)`` returns a radius r such that the image of
    the open r-ball at dense point i stays within eta of ``value(i)``
    (the local continuity modulus, supplied as an oracle).  ``value_at``
    optionally evaluates the function at raw domain values, for
    independent verification only.  ``constant`` marks functions whose
    value does not depend on the point at all.
    """

    value: Callable[[int], Fraction]
    modulus_radius: Callable[[int, Fraction], Fraction]
    value_at: Optional[Callable[[Fraction], Fraction]] = None
    constant: Optional[Fraction] = None


@dataclass(frozen=True)
class ComposedPathFn:
    """A point function composed over chain paths, with commitment data.

    ``nbhd`` evaluates the composite on Baire space: a node commits once
    its repaired chain pins the limit inside a ball on which the local
    modulus keeps the image within ``eta`` of the dense-point value.
    ``commits_at`` answers the same question for a bare (index, depth)
    pair, which is what the compact pipeline scans net families with.
    """

    x: MetricPresentation
    t0: SpreadSpec
    fn: PointMap
    eta: Fraction
    nbhd: NbhdFn

    def commits_at(self, index: int, depth: int) -> bool:
        if self.fn.constant is not None:
            return True
        if depth < 1:
            return False
        return self.fn.modulus_radius(index, self.eta) >= cauchy_radius(depth - 1)


def compose_on_paths(
    x: MetricPresentation,
    t0: SpreadSpec,
    fn: PointMap,
    eta: Fraction,
    *,
    depth_bound: int = 64,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> ComposedPathFn:
    """Present a point function as a neighborhood function on paths.

    The committed handle at a node is the function value at the dense
    point indexed by the repaired node's last entry; every path through
    the node denotes a limit within the commitment ball, so its true
    image is within ``eta`` of the handle.
    """

    def commit(c: FinSeq):
        if fn.constant is not None:
            return fn.constant
        if not c:
            return None
        g = repair_node(t0, c, search_cap=search_cap)
        i = g[-1]
        if fn.modulus_radius(i, eta) >= cauchy_radius(len(c) - 1):
            return fn.value(i)
        return None

    nbhd = NbhdFn(commit=commit, depth_bound=depth_bound)
    return ComposedPathFn(x=x, t0=t0, fn=fn, eta=eta, nbhd=nbhd)


@dataclass(frozen=True, kw_only=True)
class CompactModulus:
    """Uniform continuity modulus near a compact subset.

    Guarantee: for x in the subset and any u with d(x, u) < delta, the
    function values differ by less than the certificate's epsilon.
    """

    delta: Fraction
    certificate: UniformityCertificate
    eta: Fraction
    net_size: int


def uniform_modulus_near_compact(
    x: MetricPresentation,
    nets: CompactNetSystem,
    fn: PointMap,
    eps: Fraction,
    *,
    max_depth: int = 24,
    t0: Optional[SpreadSpec] = None,
) -> CompactModulus:
    """Extract delta from epsilon for a function near a compact subset.

    Builds the composite path function with commitment slack eta = eps/6
    and scans net families for the first depth N at which every net
    index commits; every fan node of length N then ends in such an
    index, so all values over its subtree sit within eta of one handle,
    and two points within delta = 2^-(N+1) of each other (one in the
    subset) ride chains agreeing to depth N.  The chain values differ by
    at most 2 * eta = eps/3 < eps.

    The scan over net families certifies the same statement a full fan
    level scan would, without enumerating the (combinatorially large)
    levels themselves.
    """
    eps = Fraction(eps)
    if t0 is None:
        t0, _ = build_spreads(x, nets)
    eta = eps / 6
    composed = compose_on_paths(x, t0, fn, eta)
    if fn.constant is not None:
        bound = 0
        net_size = 0
    else:
        bound = None
        for n in range(1, max_depth + 1):
            if all(composed.commits_at(i, n) for i in nets.net_list(n)):
                bound = n
                break
        if bound is None:
            raise BudgetExhausted(
                f"no commitment depth within {max_depth} at epsilon {eps}"
            )
        net_size = len(nets.net_list(bound))
    cert = UniformityCertificate(bound=bound, epsilon=eps, search_bound=bound)
    return CompactModulus(
        delta=Fraction(1, 1 << (bound + 1)),
        certificate=cert,
        eta=eta,
        net_size=net_size,
    )
