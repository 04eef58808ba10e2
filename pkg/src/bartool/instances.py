"""Builtin instance families, a small predicate DSL, and JSON loading.

The DSL is a closed first-order language over one finite sequence:
terms are ``len``, ``sum``, ``maxEntry``, ``entry(i)`` and integer
literals; atoms are comparisons, negations and parenthesised groups;
``and`` binds tighter than ``or``.  Out-of-range ``entry(i)`` evaluates
to 0, mirroring the zero-padding convention used for path evaluation
(and likewise ``maxEntry`` of the empty sequence is 0).  Predicates are
data, not code, so instance files stay deterministic and portable.

Instance files are JSON objects declaring named fans, bars, functions
and metric instances; see :func:`load_instance`.  Bundled metric
instances cover the real line with an enumerated dyadic dense sequence
and exact rational distances, and Cantor space with the prefix metric.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Callable, Optional, Union

from .bars import BarRep, CSet, DecBar, Pi01Bar
from .continuity import (
    NbhdFn,
    constant_fn,
    coordinate_fn,
    dyadic_sum_fn,
    half_power_fn,
    truncated_sum_fn,
)
from .errors import InstanceValidationError
from .metric import (
    CompactNetSystem,
    MetricPresentation,
    PointMap,
    build_spreads,
    validate_nets,
    validate_presentation,
)
from .seqcode import FinSeq, cantor_pair, cantor_unpair, decode, encode, from_json
from .trees import FanSpec, SpreadSpec, binary_fan, fan_from_bounds, kary_fan, level


# ---------------------------------------------------------------------------
# predicate DSL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Len:
    pass


@dataclass(frozen=True)
class SumEntries:
    pass


@dataclass(frozen=True)
class MaxEntry:
    pass


@dataclass(frozen=True)
class Entry:
    index: int


Term = Union[Num, Len, SumEntries, MaxEntry, Entry]

_CMP_OPS = ("<=", ">=", "!=", "<", ">", "=")


@dataclass(frozen=True)
class Compare:
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    item: "PredicateExpr"


@dataclass(frozen=True)
class And:
    left: "PredicateExpr"
    right: "PredicateExpr"


@dataclass(frozen=True)
class Or:
    left: "PredicateExpr"
    right: "PredicateExpr"


PredicateExpr = Union[Compare, Not, And, Or]


class PredicateSyntaxError(InstanceValidationError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<op><=|>=|!=|<|>|=)|(?P<lpar>\()|(?P<rpar>\)))"
)


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(src[pos:]) - len(stripped)) + 1
            raise PredicateSyntaxError(f"unexpected character {stripped[0]!r}", 1, col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(("eof", "", len(src) + 1))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        _, _, col = self.peek()
        raise PredicateSyntaxError(message, 1, col)

    def expect(self, kind: str, what: str):
        tok = self.take()
        if tok[0] != kind:
            raise PredicateSyntaxError(f"expected {what}", 1, tok[2])
        return tok

    def parse(self) -> PredicateExpr:
        expr = self.or_chain()
        if self.peek()[0] != "eof":
            self.fail("trailing input")
        return expr

    def or_chain(self) -> PredicateExpr:
        expr = self.and_chain()
        while self.peek()[:2] == ("ident", "or"):
            self.take()
            expr = Or(expr, self.and_chain())
        return expr

    def and_chain(self) -> PredicateExpr:
        expr = self.atom()
        while self.peek()[:2] == ("ident", "and"):
            self.take()
            expr = And(expr, self.atom())
        return expr

    def atom(self) -> PredicateExpr:
        kind, text, _ = self.peek()
        if kind == "ident" and text == "not":
            self.take()
            return Not(self.atom())
        if kind == "lpar":
            self.take()
            expr = self.or_chain()
            self.expect("rpar", "')'")
            return expr
        left = self.term()
        op_tok = self.take()
        if op_tok[0] != "op":
            raise PredicateSyntaxError("expected comparison operator", 1, op_tok[2])
        right = self.term()
        return Compare(op_tok[1], left, right)

    def term(self) -> Term:
        kind, text, col = self.take()
        if kind == "int":
            return Num(int(text))
        if kind == "ident":
            if text == "len":
                return Len()
            if text == "sum":
                return SumEntries()
            if text == "maxEntry":
                return MaxEntry()
            if text == "entry":
                self.expect("lpar", "'(' after entry")
                idx = self.expect("int", "entry index")
                self.expect("rpar", "')'")
                return Entry(int(idx[1]))
            raise PredicateSyntaxError(f"unknown identifier {text!r}", 1, col)
        raise PredicateSyntaxError("expected term", 1, col)


def parse_predicate(src: str) -> PredicateExpr:
    """Parse DSL source into an expression tree."""
    return _Parser(src).parse()


def _eval_term(t: Term, a: FinSeq) -> int:
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Len):
        return len(a)
    if isinstance(t, SumEntries):
        return sum(a)
    if isinstance(t, MaxEntry):
        return max(a) if a else 0
    if isinstance(t, Entry):
        return a[t.index] if t.index < len(a) else 0
    raise TypeError(f"not a term: {t!r}")


_CMP_FN = {
    "<": lambda u, v: u < v,
    "<=": lambda u, v: u <= v,
    ">": lambda u, v: u > v,
    ">=": lambda u, v: u >= v,
    "=": lambda u, v: u == v,
    "!=": lambda u, v: u != v,
}


def eval_predicate(e: PredicateExpr, a: FinSeq) -> bool:
    """Evaluate an expression on a finite sequence; total."""
    if isinstance(e, Compare):
        return _CMP_FN[e.op](_eval_term(e.left, a), _eval_term(e.right, a))
    if isinstance(e, Not):
        return not eval_predicate(e.item, a)
    if isinstance(e, And):
        return eval_predicate(e.left, a) and eval_predicate(e.right, a)
    if isinstance(e, Or):
        return eval_predicate(e.left, a) or eval_predicate(e.right, a)
    raise TypeError(f"not a predicate expression: {e!r}")


def _pretty_term(t: Term) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Len):
        return "len"
    if isinstance(t, SumEntries):
        return "sum"
    if isinstance(t, MaxEntry):
        return "maxEntry"
    if isinstance(t, Entry):
        return f"entry({t.index})"
    raise TypeError(f"not a term: {t!r}")


def pretty_predicate(e: PredicateExpr) -> str:
    """Canonical source text; parses back to an equal tree."""
    if isinstance(e, Compare):
        return f"{_pretty_term(e.left)} {e.op} {_pretty_term(e.right)}"
    if isinstance(e, Not):
        inner = pretty_predicate(e.item)
        if isinstance(e.item, (And, Or)):
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(e, And):
        left = pretty_predicate(e.left)
        if isinstance(e.left, Or):
            left = f"({left})"
        right = pretty_predicate(e.right)
        if isinstance(e.right, (And, Or)):
            right = f"({right})"
        return f"{left} and {right}"
    if isinstance(e, Or):
        left = pretty_predicate(e.left)
        right = pretty_predicate(e.right)
        if isinstance(e.right, Or):
            right = f"({right})"
        return f"{left} or {right}"
    raise TypeError(f"not a predicate expression: {e!r}")


def predicate_fn(src: str) -> Callable[[FinSeq], bool]:
    expr = parse_predicate(src)
    return lambda a: eval_predicate(expr, a)


# ---------------------------------------------------------------------------
# bundled metric instances
# ---------------------------------------------------------------------------

def _zigzag(m: int) -> int:
    return 2 * m if m >= 0 else -2 * m - 1


def _unzigzag(u: int) -> int:
    return u // 2 if u % 2 == 0 else -(u + 1) // 2


def dyadic_index(m: int, e: int) -> int:
    """Index of the dyadic rational m / 2^e in the dense enumeration."""
    return cantor_pair(_zigzag(m), e)


def dyadic_value(n: int) -> Fraction:
    u, e = cantor_unpair(n)
    return Fraction(_unzigzag(u), 1 << e)


def real_dyadic_presentation() -> MetricPresentation:
    """The real line through an enumeration of all dyadic rationals.

    Distances between dense points are exact, so the oracle error is
    zero at every precision.
    """
    return MetricPresentation(
        dense_point=dyadic_value,
        alpha_q=lambda i, j, k: abs(dyadic_value(i) - dyadic_value(j)),
    )


def unit_interval_nets() -> CompactNetSystem:
    """Nets for [0, 1]: dyadics at double resolution (spacing 2^-(k+2))."""

    def indices(k: int):
        e = k + 2
        return [dyadic_index(m, e) for m in range((1 << e) + 1)]

    return CompactNetSystem(net_indices=indices)


def unit_point_oracle(value) -> Callable[[int, int], Fraction]:
    """Exact distance oracle for a known rational point of the line."""
    v = Fraction(value)
    return lambda i, prec: abs(v - dyadic_value(i))


def unit_point_hint(value) -> Callable[[int], int]:
    """Candidate net index for a known rational point: the nearest grid dyadic."""
    v = Fraction(value)

    def hint(k: int) -> int:
        e = k + 3  # net family k+1 lives at resolution 2^-(k+3)
        m = round(v * (1 << e))
        m = min(max(m, 0), 1 << e)
        return dyadic_index(m, e)

    return hint


def cantor_presentation() -> MetricPresentation:
    """Cantor space with the prefix metric, via finite-support dense points.

    Dense point n is the decoded sequence of n with entries clamped to
    bits, extended by zeros; the distance between two dense points is
    2^-m for m the first position where they differ (0 when equal).
    """

    def point(n: int) -> FinSeq:
        return tuple(min(e, 1) for e in decode(n))

    def dist(i: int, j: int, k: int) -> Fraction:
        u, v = point(i), point(j)
        n = max(len(u), len(v))
        for m in range(n):
            eu = u[m] if m < len(u) else 0
            ev = v[m] if m < len(v) else 0
            if eu != ev:
                return Fraction(1, 1 << m)
        return Fraction(0)

    return MetricPresentation(dense_point=point, alpha_q=dist)


def cantor_full_nets() -> CompactNetSystem:
    """Nets for the whole Cantor space: all bit strings of length k+1."""

    def indices(k: int):
        out = []
        for code in range(1 << (k + 1)):
            bits = tuple((code >> (k - j)) & 1 for j in range(k + 1))
            out.append(encode(bits))
        return out

    return CompactNetSystem(net_indices=indices)


def real_point_map(name: str) -> PointMap:
    """Builtin functions on the dyadic real line, with local moduli."""
    if name == "identity":
        return PointMap(
            value=dyadic_value,
            modulus_radius=lambda i, eta: eta,
            value_at=lambda v: v,
        )
    if name == "square":

        def square_radius(i: int, eta: Fraction) -> Fraction:
            p = abs(dyadic_value(i))
            # |x^2 - p^2| <= r (2p + r) <= r (2p + 1) for r <= 1
            return min(Fraction(1), eta / (2 * p + 2))

        return PointMap(
            value=lambda i: dyadic_value(i) ** 2,
            modulus_radius=square_radius,
            value_at=lambda v: v * v,
        )
    if name == "clip-abs-half":

        def clip(v: Fraction) -> Fraction:
            return min(Fraction(1, 2), abs(v - Fraction(1, 2)))

        return PointMap(
            value=lambda i: clip(dyadic_value(i)),
            modulus_radius=lambda i, eta: eta,  # 1-Lipschitz
            value_at=clip,
        )
    raise InstanceValidationError(f"unknown real function {name!r}")


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------

@dataclass(frozen=True, kw_only=True)
class MetricInstance:
    presentation: MetricPresentation
    nets: CompactNetSystem
    t0: SpreadSpec
    t1: FanSpec
    point_maps: dict


@dataclass(frozen=True, kw_only=True)
class Instance:
    fans: dict
    bars: dict
    functions: dict
    metrics: dict
    digest: str


def _build_fan(name: str, decl, depth: int) -> FanSpec:
    if decl == "binary" or decl == {"kind": "binary"}:
        return binary_fan()
    if isinstance(decl, str) and decl.startswith("kary:"):
        return kary_fan(int(decl.split(":", 1)[1]))
    if not isinstance(decl, dict):
        raise InstanceValidationError(f"fan {name!r}: bad declaration {decl!r}")
    kind = decl.get("kind")
    if kind == "binary":
        return binary_fan()
    if kind == "kary":
        return kary_fan(int(decl["k"]))
    if kind == "bounds-table":
        overrides = {}
        for key, bound in decl.get("overrides", {}).items():
            node = tuple(int(s) for s in key.split(",")) if key else ()
            overrides[node] = int(bound)
        fan = fan_from_bounds(int(decl.get("default", 1)), overrides)
        for node in overrides:
            if not fan.member(node):
                raise InstanceValidationError(
                    f"fan {name!r}: override node {node} violates its parents' bounds",
                    witness=node,
                )
        return fan
    raise InstanceValidationError(f"fan {name!r}: unknown kind {kind!r}")


def _build_bar(name: str, decl) -> BarRep:
    if not isinstance(decl, dict):
        raise InstanceValidationError(f"bar {name!r}: bad declaration {decl!r}")
    kind = decl.get("kind")
    pred = decl.get("pred")
    if pred is None:
        raise InstanceValidationError(f"bar {name!r}: missing predicate source")
    fn = predicate_fn(pred)
    if kind == "dec":
        return DecBar(fn)
    if kind == "pi01":
        # index-independent family from a node predicate
        return Pi01Bar(lambda n, a: fn(a))
    if kind == "cbar":
        return CSet(fn)
    raise InstanceValidationError(f"bar {name!r}: unknown kind {kind!r}")


def _build_function(name: str, decl):
    if not isinstance(decl, dict):
        raise InstanceValidationError(f"function {name!r}: bad declaration {decl!r}")
    kind = decl.get("kind")
    if kind == "coordinate":
        return coordinate_fn(int(decl.get("index", 0)))
    if kind == "constant":
        return constant_fn(int(decl.get("value", 0)))
    if kind == "truncated-sum":
        return truncated_sum_fn(int(decl.get("length", 1)))
    if kind == "dyadic-sum":
        return dyadic_sum_fn(int(decl.get("length", 1)))
    if kind == "half-power":
        return half_power_fn()
    if kind == "real-fn":
        return real_point_map(str(decl.get("name", "")))
    if kind == "commit-table":
        entries = {}
        for item in decl.get("entries", []):
            if not (isinstance(item, list) and len(item) == 2):
                raise InstanceValidationError(
                    f"function {name!r}: table rows are [node, value] pairs",
                    witness=item,
                )
            node = from_json(item[0])
            entries[node] = item[1]
        for node, value in entries.items():
            for other, other_value in entries.items():
                if other[: len(node)] == node and other_value != value:
                    raise InstanceValidationError(
                        f"function {name!r}: commit table not monotone at {other}",
                        witness=other,
                    )

        def commit(a: FinSeq):
            for j in range(len(a) + 1):
                if a[:j] in entries:
                    return entries[a[:j]]
            return None

        return NbhdFn(commit=commit, depth_bound=int(decl.get("depth_bound", 64)))
    raise InstanceValidationError(f"function {name!r}: unknown kind {kind!r}")


def _build_metric(name: str, decl, net_depth: int) -> MetricInstance:
    if not isinstance(decl, dict):
        raise InstanceValidationError(f"metric {name!r}: bad declaration {decl!r}")
    kind = decl.get("kind")
    if kind == "real-dyadic":
        compact = decl.get("compact", "unit-interval")
        if compact != "unit-interval":
            raise InstanceValidationError(
                f"metric {name!r}: unknown compact subset {compact!r}"
            )
        x = real_dyadic_presentation()
        nets = unit_interval_nets()
    elif kind == "cantor":
        x = cantor_presentation()
        nets = cantor_full_nets()
    else:
        raise InstanceValidationError(f"metric {name!r}: unknown kind {kind!r}")
    validate_presentation(x)
    validate_nets(x, nets, depth=int(decl.get("validate_depth", net_depth)))
    t0, t1 = build_spreads(x, nets)
    return MetricInstance(presentation=x, nets=nets, t0=t0, t1=t1, point_maps={})


def _validate_fan(name: str, fan: FanSpec, depth: int, slack: int = 8) -> None:
    """Bound honesty sweep: no member child may exceed the declared bound."""
    for n in range(depth):
        for a in level(fan, n, cap=4096):
            bound = fan.branch_bound(a)
            for m in range(bound + 1, bound + 1 + slack):
                if fan.member(a + (m,)):
                    raise InstanceValidationError(
                        f"fan {name!r}: child {m} of {a} exceeds bound {bound}",
                        witness=a + (m,),
                    )


def load_instance(source, *, validate_depth: int = 4, net_depth: int = 4) -> Instance:
    """Load and validate an instance from a file path or a dict.

    The object may declare ``fans``, ``bars``, ``functions`` and
    ``metrics`` maps from ids to declarations; the singular keys
    ``fan``/``bar``/``function``/``metric`` declare one object under the
    same name.  Every built object runs its validation suite; failures
    carry the violating witness.
    """
    if isinstance(source, (str, FsPath)):
        raw_bytes = FsPath(source).read_bytes()
        try:
            data = json.loads(raw_bytes)
        except json.JSONDecodeError as exc:
            raise InstanceValidationError(f"instance is not valid JSON: {exc}") from exc
    else:
        data = source
        raw_bytes = json.dumps(data, sort_keys=True).encode()
    if not isinstance(data, dict):
        raise InstanceValidationError("instance must be a JSON object")
    digest = hashlib.sha256(raw_bytes).hexdigest()

    known = {"fans", "bars", "functions", "metrics", "fan", "bar", "function", "metric"}
    unknown = set(data) - known
    if unknown:
        raise InstanceValidationError(f"unknown instance keys: {sorted(unknown)}")

    def section(plural: str, singular: str) -> dict:
        out = dict(data.get(plural, {}))
        if singular in data:
            out[singular] = data[singular]
        return out

    fans = {}
    for name, decl in section("fans", "fan").items():
        fan = _build_fan(name, decl, validate_depth)
        _validate_fan(name, fan, validate_depth)
        fans[name] = fan
    bars = {name: _build_bar(name, decl) for name, decl in section("bars", "bar").items()}
    functions = {
        name: _build_function(name, decl)
        for name, decl in section("functions", "function").items()
    }
    metrics = {
        name: _build_metric(name, decl, net_depth)
        for name, decl in section("metrics", "metric").items()
    }
    return Instance(fans=fans, bars=bars, functions=functions, metrics=metrics, digest=digest)
