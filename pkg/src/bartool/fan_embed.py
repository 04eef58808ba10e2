"""Embedding an arbitrary fan into the binary fan and transferring bounds.

A source node maps to a run of blocks: entry ``i`` becomes a 0 followed
by ``i + 1`` ones.  The binary image is closed under initial segments;
membership of a binary code is decided on demand by decoding its closed
blocks and checking the source fan, never by materialising the image.

Decoding reads back the blocks that have been closed by a following 0.
A trailing run of ones is ambiguous mid-sequence (more ones may follow),
so by default it does not decode; ``close_final=True`` treats the end of
input as a block terminator, which is the reading under which decoding
inverts the embedding on full images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bars import BarRep, DecBar, Pi01Bar
from .errors import KindNotSupportedError, MalformedCodeError
from .seqcode import EMPTY, FinSeq
from .trees import DEFAULT_LEVEL_CAP, FanSpec, level


def embed_node(a: FinSeq) -> FinSeq:
    """Block coding of a sequence as a binary sequence; injective."""
    out: list[int] = []
    for entry in a:
        out.append(0)
        out.extend([1] * (entry + 1))
    return tuple(out)


def _parse_blocks(c: FinSeq):
    """Split a binary code into closed blocks and the trailing open block.

    Returns ``(entries, open_ones)`` where ``entries`` are the labels of
    blocks already closed by a following 0 and ``open_ones`` counts the
    ones of the block still open at the end (``None`` when the code is
    empty).  Raises on codes no block string has as a prefix.
    """
    entries: list[int] = []
    open_ones = None
    for pos, bit in enumerate(c):
        if bit == 0:
            if open_ones is not None:
                if open_ones == 0:
                    raise MalformedCodeError(f"empty block closed at position {pos}")
                entries.append(open_ones - 1)
            open_ones = 0
        elif bit == 1:
            if open_ones is None:
                raise MalformedCodeError("block code cannot start with 1")
            open_ones += 1
        else:
            raise MalformedCodeError(f"non-binary symbol {bit} at position {pos}")
    return tuple(entries), open_ones


def unembed_node(c: FinSeq, *, close_final: bool = False) -> FinSeq:
    """Decode the closed blocks of a binary code back to a source sequence.

    With ``close_final`` the trailing run of ones (if any) also decodes,
    so that ``unembed_node(embed_node(a), close_final=True) == a``.
    Without it the result is the decode of the longest closed prefix.
    """
    entries, open_ones = _parse_blocks(c)
    if close_final and open_ones:
        entries = entries + (open_ones - 1,)
    return entries


@dataclass(frozen=True)
class BinaryImage:
    """Prefix closure of the embedded image of a fan, as a binary subfan."""

    source_fan: FanSpec
    depth_cap: int = 512
    _fan: FanSpec = field(init=False, repr=False, compare=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(
            self,
            "_fan",
            FanSpec(
                member=self.member,
                successor_hint=lambda c: 0 if self.member(c + (0,)) else 1,
                branch_bound=lambda c: 1,
            ),
        )

    def member(self, c: FinSeq) -> bool:
        """Whether ``c`` is a prefix of the embedding of some source node."""
        if len(c) > self.depth_cap:
            raise MalformedCodeError(
                f"code of length {len(c)} exceeds image depth cap {self.depth_cap}"
            )
        try:
            entries, open_ones = _parse_blocks(c)
        except MalformedCodeError:
            return False
        node: FinSeq = EMPTY
        for e in entries:
            if not self.source_fan.member(node + (e,)):
                return False
            node = node + (e,)
        if open_ones is None:
            return True
        # the open block needs a source child with at least open_ones ones
        lo = max(0, open_ones - 1)
        hi = self.source_fan.branch_bound(node)
        return any(self.source_fan.member(node + (m,)) for m in range(lo, hi + 1))

    def as_fan(self) -> FanSpec:
        return self._fan


def image_closure(fan: FanSpec, *, depth_cap: int = 512) -> BinaryImage:
    return BinaryImage(source_fan=fan, depth_cap=depth_cap)


def agreement_modulus(fan: FanSpec, n: int, *, level_cap: int = DEFAULT_LEVEL_CAP) -> int:
    """Image depth that pins decodes to ``n`` source entries.

    Any two image nodes agreeing on this many symbols decode to the same
    first ``n`` entries: the sum of the worst block lengths over the
    first ``n`` source levels plus one symbol to close the last block.
    The depth-0 summand is empty (there is no entry before the root).
    """
    total = 0
    for i in range(1, n + 1):
        total += max(a[-1] for a in level(fan, i, cap=level_cap))
    return total + 2 * n + 1


def transfer_bound(img: BinaryImage, n: int, *, level_cap: int = DEFAULT_LEVEL_CAP) -> int:
    """Source-fan uniform depth induced by uniformity at image depth ``n``.

    The maximum decoded length over image nodes of length ``n``; decodes
    use only closed blocks so each is an initial segment of every path
    through the node.
    """
    nodes = level(img.as_fan(), n, cap=level_cap)
    return max(len(unembed_node(c)) for c in nodes)


def bar_through_image(img: BinaryImage, rep: BarRep) -> BarRep:
    """Pull a bar on the source fan back to the binary image via decoding.

    Same-kind for decidable and intersection bars; only meaningful at
    image member nodes.
    """
    if isinstance(rep, DecBar):
        return DecBar(lambda c: rep.holds(unembed_node(c)))
    if isinstance(rep, Pi01Bar):
        return Pi01Bar(lambda n, c: rep.family(n, unembed_node(c)))
    raise KindNotSupportedError("c-sets do not pull back through the image decoding")
