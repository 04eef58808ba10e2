import random
from itertools import product

import pytest

from bartool.bars import HOLDS, DecBar, find_uniform_bound, is_uniform_at
from bartool.errors import MalformedCodeError
from bartool.fan_embed import (
    agreement_modulus,
    bar_through_image,
    embed_node,
    image_closure,
    transfer_bound,
    unembed_node,
)
from bartool.trees import binary_fan, fan_from_bounds, kary_fan, level
from conftest import enumerate_level, random_fan, random_monotone_holds


def reference_image_prefixes(fan, code_length, source_depth):
    """Oracle for image membership: all prefixes of source-node embeddings.

    Exhaustive over source depth; each source entry contributes at least
    two symbols, so source depth ``code_length`` always suffices for
    codes up to that length.
    """
    prefixes = set()
    for n in range(source_depth + 1):
        for a in enumerate_level(fan, n):
            img = embed_node(a)
            for k in range(min(len(img), code_length) + 1):
                prefixes.add(img[:k])
    return prefixes


def test_embed_examples():
    assert embed_node(()) == ()
    assert embed_node((0,)) == (0, 1)
    assert embed_node((1, 0)) == (0, 1, 1, 0, 1)


def test_embed_injective():
    seen = {}
    for n in range(4):
        for a in enumerate_level(kary_fan(3), n):
            img = embed_node(a)
            assert img not in seen
            seen[img] = a


def test_unembed_examples():
    assert unembed_node((0, 1)) == ()
    assert unembed_node((0, 1, 0)) == (0,)
    assert unembed_node((0, 1, 1, 0, 1)) == (1,)


def test_unembed_malformed():
    with pytest.raises(MalformedCodeError):
        unembed_node((1, 0))
    with pytest.raises(MalformedCodeError):
        unembed_node((0, 0))
    with pytest.raises(MalformedCodeError):
        unembed_node((0, 1, 2))


def test_unembed_closed_prefix_of_full_decode():
    # without close_final the decode is the closed-block prefix of the
    # full decode; the two agree except possibly in the last entry
    for bits in product((0, 1), repeat=8):
        try:
            closed = unembed_node(bits)
            full = unembed_node(bits, close_final=True)
        except MalformedCodeError:
            continue
        assert full[: len(closed)] == closed
        assert len(full) - len(closed) <= 1


def test_roundtrip_closed_images():
    # decoding inverts the embedding once the final block is terminated
    fans = [binary_fan(), kary_fan(3), kary_fan(4), fan_from_bounds(2, {(0,): 3})]
    for fan in fans:
        for n in range(6):
            for a in enumerate_level(fan, n):
                assert unembed_node(embed_node(a), close_final=True) == a
                assert unembed_node(embed_node(a) + (0,)) == a


def test_image_membership_examples():
    img = image_closure(binary_fan())
    assert img.member((0, 1, 0))
    assert not img.member((1,))
    assert img.member(())


def test_image_membership_against_oracle():
    for fan in (binary_fan(), kary_fan(3), fan_from_bounds(1, {(): 2})):
        img = image_closure(fan)
        oracle = reference_image_prefixes(fan, 8, 8)
        for n in range(9):
            for c in product((0, 1), repeat=n):
                assert img.member(c) == (c in oracle)


def test_image_is_prefix_closed_spread():
    img = image_closure(kary_fan(3))
    fan = img.as_fan()
    for n in range(1, 9):
        nodes = level(fan, n)
        parents = set(level(fan, n - 1))
        assert nodes, "image levels never empty"
        assert all(c[:-1] in parents for c in nodes)
        # spread: every node has a child
        assert all(img.member(c + (0,)) or img.member(c + (1,)) for c in nodes)


def test_agreement_modulus_examples():
    assert agreement_modulus(binary_fan(), 2) == 7
    assert agreement_modulus(kary_fan(3), 1) == 5
    assert agreement_modulus(binary_fan(), 0) == 1
    assert agreement_modulus(kary_fan(4), 0) == 1


@pytest.mark.parametrize("fan", [binary_fan(), kary_fan(3)], ids=["binary", "ternary"])
def test_agreement_modulus_soundness(fan):
    # nodes agreeing to the modulus depth decode to the same first n entries
    img = image_closure(fan)
    for n in range(4):
        depth = agreement_modulus(fan, n)
        probe = depth + 2  # strictly deeper so trailing блocks differ
        groups = {}
        for c in level(img.as_fan(), probe):
            groups.setdefault(c[:depth], []).append(unembed_node(c))
        for decodes in groups.values():
            firsts = {d[:n] for d in decodes}
            assert len(firsts) == 1
            assert all(len(d) >= n for d in decodes)


def test_transfer_bound_examples():
    img = image_closure(binary_fan())
    assert transfer_bound(img, 0) == 0
    # brute-force oracle: image level 4 of the binary fan is
    # {01011 prefixes}: (0,1,0,1) and (0,1,1,0); closed decodes have length 1
    lvl4 = level(img.as_fan(), 4)
    assert lvl4 == [(0, 1, 0, 1), (0, 1, 1, 0)]
    assert max(len(unembed_node(c)) for c in lvl4) == 1
    assert transfer_bound(img, 4) == 1
    img3 = image_closure(kary_fan(3))
    assert transfer_bound(img3, 4) == 1


def test_bound_transfer_end_to_end():
    rng = random.Random(99)
    for _ in range(20):
        fan = random_fan(rng)
        depth = rng.randint(1, 4)
        holds = random_monotone_holds(rng, fan, depth)
        bar = DecBar(holds)
        img = image_closure(fan)
        lifted = bar_through_image(img, bar)
        search = find_uniform_bound(
            img.as_fan(), lifted, max_depth=agreement_modulus(fan, depth)
        )
        assert search.status == HOLDS
        m = transfer_bound(img, search.bound)
        assert is_uniform_at(fan, bar, m).status == HOLDS
