import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bartool.errors import ContractViolation
from bartool.seqcode import (
    cantor_pair,
    concat,
    decode,
    encode,
    from_json,
    prefix,
    to_json,
)


def brute_force_code_table(limit: int):
    """Invert the coding by enumeration: code -> sequence for all codes <= limit.

    Builds sequences breadth-first from the recursion
    encode(a + (m,)) = pair(encode(a), m) + 1, entirely forward.
    """
    table = {0: ()}
    frontier = [((), 0)]
    while frontier:
        seq, code = frontier.pop()
        m = 0
        while True:
            child_code = cantor_pair(code, m) + 1
            if child_code > limit:
                break
            child = seq + (m,)
            table[child_code] = child
            frontier.append((child, child_code))
            m += 1
    return table


def test_encode_base_cases():
    assert encode(()) == 0
    assert encode((0,)) == 1
    assert encode((1,)) == 3


def test_decode_base_cases():
    assert decode(0) == ()
    assert decode(1) == (0,)
    assert decode(5) == (0, 1)


def test_decode_matches_brute_force_table():
    table = brute_force_code_table(64)
    assert set(table) == set(range(65))  # bijective below the limit
    for code, seq in table.items():
        assert decode(code) == seq
        assert encode(seq) == code


def test_roundtrip_all_small_codes():
    for n in range(10_000 + 1):
        assert encode(decode(n)) == n


@settings(max_examples=500)
@given(st.lists(st.integers(0, 32), max_size=8))
def test_roundtrip_random_sequences(entries):
    a = tuple(entries)
    assert decode(encode(a)) == a


def test_encode_injective_on_enumerated_set():
    seqs = [decode(n) for n in range(2000)]
    codes = {encode(a) for a in seqs}
    assert len(codes) == len(seqs)


def test_concat_and_prefix_examples():
    assert concat((1,), (2, 3)) == (1, 2, 3)
    assert prefix((1, 2, 3), 0) == ()
    assert prefix((1, 2, 3), 2) == (1, 2)
    assert prefix((1, 2, 3), 3) == (1, 2, 3)


def test_prefix_contract_violation():
    with pytest.raises(ContractViolation):
        prefix((1, 2, 3), 4)
    with pytest.raises(ContractViolation):
        prefix((1, 2, 3), -1)


@given(
    st.lists(st.integers(0, 9), max_size=6),
    st.lists(st.integers(0, 9), max_size=6),
    st.lists(st.integers(0, 9), max_size=6),
)
def test_concat_associative(a, b, c):
    a, b, c = tuple(a), tuple(b), tuple(c)
    assert concat(concat(a, b), c) == concat(a, concat(b, c))


@given(st.lists(st.integers(0, 9), max_size=6), st.lists(st.integers(0, 9), max_size=6))
def test_prefix_of_concat_recovers_left(a, b):
    a, b = tuple(a), tuple(b)
    assert prefix(concat(a, b), len(a)) == a


def test_json_representation():
    assert to_json((1, 2)) == [1, 2]
    assert from_json([0, 3]) == (0, 3)
    with pytest.raises(ContractViolation):
        from_json([1, -2])
    with pytest.raises(ContractViolation):
        from_json("nope")
