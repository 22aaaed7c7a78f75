import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import labelled, set_systems
from sunflower_vc.errors import InputError, PreconditionError
from sunflower_vc.setsystem import (
    SetSystem,
    bits_of,
    build,
    compress,
    core,
    iter_bits,
    lex_key,
    minimal_masks,
    minimal_sets,
    submasks,
    trace,
    upset_contains,
)


def test_build_collapses_duplicates_and_order():
    a = build("abc", [["a", "b"], ["c"], ["b", "a"]])
    b = build("abc", [["c"], ["a", "b"]])
    assert a == b
    assert len(a) == 2
    assert a.sets() == [["a", "b"], ["c"]]


def test_build_rejects_unknown_label():
    with pytest.raises(InputError):
        build("ab", [["a", "z"]])


def test_build_rejects_duplicate_ground():
    with pytest.raises(InputError):
        build(["a", "a"], [])


def test_mask_out_of_ground_rejected():
    with pytest.raises(InputError):
        SetSystem(("a",), (0b10,))


def test_isolated_elements_kept():
    H = build("abc", [["a"]])
    assert H.n == 3 and H.support == 0b1


def test_trace_example():
    H = labelled("123", [[1, 2], [2, 3], [3]])
    T = trace(H, H.mask(["1", "3"]))
    assert T.ground == ("1", "3")
    assert sorted(T.sets()) == [["1"], ["3"]]


def test_minimal_sets_example():
    H = labelled("123", [[1], [1, 2], [3]])
    assert minimal_sets(H).sets() == [["1"], ["3"]]


def test_core_example():
    H = labelled("123", [[1, 2], [1, 3], [1, 2, 3]])
    assert H.labels(core(H, H.full_mask)) == ["1"]
    assert H.labels(core(H, H.mask(["1", "2"]))) == ["1", "2"]


def test_core_outside_upset():
    H = labelled("12", [[1, 2]])
    with pytest.raises(PreconditionError):
        core(H, H.mask(["1"]))


def test_upset_contains():
    H = labelled("123", [[1, 2], [3]])
    assert upset_contains(H, H.mask(["1", "2"]))
    assert upset_contains(H, H.mask(["3"]))
    assert not upset_contains(H, H.mask(["1"]))
    assert not upset_contains(H.with_members(()), H.full_mask)


@given(st.integers(0, 1 << 12))
def test_bits_roundtrip(m):
    assert bits_of(iter_bits(m)) == m
    assert list(iter_bits(m)) == sorted(iter_bits(m))


@given(st.integers(0, 1 << 10))
def test_submasks_complete(m):
    subs = list(submasks(m))
    assert len(subs) == len(set(subs)) == 1 << m.bit_count()
    assert all(s & ~m == 0 for s in subs)


@given(st.integers(0, 1 << 10), st.integers(0, 1 << 10))
def test_compress_counts(m, sup):
    assert compress(m, sup).bit_count() == (m & sup).bit_count()


@given(st.lists(st.integers(0, 255), max_size=12))
def test_minimal_masks_is_antichain_below_everything(ms):
    mins = minimal_masks(ms)
    for a in mins:
        assert not any(b != a and b & ~a == 0 for b in mins)
    for m in ms:
        assert any(k & ~m == 0 for k in mins)


@given(set_systems(max_n=6))
def test_trace_is_projection(H):
    for U in (0, H.full_mask, H.full_mask & 0b101010):
        T = trace(H, U)
        assert len(T) == len({S & U for S in H.members})


@given(set_systems(max_n=6, min_members=1))
def test_core_inside_every_contained_member(H):
    for A in range(1 << H.n):
        if upset_contains(H, A):
            c = core(H, A)
            assert all(c & ~S == 0 for S in H.members if S & ~A == 0)


def test_lex_key_order():
    # {0,1} < {0,2} < {1} in lexicographic tuple order
    assert sorted([0b10, 0b101, 0b11], key=lex_key) == [0b11, 0b101, 0b10]
