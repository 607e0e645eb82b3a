import pytest

from aaknots.diagram import canonical_code, flip
from aaknots.generate import EnumConfig, encode_C, encode_coil, enumerate_unknot_diagrams, u1_alternating
from aaknots.moves import apply_r2_clasp
from aaknots.oracle import jones
from aaknots.recognition import (
    DealtStatus,
    dealternators,
    is_alternating,
    is_reduced,
    is_strongly_reduced,
    nugatory_crossings,
    reduce_kinks,
    trivial_clasps,
)

MS = [1, -1, 2, -2, 3, -3]


@pytest.mark.parametrize("m", MS)
def test_coil_is_all_kinks(m):
    d = encode_coil(m)
    assert d.n == abs(m)
    assert nugatory_crossings(d) == set(range(d.n))
    assert reduce_kinks(d)[0].n == 0


@pytest.mark.parametrize("m", MS)
def test_base_diagram(m):
    d = encode_C(m)
    assert d.n == abs(m) + 2
    assert is_reduced(d) and not is_strongly_reduced(d)
    ds, status = dealternators(d)
    assert status == DealtStatus.UNIQUE and d.dealt[next(iter(ds))]
    assert jones(d) == 1
    # RII at the clasp leaves the coil
    assert canonical_code(apply_r2_clasp(d, trivial_clasps(d)[0])) == canonical_code(encode_coil(m))


def test_base_diagrams_distinct_and_mirrored():
    codes = {m: canonical_code(encode_C(m)) for m in MS}
    assert len(set(codes.values())) == len(MS)


def test_zero_m_rejected():
    with pytest.raises(ValueError):
        encode_C(0)
    with pytest.raises(ValueError):
        EnumConfig(6, frozenset({0, 1}))


def test_outputs_are_reduced_almost_alternating_unknots(small_corpus):
    assert small_corpus
    for d in small_corpus:
        assert d.n <= 8
        assert is_reduced(d)
        assert dealternators(d)[1] == DealtStatus.UNIQUE
        assert jones(d) == 1


def test_sorted_and_deduplicated(small_corpus):
    keys = [(d.n, canonical_code(d)) for d in small_corpus]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


@pytest.mark.parametrize("k", [4, 5, 6, 7])
def test_truncation_is_exact(small_corpus, k):
    smaller = [canonical_code(d) for d in enumerate_unknot_diagrams(EnumConfig(k))]
    assert smaller == [canonical_code(d) for d in small_corpus if d.n <= k]


def test_counts_grow_with_bound(small_corpus):
    counts = [sum(1 for d in small_corpus if d.n <= k) for k in range(3, 9)]
    assert all(b > a for a, b in zip(counts, counts[1:]))


def test_dedup_off_keeps_repeats():
    dedup = enumerate_unknot_diagrams(EnumConfig(7))
    raw = enumerate_unknot_diagrams(EnumConfig(7, dedup=False))
    assert len(raw) > len(dedup)
    assert {canonical_code(d) for d in raw} == {canonical_code(d) for d in dedup}


def test_stats_count_move_kinds():
    stats: dict = {}
    enumerate_unknot_diagrams(EnumConfig(7), stats=stats)
    assert set(stats) == {"FLYPE", "TONGUE", "TWIRL"}
    assert all(v > 0 for v in stats.values())


def test_m_subset():
    only = enumerate_unknot_diagrams(EnumConfig(6, frozenset({1})))
    full = enumerate_unknot_diagrams(EnumConfig(6))
    assert {canonical_code(d) for d in only} <= {canonical_code(d) for d in full}
    assert canonical_code(encode_C(1)) in {canonical_code(d) for d in only}


def test_u1_alternating(small_corpus):
    for d in small_corpus:
        u = u1_alternating(d)
        assert is_alternating(u) and is_reduced(u)
        marked = [c for c in range(u.n) if u.dealt[c]]
        assert jones(flip(u, marked)) == 1
