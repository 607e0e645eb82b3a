import random

import pytest
from hypothesis import given, settings, strategies as st

from aaknots.corpus import KINK, TREFOIL
from aaknots.decide import decide
from aaknots.diagram import canonical_code, flip, parse_pd
from aaknots.generate import encode_C
from aaknots.moves import (
    TONGUE_SIDE,
    TWIRL_SIDE,
    UNTONGUE_DELTA,
    UNTONGUED_SIDE,
    UNTWIRL_DELTA,
    UNTWIRLED_SIDE,
    MoveError,
    MoveKind,
    StaleSiteError,
    apply_flype,
    apply_r1_kink,
    apply_r2_clasp,
    apply_record,
    apply_untongue,
    apply_untwirl,
    decode_record,
    enumerate_placements,
    flype_sites,
    new_tongue_edge,
    placements_with_results,
)
from aaknots.oracle import jones
from aaknots.recognition import DealtStatus, dealternators, is_reduced, tongue_data, trivial_clasps


def _ports(model):
    return sorted(t[1] for row in model.slots for t in row if t[0] == "p")


def test_rule_tables_are_consistent():
    assert TONGUE_SIDE.size - UNTONGUED_SIDE.size == UNTONGUE_DELTA
    assert TWIRL_SIDE.size - UNTWIRLED_SIDE.size == UNTWIRL_DELTA
    assert _ports(TONGUE_SIDE) == _ports(UNTONGUED_SIDE)
    assert _ports(TWIRL_SIDE) == _ports(UNTWIRLED_SIDE)
    for model in (TONGUE_SIDE, UNTONGUED_SIDE, TWIRL_SIDE, UNTWIRLED_SIDE):
        # internal links are symmetric
        for j, row in enumerate(model.slots):
            for k, t in enumerate(row):
                if t[0] == "c":
                    assert model.slots[t[1]][t[2]] == ("c", j, k)
        assert sum(model.dealt) == 1


def test_r1_on_kink():
    assert apply_r1_kink(parse_pd(KINK), 0).n == 0


def test_r2_on_flipped_trefoil():
    d = flip(parse_pd(TREFOIL), [0])
    out = apply_r2_clasp(d, trivial_clasps(d)[0])
    assert out.n == 1
    assert jones(out) == jones(d) == 1


def test_r1_rejects_non_nugatory():
    with pytest.raises((MoveError, ValueError)):
        apply_r1_kink(parse_pd(TREFOIL), 0)


@pytest.mark.parametrize("m", [1, -1, 2, -2, 3, -3])
def test_moves_on_base_diagrams_keep_jones(m):
    d = encode_C(m)
    for kind in (MoveKind.TONGUE, MoveKind.TWIRL, MoveKind.FLYPE):
        for _, out in placements_with_results(d, kind):
            assert jones(out) == 1
            ds, status = dealternators(out)
            assert status == DealtStatus.UNIQUE


def test_placements_and_results_agree(small_corpus):
    for d in small_corpus[:30]:
        for kind in (MoveKind.TONGUE, MoveKind.TWIRL):
            pairs = placements_with_results(d, kind)
            assert [p for p, _ in pairs] == enumerate_placements(d, kind)


def test_untongue_rejects_other_sites():
    d = encode_C(2)
    for p, out in placements_with_results(d, MoveKind.TONGUE):
        site = tongue_data(out, new_tongue_edge(out))
        with pytest.raises(MoveError):
            apply_untongue(d, site)


@settings(max_examples=40)
@given(st.data())
def test_tongue_twirl_round_trips(small_corpus, data):
    d = data.draw(st.sampled_from([x for x in small_corpus if x.n <= 6]))
    code = canonical_code(d)
    for kind, undo, step in ((MoveKind.TONGUE, apply_untongue, UNTONGUE_DELTA), (MoveKind.TWIRL, apply_untwirl, UNTWIRL_DELTA)):
        for _, out in placements_with_results(d, kind):
            assert out.n == d.n + step
            assert is_reduced(out)
            back = undo(out, tongue_data(out, new_tongue_edge(out)))
            assert canonical_code(back) == code


@settings(max_examples=40)
@given(st.data())
def test_flypes_preserve_crossings_and_jones(small_corpus, data):
    d = data.draw(st.sampled_from(small_corpus))
    v = jones(d)
    for site in flype_sites(d):
        out = apply_flype(d, site)
        assert out.n == d.n
        assert jones(out) == v


def test_certificate_lines_round_trip(small_corpus):
    for d in small_corpus[::5]:
        _, cert = decide(d)
        cur = cert.source
        for line in cert.lines:
            rec = decode_record(line, cur)
            assert rec.encode() == line
            cur = apply_record(cur, rec)
        assert cur.n == 0


def test_stale_site_detected(small_corpus):
    d = next(x for x in small_corpus if x.n >= 6)
    _, cert = decide(d)
    line = cert.lines[0]
    other = flip(cert.source, [0])
    with pytest.raises(StaleSiteError):
        decode_record(line, other)


def test_decode_rejects_garbage():
    d = encode_C(1)
    for line in ("", "BOGUS 1@ab 0", "FLYPE"):
        with pytest.raises(ValueError):
            decode_record(line, d)
