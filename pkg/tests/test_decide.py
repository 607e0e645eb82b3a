import random

import pytest
from hypothesis import given, settings, strategies as st

from aaknots.corpus import CINQUEFOIL, FIGURE_EIGHT, KINK, TREFOIL, random_alternating_knots
from aaknots.decide import (
    InvalidInput,
    Reason,
    Status,
    decide,
    prepare,
    read_certificate,
    replay,
    replay_lines,
    write_certificate,
)
from aaknots.diagram import flip, parse_pd, with_marks
from aaknots.generate import encode_C
from aaknots.moves import MoveKind
from aaknots.oracle import jones


def test_flipped_trefoil():
    verdict, cert = decide(flip(parse_pd(TREFOIL), [0]))
    assert str(verdict) == "TRIVIAL (coiled after R2)"
    assert [r.kind for r in cert.steps] == [MoveKind.R2_CLASP, MoveKind.R1_KINK]
    assert cert.terminal.n == 0


def test_flipped_cinquefoil_is_knotted():
    verdict, cert = decide(flip(parse_pd(CINQUEFOIL), [0]))
    assert verdict.status == Status.NONTRIVIAL
    assert verdict.reason == Reason.NOT_COILED_AFTER_R2
    assert cert.terminal.n == 3  # the remaining trefoil


@pytest.mark.parametrize("m", [1, -1, 2, -2, 3, -3])
def test_base_diagrams_trivial(m):
    verdict, _ = decide(encode_C(m))
    assert verdict.status == Status.TRIVIAL


def test_trivial_loop():
    verdict, cert = decide(parse_pd("O"))
    assert verdict.reason == Reason.REACHED_TRIVIAL
    assert cert.lines == []


@pytest.mark.parametrize("pd", [TREFOIL, KINK, FIGURE_EIGHT, "X[1,3,2,4] X[3,1,4,2]"])
def test_invalid_inputs(pd):
    with pytest.raises(InvalidInput):
        decide(parse_pd(pd))


def test_wrong_mark_rejected():
    d = flip(parse_pd(TREFOIL), [0])
    with pytest.raises(InvalidInput):
        prepare(with_marks(d, [1]))


def test_corpus_decides_trivial_with_valid_certificates(small_corpus):
    for d in small_corpus:
        verdict, cert = decide(d, check_oracle=True)
        assert verdict.status == Status.TRIVIAL
        rep = replay(cert)
        assert rep.ok, rep.message
        assert rep.crossing_counts == sorted(rep.crossing_counts, reverse=True)
        assert rep.crossing_counts[-1] == 0


def test_tampered_certificate_fails(small_corpus):
    d = next(x for x in small_corpus if x.n >= 7)
    _, cert = decide(d)
    assert len(cert.lines) >= 2
    swapped = [cert.lines[1], cert.lines[0]] + cert.lines[2:]
    assert not replay_lines(cert.source, swapped).ok
    assert not replay_lines(flip(cert.source, [0]), cert.lines).ok


def test_certificate_file_round_trip(tmp_path, small_corpus):
    _, cert = decide(small_corpus[-1])
    path = tmp_path / "c.txt"
    write_certificate(cert, path)
    source, lines = read_certificate(path.read_text())
    assert source == cert.source and lines == cert.lines
    assert replay_lines(source, lines).ok


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.data())
def test_sound_on_flipped_alternating_knots(seed, data):
    d = next(random_alternating_knots(random.Random(seed), 4, 11))
    x = flip(d, [data.draw(st.integers(0, d.n - 1))])
    try:
        verdict, _ = decide(x)
    except InvalidInput:
        return
    if verdict.status == Status.TRIVIAL:
        assert jones(x) == 1
    if jones(x) != 1:
        assert verdict.status == Status.NONTRIVIAL


def test_deterministic(small_corpus):
    d = small_corpus[len(small_corpus) // 2]
    assert decide(d)[1].to_text() == decide(d)[1].to_text()
