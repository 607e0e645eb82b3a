import random

import pytest
from hypothesis import given, strategies as st

from aaknots.corpus import FIGURE_EIGHT, HOPF, KINK, TREFOIL, random_alternating_knots
from aaknots.diagram import (
    Diagram,
    DiagramError,
    canonical_code,
    check_planar,
    components,
    emit_pd,
    flip,
    is_connected,
    mirror,
    normalize,
    parse_pd,
    reflect,
    relabel,
    with_marks,
)


def _relabel_pd(text: str, shift: int, m: int) -> str:
    """Cyclically shift the edge labels of a PD string (labels 1..m)."""
    import re

    return re.sub(r"\d+", lambda mo: str((int(mo.group()) - 1 + shift) % m + 1), text)


knots = st.integers(0, 10**6).map(lambda s: next(random_alternating_knots(random.Random(s), 3, 10)))


def test_parse_trefoil():
    d = parse_pd(TREFOIL)
    assert d.n == 3
    assert components(d) == 1
    assert is_connected(d)
    assert len(d.faces()) == d.n + 2


def test_faces_partition_darts():
    d = parse_pd(FIGURE_EIGHT)
    seen = sorted(x for f in d.faces() for x in f.darts)
    assert seen == list(range(4 * d.n))
    assert sorted(f.degree for f in d.faces()) == [2, 2, 3, 3, 3, 3]


def test_hopf_has_two_components():
    assert components(parse_pd(HOPF)) == 2


def test_kink_is_one_crossing_knot():
    d = parse_pd(KINK)
    assert d.n == 1 and components(d) == 1


def test_loop_and_comments():
    d = parse_pd("# unknot\nO")
    assert d.n == 0 and d.loops == 1
    assert emit_pd(d) == "O"
    assert canonical_code(d) == "O"


@pytest.mark.parametrize("bad", ["X[1,2,3]", "X[1,1,1,1]", "X[1,2,3,4]", "Y[1,2,3,4]", "X[1,2,a,4]"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(DiagramError):
        parse_pd(bad)


def test_dealternator_mark_parsed():
    d = parse_pd("X[6,3,1,4] Xd[5,3,6,2] X[4,1,5,2]")
    assert d.dealt == (False, True, False)
    assert "Xd[" in emit_pd(d)


def test_relabeled_trefoil_same_code():
    for shift in range(6):
        assert canonical_code(parse_pd(_relabel_pd(TREFOIL, shift, 6))) == canonical_code(parse_pd(TREFOIL))


def test_mirror_changes_trefoil_code():
    d = parse_pd(TREFOIL)
    assert canonical_code(mirror(d)) != canonical_code(d)
    assert canonical_code(mirror(mirror(d))) == canonical_code(d)


def test_mark_changes_code():
    d = parse_pd(TREFOIL)
    assert canonical_code(with_marks(d, [0])) != canonical_code(d)
    # all trefoil crossings are equivalent
    assert len({canonical_code(with_marks(d, [c])) for c in range(3)}) == 1


def test_fingerprint_is_stable_hex():
    d = parse_pd(TREFOIL)
    fp = d.fingerprint()
    assert fp == parse_pd(TREFOIL).fingerprint()
    int(fp, 16)
    assert flip(d, [0]).fingerprint() != fp


@given(knots, st.randoms(use_true_random=False))
def test_canonical_code_relabel_invariant(d, rnd):
    perm = list(range(d.n))
    rnd.shuffle(perm)
    rot = [rnd.randrange(4) for _ in range(d.n)]
    e = relabel(d, perm, rot)
    check_planar(e)
    assert canonical_code(e) == canonical_code(d)


@given(knots)
def test_emit_parse_round_trip(d):
    e = parse_pd(emit_pd(d))
    assert canonical_code(e) == canonical_code(d)
    # normal form is a fixed point of parse-after-emit
    nd = normalize(d)
    assert parse_pd(emit_pd(nd)) == nd


@given(knots)
def test_reflect_is_involution(d):
    assert canonical_code(reflect(reflect(d))) == canonical_code(d)


@given(knots, st.data())
def test_flip_involution(d, data):
    c = data.draw(st.integers(0, d.n - 1))
    assert flip(flip(d, [c]), [c]) == d


def test_diagram_rejects_bad_involution():
    with pytest.raises((DiagramError, ValueError)):
        Diagram((1, 0, 3, 3), (0,))
