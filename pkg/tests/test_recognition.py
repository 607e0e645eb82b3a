import random

import pytest
from hypothesis import given, settings, strategies as st

from aaknots.corpus import CINQUEFOIL, FIGURE_EIGHT, KINK, TREFOIL, almost_alternating_from, fixtures, random_alternating_knots
from aaknots.diagram import canonical_code, flip, parse_pd
from aaknots.oracle import jones
from aaknots.recognition import (
    DealtStatus,
    PreconditionError,
    dealternators,
    dealternators_brute,
    decomposing_pairs,
    flyped_tongues,
    has_flype_component_brute,
    is_alternating,
    is_prime,
    is_prime_brute,
    is_reduced,
    is_strongly_reduced,
    nugatory_brute,
    nugatory_crossings,
    reduce_kinks,
    remove_clasp,
    the_dealternator,
    trivial_clasps,
    trivial_clasps_brute,
    validate,
)


@st.composite
def almost_alternating(draw):
    d = next(random_alternating_knots(random.Random(draw(st.integers(0, 10**6))), 3, 10))
    return flip(d, [draw(st.integers(0, d.n - 1))])


def test_validate_trefoil():
    assert validate(parse_pd(TREFOIL)) == {
        "connected": "true",
        "knot": "true",
        "reduced": "true",
        "prime": "true",
        "alternating": "true",
        "almost_alternating": "false",
        "dealternator": "none",
        "strongly_reduced": "true",
    }


def test_validate_flipped_trefoil():
    v = validate(flip(parse_pd(TREFOIL), [1]))
    assert v["alternating"] == "false"
    assert v["almost_alternating"] == "true"
    assert v["dealternator"] == "1"
    assert v["strongly_reduced"] == "false"


def test_validate_kink_and_granny():
    assert validate(parse_pd(KINK))["reduced"] == "false"
    assert validate(fixtures()["granny"])["prime"] == "false"
    assert validate(fixtures()["flipped_hopf"])["knot"] == "false"


def test_alternating_examples():
    for pd in (TREFOIL, FIGURE_EIGHT, CINQUEFOIL):
        d = parse_pd(pd)
        assert is_alternating(d)
        assert dealternators(d)[1] == DealtStatus.ALTERNATING
    assert not is_alternating(parse_pd("O"))


def test_flipped_cinquefoil_is_strongly_reduced():
    d = flip(parse_pd(CINQUEFOIL), [2])
    assert the_dealternator(d) == 2
    # the flipped crossing leaves the other bigons alternating at one end
    assert is_reduced(d)


def test_the_dealternator_raises_on_alternating():
    with pytest.raises(PreconditionError):
        the_dealternator(parse_pd(TREFOIL))


def test_flyped_tongues_require_strongly_reduced():
    with pytest.raises(PreconditionError):
        flyped_tongues(flip(parse_pd(TREFOIL), [0]))


def test_remove_clasp_on_flipped_trefoil_leaves_kink():
    d = flip(parse_pd(TREFOIL), [0])
    clasps = trivial_clasps(d)
    assert clasps
    out = remove_clasp(d, clasps[0])
    assert out.n == 1 and nugatory_crossings(out) == {0}


@pytest.mark.parametrize("name", sorted(fixtures()))
def test_fixture_predicates_match_brute(name):
    d = fixtures()[name]
    assert dealternators(d)[0] == dealternators_brute(d)
    assert nugatory_crossings(d) == nugatory_brute(d)
    assert is_prime(d) == is_prime_brute(d)
    assert sorted({s.crossings for s in trivial_clasps(d)}) == trivial_clasps_brute(d)


@settings(max_examples=60)
@given(almost_alternating())
def test_predicates_match_brute(d):
    ds, status = dealternators(d)
    assert ds == dealternators_brute(d)
    assert nugatory_crossings(d) == nugatory_brute(d)
    assert is_prime(d) == is_prime_brute(d)
    assert sorted({s.crossings for s in trivial_clasps(d)}) == trivial_clasps_brute(d)
    assert (status == DealtStatus.UNIQUE) == (len(ds) == 1)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_flipped_crossing_is_a_dealternator(seed):
    d = next(random_alternating_knots(random.Random(seed), 3, 10))
    for c, x in enumerate(almost_alternating_from(d)):
        assert c in dealternators(x)[0]


@settings(max_examples=40)
@given(almost_alternating(), st.integers(1, 4))
def test_reduce_kinks_monotone_and_invariant(d, extra):
    # summing with one-crossing kinks adds nugatory crossings
    from aaknots.corpus import connected_sum

    k = parse_pd(KINK)
    for i in range(extra):
        d = connected_sum(d, k, ea=i % (4 * d.n))
    out, removed = reduce_kinks(d)
    assert is_reduced(out)
    assert out.n == d.n - len(removed)
    assert len(removed) >= extra
    assert jones(out) == jones(d)


@settings(max_examples=30)
@given(almost_alternating())
def test_primeness_of_sum(d):
    from aaknots.corpus import connected_sum

    t = parse_pd(TREFOIL)
    s = connected_sum(d, t)
    assert decomposing_pairs(s)
    assert not is_prime(s) and not is_prime_brute(s)


def test_flyped_tongue_sides_have_flype_components(small_corpus):
    checked = 0
    for d in small_corpus:
        if not is_strongly_reduced(d) or not is_prime(d):
            continue
        for site in flyped_tongues(d):
            assert has_flype_component_brute(d, site.edge_dq, True)
            assert has_flype_component_brute(d, site.edge_dq, False)
            checked += 1
    assert checked > 0


def test_corpus_predicate_summary(small_corpus):
    # every generated diagram is reduced with a unique dealternator
    for d in small_corpus:
        ds, status = dealternators(d)
        assert status == DealtStatus.UNIQUE and is_reduced(d)
        assert canonical_code(d)
