"""Test material: named fixtures and randomly built almost alternating diagrams.

Random diagrams come from closed braids: the closure of a braid word is a
planar shadow, any shadow admits alternating crossing data, and changing one
crossing of a reduced alternating diagram gives an almost alternating one.
This source shares no code with the move calculus, so it is an independent
check on the generator.
"""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .diagram import Diagram, components, flip, is_connected, make_alternating, parse_pd, rebuild, reflect
from .recognition import decomposing_pairs, is_reduced

# slots of a braid crossing, counterclockwise: strands run SW->NE and SE->NW
_NE, _NW, _SW, _SE = 0, 1, 2, 3

TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
FIGURE_EIGHT = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"
CINQUEFOIL = "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]"
KINK = "X[1,1,2,2]"
HOPF = "X[1,3,2,4] X[3,1,4,2]"


def braid_closure(word: Sequence[int], strands: int) -> Diagram:
    """Closed braid shadow; ``word`` lists generator indices 1..strands-1
    (signs are ignored, crossing data is set afterwards)."""
    n = len(word)
    nbr = [-1] * (4 * n)
    open_: list[int | None] = [None] * strands
    first: list[int | None] = [None] * strands

    def link(x, y):
        nbr[x], nbr[y] = y, x

    for c, g in enumerate(word):
        i = abs(g) - 1
        if not 0 <= i < strands - 1:
            raise ValueError(f"generator {g} out of range")
        for pos, slot in ((i, _SW), (i + 1, _SE)):
            if open_[pos] is None:
                first[pos] = 4 * c + slot
            else:
                link(open_[pos], 4 * c + slot)
        open_[i], open_[i + 1] = 4 * c + _NW, 4 * c + _NE
    for p in range(strands):
        if open_[p] is None:
            raise ValueError(f"braid position {p} carries no crossing")
        link(open_[p], first[p])
    return Diagram(tuple(nbr), (0,) * n)


def random_braid_word(rng: random.Random, strands: int, length: int) -> list[int]:
    while True:
        word = [rng.randrange(1, strands) for _ in range(length)]
        if set(word) == set(range(1, strands)):
            return word


def random_alternating_knots(rng: random.Random, min_n: int, max_n: int) -> Iterator[Diagram]:
    """Endless stream of reduced prime alternating knot diagrams."""
    while True:
        strands = rng.randrange(2, 5)
        length = rng.randrange(max(min_n, strands - 1), max_n + 1)
        try:
            shadow = braid_closure(random_braid_word(rng, strands, length), strands)
        except ValueError:
            continue
        if components(shadow) != 1 or not is_connected(shadow):
            continue
        d = make_alternating(shadow)
        if not is_reduced(d) or decomposing_pairs(d):
            continue
        yield d


def almost_alternating_from(d: Diagram) -> list[Diagram]:
    """Every single-crossing change of an alternating diagram."""
    return [flip(d, [c]) for c in range(d.n)]


def fixtures() -> dict[str, Diagram]:
    """Hand-built diagrams covering each predicate outcome."""
    tref = parse_pd(TREFOIL)
    granny = connected_sum(tref, tref)
    return {
        "trefoil": tref,
        "flipped_trefoil": flip(tref, [0]),
        "figure_eight": parse_pd(FIGURE_EIGHT),
        "kink": parse_pd(KINK),
        "flipped_cinquefoil": flip(parse_pd(CINQUEFOIL), [0]),
        "granny": granny,
        "flipped_hopf": flip(parse_pd(HOPF), [0]),
        "double_flip": flip(parse_pd(FIGURE_EIGHT), [0, 2]),
    }


def connected_sum(a: Diagram, b: Diagram, ea: int = 0, eb: int = 0) -> Diagram:
    """Splice ``b`` into the edge at dart ``ea`` of ``a`` (through ``b``'s edge at ``eb``)."""
    n = a.n
    nbr = list(a.nbr) + [x + 4 * n for x in b.nbr]
    under = list(a.under) + list(b.under)
    x, y = ea, a.nbr[ea]
    u, v = 4 * n + eb, 4 * n + b.nbr[eb]
    # cut both edges and cross-connect so the sum stays planar
    nbr[x], nbr[v] = v, x
    nbr[y], nbr[u] = u, y
    return Diagram(tuple(nbr), tuple(under), (False,) * (n + b.n), a.loops + b.loops)
