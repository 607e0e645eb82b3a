"""Base unknot diagrams and the breadth-first generator.

Every reduced almost alternating unknot diagram is reachable from some
``C_m`` by tongue, twirl and flype moves, so closing the base family under
those moves (up to a crossing bound) enumerates them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .diagram import Diagram, DiagramError, canonical_code, check_planar, flip, make_alternating, mirror, with_marks
from .moves import MoveKind, placements_with_results
from .recognition import DealtStatus, PreconditionError, dealternators, is_alternating, is_reduced

# slots of a twist crossing, counterclockwise
NE, NW, SW, SE = 0, 1, 2, 3


def _twist_links(m: int, offset: int = 0) -> list[tuple[int, int]]:
    out = []
    for i in range(m - 1):
        a, b = offset + i, offset + i + 1
        out.append((4 * a + NE, 4 * b + NW))
        out.append((4 * a + SE, 4 * b + SW))
    return out


def _from_links(n: int, links: Iterable[tuple[int, int]]) -> list[int]:
    nbr = [-1] * (4 * n)
    for x, y in links:
        if nbr[x] >= 0 or nbr[y] >= 0:
            raise DiagramError("dart linked twice")
        nbr[x], nbr[y] = y, x
    if min(nbr) < 0:
        raise DiagramError("unlinked dart")
    return nbr


def encode_coil(m: int) -> Diagram:
    """A row of ``|m|`` twists closed by a cap at each end: ``|m|`` kinks.

    The sign of ``m`` picks the twist handedness (negative values give the
    mirror image).
    """
    if m == 0:
        raise ValueError("m must be non-zero")
    k = abs(m)
    links = _twist_links(k) + [(NW, SW), (4 * (k - 1) + NE, 4 * (k - 1) + SE)]
    d = Diagram(tuple(_from_links(k, links)), (0,) * k)
    check_planar(d)
    return mirror(d) if m < 0 else d


def encode_C(m: int) -> Diagram:
    """The base diagram: a row of ``|m|`` twists plus a clasp.

    The clasp crossings sit below the twist row; the upper clasp crossing is
    the dealternator. Resolving the clasp by RII leaves ``encode_coil(m)``.
    """
    if m == 0:
        raise ValueError("m must be non-zero")
    k = abs(m)
    v1, v2 = k, k + 1
    links = _twist_links(k) + [
        (4 * v1 + SW, 4 * v2 + NW),
        (4 * v1 + SE, 4 * v2 + NE),
        (SW, 4 * v1 + NW),
        (4 * (k - 1) + SE, 4 * v1 + NE),
        (NW, 4 * v2 + SW),
        (4 * (k - 1) + NE, 4 * v2 + SE),
    ]
    d = Diagram(tuple(_from_links(k + 2, links)), (0,) * (k + 2))
    check_planar(d)
    d = make_alternating(d)
    d = with_marks(flip(d, [v1]), [v1])
    return mirror(d) if m < 0 else d


def u1_alternating(d: Diagram) -> Diagram:
    """Change the dealternator; the result is alternating."""
    ds, status = dealternators(d)
    if status != DealtStatus.UNIQUE:
        raise PreconditionError("unique dealternator", status.value)
    c = next(iter(ds))
    out = flip(d, [c])
    if not is_alternating(out) or not is_reduced(out):
        raise PreconditionError("reduced almost alternating", "crossing change did not give a reduced alternating diagram")
    return out


@dataclass
class EnumConfig:
    max_crossings: int
    m_values: frozenset = field(default_factory=lambda: frozenset({1, -1, 2, -2, 3, -3}))
    dedup: bool = True

    def __post_init__(self):
        if self.max_crossings < 1:
            raise ValueError("max_crossings must be positive")
        self.m_values = frozenset(self.m_values)
        if 0 in self.m_values:
            raise ValueError("m values must be non-zero")


def _is_generator_output(d: Diagram) -> bool:
    ds, status = dealternators(d)
    return status == DealtStatus.UNIQUE and is_reduced(d)


def enumerate_unknot_diagrams(cfg: EnumConfig, stats: dict | None = None) -> list[Diagram]:
    """Closure of the base diagrams under tongue, twirl and flype moves.

    Diagrams are processed in order of crossing number. Each new diagram's
    flype orbit is exhausted before it is expanded by tongues and twirls.
    The result is sorted by (crossings, canonical code). Without
    ``cfg.dedup`` every move result that passes the filters is reported,
    repeats included (expansion still visits each class once). ``stats``,
    when given, receives the number of move applications per kind.
    """
    seen: dict[str, Diagram] = {}
    levels: dict[int, list[Diagram]] = {}
    emitted: list[Diagram] = []

    def push(d: Diagram) -> None:
        if d.n > cfg.max_crossings or not _is_generator_output(d):
            return
        code = canonical_code(d)
        if not cfg.dedup:
            emitted.append(d)
        if code in seen:
            return
        seen[code] = d
        levels.setdefault(d.n, []).append(d)

    def count(kind: MoveKind, k: int) -> None:
        if stats is not None:
            stats[kind.value] = stats.get(kind.value, 0) + k

    for m in sorted(cfg.m_values, key=lambda v: (abs(v), v)):
        push(encode_C(m))
    for n in range(cfg.max_crossings + 1):
        level = levels.get(n, [])
        i = 0
        # flype orbits first; flypes keep the crossing number
        while i < len(level):
            d = level[i]
            i += 1
            results = placements_with_results(d, MoveKind.FLYPE)
            count(MoveKind.FLYPE, len(results))
            for _, res in results:
                push(res)
        for d in list(level):
            for kind, step in ((MoveKind.TONGUE, 2), (MoveKind.TWIRL, 3)):
                if d.n + step > cfg.max_crossings:
                    continue
                results = placements_with_results(d, kind)
                count(kind, len(results))
                for _, res in results:
                    push(res)
    out = list(seen.values()) if cfg.dedup else emitted
    out.sort(key=lambda d: (d.n, canonical_code(d)))
    return out
