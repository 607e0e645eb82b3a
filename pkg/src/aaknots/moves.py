"""Rewrite engine: flype, untongue, untwirl, their inverses, RII and RI.

Local rules are stored as small rule tables (``Model``) and matched onto a
diagram through an anchor dart. A match fixes an orientation ``o`` (+1 keeps
the counterclockwise slot order, -1 reverses it, i.e. the planar mirror
image) and a flip ``f`` (1 exchanges every over/under in the rule). All four
variants of a rule therefore come from one table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .diagram import Diagram, DiagramError, canonical_code, rebuild, reflect
from .recognition import (
    ClaspSite,
    PreconditionError,
    TongueSite,
    dealternators,
    DealtStatus,
    is_reduced,
    nugatory_crossings,
    remove_clasp,
    remove_nugatory,
    tongue_data,
    trivial_clasps,
)

UNTONGUE_DELTA = 2
UNTWIRL_DELTA = 3


class MoveKind(str, Enum):
    FLYPE = "FLYPE"
    UNTONGUE = "UNTONGUE"
    UNTWIRL = "UNTWIRL"
    TONGUE = "TONGUE"
    TWIRL = "TWIRL"
    R2_CLASP = "R2_CLASP"
    R1_KINK = "R1_KINK"


class MoveError(ValueError):
    """A move was applied at a site it does not fit."""


class StaleSiteError(MoveError):
    pass


# -- rule tables ---------------------------------------------------------

@dataclass(frozen=True)
class Model:
    """A rule side: crossings with four targets each, in CCW slot order.

    A target is ``("c", j, k)`` for slot ``k`` of model crossing ``j`` or
    ``("p", name)`` for an edge leaving the rule disk.
    """

    slots: tuple[tuple[tuple, ...], ...]
    under: tuple[int, ...]
    dealt: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.under)


def _c(j, k):
    return ("c", j, k)


def _p(name):
    return ("p", name)


# The dealternator D sits between q and the two flype-crossings XL and XR,
# all three flype-tangles trivial. Boundary edges in cyclic order:
# a, R2, R1, b, L1, L2.
TONGUE_SIDE = Model(
    slots=(
        (_c(3, 2), _c(1, 3), _c(2, 3), _p("a")),      # 0: dealternator
        (_c(3, 1), _p("b"), _c(2, 0), _c(0, 1)),      # 1: q
        (_c(1, 2), _p("L1"), _p("L2"), _c(0, 2)),     # 2: XL
        (_p("R1"), _c(1, 0), _c(0, 0), _p("R2")),     # 3: XR
    ),
    under=(0, 0, 1, 0),
    dealt=(True, False, False, False),
)

# After the untongue: the new dealternator and one more crossing.
UNTONGUED_SIDE = Model(
    slots=(
        (_p("R2"), _c(1, 3), _p("L2"), _p("a")),      # 0: dealternator
        (_p("R1"), _p("b"), _p("L1"), _c(0, 1)),      # 1: y
    ),
    under=(0, 0),
    dealt=(True, False),
)

# A twirl is a tongue whose q and XL are joined by a second edge.
TWIRL_SIDE = Model(
    slots=(
        (_c(3, 2), _c(1, 3), _c(2, 3), _p("a")),
        (_c(3, 1), _c(2, 1), _c(2, 0), _c(0, 1)),
        (_c(1, 2), _c(1, 1), _p("L2"), _c(0, 2)),
        (_p("R1"), _c(1, 0), _c(0, 0), _p("R2")),
    ),
    under=(0, 0, 1, 0),
    dealt=(True, False, False, False),
)

UNTWIRLED_SIDE = Model(
    slots=((_p("R2"), _p("R1"), _p("L2"), _p("a")),),
    under=(0,),
    dealt=(True,),
)


@dataclass(frozen=True)
class Match:
    crossings: tuple[int, ...]
    rot: tuple[int, ...]
    o: int
    f: int

    def dart(self, j: int, k: int) -> int:
        return 4 * self.crossings[j] + (self.rot[j] + self.o * k) % 4


def match_model(d: Diagram, model: Model, j0: int, k0: int, anchor: int, o: int) -> Match | None:
    """Match ``model`` so that its slot ``(j0, k0)`` lands on dart ``anchor``."""
    c0 = anchor // 4
    cs: list[int | None] = [None] * model.size
    rot: list[int | None] = [None] * model.size
    cs[j0], rot[j0] = c0, (anchor % 4 - o * k0) % 4
    f = (rot[j0] + d.under[c0] + model.under[j0]) % 2
    q = deque([j0])
    while q:
        j = q.popleft()
        for k, tgt in enumerate(model.slots[j]):
            if tgt[0] != "c":
                continue
            _, j2, k2 = tgt
            x = 4 * cs[j] + (rot[j] + o * k) % 4
            y = d.nbr[x]
            c2, s2 = divmod(y, 4)
            r2 = (s2 - o * k2) % 4
            if cs[j2] is None:
                if c2 in cs:
                    return None
                cs[j2], rot[j2] = c2, r2
                q.append(j2)
            elif cs[j2] != c2 or rot[j2] != r2:
                return None
    if any(c is None for c in cs) or len(set(cs)) != len(cs):
        return None
    for j in range(model.size):
        if (rot[j] + d.under[cs[j]] + model.under[j]) % 2 != f:
            return None
    return Match(tuple(cs), tuple(rot), o, f)


def replace(d: Diagram, lhs: Model, m: Match, rhs: Model) -> Diagram:
    """Swap the matched copy of ``lhs`` for ``rhs`` (same boundary names)."""
    port_dart: dict[str, int] = {}
    for j, row in enumerate(lhs.slots):
        for k, tgt in enumerate(row):
            if tgt[0] == "p":
                port_dart[tgt[1]] = m.dart(j, k)
    links = []
    seen = set()
    for j, row in enumerate(rhs.slots):
        for k, tgt in enumerate(row):
            a = ("new", j, (m.o * k) % 4)
            if tgt[0] == "p":
                links.append((a, ("port", port_dart[tgt[1]])))
            else:
                b = ("new", tgt[1], (m.o * tgt[2]) % 4)
                key = frozenset((a, b))
                if key not in seen:
                    seen.add(key)
                    links.append((a, b))
    used = {tgt[1] for row in rhs.slots for tgt in row if tgt[0] == "p"}
    missing = set(port_dart) - used
    if missing:
        raise MoveError(f"rule leaves boundary edges {sorted(missing)} unattached")
    under = [(u + m.f) % 2 for u in rhs.under]
    dealt = set(c for c in range(d.n) if d.dealt[c]) - set(m.crossings)
    base = Diagram(d.nbr, d.under, tuple(c in dealt for c in range(d.n)), d.loops)
    return rebuild(base, m.crossings, under, list(rhs.dealt), links)


# -- sites ---------------------------------------------------------------

@dataclass(frozen=True)
class KinkSite:
    crossing: int
    source: str = ""

    def encode(self) -> str:
        return f"{self.crossing}@{self.source}"


@dataclass(frozen=True)
class FlypeSite:
    """Crossing ``crossing`` sits next to ``tangle``; ``x_darts`` are its two
    darts facing the tangle (second one counterclockwise after the first) and
    ``ends`` the tangle darts on the far edges, ``ends[0]`` on the same face
    as ``x_darts[0]``."""

    crossing: int
    tangle: frozenset
    x_darts: tuple[int, int]
    ends: tuple[int, int]
    source: str = ""

    def boundary_edges(self, d: Diagram) -> tuple[tuple[int, int], ...]:
        xs = [(t, d.nbr[t]) for t in self.x_darts]
        es = [(e, d.nbr[e]) for e in self.ends]
        return tuple(xs + es)

    def encode(self) -> str:
        return f"{self.crossing}:{self.x_darts[0]}:{self.ends[0]},{self.ends[1]}@{self.source}"


@dataclass(frozen=True)
class Placement:
    """Where a tongue or twirl is attached: the rule's anchor slot lands on
    ``anchor`` with orientation ``o``."""

    kind: MoveKind
    anchor: int
    o: int
    source: str = ""

    def encode(self) -> str:
        return f"{self.anchor}:{self.o}@{self.source}"


@dataclass(frozen=True)
class MoveRecord:
    kind: MoveKind
    site: object
    mirror_variant: bool = False

    def encode(self) -> str:
        return f"{self.kind.value} {encode_site(self.site)} {int(self.mirror_variant)}"


def encode_site(site) -> str:
    if isinstance(site, ClaspSite):
        return f"{site.crossings[0]},{site.crossings[1]}:{site.edges[0]},{site.edges[1]}@{site.source}"
    if isinstance(site, TongueSite):
        return f"{site.edge_dq}@{site.source}"
    return site.encode()


def _check_source(d: Diagram, source: str) -> None:
    if source and source != d.fingerprint():
        raise StaleSiteError(f"site was derived from diagram {source}, not {d.fingerprint()}")


def decode_record(line: str, d: Diagram) -> MoveRecord:
    """Parse one certificate line against the diagram it applies to."""
    parts = line.split()
    if len(parts) != 3:
        raise MoveError(f"malformed move line {line!r}")
    kind = MoveKind(parts[0])
    body, _, source = parts[1].partition("@")
    mirror = parts[2] == "1"
    _check_source(d, source)
    try:
        if kind == MoveKind.R2_CLASP:
            cs, es = body.split(":")
            a, b = map(int, cs.split(","))
            e1, e2 = map(int, es.split(","))
            live = [s for s in trivial_clasps(d) if s.crossings == (a, b) and s.edges == (e1, e2)]
            if not live:
                raise MoveError(f"no trivial clasp at {body}")
            return MoveRecord(kind, live[0], mirror)
        if kind == MoveKind.R1_KINK:
            return MoveRecord(kind, KinkSite(int(body), source), mirror)
        if kind in (MoveKind.UNTONGUE, MoveKind.UNTWIRL):
            return MoveRecord(kind, tongue_data(d, int(body)), mirror)
        if kind == MoveKind.FLYPE:
            x, t1, ends = body.split(":")
            e1, e2 = map(int, ends.split(","))
            return MoveRecord(kind, make_flype_site(d, int(x), int(t1), (e1, e2)), mirror)
        anchor, o = map(int, body.split(":"))
        return MoveRecord(kind, Placement(kind, anchor, o, source), mirror)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, MoveError):
            raise
        raise MoveError(f"cannot decode site {parts[1]!r}: {exc}") from exc


# -- RII and RI ------------------------------------------------------------

def apply_r2_clasp(d: Diagram, s: ClaspSite) -> Diagram:
    _check_source(d, s.source)
    try:
        out = remove_clasp(d, s)
    except PreconditionError as exc:
        raise MoveError(str(exc)) from exc
    assert out.n == d.n - 2
    return out


def apply_r1_kink(d: Diagram, s: KinkSite | int) -> Diagram:
    if isinstance(s, KinkSite):
        _check_source(d, s.source)
        s = s.crossing
    if s not in nugatory_crossings(d):
        raise MoveError(f"crossing {s} is not nugatory")
    return remove_nugatory(d, s)


# -- flypes --------------------------------------------------------------

def _tangle_from(d: Diagram, x: int, x_darts: tuple[int, int], cut_darts: set[int]) -> set[int] | None:
    tangle: set[int] = set()
    q = deque()
    for t in x_darts:
        m = d.nbr[t]
        if m // 4 == x:
            return None
        if m // 4 not in tangle:
            tangle.add(m // 4)
            q.append(m // 4)
    while q:
        c = q.popleft()
        for s in range(4):
            y = 4 * c + s
            if y in cut_darts:
                continue
            m = d.nbr[y]
            if m // 4 == x:
                if m not in x_darts:
                    return None
                continue
            if m // 4 not in tangle:
                tangle.add(m // 4)
                q.append(m // 4)
    return tangle


def make_flype_site(d: Diagram, x: int, t1: int, ends: tuple[int, int]) -> FlypeSite:
    """Validate and normalise a flype of crossing ``x`` across the tangle
    entered through dart ``t1`` and its counterclockwise neighbour."""
    if t1 // 4 != x:
        raise MoveError("first tangle-facing dart must belong to the flype crossing")
    t2 = 4 * x + (t1 + 1) % 4
    fo = d.face_of()
    n_face = fo[4 * x + (t1 - 1) % 4]
    s_face = fo[t2]
    tangle = _tangle_from(d, x, (t1, t2), set(ends))
    if not tangle:
        raise MoveError("flype tangle is empty or loops back through the crossing")
    if any(e // 4 not in tangle for e in ends):
        raise MoveError("flype tangle ends are not on the tangle")
    out_darts = {y for c in tangle for y in range(4 * c, 4 * c + 4) if d.nbr[y] // 4 not in tangle}
    if out_darts != {d.nbr[t1], d.nbr[t2], *ends}:
        raise MoveError("flype tangle is not bounded by four edges")
    rest = set(range(d.n)) - tangle
    if not _connected_within(d, rest):
        raise MoveError("flype circle does not bound a disk")
    e_n, e_s = ends

    def borders(e, f):
        return f in (fo[e], fo[d.nbr[e]])

    if not (borders(e_n, n_face) and borders(e_s, s_face)):
        if borders(e_s, n_face) and borders(e_n, s_face):
            e_n, e_s = e_s, e_n
        else:
            raise MoveError("flype tangle ends do not lie on the flype circle")
    return FlypeSite(x, frozenset(tangle), (t1, t2), (e_n, e_s), d.fingerprint())


def _connected_within(d: Diagram, cs: set[int]) -> bool:
    if not cs:
        return True
    start = min(cs)
    seen = {start}
    q = deque([start])
    while q:
        c = q.popleft()
        for s in range(4):
            o = d.nbr[4 * c + s] // 4
            if o in cs and o not in seen:
                seen.add(o)
                q.append(o)
    return seen == cs


def apply_flype(d: Diagram, s: FlypeSite) -> Diagram:
    """Turn the tangle over and carry the crossing to its other side."""
    _check_source(d, s.source)
    x = s.crossing
    t1, t2 = s.x_darts
    tn, ts = s.ends
    j = t1 % 4
    xn_e, xs_e = 4 * x + (j - 1) % 4, 4 * x + (j + 2) % 4
    order = sorted(s.tangle)
    idx = {c: i for i, c in enumerate(order)}
    xi = len(order)

    def new(dt: int) -> tuple:
        # darts of tangle crossings are mirrored (slot k -> -k)
        c, k = divmod(dt, 4)
        if c == x:
            return ("new", xi, k)
        return ("new", idx[c], (-k) % 4)

    t_ne, t_se = d.nbr[t1], d.nbr[t2]
    special = {t1, t2, xn_e, xs_e, tn, ts, t_ne, t_se}
    links = [
        (new(t1), ("port", tn)),
        (new(t2), ("port", ts)),
        (new(xn_e), new(ts)),
        (new(xs_e), new(tn)),
        (new(t_se), ("port", xn_e)),
        (new(t_ne), ("port", xs_e)),
    ]
    for c in order:
        for k in range(4):
            y = 4 * c + k
            if y in special:
                continue
            m = d.nbr[y]
            if m // 4 not in s.tangle:
                raise MoveError("tangle has an unexpected boundary edge")
            if y < m:
                links.append((new(y), new(m)))
    under = [d.under[c] ^ 1 for c in order] + [d.under[x]]
    dealt = [d.dealt[c] for c in order] + [d.dealt[x]]
    try:
        return rebuild(d, order + [x], under, dealt, links)
    except DiagramError as exc:
        raise MoveError(f"flype failed: {exc}") from exc


def flype_sites(d: Diagram) -> list[FlypeSite]:
    """Every flype of a crossing across an adjacent 2-tangle."""
    fo = d.face_of()
    faces = d.faces()
    out = []
    seen = set()
    for x in range(d.n):
        for j in range(4):
            t1, t2 = 4 * x + j, 4 * x + (j + 1) % 4
            n_face, s_face = fo[4 * x + (j - 1) % 4], fo[t2]
            if n_face == s_face or d.nbr[t1] // 4 == x or d.nbr[t2] // 4 == x:
                continue
            # the flype circle leaves N and S through edges of one far face
            by_far: dict[int, list[int]] = {}
            for y in faces[n_face].darts:
                if y // 4 != x and d.nbr[y] // 4 != x:
                    by_far.setdefault(fo[d.nbr[y]], []).append(y)
            pairs = []
            for y in faces[s_face].darts:
                if y // 4 != x and d.nbr[y] // 4 != x:
                    pairs.extend((en, y) for en in by_far.get(fo[d.nbr[y]], ()))
            for en, es in sorted(pairs):
                if en == es or en == d.nbr[es]:
                    continue
                cut = {en, d.nbr[en], es, d.nbr[es]}
                tangle = _tangle_from(d, x, (t1, t2), cut)
                if not tangle:
                    continue
                ends = []
                for e in (en, es):
                    e_in = e if e // 4 in tangle else d.nbr[e]
                    if e_in // 4 not in tangle or d.nbr[e_in] // 4 in tangle:
                        break
                    ends.append(e_in)
                if len(ends) != 2:
                    continue
                key = (x, t1, frozenset(tangle))
                if key in seen:
                    continue
                try:
                    site = make_flype_site(d, x, t1, (ends[0], ends[1]))
                except MoveError:
                    continue
                seen.add(key)
                out.append(site)
    return out


# -- untongue / untwirl ------------------------------------------------------

def _match_tongue(d: Diagram, site: TongueSite, model: Model) -> Match | None:
    # q's slot 3 carries the non-alternating edge towards the dealternator
    for o in (1, -1):
        m = match_model(d, model, 1, 3, site.edge_dq, o)
        if m is not None and m.crossings[0] == site.dealternator:
            return m
    return None


def _untongue_like(d, site, lhs, rhs, kind, delta):
    _check_source(d, site.source)
    if not (site.left.trivial and site.right.trivial):
        raise MoveError(f"{kind.value}: flype-tangles are not both trivial")
    m = _match_tongue(d, site, lhs)
    if m is None:
        raise MoveError(f"{kind.value}: local pattern does not match")
    out = replace(d, lhs, m, rhs)
    assert out.n == d.n - delta
    return out, m


def apply_untongue(d: Diagram, site: TongueSite) -> Diagram:
    out, _ = _untongue_like(d, site, TONGUE_SIDE, UNTONGUED_SIDE, MoveKind.UNTONGUE, UNTONGUE_DELTA)
    if not is_reduced(out):
        raise MoveError("UNTONGUE: result is not reduced (an untwirl applies instead)")
    return out


def apply_untwirl(d: Diagram, site: TongueSite) -> Diagram:
    out, _ = _untongue_like(d, site, TWIRL_SIDE, UNTWIRLED_SIDE, MoveKind.UNTWIRL, UNTWIRL_DELTA)
    return out


def untongue_mirror(d: Diagram, site: TongueSite, kind: MoveKind) -> bool:
    lhs = TONGUE_SIDE if kind == MoveKind.UNTONGUE else TWIRL_SIDE
    m = _match_tongue(d, site, lhs)
    return bool(m and m.f)


# -- tongue / twirl ----------------------------------------------------------

def _dealternator_of(d: Diagram) -> int | None:
    ds, status = dealternators(d)
    if status != DealtStatus.UNIQUE:
        return None
    return next(iter(ds))


def _placement_match(d: Diagram, p: Placement) -> Match | None:
    if p.kind == MoveKind.TONGUE:
        # the anchor is the dealternator's dart on the edge to y
        return match_model(d, UNTONGUED_SIDE, 0, 1, p.anchor, p.o)
    if p.kind == MoveKind.TWIRL:
        return match_model(d, UNTWIRLED_SIDE, 0, 1, p.anchor, p.o)
    raise MoveError(f"not a placement kind: {p.kind}")


def _apply_placement(d: Diagram, p: Placement) -> Diagram:
    _check_source(d, p.source)
    delta = _dealternator_of(d)
    if delta is None or p.anchor // 4 != delta:
        raise MoveError(f"{p.kind.value}: placement must be anchored at the dealternator")
    m = _placement_match(d, p)
    if m is None:
        raise MoveError(f"{p.kind.value}: illegal placement")
    if p.kind == MoveKind.TONGUE:
        out = replace(d, UNTONGUED_SIDE, m, TONGUE_SIDE)
        assert out.n == d.n + UNTONGUE_DELTA
    else:
        out = replace(d, UNTWIRLED_SIDE, m, TWIRL_SIDE)
        assert out.n == d.n + UNTWIRL_DELTA
    return out


def apply_tongue(d: Diagram, p: Placement) -> Diagram:
    if p.kind != MoveKind.TONGUE:
        raise MoveError("apply_tongue needs a TONGUE placement")
    return _apply_placement(d, p)


def apply_twirl(d: Diagram, p: Placement) -> Diagram:
    if p.kind != MoveKind.TWIRL:
        raise MoveError("apply_twirl needs a TWIRL placement")
    return _apply_placement(d, p)


def placement_mirror(d: Diagram, p: Placement) -> bool:
    m = _placement_match(d, p)
    return bool(m and m.f)


def new_tongue_edge(out: Diagram) -> int:
    """Dart at q on the non-alternating edge q -> dealternator of a fresh tongue.

    Rule crossings are appended in table order, so the dealternator and q
    are the first two crossings of the trailing four-crossing block.
    """
    delta, q = out.n - 4, out.n - 3
    for y in range(4 * q, 4 * q + 4):
        if out.nbr[y] // 4 == delta:
            return y
    raise MoveError("no tongue at the end of this diagram")


def enumerate_placements(d: Diagram, kind) -> list:
    """Duplicate-free legal applications of ``kind`` on ``d``.

    Placements are deduplicated by the canonical code of their result.
    Tongue and twirl placements whose result is not a reduced almost
    alternating diagram are dropped.
    """
    return [p for p, _ in placements_with_results(d, kind)]


def placements_with_results(d: Diagram, kind) -> list[tuple[object, Diagram]]:
    kind = MoveKind(kind)
    out, codes = [], set()
    if kind == MoveKind.FLYPE:
        for s in flype_sites(d):
            try:
                res = apply_flype(d, s)
            except MoveError:
                continue
            c = canonical_code(res)
            if c not in codes:
                codes.add(c)
                out.append((s, res))
        return out
    if kind not in (MoveKind.TONGUE, MoveKind.TWIRL):
        raise MoveError(f"no placements for {kind.value}")
    delta = _dealternator_of(d)
    if delta is None:
        return []
    for k in range(4):
        for o in (1, -1):
            p = Placement(kind, 4 * delta + k, o, d.fingerprint())
            if _placement_match(d, p) is None:
                continue
            try:
                res = _apply_placement(d, p)
            except (MoveError, DiagramError):
                continue
            if not is_reduced(res) or _dealternator_of(res) is None:
                continue
            c = canonical_code(res)
            if c not in codes:
                codes.add(c)
                out.append((p, res))
    return out


def apply_record(d: Diagram, rec: MoveRecord) -> Diagram:
    k = rec.kind
    if k == MoveKind.R2_CLASP:
        return apply_r2_clasp(d, rec.site)
    if k == MoveKind.R1_KINK:
        return apply_r1_kink(d, rec.site)
    if k == MoveKind.FLYPE:
        return apply_flype(d, rec.site)
    if k == MoveKind.UNTONGUE:
        return apply_untongue(d, rec.site)
    if k == MoveKind.UNTWIRL:
        return apply_untwirl(d, rec.site)
    if k == MoveKind.TONGUE:
        return apply_tongue(d, rec.site)
    if k == MoveKind.TWIRL:
        return apply_twirl(d, rec.site)
    raise MoveError(f"unknown move kind {k}")
