"""Diagram predicates and flyped-tongue detection.

Everything here is defined on the sphere: no face is distinguished as the
outer one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .diagram import Diagram, components, flip, is_connected, rebuild, reflect


class PreconditionError(ValueError):
    """An operation was applied to a diagram outside its domain."""

    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        super().__init__(f"precondition failed: {predicate}" + (f" ({detail})" if detail else ""))


def edge_alternates(d: Diagram, x: int) -> bool:
    return d.is_over(x) != d.is_over(d.nbr[x])


def is_alternating(d: Diagram) -> bool:
    if d.n == 0:
        return False
    return all(edge_alternates(d, x) for x in range(4 * d.n))


def non_alternating_darts(d: Diagram) -> list[int]:
    return [x for x in range(4 * d.n) if not edge_alternates(d, x)]


class DealtStatus(str, Enum):
    UNIQUE = "unique"
    MULTIPLE = "multiple"
    ALTERNATING = "alternating"
    TRIVIAL = "trivial"
    NOT_ALMOST_ALTERNATING = "not-almost-alternating"


def dealternators_brute(d: Diagram) -> set[int]:
    """Crossings whose change makes the diagram alternating, by trying each one."""
    if d.n == 0 or is_alternating(d):
        return set()
    return {c for c in range(d.n) if is_alternating(flip(d, [c]))}


def dealternators(d: Diagram) -> tuple[set[int], DealtStatus]:
    if d.n == 0:
        return set(), DealtStatus.TRIVIAL
    bad = {min(x, d.nbr[x]) for x in non_alternating_darts(d)}
    if not bad:
        return set(), DealtStatus.ALTERNATING
    # a crossing change toggles exactly the edges with one end at that crossing
    out = set()
    for c in {x // 4 for x in bad} | {d.nbr[x] // 4 for x in bad}:
        toggled = {min(x, d.nbr[x]) for x in range(4 * c, 4 * c + 4) if d.nbr[x] // 4 != c}
        if toggled == bad:
            out.add(c)
    if not out:
        return out, DealtStatus.NOT_ALMOST_ALTERNATING
    return out, DealtStatus.UNIQUE if len(out) == 1 else DealtStatus.MULTIPLE


def is_almost_alternating(d: Diagram) -> bool:
    return bool(dealternators(d)[0])


def the_dealternator(d: Diagram) -> int:
    ds, status = dealternators(d)
    if status != DealtStatus.UNIQUE:
        raise PreconditionError("unique dealternator", status.value)
    return next(iter(ds))


def nugatory_crossings(d: Diagram) -> set[int]:
    fo = d.face_of()
    return {c for c in range(d.n) if fo[4 * c] == fo[4 * c + 2] or fo[4 * c + 1] == fo[4 * c + 3]}


def nugatory_brute(d: Diagram) -> set[int]:
    """Crossings that are cut vertices of the projection: removing one leaves
    its four incident half-edges split into two groups that only meet there."""
    out = set()
    for c in range(d.n):
        # connectivity among the 4 ends of c, avoiding c itself
        reach = []
        for s in range(4):
            start = d.nbr[4 * c + s]
            if start // 4 == c:
                reach.append({start % 4})
                continue
            seen = {start // 4}
            q = deque([start // 4])
            ends = set()
            while q:
                x = q.popleft()
                for t in range(4):
                    m = d.nbr[4 * x + t]
                    if m // 4 == c:
                        ends.add(m % 4)
                    elif m // 4 not in seen:
                        seen.add(m // 4)
                        q.append(m // 4)
            reach.append(ends)
        for s in range(4):
            grp = reach[s] | {s}
            # a separating curve through c splits slots into two adjacent pairs
            if grp in ({s, (s + 1) % 4}, {s, (s - 1) % 4}):
                out.add(c)
    return out


def is_reduced(d: Diagram) -> bool:
    return not nugatory_crossings(d)


def _edges(d: Diagram) -> list[tuple[int, int]]:
    return [(x, d.nbr[x]) for x in range(4 * d.n) if x < d.nbr[x]]


def _split_by_cut(d: Diagram, cut: Iterable[tuple[int, int]]) -> list[set[int]]:
    cut_darts = set()
    for x, y in cut:
        cut_darts.update((x, y))
    comps: list[set[int]] = []
    seen: set[int] = set()
    for c0 in range(d.n):
        if c0 in seen:
            continue
        comp = {c0}
        seen.add(c0)
        q = deque([c0])
        while q:
            c = q.popleft()
            for s in range(4):
                x = 4 * c + s
                if x in cut_darts:
                    continue
                o = d.nbr[x] // 4
                if o not in seen:
                    seen.add(o)
                    comp.add(o)
                    q.append(o)
        comps.append(comp)
    return comps


def decomposing_pairs(d: Diagram) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Edge pairs bounding the same two faces that split off crossings on both sides."""
    fo = d.face_of()
    by_faces: dict[frozenset, list[tuple[int, int]]] = {}
    for x, y in _edges(d):
        key = frozenset((fo[x], fo[y]))
        if len(key) == 2:
            by_faces.setdefault(key, []).append((x, y))
    out = []
    for group in by_faces.values():
        for e1, e2 in combinations(group, 2):
            if len(_split_by_cut(d, [e1, e2])) >= 2:
                out.append((e1, e2))
    return out


def is_prime(d: Diagram) -> bool:
    if not is_connected(d):
        raise PreconditionError("connected")
    return not decomposing_pairs(d)


def is_prime_brute(d: Diagram) -> bool:
    """Try every pair of edges as the two points of a decomposing curve.

    The curve exists iff both edges lie on a common pair of faces; it
    splits the diagram iff cutting the two edges disconnects the crossings.
    """
    if not is_connected(d):
        raise PreconditionError("connected")
    faces_of_edge = {}
    for f_idx, f in enumerate(d.faces()):
        for x in f.darts:
            e = (min(x, d.nbr[x]), max(x, d.nbr[x]))
            faces_of_edge.setdefault(e, set()).add(f_idx)
    edges = sorted(faces_of_edge)
    for e1, e2 in combinations(edges, 2):
        common = faces_of_edge[e1] & faces_of_edge[e2]
        if len(common) < 2:
            continue
        if len(_split_by_cut(d, [e1, e2])) >= 2:
            return False
    return True


@dataclass(frozen=True)
class ClaspSite:
    face: int
    crossings: tuple[int, int]
    edges: tuple[int, int]  # one dart per bigon edge, on crossings[0]
    over_strand: int  # which bigon edge carries the strand that is over at both ends
    source: str = ""


def bigons(d: Diagram) -> list[tuple[int, tuple[int, ...]]]:
    return [(i, f.darts) for i, f in enumerate(d.faces()) if f.degree == 2]


def trivial_clasps(d: Diagram) -> list[ClaspSite]:
    out = []
    for idx, (x, y) in bigons(d):
        a, b = x // 4, y // 4
        if a == b:
            continue
        if edge_alternates(d, x) or edge_alternates(d, y):
            continue
        # x leaves a; y leaves b. Express both edges by their dart on a.
        ea, eb = x, d.nbr[y]
        over = 0 if d.is_over(ea) else 1
        lo, hi = (a, b) if a < b else (b, a)
        if a > b:
            ea, eb = d.nbr[ea], y
            over = 0 if d.is_over(ea) else 1
        out.append(ClaspSite(idx, (lo, hi), (ea, eb), over, d.fingerprint()))
    out.sort(key=lambda s: (s.crossings, s.edges))
    return out


def trivial_clasps_brute(d: Diagram) -> list[tuple[int, int]]:
    """Bigon crossing pairs that one strand crosses over twice."""
    out = set()
    for a in range(d.n):
        for s in range(4):
            x = 4 * a + s
            y = d.nbr[x]
            b = y // 4
            if b == a:
                continue
            # a bigon: the next edge around the face also joins a and b
            x2 = 4 * a + (s + 1) % 4
            if d.nbr[x2] // 4 != b or d.nbr[x2] != 4 * b + (y % 4 - 1) % 4:
                continue
            if d.is_over(x) == d.is_over(y) and d.is_over(x2) == d.is_over(d.nbr[x2]):
                out.add((min(a, b), max(a, b)))
    return sorted(out)


def is_strongly_reduced(d: Diagram) -> bool:
    return is_reduced(d) and not trivial_clasps(d)


# -- flyped tongues ------------------------------------------------------

@dataclass(frozen=True)
class FlypeSide:
    """One side of the non-alternating edge from q to the dealternator.

    ``x`` is the flype-crossing shared by the P and Q faces (None when the
    side has no flype-component); ``tangle`` is the crossing set of the
    flype-tangle between the core face and ``x``.
    """

    o_face: int
    p_face: int
    q_face: int
    p_edge: int  # dart at the dealternator on the O/P edge
    q_edge: int  # dart at q on the O/Q edge
    x: int | None
    tangle: frozenset
    x_slots: tuple[int, int] | None  # x's darts facing the tangle: (next to P, next to Q)

    @property
    def trivial(self) -> bool:
        return self.x is not None and not self.tangle


@dataclass(frozen=True)
class TongueSite:
    edge_dq: int  # dart at q on the edge q -> dealternator
    dealternator: int
    q: int
    left: FlypeSide
    right: FlypeSide
    source: str = ""

    @property
    def o_left(self):
        return self.left.o_face

    @property
    def o_right(self):
        return self.right.o_face

    @property
    def x_left(self):
        return self.left.x

    @property
    def x_right(self):
        return self.right.x

    @property
    def w_left(self):
        return self.left.tangle

    @property
    def w_right(self):
        return self.right.tangle


def flype_tangle(d: Diagram, x: int, p_face: int, q_face: int, p_edge: int, q_edge: int):
    """Crossings between the core and flype-crossing ``x``.

    Returns ``(tangle, (x_dart_near_P, x_dart_near_Q))`` or None when the
    configuration does not bound a 2-tangle.
    """
    fo = d.face_of()
    jp = [k for k in range(4) if fo[4 * x + k] == p_face]
    jq = [k for k in range(4) if fo[4 * x + k] == q_face]
    for kp in jp:
        kq = (kp + 2) % 4
        if kq not in jq:
            continue
        # corner kp lies between slots kp and kp+1; the tangle sits on one side
        for near_p, near_q in (((kp + 1) % 4, (kp + 2) % 4), (kp, (kp + 3) % 4)):
            cut = {p_edge, d.nbr[p_edge], q_edge, d.nbr[q_edge]}
            tangle = set()
            ok = True
            q_ = deque()
            for s in (near_p, near_q):
                m = d.nbr[4 * x + s]
                if m in cut:
                    continue
                if m // 4 == x:
                    ok = False
                    break
                if m // 4 not in tangle:
                    tangle.add(m // 4)
                    q_.append(m // 4)
            while ok and q_:
                c = q_.popleft()
                for t in range(4):
                    y = 4 * c + t
                    if y in cut:
                        continue
                    m = d.nbr[y]
                    if m // 4 == x:
                        if m % 4 not in (near_p, near_q):
                            ok = False
                            break
                        continue
                    if m // 4 not in tangle:
                        tangle.add(m // 4)
                        q_.append(m // 4)
            if not ok:
                continue
            # the tangle must meet the cut edges on its far side
            ends = {y for c in tangle for y in range(4 * c, 4 * c + 4) if d.nbr[y] // 4 not in tangle}
            want_p = d.nbr[p_edge]
            want_q = d.nbr[q_edge]
            if tangle:
                if want_p not in ends or want_q not in ends or len(ends) != 4:
                    continue
                if p_edge // 4 in tangle or q_edge // 4 in tangle:
                    continue
            else:
                # trivial: the cut edges run straight into x
                if {d.nbr[4 * x + near_p], d.nbr[4 * x + near_q]} != {p_edge, q_edge}:
                    continue
            return frozenset(tangle), (4 * x + near_p, 4 * x + near_q)
    return None


def _side(d: Diagram, dq: int, left: bool, delta: int, q: int) -> FlypeSide:
    fo = d.face_of()
    qd = d.nbr[dq]  # dart at the dealternator
    if left:
        o_face = fo[dq]
        p_edge = 4 * (qd // 4) + (qd - 1) % 4
        p_face = fo[d.nbr[p_edge]]
        q_edge = 4 * (dq // 4) + (dq + 1) % 4
        q_face = fo[q_edge]
    else:
        o_face = fo[qd]
        p_edge = 4 * (qd // 4) + (qd + 1) % 4
        p_face = fo[p_edge]
        q_edge = 4 * (dq // 4) + (dq - 1) % 4
        q_face = fo[d.nbr[q_edge]]
    best = None
    if p_face != q_face:
        p_cross = {y // 4 for y in d.faces()[p_face].darts}
        q_cross = {y // 4 for y in d.faces()[q_face].darts}
        for x in sorted((p_cross & q_cross) - {delta, q}):
            got = flype_tangle(d, x, p_face, q_face, p_edge, q_edge)
            if got is None:
                continue
            key = (len(got[0]), x)
            if best is None or key < best[0]:
                best = (key, x, got)
    if best is None:
        return FlypeSide(o_face, p_face, q_face, p_edge, q_edge, None, frozenset(), None)
    _, x, (tangle, slots) = best
    return FlypeSide(o_face, p_face, q_face, p_edge, q_edge, x, tangle, slots)


def tongue_data(d: Diagram, dq: int) -> TongueSite:
    """O/P/Q faces and flype-crossings on both sides of the edge at dart ``dq``."""
    q = dq // 4
    delta = d.nbr[dq] // 4
    return TongueSite(dq, delta, q, _side(d, dq, True, delta, q), _side(d, dq, False, delta, q), d.fingerprint())


def check_tongue_preconditions(d: Diagram) -> int:
    if components(d) != 1:
        raise PreconditionError("knot diagram")
    if not is_connected(d):
        raise PreconditionError("connected")
    if not is_reduced(d):
        raise PreconditionError("reduced")
    delta = the_dealternator(d)
    if trivial_clasps(d):
        raise PreconditionError("strongly reduced")
    if not is_prime(d):
        raise PreconditionError("prime")
    return delta


def flyped_tongues(d: Diagram) -> list[TongueSite]:
    """All non-alternating edges at the dealternator with flype-components on both sides."""
    delta = check_tongue_preconditions(d)
    out = []
    for s in range(4):
        qd = 4 * delta + s
        dq = d.nbr[qd]
        if dq // 4 == delta:
            continue
        site = tongue_data(d, dq)
        if site.left.x is not None and site.right.x is not None:
            out.append(site)
    out.sort(key=lambda t: (t.q, t.edge_dq))
    return out


def flyped_tongue(d: Diagram) -> TongueSite | None:
    sites = flyped_tongues(d)
    return sites[0] if sites else None


def has_flype_component_brute(d: Diagram, dq: int, left: bool) -> bool:
    """Re-derive the faces from a fresh face walk and test for a shared crossing."""
    delta, q = d.nbr[dq] // 4, dq // 4
    faces = [set(f.darts) for f in d.faces()]

    def face_containing(x):
        return next(i for i, f in enumerate(faces) if x in f)

    qd = d.nbr[dq]
    o = face_containing(dq if left else qd)
    # walk O once and read the edges on either side of the dq edge
    walk = [dq if left else qd]
    while True:
        nxt = d.face_next(walk[-1])
        if nxt == walk[0]:
            break
        walk.append(nxt)
    after, before = walk[1], walk[-1]
    # after: leaves the head of the dq edge; before: arrives at its tail
    head_edge, tail_edge = after, before
    if left:
        p = face_containing(d.nbr[head_edge])
        qf = face_containing(d.nbr[tail_edge])
    else:
        qf = face_containing(d.nbr[head_edge])
        p = face_containing(d.nbr[tail_edge])
    if p == qf:
        return False
    share = {y // 4 for y in faces[p]} & {y // 4 for y in faces[qf]}
    share -= {delta, q}
    fo = d.face_of()
    for x in share:
        cp = {k for k in range(4) if fo[4 * x + k] == p}
        cq = {k for k in range(4) if fo[4 * x + k] == qf}
        if any((k + 2) % 4 in cq for k in cp):
            return True
    return False


# -- kink removal --------------------------------------------------------

def _side_of(d: Diagram, c: int, slots: tuple[int, int]) -> set[int]:
    seen: set[int] = set()
    q = deque()
    for s in slots:
        m = d.nbr[4 * c + s] // 4
        if m != c and m not in seen:
            seen.add(m)
            q.append(m)
    while q:
        x = q.popleft()
        for t in range(4):
            m = d.nbr[4 * x + t] // 4
            if m != c and m not in seen:
                seen.add(m)
                q.append(m)
    return seen


def remove_nugatory(d: Diagram, c: int) -> Diagram:
    """Untwist the nugatory crossing ``c``.

    One side of ``c`` is turned over (reflected with crossings exchanged) so
    the strands join without a twist; the smaller side is the one moved.
    """
    fo = d.face_of()
    k = next((k for k in range(2) if fo[4 * c + k] == fo[4 * c + k + 2]), None)
    if k is None:
        raise PreconditionError("nugatory crossing", f"crossing {c}")
    side_a = _side_of(d, c, ((k + 1) % 4, (k + 2) % 4))
    side_b = _side_of(d, c, ((k + 3) % 4, k))
    move = side_a if (len(side_a), sorted(side_a)) <= (len(side_b), sorted(side_b)) else side_b
    if move:
        d = reflect(d, move)
    links = [(("port", 4 * c), ("port", 4 * c + 2)), (("port", 4 * c + 1), ("port", 4 * c + 3))]
    return rebuild(d, [c], [], [], links)


def reduce_kinks(d: Diagram) -> tuple[Diagram, list[int]]:
    """Remove nugatory crossings until none remain; returns the removal order."""
    removed = []
    while True:
        nug = nugatory_crossings(d)
        if not nug:
            return d, removed
        c = min(nug)
        before = d.n
        d = remove_nugatory(d, c)
        assert d.n == before - 1
        removed.append(c)


def remove_clasp(d: Diagram, site: ClaspSite) -> Diagram:
    if site.source and site.source != d.fingerprint():
        raise PreconditionError("fresh clasp site", "site belongs to another diagram")
    a, b = site.crossings
    live = {(s.crossings, s.edges) for s in trivial_clasps(d)}
    if (site.crossings, site.edges) not in live:
        raise PreconditionError("trivial clasp", f"crossings {a},{b}")
    links = []
    for x in site.edges:
        y = d.nbr[x]
        links.append((("port", 4 * (x // 4) + (x + 2) % 4), ("port", 4 * (y // 4) + (y + 2) % 4)))
    return rebuild(d, [a, b], [], [], links)


def validate(d: Diagram) -> dict[str, str]:
    """The predicate listing printed by the ``validate`` command."""
    conn = is_connected(d)
    knot = components(d) == 1
    reduced = is_reduced(d)
    prime = (not decomposing_pairs(d)) if conn and d.n else conn
    alt = is_alternating(d)
    ds, status = dealternators(d)
    if status == DealtStatus.UNIQUE:
        dealt = str(next(iter(ds)))
    elif status == DealtStatus.MULTIPLE:
        dealt = "multiple"
    else:
        dealt = "none"
    strongly = reduced and not trivial_clasps(d)
    b = lambda v: "true" if v else "false"
    return {
        "connected": b(conn),
        "knot": b(knot),
        "reduced": b(reduced),
        "prime": b(prime),
        "alternating": b(alt),
        "almost_alternating": b(bool(ds)),
        "dealternator": dealt,
        "strongly_reduced": b(strongly),
    }
