"""Knot diagrams as combinatorial planar maps.

A diagram with ``n`` crossings has ``4n`` darts. Dart ``4*c + s`` is the
half-edge leaving crossing ``c`` at slot ``s``; slots are numbered
counterclockwise. ``nbr`` is the fixed-point-free involution pairing each
dart with the other end of its edge. At crossing ``c`` the strand through the
slots of parity ``under[c]`` passes under the other strand.

Diagrams are unoriented; PD output orients each component by traversal.
"""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class DiagramError(ValueError):
    """Malformed PD input or an invalid combinatorial map."""


class Dart(NamedTuple):
    crossing: int
    slot: int


class Crossing(NamedTuple):
    darts: tuple[int, int, int, int]
    under_in: int
    dealternator: bool


class Face(NamedTuple):
    darts: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.darts)


def dart(c: int, s: int) -> int:
    return 4 * c + (s % 4)


@dataclass(frozen=True)
class Diagram:
    nbr: tuple[int, ...]
    under: tuple[int, ...]
    dealt: tuple[bool, ...] = ()
    loops: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        n = len(self.under)
        if len(self.nbr) != 4 * n:
            raise DiagramError("dart table must have 4 entries per crossing")
        if not self.dealt:
            object.__setattr__(self, "dealt", (False,) * n)
        if len(self.dealt) != n:
            raise DiagramError("dealternator flags must match crossings")
        for d, m in enumerate(self.nbr):
            if not 0 <= m < 4 * n or m == d or self.nbr[m] != d:
                raise DiagramError(f"dart pairing is not an involution at dart {d}")
        if self.loops < 0:
            raise DiagramError("negative loop count")

    # -- basic accessors -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.under)

    @property
    def crossings(self) -> tuple[Crossing, ...]:
        out = []
        for c in range(self.n):
            out.append(Crossing(tuple(self.nbr[4 * c:4 * c + 4]), self.under[c], self.dealt[c]))
        return tuple(out)

    def mate(self, d: int) -> int:
        return self.nbr[d]

    def is_over(self, d: int) -> bool:
        return (d % 2) != self.under[d // 4]

    def fingerprint(self) -> str:
        """Short digest of the exact labelled map; stable across processes."""
        if "fp" not in self._cache:
            raw = repr((self.nbr, self.under, self.dealt, self.loops)).encode()
            self._cache["fp"] = hashlib.blake2b(raw, digest_size=6).hexdigest()
        return self._cache["fp"]

    def __str__(self) -> str:
        return emit_pd(self)

    # -- faces -----------------------------------------------------------
    def face_next(self, d: int) -> int:
        """Next dart of the face lying to the left of dart ``d``."""
        m = self.nbr[d]
        return 4 * (m // 4) + (m - 1) % 4

    def faces(self) -> tuple[Face, ...]:
        if "faces" not in self._cache:
            seen = [False] * len(self.nbr)
            out = []
            for start in range(len(self.nbr)):
                if seen[start]:
                    continue
                cyc = []
                d = start
                while not seen[d]:
                    seen[d] = True
                    cyc.append(d)
                    d = self.face_next(d)
                out.append(Face(tuple(cyc)))
            self._cache["faces"] = tuple(out)
        return self._cache["faces"]

    def face_of(self) -> tuple[int, ...]:
        """Face index of every dart (the face on the dart's left)."""
        if "face_of" not in self._cache:
            fo = [0] * len(self.nbr)
            for i, f in enumerate(self.faces()):
                for d in f.darts:
                    fo[d] = i
            self._cache["face_of"] = tuple(fo)
        return self._cache["face_of"]

    # -- strands ---------------------------------------------------------
    def strands(self) -> list[list[int]]:
        """Closed strands as lists of outgoing darts, in traversal order."""
        seen = [False] * len(self.nbr)
        out = []
        for start in range(len(self.nbr)):
            if seen[start]:
                continue
            comp = []
            d = start
            while not seen[d]:
                seen[d] = True
                seen[self.nbr[d]] = True
                comp.append(d)
                m = self.nbr[d]
                d = 4 * (m // 4) + (m + 2) % 4
            out.append(comp)
        return out

    def crossing_components(self) -> tuple[frozenset[int], ...]:
        if "comps" in self._cache:
            return self._cache["comps"]
        comp_of = [-1] * self.n
        comps = []
        for c0 in range(self.n):
            if comp_of[c0] >= 0:
                continue
            comp = {c0}
            comp_of[c0] = len(comps)
            q = deque([c0])
            while q:
                c = q.popleft()
                for s in range(4):
                    o = self.nbr[4 * c + s] // 4
                    if comp_of[o] < 0:
                        comp_of[o] = len(comps)
                        comp.add(o)
                        q.append(o)
            comps.append(frozenset(comp))
        self._cache["comps"] = tuple(comps)
        return self._cache["comps"]


def components(d: Diagram) -> int:
    """Number of link components, including crossingless loops."""
    return len(d.strands()) + d.loops


def is_connected(d: Diagram) -> bool:
    if d.n == 0:
        return d.loops <= 1
    return d.loops == 0 and len(d.crossing_components()) == 1


def faces(d: Diagram) -> tuple[Face, ...]:
    return d.faces()


def check_planar(d: Diagram) -> None:
    """Raise unless every crossing component satisfies V - E + F = 2."""
    k = len(d.crossing_components())
    if len(d.faces()) != d.n + 2 * k:
        raise DiagramError(
            f"rotation data is not planar: {len(d.faces())} faces for "
            f"{d.n} crossings in {k} component(s)"
        )


# -- PD text format ------------------------------------------------------

_TOKEN = re.compile(r"^(Xd?)\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]$")


def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        # tolerate spaces after commas inside brackets
        line = re.sub(r"\s*,\s*", ",", line)
        line = re.sub(r"\[\s*", "[", line)
        line = re.sub(r"\s*\]", "]", line)
        toks.extend(line.split())
    return toks


def parse_pd(text: str) -> Diagram:
    """Parse whitespace-separated ``X[a,b,c,d]``, ``Xd[...]`` and ``O`` tokens."""
    labels: list[tuple[int, int, int, int]] = []
    flags: list[bool] = []
    loops = 0
    for tok in _tokenize(text):
        if tok == "O":
            loops += 1
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise DiagramError(f"malformed token {tok!r}")
        vals = tuple(int(m.group(i)) for i in range(2, 6))
        if min(vals) < 1:
            raise DiagramError(f"edge labels must be positive in {tok!r}")
        labels.append(vals)
        flags.append(m.group(1) == "Xd")
    where: dict[int, list[int]] = {}
    for c, vals in enumerate(labels):
        for s, lab in enumerate(vals):
            where.setdefault(lab, []).append(4 * c + s)
    nbr = [0] * (4 * len(labels))
    for lab, ds in sorted(where.items()):
        if len(ds) != 2:
            raise DiagramError(f"edge label {lab} appears {len(ds)} times")
        nbr[ds[0]], nbr[ds[1]] = ds[1], ds[0]
    d = Diagram(tuple(nbr), (0,) * len(labels), tuple(flags), loops)
    check_planar(d)
    return d


def oriented_strands(d: Diagram) -> list[list[int]]:
    """Strands oriented so that a parsed diagram keeps its PD orientation.

    Each component is directed so that its lowest dart at an under-slot of
    parity ``under`` (slot 0 after parsing) is incoming. With this choice
    ``parse_pd(emit_pd(d))`` is a fixed point of ``parse_pd . emit_pd``.
    """
    out = []
    for comp in d.strands():
        marks = [x for x in comp if x % 4 == d.under[x // 4]]
        marks += [d.nbr[x] for x in comp if d.nbr[x] % 4 == d.under[d.nbr[x] // 4]]
        if marks and min(marks) in set(comp):
            comp = [d.nbr[x] for x in reversed(comp)]
        out.append(comp)
    return out


def orientation(d: Diagram) -> dict[int, bool]:
    """Map each dart to True when the traversal leaves the crossing through it."""
    out: dict[int, bool] = {}
    for comp in oriented_strands(d):
        for x in comp:
            out[x] = True
            out[d.nbr[x]] = False
    return out


def emit_pd(d: Diagram, start: int | None = None) -> str:
    """PD text for ``d``; edges are numbered along each strand from ``start``."""
    label: dict[int, int] = {}
    outgoing: dict[int, bool] = {}
    nxt = 1
    strands = oriented_strands(d)
    if start is not None and d.n:
        strands.sort(key=lambda comp: start not in comp)
        first = strands[0]
        i = first.index(start)
        strands[0] = first[i:] + first[:i]
    for comp in strands:
        for x in comp:
            label[x] = label[d.nbr[x]] = nxt
            outgoing[x] = True
            outgoing[d.nbr[x]] = False
            nxt += 1
    toks = []
    for c in range(d.n):
        u = d.under[c]
        first = 4 * c + u if not outgoing[4 * c + u] else 4 * c + u + 2
        s0 = first % 4
        labs = [label[4 * c + (s0 + k) % 4] for k in range(4)]
        head = "Xd" if d.dealt[c] else "X"
        toks.append(f"{head}[{','.join(map(str, labs))}]")
    toks.extend(["O"] * d.loops)
    return " ".join(toks)


# -- canonical form ------------------------------------------------------

def _code_from_root(d: Diagram, root: int, bound: tuple | None = None) -> tuple | None:
    """Breadth-first encoding of the map seen from dart ``root``.

    With ``bound`` the walk stops and returns None as soon as the code is
    known to exceed ``bound``; the minimum over all roots is unaffected.
    """
    nbr, under, dealt = d.nbr, d.under, d.dealt
    ids = {root // 4: 0}
    off = {root // 4: root % 4}
    order = [root // 4]
    out: list[int] = []
    tight = bound is not None
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        o = off[c]
        block = [(under[c] - o) % 2, 1 if dealt[c] else 0]
        for k in range(4):
            m = nbr[4 * c + (o + k) % 4]
            c2, s2 = m >> 2, m & 3
            if c2 not in ids:
                ids[c2] = len(order)
                off[c2] = s2
                order.append(c2)
            block.append(ids[c2])
            block.append((s2 - off[c2]) % 4)
        if tight:
            j = len(out)
            ref = list(bound[j:j + 10])
            if block > ref:
                return None
            if block < ref:
                tight = False
        out.extend(block)
    return tuple(out)


def normalize(d: Diagram) -> Diagram:
    """The diagram as it reads back from its own PD text."""
    return parse_pd(emit_pd(d))


def canonical_code(d: Diagram) -> str:
    """Relabeling-invariant code; planar mirror images stay distinct.

    The code is the lexicographically least breadth-first encoding over a
    relabeling-invariant set of root darts: the darts of marked
    (dealternator) crossings when a component has any, else all darts.
    """
    if "canon" in d._cache:
        return d._cache["canon"]
    if d.n == 0:
        code = " ".join(["O"] * d.loops) if d.loops else "-"
    else:
        parts = []
        for comp in d.crossing_components():
            best = None
            marked = sorted(c for c in comp if d.dealt[c])
            for c in marked or sorted(comp):
                for s in range(4):
                    code = _code_from_root(d, 4 * c + s, best)
                    if code is not None and (best is None or code < best):
                        best = code
            parts.append(".".join(map(str, best)))
        parts.sort()
        code = "|".join(parts) + ("|O" * d.loops)
    d._cache["canon"] = code
    return code


def relabel(d: Diagram, perm: Sequence[int], rot: Sequence[int] | None = None) -> Diagram:
    """Renumber crossings by ``perm`` and rotate slot labels by ``rot``.

    The result is the same planar map under different names.
    """
    n = d.n
    rot = rot or [0] * n
    def f(x: int) -> int:
        c, s = divmod(x, 4)
        return 4 * perm[c] + (s - rot[c]) % 4
    nbr = [0] * (4 * n)
    for x in range(4 * n):
        nbr[f(x)] = f(d.nbr[x])
    under = [0] * n
    dealt = [False] * n
    for c in range(n):
        under[perm[c]] = (d.under[c] - rot[c]) % 2
        dealt[perm[c]] = d.dealt[c]
    return Diagram(tuple(nbr), tuple(under), tuple(dealt), d.loops)


# -- crossing-level edits ------------------------------------------------

def flip(d: Diagram, cs: Iterable[int]) -> Diagram:
    """Crossing change at every crossing in ``cs``."""
    under = list(d.under)
    for c in cs:
        under[c] ^= 1
    return Diagram(d.nbr, tuple(under), d.dealt, d.loops)


def mirror(d: Diagram) -> Diagram:
    """Crossing change everywhere (mirror through the projection plane)."""
    return flip(d, range(d.n))


def reflect(d: Diagram, cs: Iterable[int] | None = None, swap: bool = True) -> Diagram:
    """Reflect the rotation at ``cs`` (all crossings by default).

    With ``swap`` the over/under data is exchanged too, which is what a
    half-turn of a sub-tangle about an axis in the projection plane does.
    """
    cs = set(range(d.n)) if cs is None else set(cs)
    def f(x: int) -> int:
        c, s = divmod(x, 4)
        return 4 * c + (-s) % 4 if c in cs else x
    nbr = [0] * len(d.nbr)
    for x in range(len(d.nbr)):
        nbr[f(x)] = f(d.nbr[x])
    under = [u ^ 1 if (c in cs and swap) else u for c, u in enumerate(d.under)]
    return Diagram(tuple(nbr), tuple(under), d.dealt, d.loops)


def with_marks(d: Diagram, marked: Iterable[int]) -> Diagram:
    marked = set(marked)
    return Diagram(d.nbr, d.under, tuple(c in marked for c in range(d.n)), d.loops)


def make_alternating(d: Diagram, anchor_under: int = 0) -> Diagram:
    """Choose over/under data so every edge alternates (crossing 0 keeps ``anchor_under``)."""
    under: list[int | None] = [None] * d.n
    for comp in d.crossing_components():
        c0 = min(comp)
        under[c0] = anchor_under
        q = deque([c0])
        while q:
            c = q.popleft()
            for s in range(4):
                m = d.nbr[4 * c + s]
                c2, s2 = divmod(m, 4)
                over_here = (s % 2) != under[c]
                # the far end must be under exactly when this end is over
                want = (s2 % 2) if over_here else (s2 + 1) % 2
                if under[c2] is None:
                    under[c2] = want
                    q.append(c2)
                elif under[c2] != want:
                    raise DiagramError("shadow admits no alternating crossing data")
    return Diagram(d.nbr, tuple(under), d.dealt, d.loops)


# -- generic rewiring ----------------------------------------------------

Port = tuple  # ("port", dart) or ("new", index, slot)


def rebuild(
    d: Diagram,
    remove: Iterable[int],
    new_under: Sequence[int],
    new_dealt: Sequence[bool],
    links: Sequence[tuple[Port, Port]],
) -> Diagram:
    """Replace the crossings ``remove`` by new crossings wired through ``links``.

    Every boundary dart of the removed crossings (a "port") must occur in
    exactly one link, as must every dart of the new crossings. A port whose
    mate is another port is a chord running outside the replaced disk; chains
    of ports are followed, and cycles made only of ports become crossingless
    loops. Surviving crossings keep their relative order; new crossings are
    appended.
    """
    remove = set(remove)
    keep = [c for c in range(d.n) if c not in remove]
    newid = {c: i for i, c in enumerate(keep)}
    base = len(keep)
    m = len(new_under)
    partner: dict[tuple, tuple] = {}
    for a, b in links:
        for x, y in ((a, b), (b, a)):
            if x in partner:
                raise DiagramError(f"endpoint {x} linked twice")
            partner[x] = y
    for j in range(m):
        for s in range(4):
            if ("new", j, s) not in partner:
                raise DiagramError(f"new dart {(j, s)} unlinked")
    ports = {x[1] for x in partner if x[0] == "port"}
    for p in ports:
        if p // 4 not in remove:
            raise DiagramError(f"port {p} is not on a removed crossing")

    def final(x: int) -> int:
        if x // 4 in remove:
            raise DiagramError(f"dart {x} of a removed crossing reached")
        return 4 * newid[x // 4] + x % 4

    visited: set[int] = set()

    def resolve(end: tuple) -> int:
        # walk from a link endpoint to the dart it finally attaches to
        while True:
            if end[0] == "new":
                return 4 * (base + end[1]) + end[2]
            p = end[1]
            visited.add(p)
            out = d.nbr[p]
            if out // 4 not in remove:
                return final(out)
            if out not in ports:
                raise DiagramError(f"dart {out} inside the replaced disk is unaccounted for")
            visited.add(out)
            end = partner[("port", out)]

    nbr = [0] * (4 * (base + m))
    for c in keep:
        for s in range(4):
            x = 4 * c + s
            y = d.nbr[x]
            if y // 4 in remove:
                if y not in ports:
                    raise DiagramError(f"dart {y} has an outside mate but is not a port")
                visited.add(y)
                nbr[final(x)] = resolve(partner[("port", y)])
            else:
                nbr[final(x)] = final(y)
    for j in range(m):
        for s in range(4):
            nbr[4 * (base + j) + s] = resolve(partner[("new", j, s)])
    loops = d.loops
    for p in ports:
        if p in visited:
            continue
        loops += 1
        x = p
        while True:
            visited.add(x)
            y = d.nbr[x]
            visited.add(y)
            nxt = partner[("port", y)]
            if nxt[0] != "port":
                raise DiagramError("port cycle reached a new dart")
            x = nxt[1]
            if x == p:
                break
    under = [d.under[c] for c in keep] + list(new_under)
    dealt = [d.dealt[c] for c in keep] + list(new_dealt)
    out = Diagram(tuple(nbr), tuple(under), tuple(dealt), loops)
    check_planar(out)
    return out
