"""Decision procedure for reduced almost alternating knot diagrams.

Loop:

* not strongly reduced: cancel the clasp by RII; the result is alternating,
  and it is the unknot iff removing kinks empties it;
* strongly reduced without a flyped tongue: nontrivial;
* otherwise flype both flype-tangles down to single crossings, then untongue
  (or untwirl when the untongue would leave a kink) and start again.

Every step is recorded so the run can be replayed and audited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .diagram import Diagram, components, emit_pd, normalize, parse_pd, with_marks
from .moves import (
    KinkSite,
    MoveError,
    MoveKind,
    MoveRecord,
    apply_flype,
    apply_r1_kink,
    apply_r2_clasp,
    apply_record,
    apply_untongue,
    apply_untwirl,
    decode_record,
    make_flype_site,
    untongue_mirror,
)
from .oracle import jones
from .recognition import (
    DealtStatus,
    PreconditionError,
    TongueSite,
    dealternators,
    decomposing_pairs,
    flyped_tongues,
    is_alternating,
    is_reduced,
    nugatory_crossings,
    tongue_data,
    trivial_clasps,
)


class Status(str, Enum):
    TRIVIAL = "TRIVIAL"
    NONTRIVIAL = "NONTRIVIAL"


class Reason(str, Enum):
    COILED_AFTER_R2 = "coiled after R2"
    NOT_COILED_AFTER_R2 = "not coiled after R2"
    NO_FLYPED_TONGUE = "no flyped tongue"
    REACHED_TRIVIAL = "reached trivial diagram"


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: Reason

    def __str__(self) -> str:
        return f"{self.status.value} ({self.reason.value})"


@dataclass
class Certificate:
    source: Diagram
    steps: list[MoveRecord] = field(default_factory=list)
    terminal: Diagram | None = None
    lines: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        return "\n".join([emit_pd(self.source)] + self.lines) + "\n"


class InvalidInput(ValueError):
    """The input is not a reduced almost alternating knot diagram."""


class InconsistencyError(RuntimeError):
    """RII on a clasp of a reduced input emptied the diagram."""


class PatternNotReached(RuntimeError):
    """A flyped tongue exists but no untongue/untwirl pattern was reached."""


def prepare(d: Diagram) -> Diagram:
    """Check the input domain and mark the dealternator."""
    if components(d) != 1:
        raise InvalidInput(f"expected a knot diagram, got {components(d)} components")
    if d.n == 0:
        return normalize(d)
    if not is_reduced(d):
        raise InvalidInput("diagram is not reduced")
    ds, status = dealternators(d)
    if status != DealtStatus.UNIQUE:
        raise InvalidInput(f"diagram is not almost alternating with a unique dealternator ({status.value})")
    delta = next(iter(ds))
    marked = [c for c in range(d.n) if d.dealt[c]]
    if marked and marked != [delta]:
        raise InvalidInput(f"dealternator flag on {marked} but the dealternator is {delta}")
    return normalize(with_marks(d, [delta]))


class _Run:
    def __init__(self, d: Diagram):
        self.cur = d
        self.cert = Certificate(d)

    def step(self, rec: MoveRecord) -> None:
        line = rec.encode()
        self.cur = apply_record(self.cur, rec)
        self.cert.steps.append(rec)
        self.cert.lines.append(line)


def _dealternator(d: Diagram) -> int:
    return next(c for c in range(d.n) if d.dealt[c])


def _side_flype(d: Diagram, site: TongueSite, left: bool):
    side = site.left if left else site.right
    near_p, near_q = side.x_slots
    t1 = near_p if (near_p + 1) % 4 == near_q % 4 else near_q
    return make_flype_site(d, side.x, t1, (d.nbr[side.p_edge], d.nbr[side.q_edge]))


def _reduce_tongue(d: Diagram, site: TongueSite) -> list[MoveRecord] | None:
    """Moves that trivialise both flype-tangles and remove the tongue."""
    recs: list[MoveRecord] = []
    delta = site.dealternator
    slot = d.nbr[site.edge_dq] % 4
    cur = d
    for left in (True, False):
        for _ in range(d.n + 1):
            side = site.left if left else site.right
            if side.x is None:
                return None
            if side.trivial:
                break
            try:
                fs = _side_flype(cur, site, left)
                nxt = apply_flype(cur, fs)
            except MoveError:
                return None
            recs.append(MoveRecord(MoveKind.FLYPE, fs, False))
            cur = nxt
            delta = _dealternator(cur)
            site = tongue_data(cur, cur.nbr[4 * delta + slot])
        else:
            return None
    for kind, fn in ((MoveKind.UNTONGUE, apply_untongue), (MoveKind.UNTWIRL, apply_untwirl)):
        try:
            fn(cur, site)
        except MoveError:
            continue
        recs.append(MoveRecord(kind, site, untongue_mirror(cur, site, kind)))
        return recs
    return None


def decide(d: Diagram, check_oracle: bool = False) -> tuple[Verdict, Certificate]:
    """Run the procedure; ``check_oracle`` asserts Jones invariance per step."""
    src = prepare(d)
    run = _Run(src)
    v0 = jones(src) if check_oracle else None
    limit = src.n * src.n + 4 * src.n + 4
    for _ in range(limit):
        cur = run.cur
        if v0 is not None and jones(cur) != v0:
            raise AssertionError("Jones polynomial changed during reduction")
        if cur.n == 0:
            run.cert.terminal = cur
            return Verdict(Status.TRIVIAL, Reason.REACHED_TRIVIAL), run.cert
        clasps = trivial_clasps(cur)
        if clasps:
            s = clasps[0]
            after = apply_r2_clasp(cur, s)
            if after.n == 0:
                raise InconsistencyError("RII on a trivial clasp left a crossingless diagram; the input was not reduced")
            run.step(MoveRecord(MoveKind.R2_CLASP, s, False))
            if not is_alternating(run.cur):
                raise PatternNotReached("RII at the clasp did not give an alternating diagram")
            while run.cur.n:
                nug = nugatory_crossings(run.cur)
                if not nug:
                    break
                run.step(MoveRecord(MoveKind.R1_KINK, KinkSite(min(nug), run.cur.fingerprint()), False))
            run.cert.terminal = run.cur
            if run.cur.n == 0:
                return Verdict(Status.TRIVIAL, Reason.COILED_AFTER_R2), run.cert
            return Verdict(Status.NONTRIVIAL, Reason.NOT_COILED_AFTER_R2), run.cert
        if decomposing_pairs(cur):
            # a reduced alternating summand is knotted, hence so is the sum
            run.cert.terminal = cur
            return Verdict(Status.NONTRIVIAL, Reason.NO_FLYPED_TONGUE), run.cert
        sites = flyped_tongues(cur)
        if not sites:
            run.cert.terminal = cur
            return Verdict(Status.NONTRIVIAL, Reason.NO_FLYPED_TONGUE), run.cert
        for site in sites:
            recs = _reduce_tongue(cur, site)
            if recs is not None:
                break
        else:
            raise PatternNotReached(
                f"{len(sites)} flyped tongue(s) on a {cur.n}-crossing diagram but no untongue or untwirl applies"
            )
        n_before = cur.n
        for rec in recs:
            run.step(rec)
        assert run.cur.n < n_before
    raise PatternNotReached("step limit exceeded")


# -- replay ----------------------------------------------------------------

@dataclass
class ReplayReport:
    ok: bool
    terminal: Diagram | None
    crossing_counts: list[int]
    failed_index: int | None = None
    message: str = ""


_DECREASING = {MoveKind.UNTONGUE, MoveKind.UNTWIRL, MoveKind.R2_CLASP, MoveKind.R1_KINK}


def replay_lines(source: Diagram, lines: list[str], check_jones: bool = True) -> ReplayReport:
    """Re-apply certificate lines one by one, checking every intermediate diagram."""
    cur = source
    counts = [cur.n]
    v0 = jones(cur) if check_jones else None
    for i, line in enumerate(lines):
        try:
            rec = decode_record(line, cur)
            nxt = apply_record(cur, rec)
        except (MoveError, PreconditionError, ValueError) as exc:
            return ReplayReport(False, cur, counts, i, str(exc))
        if nxt.n > cur.n or (rec.kind in _DECREASING and nxt.n >= cur.n):
            return ReplayReport(False, nxt, counts, i, "crossing count did not decrease as the move requires")
        if rec.kind not in (MoveKind.R2_CLASP, MoveKind.R1_KINK) and nxt.n:
            ds, status = dealternators(nxt)
            if status != DealtStatus.UNIQUE or not is_reduced(nxt):
                return ReplayReport(False, nxt, counts, i, "intermediate diagram is not reduced almost alternating")
        if v0 is not None and jones(nxt) != v0:
            return ReplayReport(False, nxt, counts, i, "Jones polynomial changed")
        cur = nxt
        counts.append(cur.n)
    return ReplayReport(True, cur, counts)


def replay(cert: Certificate, check_jones: bool = True) -> ReplayReport:
    report = replay_lines(cert.source, cert.lines, check_jones)
    if report.ok and cert.terminal is not None and report.terminal != cert.terminal:
        return ReplayReport(False, report.terminal, report.crossing_counts, len(cert.lines), "terminal diagram differs")
    return report


def read_certificate(text: str) -> tuple[Diagram, list[str]]:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise MoveError("empty certificate")
    return parse_pd(rows[0]), rows[1:]


def write_certificate(cert: Certificate, path: str | Path) -> None:
    Path(path).write_text(cert.to_text())
