import io
import sys

import pytest

from aaknots.cli import main
from aaknots.corpus import TREFOIL
from aaknots.diagram import emit_pd, flip, parse_pd

FLIPPED_TREFOIL = emit_pd(flip(parse_pd(TREFOIL), [0]))


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pd_files(tmp_path):
    (tmp_path / "trefoil.pd").write_text(TREFOIL + "\n")
    (tmp_path / "flipped_trefoil.pd").write_text(FLIPPED_TREFOIL + "\n")
    return tmp_path


def test_decide_flipped_trefoil(capsys, monkeypatch, pd_files):
    code, out, _ = run(capsys, monkeypatch, ["decide", str(pd_files / "flipped_trefoil.pd")])
    assert code == 0
    assert out == "TRIVIAL (coiled after R2)\n"


def test_decide_missing_file(capsys, monkeypatch):
    code, _, err = run(capsys, monkeypatch, ["decide", "not_a_file.pd"])
    assert code == 1 and "not_a_file.pd" in err


def test_decide_nontrivial_exit_code(capsys, monkeypatch):
    cinq = "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]"
    d = emit_pd(flip(parse_pd(cinq), [0]))
    code, out, _ = run(capsys, monkeypatch, ["decide", "-"], stdin=d)
    assert code == 3 and out.startswith("NONTRIVIAL")


def test_decide_invalid_input(capsys, monkeypatch, pd_files):
    code, _, err = run(capsys, monkeypatch, ["decide", str(pd_files / "trefoil.pd")])
    assert code == 1 and "error" in err


def test_validate_listing(capsys, monkeypatch, pd_files):
    code, out, _ = run(capsys, monkeypatch, ["validate", str(pd_files / "trefoil.pd")])
    assert code == 0
    names = [line.split(":")[0] for line in out.splitlines()]
    assert names == ["connected", "knot", "reduced", "prime", "alternating",
                     "almost_alternating", "dealternator", "strongly_reduced"]
    assert "dealternator: none" in out


def test_validate_parse_error(capsys, monkeypatch):
    code, _, _ = run(capsys, monkeypatch, ["validate"], stdin="X[1,2,3]")
    assert code == 1


def test_certificate_and_replay(capsys, monkeypatch, pd_files):
    cert = pd_files / "out.cert"
    code, _, _ = run(capsys, monkeypatch, ["decide", str(pd_files / "flipped_trefoil.pd"), "--certificate", str(cert)])
    assert code == 0 and cert.exists()
    code, out, _ = run(capsys, monkeypatch, ["replay", str(cert)])
    assert code == 0 and out.startswith("OK 2 steps")


def test_generate_pipes_into_decide(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["generate", "--max-crossings", "6", "--m=1,-1"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# generate max_crossings=6 m=-1,1")
    assert all(line.startswith("X") for line in lines[1:])
    code, verdicts, _ = run(capsys, monkeypatch, ["decide"], stdin=out)
    assert code == 0
    assert verdicts.splitlines() == ["TRIVIAL (coiled after R2)"] * (len(lines) - 1)


def test_generate_is_deterministic(capsys, monkeypatch, tmp_path):
    outs = []
    for name in ("a", "b"):
        main(["generate", "--max-crossings", "6", "--out", str(tmp_path / name)])
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_generate_u1_alternating(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["generate", "--max-crossings", "5", "--u1-alternating"])
    code, listing, _ = run(capsys, monkeypatch, ["validate", "--each-line"], stdin=out)
    assert listing.count("alternating: true") == len(out.splitlines()) - 1


def test_generate_bad_m(capsys, monkeypatch):
    code, _, _ = run(capsys, monkeypatch, ["generate", "--max-crossings", "5", "--m=0,1"])
    assert code == 1


def test_invariants(capsys, monkeypatch, pd_files):
    f = str(pd_files / "trefoil.pd")
    assert run(capsys, monkeypatch, ["invariant", f, "--det"])[1] == "3\n"
    code, out, _ = run(capsys, monkeypatch, ["invariant", f, "--jones"])
    assert out == "1*A^4 + 1*A^12 + -1*A^16\n"
    code, out, _ = run(capsys, monkeypatch, ["invariant", f, "--bracket"])
    exps = [int(t.split("^")[1]) for t in out.strip().split(" + ")]
    assert exps == sorted(exps)


def test_canon_relabel_invariant(capsys, monkeypatch):
    a = run(capsys, monkeypatch, ["canon"], stdin=TREFOIL)[1]
    b = run(capsys, monkeypatch, ["canon"], stdin="X[2,5,3,6] X[4,1,5,2] X[6,3,1,4]")[1]
    assert a == b


def test_unknown_flag(capsys, monkeypatch):
    assert main(["decide", "--bogus"]) == 1
