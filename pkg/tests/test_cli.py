from __future__ import annotations

import io
import shutil
import subprocess

import pytest

from permclosure.cli import run

Z6 = "degree 6\n(0 1 2 3 4 5)\n"
S4 = "# symmetric group\ndegree 4\n(0 1 2 3)\n(0 1)\n"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "z6.grp": Z6,
        "s4.grp": S4,
        "x.perm": "degree 6\n(0 1 2 3 4 5)\n",
        "y.perm": "degree 6\n(0 3 4 1 2 5)\n",
        "c4.dg": "4\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 0\n0 3\n",
        "c8.dg": "8\n" + "".join(f"{i} {(i + s) % 8}\n" for i in range(8) for s in (1, 2, 5)),
        "fano.inc": "points 7\n" + "".join(f"l: {i} {(i + 1) % 7} {(i + 3) % 7}\n" for i in range(7)),
        "bad.grp": "degree 3\n(0 5)\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_predicate_on_regular_group(files):
    code, text = call("group", "predicate", "--kind", "9/8", files["z6.grp"])
    assert code == 0 and "9/8-closed: true" in text
    code, text = call("--format", "machine", "group", "predicate", "--kind", "9/8", files["z6.grp"])
    assert code == 0 and "holds=true" in text.splitlines()


def test_predicate_violation_exit_code(files):
    code, text = call("group", "predicate", "--kind", "9/8", files["s4.grp"])
    assert code == 1 and "false" in text and "B=" in text


def test_closure_of_closed_group_is_fixed_point(files):
    code, text = call("group", "closure", "--kind", "5/2", files["z6.grp"])
    assert code == 0
    assert "steps 1" in text and "order 6" in text
    code, m = call("--format", "machine", "group", "closure", "--kind", "3/2", files["s4.grp"])
    assert code == 0 and "result_order=24" in m.splitlines()


def test_group_info(files):
    code, text = call("group", "info", files["z6.grp"])
    assert code == 0 and "[[0,2,4],[1,3,5]]" in text
    code, m = call("--format", "machine", "group", "info", files["z6.grp"])
    assert sum(l.startswith("block_system=") for l in m.splitlines()) == 4


def test_normal_form(files):
    code, text = call("group", "normal-form", files["x.perm"], files["y.perm"])
    assert code == 0 and "delta" in text
    code, m = call("--format", "machine", "group", "normal-form", files["x.perm"], files["y.perm"])
    assert "holds=true" in m.splitlines()


def test_object_commands(files):
    code, text = call("object", "aut", files["fano.inc"])
    assert code == 0 and "168" in text
    code, text = call("object", "classify", files["fano.inc"])
    assert code == 0 and "kind both" in text


def test_ci_commands(files):
    code, text = call("ci", "circulant", "--n", "8", "--units-only")
    rows = [l for l in text.splitlines() if l and not l.startswith(("#", "n\t"))]
    assert code == 0 and rows and all(l.split("\t")[2] == "CI" for l in rows)
    code, text = call("ci", "circulant", "--n", "8")
    assert code == 1 and "not-CI" in text
    code, text = call("ci", "object", files["c4.dg"])
    assert code == 0 and "verdict CI" in text
    code, text = call("ci", "object", files["c8.dg"])
    assert code == 1 and "verdict not CI" in text


def test_checkpoint_resume(files, tmp_path):
    ck = tmp_path / "ck.tsv"
    code, first = call("ci", "circulant", "--n", "6", "--checkpoint", str(ck))
    lines = ck.read_text().splitlines()
    assert code == 0 and len(lines) > 1
    ck.write_text("\n".join(lines[:2]) + "\n")
    code, second = call("ci", "circulant", "--n", "6", "--checkpoint", str(ck))
    assert second == first
    assert len(ck.read_text().splitlines()) == len(lines)


def test_sweep_theorems_subset():
    code, text = call("sweep", "theorems", "--only", "petersen", "--only", "multiplier-failure")
    assert code == 0
    assert text.splitlines()[-1] == "# sweeps=2 failed=0"
    code, _ = call("sweep", "theorems", "--only", "nonsense")
    assert code == 2


def test_input_errors(files, tmp_path):
    assert call("group", "info", str(tmp_path / "missing.grp"))[0] == 2
    assert call("group", "info", files["bad.grp"])[0] == 2
    assert call("group", "predicate", "--kind", "7/4", files["z6.grp"])[0] == 2
    assert call("ci", "circulant", "--n", "0")[0] == 2
    assert call("group")[0] == 2
    assert call("--order-cap", "5", "group", "info", files["s4.grp"])[0] == 2


@pytest.mark.parametrize("argv", [
    ("group", "info", "z6.grp"),
    ("group", "predicate", "--kind", "3/2", "s4.grp"),
    ("group", "closure", "s4.grp"),
    ("object", "aut", "fano.inc"),
    ("ci", "object", "c8.dg"),
])
def test_output_is_deterministic(files, argv):
    argv = [files.get(a, a) for a in argv]
    for fmt in ("text", "machine"):
        assert call("--format", fmt, *argv) == call("--format", fmt, *argv)


@pytest.mark.parametrize("kind", ["5/2", "9/8", "5/4", "3/2"])
@pytest.mark.parametrize("name", ["z6.grp", "s4.grp"])
def test_text_and_machine_verdicts_agree(files, kind, name):
    code_t, text = call("group", "predicate", "--kind", kind, files[name])
    code_m, m = call("--format", "machine", "group", "predicate", "--kind", kind, files[name])
    assert code_t == code_m
    assert ("true" in text.splitlines()[0]) == ("holds=true" in m.splitlines())


def test_ci_text_and_machine_agree(files):
    for name in ("c4.dg", "c8.dg"):
        code_t, text = call("ci", "object", files[name])
        code_m, m = call("--format", "machine", "ci", "object", files[name])
        assert code_t == code_m
        assert ("verdict CI" in text) == ("verdict=true" in m.splitlines())


@pytest.mark.skipif(shutil.which("permclosure") is None, reason="console script not installed")
def test_console_script(files):
    r = subprocess.run(["permclosure", "group", "predicate", "--kind", "9/8", files["z6.grp"]],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "true" in r.stdout
    r = subprocess.run(["permclosure", "group", "predicate", "--kind", "9/8"], capture_output=True, text=True)
    assert r.returncode == 2 and "usage" in r.stderr.lower()
