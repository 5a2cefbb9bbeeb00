"""Command-line front end.

Exit status: 0 success, 1 property violation (witness printed), 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import OrderCapExceeded, PermClosureError

OK, VIOLATION, USAGE = 0, 1, 2


@dataclass
class CommandConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    order_cap: int | None = None
    kind: str | None = None
    strict_h: bool = False
    fmt: str = "text"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="permclosure", description="Fractional closures of permutation groups and CI checks.")
    p.add_argument("--format", choices=("text", "machine"), default="text", dest="fmt")
    p.add_argument("--order-cap", type=_positive, help="materialization cap (default from PERMCLOSURE_ORDER_CAP)")
    top = p.add_subparsers(dest="area", required=True, parser_class=_Parser)

    g = top.add_parser("group").add_subparsers(dest="action", required=True, parser_class=_Parser)
    info = g.add_parser("info", help="orbits, block systems and normal block systems")
    info.add_argument("file")
    clo = g.add_parser("closure", help="5/2- or 3/2-closure")
    clo.add_argument("file")
    clo.add_argument("--kind", choices=("5/2", "3/2"), default="5/2")
    pred = g.add_parser("predicate", help="closedness predicate")
    pred.add_argument("file")
    pred.add_argument("--kind", choices=("5/2", "9/8", "5/4", "3/2"), required=True)
    pred.add_argument("--strict-h", action="store_true", help="3/2 variant testing E on H itself")
    nf = g.add_parser("normal-form", help="normal form of a pair of full cycles")
    nf.add_argument("x")
    nf.add_argument("y")

    o = top.add_parser("object").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, hlp in (("aut", "automorphism group"), ("classify", "incidence classification")):
        sp = o.add_parser(name, help=hlp)
        sp.add_argument("file")
        sp.add_argument("--kind", choices=("digraph", "incidence", "tuples"))

    c = top.add_parser("ci").add_subparsers(dest="action", required=True, parser_class=_Parser)
    circ = c.add_parser("circulant", help="CI sweep over connection sets of Z_n")
    circ.add_argument("--n", type=_positive, required=True)
    circ.add_argument("--units-only", action="store_true")
    circ.add_argument("--jobs", type=_positive, default=1)
    circ.add_argument("--checkpoint")
    cobj = c.add_parser("object", help="Babai-criterion CI check of an object over Z_n")
    cobj.add_argument("file")
    cobj.add_argument("--kind", choices=("digraph", "incidence", "tuples"))

    s = top.add_parser("sweep").add_subparsers(dest="action", required=True, parser_class=_Parser)
    th = s.add_parser("theorems", help="run the theorem sweeps")
    th.add_argument("--degree-max", type=_positive, default=12)
    th.add_argument("--only", action="append", help="run only the named sweep (repeatable)")
    th.add_argument("--jobs", type=_positive, default=1)
    th.add_argument("--checkpoint")
    return p


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise _InputError(f"cannot read {path}: {e.strerror}") from None


class _InputError(Exception):
    pass


def _group(path: str, cap):
    from .perm_core import parse_group

    G = parse_group(_read(path))
    if cap:
        G.cap = cap
    return G


def _single(path: str):
    G = _group(path, None)
    gens = G.generators
    if len(gens) != 1:
        raise _InputError(f"{path}: expected exactly one permutation")
    return gens[0]


def _emit(out, fmt: str, text_lines: list[str], machine: dict | list):
    if fmt == "machine":
        items = machine.items() if isinstance(machine, dict) else machine
        for k, v in items:
            out.write(f"{k}={v}\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _group_info(a, out) -> int:
    from .blocks import all_block_systems, normal_block_systems
    from .perm_core import orbits

    G = _group(a.file, a.order_cap)
    orb = orbits(G).cells
    lines = [f"degree {G.degree}", f"order {G.order}",
             "orbits " + " ".join("{" + ",".join(map(str, c)) + "}" for c in orb)]
    machine = [("degree", G.degree), ("order", G.order),
               ("orbits", ";".join(",".join(map(str, c)) for c in orb))]
    if len(orb) == 1:
        systems = all_block_systems(G)
        normal = normal_block_systems(G)
        lines += ["block systems"] + [f"  {B}" for B in systems]
        lines += ["normal block systems"] + [f"  {B}" for B in normal]
        machine += [("block_system", str(B)) for B in systems]
        machine += [("normal_block_system", str(B)) for B in normal]
    else:
        lines.append("intransitive: block systems not computed")
    _emit(out, a.fmt, lines, machine)
    return OK


def _group_closure(a, out) -> int:
    from .closures import closure_32, closure_52

    G = _group(a.file, a.order_cap)
    rep = closure_52(G) if a.kind == "5/2" else closure_32(G)
    out.write(rep.to_machine() if a.fmt == "machine" else rep.to_text())
    return OK


def _group_predicate(a, out) -> int:
    from .closures import closedness

    G = _group(a.file, a.order_cap)
    res = closedness(G, a.kind, strict_h=a.strict_h)
    machine = {"kind": a.kind, "holds": str(res.holds).lower()}
    for k, v in (res.witness or {}).items():
        from .closures import _fmt

        machine[f"witness_{k}"] = _fmt(v)
    _emit(out, a.fmt, [res.describe()], machine)
    return OK if res.holds else VIOLATION


def _group_normal_form(a, out) -> int:
    from .closures import verify_normal_form

    x, y = _single(a.x), _single(a.y)
    rep = verify_normal_form(x, y, cap=a.order_cap)
    if a.fmt == "machine":
        machine = {"degree": rep.degree, "group_order": rep.group_order, "tower_order": rep.tower_order,
                   "ratios": ",".join(map(str, rep.ratios)), "delta": rep.delta if rep.delta is not None else "none",
                   "conjugate": rep.conjugate if rep.conjugate is not None else "none"}
        for k, v in rep.parts.items():
            machine[f"part_{k}"] = str(v).lower()
        if rep.pimpernel is not None:
            machine["pimpernel"] = str(rep.pimpernel).lower()
        machine["holds"] = str(rep.holds).lower()
        _emit(out, "machine", [], machine)
    else:
        out.write(rep.to_text())
    return OK if rep.holds else VIOLATION


def _object(a):
    from .objects import parse_object

    return parse_object(_read(a.file), a.kind)


def _object_aut(a, out) -> int:
    from .objects import automorphism_group

    X = _object(a)
    A = automorphism_group(X)
    gens = [str(g) for g in A.generators]
    _emit(out, a.fmt, [f"points {X.n}", f"order {A.order}", "generators " + (" ".join(gens) or "()")],
          {"points": X.n, "order": A.order, "generators": ";".join(gens)})
    return OK


def _object_classify(a, out) -> int:
    from .objects import IncidenceStructure, classify_incidence, set_system_of

    X = _object(a)
    if not isinstance(X, IncidenceStructure):
        X = IncidenceStructure(X.n, tuple(set_system_of(X).sets))
    rep = classify_incidence(X)
    conf = "none" if rep.configuration is None else f"{rep.configuration[0]},{rep.configuration[1]}"
    machine = {"kind": rep.kind, "configuration": conf, "partial_sg": str(rep.partial_sg).lower(),
               "connected": str(rep.connected).lower(),
               "components": ";".join(",".join(map(str, c)) for c in rep.components)}
    if a.fmt == "machine":
        _emit(out, "machine", [], machine)
    else:
        out.write(rep.to_text())
    return OK


def _load_checkpoint(path: str | None) -> list[str]:
    if not path or not os.path.exists(path):
        return []
    return [l.rstrip("\n") for l in open(path) if l.strip()]


def _append(path: str | None, line: str) -> None:
    if path:
        with open(path, "a") as f:
            f.write(line + "\n")


def _ci_circulant(a, out) -> int:
    from .ci import CirculantRow, circulant_sweep

    done_lines = _load_checkpoint(a.checkpoint)
    done = {}
    for l in done_lines:
        n, S, verdict, witness = l.split("\t")
        key = (int(n), tuple(int(v) for v in S.strip("{}").split(",") if v))
        done[key] = CirculantRow(key[0], key[1], verdict == "CI", witness)
    fresh = circulant_sweep(a.n, units_only=a.units_only, jobs=a.jobs, done=set(done),
                            on_row=lambda r: _append(a.checkpoint, r.tsv()))
    rows = sorted([r for k, r in done.items() if k[0] == a.n] + fresh, key=lambda r: r.S)
    ci = sum(r.verdict for r in rows)
    if a.fmt == "machine":
        for r in rows:
            out.write(f"row={r.tsv()}\n")
        out.write(f"n={a.n}\nsets={len(rows)}\nci={ci}\nnot_ci={len(rows) - ci}\n")
    else:
        out.write("n\tS\tverdict\twitness\n")
        for r in rows:
            out.write(r.tsv() + "\n")
        out.write(f"# n={a.n} sets={len(rows)} ci={ci} not_ci={len(rows) - ci}\n")
    return OK if ci == len(rows) else VIOLATION


def _ci_object(a, out) -> int:
    from .ci import is_ci_object

    rep = is_ci_object(_object(a))
    if a.fmt == "machine":
        machine = [("object", rep.descriptor), ("route", rep.route), ("verdict", str(rep.verdict).lower()),
                   ("regular_cyclic_count", rep.regular_cyclic_count)]
        machine += [("witness", " ".join(str(x) for x in w)) for w in rep.witnesses]
        _emit(out, "machine", [], machine)
    else:
        out.write(rep.to_text())
    return OK if rep.verdict else VIOLATION


def _sweep_theorems(a, out) -> int:
    from .sweeps import THEOREM_SWEEPS, run_theorem_sweeps

    names = a.only or list(THEOREM_SWEEPS)
    unknown = [n for n in names if n not in THEOREM_SWEEPS]
    if unknown:
        raise _InputError(f"unknown sweep {unknown[0]!r}; choose from {', '.join(THEOREM_SWEEPS)}")
    previous = {}
    for l in _load_checkpoint(a.checkpoint):
        name, summary = l.split("\t", 1)
        previous[name] = summary
    results: dict[str, str] = dict(previous)

    def record(name, r):
        line = r.summary()
        if r.notes:
            line += "\t" + " | ".join(r.notes)
        for v in r.violations[:5]:
            text = v.to_text().replace("\n", "; ") if hasattr(v, "to_text") else str(v)
            line += "\twitness: " + text
        results[name] = line
        _append(a.checkpoint, f"{name}\t{line}")

    run_theorem_sweeps(a.degree_max, names, jobs=a.jobs, skip=set(previous), on_result=record)
    failed = 0
    for name in names:
        line = results[name]
        failed += "\tFAIL\t" in line
        if a.fmt == "machine":
            out.write(f"sweep={line}\n")
        else:
            out.write(line + "\n")
    out.write(f"# sweeps={len(names)} failed={failed}\n")
    return VIOLATION if failed else OK


HANDLERS = {
    ("group", "info"): _group_info,
    ("group", "closure"): _group_closure,
    ("group", "predicate"): _group_predicate,
    ("group", "normal-form"): _group_normal_form,
    ("object", "aut"): _object_aut,
    ("object", "classify"): _object_classify,
    ("ci", "circulant"): _ci_circulant,
    ("ci", "object"): _ci_object,
    ("sweep", "theorems"): _sweep_theorems,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    a.config = CommandConfig(
        command=f"{a.area} {a.action}",
        inputs=[getattr(a, k) for k in ("file", "x", "y") if getattr(a, k, None)],
        order_cap=a.order_cap,
        kind=getattr(a, "kind", None),
        strict_h=getattr(a, "strict_h", False),
        fmt=a.fmt,
    )
    try:
        return HANDLERS[(a.area, a.action)](a, out)
    except (_InputError, PermClosureError, ValueError) as e:
        # input problems, including malformed files and violated preconditions
        if isinstance(e, OrderCapExceeded):
            print(f"error: {e} (raise --order-cap)", file=sys.stderr)
        else:
            print(f"error: {e}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
