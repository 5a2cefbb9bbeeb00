"""Cayley-isomorphism verdicts for objects over ``Z_n``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .closures import Closedness, closedness
from .errors import NotCayleyObject, SizeTooLarge
from .objects import (
    Digraph,
    _Search,
    _structure,
    automorphism_group,
    cayley_digraph,
    double_coset_digraph,
    is_automorphism,
)
from .perm_core import (
    Permutation,
    PermGroup,
    _cyclic_keys,
    _decode,
    _full_cycle_mask,
    _inverse_rows,
    _units,
    group_generate,
)

__all__ = [
    "CIReport",
    "multiplier_equivalent",
    "multiplier_orbit_reps",
    "is_ci_object",
    "is_ci_digraph_direct",
    "classify_unit_coset_digraph",
    "CirculantRow",
    "circulant_sweep",
    "format_sweep",
]

DIRECT_MAX_DEGREE = 12


@dataclass
class CIReport:
    descriptor: str
    verdict: bool
    route: str
    witnesses: list = field(default_factory=list)
    regular_cyclic_count: int = 0

    def __bool__(self) -> bool:
        return self.verdict

    def to_text(self) -> str:
        lines = [f"object {self.descriptor}", f"route {self.route}",
                 f"verdict {'CI' if self.verdict else 'not CI'}"]
        if self.route in ("babai", "both"):
            lines.append(f"regular cyclic subgroups {self.regular_cyclic_count}")
        for w in self.witnesses:
            lines.append("witness " + " ".join(str(x) for x in w))
        return "\n".join(lines) + "\n"


def _fmt_set(S) -> str:
    return "{" + ",".join(map(str, sorted(S))) + "}"


def multiplier_equivalent(n: int, S, T) -> int | None:
    """Least unit ``m`` with ``m S = T``."""
    S = {s % n for s in S}
    T = {t % n for t in T}
    if len(S) != len(T):
        return None
    for m in _units(n):
        if {m * s % n for s in S} == T:
            return m
    return None


def _canonical(n: int, S) -> tuple[int, ...]:
    """Least sorted image of ``S`` under the unit multiplications."""
    return min(tuple(sorted(m * s % n for s in S)) for m in _units(n))


def multiplier_orbit_reps(n: int, sets) -> list[tuple[int, ...]]:
    """One representative (the least image) per multiplier orbit, in sorted order."""
    return sorted({_canonical(n, S) for S in sets})


def _regular_cyclic_classes(A: PermGroup):
    """Keys of all regular cyclic subgroups of ``A`` and, for those conjugate to
    ``<x>``, the least conjugator ``g`` with ``g^-1 <x> g`` equal to them."""
    n = A.degree
    rows = A.rows.astype(np.intp)
    full = rows[_full_cycle_mask(rows)]
    keys = np.unique(_cyclic_keys(full)) if len(full) else np.array([], dtype=np.uint64)
    x = np.array([(i + 1) % n for i in range(n)], dtype=np.intp)
    inv = _inverse_rows(rows)
    conj = inv[np.arange(len(rows))[:, None], x[rows]]
    ck = _cyclic_keys(conj)
    first: dict[int, int] = {}
    for i, k in enumerate(ck.tolist()):
        first.setdefault(k, i)
    return keys, first


def is_ci_object(X, direct: bool | None = None) -> CIReport:
    """Babai criterion: every regular cyclic subgroup of ``Aut(X)`` is conjugate to ``(Z_n)_L``.

    For circulant digraphs the definitional check also runs (unless ``direct``
    is false) and must agree.
    """
    n = X.n
    shift = Permutation([(i + 1) % n for i in range(n)])
    if not is_automorphism(X, shift):
        raise NotCayleyObject("the translation i -> i+1 is not an automorphism")
    A = automorphism_group(X)
    A = group_generate(n, A.generators, cap=A.cap)
    keys, first = _regular_cyclic_classes(A)
    witnesses = []
    verdict = True
    for k in keys.tolist():
        gen = Permutation(_decode(k, n))
        if k in first:
            witnesses.append(("conjugator", gen, A.elements[first[k]]))
        else:
            verdict = False
            witnesses.append(("non-conjugate", gen))
    if not verdict:
        witnesses = [w for w in witnesses if w[0] == "non-conjugate"]
    desc = type(X).__name__ + f" n={n}"
    report = CIReport(desc, verdict, "babai", witnesses, len(keys))
    if isinstance(X, Digraph) and (direct or (direct is None and n <= 8)):
        S = sorted(v for u, v in X.arcs if u == 0)
        other = is_ci_digraph_direct(n, S)
        assert other.verdict == verdict, f"CI routes disagree on {_fmt_set(S)} mod {n}"
        report.route = "both"
        report.witnesses += other.witnesses
    return report


def _isomorphic(X, Y) -> Permutation | None:
    SX, SY = _structure(X), _structure(Y)
    g = _Search(SX, SY).run([])
    return None if g is None else Permutation(g)


def is_ci_digraph_direct(n: int, S) -> CIReport:
    """Definitional check: every isomorphic mate ``Cay(Z_n, T)`` is a multiplier image of ``S``.

    Candidates ``T`` have ``|T| = |S|``; when ``S`` consists of units only unit
    sets are tried.  One ``T`` per multiplier orbit is tested, which loses
    nothing since both isomorphism to ``Cay(Z_n, S)`` and multiplier
    equivalence to ``S`` are constant on those orbits.
    """
    if n > DIRECT_MAX_DEGREE:
        raise SizeTooLarge(f"direct CI check is limited to n <= {DIRECT_MAX_DEGREE}")
    S = sorted({s % n for s in S})
    units = set(_units(n))
    pool = sorted(units) if set(S) <= units else list(range(1, n))
    X = cayley_digraph(n, S)
    witnesses = []
    for T in multiplier_orbit_reps(n, itertools.combinations(pool, len(S))):
        m = multiplier_equivalent(n, S, T)
        if m is not None:
            witnesses.append(("multiplier", _fmt_set(T), m))
            continue
        g = _isomorphic(X, cayley_digraph(n, T))
        if g is not None:
            return CIReport(f"Cay(Z_{n},{_fmt_set(S)})", False, "definitional",
                            [("pair", _fmt_set(S), _fmt_set(T), g)])
    return CIReport(f"Cay(Z_{n},{_fmt_set(S)})", True, "definitional", witnesses)


def classify_unit_coset_digraph(G: PermGroup, H: PermGroup, S) -> Closedness:
    """3/2-closedness of ``Aut(Cos(G, H, S))``; the result is truthy when it holds."""
    D = double_coset_digraph(G, H, S)
    A = automorphism_group(D)
    A = group_generate(D.n, A.generators, cap=A.cap)
    return closedness(A, "3/2")


# ---------------------------------------------------------------------------
# sweeps over connection sets


@dataclass
class CirculantRow:
    n: int
    S: tuple[int, ...]
    verdict: bool
    witness: str

    def tsv(self) -> str:
        return f"{self.n}\t{_fmt_set(self.S)}\t{'CI' if self.verdict else 'not-CI'}\t{self.witness}"


def _sweep_one(args) -> CirculantRow:
    n, S = args
    rep = is_ci_digraph_direct(n, S)
    if rep.verdict:
        wit = ";".join(f"{T}*{m}" for _, T, m in rep.witnesses) or "-"
    else:
        _, s, t, g = rep.witnesses[0]
        wit = f"{s}~{t} via {g}"
    return CirculantRow(n, tuple(S), rep.verdict, wit)


def circulant_sweep(n: int, units_only: bool = False, jobs: int = 1, done: set | None = None,
                    on_row=None) -> list[CirculantRow]:
    """CI verdict for one connection set per multiplier orbit, in sorted order.

    ``done`` holds ``(n, S)`` pairs to skip (a resumed sweep); ``on_row`` is
    called with each finished row in canonical order.
    """
    pool = _units(n) if units_only else list(range(1, n))
    if n == 1:
        pool = []
    reps = multiplier_orbit_reps(n, (c for k in range(len(pool) + 1) for c in itertools.combinations(pool, k)))
    todo = [(n, S) for S in reps if not done or (n, S) not in done]
    rows = []
    if jobs > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            # map yields in submission order, so output stays canonical
            for r in ex.map(_sweep_one, todo, chunksize=4):
                rows.append(r)
                if on_row:
                    on_row(r)
    else:
        for t in todo:
            r = _sweep_one(t)
            rows.append(r)
            if on_row:
                on_row(r)
    return rows


def format_sweep(rows: list[CirculantRow], n: int) -> str:
    body = "".join(r.tsv() + "\n" for r in rows)
    ci = sum(r.verdict for r in rows)
    return body + f"# n={n} sets={len(rows)} ci={ci} not_ci={len(rows) - ci}\n"
