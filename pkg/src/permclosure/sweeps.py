"""Exhaustive sweeps backing the theorem checks and the ``sweep`` CLI command."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from sympy.combinatorics import Permutation as _SymPerm
from sympy.combinatorics import PermutationGroup as _SymGroup

from .perm_core import (
    Permutation,
    _cyclic_keys,
    _decode,
    _encode,
    _full_cycle_mask,
    _units,
    PermGroup,
    default_order_cap,
    group_generate,
)


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        return f"{self.name}\t{verdict}\tchecked={self.checked}\tviolations={len(self.violations)}"


def symbolic_order(n: int, gens) -> int:
    """Order of ``<gens>`` by Schreier-Sims, without listing elements."""
    gens = [_SymPerm(list(g.images)) for g in gens]
    if not gens:
        return 1
    return int(_SymGroup(gens).order())


# ---------------------------------------------------------------------------
# full cycles y for the normal-form sweep


def standard_cycle(n: int) -> Permutation:
    return Permutation([(i + 1) % n for i in range(n)])


def holomorph_rows(n: int) -> np.ndarray:
    """The normalizer of ``<x>`` in ``S_n``: all maps ``i -> a*i + b`` with ``a`` a unit."""
    return np.array([[(a * i + b) % n for i in range(n)] for a in _units(n) for b in range(n)],
                    dtype=np.intp)


def holomorph_keys(rows: np.ndarray) -> np.ndarray:
    """Least code of a generator of ``h^-1 <y> h`` over ``h`` in the holomorph, per full-cycle row.

    Both the group ``<x, y>`` up to conjugation fixing ``<x>`` and the subgroup
    ``<y>`` are determined by this key.
    """
    n = rows.shape[1]
    best = None
    for h in holomorph_rows(n):
        hinv = np.argsort(h)
        conj = hinv[rows[:, h]]
        k = _cyclic_keys(conj)
        best = k if best is None else np.minimum(best, k)
    return best


def cycles_preserving_residues(n: int, d: int) -> np.ndarray:
    """Rows of all full cycles preserving the partition of ``Z_n`` into residues mod ``d``."""
    m = n // d
    cells = [list(range(j, n, d)) for j in range(d)]
    out = []
    for order in itertools.permutations(range(1, d)):
        for first in itertools.permutations(cells[0][1:]):
            seq0 = (0,) + first
            for rest in itertools.product(*(itertools.permutations(cells[j]) for j in order)):
                cols = (seq0,) + rest
                cyc = [cols[t][s] for s in range(m) for t in range(d)]
                row = [0] * n
                for k in range(n):
                    row[cyc[k]] = cyc[(k + 1) % n]
                out.append(row)
    return np.array(out, dtype=np.intp).reshape(-1, n)


def pgl2_rows(q: int) -> np.ndarray:
    """``PGL(2, q)`` acting on the projective line ``0..q-1`` plus ``q`` for infinity."""
    inf = q

    def mobius(a, b, c, dd):
        row = []
        for z in range(q + 1):
            if z == inf:
                row.append(inf if c == 0 else a * pow(c, -1, q) % q)
                continue
            den = (c * z + dd) % q
            row.append(inf if den == 0 else (a * z + b) * pow(den, -1, q) % q)
        return Permutation(row)

    gens = [mobius(1, 1, 0, 1)] + [mobius(a, 0, 0, 1) for a in _units(q)] + [mobius(0, q - 1, 1, 0)]
    return group_generate(q + 1, gens).rows.astype(np.intp)


def _primitive_cycles_12() -> np.ndarray:
    """Full cycles ``y`` of degree 12 with ``<x, y>`` a conjugate of ``PGL(2, 11)``.

    Every conjugate of ``P = PGL(2, 11)`` containing ``x`` has the form
    ``P^c`` with ``c`` carrying some 12-cycle of ``P`` to ``x``; each such
    ``c`` is determined up to a power of ``x``.
    """
    P = pgl2_rows(11)
    twelve = P[_full_cycle_mask(P)]
    found = set()
    for xp in twelve:
        seq = [0]
        for _ in range(11):
            seq.append(int(xp[seq[-1]]))
        for shift in range(12):
            c = np.array(seq[shift:] + seq[:shift], dtype=np.intp)
            cinv = np.argsort(c)
            conj = cinv[twelve[:, c]]
            found.update(_encode(conj, 12).tolist())
    return np.array([_decode(k, 12) for k in sorted(found)], dtype=np.intp)


def normal_form_candidates(n: int) -> tuple[list[Permutation], dict]:
    """Representatives ``y`` for the normal-form sweep at degree ``n``.

    Up to degree 10 every full cycle through ``0`` is listed.  At degree 12
    the full cycles generating, with ``x``, a group of feasible size are either
    imprimitive (preserving residues mod some proper divisor) or generate a
    conjugate of ``PGL(2, 11)``; these are collected and reduced modulo unit
    powers and conjugation by the holomorph of ``<x>``, which preserves every
    condition checked.
    """
    info: dict = {}
    if n <= 10:
        ys = [Permutation.from_cycles(n, [(0,) + rest]) for rest in itertools.permutations(range(1, n))]
        info["listed"] = len(ys)
        return ys, info
    if n != 12:
        raise ValueError("normal-form sweep is implemented for degrees up to 10 and 12")
    parts = [cycles_preserving_residues(n, d) for d in (2, 3, 4, 6)]
    info["imprimitive_rows"] = sum(len(p) for p in parts)
    prim = _primitive_cycles_12()
    info["primitive_rows"] = len(prim)
    rows = np.concatenate(parts + [prim])
    keys = holomorph_keys(rows)
    uniq, first = np.unique(keys, return_index=True)
    info["classes"] = len(uniq)
    ys = [Permutation(int(v) for v in rows[i]) for i in sorted(first.tolist())]
    return ys, info


def normal_form_sweep(n: int, cap: int | None = None, progress=None) -> SweepResult:
    from .closures import verify_normal_form

    cap = default_order_cap() if cap is None else cap
    x = standard_cycle(n)
    ys, info = normal_form_candidates(n)
    res = SweepResult(f"normal-form n={n}")
    res.notes.append(" ".join(f"{k}={v}" for k, v in info.items()))
    over = pim = 0
    for i, y in enumerate(ys):
        if symbolic_order(n, [x, y]) > cap:
            over += 1
            continue
        rep = verify_normal_form(x, y, cap=cap)
        res.checked += 1
        if rep.pimpernel is not None:
            pim += 1
        if not rep.holds:
            res.violations.append(rep)
        if progress:
            progress(i, len(ys))
    res.notes.append(f"over_cap={over} pimpernel_checked={pim}")
    return res


__all__ = [
    "SweepResult",
    "THEOREM_SWEEPS",
    "run_theorem_sweeps",
    "closure_52_sweep",
    "toida_sweep",
    "multiplier_failure_sweep",
    "unit_circulant_structure_sweep",
    "regular_cyclic_conjugacy_sweep",
    "structure_32_sweep",
    "configuration_sweep",
    "girth_sweep",
    "oracle_agreement_sweep",
    "oracle_objects",
    "cyclic_n3_bases",
    "pappus_configuration",
    "petersen_graph",
    "symbolic_order",
    "standard_cycle",
    "holomorph_rows",
    "holomorph_keys",
    "cycles_preserving_residues",
    "pgl2_rows",
    "normal_form_candidates",
    "normal_form_sweep",
]


# ---------------------------------------------------------------------------
# theorem sweeps


def _materialized(A) -> PermGroup:
    G = PermGroup(A.degree, A.generators, cap=A.cap)
    G._materialize()
    return G


def closure_52_sweep(degrees=(4, 5, 6)) -> SweepResult:
    """Every transitive subgroup of ``S_n``: the 5/2-closure is closed, contains
    the input, is idempotent and keeps the block systems."""
    from .blocks import all_block_systems
    from .closures import closure_52, is_52_closed
    from .perm_core import symmetric_group, transitive_subgroups

    res = SweepResult("closure-5/2 " + ",".join(map(str, degrees)))
    grown = longest = 0
    for n in degrees:
        for G in transitive_subgroups(symmetric_group(n)):
            rep = closure_52(G)
            C = rep.result
            res.checked += 1
            longest = max(longest, rep.steps)
            grown += C.order != G.order
            problems = []
            if not is_52_closed(C):
                problems.append("not closed")
            if not G.is_subgroup_of(C):
                problems.append("does not contain input")
            if closure_52(C).result != C:
                problems.append("not idempotent")
            if all_block_systems(C) != all_block_systems(G):
                problems.append("block systems changed")
            if problems:
                res.violations.append((G.describe(), problems))
    res.notes.append(f"grown={grown} max_steps={longest}")
    return res


def toida_sweep(degree_max: int = 12, jobs: int = 1) -> SweepResult:
    from .ci import circulant_sweep

    res = SweepResult(f"toida n<={degree_max}")
    for n in range(1, degree_max + 1):
        for row in circulant_sweep(n, units_only=True, jobs=jobs):
            res.checked += 1
            if not row.verdict:
                res.violations.append(row.tsv())
    return res


def multiplier_failure_sweep(n: int = 8) -> SweepResult:
    """The full sweep at ``n`` must find an isomorphic pair that no multiplier relates."""
    from .ci import circulant_sweep, multiplier_equivalent
    from .objects import cayley_digraph, isomorphism, relabel

    res = SweepResult(f"multiplier-failure n={n}")
    rows = circulant_sweep(n)
    res.checked = len(rows)
    pairs = []
    for r in rows:
        if r.verdict:
            continue
        s_txt, rest = r.witness.split("~")
        t_txt = rest.split(" via ")[0]
        S = [int(v) for v in s_txt.strip("{}").split(",")]
        T = [int(v) for v in t_txt.strip("{}").split(",")]
        X, Y = cayley_digraph(n, S), cayley_digraph(n, T)
        g = isomorphism(X, Y)
        if g is not None and relabel(X, g) == Y and multiplier_equivalent(n, S, T) is None:
            pairs.append((tuple(S), tuple(T), str(g)))
    if not pairs:
        res.violations.append("no isomorphic non-multiplier-equivalent pair found")
    res.notes.append("pairs " + " ".join(f"{{{','.join(map(str, a))}}}~{{{','.join(map(str, b))}}}" for a, b, _ in pairs))
    return res


def _structure_branches(G):
    """(9/8-closed, decomposition with 9/8-closed quotient or None)."""
    from .closures import closedness, decompose_wreath_symmetric

    c98 = bool(closedness(G, "9/8"))
    dec = decompose_wreath_symmetric(G)
    good = None
    if dec is not None and dec.m >= 2 and bool(closedness(dec.quotient, "9/8")):
        good = dec
    return c98, good


def unit_circulant_structure_sweep(degree_max: int = 8) -> SweepResult:
    """Aut of every unit circulant is 3/2-closed, and exactly one of: 9/8-closed,
    or reducible with ``Aut = K wr S_m`` and ``K`` 9/8-closed."""
    from .ci import multiplier_orbit_reps
    from .closures import closedness
    from .objects import automorphism_group, twin_partition, unit_circulant
    from .perm_core import _units

    res = SweepResult(f"unit-circulant-structure n<={degree_max}")
    for n in range(2, degree_max + 1):
        units = _units(n)
        sets = itertools.chain.from_iterable(itertools.combinations(units, k) for k in range(len(units) + 1))
        for S in multiplier_orbit_reps(n, sets):
            D = unit_circulant(n, S)
            A = _materialized(automorphism_group(D))
            res.checked += 1
            label = f"n={n} S={{{','.join(map(str, S))}}} |Aut|={A.order}"
            if not closedness(A, "3/2"):
                res.violations.append(label + " not 3/2-closed")
                continue
            c98, dec = _structure_branches(A)
            twins = twin_partition(D)
            reducible = False
            if twins.reducible and dec is not None:
                # the symmetric patches must be exactly the twin classes
                if tuple(dec.system.cells) != twins.cells:
                    res.violations.append(label + " patches differ from twin classes")
                    continue
                if A.order != dec.quotient.order * math.factorial(dec.m) ** len(dec.system):
                    res.violations.append(label + " order mismatch")
                    continue
                reducible = True
            if c98 == reducible:
                branch = "both" if c98 else "neither"
                res.violations.append(label + f" branches: {branch}")
    return res


def _group_pool(degree_max: int = 8):
    """Transitive groups met by the sweeps: all transitive subgroups of ``S_2..S_6``
    plus automorphism groups of circulants and cyclic configurations up to ``degree_max``."""
    from .ci import multiplier_orbit_reps
    from .objects import automorphism_group, cayley_digraph, cyclic_configuration
    from .perm_core import symmetric_group, transitive_subgroups

    pool = {}
    for n in range(2, min(6, degree_max) + 1):
        for G in transitive_subgroups(symmetric_group(n)):
            pool.setdefault((n, G.key()), G)
    for n in range(2, degree_max + 1):
        sets = itertools.chain.from_iterable(itertools.combinations(range(1, n), k) for k in range(n))
        for S in multiplier_orbit_reps(n, sets):
            A = _materialized(automorphism_group(cayley_digraph(n, S)))
            pool.setdefault((n, A.key()), A)
        for base in cyclic_n3_bases(n):
            A = _materialized(automorphism_group(cyclic_configuration(n, base)))
            pool.setdefault((n, A.key()), A)
    return [pool[k] for k in sorted(pool, key=lambda k: (k[0], len(k[1]), k[1]))]


def regular_cyclic_conjugacy_sweep(degree_max: int = 8, pool=None) -> SweepResult:
    """In every 9/8-closed group of the pool, regular cyclic subgroups are conjugate and pronormal."""
    from .closures import closedness
    from .perm_core import are_conjugate_subgroups, is_pronormal, regular_cyclic_subgroups

    res = SweepResult(f"regular-cyclic-conjugacy n<={degree_max}")
    pool = _group_pool(degree_max) if pool is None else pool
    for G in pool:
        if not closedness(G, "9/8"):
            continue
        regs = regular_cyclic_subgroups(G)
        if not regs:
            continue
        res.checked += 1
        first = regs[0]
        bad = [R for R in regs[1:] if are_conjugate_subgroups(G, first, R) is None]
        if bad:
            res.violations.append(f"{G.describe()}: {len(bad)} non-conjugate regular cyclic subgroups")
            continue
        pr = is_pronormal(G, first)
        if not pr:
            res.violations.append(f"{G.describe()}: <{first.generators[0]}> not pronormal, g={pr.violator}")
    return res


def structure_32_sweep(degree_max: int = 8, pool=None) -> SweepResult:
    """Every 3/2-closed group of the pool is 9/8-closed or ``K wr S_m`` with ``K`` 9/8-closed, not both."""
    from .closures import closedness

    res = SweepResult(f"3/2-structure n<={degree_max}")
    pool = _group_pool(degree_max) if pool is None else pool
    for G in pool:
        if not closedness(G, "3/2"):
            continue
        res.checked += 1
        c98, dec = _structure_branches(G)
        if c98 == (dec is not None):
            res.violations.append(f"{G.describe()}: branches {'both' if c98 else 'neither'}")
    return res


def cyclic_n3_bases(n: int) -> list[tuple[int, int, int]]:
    """Base lines ``{0, a, b}`` of cyclic ``n_3`` configurations, one per multiplier class."""
    from .perm_core import _units

    found = []
    for a, b in itertools.combinations(range(1, n), 2):
        diffs = {a, b, b - a, -a % n, -b % n, (a - b) % n}
        if len(diffs) == 6:
            found.append((0, a, b))
    # lines of the configuration up to multipliers; keep the least base per class
    keys = {}
    for base in found:
        key = min(tuple(sorted(tuple(sorted((m * p + t) % n for p in base)) for t in range(n)))
                  for m in _units(n))
        keys.setdefault(key, base)
    return sorted(keys.values())


def pappus_configuration():
    """The affine plane of order 3 with one parallel class removed; points ``3i + j``."""
    from .objects import IncidenceStructure

    lines = []
    for di, dj in ((0, 1), (1, 1), (1, 2)):
        seen = set()
        for i in range(3):
            for j in range(3):
                L = frozenset(3 * ((i + k * di) % 3) + (j + k * dj) % 3 for k in range(3))
                if L not in seen:
                    seen.add(L)
                    lines.append(L)
    return IncidenceStructure(9, tuple(lines))


def configuration_sweep(degree_max: int = 13) -> SweepResult:
    """Fano, Moebius-Kantor and Pappus classify as connected partial SG designs with
    point-transitive, 9/8-closed Aut; every cyclic ``n_3`` configuration is CI."""
    from .ci import is_ci_object
    from .closures import closedness
    from .objects import automorphism_group, classify_incidence, cyclic_configuration

    res = SweepResult(f"configurations n<={degree_max}")
    named = [("Fano", cyclic_configuration(7, (0, 1, 3)), 168),
             ("Moebius-Kantor", cyclic_configuration(8, (0, 1, 3)), 48),
             ("Pappus", pappus_configuration(), 108)]
    for name, X, expect in named:
        res.checked += 1
        rep = classify_incidence(X)
        A = _materialized(automorphism_group(X))
        info = f"{name}: kind={rep.kind} connected={rep.connected} |Aut|={A.order}"
        res.notes.append(info)
        if not (rep.partial_sg and rep.connected and rep.configuration == (3, 3)):
            res.violations.append(info + " classification")
        if not A.is_transitive():
            res.violations.append(info + " not point-transitive")
        if not closedness(A, "9/8"):
            res.violations.append(info + " not 9/8-closed")
        if A.order != expect:
            res.violations.append(info + f" expected |Aut|={expect}")
    count = 0
    for n in range(7, degree_max + 1):
        for base in cyclic_n3_bases(n):
            count += 1
            res.checked += 1
            rep = is_ci_object(cyclic_configuration(n, base))
            if not rep.verdict:
                res.violations.append(f"cyclic {n}_3 base {base} not CI")
    res.notes.append(f"cyclic_configurations={count}")
    return res


def petersen_graph():
    from .objects import Digraph

    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Digraph.from_edges(10, outer + inner + spokes)


def girth_sweep() -> SweepResult:
    from .closures import closedness
    from .objects import automorphism_group, girth_and_bipartite_search

    res = SweepResult("petersen")
    P = petersen_graph()
    girth, kpp = girth_and_bipartite_search(P, 2)
    A = _materialized(automorphism_group(P))
    c98 = bool(closedness(A, "9/8"))
    res.checked = 1
    res.notes.append(f"girth={girth} vecK22={kpp} |Aut|={A.order} 9/8={c98}")
    if girth != 5 or kpp or A.order != 120 or not c98:
        res.violations.append(res.notes[-1])
    return res


def oracle_objects(degree_max: int = 8):
    """Test objects up to ``degree_max`` points: circulants, empty digraphs,
    cyclic configurations and circulant coloured tuple systems."""
    from .objects import ColoredTupleSystem, Digraph, cayley_digraph, cyclic_configuration

    objs = []
    for n in range(2, degree_max + 1):
        objs.append(Digraph.empty(n))
        for k in range(n):
            for S in itertools.combinations(range(1, n), k):
                objs.append(cayley_digraph(n, S))
        for base in cyclic_n3_bases(n):
            objs.append(cyclic_configuration(n, base))
        if n >= 4:
            # ordered triples (i, i+1, i+3) in one colour and pairs (i, i+2) in another
            tuples = [((i, (i + 1) % n, (i + 3) % n), "a") for i in range(n)]
            tuples += [((i, (i + 2) % n), "b") for i in range(n)]
            objs.append(ColoredTupleSystem(n, tuple(tuples)))
    return objs


def oracle_agreement_sweep(degree_max: int = 8) -> SweepResult:
    """Search-based Aut equals the brute-force filter; Babai and definitional CI agree."""
    from .ci import is_ci_digraph_direct, is_ci_object, multiplier_orbit_reps
    from .objects import automorphism_group, automorphisms_brute_force, cayley_digraph

    res = SweepResult(f"oracle-agreement n<={degree_max}")
    for X in oracle_objects(degree_max):
        res.checked += 1
        A = _materialized(automorphism_group(X))
        B = automorphisms_brute_force(X)
        if A != B:
            res.violations.append(f"Aut mismatch on {type(X).__name__} n={X.n}: {A.order} vs {B.order}")
    for n in range(2, degree_max + 1):
        sets = itertools.chain.from_iterable(itertools.combinations(range(1, n), k) for k in range(n))
        for S in multiplier_orbit_reps(n, sets):
            res.checked += 1
            babai = is_ci_object(cayley_digraph(n, S), direct=False).verdict
            direct = is_ci_digraph_direct(n, S).verdict
            if babai != direct:
                res.violations.append(f"CI routes disagree on n={n} S={S}")
    return res


THEOREM_SWEEPS = {
    "closure-5/2": lambda d: closure_52_sweep(tuple(range(4, min(6, d) + 1))),
    "toida": lambda d: toida_sweep(min(12, d)),
    "multiplier-failure": lambda d: multiplier_failure_sweep(8) if d >= 8 else SweepResult("multiplier-failure (skipped)"),
    "unit-circulant-structure": lambda d: unit_circulant_structure_sweep(min(8, d)),
    "regular-cyclic-conjugacy": lambda d: regular_cyclic_conjugacy_sweep(min(8, d)),
    "3/2-structure": lambda d: structure_32_sweep(min(8, d)),
    "configurations": lambda d: configuration_sweep(min(13, d)),
    "petersen": lambda d: girth_sweep(),
    "normal-form": lambda d: _normal_forms(d),
    "oracle-agreement": lambda d: oracle_agreement_sweep(min(8, d)),
}


def _normal_forms(d: int) -> SweepResult:
    res = SweepResult(f"normal-form n in 6,8,12 (<= {d})")
    for n in (6, 8, 12):
        if n > d:
            continue
        r = normal_form_sweep(n)
        res.checked += r.checked
        res.violations += r.violations
        res.notes += [f"n={n} " + note for note in r.notes]
    return res


def _run_named(args):
    name, d = args
    return name, THEOREM_SWEEPS[name](d)


def run_theorem_sweeps(degree_max: int = 12, names=None, jobs: int = 1, skip=(), on_result=None):
    """Run the named sweeps (all by default) and return results in canonical order."""
    names = [n for n in (names or THEOREM_SWEEPS) if n not in skip]
    out = []
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for name, r in ex.map(_run_named, [(n, degree_max) for n in names]):
                out.append(r)
                if on_result:
                    on_result(name, r)
    else:
        for name in names:
            r = THEOREM_SWEEPS[name](degree_max)
            out.append(r)
            if on_result:
                on_result(name, r)
    return out
