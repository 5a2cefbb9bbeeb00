"""Wreath stabilizers, fixer block systems and the fractional closedness classes.

Most questions quantify over every transitive subgroup ``H`` of ``G`` and every
normal block system ``B`` of ``H``.  Two facts keep that tractable:

* ``B`` is a normal block system of some transitive ``H <= G`` exactly when
  ``K_B`` (the largest subgroup of ``G`` preserving ``B``) is transitive and
  ``fix_{K_B}(B)`` is transitive on every cell.  We call such ``B`` relevant.
* For such ``H``, ``WStab_H(C) <= WStab_{K_B}(C)``.  So a cell on which
  ``WStab_{K_B}(C)`` is trivial is always equivalent to ``C`` in ``H``, which
  bounds the possible fixer cells from below.

Subgroups ``H`` are only enumerated when that bound is not enough to decide.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import sympy

from .blocks import (
    BlockSystem,
    equal_partitions,
    fix,
    is_normal_block_system,
    quotient,
)
from .errors import (
    DegreeTooLarge,
    MaximumNotUnique,
    NotInvariant,
    NotNormalBlockSystem,
    NotRegularCyclic,
)
from .perm_core import (
    PermGroup,
    Permutation,
    _cyclic_keys,
    _encode,
    _inverse_rows,
    _point_orbits,
    all_subgroups,
    group_generate,
    is_solvable,
    symmetric_group,
)

__all__ = [
    "restrict",
    "pointwise_stabilizer",
    "wreath_stabilizer",
    "FixerAnalysis",
    "fixer_analysis",
    "largest_subgroup_with_block_system",
    "relevant_block_systems",
    "Closedness",
    "is_52_closed",
    "closedness",
    "StepRecord",
    "ClosureReport",
    "clo_52_step",
    "closure_52",
    "closure_32",
    "WreathDecomposition",
    "decompose_wreath_symmetric",
    "NormalFormReport",
    "tower_order",
    "verify_normal_form",
]

CLOSURE_32_MAX_DEGREE = 8


def restrict(g: Permutation, X) -> Permutation:
    """``g`` on ``X`` and the identity elsewhere."""
    X = set(X)
    if {g(x) for x in X} != X:
        raise NotInvariant(f"{g} does not stabilize {sorted(X)}")
    return Permutation(g(i) if i in X else i for i in range(g.degree))


def _restrict_rows(rows: np.ndarray, pts) -> np.ndarray:
    out = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape).copy()
    pts = np.asarray(list(pts), dtype=np.intp)
    out[:, pts] = rows[:, pts]
    return out


def _fixes_points(rows: np.ndarray, pts) -> np.ndarray:
    pts = np.asarray(list(pts), dtype=np.intp)
    if not len(pts):
        return np.ones(len(rows), dtype=bool)
    return np.all(rows[:, pts] == pts[None, :], axis=1)


def pointwise_stabilizer(G: PermGroup, pts) -> PermGroup:
    """Elements of ``G`` fixing every point of ``pts``."""
    return G.subgroup_from_mask(_fixes_points(G.rows, sorted(set(pts))))


# ---------------------------------------------------------------------------
# wreath stabilizers


def _transitive_on(rows: np.ndarray, cell) -> bool:
    return len(np.unique(rows[:, cell[0]])) == len(cell)


def _wstab_rows(frows: np.ndarray, B: BlockSystem, ci: int) -> np.ndarray:
    """Largest subgroup of the cell-fixing group ``frows`` that is trivial on cell ``ci``
    and transitive or trivial on every other cell.

    Start with every other cell allowed to move; the subgroup of elements that
    are trivial off the allowed cells must be transitive on each allowed cell,
    otherwise that cell is forced trivial.  Any qualifying subgroup survives
    each pass, so the fixpoint is the maximum.
    """
    cells = B.cells
    P = frows[_fixes_points(frows, cells[ci])]
    allowed = [j for j in range(len(cells)) if j != ci]
    while True:
        pinned = [p for j in range(len(cells)) if j not in allowed for p in cells[j]]
        W = P[_fixes_points(P, pinned)]
        keep = [j for j in allowed if _transitive_on(W, cells[j])]
        if keep == allowed:
            return W
        allowed = keep


def _qualifies(rows: np.ndarray, B: BlockSystem, ci: int) -> bool:
    if not np.all(_fixes_points(rows, B.cells[ci])):
        return False
    for j, c in enumerate(B.cells):
        if j == ci:
            continue
        moved = len(np.unique(rows[:, c[0]]))
        if not (moved == len(c) or np.all(_fixes_points(rows, c))):
            return False
    return True


def _require_normal(G: PermGroup, B: BlockSystem) -> None:
    if not G.is_transitive() or B.degree != G.degree or not B.is_block_system_of(G) \
            or not is_normal_block_system(G, B):
        raise NotNormalBlockSystem(f"{B} is not a normal block system of the group")


def wreath_stabilizer(G: PermGroup, B: BlockSystem, cell, method: str = "fixpoint") -> PermGroup:
    """``WStab_G(cell)``: the largest subgroup of ``fix_G(B)`` trivial on ``cell`` and
    transitive or trivial on every other cell.

    ``method="lattice"`` instead joins every qualifying subgroup of the pointwise
    stabilizer; it is exponentially slower and kept as a cross-check.
    """
    _require_normal(G, B)
    cell = tuple(sorted(cell))
    ci = B.cells.index(cell)
    F = fix(G, B)
    if method == "fixpoint":
        return PermGroup._from_rows(G.degree, _wstab_rows(F.rows, B, ci), sort=True)
    if method != "lattice":
        raise ValueError(f"unknown method {method!r}")
    P = pointwise_stabilizer(F, cell)
    good = [H for H in all_subgroups(P) if _qualifies(H.rows, B, ci)]
    W = group_generate(G.degree, [g for H in good for g in H.generators])
    if not _qualifies(W.rows, B, ci):
        raise MaximumNotUnique("join of qualifying subgroups does not qualify")
    return W


@dataclass
class FixerAnalysis:
    group: PermGroup
    system: BlockSystem
    wstab_per_cell: dict[tuple[int, ...], PermGroup]
    equiv_classes: tuple[tuple[tuple[int, ...], ...], ...]
    fixer_system: BlockSystem


def _fixer_cells(Grows: np.ndarray, B: BlockSystem):
    """(wreath stabilizer rows per cell, fixer system) for a group given by rows."""
    n = B.degree
    frows = Grows[B.fixed_by(Grows)]
    wst = [_wstab_rows(frows, B, i) for i in range(len(B))]
    keys = [np.sort(_encode(w, n)).tobytes() for w in wst]
    label = {}
    lab = np.empty(n, dtype=np.intp)
    for i, c in enumerate(B.cells):
        lab[list(c)] = label.setdefault(keys[i], len(label))
    return wst, BlockSystem.from_labels(lab)


def fixer_analysis(G: PermGroup, B: BlockSystem, verify: bool = True) -> FixerAnalysis:
    """Wreath stabilizers of every cell, the equivalence classes they induce and the fixer system."""
    _require_normal(G, B)
    n = G.degree
    wst, E = _fixer_cells(G.rows, B)
    per_cell = {c: PermGroup._from_rows(n, w, sort=True) for c, w in zip(B.cells, wst)}
    classes = tuple(tuple(c for c in B.cells if set(c) <= set(e)) for e in E.cells)
    if verify:
        for g in G.generators:
            ginv = np.argsort(np.array(g.images))
            for c, W in per_cell.items():
                img = tuple(sorted(g(p) for p in c))
                conj = np.array(g.images)[W.rows][:, ginv]  # g w g^-1
                if not np.array_equal(np.sort(_encode(conj, n)), per_cell[img].codes):
                    raise AssertionError("wreath stabilizers are not conjugation equivariant")
        for c, W in per_cell.items():
            for c2 in B.cells:
                if c2 != c and not _same_class(classes, c, c2) and not _transitive_on(W.rows, c2):
                    raise AssertionError("inequivalent cell is not moved transitively")
        if not E.is_block_system_of(G):
            raise AssertionError("fixer system is not a block system")
    return FixerAnalysis(G, B, per_cell, classes, E)


def _same_class(classes, a, b) -> bool:
    return any(a in cl and b in cl for cl in classes)


def largest_subgroup_with_block_system(G: PermGroup, B: BlockSystem) -> PermGroup:
    """Elements of ``G`` that permute the cells of ``B``."""
    return G.subgroup_from_mask(B.preserved_by(G.rows))


# ---------------------------------------------------------------------------
# relevant systems


@dataclass
class _Relevant:
    system: BlockSystem
    K: PermGroup
    krows: np.ndarray
    wstab: list[np.ndarray]
    fixer: BlockSystem

    @property
    def nontrivial_wstab(self) -> bool:
        return any(len(w) > 1 for w in self.wstab)

    def forced_cells(self, ci: int) -> set[int]:
        """Cells that share a fixer cell with ``ci`` in every admissible subgroup."""
        w = self.wstab[ci]
        return {j for j, c in enumerate(self.system.cells) if j == ci or not _transitive_on(w, c)}


class _Analysis:
    """Per-group cache of the relevant block systems and fixer candidates."""

    _cache: dict[tuple[int, bytes], "_Analysis"] = {}

    def __new__(cls, G: PermGroup):
        key = (G.degree, G.key())
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self.G = G
        self._relevant = None
        self._actual: dict[BlockSystem, dict[tuple[int, ...], PermGroup]] = {}
        if len(cls._cache) > 512:
            cls._cache.clear()
        cls._cache[key] = self
        return self

    @property
    def relevant(self) -> list[_Relevant]:
        if self._relevant is None:
            self._relevant = list(self._find_relevant())
        return self._relevant

    def _find_relevant(self):
        G, n = self.G, self.G.degree
        rows = G.rows.astype(np.intp)
        for d in sympy.divisors(n)[1:-1]:
            for B in equal_partitions(n, d):
                kmask = B.preserved_by(rows)
                if kmask.sum() < n:
                    continue
                krows = rows[kmask]
                if len(_point_orbits(n, krows)) != 1:
                    continue
                frows = krows[B.fixed_by(krows)]
                if len(_point_orbits(n, frows)) != len(B):
                    continue
                wst, E = _fixer_cells(krows, B)
                K = G.subgroup_from_mask(kmask)
                yield _Relevant(B, K, krows, wst, E)

    def candidates(self, r: _Relevant):
        """Unions of cells that might be a fixer cell for some admissible subgroup."""
        B = r.system
        n, k = B.degree, len(B)
        seen = set()
        for ci in range(k):
            forced = r.forced_cells(ci)
            free = [j for j in range(k) if j not in forced]
            for size in range(len(free) + 1):
                for extra in itertools.combinations(free, size):
                    U = tuple(sorted(forced | set(extra)))
                    npts = len(U) * B.cell_size
                    if npts == n or n % npts or U in seen:
                        continue
                    seen.add(U)
                    yield U

    def violations(self, r: _Relevant, U) -> np.ndarray:
        """Rows of ``G`` fixing each cell in ``U`` whose restriction to ``U`` is outside ``G``."""
        B = r.system
        pts = [p for j in U for p in B.cells[j]]
        rows = self.G.rows.astype(np.intp)
        lab = B.labels
        mask = np.all(lab[rows[:, pts]] == lab[pts][None, :], axis=1)
        restricted = _restrict_rows(rows[mask], pts)
        bad = ~self.G.contains_rows(restricted)
        return restricted[bad], rows[mask][bad]

    def actual_fixer_cells(self, r: _Relevant) -> dict[tuple[int, ...], PermGroup]:
        """Fixer cells (as cell-index tuples) realized by some admissible subgroup, with one such subgroup."""
        B = r.system
        if B in self._actual:
            return self._actual[B]
        found: dict[tuple[int, ...], PermGroup] = {}
        for H in all_subgroups(r.K):
            if H.order < B.degree:
                continue
            hrows = H.rows.astype(np.intp)
            if len(_point_orbits(B.degree, hrows)) != 1:
                continue
            frows = hrows[B.fixed_by(hrows)]
            if len(_point_orbits(B.degree, frows)) != len(B):
                continue
            _, E = _fixer_cells(hrows, B)
            for e in E.cells:
                U = tuple(j for j, c in enumerate(B.cells) if c[0] in e)
                found.setdefault(U, H)
        self._actual[B] = found
        return found


def relevant_block_systems(G: PermGroup) -> list[BlockSystem]:
    """Nontrivial block systems that are normal in some transitive subgroup of ``G``."""
    return [r.system for r in _Analysis(G).relevant]


# ---------------------------------------------------------------------------
# predicates


@dataclass
class Closedness:
    kind: str
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return f"{self.kind}-closed: true"
        parts = [f"{k}={_fmt(v)}" for k, v in (self.witness or {}).items()]
        return f"{self.kind}-closed: false ({', '.join(parts)})"


def _fmt(v) -> str:
    if isinstance(v, PermGroup):
        return "<" + ", ".join(str(g) for g in v.generators) + ">" if v.generators else "<()>"
    if isinstance(v, (list, tuple)) and v and isinstance(v[0], int):
        return "[" + ",".join(map(str, v)) + "]"
    return str(v)


def _require_transitive(G: PermGroup) -> None:
    from .errors import NotTransitive

    if not G.is_transitive():
        raise NotTransitive("group is not transitive")


def _failures_52(A: _Analysis, first_only: bool):
    """Yield (relevant, U, H, restricted rows, original rows) for realized fixer cells with missing restrictions."""
    for r in A.relevant:
        if not r.nontrivial_wstab:
            continue
        failing = []
        for U in A.candidates(r):
            restricted, originals = A.violations(r, U)
            if len(restricted):
                failing.append((U, restricted, originals))
        if not failing:
            continue
        actual = A.actual_fixer_cells(r)
        for U, restricted, originals in failing:
            if U in actual:
                yield r, U, actual[U], restricted, originals
                if first_only:
                    return


def is_52_closed(G: PermGroup) -> Closedness:
    """Every restriction ``g|_E`` demanded by some transitive subgroup lies in ``G``."""
    _require_transitive(G)
    A = _Analysis(G)
    for r, U, H, _, originals in _failures_52(A, first_only=True):
        B = r.system
        E = sorted(p for j in U for p in B.cells[j])
        g = Permutation(int(v) for v in originals[0])
        return Closedness("5/2", False, {"H": H, "B": B, "E": E, "g": g})
    return Closedness("5/2", True)


def closedness(G: PermGroup, kind: str, strict_h: bool = False) -> Closedness:
    """Evaluate the 5/2, 9/8, 5/4 or 3/2 closedness predicate.

    With ``strict_h`` the 3/2 predicate tests ``E_{H,B} = B`` on the transitive
    subgroup ``H`` itself rather than on ``K_B``.
    """
    _require_transitive(G)
    if kind == "5/2":
        return is_52_closed(G)
    if kind not in ("9/8", "5/4", "3/2"):
        raise ValueError(f"unknown closedness kind {kind!r}")
    A = _Analysis(G)
    if kind == "9/8":
        for r in A.relevant:
            if r.nontrivial_wstab:
                ci = next(i for i, w in enumerate(r.wstab) if len(w) > 1)
                return Closedness(kind, False, {"H": r.K, "B": r.system, "E": r.fixer,
                                                "cell": list(r.system.cells[ci])})
        return Closedness(kind, True)
    base = is_52_closed(G)
    if not base:
        return Closedness(kind, False, dict(base.witness, reason="not 5/2-closed"))
    for r in A.relevant:
        B = r.system
        if r.fixer not in (B, BlockSystem.full(B.degree)):
            return Closedness(kind, False, {"H": r.K, "B": B, "E": r.fixer})
    if kind == "5/4":
        return Closedness(kind, True)
    for r in A.relevant:
        B = r.system
        if strict_h:
            hits = [H for U, H in A.actual_fixer_cells(r).items() if len(U) == 1]
            if not hits:
                continue
            H = hits[0]
        elif r.fixer == B:
            H = r.K
        else:
            continue
        frows = r.krows[B.fixed_by(r.krows)]
        for c in B.cells:
            local = np.unique(frows[:, list(c)], axis=0)
            if len(local) != math.factorial(len(c)):
                return Closedness(kind, False, {"H": H, "B": B, "cell": list(c)})
    return Closedness(kind, True)


# ---------------------------------------------------------------------------
# closure operators


@dataclass
class StepRecord:
    step: int
    H: PermGroup
    B: BlockSystem
    E: list[int]
    gamma: Permutation


@dataclass
class ClosureReport:
    input: PermGroup
    result: PermGroup
    steps: int
    added_generators: list[Permutation] = field(default_factory=list)
    provenance: list[StepRecord] = field(default_factory=list)
    kind: str = "5/2"

    def to_text(self) -> str:
        lines = [
            f"closure {self.kind}",
            f"input order {self.input.order}",
            f"result order {self.result.order}",
            f"steps {self.steps}",
            "added " + (" ".join(str(g) for g in self.added_generators) or "none"),
        ]
        for rec in self.provenance:
            lines.append(f"step {rec.step}: H={_fmt(rec.H)} B={rec.B} E={_fmt(rec.E)} gamma|E={rec.gamma}")
        lines.append("result generators " + " ".join(str(g) for g in self.result.generators))
        return "\n".join(lines) + "\n"

    def to_machine(self) -> str:
        lines = [
            f"kind={self.kind}",
            f"input_order={self.input.order}",
            f"result_order={self.result.order}",
            f"steps={self.steps}",
            "added=" + ";".join(str(g) for g in self.added_generators),
        ]
        for rec in self.provenance:
            lines.append(f"provenance={rec.step}|{';'.join(str(g) for g in rec.H.generators)}|{rec.B}|"
                         f"{','.join(map(str, rec.E))}|{rec.gamma}")
        lines.append("result_generators=" + ";".join(str(g) for g in self.result.generators))
        return "\n".join(lines) + "\n"


def _step(G: PermGroup, step: int):
    A = _Analysis(G)
    added: dict[bytes, Permutation] = {}
    records = []
    for r, U, H, restricted, _ in _failures_52(A, first_only=False):
        B = r.system
        E = sorted(p for j in U for p in B.cells[j])
        for row in np.unique(restricted, axis=0):
            key = row.tobytes()
            if key not in added:
                g = Permutation(int(v) for v in row)
                added[key] = g
                records.append(StepRecord(step, H, B, E, g))
    if not added:
        return G, [], []
    gens = list(G.generators) + list(added.values())
    return group_generate(G.degree, gens, cap=G.cap), list(added.values()), records


def clo_52_step(G: PermGroup) -> PermGroup:
    """``G`` together with every restriction ``gamma|_E`` demanded by a transitive subgroup."""
    _require_transitive(G)
    return _step(G, 1)[0]


def closure_52(G: PermGroup) -> ClosureReport:
    """Iterate the restriction step until nothing new appears."""
    _require_transitive(G)
    cur = G
    growth = 0
    added: list[Permutation] = []
    prov: list[StepRecord] = []
    while True:
        nxt, new, recs = _step(cur, growth + 1)
        if not new:
            break
        growth += 1
        added += new
        prov += recs
        cur = nxt
    return ClosureReport(G, cur, max(1, growth), added, prov)


def closure_32(G: PermGroup, max_degree: int = CLOSURE_32_MAX_DEGREE) -> ClosureReport:
    """Intersection of the 3/2-closed overgroups of ``G`` in ``S_n``.

    Only minimal closed overgroups matter for the intersection, and each is
    reached from ``G`` by adjoining one element at a time through non-closed
    groups, so the search never expands past a closed group.
    """
    _require_transitive(G)
    n = G.degree
    if n > max_degree:
        raise DegreeTooLarge(f"degree {n} exceeds the 3/2-closure bound {max_degree}")
    Sn = symmetric_group(n)
    closed: dict[bytes, PermGroup] = {}
    seen = {G.key()}
    frontier = [G]
    while frontier:
        nxt = []
        for X in frontier:
            if closedness(X, "3/2"):
                closed[X.key()] = X
                continue
            for s in _outside_reps(Sn, X):
                Y = group_generate(n, list(X.generators) + [s], cap=G.cap)
                if Y.key() not in seen:
                    seen.add(Y.key())
                    nxt.append(Y)
        frontier = nxt
    groups = list(closed.values())
    codes = reduce(np.intersect1d, [H.codes for H in groups])
    rows = groups[0].rows[np.isin(groups[0].codes, codes)]
    result = PermGroup._from_rows(n, rows, sort=True)
    if not closedness(result, "3/2"):
        raise AssertionError("intersection of 3/2-closed overgroups is not 3/2-closed")
    return ClosureReport(G, result, len(groups), [], [], kind="3/2")


def _outside_reps(Sn: PermGroup, X: PermGroup) -> list[Permutation]:
    """One element of ``S_n`` per double coset ``XsX`` outside ``X``."""
    n = X.degree
    rows = Sn.rows.astype(np.intp)
    xr = X.rows.astype(np.intp)
    unseen = ~X.contains_rows(rows)
    reps = []
    while unseen.any():
        i = int(np.argmax(unseen))
        s = rows[i]
        left = s[xr]  # s * x for every x
        prods = xr[:, left].reshape(-1, n)  # x' * s * x
        unseen[np.searchsorted(Sn.codes, _encode(prods, n))] = False
        reps.append(Permutation(int(v) for v in s))
    return reps


# ---------------------------------------------------------------------------
# structure


@dataclass
class WreathDecomposition:
    system: BlockSystem
    m: int
    quotient: PermGroup

    def __str__(self) -> str:
        return f"K wr S_{self.m} with B={self.system}, |K|={self.quotient.order}"


def decompose_wreath_symmetric(G: PermGroup) -> WreathDecomposition | None:
    """Write ``G`` as ``(G/B) wr S_m`` when it contains a full symmetric patch.

    Transpositions of ``G`` connect the points of each maximal patch, so the
    patches are the components of the transposition graph.
    """
    _require_transitive(G)
    n = G.degree
    rows = G.rows.astype(np.intp)
    moved = rows != np.arange(n)[None, :]
    trans = rows[moved.sum(axis=1) == 2]
    if not len(trans):
        return None
    comps = _point_orbits(n, trans)
    size = len(comps[0])
    if any(len(c) != size for c in comps) or size < 2:
        return None
    B = BlockSystem(n, comps)
    Q = quotient(G, B).quotient
    if G.order != Q.order * math.factorial(size) ** len(B):
        raise AssertionError("symmetric patch does not split off as a wreath factor")
    return WreathDecomposition(B, size, Q)


# ---------------------------------------------------------------------------
# normal form of a pair of regular cyclic groups


@dataclass
class NormalFormReport:
    degree: int
    x: Permutation
    y: Permutation
    delta: Permutation | None
    conjugate: Permutation | None
    chain: list[BlockSystem]
    ratios: list[int]
    parts: dict[str, bool]
    group_order: int
    tower_order: int
    pimpernel: bool | None = None

    @property
    def holds(self) -> bool:
        return self.delta is not None and self.pimpernel is not False

    def to_text(self) -> str:
        lines = [
            f"degree {self.degree}",
            f"x {self.x}",
            f"y {self.y}",
            f"<x,y> order {self.group_order}",
            "ratios " + " ".join(map(str, self.ratios)),
            "chain " + " < ".join(str(B) for B in self.chain),
        ]
        if self.delta is None:
            lines.append("delta none (counterexample)")
        else:
            lines.append(f"delta {self.delta}")
            lines.append(f"conjugate {self.conjugate}")
            lines += [f"part {k} {'holds' if v else 'fails'}" for k, v in self.parts.items()]
        if self.pimpernel is not None:
            lines.append(f"pimpernel {'holds' if self.pimpernel else 'fails'}")
        return "\n".join(lines) + "\n"


def _prime_ratios(n: int) -> list[int]:
    return sorted((p for p, a in sympy.factorint(n).items() for _ in range(a)), reverse=True)


def tower_order(n: int) -> int:
    """Order of the iterated affine wreath tower attached to ``n``.

    Factors run from the smallest prime (acting on the coarsest blocks) down to
    the largest; ``|A wr B| = |A| * |B|**deg(A)``.
    """
    order, degree = 1, 1
    for p in sorted(_prime_ratios(n)):
        order *= (p * (p - 1)) ** degree
        degree *= p
    return order


def _cyclic_chain(x: Permutation, ratios: list[int]) -> list[BlockSystem]:
    n = x.degree
    chain, d = [BlockSystem.singletons(n)], 1
    for p in ratios:
        d *= p
        chain.append(BlockSystem(n, _point_orbits(n, [(x ** (n // d)).images])))
    return chain


def _is_full_cycle(g: Permutation) -> bool:
    return len(g.cycles()) == 1 and len(g.cycles()[0]) == g.degree or g.degree == 1


def _normal_form_parts(x: Permutation, yc: Permutation, chain, ratios, tower: int, cap: int):
    n = x.degree
    H = group_generate(n, [x, yc], cap=cap)
    parts = {}
    parts["1"] = all(is_normal_block_system(H, B) for B in chain[1:-1])
    parts["2"] = parts["1"]  # the chain is forced to carry the decreasing prime ratios
    parts["3"] = is_solvable(H)
    parts["4"] = tower % H.order == 0
    p1 = ratios[0] if ratios else 1
    if p1 % 2 == 1 and p1 > 1 and parts["1"]:
        a1 = ratios.count(p1)
        F1 = fix(H, chain[1])
        big = F1.order % (p1 * p1) == 0
        P = group_generate(n, [x ** (n // p1 ** a1)])
        Fa = fix(H, chain[a1])
        central = all(g * h == h * g for g in P.generators for h in (x, yc))
        parts["5"] = big or (Fa == P and central)
    elif p1 % 2 == 1 and p1 > 1:
        parts["5"] = False
    return parts


def verify_normal_form(x: Permutation, y: Permutation, cap: int | None = None) -> NormalFormReport:
    """Search ``delta`` in ``<x, y>`` making ``<x, delta^-1 y delta>`` satisfy the normal-form conditions.

    The imprimitivity chain is forced: every block system of a group containing
    the regular cyclic ``<x>`` is the orbit partition of a subgroup of ``<x>``,
    so the chain with decreasing prime ratios is built from powers of ``x`` and
    only its normality has to be tested.  Conjugates are tried in order of the
    least ``delta`` producing them, so the reported ``delta`` is the least
    valid one.
    """
    n = x.degree
    if y.degree != n or not _is_full_cycle(x) or not _is_full_cycle(y):
        raise NotRegularCyclic("x and y must both be full cycles of the same degree")
    G = group_generate(n, [x, y], cap=cap)
    ratios = _prime_ratios(n)
    chain = _cyclic_chain(x, ratios)
    tower = tower_order(n)
    limit = G.cap

    pimpernel = None
    k = len(ratios)
    if n >= 4 and n == 2 ** k and G.order & (G.order - 1) == 0:
        if all(is_normal_block_system(G, B) for B in chain[1:-1]):
            X = group_generate(n, [x])
            pimpernel = G == X or fix(G, chain[1]).order >= 4
        else:
            pimpernel = True  # no normal sequence, nothing to check

    rows = G.rows.astype(np.intp)
    inv = _inverse_rows(rows)
    yarr = np.array(y.images, dtype=np.intp)
    inner = [B for B in chain[1:-1]]
    order_keys: dict[int, int] = {}
    chunk = 200_000
    for start in range(0, len(rows), chunk):
        r = rows[start:start + chunk]
        conj = np.take_along_axis(inv[start:start + chunk], yarr[r], axis=1)
        ok = np.ones(len(conj), dtype=bool)
        for B in inner:
            ok &= B.preserved_by(conj)
        idx = np.nonzero(ok)[0]
        if not len(idx):
            continue
        keys = _cyclic_keys(conj[idx])
        for kk, i in zip(keys.tolist(), idx.tolist()):
            order_keys.setdefault(kk, start + i)

    best = None
    for _, i in sorted(order_keys.items(), key=lambda kv: kv[1]):
        delta = Permutation(int(v) for v in rows[i])
        yc = y.conjugate(delta)
        parts = _normal_form_parts(x, yc, chain, ratios, tower, limit)
        if all(parts.values()):
            best = (delta, yc, parts)
            break
    if best is None:
        return NormalFormReport(n, x, y, None, None, chain, ratios, {}, G.order, tower, pimpernel)
    delta, yc, parts = best
    return NormalFormReport(n, x, y, delta, yc, chain, ratios, parts, G.order, tower, pimpernel)

