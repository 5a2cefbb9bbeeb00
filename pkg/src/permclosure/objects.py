"""Digraphs, tuple systems, set systems and incidence structures, with an
automorphism / isomorphism engine based on individualization and colour
refinement.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .blocks import BlockSystem
from .errors import (
    IdentityInConnectionSet,
    IntersectsSubgroup,
    NonUnitElement,
    NotABlockSystem,
    NotASubgroup,
    NotDoubleCosetClosed,
    ParseError,
    SizeTooLarge,
)
from .perm_core import (
    Permutation,
    PermGroup,
    _encode,
    _point_orbits,
    symmetric_group,
)

__all__ = [
    "Digraph",
    "ColoredTupleSystem",
    "SetSystem",
    "IncidenceStructure",
    "IncidenceReport",
    "TwinPartition",
    "cayley_digraph",
    "unit_circulant",
    "double_coset_digraph",
    "digraph_wreath",
    "quotient_digraph",
    "twin_partition",
    "girth_and_bipartite_search",
    "set_system_of",
    "is_m_intersecting",
    "classify_incidence",
    "automorphism_group",
    "automorphisms_brute_force",
    "isomorphism",
    "is_automorphism",
    "relabel",
    "cyclic_configuration",
    "parse_object",
    "format_object",
]

MAX_OBJECT_DEGREE = 24
BRUTE_FORCE_DEGREE = 8


def _strip(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _ints(tokens: Sequence[str], where: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers in {where!r}") from None


# ---------------------------------------------------------------------------
# objects


@dataclass(frozen=True)
class Digraph:
    """Loopless digraph on ``0..n-1``."""

    n: int
    arcs: frozenset

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) outside 0..{self.n - 1}")
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(n, frozenset())

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        """Undirected edges, stored as arcs both ways."""
        arcs = set()
        for u, v in edges:
            arcs.add((u, v))
            arcs.add((v, u))
        return cls(n, frozenset(arcs))

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.arcs:
            A[u, v] = True
        return A

    def out_neighbors(self, u: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.adjacency[u])[0].tolist())

    def in_neighbors(self, u: int) -> frozenset[int]:
        return frozenset(np.nonzero(self.adjacency[:, u])[0].tolist())

    def underlying_edges(self) -> set[frozenset[int]]:
        return {frozenset(a) for a in self.arcs}

    def is_weakly_connected(self) -> bool:
        return len(_components(self.n, self.arcs)) == 1

    def __str__(self) -> str:
        return format_object(self)


@dataclass(frozen=True)
class ColoredTupleSystem:
    """Tuples of points of ``0..n-1``, each carrying a colour label."""

    n: int
    tuples: tuple

    def __post_init__(self):
        items = set()
        for pts, color in self.tuples:
            pts = tuple(int(p) for p in pts)
            if len(pts) >= self.n:
                raise ValueError(f"tuple {pts} is not shorter than the ground set")
            if any(not 0 <= p < self.n for p in pts):
                raise ValueError(f"tuple {pts} outside 0..{self.n - 1}")
            items.add((pts, color))
        object.__setattr__(self, "tuples", tuple(sorted(items, key=lambda t: (t[0], str(t[1])))))

    @property
    def colors(self) -> list:
        return sorted({c for _, c in self.tuples}, key=str)

    def __str__(self) -> str:
        return format_object(self)


@dataclass(frozen=True)
class SetSystem:
    n: int
    sets: frozenset

    def __post_init__(self):
        sets = frozenset(frozenset(int(p) for p in s) for s in self.sets)
        for s in sets:
            if not s:
                raise ValueError("empty set in set system")
            if any(not 0 <= p < self.n for p in s):
                raise ValueError(f"set {sorted(s)} outside 0..{self.n - 1}")
        object.__setattr__(self, "sets", sets)

    def sorted_sets(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(s)) for s in self.sets)


@dataclass(frozen=True)
class IncidenceStructure:
    """Points ``0..n-1`` and a list of lines (point sets)."""

    n: int
    lines: tuple

    def __post_init__(self):
        lines = []
        for L in self.lines:
            L = frozenset(int(p) for p in L)
            if any(not 0 <= p < self.n for p in L):
                raise ValueError(f"line {sorted(L)} outside 0..{self.n - 1}")
            lines.append(L)
        object.__setattr__(self, "lines", tuple(sorted(lines, key=lambda s: sorted(s))))

    def __str__(self) -> str:
        return format_object(self)


def cyclic_configuration(n: int, base: Iterable[int]) -> IncidenceStructure:
    """Lines ``base + i`` mod ``n`` for every ``i``."""
    base = [b % n for b in base]
    return IncidenceStructure(n, tuple(frozenset((b + i) % n for b in base) for i in range(n)))


# ---------------------------------------------------------------------------
# constructions


def _translation(n: int, k: int = 1) -> Permutation:
    return Permutation([(i + k) % n for i in range(n)])


def cayley_digraph(group_table_or_n, S) -> Digraph:
    """Cayley digraph with arcs ``(g, gs)``.

    ``group_table_or_n`` is either an integer ``n`` (the group ``Z_n``, with
    ``S`` a set of residues) or a :class:`PermGroup` whose sorted elements are
    the vertices (with ``S`` a set of its elements).
    """
    if isinstance(group_table_or_n, PermGroup):
        G = group_table_or_n
        S = list(S)
        if any(s.is_identity() for s in S):
            raise IdentityInConnectionSet("the identity is in the connection set")
        if S and not G.contains_rows(np.array([s.images for s in S])).all():
            raise NotASubgroup("connection set is not inside the group")
        rows = G.rows.astype(np.intp)
        arcs = set()
        src = np.arange(len(rows))
        for s in S:
            dst = G.index_of_rows(rows[:, np.array(s.images)])
            arcs.update(zip(src.tolist(), dst.tolist()))
        D = Digraph(len(rows), frozenset(arcs))
        for h in G.generators:
            left = Permutation(G.index_of_rows(np.array(h.images)[rows]).tolist())
            assert is_automorphism(D, left), "left translation is not an automorphism"
        return D
    n = int(group_table_or_n)
    S = sorted({int(s) % n for s in S})
    if 0 in S:
        raise IdentityInConnectionSet("0 is in the connection set")
    D = Digraph(n, frozenset((g, (g + s) % n) for g in range(n) for s in S))
    assert n == 1 or is_automorphism(D, _translation(n)), "translation is not an automorphism"
    return D


def unit_circulant(n: int, S) -> Digraph:
    S = sorted({int(s) % n for s in S})
    for s in S:
        if math.gcd(s, n) != 1:
            raise NonUnitElement(f"{s} is not a unit mod {n}")
    return cayley_digraph(n, S)


def double_coset_digraph(G: PermGroup, H: PermGroup, S) -> Digraph:
    """Digraph on the left cosets of ``H`` with arcs ``(gH, gsH)``.

    Cosets are numbered in order of their least element.
    """
    if not H.is_subgroup_of(G):
        raise NotASubgroup("H is not a subgroup of G")
    S = list(S)
    n = G.degree
    srows = np.array([s.images for s in S], dtype=np.intp).reshape(-1, n)
    if len(S) and not G.contains_rows(srows).all():
        raise NotASubgroup("S is not inside G")
    if len(S) and H.contains_rows(srows).any():
        raise IntersectsSubgroup("S meets H")
    hrows = H.rows.astype(np.intp)
    if len(S):
        scodes = set(_encode(srows, n).tolist())
        closed = set()
        for h1 in hrows:
            for s in srows:
                hs = h1[s]
                closed.update(_encode(hs[hrows], n).tolist())
        if closed != scodes:
            raise NotDoubleCosetClosed("HSH differs from S")
    rows = G.rows.astype(np.intp)

    def labels(R):
        # least code of gH over h in H
        best = None
        for h in hrows:
            c = _encode(R[:, h], n)
            best = c if best is None else np.minimum(best, c)
        return best

    lab = labels(rows)
    uniq = np.unique(lab)
    index = np.searchsorted(uniq, lab)
    arcs = set()
    for s in srows:
        dst = np.searchsorted(uniq, labels(rows[:, s]))
        arcs.update(zip(index.tolist(), dst.tolist()))
    return Digraph(len(uniq), frozenset(arcs))


def digraph_wreath(G1: Digraph, G2: Digraph, verify: bool = True) -> Digraph:
    """Vertices ``(u, v)`` numbered ``u * n2 + v``."""
    n1, n2 = G1.n, G2.n
    arcs = set()
    for u, u2 in G1.arcs:
        for v in range(n2):
            for v2 in range(n2):
                arcs.add((u * n2 + v, u2 * n2 + v2))
    for u in range(n1):
        for v, v2 in G2.arcs:
            arcs.add((u * n2 + v, u * n2 + v2))
    W = Digraph(n1 * n2, frozenset(arcs))
    if verify and n1 * n2 <= MAX_OBJECT_DEGREE:
        for g in automorphism_group(G1).generators:
            assert is_automorphism(W, Permutation([g(i // n2) * n2 + i % n2 for i in range(n1 * n2)]))
        for h in automorphism_group(G2).generators:
            img = [h(i % n2) if i < n2 else i % n2 for i in range(n1 * n2)]
            assert is_automorphism(W, Permutation([(i // n2) * n2 + img[i] for i in range(n1 * n2)]))
    return W


def _cells_of(B, n: int) -> list[tuple[int, ...]]:
    cells = [tuple(sorted(c)) for c in (B.cells if hasattr(B, "cells") else B)]
    if sorted(p for c in cells for p in c) != list(range(n)):
        raise NotABlockSystem("cells do not partition the vertex set")
    return sorted(cells)


def quotient_digraph(G: Digraph, B) -> Digraph:
    cells = _cells_of(B, G.n)
    where = {p: i for i, c in enumerate(cells) for p in c}
    arcs = {(where[u], where[v]) for u, v in G.arcs if where[u] != where[v]}
    return Digraph(len(cells), frozenset(arcs))


class TwinPartition(NamedTuple):
    cells: tuple[tuple[int, ...], ...]
    reducible: bool

    def system(self, n: int) -> BlockSystem | None:
        sizes = {len(c) for c in self.cells}
        return BlockSystem(n, self.cells) if len(sizes) == 1 else None


def twin_partition(G: Digraph, verify: bool = True) -> TwinPartition:
    """Classes of vertices with equal out- and in-neighbourhoods.

    With ``verify`` set and a vertex-transitive ``G``, the classes are checked
    to form a block system of the full automorphism group.
    """
    A = G.adjacency
    sig: dict[bytes, list[int]] = {}
    for v in range(G.n):
        sig.setdefault(A[v].tobytes() + A[:, v].tobytes(), []).append(v)
    cells = tuple(sorted(tuple(c) for c in sig.values()))
    tp = TwinPartition(cells, any(len(c) > 1 for c in cells))
    if verify and G.n <= MAX_OBJECT_DEGREE and len({len(c) for c in cells}) == 1:
        aut = automorphism_group(G)
        if len(_point_orbits(G.n, [g.images for g in aut.generators])) == 1:
            assert BlockSystem(G.n, cells).is_block_system_of(aut), "twin classes are not blocks"
    return tp


def _components(n: int, sets: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s in sets:
        s = list(s)
        for p in s[1:]:
            ra, rb = find(s[0]), find(p)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comp: dict[int, list[int]] = {}
    for p in range(n):
        comp.setdefault(find(p), []).append(p)
    return sorted(tuple(c) for c in comp.values())


def girth_and_bipartite_search(G: Digraph, p: int) -> tuple[float, bool]:
    """Girth of the underlying simple graph and whether some ``p``-set has all arcs into another ``p``-set."""
    if p < 2:
        raise ValueError("p must be at least 2")
    n = G.n
    nbr = [set() for _ in range(n)]
    for u, v in G.arcs:
        nbr[u].add(v)
        nbr[v].add(u)
    girth = math.inf
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for u in queue:
            for w in nbr[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    girth = min(girth, dist[u] + dist[w] + 1)
    A = G.adjacency
    found = False
    for U in itertools.combinations(range(n), p):
        common = A[list(U)].all(axis=0)
        if common.sum() >= p:
            found = True
            break
    return girth, found


def set_system_of(T) -> SetSystem:
    if isinstance(T, Digraph):
        return SetSystem(T.n, frozenset(frozenset(a) for a in T.arcs))
    if isinstance(T, IncidenceStructure):
        return SetSystem(T.n, frozenset(T.lines))
    if isinstance(T, SetSystem):
        return T
    return SetSystem(T.n, frozenset(frozenset(pts) for pts, _ in T.tuples))


def is_m_intersecting(S: SetSystem, m: int) -> bool:
    sets = list(S.sets)
    return all(len(a & b) <= m for a, b in itertools.combinations(sets, 2))


@dataclass
class IncidenceReport:
    configuration: tuple[int, int] | None
    partial_sg: bool
    connected: bool
    components: list[tuple[int, ...]]

    @property
    def kind(self) -> str:
        if self.configuration and self.partial_sg:
            return "both"
        if self.configuration:
            return "configuration"
        if self.partial_sg:
            return "partial_SG"
        return "neither"

    def to_text(self) -> str:
        conf = "none" if self.configuration is None else f"({self.configuration[0]},{self.configuration[1]})"
        comps = " ".join("{" + ",".join(map(str, c)) + "}" for c in self.components)
        return (f"kind {self.kind}\nconfiguration {conf}\npartial_sg {str(self.partial_sg).lower()}\n"
                f"connected {str(self.connected).lower()}\ncomponents {len(self.components)} {comps}\n")


def classify_incidence(I: IncidenceStructure) -> IncidenceReport:
    lines = list(I.lines)
    pairs_ok = all(len(a & b) <= 1 for a, b in itertools.combinations(lines, 2))
    degree = Counter(p for L in lines for p in L)
    degs = {degree.get(p, 0) for p in range(I.n)}
    sizes = {len(L) for L in lines}
    conf = None
    if pairs_ok and len(degs) == 1 and len(sizes) == 1 and min(degs) >= 1 and min(sizes) >= 1:
        conf = (degs.pop(), sizes.pop())
    sg = pairs_ok and all(len(L) >= 3 for L in lines)
    comps = _components(I.n, lines)
    return IncidenceReport(conf, sg, len(comps) == 1, comps)


# ---------------------------------------------------------------------------
# automorphism / isomorphism engine


class _Structure:
    """Points ``0..n-1`` with coloured hyperedges, ordered (tuples) or unordered (sets)."""

    def __init__(self, n: int, edges: Sequence[tuple[int, bool, tuple[int, ...]]]):
        self.n = n
        self.edges = list(edges)
        self.keys = Counter(self._key(c, o, pts) for c, o, pts in self.edges)
        self.incident: list[list[int]] = [[] for _ in range(n)]
        for k, (_, _, pts) in enumerate(self.edges):
            for p in set(pts):
                self.incident[p].append(k)

    @staticmethod
    def _key(c, ordered, pts):
        return (c, ordered, tuple(pts) if ordered else tuple(sorted(pts)))

    def image_key(self, k: int, g) -> tuple:
        c, o, pts = self.edges[k]
        return self._key(c, o, [g[p] for p in pts])


def _structure(X, color_map: dict | None = None) -> _Structure:
    if X.n > MAX_OBJECT_DEGREE:
        raise SizeTooLarge(f"{X.n} points is beyond the search limit {MAX_OBJECT_DEGREE}")
    if isinstance(X, Digraph):
        return _Structure(X.n, [(0, True, a) for a in sorted(X.arcs)])
    if isinstance(X, ColoredTupleSystem):
        cmap = color_map or {c: i for i, c in enumerate(X.colors)}
        return _Structure(X.n, [(cmap[c], True, pts) for pts, c in X.tuples])
    if isinstance(X, IncidenceStructure):
        return _Structure(X.n, [(0, False, tuple(sorted(L))) for L in X.lines])
    if isinstance(X, SetSystem):
        return _Structure(X.n, [(0, False, s) for s in X.sorted_sets()])
    raise TypeError(f"unsupported object {type(X).__name__}")


def _refine(structs: Sequence[_Structure], colors: list[list]) -> list[list[int]]:
    """Joint colour refinement; equal colours in different structures stay comparable."""
    cur = colors
    count = -1
    while True:
        sigs = []
        for S, col in zip(structs, cur):
            sig = []
            for v in range(S.n):
                parts = []
                for k in S.incident[v]:
                    c, o, pts = S.edges[k]
                    if o:
                        parts.append((c, pts.index(v), tuple(col[p] for p in pts)))
                    else:
                        parts.append((c, -1, tuple(sorted(col[p] for p in pts))))
                parts.sort()
                sig.append((col[v], tuple(parts)))
            sigs.append(sig)
        table = {s: i for i, s in enumerate(sorted(set(itertools.chain.from_iterable(sigs))))}
        new = [[table[s] for s in sig] for sig in sigs]
        if len(table) == count:
            return new
        count = len(table)
        cur = new


class _Search:
    def __init__(self, X: _Structure, Y: _Structure):
        self.X, self.Y = X, Y
        self.n = X.n
        self.nodes = 0

    def _consistent(self, g: dict, v: int) -> bool:
        X, Y = self.X, self.Y
        for k in X.incident[v]:
            pts = X.edges[k][2]
            if all(p in g for p in pts) and X.image_key(k, g) not in Y.keys:
                return False
        return True

    def _complete(self, g: list[int]) -> bool:
        image = Counter(self.X.image_key(k, g) for k in range(len(self.X.edges)))
        return image == self.Y.keys

    def run(self, prefix: list[tuple[int, int]]) -> list[int] | None:
        g = {}
        for a, b in prefix:
            if a in g or b in g.values():
                return None
            g[a] = b
            if not self._consistent(g, a):
                return None
        return self._rec(g)

    def _rec(self, g: dict) -> list[int] | None:
        self.nodes += 1
        n = self.n
        order = {a: k for k, a in enumerate(g)}
        cx = [(0, order.get(v, -1)) for v in range(n)]
        inv = {b: order[a] for a, b in g.items()}
        cy = [(0, inv.get(v, -1)) for v in range(n)]
        cx, cy = _refine([self.X, self.Y], [cx, cy])
        if Counter(cx) != Counter(cy):
            return None
        by_color: dict[int, list[int]] = {}
        for v in range(n):
            by_color.setdefault(cy[v], []).append(v)
        if all(len(c) == 1 for c in by_color.values()):
            full = [by_color[cx[v]][0] for v in range(n)]
            if any(full[a] != b for a, b in g.items()):
                return None
            return full if self._complete(full) else None
        forced = {v: by_color[cx[v]][0] for v in range(n) if len(by_color[cx[v]]) == 1}
        for a, b in forced.items():
            if g.get(a, b) != b:
                return None
        v = min(v for v in range(n) if v not in g and v not in forced)
        used = set(g.values())
        for c in by_color[cx[v]]:
            if c in used:
                continue
            g[v] = c
            if self._consistent(g, v):
                res = self._rec(g)
                if res is not None:
                    del g[v]
                    return res
            del g[v]
        return None


def _orbit(point: int, gens: list[list[int]]) -> set[int]:
    seen = {point}
    stack = [point]
    while stack:
        p = stack.pop()
        for g in gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def automorphism_group(X) -> PermGroup:
    """Full automorphism group (colours fixed) as generators plus known order.

    Built along the base ``0, 1, 2, ...``: at each level the orbit of the next
    base point under the pointwise stabilizer of the earlier ones is completed
    by searching for one automorphism per missing image.
    """
    S = _structure(X)
    n = S.n
    search = _Search(S, S)
    # depth at which individualizing the base prefix makes the colouring discrete
    depth = 0
    while depth < n:
        col = _refine([S], [[(0, k if k < depth else -1) for k in range(n)]])[0]
        if len(set(col)) == n:
            break
        depth += 1
    gens: list[list[int]] = []
    sizes = []
    for i in reversed(range(depth)):
        prefix = [(j, j) for j in range(i)]
        col = _refine([S], [[(0, k if k < i else -1) for k in range(n)]])[0]
        orbit = _orbit(i, gens)
        for c in range(n):
            if c in orbit or col[c] != col[i]:
                continue
            g = search.run(prefix + [(i, c)])
            if g is not None:
                gens.append(g)
                orbit = _orbit(i, gens)
        sizes.append(len(orbit))
    G = PermGroup(n, [Permutation(g) for g in reversed(gens)])
    G._order_hint = math.prod(sizes)
    return G


def automorphisms_brute_force(X) -> PermGroup:
    """Filter of ``S_n`` (``n <= 8``), used to cross-check the search."""
    S = _structure(X)
    n = S.n
    if n > BRUTE_FORCE_DEGREE:
        raise SizeTooLarge(f"brute force is limited to {BRUTE_FORCE_DEGREE} points")
    rows = symmetric_group(n).rows.astype(np.intp)
    keep = np.ones(len(rows), dtype=bool)
    groups: dict[tuple, list[tuple[int, ...]]] = {}
    for c, o, pts in S.edges:
        groups.setdefault((c, o, len(pts)), []).append(tuple(pts))
    for (c, o, k), pts in groups.items():
        E = np.array(pts, dtype=np.intp).reshape(-1, k)
        mapped = rows[:, E]  # (R, m, k)
        if not o:
            mapped = np.sort(mapped, axis=2)
            E = np.sort(E, axis=1)
        w = n ** np.arange(k - 1, -1, -1)
        target = np.sort(E @ w)
        got = np.sort(mapped @ w, axis=1)
        keep &= (got == target[None, :]).all(axis=1)
    return PermGroup._from_rows(n, rows[keep])


def isomorphism(X, Y) -> Permutation | None:
    """Least bijection (images of ``0, 1, ...`` compared lexicographically) carrying ``X`` onto ``Y``.

    For coloured tuple systems the colours may be relabelled.
    """
    if type(X) is not type(Y):
        raise TypeError("objects of different kinds")
    if X.n != Y.n:
        return None
    if isinstance(X, ColoredTupleSystem):
        cx, cy = X.colors, Y.colors
        if len(cx) != len(cy):
            return None
        best = None
        xm = {c: i for i, c in enumerate(cx)}
        for perm in itertools.permutations(range(len(cy))):
            ym = {c: perm[i] for i, c in enumerate(cy)}
            g = _Search(_structure(X, xm), _structure(Y, ym)).run([])
            if g is not None and (best is None or g < best):
                best = g
        return None if best is None else Permutation(best)
    SX, SY = _structure(X), _structure(Y)
    if Counter(SX.keys.values()) != Counter(SY.keys.values()) or len(SX.edges) != len(SY.edges):
        return None
    g = _Search(SX, SY).run([])
    return None if g is None else Permutation(g)


def relabel(X, g: Permutation):
    """Image of ``X`` under the point map ``g``."""
    if isinstance(X, Digraph):
        return Digraph(X.n, frozenset((g(u), g(v)) for u, v in X.arcs))
    if isinstance(X, ColoredTupleSystem):
        return ColoredTupleSystem(X.n, tuple((tuple(g(p) for p in pts), c) for pts, c in X.tuples))
    if isinstance(X, IncidenceStructure):
        return IncidenceStructure(X.n, tuple(frozenset(g(p) for p in L) for L in X.lines))
    if isinstance(X, SetSystem):
        return SetSystem(X.n, frozenset(frozenset(g(p) for p in s) for s in X.sets))
    raise TypeError(f"unsupported object {type(X).__name__}")


def is_automorphism(X, g: Permutation) -> bool:
    if isinstance(X, IncidenceStructure):
        return Counter(relabel(X, g).lines) == Counter(X.lines)
    return relabel(X, g) == X


# ---------------------------------------------------------------------------
# text formats


def parse_object(text: str, kind: str | None = None):
    """Parse a digraph, incidence structure or tuple system.

    The kind is detected from the content when not given: ``l:`` lines mean an
    incidence structure, ``t:`` lines a tuple system, otherwise a digraph.
    """
    lines = _strip(text)
    if not lines:
        raise ParseError("empty input")
    if kind is None:
        if any(l.startswith("l:") for l in lines):
            kind = "incidence"
        elif any(l.startswith("t:") for l in lines):
            kind = "tuples"
        else:
            kind = "digraph"
    if kind == "digraph":
        head = lines[0].split()
        if len(head) != 1:
            raise ParseError("first line must hold the vertex count")
        n = _ints(head, lines[0])[0]
        arcs = []
        for l in lines[1:]:
            uv = _ints(l.split(), l)
            if len(uv) != 2:
                raise ParseError(f"bad arc line {l!r}")
            arcs.append(tuple(uv))
        try:
            return Digraph(n, frozenset(arcs))
        except ValueError as e:
            raise ParseError(str(e)) from None
    n = None
    body = []
    for l in lines:
        if l.startswith("points"):
            n = _ints(l.split()[1:2], l)[0]
        else:
            body.append(l)
    if kind == "incidence":
        sets = []
        for l in body:
            if not l.startswith("l:"):
                raise ParseError(f"bad line {l!r}")
            sets.append(_ints(l[2:].split(), l))
        if n is None:
            n = 1 + max((p for s in sets for p in s), default=-1)
        try:
            return IncidenceStructure(n, tuple(frozenset(s) for s in sets))
        except ValueError as e:
            raise ParseError(str(e)) from None
    if kind == "tuples":
        items = []
        for l in body:
            if not l.startswith("t:"):
                raise ParseError(f"bad line {l!r}")
            tok = l[2:].split()
            if len(tok) < 2:
                raise ParseError(f"bad tuple line {l!r}")
            items.append((tuple(_ints(tok[1:], l)), tok[0]))
        if n is None:
            n = 1 + max((p for pts, _ in items for p in pts), default=-1)
        try:
            return ColoredTupleSystem(n, tuple(items))
        except ValueError as e:
            raise ParseError(str(e)) from None
    raise ParseError(f"unknown object kind {kind!r}")


def format_object(X) -> str:
    if isinstance(X, Digraph):
        return "\n".join([str(X.n)] + [f"{u} {v}" for u, v in sorted(X.arcs)]) + "\n"
    if isinstance(X, IncidenceStructure):
        return "\n".join([f"points {X.n}"] + ["l: " + " ".join(map(str, sorted(L))) for L in X.lines]) + "\n"
    if isinstance(X, ColoredTupleSystem):
        return "\n".join([f"points {X.n}"] + [f"t: {c} " + " ".join(map(str, pts)) for pts, c in X.tuples]) + "\n"
    raise TypeError(f"unsupported object {type(X).__name__}")
