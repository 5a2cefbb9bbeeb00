"""Permutations of {0..n-1} and small, fully materialized permutation groups.

Elements of a materialized group are stored as rows of an integer array,
sorted lexicographically by image sequence.  Every row is also encoded as a
base-``n`` integer (most significant digit = image of point 0), so sorting the
codes is the same as sorting the image sequences; membership tests and
deduplication all go through these codes.

Composition follows function notation: ``(p * q)(i) == p(q(i))``.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DegreeMismatch,
    NotAnOrbit,
    NotASubgroup,
    OrderCapExceeded,
    ParseError,
)

__all__ = [
    "Permutation",
    "PermGroup",
    "OrbitPartition",
    "PronormalityResult",
    "default_order_cap",
    "group_generate",
    "symmetric_group",
    "orbits",
    "transitive_constituent",
    "left_regular_representation",
    "regular_cyclic_subgroups",
    "are_conjugate_subgroups",
    "is_pronormal",
    "all_subgroups",
    "transitive_subgroups",
    "normal_subgroups",
    "centralizer",
    "normal_closure",
    "derived_subgroup",
    "is_solvable",
    "support",
    "parse_group",
    "format_group",
]

MAX_DEGREE = 16
LATTICE_CAP = 5040

_DTYPE = np.int16


def default_order_cap() -> int:
    """Order cap for materialization; ``PERMCLOSURE_ORDER_CAP`` overrides it."""
    return int(os.environ.get("PERMCLOSURE_ORDER_CAP", 10**6))


# ---------------------------------------------------------------------------
# array helpers


def _powers(n: int) -> np.ndarray:
    return np.array([n ** (n - 1 - i) for i in range(n)], dtype=np.uint64)


def _encode(arr: np.ndarray, n: int) -> np.ndarray:
    if n > MAX_DEGREE:
        raise OrderCapExceeded(f"degree {n} is beyond the materialization limit {MAX_DEGREE}")
    if arr.ndim == 1:
        arr = arr[None, :]
    return (arr.astype(np.uint64) * _powers(n)).sum(axis=1, dtype=np.uint64)


def _identity_row(n: int) -> np.ndarray:
    return np.arange(n, dtype=_DTYPE)


def _inverse_rows(arr: np.ndarray) -> np.ndarray:
    inv = np.empty_like(arr)
    rows = np.arange(arr.shape[0])[:, None]
    inv[rows, arr] = np.arange(arr.shape[1], dtype=arr.dtype)[None, :]
    return inv


def _member(sorted_codes: np.ndarray, codes: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_codes, codes)
    pos = np.minimum(pos, len(sorted_codes) - 1)
    return sorted_codes[pos] == codes


def _closure(n: int, gens: np.ndarray, cap: int, seed: np.ndarray | None = None):
    """Elements of <gens> as (sorted rows, sorted codes).

    ``seed`` may hold the rows of a subgroup already known to lie inside the
    result; the generators of that subgroup must then be part of ``gens``.
    """
    start = _identity_row(n)[None, :] if seed is None else seed
    codes = _encode(start, n)
    known = np.unique(codes)
    chunks = [start]
    frontier = start
    gens = [np.asarray(g, dtype=np.intp) for g in gens]
    while len(frontier) and gens:
        cand = np.concatenate([frontier[:, g] for g in gens])
        cc = _encode(cand, n)
        cc, idx = np.unique(cc, return_index=True)
        fresh = ~_member(known, cc)
        if not fresh.any():
            break
        new = cand[idx[fresh]]
        if len(known) + len(new) > cap:
            raise OrderCapExceeded(f"group order exceeds cap {cap}")
        known = np.union1d(known, cc[fresh])
        chunks.append(new)
        frontier = new
    rows = np.concatenate(chunks)
    codes = _encode(rows, n)
    order = np.argsort(codes, kind="stable")
    return rows[order].astype(_DTYPE), codes[order]


# ---------------------------------------------------------------------------
# permutations


class Permutation:
    """A bijection of ``{0..n-1}`` stored as its image sequence."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            for a in cycle:
                if not 0 <= a < n or a in seen:
                    raise ValueError(f"bad cycle {tuple(cycle)} for degree {n}")
                seen.add(a)
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls._trusted(tuple(images))

    @classmethod
    def parse(cls, n: int, text: str) -> "Permutation":
        """Parse disjoint-cycle notation such as ``(0 1 2)(3 4)``; ``()`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))+", text):
            raise ParseError(f"not in cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if pts:
                cycles.append(pts)
        try:
            return cls.from_cycles(n, cycles)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise DegreeMismatch("cannot compose permutations of different degrees")
        a = self.images
        return Permutation._trusted(tuple(a[j] for j in other.images))

    def __pow__(self, k: int) -> "Permutation":
        result = Permutation.identity(self.degree)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._trusted(tuple(inv))

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self.degree else 1

    def support(self) -> frozenset[int]:
        return frozenset(i for i, j in enumerate(self.images) if i != j)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


# ---------------------------------------------------------------------------
# groups


class PermGroup:
    """A permutation group of a fixed degree given by generators.

    The element list is computed on first use and cached; construction never
    materializes.  Two groups compare equal when they have the same degree and
    the same element set.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = (), *, cap: int | None = None):
        if degree < 1:
            raise ValueError("degree must be positive")
        gens = tuple(generators)
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self._gens: tuple[Permutation, ...] | None = gens
        self._rows: np.ndarray | None = None
        self._codes: np.ndarray | None = None
        self._order_hint: int | None = None
        self.cap = default_order_cap() if cap is None else cap

    @classmethod
    def _from_rows(cls, degree: int, rows: np.ndarray, codes: np.ndarray | None = None,
                   generators: Sequence[Permutation] | None = None, sort: bool = False) -> "PermGroup":
        """Wrap a row array that is already known to be closed."""
        G = cls(degree)
        rows = np.asarray(rows, dtype=_DTYPE).reshape(-1, degree)
        if codes is None or sort:
            codes = _encode(rows, degree)
            order = np.argsort(codes, kind="stable")
            rows, codes = rows[order], codes[order]
        G._rows, G._codes = rows, codes
        G._gens = tuple(generators) if generators is not None else None
        return G

    # -- materialization -------------------------------------------------

    def _materialize(self) -> None:
        if self._rows is not None:
            return
        gens = np.array([g.images for g in self._gens], dtype=_DTYPE).reshape(-1, self.degree)
        self._rows, self._codes = _closure(self.degree, gens, self.cap)

    @property
    def is_materialized(self) -> bool:
        return self._rows is not None

    @property
    def rows(self) -> np.ndarray:
        self._materialize()
        return self._rows

    @property
    def codes(self) -> np.ndarray:
        self._materialize()
        return self._codes

    @property
    def order(self) -> int:
        # a known order (from a stabilizer chain) avoids listing the elements
        if self._rows is None and self._order_hint is not None:
            return self._order_hint
        return len(self.rows)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def elements(self) -> list[Permutation]:
        return [Permutation._trusted(tuple(int(v) for v in r)) for r in self.rows]

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    @property
    def generators(self) -> tuple[Permutation, ...]:
        if self._gens is None:
            self._gens = self._small_generating_set()
        return self._gens

    def _small_generating_set(self) -> tuple[Permutation, ...]:
        rows, codes, n = self._rows, self._codes, self.degree
        gens: list[np.ndarray] = []
        cur_codes = codes[:1]
        cur_rows = rows[:1]
        while len(cur_codes) < len(codes):
            outside = np.nonzero(~_member(cur_codes, codes))[0]
            g = rows[outside[0]]
            gens.append(g)
            cur_rows, cur_codes = _closure(n, np.array(gens), len(codes), seed=cur_rows)
        return tuple(Permutation._trusted(tuple(int(v) for v in g)) for g in gens)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    # -- queries -----------------------------------------------------------

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows).reshape(-1, self.degree)
        return _member(self.codes, _encode(rows, self.degree))

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return bool(self.contains_rows(np.array(p.images))[0])

    def index_of_rows(self, rows: np.ndarray) -> np.ndarray:
        """Positions of rows (assumed members) in the sorted element list."""
        return np.searchsorted(self.codes, _encode(np.asarray(rows).reshape(-1, self.degree), self.degree))

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree:
            return False
        if self._gens is not None:
            return all(g in other for g in self._gens)
        return bool(other.contains_rows(self.rows).all())

    def __le__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup) or other.degree != self.degree:
            return False
        return self.order == other.order and bool(np.array_equal(self.codes, other.codes))

    def __hash__(self) -> int:
        return hash((self.degree, self.codes.tobytes()))

    def key(self) -> bytes:
        """Canonical key of the element set."""
        return self.codes.tobytes()

    def is_transitive(self) -> bool:
        return len(orbits(self).cells) == 1

    def is_trivial(self) -> bool:
        gens = self._gens if self._gens is not None else None
        if gens is not None:
            return all(g.is_identity() for g in gens)
        return self.order == 1

    def subgroup_from_mask(self, mask: np.ndarray) -> "PermGroup":
        """Subgroup given by a boolean mask over the sorted element list (caller guarantees closure)."""
        return PermGroup._from_rows(self.degree, self.rows[mask], self.codes[mask])

    def __repr__(self) -> str:
        if self._rows is not None:
            return f"<PermGroup degree={self.degree} order={self.order}>"
        return f"<PermGroup degree={self.degree} gens={len(self._gens)}>"

    def describe(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"degree {self.degree}, order {self.order}, generators {gens}"


@dataclass(frozen=True)
class OrbitPartition:
    degree: int
    cells: tuple[tuple[int, ...], ...]

    def cell_of(self, point: int) -> tuple[int, ...]:
        for c in self.cells:
            if point in c:
                return c
        raise KeyError(point)


def group_generate(degree: int, gens: Iterable[Permutation], cap: int | None = None) -> PermGroup:
    """Materialize ``<gens>``; elements come out sorted lexicographically."""
    if degree < 1:
        raise ValueError("degree must be positive")
    G = PermGroup(degree, gens, cap=cap)
    G._materialize()
    return G


def symmetric_group(n: int) -> PermGroup:
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles(n, [(0, 1)]))
    if n >= 3:
        gens.append(Permutation.from_cycles(n, [tuple(range(n))]))
    return PermGroup(n, gens)


def _point_orbits(n: int, gens: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for i, j in enumerate(g):
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    cells: dict[int, list[int]] = {}
    for i in range(n):
        cells.setdefault(find(i), []).append(i)
    return tuple(tuple(c) for c in sorted(cells.values()))


def orbits(G: PermGroup) -> OrbitPartition:
    gens = [g.images for g in G.generators] if (G._gens is not None or not G.is_materialized) else G.rows
    return OrbitPartition(G.degree, _point_orbits(G.degree, gens))


def transitive_constituent(G: PermGroup, O: Iterable[int]) -> PermGroup:
    """The action of ``G`` on the orbit ``O``, relabelled ``0..|O|-1`` in increasing order."""
    pts = tuple(sorted(set(O)))
    if pts not in orbits(G).cells:
        raise NotAnOrbit(f"{set(pts)} is not an orbit")
    relabel = {p: i for i, p in enumerate(pts)}
    gens = [Permutation._trusted(tuple(relabel[g.images[p]] for p in pts)) for g in G.generators]
    return group_generate(len(pts), gens)


def left_regular_representation(n: int) -> PermGroup:
    """(Z_n)_L, generated by ``i -> i + 1 mod n``."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = Permutation._trusted(tuple((i + 1) % n for i in range(n)))
    return PermGroup(n, [gen] if n > 1 else [])


# ---------------------------------------------------------------------------
# cyclic regular subgroups


def _units(n: int) -> list[int]:
    return [u for u in range(1, max(n, 2)) if math.gcd(u, n) == 1] if n > 1 else [1]


def _row_powers(rows: np.ndarray, exps: Sequence[int]) -> list[np.ndarray]:
    """``rows**e`` for every exponent (rows composed with themselves)."""
    out = []
    cur = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape).copy()
    k = 0
    want = sorted(set(exps))
    result = {}
    for e in want:
        while k < e:
            cur = np.take_along_axis(rows, cur.astype(np.intp), axis=1)
            k += 1
        result[e] = cur.copy()
    for e in exps:
        out.append(result[e])
    return out


def _full_cycle_mask(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    pos = rows[:, 0].astype(np.intp)
    ok = np.ones(len(rows), dtype=bool)
    for _ in range(1, n):
        ok &= pos != 0
        pos = rows[np.arange(len(rows)), pos]
    return ok & (pos == 0) if n > 1 else np.ones(len(rows), dtype=bool)


def _cyclic_keys(rows: np.ndarray) -> np.ndarray:
    """Canonical key of ``<g>`` for each full-cycle row: least code among unit powers."""
    n = rows.shape[1]
    powers = _row_powers(rows, _units(n))
    codes = np.stack([_encode(p, n) for p in powers], axis=1)
    return codes.min(axis=1)


def _decode(code: int, n: int) -> tuple[int, ...]:
    digits = []
    code = int(code)
    for _ in range(n):
        digits.append(code % n)
        code //= n
    return tuple(reversed(digits))


def regular_cyclic_subgroups(G: PermGroup) -> list[PermGroup]:
    """All subgroups ``<g>`` with ``g`` in ``G`` a single ``n``-cycle, ordered by their least generator."""
    n = G.degree
    if n == 1:
        return [PermGroup(1, [])]
    rows = G.rows[_full_cycle_mask(G.rows)]
    if not len(rows):
        return []
    keys = np.unique(_cyclic_keys(rows))
    return [PermGroup(n, [Permutation._trusted(_decode(k, n))]) for k in keys]


def _check_subgroup(G: PermGroup, H: PermGroup) -> None:
    if H.degree != G.degree or not H.is_subgroup_of(G):
        raise NotASubgroup("subgroup is not contained in the ambient group")


def are_conjugate_subgroups(G: PermGroup, H1: PermGroup, H2: PermGroup) -> Permutation | None:
    """Least ``g`` in ``G`` with ``g^-1 H1 g = H2``, or ``None``."""
    _check_subgroup(G, H1)
    _check_subgroup(G, H2)
    if H1.order != H2.order:
        return None
    found = _conjugators(G, H1.generators, H2)
    if not found.any():
        return None
    return G.elements[int(np.argmax(found))]


def _conjugators(G: PermGroup, gens: Sequence[Permutation], target: PermGroup) -> np.ndarray:
    """Mask over ``G`` of elements ``g`` with ``g^-1 h g`` in ``target`` for every ``h`` in ``gens``."""
    rows = G.rows.astype(np.intp)
    inv = _inverse_rows(rows)
    ok = np.ones(len(rows), dtype=bool)
    idx = np.arange(len(rows))[:, None]
    for h in gens:
        h_arr = np.array(h.images, dtype=np.intp)
        conj = inv[idx, h_arr[rows]]
        ok &= target.contains_rows(conj)
    return ok


@dataclass
class PronormalityResult:
    pronormal: bool
    witnesses: dict[Permutation, Permutation]
    violator: Permutation | None = None

    def __bool__(self) -> bool:
        return self.pronormal


def is_pronormal(G: PermGroup, H: PermGroup) -> PronormalityResult:
    """Decide whether ``H`` is pronormal in ``G`` by exhaustive search.

    One witness ``k`` is recorded per distinct conjugate ``g^-1 H g``, keyed by
    the least ``g`` producing that conjugate.
    """
    _check_subgroup(G, H)
    n = G.degree
    rows = G.rows.astype(np.intp)
    inv = _inverse_rows(rows)
    witnesses: dict[Permutation, Permutation] = {}
    seen: set[bytes] = set()
    hrows = H.rows.astype(np.intp)
    for gi in range(len(rows)):
        g, ginv = rows[gi], inv[gi]
        conj = ginv[hrows[:, g]]
        ccodes = np.sort(_encode(conj, n))
        key = ccodes.tobytes()
        if key in seen:
            continue
        seen.add(key)
        Hg = PermGroup._from_rows(n, conj, sort=True)
        join = group_generate(n, list(H.generators) + list(Hg.generators))
        found = _conjugators(join, Hg.generators, H)
        gperm = G.elements[gi]
        if not found.any():
            return PronormalityResult(False, witnesses, gperm)
        witnesses[gperm] = join.elements[int(np.argmax(found))]
    return PronormalityResult(True, witnesses)


def centralizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """``{g in G : g h = h g for every generator h of H}``."""
    if G.degree != H.degree:
        raise DegreeMismatch("groups have different degrees")
    rows = G.rows.astype(np.intp)
    ok = np.ones(len(rows), dtype=bool)
    for h in H.generators:
        h_arr = np.array(h.images, dtype=np.intp)
        ok &= np.all(rows[:, h_arr] == h_arr[rows], axis=1)
    return G.subgroup_from_mask(ok)


def support(x: Permutation | PermGroup) -> frozenset[int]:
    """Moved points of a permutation, or the union of moved points over a group."""
    if isinstance(x, Permutation):
        return x.support()
    pts: set[int] = set()
    for g in x.generators:
        pts |= g.support()
    return frozenset(pts)


def normal_closure(G: PermGroup, gens: Sequence[Permutation]) -> PermGroup:
    """Smallest normal subgroup of ``G`` containing ``gens``."""
    n = G.degree
    cur = list(gens) or [Permutation.identity(n)]
    N = group_generate(n, cur, cap=G.cap)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for s in list(N.generators):
                c = s.conjugate(g)
                if c not in N:
                    cur.append(c)
                    N = group_generate(n, cur, cap=G.cap)
                    changed = True
    return N


def derived_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    comms = [a.inverse() * b.inverse() * a * b for a, b in itertools.combinations(gens, 2)]
    comms = [c for c in comms if not c.is_identity()]
    return normal_closure(G, comms)


def is_solvable(G: PermGroup) -> bool:
    """Derived series reaches the trivial group."""
    cur = G
    while not cur.is_trivial():
        nxt = derived_subgroup(cur)
        if nxt.order == cur.order:
            return False
        cur = nxt
    return True


# ---------------------------------------------------------------------------
# subgroup lattice in index space


class _IndexedGroup:
    """Multiplication table view of a materialized group for lattice work."""

    def __init__(self, G: PermGroup):
        if G.order > LATTICE_CAP:
            raise OrderCapExceeded(f"subgroup enumeration limited to order {LATTICE_CAP}, got {G.order}")
        self.group = G
        self.m = m = G.order
        rows = G.rows.astype(np.intp)
        table = np.empty((m, m), dtype=np.int32)
        chunk = max(1, 2_000_000 // (m * G.degree))
        for start in range(0, m, chunk):
            block = rows[start:start + chunk][:, rows]  # block[i, j] = rows[i][rows[j]]
            table[start:start + chunk] = np.searchsorted(
                G.codes, _encode(block.reshape(-1, G.degree), G.degree)).reshape(-1, m)
        self.table = table
        self.inv = np.argmin(table, axis=1).astype(np.int32)  # identity is index 0
        self.nbytes = (m + 7) // 8

    def closure(self, gens: Sequence[int], seed: np.ndarray | None = None) -> np.ndarray:
        mask = np.zeros(self.m, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.intp)
        if seed is not None:
            mask |= seed
            frontier = np.nonzero(seed)[0]
        gens = np.asarray(gens, dtype=np.intp)
        if not len(gens):
            return mask
        while len(frontier):
            cand = np.unique(self.table[frontier][:, gens].ravel())
            cand = cand[~mask[cand]]
            mask[cand] = True
            frontier = cand
        return mask

    def join(self, kmask: np.ndarray, kidx: np.ndarray, z: int) -> np.ndarray:
        """Mask of ``<K, z>``, grown one left coset of ``K`` at a time."""
        mask = kmask.copy()
        frontier = kidx
        while len(frontier):
            cand = np.unique(self.table[frontier, z])
            cand = cand[~mask[cand]]
            if not len(cand):
                break
            coset = np.unique(self.table[np.ix_(cand, kidx)])
            coset = coset[~mask[coset]]
            mask[coset] = True
            frontier = coset
        return mask

    def double_coset_reps(self, kmask: np.ndarray, kidx: np.ndarray) -> list[int]:
        unseen = ~kmask
        reps = []
        while unseen.any():
            z = int(np.argmax(unseen))
            reps.append(z)
            left = self.table[kidx, z]
            unseen[self.table[np.ix_(left, kidx)].ravel()] = False
        return reps

    def to_bits(self, mask: np.ndarray) -> int:
        return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")

    def to_mask(self, bits: int) -> np.ndarray:
        raw = np.frombuffer(bits.to_bytes(self.nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.m].astype(bool)

    def cyclic(self) -> dict[int, int]:
        """bitset of <g> -> least generating index."""
        out: dict[int, int] = {}
        done = np.zeros(self.m, dtype=bool)
        for i in range(self.m):
            if done[i]:
                continue
            powers = [0]
            cur = i
            while cur != 0:
                powers.append(cur)
                cur = int(self.table[cur, i])
            mask = np.zeros(self.m, dtype=bool)
            mask[powers] = True
            bits = self.to_bits(mask)
            if bits not in out:
                out[bits] = i
            # generators of the same cyclic group give the same subgroup
            order = len(powers)
            for k, p in enumerate(powers):
                if k and math.gcd(k, order) == 1:
                    done[p] = True
        return out

    def subgroup(self, bits: int) -> PermGroup:
        return self.group.subgroup_from_mask(self.to_mask(bits))

    def conjugacy_labels(self) -> np.ndarray:
        gens = self.group.index_of_rows(np.array([g.images for g in self.group.generators])) \
            if self.group.generators else np.array([], dtype=np.intp)
        src, dst = [], []
        allidx = np.arange(self.m)
        for s in gens:
            conj = self.table[self.table[self.inv[s], allidx], s]
            src.append(allidx)
            dst.append(conj)
        if not src:
            return allidx
        a = np.concatenate(src)
        b = np.concatenate(dst)
        graph = coo_matrix((np.ones(len(a)), (a, b)), shape=(self.m, self.m))
        _, labels = connected_components(graph, directed=True, connection="weak")
        return labels


def _lattice(seeds: dict[int, tuple[int, ...]], extenders: dict[int, tuple[int, ...]],
             ig: _IndexedGroup) -> dict[int, tuple[int, ...]]:
    """Close ``seeds`` under joins with the ``extenders`` (bitset -> generating indices)."""
    subs = dict(seeds)
    layer = list(seeds.items())
    ext = list(extenders.items())
    while layer:
        nxt = []
        for K, gens in layer:
            kmask = None
            for Z, z in ext:
                if Z & ~K == 0:
                    continue
                if kmask is None:
                    kmask = ig.to_mask(K)
                J = ig.to_bits(ig.closure(list(gens) + list(z), seed=kmask))
                if J not in subs:
                    subs[J] = tuple(gens) + tuple(z)
                    nxt.append((J, subs[J]))
        layer = nxt
    return subs


def all_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of ``G``: cyclic subgroups closed under pairwise joins.

    ``<K, z>`` only depends on the double coset ``KzK``, so each ``K`` is joined
    with one element per double coset outside ``K``.
    """
    ig = _IndexedGroup(G)
    subs = {b: (i,) for b, i in ig.cyclic().items()}
    layer = list(subs)
    while layer:
        nxt = []
        for K in layer:
            kmask = ig.to_mask(K)
            kidx = np.nonzero(kmask)[0]
            for z in ig.double_coset_reps(kmask, kidx):
                J = ig.to_bits(ig.join(kmask, kidx, z))
                if J not in subs:
                    subs[J] = subs[K] + (z,)
                    nxt.append(J)
        layer = nxt
    groups = [ig.subgroup(b) for b in subs]
    return sorted(groups, key=lambda H: (H.order, H.codes.tolist()))


def transitive_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of ``G`` that is transitive on all points."""
    return [H for H in all_subgroups(G) if H.is_transitive()]


def normal_subgroups(G: PermGroup) -> list[PermGroup]:
    """Normal subgroups: normal closures of conjugacy classes, closed under joins."""
    ig = _IndexedGroup(G)
    labels = ig.conjugacy_labels()
    closures: dict[int, tuple[int, ...]] = {}
    for lab in np.unique(labels):
        cls = tuple(int(c) for c in np.nonzero(labels == lab)[0])
        closures.setdefault(ig.to_bits(ig.closure(cls)), cls)
    subs = _lattice(closures, closures, ig)
    groups = [ig.subgroup(b) for b in subs]
    return sorted(groups, key=lambda H: (H.order, H.codes.tolist()))


# ---------------------------------------------------------------------------
# text format


def parse_group(text: str) -> PermGroup:
    """Parse the group text format: ``degree n`` then one generator per line."""
    degree = None
    gens = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            m = re.fullmatch(r"degree\s+(\d+)", line)
            if not m:
                raise ParseError(f"expected 'degree n', got {line!r}")
            degree = int(m.group(1))
            continue
        gens.append(Permutation.parse(degree, line))
    if degree is None:
        raise ParseError("missing 'degree n' header")
    return PermGroup(degree, gens)


def format_group(G: PermGroup) -> str:
    lines = [f"degree {G.degree}"]
    lines += [str(g) for g in G.generators] or ["()"]
    return "\n".join(lines) + "\n"
