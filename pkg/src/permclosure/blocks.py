"""Block systems of transitive groups and the constructions built on them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
import sympy

from .errors import (
    DegreeMismatch,
    NotABlockSystem,
    NotTransitive,
    OrderCapExceeded,
)
from .perm_core import (
    PermGroup,
    Permutation,
    _point_orbits,
    group_generate,
    normal_subgroups,
    orbits,
)

__all__ = [
    "BlockSystem",
    "QuotientAction",
    "Refinement",
    "ImprimitivitySequence",
    "minimal_block",
    "all_block_systems",
    "normal_block_systems",
    "is_normal_block_system",
    "fix",
    "quotient",
    "refines",
    "imprimitivity_sequences",
    "omega",
    "wreath_product",
    "direct_product_canonical",
    "equal_partitions",
]


@dataclass(frozen=True)
class BlockSystem:
    """A partition of ``{0..n-1}`` into cells of equal size.

    Cells are stored sorted, and ordered by their least point.
    """

    degree: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(sorted(tuple(sorted(c)) for c in self.cells))
        object.__setattr__(self, "cells", cells)
        pts = [p for c in cells for p in c]
        if sorted(pts) != list(range(self.degree)):
            raise NotABlockSystem(f"cells do not partition 0..{self.degree - 1}")
        if len({len(c) for c in cells}) > 1:
            raise NotABlockSystem("cells have different sizes")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "BlockSystem":
        groups: dict[int, list[int]] = {}
        for p, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(p)
        return cls(len(labels), tuple(tuple(c) for c in groups.values()))

    @classmethod
    def singletons(cls, n: int) -> "BlockSystem":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "BlockSystem":
        return cls(n, (tuple(range(n)),))

    @classmethod
    def parse(cls, text: str) -> "BlockSystem":
        cells = json.loads(text)
        return cls(sum(len(c) for c in cells), tuple(tuple(c) for c in cells))

    @property
    def cell_size(self) -> int:
        return len(self.cells[0])

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.cells)

    @cached_property
    def labels(self) -> np.ndarray:
        """Cell index of every point."""
        lab = np.empty(self.degree, dtype=np.intp)
        for i, c in enumerate(self.cells):
            lab[list(c)] = i
        return lab

    def cell_of(self, point: int) -> tuple[int, ...]:
        return self.cells[int(self.labels[point])]

    def is_trivial(self) -> bool:
        return self.cell_size in (1, self.degree)

    def is_block_system_of(self, G: PermGroup) -> bool:
        """Generator-level block test: every generator maps cells onto cells."""
        if G.degree != self.degree:
            return False
        return bool(self.preserved_by(np.array([g.images for g in G.generators]).reshape(-1, self.degree)).all())

    def preserved_by(self, rows: np.ndarray) -> np.ndarray:
        """Mask of rows that permute the cells."""
        lab = self.labels[np.asarray(rows, dtype=np.intp)]
        cells = np.array(self.cells, dtype=np.intp)
        per_cell = lab[:, cells]
        return np.all(per_cell == per_cell[:, :, :1], axis=(1, 2))

    def fixed_by(self, rows: np.ndarray) -> np.ndarray:
        """Mask of rows that fix every cell setwise."""
        lab = self.labels[np.asarray(rows, dtype=np.intp)]
        return np.all(lab == self.labels[None, :], axis=1)

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(map(str, c)) + "]" for c in self.cells) + "]"


# ---------------------------------------------------------------------------


def _require_transitive(G: PermGroup) -> None:
    if not G.is_transitive():
        raise NotTransitive("group is not transitive")


def _require_block_system(G: PermGroup, B: BlockSystem) -> None:
    if B.degree != G.degree or not B.is_block_system_of(G):
        raise NotABlockSystem(f"{B} is not a block system of the group")


def minimal_block(G: PermGroup, seed: Iterable[int]) -> frozenset[int]:
    """Smallest block of ``G`` containing ``seed`` (union-find on seed pairs)."""
    seed = sorted(set(seed))
    _require_transitive(G)
    if len(seed) < 2:
        raise ValueError("seed needs at least two points")
    n = G.degree
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gens = [g.images for g in G.generators]
    queue = []
    for s in seed[1:]:
        a, b = find(seed[0]), find(s)
        if a != b:
            parent[b] = a
            queue.append((seed[0], s))
    while queue:
        a, b = queue.pop()
        for g in gens:
            ra, rb = find(g[a]), find(g[b])
            if ra != rb:
                parent[rb] = ra
                queue.append((g[a], g[b]))
    root = find(seed[0])
    return frozenset(p for p in range(n) if find(p) == root)


def _system_of_block(G: PermGroup, block: frozenset[int]) -> BlockSystem:
    n = G.degree
    cells = {tuple(sorted(block))}
    todo = list(cells)
    gens = [g.images for g in G.generators]
    while todo:
        c = todo.pop()
        for g in gens:
            img = tuple(sorted(g[p] for p in c))
            if img not in cells:
                cells.add(img)
                todo.append(img)
    return BlockSystem(n, tuple(cells))


def _stabilizer_orbits(G: PermGroup, point: int = 0) -> tuple[tuple[int, ...], ...]:
    rows = G.rows
    stab = rows[rows[:, point] == point]
    return _point_orbits(G.degree, stab)


def all_block_systems(G: PermGroup) -> list[BlockSystem]:
    """Every block system of a transitive group, trivial ones included."""
    _require_transitive(G)
    n = G.degree
    found = {BlockSystem.singletons(n), BlockSystem.full(n)}
    others = [o for o in _stabilizer_orbits(G) if o != (0,)]
    for r in range(1, len(others) + 1):
        for combo in itertools.combinations(others, r):
            size = 1 + sum(len(o) for o in combo)
            if n % size or size == n:
                continue
            cand = frozenset((0,) + tuple(p for o in combo for p in o))
            if minimal_block(G, cand) == cand:
                found.add(_system_of_block(G, cand))
    return sorted(found, key=lambda B: (B.cell_size, B.cells))


def is_normal_block_system(G: PermGroup, B: BlockSystem) -> bool:
    """``B`` is the orbit partition of a normal subgroup iff ``fix_G(B)`` is transitive on every cell."""
    _require_block_system(G, B)
    F = fix(G, B)
    return orbits(F).cells == B.cells


def normal_block_systems(G: PermGroup, method: str = "fix") -> list[BlockSystem]:
    """Orbit partitions of the normal subgroups of a transitive group.

    ``method="fix"`` tests each block system for a cell-transitive kernel;
    ``method="subgroups"`` enumerates normal subgroups and takes their orbits.
    """
    _require_transitive(G)
    if method == "subgroups":
        found = set()
        for N in normal_subgroups(G):
            cells = orbits(N).cells
            B = BlockSystem(G.degree, cells)
            _require_block_system(G, B)
            found.add(B)
        return sorted(found, key=lambda B: (B.cell_size, B.cells))
    if method != "fix":
        raise ValueError(f"unknown method {method!r}")
    return [B for B in all_block_systems(G) if is_normal_block_system(G, B)]


def fix(G: PermGroup, B: BlockSystem) -> PermGroup:
    """Elements of ``G`` fixing every cell of ``B`` setwise."""
    _require_block_system(G, B)
    return G.subgroup_from_mask(B.fixed_by(G.rows))


@dataclass
class QuotientAction:
    source: PermGroup
    system: BlockSystem
    quotient: PermGroup

    def image(self, g: Permutation) -> Permutation:
        """``g/B`` as a permutation of cell indices."""
        lab = self.system.labels
        return Permutation(int(lab[g.images[c[0]]]) for c in self.system.cells)

    @cached_property
    def element_map(self) -> dict[Permutation, Permutation]:
        return {g: self.image(g) for g in self.source.elements}

    def kernel(self) -> PermGroup:
        ident = Permutation.identity(len(self.system))
        mask = np.array([self.image(g) == ident for g in self.source.elements])
        return self.source.subgroup_from_mask(mask)


def quotient(G: PermGroup, B: BlockSystem) -> QuotientAction:
    """The induced action of ``G`` on the cells of ``B`` (cells labelled by position)."""
    _require_block_system(G, B)
    reps = np.array([c[0] for c in B.cells], dtype=np.intp)
    qrows = np.unique(B.labels[G.rows[:, reps].astype(np.intp)], axis=0)
    Q = PermGroup._from_rows(len(B), qrows, sort=True)
    return QuotientAction(G, B, Q)


@dataclass(frozen=True)
class Refinement:
    relation: str  # "strict", "weak" or "incomparable"
    quotient: BlockSystem | None = None

    @property
    def refines(self) -> bool:
        return self.relation != "incomparable"


def refines(B: BlockSystem, C: BlockSystem) -> Refinement:
    """Compare ``B`` with ``C``; when ``B`` refines ``C`` also return ``C/B`` on the cells of ``B``."""
    if B.degree != C.degree:
        raise DegreeMismatch("block systems have different degrees")
    clab = C.labels
    if any(len({int(clab[p]) for p in cell}) > 1 for cell in B.cells):
        return Refinement("incomparable")
    qlabels = [int(clab[cell[0]]) for cell in B.cells]
    q = BlockSystem.from_labels(qlabels)
    return Refinement("weak" if B == C else "strict", q)


@dataclass(frozen=True)
class ImprimitivitySequence:
    systems: tuple[BlockSystem, ...]
    index_ratios: tuple[int, ...]
    normal_flags: tuple[bool, ...] = field(default=())

    def __str__(self) -> str:
        return " < ".join(str(B) for B in self.systems)


def omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(sympy.factorint(n).values())


def imprimitivity_sequences(G: PermGroup, normal_only: bool = False) -> list[ImprimitivitySequence]:
    """All chains from singletons to the full set through block systems with prime index ratios."""
    _require_transitive(G)
    systems = all_block_systems(G)
    normal = {B: is_normal_block_system(G, B) for B in systems}
    if normal_only:
        systems = [B for B in systems if normal[B]]
    n = G.degree
    out: list[ImprimitivitySequence] = []

    def extend(chain):
        last = chain[-1]
        if last.cell_size == n:
            ratios = tuple(b.cell_size // a.cell_size for a, b in zip(chain, chain[1:]))
            out.append(ImprimitivitySequence(tuple(chain), ratios, tuple(normal[B] for B in chain)))
            return
        for C in systems:
            if C.cell_size <= last.cell_size or C.cell_size % last.cell_size:
                continue
            if not sympy.isprime(C.cell_size // last.cell_size):
                continue
            if refines(last, C).relation == "strict":
                extend(chain + [C])

    start = BlockSystem.singletons(n)
    if start in systems:
        extend([start])
    return out


# ---------------------------------------------------------------------------
# products


def wreath_product(G: PermGroup, H: PermGroup, cap: int | None = None) -> tuple[PermGroup, BlockSystem]:
    """``G wr H`` acting on pairs ``(x, y)`` encoded as ``x*|Y| + y``, with its lexi-partition."""
    nx_, ny = G.degree, H.degree
    order = G.order * H.order ** nx_
    limit = G.cap if cap is None else cap
    if order > limit:
        raise OrderCapExceeded(f"wreath product of order {order} exceeds cap {limit}")
    n = nx_ * ny
    gens = []
    for g in G.generators:
        gens.append(Permutation(g(x) * ny + y for x in range(nx_) for y in range(ny)))
    for h in H.generators:
        gens.append(Permutation(h(p) if p < ny else p for p in range(n)))
    W = group_generate(n, gens, cap=limit)
    lexi = BlockSystem(n, tuple(tuple(range(x * ny, (x + 1) * ny)) for x in range(nx_)))
    if W.is_transitive() and not is_normal_block_system(W, lexi):
        raise AssertionError("lexi-partition is not normal in the wreath product")
    return W, lexi


def direct_product_canonical(H: PermGroup, K: PermGroup, cap: int | None = None) -> PermGroup:
    """``H x K`` acting coordinatewise on pairs ``(i, j)`` encoded as ``i*k + j``."""
    m, k = H.degree, K.degree
    limit = H.cap if cap is None else cap
    if H.order * K.order > limit:
        raise OrderCapExceeded(f"direct product of order {H.order * K.order} exceeds cap {limit}")
    gens = [Permutation(h(i) * k + j for i in range(m) for j in range(k)) for h in H.generators]
    gens += [Permutation(i * k + kk(j) for i in range(m) for j in range(k)) for kk in K.generators]
    return group_generate(m * k, gens, cap=limit)


# ---------------------------------------------------------------------------
# partitions


def equal_partitions(n: int, size: int) -> Iterator[BlockSystem]:
    """Every partition of ``{0..n-1}`` into cells of the given size."""
    if n % size:
        return

    def rec(remaining):
        if not remaining:
            yield []
            return
        first, rest = remaining[0], remaining[1:]
        for others in itertools.combinations(rest, size - 1):
            cell = (first,) + others
            left = [p for p in rest if p not in others]
            for tail in rec(left):
                yield [cell] + tail

    for cells in rec(list(range(n))):
        yield BlockSystem(n, tuple(cells))
