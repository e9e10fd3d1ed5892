"""
Integer Linear Algebra Module
Smith normal form, solving over ℤ, solution lattices and finitely presented
abelian groups. Every hom-group of the completed categories is an FpAbGroup.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError, RelationOutsideSpanError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class MatrixZ:
    """Immutable integer matrix with arbitrary-precision entries"""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError(
                f"entries do not form a {self.rows}x{self.cols} grid"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "MatrixZ":
        """
        Build a matrix from a list of rows

        Args:
            rows: Row vectors
            cols: Column count, required when there are no rows

        Returns:
            MatrixZ with the given rows
        """
        grid = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            if not grid:
                raise DimensionMismatchError("column count is required for a matrix without rows")
            cols = len(grid[0])
        return cls(len(grid), cols, grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixZ":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "MatrixZ":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "MatrixZ":
        rows, cols = array.shape
        return cls(rows, cols, tuple(tuple(int(x) for x in row) for row in array))

    def to_array(self) -> np.ndarray:
        """Object-dtype numpy array (keeps Python integers exact)"""
        array = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                array[i, j] = value
        return array

    def __matmul__(self, other: "MatrixZ") -> "MatrixZ":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return MatrixZ.zeros(self.rows, other.cols)
        return MatrixZ.from_array(np.dot(self.to_array(), other.to_array()))

    def __neg__(self) -> "MatrixZ":
        return MatrixZ(self.rows, self.cols, tuple(tuple(-x for x in row) for row in self.entries))

    def transpose(self) -> "MatrixZ":
        return MatrixZ(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def columns(self, start: int, stop: int) -> "MatrixZ":
        """Columns start..stop-1 as a new matrix"""
        return MatrixZ(self.rows, stop - start, tuple(row[start:stop] for row in self.entries))

    @property
    def rank(self) -> int:
        return snf(self).rank

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def vstack(*blocks: MatrixZ) -> MatrixZ:
    """Stack matrices with equal column counts on top of each other"""
    if not blocks:
        raise DimensionMismatchError("vstack needs at least one block")
    cols = blocks[0].cols
    if any(block.cols != cols for block in blocks):
        raise DimensionMismatchError("vstack blocks have different column counts")
    return MatrixZ.from_rows([row for block in blocks for row in block.entries], cols=cols)


def hstack(*blocks: MatrixZ) -> MatrixZ:
    """Place matrices with equal row counts side by side"""
    if not blocks:
        raise DimensionMismatchError("hstack needs at least one block")
    rows = blocks[0].rows
    if any(block.rows != rows for block in blocks):
        raise DimensionMismatchError("hstack blocks have different row counts")
    cols = sum(block.cols for block in blocks)
    return MatrixZ.from_rows(
        [tuple(x for block in blocks for x in block.entries[i]) for i in range(rows)], cols=cols
    )


def vecmat(v: Sequence[int], m: MatrixZ) -> Vector:
    """Row vector times matrix"""
    if len(v) != m.rows:
        raise DimensionMismatchError(f"vector of length {len(v)} against {m.rows} rows")
    return tuple(
        sum(v[i] * m.entries[i][j] for i in range(m.rows) if v[i]) for j in range(m.cols)
    )


def unit_vector(length: int, index: int) -> Vector:
    return tuple(1 if i == index else 0 for i in range(length))


def add_vectors(u: Sequence[int], v: Sequence[int]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"cannot add vectors of lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * a for a in v)


@dataclass(frozen=True)
class SnfDecomposition:
    """U·M·V = S with U, V unimodular and S diagonal with a divisibility chain"""

    U: MatrixZ
    S: MatrixZ
    V: MatrixZ
    V_inv: MatrixZ

    @property
    def diagonal(self) -> Vector:
        return tuple(self.S.entries[i][i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _smallest_nonzero(a: List[List[int]], t: int) -> Optional[Tuple[int, int]]:
    # ties broken by row, then column
    best = None
    best_value = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            value = abs(row[j])
            if value and (best is None or value < best_value):
                best, best_value = (i, j), value
    return best


@lru_cache(maxsize=8192)
def snf(m: MatrixZ) -> SnfDecomposition:
    """
    Smith normal form by unimodular row and column operations

    Args:
        m: Input matrix (empty shapes allowed)

    Returns:
        SnfDecomposition with U·m·V = S
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [list(row) for row in MatrixZ.identity(r).entries]
    v = [list(row) for row in MatrixZ.identity(c).entries]
    v_inv = [list(row) for row in MatrixZ.identity(c).entries]

    def swap_rows(i: int, j: int):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def add_row(target: int, source: int, k: int):
        a[target] = [x + k * y for x, y in zip(a[target], a[source])]
        u[target] = [x + k * y for x, y in zip(u[target], u[source])]

    def negate_row(i: int):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def swap_cols(i: int, j: int):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_col(target: int, source: int, k: int):
        for row in a:
            row[target] += k * row[source]
        for row in v:
            row[target] += k * row[source]
        # inverse operation acts on the rows of V⁻¹
        v_inv[source] = [x - k * y for x, y in zip(v_inv[source], v_inv[target])]

    for t in range(min(r, c)):
        finished = False
        while True:
            pivot = _smallest_nonzero(a, t)
            if pivot is None:
                finished = True
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            for i in range(t + 1, r):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, c):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
            if any(a[i][t] for i in range(t + 1, r)) or any(a[t][j] for j in range(t + 1, c)):
                continue
            offending = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if offending is not None:
                add_row(t, offending, 1)
                continue
            break
        if finished:
            break
        if a[t][t] < 0:
            negate_row(t)

    return SnfDecomposition(
        U=MatrixZ.from_rows(u, cols=r),
        S=MatrixZ.from_rows(a, cols=c),
        V=MatrixZ.from_rows(v, cols=c),
        V_inv=MatrixZ.from_rows(v_inv, cols=c),
    )


def solve_left(a: MatrixZ, b: Sequence[int]) -> Optional[Vector]:
    """
    Solve x·a = b over the integers

    Args:
        a: Coefficient matrix (rows are the unknowns' coefficients)
        b: Right-hand side of length a.cols

    Returns:
        A deterministic integer solution, or None when none exists
    """
    if len(b) != a.cols:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} against {a.cols} columns")
    dec = snf(a)
    target = vecmat(b, dec.V)
    y = [0] * a.rows
    diagonal = dec.diagonal
    for i, d in enumerate(diagonal):
        if d == 0:
            if target[i] != 0:
                return None
            continue
        if target[i] % d:
            return None
        y[i] = target[i] // d
    if any(target[j] for j in range(len(diagonal), a.cols)):
        return None
    return vecmat(y, dec.U)


def kernel_lattice(a: MatrixZ) -> MatrixZ:
    """Rows form a ℤ-basis of {x : x·a = 0}"""
    dec = snf(a)
    return MatrixZ.from_rows(dec.U.entries[dec.rank:], cols=a.rows)


@dataclass(frozen=True)
class FpAbGroup:
    """
    Finitely presented abelian group ℤ^generator_count / rowspace(relations)

    The canonical form (free rank, invariant factors) is read off the Smith
    normal form of the relation matrix.
    """

    generator_count: int
    relations: MatrixZ

    def __post_init__(self):
        if self.relations.cols != self.generator_count:
            raise DimensionMismatchError(
                f"relations have {self.relations.cols} columns for {self.generator_count} generators"
            )

    @classmethod
    def free(cls, rank: int) -> "FpAbGroup":
        return cls(rank, MatrixZ.zeros(0, rank))

    @classmethod
    def from_relations(cls, generator_count: int, rows: Iterable[Sequence[int]]) -> "FpAbGroup":
        return cls(generator_count, MatrixZ.from_rows(rows, cols=generator_count))

    @cached_property
    def _decomposition(self) -> SnfDecomposition:
        return snf(self.relations)

    @cached_property
    def _moduli(self) -> Vector:
        diagonal = self._decomposition.diagonal
        return tuple(diagonal[i] if i < len(diagonal) else 0 for i in range(self.generator_count))

    @cached_property
    def _kept(self) -> Tuple[int, ...]:
        return tuple(i for i, d in enumerate(self._moduli) if d != 1)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self._moduli if d > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self._moduli if d == 0)

    @property
    def rank(self) -> int:
        return self.free_rank

    @property
    def canonical(self) -> Tuple[int, Tuple[int, ...]]:
        return self.free_rank, self.invariant_factors

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        order = 1
        for d in self.invariant_factors:
            order *= d
        return order

    def is_trivial(self) -> bool:
        return not self._kept

    def is_isomorphic(self, other: "FpAbGroup") -> bool:
        return self.canonical == other.canonical

    def coordinates(self, v: Sequence[int]) -> Vector:
        """
        Canonical coordinates of an element: torsion parts reduced modulo
        their invariant factor, free parts exact

        Args:
            v: Element in the presenting generators

        Returns:
            Coordinates with respect to generators()
        """
        if len(v) != self.generator_count:
            raise DimensionMismatchError(
                f"element of length {len(v)} in a group on {self.generator_count} generators"
            )
        w = vecmat(v, self._decomposition.V)
        moduli = self._moduli
        return tuple(w[i] % moduli[i] if moduli[i] > 1 else w[i] for i in self._kept)

    def generators(self) -> Tuple[Vector, ...]:
        """SNF-ordered generators in the presenting coordinates"""
        v_inv = self._decomposition.V_inv
        return tuple(v_inv.entries[i] for i in self._kept)

    def canonical_presentation(self) -> "FpAbGroup":
        """Isomorphic group on generators() with diagonal torsion relations"""
        moduli = [self._moduli[i] for i in self._kept]
        count = len(moduli)
        rows = [
            tuple(d if j == idx else 0 for j in range(count))
            for idx, d in enumerate(moduli)
            if d > 1
        ]
        return FpAbGroup.from_relations(count, rows)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.coordinates(v))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_zero(tuple(a - b for a, b in zip(u, v)))

    def contains(self, v: Sequence[int]) -> bool:
        """True when v lies in the relation lattice (decided by solving)"""
        return solve_left(self.relations, v) is not None

    def reduce(self, v: Sequence[int]) -> Vector:
        """Normal form of an element of a group already in canonical presentation"""
        if len(self._kept) != self.generator_count:
            return tuple(v)
        return self.coordinates(v)

    def element(self, coordinates: Sequence[int]) -> "GroupElement":
        return GroupElement(tuple(coordinates), self)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of an FpAbGroup; equality is congruence modulo relations"""

    coordinates: Vector
    owner: FpAbGroup

    def __post_init__(self):
        if len(self.coordinates) != self.owner.generator_count:
            raise DimensionMismatchError("element length does not match its group")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement) or other.owner != self.owner:
            return NotImplemented
        return self.owner.contains(tuple(a - b for a, b in zip(self.coordinates, other.coordinates)))

    def __hash__(self) -> int:
        return hash((self.owner, self.owner.coordinates(self.coordinates)))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(add_vectors(self.coordinates, other.coordinates), self.owner)

    def __neg__(self) -> "GroupElement":
        return GroupElement(scale_vector(-1, self.coordinates), self.owner)

    def is_zero(self) -> bool:
        return self.owner.contains(self.coordinates)


def subquotient(
    gens: Sequence[Sequence[int]], rels: Sequence[Sequence[int]], ambient_rank: int
) -> FpAbGroup:
    """
    Presentation of span(gens) / span(rels) inside ℤ^ambient_rank

    Args:
        gens: Generators of the numerator lattice
        rels: Generators of the denominator lattice (must lie in span(gens))
        ambient_rank: Length of every vector

    Returns:
        FpAbGroup on len(gens) generators
    """
    for vector in list(gens) + list(rels):
        if len(vector) != ambient_rank:
            raise DimensionMismatchError(
                f"vector of length {len(vector)} in ambient rank {ambient_rank}"
            )
    g = MatrixZ.from_rows(gens, cols=ambient_rank)
    relation_rows = list(kernel_lattice(g).entries)
    for rel in rels:
        expressed = solve_left(g, rel)
        if expressed is None:
            raise RelationOutsideSpanError(f"relation {tuple(rel)} is not in the span of the generators")
        relation_rows.append(expressed)
    return FpAbGroup.from_relations(len(gens), relation_rows)
