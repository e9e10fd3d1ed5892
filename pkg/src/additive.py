"""
Additive Base Module
The computable additive category interface shared by add(C), mod(B) and
their opposites, plus morphism-level helpers built on it
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from src.config import Config
from src.errors import EndpointMismatchError, NotAbelianError
from src.zlin import FpAbGroup, MatrixZ, Vector, add_vectors, scale_vector, solve_left, vstack

logger = logging.getLogger(__name__)

Obj = Hashable


@dataclass(frozen=True)
class Morphism:
    """Element of hom(source, target), in that group's canonical coordinates"""

    source: Obj
    target: Obj
    coords: Vector


@dataclass(frozen=True)
class Biproduct:
    """Direct sum with its structure maps, one inclusion and projection per summand"""

    obj: Obj
    inclusions: Tuple[Vector, ...]
    projections: Tuple[Vector, ...]


def small_vectors(length: int, limit: int) -> Iterator[Vector]:
    """Nonzero vectors with entries in {-1, 0, 1}, by support size"""
    produced = 0
    for support in range(1, length + 1):
        for positions in combinations(range(length), support):
            for signs in product((1, -1), repeat=support):
                if produced >= limit:
                    return
                vector = [0] * length
                for pos, sign in zip(positions, signs):
                    vector[pos] = sign
                produced += 1
                yield tuple(vector)


class ComputableAdditiveBase(ABC):
    """
    An additive category whose hom-groups are finitely presented abelian
    groups in canonical presentation, with bilinear composition on
    coordinate vectors.

    Subclasses supply hom, compose, identity, zero_object and direct_sum.
    Categories with (weak) kernels or cokernels override weak_kernel and
    weak_cokernel.
    """

    def __init__(self):
        self._left_cache: Dict[Tuple, MatrixZ] = {}
        self._right_cache: Dict[Tuple, MatrixZ] = {}

    @abstractmethod
    def hom(self, x: Obj, y: Obj) -> FpAbGroup:
        """Hom-group in canonical presentation"""

    @abstractmethod
    def compose(self, x: Obj, y: Obj, z: Obj, g: Vector, f: Vector) -> Vector:
        """
        Composite g∘f

        Args:
            x, y, z: Objects with f: x → y and g: y → z
            g: Coordinates in hom(y, z)
            f: Coordinates in hom(x, y)

        Returns:
            Coordinates in hom(x, z)
        """

    @abstractmethod
    def identity(self, x: Obj) -> Vector:
        ...

    @abstractmethod
    def zero_object(self) -> Obj:
        ...

    @abstractmethod
    def direct_sum(self, objects: Sequence[Obj]) -> Biproduct:
        ...

    def weak_kernel(self, x: Obj, y: Obj, u: Vector) -> Tuple[Obj, Vector]:
        """(K, k) with u∘k = 0 through which every such map factors"""
        raise NotAbelianError("not abelian at this level")

    def weak_cokernel(self, x: Obj, y: Obj, u: Vector) -> Tuple[Obj, Vector]:
        """(C, p) with p∘u = 0 through which every such map factors"""
        raise NotAbelianError("not abelian at this level")

    # -- group operations -------------------------------------------------

    def rank(self, x: Obj, y: Obj) -> int:
        return self.hom(x, y).generator_count

    def zero(self, x: Obj, y: Obj) -> Vector:
        return (0,) * self.rank(x, y)

    def add(self, u: Vector, v: Vector) -> Vector:
        return add_vectors(u, v)

    def negate(self, u: Vector) -> Vector:
        return scale_vector(-1, u)

    def reduce(self, x: Obj, y: Obj, u: Vector) -> Vector:
        return self.hom(x, y).reduce(u)

    def equal(self, x: Obj, y: Obj, u: Vector, v: Vector) -> bool:
        return self.hom(x, y).equal(u, v)

    def is_zero_morphism(self, x: Obj, y: Obj, u: Vector) -> bool:
        return self.hom(x, y).is_zero(u)

    def is_zero_object(self, x: Obj) -> bool:
        return self.is_zero_morphism(x, x, self.identity(x))

    def generator(self, x: Obj, y: Obj, index: int) -> Vector:
        count = self.rank(x, y)
        return tuple(1 if i == index else 0 for i in range(count))

    def compose_chain(self, objects: Sequence[Obj], maps: Sequence[Vector]) -> Vector:
        """
        Composite of maps[0]: objects[0] → objects[1], then maps[1], ...

        Args:
            objects: The objects visited, one more than maps
            maps: The maps in traversal order

        Returns:
            Coordinates in hom(objects[0], objects[-1])
        """
        if len(objects) != len(maps) + 1:
            raise EndpointMismatchError("a chain needs one more object than maps")
        result = maps[0]
        for i in range(1, len(maps)):
            result = self.compose(objects[0], objects[i], objects[i + 1], maps[i], result)
        return result

    # -- composition matrices ---------------------------------------------

    def left_composition_matrix(self, x: Obj, y: Obj, z: Obj, g: Vector) -> MatrixZ:
        """Rows are g∘e for the generators e of hom(x, y)"""
        key = (x, y, z, tuple(g))
        if key not in self._left_cache:
            rows = [self.compose(x, y, z, g, self.generator(x, y, i)) for i in range(self.rank(x, y))]
            self._left_cache[key] = MatrixZ.from_rows(rows, cols=self.rank(x, z))
        return self._left_cache[key]

    def right_composition_matrix(self, x: Obj, y: Obj, z: Obj, f: Vector) -> MatrixZ:
        """Rows are e∘f for the generators e of hom(y, z)"""
        key = (x, y, z, tuple(f))
        if key not in self._right_cache:
            rows = [self.compose(x, y, z, self.generator(y, z, i), f) for i in range(self.rank(y, z))]
            self._right_cache[key] = MatrixZ.from_rows(rows, cols=self.rank(x, z))
        return self._right_cache[key]

    def factor_through_left(self, x: Obj, y: Obj, z: Obj, g: Vector, h: Vector) -> Optional[Vector]:
        """Some f: x → y with g∘f = h, or None"""
        left = self.left_composition_matrix(x, y, z, g)
        relations = self.hom(x, z).relations
        solution = solve_left(vstack(left, relations), h)
        if solution is None:
            return None
        return self.reduce(x, y, solution[: left.rows])

    def factor_through_right(self, x: Obj, y: Obj, z: Obj, f: Vector, h: Vector) -> Optional[Vector]:
        """Some e: y → z with e∘f = h, or None"""
        right = self.right_composition_matrix(x, y, z, f)
        relations = self.hom(x, z).relations
        solution = solve_left(vstack(right, relations), h)
        if solution is None:
            return None
        return self.reduce(y, z, solution[: right.rows])

    def inverse(self, x: Obj, y: Obj, f: Vector) -> Optional[Vector]:
        """Two-sided inverse of f: x → y, or None when f is not invertible"""
        g = self.factor_through_left(y, x, y, f, self.identity(y))
        if g is None:
            return None
        if not self.equal(x, x, self.compose(x, y, x, g, f), self.identity(x)):
            return None
        return g

    def find_isomorphism(
        self, x: Obj, y: Obj, limit: Optional[int] = None
    ) -> Optional[Tuple[Vector, Vector]]:
        """
        Bounded search for an isomorphism x → y among small-coefficient maps

        Args:
            x: Source object
            y: Target object
            limit: Maximum number of candidates tried

        Returns:
            (f, f⁻¹) when one is found, otherwise None
        """
        limit = Config.ISO_SEARCH_LIMIT if limit is None else limit
        x_zero, y_zero = self.is_zero_object(x), self.is_zero_object(y)
        if x_zero or y_zero:
            return (self.zero(x, y), self.zero(y, x)) if x_zero and y_zero else None
        if not self.hom(x, x).is_isomorphic(self.hom(y, y)):
            return None
        if not self.hom(x, y).is_isomorphic(self.hom(x, x)):
            return None
        for candidate in small_vectors(self.rank(x, y), limit):
            g = self.inverse(x, y, candidate)
            if g is not None:
                return candidate, g
        return None

    def isomorphic_within(self, x: Obj, y: Obj, bound: Optional[int] = None) -> bool:
        return self.find_isomorphism(x, y, bound) is not None

    # -- morphism-level wrappers ------------------------------------------

    def compose_morphisms(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise EndpointMismatchError("morphisms are not composable")
        return Morphism(f.source, g.target, self.compose(f.source, f.target, g.target, g.coords, f.coords))

    def identity_morphism(self, x: Obj) -> Morphism:
        return Morphism(x, x, self.identity(x))

    def zero_morphism(self, x: Obj, y: Obj) -> Morphism:
        return Morphism(x, y, self.zero(x, y))

    def add_morphisms(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.source, f.target) != (g.source, g.target):
            raise EndpointMismatchError("cannot add morphisms with different endpoints")
        return Morphism(f.source, f.target, self.add(f.coords, g.coords))

    def morphisms_equal(self, f: Morphism, g: Morphism) -> bool:
        if (f.source, f.target) != (g.source, g.target):
            return False
        return self.equal(f.source, f.target, f.coords, g.coords)

    def is_zero(self, f: Morphism) -> bool:
        return self.is_zero_morphism(f.source, f.target, f.coords)

    def hom_generators(self, x: Obj, y: Obj) -> List[Morphism]:
        return [Morphism(x, y, self.generator(x, y, i)) for i in range(self.rank(x, y))]

    # -- sanity checks ----------------------------------------------------

    def check_axioms(self, objects: Sequence[Obj]) -> bool:
        """
        Check unit and associativity laws on generators

        Args:
            objects: Objects to test over

        Returns:
            True, or raises ValueError naming the failing law
        """
        for x in objects:
            for y in objects:
                for f in self.hom_generators(x, y):
                    if not self.equal(x, y, self.compose(x, y, y, self.identity(y), f.coords), f.coords):
                        raise ValueError(f"left unit law fails on hom({x}, {y})")
                    if not self.equal(x, y, self.compose(x, x, y, f.coords, self.identity(x)), f.coords):
                        raise ValueError(f"right unit law fails on hom({x}, {y})")
        for x, y, z, w in product(objects, repeat=4):
            for f in self.hom_generators(x, y):
                for g in self.hom_generators(y, z):
                    gf = self.compose(x, y, z, g.coords, f.coords)
                    for h in self.hom_generators(z, w):
                        left = self.compose(x, z, w, h.coords, gf)
                        right = self.compose(x, y, w, self.compose(y, z, w, h.coords, g.coords), f.coords)
                        if not self.equal(x, w, left, right):
                            raise ValueError(f"associativity fails on {x} → {y} → {z} → {w}")
        logger.debug("✅ Composition laws hold on %d objects", len(objects))
        return True


class AdditiveFunctor(ABC):
    """Additive functor between computable additive bases"""

    source: ComputableAdditiveBase
    target: ComputableAdditiveBase

    @abstractmethod
    def on_object(self, x: Obj) -> Obj:
        ...

    @abstractmethod
    def on_morphism(self, x: Obj, y: Obj, v: Vector) -> Vector:
        """Image of v: x → y in hom(F x, F y)"""

    def apply(self, m: Morphism) -> Morphism:
        return Morphism(
            self.on_object(m.source),
            self.on_object(m.target),
            self.on_morphism(m.source, m.target, m.coords),
        )
