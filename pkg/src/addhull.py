"""
Additive Hull Module
Formal finite direct sums over the ℤ-linearisation of a finite category,
with matrix morphisms and precomputed composition structure constants
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Sequence, Tuple

import numpy as np

from src.additive import AdditiveFunctor, Biproduct, ComputableAdditiveBase, Morphism
from src.config import Config
from src.errors import EndpointMismatchError
from src.fincat import FiniteCategory
from src.zlin import FpAbGroup, Vector

logger = logging.getLogger(__name__)

BasisElement = Tuple[int, int, Hashable]


@dataclass(frozen=True)
class AddObject:
    """Ordered direct sum of base objects; the empty sum is the zero object"""

    summands: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.summands)

    @property
    def label(self) -> str:
        return "⊕".join(self.summands) if self.summands else "0"


@dataclass(frozen=True)
class AddMorphism:
    """
    Matrix morphism; entries[i][j] holds the coefficients of the base
    morphisms from source summand j to target summand i
    """

    source: AddObject
    target: AddObject
    entries: Tuple[Tuple[Vector, ...], ...]


class AdditiveHull(ComputableAdditiveBase):
    """The additive hull add(C) of a finite category C"""

    def __init__(self, category: FiniteCategory, check: bool = True):
        """
        Build the hull and its composition table

        Args:
            category: Base category with finite hom-sets
            check: Sanity-check composition laws for small bases
        """
        super().__init__()
        self.category = category
        self._index: Dict[Tuple[str, str], Dict[Hashable, int]] = {}
        self._table: Dict[Tuple[str, str, str], Dict[Tuple[int, int], int]] = {}
        self._bases: Dict[Tuple[AddObject, AddObject], List[BasisElement]] = {}
        self._positions: Dict[Tuple[AddObject, AddObject], Dict[Tuple[int, int, int], int]] = {}
        objects = category.objects()
        for u in objects:
            for v in objects:
                self._index[(u, v)] = {m: k for k, m in enumerate(category.hom(u, v))}
        for u in objects:
            for v in objects:
                for w in objects:
                    self._table[(u, v, w)] = self._structure_constants(u, v, w)
        logger.info("🔄 Additive hull built over %d objects", len(objects))
        if check and len(objects) <= Config.AXIOM_CHECK_MAX_OBJECTS:
            self.check_axioms([AddObject((v,)) for v in objects])

    def _structure_constants(self, u: str, v: str, w: str) -> Dict[Tuple[int, int], int]:
        table = {}
        target_index = self._index[(u, w)]
        for gi, g in enumerate(self.category.hom(v, w)):
            for fi, f in enumerate(self.category.hom(u, v)):
                table[(gi, fi)] = target_index[self.category.compose(g, f)]
        return table

    def base_index(self, u: str, v: str, m: Hashable) -> int:
        return self._index[(u, v)][m]

    def basis(self, a: AddObject, b: AddObject) -> List[BasisElement]:
        """Basis (i, j, base morphism) of hom(a, b), target summand first"""
        key = (a, b)
        if key not in self._bases:
            elements = []
            for i, target in enumerate(b.summands):
                for j, source in enumerate(a.summands):
                    for m in self.category.hom(source, target):
                        elements.append((i, j, m))
            self._bases[key] = elements
            self._positions[key] = {
                (i, j, self.base_index(a.summands[j], b.summands[i], m)): k
                for k, (i, j, m) in enumerate(elements)
            }
        return self._bases[key]

    def position(self, a: AddObject, b: AddObject, i: int, j: int, m_index: int) -> int:
        self.basis(a, b)
        return self._positions[(a, b)][(i, j, m_index)]

    def hom(self, x: AddObject, y: AddObject) -> FpAbGroup:
        return FpAbGroup.free(len(self.basis(x, y)))

    def compose(self, x: AddObject, y: AddObject, z: AddObject, g: Vector, f: Vector) -> Vector:
        g_basis, f_basis = self.basis(y, z), self.basis(x, y)
        if len(g) != len(g_basis) or len(f) != len(f_basis):
            raise EndpointMismatchError("coordinate vectors do not match the given objects")
        result = [0] * len(self.basis(x, z))
        f_terms = [(k, f_basis[k]) for k, c in enumerate(f) if c]
        for gk, cg in enumerate(g):
            if not cg:
                continue
            i, k, gm = g_basis[gk]
            gi = self.base_index(y.summands[k], z.summands[i], gm)
            for fk, (k2, j, fm) in f_terms:
                if k2 != k:
                    continue
                fi = self.base_index(x.summands[j], y.summands[k], fm)
                hi = self._table[(x.summands[j], y.summands[k], z.summands[i])][(gi, fi)]
                result[self.position(x, z, i, j, hi)] += cg * f[fk]
        return tuple(result)

    def identity(self, x: AddObject) -> Vector:
        result = [0] * len(self.basis(x, x))
        for i, v in enumerate(x.summands):
            ident = self.base_index(v, v, self.category.identity(v))
            result[self.position(x, x, i, i, ident)] = 1
        return tuple(result)

    def zero_object(self) -> AddObject:
        return AddObject(())

    def _block(self, source: AddObject, target: AddObject, pairs: Sequence[Tuple[int, int]]) -> Vector:
        result = [0] * len(self.basis(source, target))
        for i, j in pairs:
            v = target.summands[i]
            result[self.position(source, target, i, j, self.base_index(v, v, self.category.identity(v)))] = 1
        return tuple(result)

    def direct_sum(self, objects: Sequence[AddObject]) -> Biproduct:
        total = AddObject(tuple(v for obj in objects for v in obj.summands))
        inclusions, projections = [], []
        offset = 0
        for obj in objects:
            pairs = [(offset + j, j) for j in range(len(obj))]
            inclusions.append(self._block(obj, total, pairs))
            projections.append(self._block(total, obj, [(j, i) for i, j in pairs]))
            offset += len(obj)
        return Biproduct(total, tuple(inclusions), tuple(projections))

    # -- matrix views -----------------------------------------------------

    def morphism_vector(self, m: AddMorphism) -> Vector:
        """Coordinates of a matrix morphism"""
        result = [0] * len(self.basis(m.source, m.target))
        if len(m.entries) != len(m.target) or any(len(row) != len(m.source) for row in m.entries):
            raise EndpointMismatchError("entry matrix does not match the endpoints")
        for i, row in enumerate(m.entries):
            for j, coefficients in enumerate(row):
                hom_size = len(self.category.hom(m.source.summands[j], m.target.summands[i]))
                if len(coefficients) != hom_size:
                    raise EndpointMismatchError(
                        f"entry ({i}, {j}) has {len(coefficients)} coefficients for a hom-set of size {hom_size}"
                    )
                for k, c in enumerate(coefficients):
                    result[self.position(m.source, m.target, i, j, k)] += c
        return tuple(result)

    def to_add_morphism(self, a: AddObject, b: AddObject, v: Vector) -> AddMorphism:
        entries = [
            [[0] * len(self.category.hom(a.summands[j], b.summands[i])) for j in range(len(a))]
            for i in range(len(b))
        ]
        for k, (i, j, m) in enumerate(self.basis(a, b)):
            entries[i][j][self.base_index(a.summands[j], b.summands[i], m)] += v[k]
        return AddMorphism(a, b, tuple(tuple(tuple(c) for c in row) for row in entries))

    def from_terms(self, a: AddObject, b: AddObject, terms: Sequence[Tuple[int, int, Hashable, int]]) -> Vector:
        """Coordinates of Σ c·m placed at entry (i, j), given as (i, j, m, c)"""
        result = [0] * len(self.basis(a, b))
        for i, j, m, c in terms:
            k = self.base_index(a.summands[j], b.summands[i], m)
            result[self.position(a, b, i, j, k)] += c
        return tuple(result)

    def composition_tensor(self, a: AddObject, b: AddObject, c: AddObject) -> np.ndarray:
        """Integer tensor T with (g∘f)_h = Σ g_p f_q T[p, q, h]"""
        p, q, r = len(self.basis(b, c)), len(self.basis(a, b)), len(self.basis(a, c))
        tensor = np.zeros((p, q, r), dtype=np.int64)
        for gp in range(p):
            g = tuple(1 if k == gp else 0 for k in range(p))
            for fq in range(q):
                f = tuple(1 if k == fq else 0 for k in range(q))
                tensor[gp, fq, :] = self.compose(a, b, c, g, f)
        return tensor

    def describe(self, a: AddObject, b: AddObject, v: Vector) -> str:
        terms = []
        for k, (i, j, m) in enumerate(self.basis(a, b)):
            if v[k]:
                terms.append(f"{v[k]:+d}·{self.category.label(m)}[{i},{j}]")
        return " ".join(terms) if terms else "0"


def add_compose(hull: AdditiveHull, g: AddMorphism, f: AddMorphism) -> AddMorphism:
    """
    Composite g∘f of matrix morphisms

    Args:
        hull: The additive hull both morphisms live in
        g: Second morphism
        f: First morphism

    Returns:
        The matrix product with bilinear base composition
    """
    if g.source != f.target:
        raise EndpointMismatchError(f"cannot compose: {g.source.label} != {f.target.label}")
    coords = hull.compose(f.source, f.target, g.target, hull.morphism_vector(g), hull.morphism_vector(f))
    return hull.to_add_morphism(f.source, g.target, coords)


def add_hom_group(hull: AdditiveHull, a: AddObject, b: AddObject) -> Tuple[FpAbGroup, List[BasisElement]]:
    """Free hom-group together with its (i, j, base morphism) basis"""
    return hull.hom(a, b), list(hull.basis(a, b))


def biproduct(
    hull: AdditiveHull, a: AddObject, b: AddObject
) -> Tuple[AddObject, Tuple[AddMorphism, AddMorphism], Tuple[AddMorphism, AddMorphism]]:
    """a ⊕ b with injections (ι_a, ι_b) and projections (π_a, π_b)"""
    bp = hull.direct_sum([a, b])
    inclusions = tuple(hull.to_add_morphism(obj, bp.obj, v) for obj, v in zip((a, b), bp.inclusions))
    projections = tuple(hull.to_add_morphism(bp.obj, obj, v) for obj, v in zip((a, b), bp.projections))
    return bp.obj, inclusions, projections


class AddFunctor(AdditiveFunctor):
    """Additive extension add(F): add(C) → add(D) of a functor F: C → D"""

    def __init__(self, source: AdditiveHull, target: AdditiveHull, functor):
        self.source = source
        self.target = target
        self.functor = functor

    def on_object(self, x: AddObject) -> AddObject:
        return AddObject(tuple(self.functor.on_object(v) for v in x.summands))

    def on_morphism(self, x: AddObject, y: AddObject, v: Vector) -> Vector:
        fx, fy = self.on_object(x), self.on_object(y)
        terms = [
            (i, j, self.functor.on_morphism(m), c)
            for (i, j, m), c in zip(self.source.basis(x, y), v)
            if c
        ]
        return self.target.from_terms(fx, fy, terms)

    def apply_add(self, m: AddMorphism) -> AddMorphism:
        image = self.apply(Morphism(m.source, m.target, self.source.morphism_vector(m)))
        return self.target.to_add_morphism(image.source, image.target, image.coords)
