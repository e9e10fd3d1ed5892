"""
Freyd Completion Module
mod(B) of a computable additive base by presentations, the opposite
category, and the abelian hull Ab(C) = mod(mod(add C)^op)^op
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.additive import (
    AdditiveFunctor,
    Biproduct,
    ComputableAdditiveBase,
    Morphism,
    Obj,
)
from src.addhull import AddFunctor, AdditiveHull, AddMorphism, AddObject
from src.errors import EndpointMismatchError
from src.fincat import FiniteCategory, Path
from src.zlin import FpAbGroup, MatrixZ, Vector, kernel_lattice, solve_left, subquotient, vecmat, vstack

logger = logging.getLogger(__name__)

__all__ = [
    "AbelianHull",
    "ComputableAdditiveBase",
    "FreydCategory",
    "FreydFunctor",
    "FreydMorphism",
    "FreydObject",
    "Morphism",
    "OppositeCategory",
    "OppositeFunctor",
    "abelian_hull",
    "freyd_compose",
    "freyd_hom",
    "opposite",
]


@dataclass(frozen=True)
class FreydObject:
    """Presentation a: rel → gen, standing for coker(a)"""

    rel: Obj
    gen: Obj
    presentation: Vector


@dataclass(frozen=True)
class FreydMorphism:
    """Chain map (f0, f1) with f0∘a = b∘f1; f0 matters up to b∘h"""

    source: FreydObject
    target: FreydObject
    f0: Vector
    f1: Vector


@dataclass(frozen=True)
class HomComputation:
    """
    Solved hom-group between two presentations

    span0/span1 hold the solution lattice of the compatibility equation
    projected to f0 and f1; subquotient divides the f0 lattice by the
    null-homotopic maps; group is its canonical presentation with lifts
    giving a chain map for each canonical generator.
    """

    group: FpAbGroup
    span0: MatrixZ
    span1: MatrixZ
    subquotient: FpAbGroup
    lifts: Tuple[Tuple[Vector, Vector], ...]


class FreydCategory(ComputableAdditiveBase):
    """The Freyd completion mod(B): cokernels formally adjoined to B"""

    def __init__(self, base: ComputableAdditiveBase):
        super().__init__()
        self.base = base
        self._homs: Dict[Tuple[FreydObject, FreydObject], HomComputation] = {}

    # -- hom-groups -------------------------------------------------------

    def hom_data(self, x: FreydObject, y: FreydObject) -> HomComputation:
        """
        Solve for the hom-group between two presentations

        Args:
            x: Source presentation a: A1 → A0
            y: Target presentation b: B1 → B0

        Returns:
            HomComputation with the canonical group and generator lifts
        """
        key = (x, y)
        if key in self._homs:
            return self._homs[key]
        base = self.base
        a1, a0, a = x.rel, x.gen, x.presentation
        b1, b0, b = y.rel, y.gen, y.presentation
        k00, k11 = base.rank(a0, b0), base.rank(a1, b1)
        system = vstack(
            base.right_composition_matrix(a1, a0, b0, a),
            -base.left_composition_matrix(a1, b1, b0, b),
            base.hom(a1, b0).relations,
        )
        solutions = kernel_lattice(system)
        span0 = solutions.columns(0, k00)
        span1 = solutions.columns(k00, k00 + k11)
        null_rows = list(base.left_composition_matrix(a0, b1, b0, b).entries)
        null_rows += list(base.hom(a0, b0).relations.entries)
        sq = subquotient(span0.entries, null_rows, k00)
        lifts = tuple((vecmat(g, span0), vecmat(g, span1)) for g in sq.generators())
        data = HomComputation(sq.canonical_presentation(), span0, span1, sq, lifts)
        self._homs[key] = data
        return data

    def hom(self, x: FreydObject, y: FreydObject) -> FpAbGroup:
        return self.hom_data(x, y).group

    def to_coords(self, x: FreydObject, y: FreydObject, f0: Vector) -> Vector:
        """Canonical coordinates of the class of f0; f0 must admit a witness"""
        data = self.hom_data(x, y)
        combination = solve_left(data.span0, f0)
        if combination is None:
            raise EndpointMismatchError("f0 does not extend to a morphism of presentations")
        return data.subquotient.coordinates(combination)

    def lift(self, x: FreydObject, y: FreydObject, v: Vector) -> Tuple[Vector, Vector]:
        """A chain map (f0, f1) representing the class v"""
        data = self.hom_data(x, y)
        if len(v) != len(data.lifts):
            raise EndpointMismatchError("coordinate vector does not match the hom-group")
        f0 = [0] * data.span0.cols
        f1 = [0] * data.span1.cols
        for c, (l0, l1) in zip(v, data.lifts):
            if c:
                f0 = [s + c * t for s, t in zip(f0, l0)]
                f1 = [s + c * t for s, t in zip(f1, l1)]
        return tuple(f0), tuple(f1)

    def compose(self, x: FreydObject, y: FreydObject, z: FreydObject, g: Vector, f: Vector) -> Vector:
        f0, _ = self.lift(x, y, f)
        g0, _ = self.lift(y, z, g)
        return self.to_coords(x, z, self.base.compose(x.gen, y.gen, z.gen, g0, f0))

    def identity(self, x: FreydObject) -> Vector:
        return self.to_coords(x, x, self.base.identity(x.gen))

    def zero_object(self) -> FreydObject:
        zero = self.base.zero_object()
        return FreydObject(zero, zero, self.base.zero(zero, zero))

    def embed(self, a: Obj) -> FreydObject:
        """Representable presentation 0 → a"""
        zero = self.base.zero_object()
        return FreydObject(zero, a, self.base.zero(zero, a))

    def embed_morphism(self, a: Obj, b: Obj, v: Vector) -> Vector:
        return self.to_coords(self.embed(a), self.embed(b), v)

    def direct_sum(self, objects: Sequence[FreydObject]) -> Biproduct:
        base = self.base
        gens = base.direct_sum([obj.gen for obj in objects])
        rels = base.direct_sum([obj.rel for obj in objects])
        presentation = base.zero(rels.obj, gens.obj)
        for i, obj in enumerate(objects):
            term = base.compose_chain(
                [rels.obj, obj.rel, obj.gen, gens.obj],
                [rels.projections[i], obj.presentation, gens.inclusions[i]],
            )
            presentation = base.add(presentation, term)
        total = FreydObject(rels.obj, gens.obj, presentation)
        inclusions = tuple(self.to_coords(obj, total, gens.inclusions[i]) for i, obj in enumerate(objects))
        projections = tuple(self.to_coords(total, obj, gens.projections[i]) for i, obj in enumerate(objects))
        return Biproduct(total, inclusions, projections)

    # -- chain-map views --------------------------------------------------

    def is_chain_map(self, m: FreydMorphism) -> bool:
        x, y = m.source, m.target
        left = self.base.compose(x.rel, x.gen, y.gen, m.f0, x.presentation)
        right = self.base.compose(x.rel, y.rel, y.gen, y.presentation, m.f1)
        return self.base.equal(x.rel, y.gen, left, right)

    def as_morphism(self, m: FreydMorphism) -> Morphism:
        if not self.is_chain_map(m):
            raise EndpointMismatchError("f0∘a = b∘f1 does not hold")
        return Morphism(m.source, m.target, self.to_coords(m.source, m.target, m.f0))

    def to_freyd(self, m: Morphism) -> FreydMorphism:
        f0, f1 = self.lift(m.source, m.target, m.coords)
        return FreydMorphism(m.source, m.target, f0, f1)

    # -- cokernels and kernels --------------------------------------------

    def _joint_map(self, x: FreydObject, y: FreydObject, f0: Vector) -> Tuple[Biproduct, Vector]:
        # [f0, b]: A0 ⊕ B1 → B0
        base = self.base
        bp = base.direct_sum([x.gen, y.rel])
        joint = base.add(
            base.compose(bp.obj, x.gen, y.gen, f0, bp.projections[0]),
            base.compose(bp.obj, y.rel, y.gen, y.presentation, bp.projections[1]),
        )
        return bp, joint

    def cokernel(self, x: FreydObject, y: FreydObject, f: Vector) -> Tuple[FreydObject, Vector]:
        """
        Cokernel of f: x → y

        Args:
            x: Source presentation
            y: Target presentation
            f: Canonical coordinates of f

        Returns:
            (C, p) with C presented by [f0, b]: A0 ⊕ B1 → B0 and p: y → C
        """
        f0, _ = self.lift(x, y, f)
        bp, joint = self._joint_map(x, y, f0)
        c = FreydObject(bp.obj, y.gen, joint)
        return c, self.to_coords(y, c, self.base.identity(y.gen))

    def kernel(self, x: FreydObject, y: FreydObject, f: Vector) -> Tuple[FreydObject, Vector]:
        """
        Kernel of f: x → y from weak kernels of the base

        Args:
            x: Source presentation a: A1 → A0
            y: Target presentation b: B1 → B0
            f: Canonical coordinates of f

        Returns:
            (K, k) with k: K → x the kernel inclusion
        """
        base = self.base
        f0, _ = self.lift(x, y, f)
        bp, joint = self._joint_map(x, y, f0)
        k0, k_joint = base.weak_kernel(bp.obj, y.gen, joint)
        k = base.compose(k0, bp.obj, x.gen, bp.projections[0], k_joint)
        # relations: pairs (r, s) with k∘r + a∘s = 0
        bp2 = base.direct_sum([k0, x.rel])
        v = base.add(
            base.compose(bp2.obj, k0, x.gen, k, bp2.projections[0]),
            base.compose(bp2.obj, x.rel, x.gen, x.presentation, bp2.projections[1]),
        )
        w, w_map = base.weak_kernel(bp2.obj, x.gen, v)
        rel = base.compose(w, bp2.obj, k0, bp2.projections[0], w_map)
        kernel_obj = FreydObject(w, k0, rel)
        return kernel_obj, self.to_coords(kernel_obj, x, k)

    def weak_cokernel(self, x: FreydObject, y: FreydObject, u: Vector) -> Tuple[FreydObject, Vector]:
        return self.cokernel(x, y, u)

    def weak_kernel(self, x: FreydObject, y: FreydObject, u: Vector) -> Tuple[FreydObject, Vector]:
        return self.kernel(x, y, u)


def freyd_hom(category: FreydCategory, x: FreydObject, y: FreydObject) -> Tuple[FpAbGroup, List[FreydMorphism]]:
    """Hom-group with a representative chain map per canonical generator"""
    data = category.hom_data(x, y)
    return data.group, [FreydMorphism(x, y, f0, f1) for f0, f1 in data.lifts]


def freyd_compose(category: FreydCategory, g: FreydMorphism, f: FreydMorphism) -> FreydMorphism:
    """Componentwise composite of chain maps"""
    if f.target != g.source:
        raise EndpointMismatchError("chain maps are not composable")
    x, y, z = f.source, f.target, g.target
    base = category.base
    return FreydMorphism(
        x,
        z,
        base.compose(x.gen, y.gen, z.gen, g.f0, f.f0),
        base.compose(x.rel, y.rel, z.rel, g.f1, f.f1),
    )


class OppositeCategory(ComputableAdditiveBase):
    """B^op: same objects, hom(x, y) := hom_B(y, x)"""

    def __init__(self, base: ComputableAdditiveBase):
        super().__init__()
        self.base = base

    def hom(self, x: Obj, y: Obj) -> FpAbGroup:
        return self.base.hom(y, x)

    def compose(self, x: Obj, y: Obj, z: Obj, g: Vector, f: Vector) -> Vector:
        return self.base.compose(z, y, x, f, g)

    def identity(self, x: Obj) -> Vector:
        return self.base.identity(x)

    def zero_object(self) -> Obj:
        return self.base.zero_object()

    def direct_sum(self, objects: Sequence[Obj]) -> Biproduct:
        bp = self.base.direct_sum(objects)
        return Biproduct(bp.obj, bp.projections, bp.inclusions)

    def weak_kernel(self, x: Obj, y: Obj, u: Vector) -> Tuple[Obj, Vector]:
        return self.base.weak_cokernel(y, x, u)

    def weak_cokernel(self, x: Obj, y: Obj, u: Vector) -> Tuple[Obj, Vector]:
        return self.base.weak_kernel(y, x, u)


def opposite(base: ComputableAdditiveBase) -> OppositeCategory:
    return OppositeCategory(base)


class FreydFunctor(AdditiveFunctor):
    """mod(F): mod(B) → mod(B') induced by an additive functor F: B → B'"""

    def __init__(self, source: FreydCategory, target: FreydCategory, inner: AdditiveFunctor):
        self.source = source
        self.target = target
        self.inner = inner

    def on_object(self, x: FreydObject) -> FreydObject:
        return FreydObject(
            self.inner.on_object(x.rel),
            self.inner.on_object(x.gen),
            self.inner.on_morphism(x.rel, x.gen, x.presentation),
        )

    def on_morphism(self, x: FreydObject, y: FreydObject, v: Vector) -> Vector:
        f0, _ = self.source.lift(x, y, v)
        image = self.inner.on_morphism(x.gen, y.gen, f0)
        return self.target.to_coords(self.on_object(x), self.on_object(y), image)


class OppositeFunctor(AdditiveFunctor):
    """F^op between opposite categories"""

    def __init__(self, source: OppositeCategory, target: OppositeCategory, inner: AdditiveFunctor):
        self.source = source
        self.target = target
        self.inner = inner

    def on_object(self, x: Obj) -> Obj:
        return self.inner.on_object(x)

    def on_morphism(self, x: Obj, y: Obj, v: Vector) -> Vector:
        return self.inner.on_morphism(y, x, v)


class AbelianHull(OppositeCategory):
    """
    Ab(add C) built as mod(mod(add C)^op)^op

    Kernels come from cokernels at the second level; cokernels come from
    its kernels, which use the first level's cokernels as weak kernels of
    the opposite.
    """

    def __init__(self, category: FiniteCategory):
        self.category = category
        self.additive = AdditiveHull(category)
        self.level1 = FreydCategory(self.additive)
        self.level2 = FreydCategory(OppositeCategory(self.level1))
        super().__init__(self.level2)
        self._kernels: Dict[Morphism, Tuple[FreydObject, Morphism]] = {}
        self._cokernels: Dict[Morphism, Tuple[FreydObject, Morphism]] = {}
        logger.info("✅ Abelian hull ready over %d objects", len(category.objects()))

    # -- embedding --------------------------------------------------------

    def embed_object(self, a: AddObject) -> FreydObject:
        return self.level2.embed(self.level1.embed(a))

    def embed(self, vertex: str) -> FreydObject:
        return self.embed_object(AddObject((vertex,)))

    def embed_morphism(self, a: AddObject, b: AddObject, v: Vector) -> Morphism:
        """Image of v: a → b of add(C)"""
        first = self.level1.embed_morphism(a, b, v)
        ea, eb = self.level1.embed(a), self.level1.embed(b)
        second = self.level2.embed_morphism(eb, ea, first)
        return Morphism(self.embed_object(a), self.embed_object(b), second)

    def embed_add_morphism(self, m: AddMorphism) -> Morphism:
        return self.embed_morphism(m.source, m.target, self.additive.morphism_vector(m))

    def embed_path(self, path: Path) -> Morphism:
        a, b = AddObject((path.source,)), AddObject((path.target,))
        return self.embed_morphism(a, b, self.additive.from_terms(a, b, [(0, 0, path, 1)]))

    def embed_arrow(self, name: str) -> Morphism:
        quiver = getattr(self.category, "quiver")
        arrow = quiver.arrow(name)
        return self.embed_path(Path(arrow.source, arrow.target, (name,)))

    # -- abelian structure ------------------------------------------------

    def kernel(self, m: Morphism) -> Tuple[FreydObject, Morphism]:
        """Kernel object of m and its inclusion"""
        if m not in self._kernels:
            k, inclusion = self.weak_kernel(m.source, m.target, m.coords)
            self._kernels[m] = (k, Morphism(k, m.source, inclusion))
        return self._kernels[m]

    def cokernel(self, m: Morphism) -> Tuple[FreydObject, Morphism]:
        """Cokernel object of m and its projection"""
        if m not in self._cokernels:
            c, projection = self.weak_cokernel(m.source, m.target, m.coords)
            self._cokernels[m] = (c, Morphism(m.target, c, projection))
        return self._cokernels[m]

    def image(self, m: Morphism) -> Tuple[FreydObject, Morphism]:
        """ker(coker m) with its inclusion into the target"""
        _, projection = self.cokernel(m)
        return self.kernel(projection)

    def coimage(self, m: Morphism) -> Tuple[FreydObject, Morphism]:
        """coker(ker m) with the projection from the source"""
        _, inclusion = self.kernel(m)
        return self.cokernel(inclusion)

    def image_coimage_comparison(self, m: Morphism) -> Optional[Morphism]:
        """The induced map coimage → image, or None if it cannot be solved for"""
        image, inclusion = self.image(m)
        coimage, projection = self.coimage(m)
        through_image = self.factor_through_left(m.source, image, m.target, inclusion.coords, m.coords)
        if through_image is None:
            return None
        comparison = self.factor_through_right(m.source, coimage, image, projection.coords, through_image)
        if comparison is None:
            return None
        return Morphism(coimage, image, comparison)

    def is_exact_at(self, f: Morphism, g: Morphism) -> bool:
        """Exactness of x →f y →g z at y"""
        if f.target != g.source:
            raise EndpointMismatchError("maps do not meet at a common object")
        if not self.is_zero(self.compose_morphisms(g, f)):
            return False
        image, image_inclusion = self.image(f)
        kernel, kernel_inclusion = self.kernel(g)
        return (
            self.factor_through_left(kernel, image, f.target, image_inclusion.coords, kernel_inclusion.coords)
            is not None
        )


def abelian_hull(category: FiniteCategory) -> AbelianHull:
    """Ab(add C) with its embedding of C"""
    return AbelianHull(category)


def abelian_hull_functor(source: AbelianHull, target: AbelianHull, functor) -> AdditiveFunctor:
    """
    Lift a functor C → D through add, mod, op, mod, op

    Args:
        source: Ab(add C)
        target: Ab(add D)
        functor: Functor C → D with on_object/on_morphism

    Returns:
        The induced functor Ab(add C) → Ab(add D)
    """
    add_f = AddFunctor(source.additive, target.additive, functor)
    level1_f = FreydFunctor(source.level1, target.level1, add_f)
    op_f = OppositeFunctor(source.level2.base, target.level2.base, level1_f)  # type: ignore[arg-type]
    level2_f = FreydFunctor(source.level2, target.level2, op_f)
    return OppositeFunctor(source, target, level2_f)
