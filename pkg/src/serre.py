"""
Serre Quotient Module
The Serre subcategory generated by kernels and cokernels of Σ, bounded
membership verdicts, fractions (roofs) for the quotient category and the
induced functor to the abelian hull of the localisation
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.additive import Morphism, small_vectors
from src.config import Config
from src.errors import EndpointMismatchError, IncompleteLocalisationError
from src.fincat import (
    LocalisationFunctor,
    LocalisedCategory,
    PathCategory,
    Quiver,
    hom_paths,
    paper_quiver,
    paper_sigma,
)
from src.freyd import AbelianHull, FreydObject, abelian_hull_functor
from src.zlin import FpAbGroup, MatrixZ, Vector, solve_left, vstack

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    IN = "in"
    NOT_IN = "not_in"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    certificate: Tuple[str, ...] = ()

    @property
    def is_in(self) -> bool:
        return self.verdict is Verdict.IN


@dataclass(frozen=True)
class SerreGenerators:
    labels: Tuple[str, ...]
    objects: Tuple[FreydObject, ...]

    def __len__(self) -> int:
        return len(self.objects)


@dataclass(frozen=True)
class Roof:
    """Fraction f∘s⁻¹: X ← apex → Y with s in Σ_S"""

    apex: FreydObject
    s: Morphism
    f: Morphism
    label: str = ""


@dataclass(frozen=True)
class RoofClass:
    representative: Roof
    members: Tuple[Roof, ...]
    image: Optional[Vector]


@dataclass(frozen=True)
class QuotientHom:
    classes: Tuple[RoofClass, ...]
    target_group: FpAbGroup
    complete: bool


@dataclass
class EquivalenceReport:
    """Outcome of the growth check at one size n"""

    n: int
    depth: int
    pre_quotient_rank: int
    localised_hom_count: int
    target_rank: int
    class_count: int
    injective: bool
    independent: bool
    surjective: bool
    annihilated: bool
    complete: bool
    notes: List[str] = field(default_factory=list)

    def matches(self) -> bool:
        return (
            self.pre_quotient_rank == 0
            and self.target_rank == self.n
            and self.localised_hom_count == self.n
            and self.class_count == self.n
            and self.injective
            and self.independent
            and self.surjective
            and self.annihilated
        )


class InducedFunctor:
    """Ab(add C) → Ab(add C[Σ⁻¹]) induced by the localisation functor"""

    def __init__(self, source: AbelianHull, target: AbelianHull, localisation: LocalisationFunctor):
        self.source = source
        self.target = target
        self.localisation = localisation
        self._lifted = abelian_hull_functor(source, target, localisation)

    def on_object(self, x: FreydObject) -> FreydObject:
        return self._lifted.on_object(x)

    def on_morphism(self, x: FreydObject, y: FreydObject, v: Vector) -> Vector:
        return self._lifted.on_morphism(x, y, v)

    def apply(self, m: Morphism) -> Morphism:
        return self._lifted.apply(m)

    def annihilates(self, x: FreydObject) -> bool:
        return self.target.is_zero_object(self.on_object(x))

    def preserves_identity(self, x: FreydObject) -> bool:
        image = self.apply(self.source.identity_morphism(x))
        return self.target.morphisms_equal(image, self.target.identity_morphism(self.on_object(x)))

    def preserves_composition(self, g: Morphism, f: Morphism) -> bool:
        left = self.apply(self.source.compose_morphisms(g, f))
        right = self.target.compose_morphisms(self.apply(g), self.apply(f))
        return self.target.morphisms_equal(left, right)


def induced_functor(quiver: Quiver, sigma: Sequence[str], length_bound: Optional[int] = None) -> InducedFunctor:
    """Induced functor for C = paths of quiver, refusing incomplete localisations"""
    path_category = PathCategory(quiver)
    localised = LocalisedCategory(quiver, sigma, length_bound)
    if not localised.is_complete():
        raise IncompleteLocalisationError(
            f"localisation does not stabilise within length {localised.length_bound}"
        )
    return InducedFunctor(
        AbelianHull(path_category), AbelianHull(localised), LocalisationFunctor(path_category, localised)
    )


def serre_generators(hull: AbelianHull, sigma: Sequence[str]) -> SerreGenerators:
    """
    Kernels and cokernels of the embedded arrows of Σ

    Args:
        hull: Ab(add C)
        sigma: Arrow names

    Returns:
        SerreGenerators, kernel then cokernel per arrow
    """
    labels, objects = [], []
    for name in sigma:
        m = hull.embed_arrow(name)
        kernel, _ = hull.kernel(m)
        cokernel, _ = hull.cokernel(m)
        labels += [f"ker({name})", f"coker({name})"]
        objects += [kernel, cokernel]
    return SerreGenerators(tuple(labels), tuple(objects))


class SerreQuotient:
    """
    The quotient Ab(add C)/S for S generated by ker and coker of Σ, studied
    through the induced functor to Ab(add C[Σ⁻¹])
    """

    def __init__(self, quiver: Quiver, sigma: Sequence[str], length_bound: Optional[int] = None):
        self.quiver = quiver
        self.path_category = PathCategory(quiver)
        self.localised = LocalisedCategory(quiver, sigma, length_bound)
        self.sigma = self.localised.sigma
        if not self.localised.is_complete():
            raise IncompleteLocalisationError(
                f"localisation does not stabilise within length {self.localised.length_bound}"
            )
        logger.info("🔄 Building abelian hulls for %d vertices", len(quiver.vertices))
        self.source = AbelianHull(self.path_category)
        self.target = AbelianHull(self.localised)
        self.functor = InducedFunctor(
            self.source, self.target, LocalisationFunctor(self.path_category, self.localised)
        )
        self.generators = serre_generators(self.source, self.sigma)
        self._verdicts: Dict[Tuple[FreydObject, int], MembershipVerdict] = {}
        self._sigma_verdicts: Dict[Tuple[Morphism, int], MembershipVerdict] = {}
        self._representables = {self.source.embed(v): v for v in quiver.vertices}

    # -- membership -------------------------------------------------------

    def _closure(self, depth: int) -> Iterator[Tuple[FreydObject, str]]:
        # each round adds direct sums first, then kernels and cokernels
        hull = self.source
        limit = Config.SATURATION_LIMIT
        seen: List[Tuple[FreydObject, str]] = list(zip(self.generators.objects, self.generators.labels))
        yield from seen
        for _ in range(depth):
            new: List[Tuple[FreydObject, str]] = []
            pairs = list(combinations_with_replacement(seen, 2))
            for (a, la), (b, lb) in pairs:
                if len(seen) + len(new) >= limit:
                    break
                new.append((hull.direct_sum([a, b]).obj, f"{la} ⊕ {lb}"))
                yield new[-1]
            for (a, la), (b, lb) in pairs:
                for a_, b_, l_ in ((a, b, f"{la}→{lb}"), (b, a, f"{lb}→{la}")):
                    for g in hull.hom_generators(a_, b_):
                        if len(seen) + len(new) >= limit:
                            break
                        kernel, _ = hull.kernel(g)
                        cokernel, _ = hull.cokernel(g)
                        new += [(kernel, f"ker({l_})"), (cokernel, f"coker({l_})")]
                        yield new[-2]
                        yield new[-1]
            seen += new

    def membership(self, x: FreydObject, depth: Optional[int] = None) -> MembershipVerdict:
        """
        Decide x ∈ S as far as the bounded search allows

        Args:
            x: Object of Ab(add C)
            depth: Number of closure rounds

        Returns:
            MembershipVerdict with a certificate
        """
        depth = Config.DEFAULT_DEPTH if depth is None else depth
        if depth < 0:
            raise ValueError("depth must be non-negative")
        key = (x, depth)
        if key in self._verdicts:
            return self._verdicts[key]
        verdict = self._decide(x, depth)
        self._verdicts[key] = verdict
        return verdict

    def _decide(self, x: FreydObject, depth: int) -> MembershipVerdict:
        hull = self.source
        for obj, label in zip(self.generators.objects, self.generators.labels):
            if obj == x:
                return MembershipVerdict(Verdict.IN, (f"generator {label}",))
        if hull.is_zero_object(x):
            return MembershipVerdict(Verdict.IN, ("zero object",))
        if not self.functor.annihilates(x):
            return MembershipVerdict(Verdict.NOT_IN, ("induced functor image has nonzero identity",))
        closure = []
        for obj, trace in self._closure(depth):
            if obj == x:
                return MembershipVerdict(Verdict.IN, (trace,))
            closure.append((obj, trace))
        for obj, trace in closure:
            if hull.find_isomorphism(x, obj) is not None:
                return MembershipVerdict(Verdict.IN, (trace, "isomorphism found"))
        if depth >= 1:
            certificate = self._extension_certificate(x, closure)
            if certificate is not None:
                return MembershipVerdict(Verdict.IN, certificate)
        logger.warning("⚠️ Membership undecided at depth %d", depth)
        return MembershipVerdict(Verdict.INCONCLUSIVE, (f"no certificate within depth {depth}",))

    def _match(self, obj: FreydObject, closure: List[Tuple[FreydObject, str]]) -> Optional[str]:
        hull = self.source
        if hull.is_zero_object(obj):
            return "zero object"
        for member, trace in closure:
            if member == obj or hull.find_isomorphism(obj, member) is not None:
                return trace
        return None

    def _extension_certificate(
        self, x: FreydObject, closure: List[Tuple[FreydObject, str]]
    ) -> Optional[Tuple[str, ...]]:
        """
        Small-coefficient search for x as an extension, subobject or quotient
        of closure members

        Args:
            x: Object of Ab(add C)
            closure: Closure members with their traces

        Returns:
            A certificate, or None when the search finds nothing
        """
        hull = self.source
        limit = Config.ISO_SEARCH_LIMIT
        for a, label in closure:
            # 0 → a → x → b → 0 with b in the closure
            for v in small_vectors(hull.rank(a, x), limit):
                m = Morphism(a, x, v)
                if hull.is_zero(m) or not hull.is_zero_object(hull.kernel(m)[0]):
                    continue
                quotient = self._match(hull.cokernel(m)[0], closure)
                if quotient is not None:
                    return (f"extension of {quotient} by {label}",)
            for v in small_vectors(hull.rank(x, a), limit):
                m = Morphism(x, a, v)
                if not hull.is_zero(m) and hull.is_zero_object(hull.kernel(m)[0]):
                    return (f"subobject of {label}",)
            for v in small_vectors(hull.rank(a, x), limit):
                m = Morphism(a, x, v)
                if not hull.is_zero(m) and hull.is_zero_object(hull.cokernel(m)[0]):
                    return (f"quotient of {label}",)
        return None

    def sigma_contains(self, m: Morphism, depth: Optional[int] = None) -> MembershipVerdict:
        """Whether kernel and cokernel of m both lie in S"""
        depth = Config.DEFAULT_DEPTH if depth is None else depth
        key = (m, depth)
        if key in self._sigma_verdicts:
            return self._sigma_verdicts[key]
        kernel, _ = self.source.kernel(m)
        first = self.membership(kernel, depth)
        if first.verdict is Verdict.NOT_IN:
            result = MembershipVerdict(Verdict.NOT_IN, tuple("kernel: " + c for c in first.certificate))
        else:
            cokernel, _ = self.source.cokernel(m)
            second = self.membership(cokernel, depth)
            certificate = tuple("kernel: " + c for c in first.certificate) + tuple(
                "cokernel: " + c for c in second.certificate
            )
            if second.verdict is Verdict.NOT_IN:
                result = MembershipVerdict(Verdict.NOT_IN, certificate)
            elif first.is_in and second.is_in:
                result = MembershipVerdict(Verdict.IN, certificate)
            else:
                result = MembershipVerdict(Verdict.INCONCLUSIVE, certificate)
        self._sigma_verdicts[key] = result
        return result

    # -- fractions --------------------------------------------------------

    def legs(self, a: FreydObject, b: FreydObject, depth: int) -> List[Tuple[Morphism, str]]:
        """Candidate morphisms a → b: embedded paths, or small combinations"""
        hull = self.source
        va, vb = self._representables.get(a), self._representables.get(b)
        candidates: List[Tuple[Morphism, str]] = []
        if va is not None and vb is not None:
            for path in hom_paths(self.quiver, va, vb):
                if len(path) <= depth:
                    candidates.append((hull.embed_path(path), path.label))
            return candidates
        if a == b:
            candidates.append((hull.identity_morphism(a), "id"))
        generators = hull.hom_generators(a, b)
        candidates += [(g, f"g{i}") for i, g in enumerate(generators)]
        if depth >= 2:
            for i in range(len(generators)):
                for j in range(i + 1, len(generators)):
                    for sign, symbol in ((1, "+"), (-1, "-")):
                        coords = tuple(p + sign * q for p, q in zip(generators[i].coords, generators[j].coords))
                        candidates.append((Morphism(a, b, coords), f"g{i}{symbol}g{j}"))
        return [(m, label) for m, label in candidates if not hull.is_zero(m)]

    def apexes(self, x: FreydObject) -> List[FreydObject]:
        result = [x]
        result += [obj for obj in self._representables if obj != x]
        return result

    def roofs(self, x: FreydObject, y: FreydObject, depth: Optional[int] = None) -> Tuple[List[Roof], bool]:
        """Roofs X ← apex → Y with s ∈ Σ_S and f ≠ 0; flag is False if a verdict was inconclusive"""
        depth = Config.DEFAULT_DEPTH if depth is None else depth
        found, complete = [], True
        for apex in self.apexes(x):
            s_legs = self.legs(apex, x, depth)
            if not s_legs:
                continue
            f_legs = self.legs(apex, y, depth)
            if not f_legs:
                continue
            for s, s_label in s_legs:
                verdict = self.sigma_contains(s, depth)
                if verdict.verdict is Verdict.INCONCLUSIVE:
                    complete = False
                if not verdict.is_in:
                    continue
                for f, f_label in f_legs:
                    found.append(Roof(apex, s, f, f"({s_label}, {f_label})"))
        return found, complete

    def equivalent(self, r1: Roof, r2: Roof, depth: int) -> bool:
        """Search for a common refinement (t1, t2) with s1 t1 = s2 t2 ∈ Σ_S and f1 t1 = f2 t2"""
        hull = self.source
        x = r1.s.target
        for apex in self.apexes(x):
            for t1, _ in self.legs(apex, r1.apex, depth):
                s_common = hull.compose_morphisms(r1.s, t1)
                f_common = hull.compose_morphisms(r1.f, t1)
                for t2, _ in self.legs(apex, r2.apex, depth):
                    if not hull.morphisms_equal(s_common, hull.compose_morphisms(r2.s, t2)):
                        continue
                    if not hull.morphisms_equal(f_common, hull.compose_morphisms(r2.f, t2)):
                        continue
                    if self.sigma_contains(s_common, depth).is_in:
                        return True
        return False

    def evaluate(self, roof: Roof) -> Optional[Vector]:
        """L(f)∘L(s)⁻¹ in hom(L X, L Y), or None if L(s) is not invertible"""
        target = self.target
        ls, lf = self.functor.apply(roof.s), self.functor.apply(roof.f)
        inverse = target.inverse(ls.source, ls.target, ls.coords)
        if inverse is None:
            return None
        image = target.compose(ls.target, ls.source, lf.target, lf.coords, inverse)
        return target.reduce(ls.target, lf.target, image)

    def quotient_hom(self, x: FreydObject, y: FreydObject, depth: Optional[int] = None) -> QuotientHom:
        """
        Roof classes X → Y up to common refinement, with their images

        Args:
            x: Source object of Ab(add C)
            y: Target object of Ab(add C)
            depth: Search bound for legs and membership

        Returns:
            QuotientHom listing the classes found
        """
        depth = Config.DEFAULT_DEPTH if depth is None else depth
        roofs, complete = self.roofs(x, y, depth)
        parent = list(range(len(roofs)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(roofs)):
            for j in range(i + 1, len(roofs)):
                if find(i) != find(j) and self.equivalent(roofs[i], roofs[j], depth):
                    parent[find(j)] = find(i)

        groups: Dict[int, List[Roof]] = {}
        for i, roof in enumerate(roofs):
            groups.setdefault(find(i), []).append(roof)
        classes = []
        for members in groups.values():
            image = self.evaluate(members[0])
            if image is None:
                complete = False
            classes.append(RoofClass(members[0], tuple(members), image))
        lx, ly = self.functor.on_object(x), self.functor.on_object(y)
        logger.info("✅ Found %d roof classes from %d roofs", len(classes), len(roofs))
        return QuotientHom(tuple(classes), self.target.hom(lx, ly), complete)

    # -- exactness --------------------------------------------------------

    def exact_at(self, f: Morphism, g: Morphism) -> bool:
        return self.source.is_exact_at(f, g)

    def preserves_exactness(self, f: Morphism, g: Morphism) -> bool:
        """If x →f y →g z is exact at y, so is its image"""
        if not self.exact_at(f, g):
            return True
        return self.target.is_exact_at(self.functor.apply(f), self.functor.apply(g))


def _lattice_rank(rows: Sequence[Vector], cols: int) -> int:
    return MatrixZ.from_rows(rows, cols=cols).rank if rows else 0


def verify_equivalence(n: int, depth: Optional[int] = None) -> EquivalenceReport:
    """
    Compare hom(x, z) before and after the quotient for the n-indexed quiver

    Args:
        n: Size of the index set
        depth: Roof and membership search bound

    Returns:
        EquivalenceReport with ranks, class count and the map's properties
    """
    depth = Config.DEFAULT_DEPTH if depth is None else depth
    quotient = SerreQuotient(paper_quiver(n), paper_sigma(n))
    source, target = quotient.source, quotient.target
    x, z = source.embed("x"), source.embed("z")
    lx, lz = quotient.functor.on_object(x), quotient.functor.on_object(z)
    if (lx, lz) != (target.embed("x"), target.embed("z")):
        raise EndpointMismatchError("induced functor does not send representables to representables")

    pre_rank = source.hom(x, z).free_rank
    localised_count = len(quotient.localised.localised_hom("x", "z").words)
    target_group = target.hom(lx, lz)
    result = quotient.quotient_hom(x, z, depth)
    images = [c.image for c in result.classes if c.image is not None]
    cols = target_group.generator_count

    injective = len(images) == len(result.classes) and all(
        not target_group.equal(images[i], images[j])
        for i in range(len(images))
        for j in range(i + 1, len(images))
    )
    independent = _lattice_rank(images, cols) == len(images)
    relations = target_group.relations
    span = vstack(MatrixZ.from_rows(images, cols=cols), relations)
    surjective = all(solve_left(span, g) is not None for g in _unit_rows(cols))
    annihilated = all(quotient.functor.annihilates(g) for g in quotient.generators.objects)

    report = EquivalenceReport(
        n=n,
        depth=depth,
        pre_quotient_rank=pre_rank,
        localised_hom_count=localised_count,
        target_rank=target_group.free_rank,
        class_count=len(result.classes),
        injective=injective,
        independent=independent,
        surjective=surjective,
        annihilated=annihilated,
        complete=result.complete,
    )
    if not result.complete:
        report.notes.append("some membership verdicts were inconclusive at this depth")
    return report


def _unit_rows(count: int) -> List[Vector]:
    return [tuple(1 if i == j else 0 for j in range(count)) for i in range(count)]


def hom_growth(n: int, length_bound: Optional[int] = None) -> Tuple[int, int, int, bool]:
    """
    hom(x, z) before and after localising, for the n-indexed quiver

    Args:
        n: Size of the index set
        length_bound: Zigzag enumeration bound

    Returns:
        (pre-quotient rank, localised word count, quotient-target rank, complete)
    """
    quiver, sigma = paper_quiver(n), paper_sigma(n)
    localised = LocalisedCategory(quiver, sigma, length_bound)
    words = localised.localised_hom("x", "z")
    if not localised.is_complete():
        return 0, len(words.words), 0, False
    source = AbelianHull(PathCategory(quiver))
    target = AbelianHull(localised)
    pre_rank = source.hom(source.embed("x"), source.embed("z")).free_rank
    post_rank = target.hom(target.embed("x"), target.embed("z")).free_rank
    return pre_rank, len(words.words), post_rank, True
