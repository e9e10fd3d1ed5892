"""
Lambda Extensions Module
Finite-dimensional modules over the free algebra F⟨I⟩ with finite I, their
extensions of the trivial module by itself, and a brute-force Ext¹ oracle
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import galois
import numpy as np

from src.config import Config
from src.errors import DimensionMismatchError, GuardrailError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


def _check_prime(p: int):
    if not galois.is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p}")


@dataclass(frozen=True)
class LambdaModule:
    """An F_p-vector space with one endomorphism per element of I"""

    characteristic: int
    dimension: int
    action: Tuple[IntMatrix, ...]

    def __post_init__(self):
        _check_prime(self.characteristic)
        if self.dimension < 0:
            raise ValueError("dimension must be non-negative")
        for idx, matrix in enumerate(self.action):
            if len(matrix) != self.dimension or any(len(row) != self.dimension for row in matrix):
                raise DimensionMismatchError(f"action matrix {idx} is not {self.dimension}x{self.dimension}")
            if any(not 0 <= x < self.characteristic for row in matrix for x in row):
                raise ValueError(f"action matrix {idx} has entries outside F_{self.characteristic}")

    @property
    def n(self) -> int:
        return len(self.action)

    @property
    def field(self):
        return galois.GF(self.characteristic)

    def matrices(self) -> List[galois.FieldArray]:
        GF = self.field
        return [GF(np.array(m, dtype=int).reshape(self.dimension, self.dimension)) for m in self.action]


def _to_ints(matrix: galois.FieldArray) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(matrix))


def trivial_module(p: int, n: int, d: int) -> LambdaModule:
    """All n action matrices zero on F_p^d"""
    zero = tuple((0,) * d for _ in range(d))
    return LambdaModule(p, d, tuple(zero for _ in range(n)))


def in_category_A(module: LambdaModule) -> bool:
    """
    Whether the module is an extension of trivial modules

    Args:
        module: The module

    Returns:
        True iff φ_j∘φ_i = 0 for all i, j
    """
    if module.dimension == 0:
        return True
    matrices = module.matrices()
    return all(not np.any(phi_j @ phi_i) for phi_i in matrices for phi_j in matrices)


@dataclass(frozen=True)
class ExtensionClass:
    characteristic: int
    vector: Tuple[int, ...]


@dataclass(frozen=True)
class Extension:
    """0 → F →ι E →π F → 0 with F trivial"""

    module: LambdaModule
    inclusion: Tuple[int, ...]
    projection: Tuple[int, ...]

    def __post_init__(self):
        d = self.module.dimension
        if len(self.inclusion) != d or len(self.projection) != d:
            raise DimensionMismatchError("inclusion and projection must match the module dimension")
        GF = self.module.field
        iota, pi = GF(list(self.inclusion)), GF(list(self.projection))
        if not np.any(iota) or not np.any(pi) or d != 2:
            raise ValueError("an extension of F by F needs a 2-dimensional module with nonzero maps")
        if int(pi @ iota) != 0:
            raise ValueError("projection∘inclusion must vanish")
        for phi in self.module.matrices():
            if np.any(phi @ iota) or np.any(pi @ phi):
                raise ValueError("inclusion and projection must be module maps")

    def vectors(self) -> Iterator[galois.FieldArray]:
        GF = self.module.field
        for entries in product(range(self.module.characteristic), repeat=self.module.dimension):
            yield GF(list(entries))


def extension_module(p: int, a: Sequence[int]) -> Extension:
    """
    The extension E_a with φ_i = [[0, a_i], [0, 0]]

    Args:
        p: Field characteristic
        a: One scalar per element of I

    Returns:
        Extension with ι = e1 and π = e2*
    """
    _check_prime(p)
    action = tuple(((0, int(x) % p), (0, 0)) for x in a)
    return Extension(LambdaModule(p, 2, action), (1, 0), (0, 1))


def extension_class(extension: Extension) -> ExtensionClass:
    """Read off c with φ_i v = c_i ι for any v with π v = 1"""
    GF = extension.module.field
    iota, pi = GF(list(extension.inclusion)), GF(list(extension.projection))
    k = next(i for i, x in enumerate(extension.projection) if x)
    v = GF.Zeros(extension.module.dimension)
    v[k] = GF(1) / pi[k]
    j = next(i for i, x in enumerate(extension.inclusion) if x)
    coefficients = []
    for phi in extension.module.matrices():
        image = phi @ v
        coefficients.append(int(image[j] / iota[j]))
    return ExtensionClass(extension.module.characteristic, tuple(coefficients))


def is_split_extension(extension: Extension) -> bool:
    """Brute force over sections: some v with π v = 1 and every φ_i v = 0"""
    GF = extension.module.field
    pi = GF(list(extension.projection))
    matrices = extension.module.matrices()
    for v in extension.vectors():
        if int(pi @ v) == 1 and all(not np.any(phi @ v) for phi in matrices):
            return True
    return False


def is_split(a: ExtensionClass) -> bool:
    return is_split_extension(extension_module(a.characteristic, a.vector))


def _block_diagonal(GF, left: galois.FieldArray, right: galois.FieldArray) -> galois.FieldArray:
    d1, d2 = left.shape[0], right.shape[0]
    total = GF.Zeros((d1 + d2, d1 + d2))
    total[:d1, :d1] = left
    total[d1:, d1:] = right
    return total


def baer_sum(first: Extension, second: Extension) -> Extension:
    """
    Baer sum by pullback over the projections and pushout along addition

    Args:
        first: Extension E
        second: Extension E'

    Returns:
        The extension (E ×_F E') / {(ι t, -ι' t)}
    """
    p = first.module.characteristic
    if second.module.characteristic != p or second.module.n != first.module.n:
        raise DimensionMismatchError("extensions live over different algebras")
    GF = first.module.field
    d1, d2 = first.module.dimension, second.module.dimension
    pi1, pi2 = GF(list(first.projection)), GF(list(second.projection))
    iota1, iota2 = GF(list(first.inclusion)), GF(list(second.inclusion))

    # pullback P = ker [π, -π']
    condition = np.concatenate([pi1, -pi2]).reshape(1, d1 + d2)
    pullback = condition.null_space()
    antidiagonal = np.concatenate([iota1, -iota2])

    # adapted basis of F^(d1+d2): antidiagonal, rest of P, then unit vectors
    basis = [antidiagonal]
    for row in list(pullback) + list(GF.Identity(d1 + d2)):
        candidate = GF(np.vstack(basis + [row]))
        if np.linalg.matrix_rank(candidate) == len(basis) + 1:
            basis.append(row)
    change = GF(np.vstack(basis))
    inverse = np.linalg.inv(change)
    p_dim = pullback.shape[0]
    kept = range(1, p_dim)

    def coordinates(vector: galois.FieldArray) -> galois.FieldArray:
        return vector @ inverse

    action = []
    for phi1, phi2 in zip(first.module.matrices(), second.module.matrices()):
        total = _block_diagonal(GF, phi1, phi2)
        columns = [coordinates(total @ change[j])[list(kept)] for j in kept]
        action.append(_to_ints(GF(np.column_stack(columns))) if columns else ())
    inclusion = coordinates(np.concatenate([iota1, GF.Zeros(d2)]))[list(kept)]
    projection = [int(pi1 @ change[j][:d1]) for j in kept]
    module = LambdaModule(p, p_dim - 1, tuple(action))
    return Extension(module, tuple(int(x) for x in inclusion), tuple(projection))


def conjugate(extension: Extension, g: Sequence[Sequence[int]]) -> Extension:
    """Transport the extension along the change of basis g"""
    GF = extension.module.field
    d = extension.module.dimension
    change = GF(np.array(g, dtype=int).reshape(d, d))
    inverse = np.linalg.inv(change)
    action = tuple(_to_ints(inverse @ phi @ change) for phi in extension.module.matrices())
    inclusion = inverse @ GF(list(extension.inclusion))
    projection = GF(list(extension.projection)) @ change
    return Extension(
        LambdaModule(extension.module.characteristic, d, action),
        tuple(int(x) for x in inclusion),
        tuple(int(x) for x in projection),
    )


def unipotent_conjugate(extension: Extension, t: int) -> Extension:
    """Conjugate by [[1, t], [0, 1]]"""
    p = extension.module.characteristic
    return conjugate(extension, [[1, t % p], [0, 1]])


def equivalent_extensions(first: Extension, second: Extension) -> bool:
    """Brute force for a module map h with h ι = ι' and π' h = π"""
    if first.module.characteristic != second.module.characteristic:
        return False
    if first.module.dimension != second.module.dimension or first.module.n != second.module.n:
        return False
    GF = first.module.field
    d = first.module.dimension
    p = first.module.characteristic
    iota1, iota2 = GF(list(first.inclusion)), GF(list(second.inclusion))
    pi1, pi2 = GF(list(first.projection)), GF(list(second.projection))
    pairs = list(zip(first.module.matrices(), second.module.matrices()))
    for entries in product(range(p), repeat=d * d):
        h = GF(np.array(entries, dtype=int).reshape(d, d))
        if np.any(h @ iota1 - iota2) or np.any(pi2 @ h - pi1):
            continue
        if all(not np.any(h @ phi1 - phi2 @ h) for phi1, phi2 in pairs):
            return True
    return False


@dataclass(frozen=True)
class Ext1Report:
    characteristic: int
    n: int
    dimension: int
    class_count: int
    split_count: int
    classes_recovered: bool
    baer_additive: bool
    injective: bool


# below this many families every pair is compared directly
PAIRWISE_LIMIT = 27


def admissible_actions(p: int) -> List[IntMatrix]:
    """Every 2×2 matrix over F_p for which ι = e1 and π = e2* are module maps"""
    _check_prime(p)
    GF = galois.GF(p)
    iota, pi = GF([1, 0]), GF([0, 1])
    found = []
    for entries in product(range(p), repeat=4):
        phi = GF(np.array(entries, dtype=int).reshape(2, 2))
        if not np.any(phi @ iota) and not np.any(pi @ phi):
            found.append(_to_ints(phi))
    return found


def extension_families(p: int, n: int) -> Iterator[Extension]:
    """All extensions 0 → F → F_p² → F → 0 with ι = e1 and π = e2*"""
    for action in product(admissible_actions(p), repeat=n):
        yield Extension(LambdaModule(p, 2, tuple(action)), (1, 0), (0, 1))


def classify_extensions(extensions: Sequence[Extension]) -> List[List[Extension]]:
    """
    Group extensions into equivalence classes

    Args:
        extensions: Extensions of F by F over the same algebra

    Returns:
        The classes, each a list whose first entry is its representative
    """
    buckets: Dict[Tuple[int, ...], List[Extension]] = {}
    if len(extensions) <= PAIRWISE_LIMIT:
        buckets[()] = list(extensions)
    else:
        # the class vector is an equivalence invariant, so classes never cross buckets
        for e in extensions:
            buckets.setdefault(extension_class(e).vector, []).append(e)
    classes: List[List[Extension]] = []
    for members in buckets.values():
        local: List[List[Extension]] = []
        for e in members:
            for cls in local:
                if equivalent_extensions(cls[0], e):
                    cls.append(e)
                    break
            else:
                local.append([e])
        classes.extend(local)
    return classes


def _find_class(
    classes: List[List[Extension]], keys: List[Tuple[int, ...]], extension: Extension
) -> Optional[int]:
    key = extension_class(extension).vector
    for idx, cls in enumerate(classes):
        if len(classes) > PAIRWISE_LIMIT and keys[idx] != key:
            continue
        if equivalent_extensions(cls[0], extension):
            return idx
    return None


def _exact_log(p: int, count: int) -> int:
    """d with p^d = count, or -1"""
    d, power = 0, 1
    while power < count:
        d, power = d + 1, power * p
    return d if power == count else -1


def check_guardrail(p: int, n: int, max_n: Optional[int] = None):
    """Refuse enumerations past the configured size"""
    _check_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    if p == 2:
        bound = max_n if max_n is not None else Config.EXT1_MAX_N
        if n > bound:
            raise GuardrailError(f"n = {n} exceeds the bound {bound} at p = 2 (raise it with --max-n)")
    elif max_n is not None:
        if n > max_n:
            raise GuardrailError(f"n = {n} exceeds the bound {max_n}")
    elif p ** n > Config.EXT1_MAX_CLASSES:
        raise GuardrailError(
            f"{p}^{n} classes exceed the bound {Config.EXT1_MAX_CLASSES} (raise it with --max-n)"
        )


def ext1_group(p: int, n: int, max_n: Optional[int] = None) -> Ext1Report:
    """
    Enumerate every extension of F by F on F_p², classify them up to
    equivalence, and compare the classes with the vectors of F_p^n

    Args:
        p: Field characteristic
        n: Size of I
        max_n: Overrides the brute-force guardrail

    Returns:
        Ext1Report with dimension, class and split counts, and the
        outcome of the Baer-sum and injectivity checks
    """
    check_guardrail(p, n, max_n)
    families = list(extension_families(p, n))
    logger.info("🔄 Classifying %d extensions over F_%d", len(families), p)
    classes = classify_extensions(families)
    dimension = _exact_log(p, len(classes))
    split_count = sum(1 for cls in classes if is_split_extension(cls[0]))

    vectors = list(product(range(p), repeat=n))
    extensions = {a: extension_module(p, a) for a in vectors}
    keys = [extension_class(cls[0]).vector for cls in classes]
    located = {a: _find_class(classes, keys, extensions[a]) for a in vectors}
    recovered = all(
        located[a] is not None and extension_class(extensions[a]).vector == a for a in vectors
    )
    hit = {idx for idx in located.values() if idx is not None}
    injective = len(hit) == len(vectors) == len(classes)
    split = {a: is_split_extension(extensions[a]) for a in vectors}

    additive = True
    for a in vectors:
        for b in vectors:
            total = baer_sum(extensions[a], extensions[b])
            expected = tuple((x + y) % p for x, y in zip(a, b))
            if extension_class(total).vector != expected:
                additive = False
            if split[a] and split[b] and not is_split_extension(total):
                additive = False

    report = Ext1Report(
        characteristic=p,
        n=n,
        dimension=dimension,
        class_count=len(classes),
        split_count=split_count,
        classes_recovered=recovered,
        baer_additive=additive,
        injective=injective,
    )
    logger.info("✅ Ext¹ over F_%d with |I| = %d has dimension %d", p, n, dimension)
    return report
