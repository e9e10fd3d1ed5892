"""
Finite Category Module
Quivers, their path categories, and localisation at a set of arrows by
reduced zigzag words
"""

from __future__ import annotations

import json
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ValidationError

from src.config import Config
from src.errors import (
    EndpointMismatchError,
    IncompleteLocalisationError,
    InfiniteHomSetError,
    QuiverFormatError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuiverArrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """Finite directed multigraph with named vertices and arrows"""

    vertices: Tuple[str, ...]
    arrows: Tuple[QuiverArrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverFormatError("vertex names must be distinct", "vertices")
        names = [arrow.name for arrow in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverFormatError("arrow names must be distinct", "arrows")
        declared = set(self.vertices)
        for idx, arrow in enumerate(self.arrows):
            for end, vertex in (("src", arrow.source), ("tgt", arrow.target)):
                if vertex not in declared:
                    raise QuiverFormatError(
                        f"arrow '{arrow.name}' uses undeclared vertex '{vertex}'",
                        f"arrows[{idx}].{end}",
                    )

    def arrow(self, name: str) -> QuiverArrow:
        for candidate in self.arrows:
            if candidate.name == name:
                return candidate
        raise KeyError(name)

    def arrow_index(self, name: str) -> int:
        return [arrow.name for arrow in self.arrows].index(name)

    def outgoing(self, vertex: str) -> List[QuiverArrow]:
        return [arrow for arrow in self.arrows if arrow.source == vertex]

    def incoming(self, vertex: str) -> List[QuiverArrow]:
        return [arrow for arrow in self.arrows if arrow.target == vertex]

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            g.add_edge(arrow.source, arrow.target, key=arrow.name)
        return g

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.graph())


@dataclass(frozen=True)
class Path:
    """Path in a quiver; arrows are listed in traversal order"""

    source: str
    target: str
    arrows: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        if not self.arrows:
            return f"id_{self.source}"
        return "·".join(reversed(self.arrows))


@dataclass(frozen=True)
class Letter:
    arrow: str
    inverse: bool = False

    @property
    def label(self) -> str:
        return f"{self.arrow}^-1" if self.inverse else self.arrow


@dataclass(frozen=True)
class ZigzagWord:
    """Word in arrows and formal inverses; letters are in traversal order"""

    source: str
    target: str
    letters: Tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def label(self) -> str:
        if not self.letters:
            return f"id_{self.source}"
        return "·".join(letter.label for letter in reversed(self.letters))


Morphism = Union[Path, ZigzagWord]


def paper_quiver(n: int) -> Quiver:
    """
    The quiver with vertices x, y1..yn, z and arrows sigma_i: y_i -> x,
    tau_i: y_i -> z

    Args:
        n: Size of the index set

    Returns:
        Quiver with 2 + n vertices and 2n arrows
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    ys = [f"y{i}" for i in range(1, n + 1)]
    arrows = [QuiverArrow(f"sigma{i}", f"y{i}", "x") for i in range(1, n + 1)]
    arrows += [QuiverArrow(f"tau{i}", f"y{i}", "z") for i in range(1, n + 1)]
    return Quiver(tuple(["x"] + ys + ["z"]), tuple(arrows))


def paper_sigma(n: int) -> Tuple[str, ...]:
    return tuple(f"sigma{i}" for i in range(1, n + 1))


def _endpoints(quiver: Quiver, letter: Letter) -> Tuple[str, str]:
    arrow = quiver.arrow(letter.arrow)
    if letter.inverse:
        return arrow.target, arrow.source
    return arrow.source, arrow.target


def identity_path(vertex: str) -> Path:
    return Path(vertex, vertex, ())


def arrow_path(quiver: Quiver, name: str) -> Path:
    arrow = quiver.arrow(name)
    return Path(arrow.source, arrow.target, (name,))


def compose_paths(p: Path, q: Path) -> Path:
    """
    Composite p∘q (q first)

    Args:
        p: Second path
        q: First path

    Returns:
        Concatenated path from source(q) to target(p)
    """
    if q.target != p.source:
        raise EndpointMismatchError(
            f"cannot compose {p.label} after {q.label}: {q.target} != {p.source}"
        )
    return Path(q.source, p.target, q.arrows + p.arrows)


def _path_key(quiver: Quiver, path: Path) -> Tuple[int, Tuple[int, ...]]:
    return len(path), tuple(quiver.arrow_index(name) for name in path.arrows)


def hom_paths(quiver: Quiver, a: str, b: str) -> Tuple[Path, ...]:
    """
    All paths from a to b in an acyclic quiver

    Args:
        quiver: The quiver
        a: Source vertex
        b: Target vertex

    Returns:
        Paths sorted by length, then arrow index
    """
    if not quiver.is_acyclic():
        raise InfiniteHomSetError("infinite hom-set")
    found: List[Path] = []
    stack: List[Tuple[str, Tuple[str, ...]]] = [(a, ())]
    while stack:
        vertex, arrows = stack.pop()
        if vertex == b:
            found.append(Path(a, b, arrows))
        for arrow in quiver.outgoing(vertex):
            stack.append((arrow.target, arrows + (arrow.name,)))
    return tuple(sorted(found, key=lambda p: _path_key(quiver, p)))


def compose_words(g: ZigzagWord, f: ZigzagWord) -> ZigzagWord:
    """Unreduced composite g∘f (f first)"""
    if f.target != g.source:
        raise EndpointMismatchError(
            f"cannot compose {g.label} after {f.label}: {f.target} != {g.source}"
        )
    return ZigzagWord(f.source, g.target, f.letters + g.letters)


def _cancels(u: Letter, v: Letter) -> bool:
    return u.arrow == v.arrow and u.inverse != v.inverse


def reduce_word(w: ZigzagWord) -> ZigzagWord:
    """Normal form under s·s⁻¹ → id and s⁻¹·s → id"""
    stack: List[Letter] = []
    for letter in w.letters:
        if stack and _cancels(stack[-1], letter):
            stack.pop()
        else:
            stack.append(letter)
    return ZigzagWord(w.source, w.target, tuple(stack))


def is_reduced(w: ZigzagWord) -> bool:
    return all(not _cancels(u, v) for u, v in zip(w.letters, w.letters[1:]))


def rewrite_steps(w: ZigzagWord) -> List[ZigzagWord]:
    """Every word reachable from w by a single cancellation"""
    steps = []
    for i in range(len(w.letters) - 1):
        if _cancels(w.letters[i], w.letters[i + 1]):
            steps.append(ZigzagWord(w.source, w.target, w.letters[:i] + w.letters[i + 2:]))
    return steps


def word_key(quiver: Quiver, w: ZigzagWord) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    # inverse letters sort before forward ones on the same arrow
    return len(w), tuple((quiver.arrow_index(l.arrow), 0 if l.inverse else 1) for l in w.letters)


def path_to_word(path: Path) -> ZigzagWord:
    return ZigzagWord(path.source, path.target, tuple(Letter(name) for name in path.arrows))


localisation_functor = path_to_word


class FiniteCategory(ABC):
    """Category with finitely many objects and finite, enumerable hom-sets"""

    @abstractmethod
    def objects(self) -> Tuple[str, ...]:
        ...

    @abstractmethod
    def hom(self, a: str, b: str) -> Tuple[Hashable, ...]:
        """Deterministically ordered hom-set"""

    @abstractmethod
    def compose(self, g: Hashable, f: Hashable) -> Hashable:
        """Composite g∘f"""

    @abstractmethod
    def identity(self, a: str) -> Hashable:
        ...

    def label(self, m: Hashable) -> str:
        return getattr(m, "label", str(m))


class PathCategory(FiniteCategory):
    """Free category on an acyclic quiver"""

    def __init__(self, quiver: Quiver):
        if not quiver.is_acyclic():
            raise InfiniteHomSetError("infinite hom-set")
        self.quiver = quiver
        self._homs: Dict[Tuple[str, str], Tuple[Path, ...]] = {}

    def objects(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    def hom(self, a: str, b: str) -> Tuple[Path, ...]:
        if (a, b) not in self._homs:
            self._homs[(a, b)] = hom_paths(self.quiver, a, b)
        return self._homs[(a, b)]

    def compose(self, g: Path, f: Path) -> Path:
        return compose_paths(g, f)

    def identity(self, a: str) -> Path:
        return identity_path(a)


@dataclass(frozen=True)
class LocalisedHom:
    words: Tuple[ZigzagWord, ...]
    complete: bool


def _validate_sigma(quiver: Quiver, sigma: Iterable[str]) -> Tuple[str, ...]:
    names = {arrow.name for arrow in quiver.arrows}
    checked = []
    for idx, name in enumerate(sigma):
        if name not in names:
            raise QuiverFormatError(f"unknown arrow '{name}' in sigma", f"sigma[{idx}]")
        if name not in checked:
            checked.append(name)
    return tuple(checked)


class LocalisedCategory(FiniteCategory):
    """
    The localisation C[Σ⁻¹] of a path category, with morphisms the reduced
    zigzag words. Hom-sets are enumerated up to a length bound and flagged
    complete when no longer reduced word leaves the source vertex.
    """

    def __init__(self, quiver: Quiver, sigma: Iterable[str], length_bound: Optional[int] = None):
        self.quiver = quiver
        self.sigma = _validate_sigma(quiver, sigma)
        self.length_bound = Config.WORD_LENGTH_BOUND if length_bound is None else length_bound
        if self.length_bound < 1:
            raise ValueError("length_bound must be at least 1")
        self.hom_cache: Dict[Tuple[str, str], LocalisedHom] = {}
        self._reachable: Dict[str, Tuple[Dict[str, List[ZigzagWord]], bool]] = {}

    def letters_from(self, vertex: str) -> List[Letter]:
        letters = [Letter(arrow.name) for arrow in self.quiver.outgoing(vertex)]
        letters += [
            Letter(arrow.name, inverse=True)
            for arrow in self.quiver.incoming(vertex)
            if arrow.name in self.sigma
        ]
        return letters

    def _enumerate(self, a: str) -> Tuple[Dict[str, List[ZigzagWord]], bool]:
        if a in self._reachable:
            return self._reachable[a]
        by_target: Dict[str, List[ZigzagWord]] = {}
        frontier = deque([ZigzagWord(a, a, ())])
        complete = True
        while frontier:
            word = frontier.popleft()
            if len(word) > self.length_bound:
                complete = False
                continue
            by_target.setdefault(word.target, []).append(word)
            for letter in self.letters_from(word.target):
                if word.letters and _cancels(word.letters[-1], letter):
                    continue
                _, end = _endpoints(self.quiver, letter)
                frontier.append(ZigzagWord(a, end, word.letters + (letter,)))
        if not complete:
            logger.warning(
                "⚠️ Zigzag enumeration from %s did not stabilise within length %d", a, self.length_bound
            )
        self._reachable[a] = (by_target, complete)
        return self._reachable[a]

    def localised_hom(self, a: str, b: str) -> LocalisedHom:
        if (a, b) not in self.hom_cache:
            by_target, complete = self._enumerate(a)
            words = sorted(by_target.get(b, []), key=lambda w: word_key(self.quiver, w))
            self.hom_cache[(a, b)] = LocalisedHom(tuple(words), complete)
        return self.hom_cache[(a, b)]

    def objects(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    def hom(self, a: str, b: str) -> Tuple[ZigzagWord, ...]:
        result = self.localised_hom(a, b)
        if not result.complete:
            raise IncompleteLocalisationError(
                f"Hom({a}, {b}) in the localisation is not complete at length {self.length_bound}"
            )
        return result.words

    def compose(self, g: ZigzagWord, f: ZigzagWord) -> ZigzagWord:
        return reduce_word(compose_words(g, f))

    def identity(self, a: str) -> ZigzagWord:
        return ZigzagWord(a, a, ())

    def is_complete(self) -> bool:
        return all(self._enumerate(v)[1] for v in self.quiver.vertices)


def localised_hom(
    category: LocalisedCategory, a: str, b: str, length_bound: Optional[int] = None
) -> LocalisedHom:
    """
    Reduced words a → b of length at most length_bound

    Args:
        category: The localised category
        a: Source vertex
        b: Target vertex
        length_bound: Overrides the category's bound when given

    Returns:
        LocalisedHom with the sorted words and a completeness flag
    """
    if length_bound is None or length_bound == category.length_bound:
        return category.localised_hom(a, b)
    if length_bound < 1:
        raise ValueError("length_bound must be at least 1")
    return LocalisedCategory(category.quiver, category.sigma, length_bound).localised_hom(a, b)


@dataclass(frozen=True)
class LocalisationFunctor:
    """The canonical functor C → C[Σ⁻¹] on objects and paths"""

    source: PathCategory
    target: LocalisedCategory

    def on_object(self, vertex: str) -> str:
        return vertex

    def on_morphism(self, path: Path) -> ZigzagWord:
        return path_to_word(path)


# ---------------------------------------------------------------------------
# Quiver documents
# ---------------------------------------------------------------------------


class ArrowSpec(BaseModel):
    name: str
    src: str
    tgt: str


class QuiverDocument(BaseModel):
    vertices: List[str]
    arrows: List[ArrowSpec] = []
    sigma: List[str] = []


def quiver_to_document(quiver: Quiver, sigma: Sequence[str] = ()) -> QuiverDocument:
    return QuiverDocument(
        vertices=list(quiver.vertices),
        arrows=[ArrowSpec(name=a.name, src=a.source, tgt=a.target) for a in quiver.arrows],
        sigma=list(sigma),
    )


def quiver_from_document(document: QuiverDocument) -> Tuple[Quiver, Tuple[str, ...]]:
    quiver = Quiver(
        tuple(document.vertices),
        tuple(QuiverArrow(a.name, a.src, a.tgt) for a in document.arrows),
    )
    return quiver, _validate_sigma(quiver, document.sigma)


def parse_quiver_document(text: str) -> Tuple[Quiver, Tuple[str, ...]]:
    """
    Parse and validate a quiver document

    Args:
        text: JSON text with vertices, arrows and sigma

    Returns:
        The quiver and the validated sigma arrow names
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise QuiverFormatError(e.msg, f"line {e.lineno}, column {e.colno}") from e
    try:
        document = QuiverDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise QuiverFormatError(first["msg"], location) from e
    return quiver_from_document(document)


def load_quiver_document(path: Union[str, FilePath]) -> Tuple[Quiver, Tuple[str, ...]]:
    """Read a quiver document from disk"""
    file_path = FilePath(path)
    if not file_path.exists():
        raise QuiverFormatError(f"file not found: {file_path}")
    logger.info("📂 Loading quiver from %s", file_path)
    return parse_quiver_document(file_path.read_text(encoding="utf-8"))
