import re
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy.combinatorics import Permutation, PermutationGroup

from models.presentation import Presentation

_CYCLE = re.compile(r'\(([^()]*)\)')


def identity(n: int) -> Permutation:
    return Permutation(list(range(n)))


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse 1-indexed cycle notation such as "(1 2)(3 4)"; fixed points may be omitted."""
    if _CYCLE.sub('', text).strip():
        raise ValueError(f"malformed cycle notation '{text}'")
    cycles: List[List[int]] = []
    seen = set()
    for body in _CYCLE.findall(text):
        points = [int(token) for token in body.replace(',', ' ').split()]
        for point in points:
            if not 1 <= point <= n:
                raise ValueError(f"point {point} outside 1..{n} in '{text}'")
            if point in seen:
                raise ValueError(f"point {point} repeated in '{text}'")
            seen.add(point)
        if len(points) > 1:
            cycles.append([point - 1 for point in points])
    if not cycles:
        return identity(n)
    return Permutation(cycles, size=n)


def format_cycles(p: Permutation) -> str:
    """1-indexed cycle notation, each cycle starting at its smallest point; identity is "()"."""
    cycles = []
    for cycle in p.cyclic_form:
        start = cycle.index(min(cycle))
        cycles.append(cycle[start:] + cycle[:start])
    cycles.sort(key=lambda c: c[0])
    return ''.join('(' + ' '.join(str(x + 1) for x in c) + ')' for c in cycles) or '()'


class PermRep(BaseModel):
    """Degree-n permutation image for every generator of a presentation.

    Built through `services.coloring_service.check_coloring`, which verifies
    the relators; words are evaluated left to right.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    degree: int = Field(..., ge=1)
    images: Dict[str, Permutation]
    presentation: Presentation

    @model_validator(mode='after')
    def check_images(self):
        names = self.presentation.generator_names
        if set(self.images) != set(names):
            raise ValueError("images must cover exactly the presentation's generators")
        for name, image in self.images.items():
            if image.size != self.degree:
                raise ValueError(f"image of {name} has degree {image.size}, expected {self.degree}")
        return self

    def image(self, name: str) -> Permutation:
        if name not in self.images:
            from services.exceptions import UnknownGenerator

            raise UnknownGenerator(name)
        return self.images[name]

    def evaluate(self, word: Sequence[int]) -> Permutation:
        result = identity(self.degree)
        for letter in word:
            image = self.images[self.presentation.name_of(letter)]
            result = result * (image if letter > 0 else ~image)
        return result

    def ordered_images(self) -> List[Permutation]:
        return [self.images[name] for name in self.presentation.generator_names]

    def array_images(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(p.array_form) for p in self.ordered_images())

    def group(self) -> PermutationGroup:
        return PermutationGroup(self.ordered_images() or [identity(self.degree)])

    @property
    def is_trivial(self) -> bool:
        return all(p.is_Identity for p in self.images.values())

    def coloring_json(self) -> Dict:
        return {
            'degree': self.degree,
            'images': {name: format_cycles(self.images[name]) for name in self.presentation.generator_names},
        }

    def same_images(self, other: 'PermRep') -> bool:
        return self.degree == other.degree and self.array_images() == other.array_images()

    def __eq__(self, other):
        if not isinstance(other, PermRep):
            return NotImplemented
        return self.presentation == other.presentation and self.same_images(other)

    def __repr__(self):
        return f"<PermRep degree={self.degree} {self.coloring_json()['images']}>"


class OrbitDecomposition(BaseModel):
    """Orbits of the image subgroup on 1..n, each sorted, ordered by smallest point."""

    blocks: List[List[int]]

    @model_validator(mode='after')
    def check_partition(self):
        points = sorted(p for block in self.blocks for p in block)
        if points != list(range(1, len(points) + 1)):
            raise ValueError("blocks must partition 1..n")
        return self

    @property
    def count(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> List[int]:
        return [len(block) for block in self.blocks]

    @property
    def is_connected(self) -> bool:
        return len(self.blocks) == 1


class ColoringHit(BaseModel):
    rep: PermRep
    orbit_count: int


class ColoringSearch(BaseModel):
    degree: int
    hits: List[ColoringHit] = Field(default_factory=list)
    truncated: bool = False

    @property
    def count(self) -> int:
        return len(self.hits)
