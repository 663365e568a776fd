import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

from pydantic import ValidationError
from sympy.combinatorics import Permutation
from sympy.utilities.iterables import partitions

from config import settings
from models.covering import ColoringHit, ColoringSearch, OrbitDecomposition, PermRep, format_cycles, parse_cycles
from models.presentation import Presentation
from services.exceptions import ColoringError, RelatorViolation, UnknownGenerator

logger = logging.getLogger(__name__)

Image = Union[str, Permutation, Sequence[int]]
Array = Tuple[int, ...]


def _as_permutation(name: str, image: Image, n: int) -> Permutation:
    if isinstance(image, Permutation):
        if image.size != n:
            raise ColoringError(f"Image of {name} has degree {image.size}, expected {n}")
        return image
    if isinstance(image, str):
        try:
            return parse_cycles(image, n)
        except ValueError as exc:
            raise ColoringError(f"Image of {name}: {exc}") from exc
    # one-line notation, 1-indexed
    values = [int(x) - 1 for x in image]
    if sorted(values) != list(range(n)):
        raise ColoringError(f"Image of {name} is not a permutation of 1..{n}")
    return Permutation(values)


def check_coloring(presentation: Presentation, images: Mapping[str, Image], n: int) -> PermRep:
    """Validate a coloring: every relator must evaluate to the identity."""
    if n < 1:
        raise ColoringError("Degree must be positive; the trivial covering has degree 1")
    for name in images:
        if name not in presentation.generator_names:
            raise UnknownGenerator(name)
    missing = [name for name in presentation.generator_names if name not in images]
    if missing:
        raise ColoringError(f"Missing image for generator {missing[0]}")

    perms = {name: _as_permutation(name, images[name], n) for name in presentation.generator_names}
    try:
        rep = PermRep(degree=n, images=perms, presentation=presentation)
    except ValidationError as exc:
        raise ColoringError(str(exc.errors()[0]['msg'])) from exc

    for index, word in enumerate(presentation.relators, start=1):
        value = rep.evaluate(word)
        if not value.is_Identity:
            raise RelatorViolation(index, format_cycles(value))
    return rep


def coloring_from_json(presentation: Presentation, data: Dict) -> PermRep:
    if 'degree' not in data or 'images' not in data:
        raise ColoringError("Coloring JSON needs 'degree' and 'images'")
    return check_coloring(presentation, data['images'], int(data['degree']))


def orbits(rep: PermRep) -> OrbitDecomposition:
    blocks = [sorted(point + 1 for point in orbit) for orbit in rep.group().orbits()]
    blocks.sort(key=lambda block: block[0])
    return OrbitDecomposition(blocks=blocks)


def branching_indices(rep: PermRep, generator: str) -> List[int]:
    """Cycle type of a meridian's image, longest cycles first."""
    structure = rep.image(generator).cycle_structure
    return sorted((length for length, count in structure.items() for _ in range(count)), reverse=True)


def restrict(rep: PermRep, points: Sequence[int]) -> PermRep:
    """Restriction of `rep` to an invariant set of 1-indexed points, relabeled in sorted order."""
    points = sorted(points)
    position = {p - 1: i for i, p in enumerate(points)}
    images = {}
    for name, image in rep.images.items():
        images[name] = Permutation([position[image(p - 1)] for p in points])
    return PermRep(degree=len(points), images=images, presentation=rep.presentation)


def _compose(p: Array, q: Array) -> Array:
    # apply p first, then q
    return tuple(q[i] for i in p)


def _inverse(p: Array) -> Array:
    inverse = [0] * len(p)
    for i, x in enumerate(p):
        inverse[x] = i
    return tuple(inverse)


def _conjugate(arrays: Sequence[Array], h: Array) -> Tuple[Array, ...]:
    result = []
    for sigma in arrays:
        image = [0] * len(sigma)
        for x, y in enumerate(sigma):
            image[h[x]] = h[y]
        result.append(tuple(image))
    return tuple(result)


def canonical_form(arrays: Sequence[Array], n: int) -> Tuple[Array, ...]:
    """Lexicographically least simultaneous conjugate of a tuple of permutations."""
    return min(_conjugate(arrays, h) for h in permutations(range(n)))


def _transitive_conjugate(first: Sequence[Array], second: Sequence[Array], n: int) -> bool:
    # the image of point 0 determines the rest of the conjugation
    for start in range(n):
        mapping, queue, consistent = {0: start}, [0], True
        while queue and consistent:
            x = queue.pop()
            for a, b in zip(first, second):
                y, z = a[x], b[mapping[x]]
                if y not in mapping:
                    mapping[y] = z
                    queue.append(y)
                elif mapping[y] != z:
                    consistent = False
                    break
        if consistent and len(set(mapping.values())) == n:
            return True
    return False


def _transitive_pieces(rep: PermRep) -> List[Tuple[int, Tuple[Array, ...]]]:
    return [(len(block), restrict(rep, block).array_images()) for block in orbits(rep).blocks]


def is_conjugate(first: PermRep, second: PermRep) -> bool:
    """True when one simultaneous conjugation carries every image of `first` to `second`.

    Orbits are matched one by one, each through a conjugation of its
    transitive piece.
    """
    if first.degree != second.degree or first.presentation.generator_names != second.presentation.generator_names:
        return False
    if first.array_images() == second.array_images():
        return True
    remaining = _transitive_pieces(second)
    for size, arrays in _transitive_pieces(first):
        match = next((i for i, (other_size, other) in enumerate(remaining)
                      if other_size == size and _transitive_conjugate(arrays, other, size)), None)
        if match is None:
            return False
        del remaining[match]
    return not remaining


def _class_representatives(n: int) -> List[Array]:
    reps = []
    for part in partitions(n):
        lengths = sorted((k for k, m in part.items() for _ in range(m)), reverse=True)
        array, start = list(range(n)), 0
        for length in lengths:
            for i in range(length):
                array[start + i] = start + (i + 1) % length
            start += length
        reps.append(tuple(array))
    return sorted(reps)


class ColoringSearcher:
    """Backtracking enumeration of colorings modulo simultaneous conjugation.

    Relators are checked as soon as all of their generators are assigned.
    The first generator is fixed to cycle-type representatives and each
    representative is explored as an independent branch.
    """

    def __init__(self, presentation: Presentation, n: int, transitive: bool = False,
                 nontrivial: bool = False, noncyclic: bool = False):
        if n < 1:
            raise ColoringError("Degree must be positive")
        self.presentation = presentation
        self.n = n
        self.transitive = transitive
        self.nontrivial = nontrivial
        self.noncyclic = noncyclic
        self.k = presentation.generator_count
        self.checks: List[List[Tuple[Tuple[int, int], ...]]] = [[] for _ in range(max(self.k, 1))]
        for word in presentation.relators:
            if word:
                letters = tuple((abs(x) - 1, 1 if x > 0 else -1) for x in word)
                self.checks[max(i for i, _ in letters)].append(letters)
        self.all_perms = list(permutations(range(n)))
        self.identity = tuple(range(n))

    def _satisfied(self, level: int, assigned: List[Array], inverses: List[Array]) -> bool:
        for letters in self.checks[level]:
            value = self.identity
            for index, sign in letters:
                value = _compose(value, assigned[index] if sign > 0 else inverses[index])
            if value != self.identity:
                return False
        return True

    def _accept(self, arrays: Tuple[Array, ...]) -> bool:
        if self.nontrivial and all(a == self.identity for a in arrays):
            return False
        if not (self.transitive or self.noncyclic):
            return True
        rep = self._rep(arrays)
        group = rep.group()
        if self.transitive and len(group.orbits()) != 1:
            return False
        if self.noncyclic and group.is_cyclic:
            return False
        return True

    def _rep(self, arrays: Sequence[Array]) -> PermRep:
        images = {name: Permutation(list(a)) for name, a in zip(self.presentation.generator_names, arrays)}
        return PermRep(degree=self.n, images=images, presentation=self.presentation)

    def _branch(self, first: Array, cap: int) -> Tuple[Set[Tuple[Array, ...]], bool]:
        found: Set[Tuple[Array, ...]] = set()
        assigned: List[Array] = [first]
        inverses: List[Array] = [_inverse(first)]
        if not self._satisfied(0, assigned, inverses):
            return found, False

        def extend(level: int) -> bool:
            if level == self.k:
                arrays = tuple(assigned)
                key = canonical_form(arrays, self.n)
                if key not in found and self._accept(arrays):
                    found.add(key)
                return len(found) >= cap
            for perm in self.all_perms:
                assigned.append(perm)
                inverses.append(_inverse(perm))
                if self._satisfied(level, assigned, inverses) and extend(level + 1):
                    return True
                assigned.pop()
                inverses.pop()
            return False

        hit_cap = extend(1)
        return found, hit_cap

    def run(self, cap: int) -> ColoringSearch:
        if self.k == 0:
            keys = {()} if self._accept(()) else set()
            return self._collect(keys, False, cap)

        keys: Set[Tuple[Array, ...]] = set()
        truncated = False
        workers = max(1, settings.search_workers)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_rep = {
                executor.submit(self._branch, rep, cap): rep
                for rep in _class_representatives(self.n)
            }
            for future in as_completed(future_to_rep):
                branch_keys, hit_cap = future.result()
                keys.update(branch_keys)
                truncated = truncated or hit_cap
        return self._collect(keys, truncated, cap)

    def _collect(self, keys: Set[Tuple[Array, ...]], truncated: bool, cap: int) -> ColoringSearch:
        ordered = sorted(keys)
        if len(ordered) > cap:
            ordered, truncated = ordered[:cap], True
        hits = []
        for arrays in ordered:
            rep = self._rep(arrays)
            hits.append(ColoringHit(rep=rep, orbit_count=orbits(rep).count))
        return ColoringSearch(degree=self.n, hits=hits, truncated=truncated)


def search_colorings(presentation: Presentation, n: int, transitive: bool = False, nontrivial: bool = False,
                     noncyclic: bool = False, cap: Optional[int] = None) -> ColoringSearch:
    """All colorings of degree n up to simultaneous conjugation, sorted by canonical form."""
    cap = settings.search_cap if cap is None else cap
    if cap < 1:
        raise ColoringError("Search cap must be positive")
    searcher = ColoringSearcher(presentation, n, transitive=transitive, nontrivial=nontrivial, noncyclic=noncyclic)
    result = searcher.run(cap)
    if result.truncated:
        logger.warning(f"Coloring search at degree {n} truncated at {cap} classes")
    logger.info(f"Coloring search at degree {n}: {result.count} classes")
    return result
