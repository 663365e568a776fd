"""
Correspondences and their composition by fibered product.

The fibered product of two coverings of the middle sphere is computed on
the generic fiber: sheets are pairs (i, j) of sheets of the two middle
coverings, every middle generator acts diagonally, and the components of
the composite are the orbits of this product action.
"""
import logging
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

from pydantic import ValidationError
from sympy.combinatorics import Permutation

from models.correspondence import (
    AssociativityReport,
    CompositeComponent,
    CompositeCorrespondence,
    Correspondence,
    CorrespondenceHeader,
    CoveringSide,
    MiddleDiagram,
    transpose_label,
)
from models.covering import PermRep, identity
from models.presentation import Presentation
from services.coloring_service import branching_indices, check_coloring, orbits, restrict
from services.exceptions import (
    ColoringError,
    CompositionError,
    CorrespondenceError,
    RelatorViolation,
    UnknownGenerator,
)
from services.union_find import find_orbits

logger = logging.getLogger(__name__)

UNKNOT = Presentation(label='O', generator_count=1, relators=[], component_of_generator={1: 'K1'})
EMPTY = Presentation(label='', generator_count=0)

Extension = Union[PermRep, Mapping]


def make_side(rep: PermRep, marked: Optional[Iterable[str]] = None, branch_locus: Optional[str] = None) -> CoveringSide:
    marked = rep.presentation.components if marked is None else marked
    locus = rep.presentation.label if branch_locus is None else branch_locus
    try:
        return CoveringSide(rep=rep, branch_locus=locus, marked_subgraph=frozenset(marked))
    except ValidationError as exc:
        raise CorrespondenceError(f"Inconsistent marked subgraph: {exc.errors()[0]['msg']}") from exc


def make_correspondence(left: CoveringSide, right: CoveringSide, label: str,
                        source_graph: Optional[str] = None, target_graph: Optional[str] = None) -> Correspondence:
    for name, side in (('left', left), ('right', right)):
        if side.degree < 1:
            raise CorrespondenceError(f"The {name} side has degree {side.degree}; degrees must be positive")
        unknown = set(side.marked_subgraph) - set(side.presentation.components)
        if unknown:
            raise CorrespondenceError(f"Inconsistent marked subgraph on the {name} side: {sorted(unknown)}")
    try:
        return Correspondence(
            label=label,
            left=left,
            right=right,
            source_graph=source_graph or left.graph_label(),
            target_graph=target_graph or right.graph_label(),
        )
    except ValidationError as exc:
        raise CorrespondenceError(str(exc.errors()[0]['msg'])) from exc


def unit(graph_label: str) -> Correspondence:
    """Trivial unbranched covering of degree 1 on both sides."""
    side = CoveringSide(rep=PermRep(degree=1, images={}, presentation=EMPTY))
    return Correspondence(label=f"U({graph_label})", left=side, right=side,
                          source_graph=graph_label, target_graph=graph_label)


def cyclic_cover(n: int, graph_label: str = 'O', presentation: Presentation = UNKNOT) -> Correspondence:
    """M(n): the n-fold cyclic cover branched over a knot, as a symmetric correspondence."""
    if n < 1:
        raise CorrespondenceError("Cyclic covers need positive degree")
    cycle = '(' + ' '.join(str(i) for i in range(1, n + 1)) + ')'
    rep = check_coloring(presentation, {name: cycle for name in presentation.generator_names}, n)
    side = make_side(rep)
    return make_correspondence(side, side, f"M({n})", graph_label, graph_label)


def transpose(c: Correspondence) -> Correspondence:
    """Swap the two sides; a correspondence with identical sides is its own transpose."""
    if c.is_symmetric:
        return c
    return Correspondence(
        label=transpose_label(c.label),
        left=c.right,
        right=c.left,
        source_graph=c.target_graph,
        target_graph=c.source_graph,
        formal_left=c.formal_right,
        formal_right=c.formal_left,
        left_chain=c.right_chain,
        right_chain=c.left_chain,
    )


def compose_headers(first: CorrespondenceHeader, second: CorrespondenceHeader,
                    label: Optional[str] = None) -> CorrespondenceHeader:
    """Degree and branch-locus bookkeeping of a composite."""
    if first.target_graph != second.source_graph:
        raise CompositionError(
            f"Cannot compose {first.label} -> {second.label}: target '{first.target_graph}' "
            f"differs from source '{second.source_graph}'"
        )
    return CorrespondenceHeader(
        label=label or f"{first.label}∘{second.label}",
        left_degree=first.left_degree * second.left_degree,
        right_degree=first.right_degree * second.right_degree,
        source_graph=first.source_graph,
        target_graph=second.target_graph,
        formal_left=first.formal_left.union(second.formal_left.transported(first.left_chain)),
        formal_right=second.formal_right.union(first.formal_right.transported(second.right_chain)),
        left_chain=second.left_chain + first.left_chain,
        right_chain=first.right_chain + second.right_chain,
    )


def shared_middle(c1: Correspondence, c2: Correspondence) -> MiddleDiagram:
    """Middle diagram when no extra geometry is needed: a unit factor or a shared middle locus."""
    p1, p2 = c1.right.presentation, c2.left.presentation
    if p2.generator_count == 0:
        return MiddleDiagram(presentation=p1, side1=list(p1.generator_names))
    if p1.generator_count == 0:
        return MiddleDiagram(presentation=p2, side2=list(p2.generator_names))
    if c1.right.branch_locus == c2.left.branch_locus and p1 == p2:
        names = list(p1.generator_names)
        return MiddleDiagram(presentation=p1, side1=names, side2=names)
    raise CompositionError(
        f"A middle diagram is required to compose {c1.label} with {c2.label}: "
        f"loci '{c1.right.branch_locus}' and '{c2.left.branch_locus}' differ"
    )


def _extension(mid: MiddleDiagram, side_map: Dict[str, str], side: CoveringSide, supplied: Optional[Extension],
               which: str) -> PermRep:
    degree = side.degree
    expected = {}
    for mid_name, name in side_map.items():
        try:
            expected[mid_name] = side.rep.image(name)
        except UnknownGenerator:
            raise CompositionError(f"Side partition inconsistent: '{name}' is not a generator of the {which} factor")
    if supplied is None:
        images, n = {g: expected.get(g, identity(degree)) for g in mid.presentation.generator_names}, degree
    elif isinstance(supplied, PermRep):
        images, n = supplied.images, supplied.degree
    else:
        images, n = supplied.get('images', {}), int(supplied.get('degree', degree))
    if n != degree:
        raise CompositionError(f"The {which} extension has degree {n}, expected {degree}")
    try:
        rep = check_coloring(mid.presentation, images, n)
    except RelatorViolation as exc:
        raise CompositionError(f"The {which} extension fails relator check: {exc.detail}") from exc
    except (ColoringError, UnknownGenerator) as exc:
        raise CompositionError(f"The {which} extension is invalid: {exc.detail}") from exc
    for g in mid.presentation.generator_names:
        image = rep.image(g)
        if g in expected and image != expected[g]:
            raise CompositionError(f"Side partition inconsistent: the {which} extension moves {g} differently from the factor")
        if g not in expected and not image.is_Identity:
            raise CompositionError(f"Side partition inconsistent: the {which} extension must fix the other side's arc {g}")
    return rep


def _product_rep(first: PermRep, second: PermRep) -> PermRep:
    width = second.degree
    images = {}
    for name in first.presentation.generator_names:
        a, b = first.images[name], second.images[name]
        images[name] = Permutation([a(i) * width + b(j) for i in range(first.degree) for j in range(width)])
    return PermRep(degree=first.degree * width, images=images, presentation=first.presentation)


class _Part(NamedTuple):
    """Connected piece of a factor with its outer and middle sheets, 1-indexed."""

    correspondence: Correspondence
    outer: List[int]
    middle: List[int]


def _restricted_side(side: CoveringSide, block: List[int]) -> CoveringSide:
    return side.model_copy(update={'rep': restrict(side.rep, block)})


def connected_parts(c: Correspondence, middle_side: str) -> List[_Part]:
    """Split c along the orbits of the side facing the middle sphere.

    For a symmetric correspondence both sides share the orbits. Otherwise the
    k-th orbit of each side, ordered by smallest sheet, is the same component
    of the manifold, so both sides need the same number of orbits.
    """
    outer_side = 'left' if middle_side == 'right' else 'right'
    middle_rep = getattr(c, middle_side).rep
    middle_blocks = orbits(middle_rep).blocks
    outer_rep = getattr(c, outer_side).rep
    if len(middle_blocks) == 1:
        return [_Part(c, list(range(1, outer_rep.degree + 1)), middle_blocks[0])]
    if c.is_symmetric:
        outer_blocks = middle_blocks
    else:
        outer_blocks = orbits(outer_rep).blocks
        if len(outer_blocks) != len(middle_blocks):
            raise CompositionError(
                f"{c.label} has {len(middle_blocks)} components over the middle sphere "
                f"but {len(outer_blocks)} over the outer one"
            )
    parts = []
    for k, (outer, middle) in enumerate(zip(outer_blocks, middle_blocks), start=1):
        update = {
            'label': f"{c.label}[{k}]",
            outer_side: _restricted_side(getattr(c, outer_side), outer),
            middle_side: _restricted_side(getattr(c, middle_side), middle),
        }
        parts.append(_Part(c.model_copy(update=update), outer, middle))
    logger.info(f"{c.label} splits into {len(parts)} components over the middle sphere")
    return parts


def _part_of(parts: List[_Part], sheet: int) -> _Part:
    return next(part for part in parts if sheet in part.middle)


def _lift(c1: Correspondence, c2: Correspondence, mid: MiddleDiagram, middle_rep: PermRep, whole: bool,
          label: str, header: CorrespondenceHeader) -> Optional[Correspondence]:
    bookkeeping = dict(formal_left=header.formal_left, formal_right=header.formal_right,
                       left_chain=header.left_chain, right_chain=header.right_chain)
    if c2.is_unit and whole:
        return c1.model_copy(update={'label': label, **bookkeeping})
    if c1.is_unit and whole:
        return c2.model_copy(update={'label': label, **bookkeeping})
    names = mid.presentation.generator_names
    shared = (mid.presentation == c1.right.presentation == c2.left.presentation
              and mid.side1 == mid.side2 == {g: g for g in names})
    if c1.is_symmetric and c2.is_symmetric and shared:
        side = CoveringSide(
            rep=middle_rep,
            branch_locus=c1.right.branch_locus,
            marked_subgraph=c1.right.marked_subgraph | c2.left.marked_subgraph,
        )
        return Correspondence(label=label, left=side, right=side, source_graph=c1.source_graph,
                              target_graph=c2.target_graph, **bookkeeping)
    return None


def compose(c1: Correspondence, c2: Correspondence, mid: Optional[MiddleDiagram] = None,
            left_extension: Optional[Extension] = None, right_extension: Optional[Extension] = None) -> CompositeCorrespondence:
    """Fibered product c1 ∘ c2 as orbits of the product action on the middle sheets.

    A factor that is disconnected over the middle sphere composes
    componentwise: every orbit lies over one connected part of each factor,
    whose degrees fix the outer degrees of the orbit.
    """
    header = compose_headers(c1.header, c2.header)
    if mid is None:
        mid = shared_middle(c1, c2)
    parts1 = connected_parts(c1, 'right')
    parts2 = connected_parts(c2, 'left')

    ext1 = _extension(mid, mid.side1, c1.right, left_extension, 'left')
    ext2 = _extension(mid, mid.side2, c2.left, right_extension, 'right')
    m, m_tilde = ext1.degree, ext2.degree
    product = _product_rep(ext1, ext2)

    arrays = [tuple(p.array_form) for p in product.ordered_images()]
    blocks = find_orbits(arrays, range(m * m_tilde), lambda g, x: g[x])
    components = []
    for k, block in enumerate(blocks, start=1):
        label = f"{c1.label}∘{c2.label}#{k}"
        size = len(block)
        sheets = [(x // m_tilde + 1, x % m_tilde + 1) for x in block]
        part1 = _part_of(parts1, sheets[0][0])
        part2 = _part_of(parts2, sheets[0][1])
        left_degree, left_rest = divmod(len(part1.outer) * size, len(part1.middle))
        right_degree, right_rest = divmod(len(part2.outer) * size, len(part2.middle))
        if left_rest or right_rest:
            raise CompositionError(f"Component {label} has non-integral outer degree")
        middle_rep = restrict(product, [x + 1 for x in block])
        whole = size == len(part1.middle) * len(part2.middle)
        components.append(CompositeComponent(
            label=label,
            middle_rep=middle_rep,
            sheets=sheets,
            left_degree=left_degree,
            right_degree=right_degree,
            correspondence=_lift(part1.correspondence, part2.correspondence, mid, middle_rep, whole, label, header),
        ))

    warnings = []
    cyclic_split = False
    if (len(components) > 1 and c1.is_symmetric and c2.is_symmetric
            and c1.right.rep.group().is_cyclic and c2.left.rep.group().is_cyclic):
        cyclic_split = True
        sizes = sorted({c.middle_degree for c in components})
        warnings.append(
            f"{header.label} splits into {len(components)} components of middle degree "
            f"{', '.join(map(str, sizes))} rather than one cyclic cover of degree {m * m_tilde}"
        )
        logger.warning(warnings[-1])

    composite = CompositeCorrespondence(
        label=header.label,
        left_label=c1.label,
        right_label=c2.label,
        middle=mid,
        middle_degrees=(m, m_tilde),
        components=components,
        outer_left_degree=header.left_degree,
        outer_right_degree=header.right_degree,
        source_graph=header.source_graph,
        target_graph=header.target_graph,
        formal_left=header.formal_left,
        formal_right=header.formal_right,
        left_chain=header.left_chain,
        right_chain=header.right_chain,
        cyclic_split=cyclic_split,
        warnings=warnings,
    )
    logger.info(f"Composed {header.label}: {len(components)} components, outer degrees {outer_multiplicities(composite)}")
    return composite


def outer_multiplicities(cc: CompositeCorrespondence) -> Tuple[int, int]:
    return cc.outer_left_degree, cc.outer_right_degree


def component_branching_indices(component: CompositeComponent, generator: str) -> List[int]:
    """Branching indices of a composite component over the middle sphere."""
    return branching_indices(component.middle_rep, generator)


def _bracket(first: Correspondence, second: Correspondence, mid_first: Optional[MiddleDiagram],
             mid_second: Optional[MiddleDiagram], third: Correspondence, left_first: bool,
             skipped: List[str]) -> Optional[List[Tuple[int, int]]]:
    """Outer degrees of the final components of one bracketing, through lifted components."""
    inner = compose(first, second, mid_first)
    degrees = []
    for component in inner.components:
        if component.correspondence is None:
            skipped.append(f"{component.label} cannot be lifted to a correspondence")
            return None
        pair = (component.correspondence, third) if left_first else (third, component.correspondence)
        outer = compose(pair[0], pair[1], mid_second)
        degrees.extend((c.left_degree, c.right_degree) for c in outer.components)
    return sorted(degrees)


def _triple_orbit_sizes(c1: Correspondence, c2: Correspondence, c3: Correspondence) -> Optional[List[int]]:
    reps = [c1.right.rep, c2.left.rep, c3.left.rep]
    if not all(c.is_symmetric for c in (c1, c2, c3)):
        return None
    if not (reps[0].presentation == reps[1].presentation == reps[2].presentation):
        return None
    a, b, c = (r.degree for r in reps)
    arrays = [tuple(tuple(p.array_form) for p in r.ordered_images()) for r in reps]
    gens = list(zip(*arrays))
    space = [(i, j, k) for i in range(a) for j in range(b) for k in range(c)]
    blocks = find_orbits(gens, space, lambda g, x: (g[0][x[0]], g[1][x[1]], g[2][x[2]]))
    return sorted(len(block) for block in blocks)


def associativity_check(c1: Correspondence, c2: Correspondence, c3: Correspondence,
                        mids: Optional[Dict[str, MiddleDiagram]] = None) -> AssociativityReport:
    """Compare both bracketings on degrees, formal loci and the degrees of their components.

    `mids` may carry middle diagrams under the keys "12", "(12)3", "23" and "1(23)".
    """
    mids = mids or {}
    mismatches: List[str] = []
    skipped: List[str] = []

    left = compose_headers(compose_headers(c1.header, c2.header), c3.header)
    right = compose_headers(c1.header, compose_headers(c2.header, c3.header))
    if (left.left_degree, left.right_degree) != (right.left_degree, right.right_degree):
        mismatches.append(f"outer degrees {(left.left_degree, left.right_degree)} != {(right.left_degree, right.right_degree)}")
    if left.formal_left != right.formal_left:
        mismatches.append(f"left loci {left.formal_left.render()} != {right.formal_left.render()}")
    if left.formal_right != right.formal_right:
        mismatches.append(f"right loci {left.formal_right.render()} != {right.formal_right.render()}")

    bracket_left = _bracket(c1, c2, mids.get('12'), mids.get('(12)3'), c3, True, skipped)
    bracket_right = _bracket(c2, c3, mids.get('23'), mids.get('1(23)'), c1, False, skipped)
    component_degrees = {}
    if bracket_left is not None and bracket_right is not None:
        component_degrees = {'(12)3': bracket_left, '1(23)': bracket_right}
        if bracket_left != bracket_right:
            mismatches.append(f"component degrees {bracket_left} != {bracket_right}")

    oracle = _triple_orbit_sizes(c1, c2, c3)
    if oracle is not None and bracket_left is not None:
        if sorted(d for d, _ in bracket_left) != oracle:
            mismatches.append(f"component degrees {bracket_left} disagree with sheet orbits {oracle}")

    report = AssociativityReport(
        passed=not mismatches,
        mismatches=mismatches,
        degrees={'(12)3': (left.left_degree, left.right_degree), '1(23)': (right.left_degree, right.right_degree)},
        loci={
            '(12)3': {'left': left.formal_left.render(), 'right': left.formal_right.render()},
            '1(23)': {'left': right.formal_left.render(), 'right': right.formal_right.render()},
        },
        component_degrees=component_degrees,
        sheet_oracle=oracle,
        skipped=skipped,
    )
    if mismatches:
        logger.warning(f"Associativity check failed for {c1.label}, {c2.label}, {c3.label}: {mismatches}")
    return report
