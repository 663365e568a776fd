"""
PD-code parsing and Wirtinger presentations of link complements.

PD labels name edges of the diagram, numbered consecutively along each
component in the direction of its orientation. A crossing X(a,b,c,d)
lists the incoming under-edge first and then the remaining edges
counterclockwise, so the under-strand runs from a to c and the
over-strand joins b and d.
"""
import logging
import re
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence

from pydantic import ValidationError

from models.presentation import Crossing, Diagram, Presentation
from services.exceptions import DiagramError, PresentationError
from services.union_find import UnionFind

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r'X\s*[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]')
_WRAPPER = re.compile(r'^\s*PD\s*[\(\[](.*)[\)\]]\s*$', re.DOTALL)


def _tokenize(text: str) -> List[tuple]:
    wrapped = _WRAPPER.match(text)
    if wrapped:
        text = wrapped.group(1)
    tokens = [tuple(int(x) for x in m.groups()) for m in _TOKEN.finditer(text)]
    leftover = _TOKEN.sub(' ', text).replace(',', ' ').strip()
    if leftover:
        raise DiagramError(f"Malformed PD token near '{leftover.split()[0][:24]}'")
    return tokens


def _successor_map(components: List[List[int]]) -> Dict[int, int]:
    successor = {}
    for edges in components:
        lo, hi = edges[0], edges[-1]
        if edges != list(range(lo, hi + 1)):
            raise DiagramError(f"Edges {edges} of one component are not numbered consecutively")
        for e in edges:
            successor[e] = e + 1 if e < hi else lo
    return successor


def parse_pd(text: str, unknot_components: int = 0) -> Diagram:
    """Parse PD text into a validated Diagram.

    Crossingless unknotted components cannot be expressed in PD notation and
    are declared through `unknot_components`; each contributes one arc.
    """
    if unknot_components < 0:
        raise DiagramError("unknot_components must be non-negative")
    tokens = _tokenize(text or '')
    if not tokens and unknot_components == 0:
        raise DiagramError("Empty diagram; declare crossingless components with unknot_components")

    counts = Counter(label for token in tokens for label in token)
    for token in tokens:
        if len(set(token)) != 4:
            raise DiagramError(f"Inconsistent arc incidence in X{token}: a label repeats inside one crossing")
    for label, count in sorted(counts.items()):
        if count != 2:
            raise DiagramError(f"Edge {label} appears {count} times; every edge must appear exactly twice")
    edge_count = len(counts)
    if counts and (min(counts) != 1 or max(counts) != edge_count):
        out = min(counts) if min(counts) != 1 else max(counts)
        raise DiagramError(f"Edge index {out} out of range 1..{edge_count}")

    under_ends = Counter(token[0] for token in tokens)
    under_starts = Counter(token[2] for token in tokens)
    if any(v > 1 for v in under_ends.values()) or any(v > 1 for v in under_starts.values()):
        raise DiagramError("Inconsistent arc incidence: an edge enters (or leaves) two under-crossings")

    strands = UnionFind(counts)
    for a, b, c, d in tokens:
        strands.union(a, c)
        strands.union(b, d)
    successor = _successor_map(strands.groups())

    crossings = []
    ends, starts = Counter(under_ends), Counter(under_starts)
    for a, b, c, d in tokens:
        if successor[a] != c:
            raise DiagramError(f"Under-strand of X({a},{b},{c},{d}) does not continue from edge {a} to {c}")
        options = [(x, y) for x, y in ((b, d), (d, b)) if successor[x] == y]
        if not options:
            raise DiagramError(f"Over-strand of X({a},{b},{c},{d}) joins non-consecutive edges")
        if len(options) > 1:
            options = [(x, y) for x, y in options if x not in under_ends and y not in under_starts] or options
        over_in, over_out = options[0]
        ends[over_in] += 1
        starts[over_out] += 1
        crossings.append(Crossing(a=a, b=b, c=c, d=d, over_in=over_in, over_out=over_out))
    if any(ends[e] != 1 or starts[e] != 1 for e in counts):
        raise DiagramError("Inconsistent arc incidence: edge orientations do not close up")

    arcs = UnionFind(counts)
    for crossing in crossings:
        arcs.union(crossing.over_in, crossing.over_out)
    arc_groups = arcs.groups()
    arc_of_edge = {e: i for i, group in enumerate(arc_groups, start=1) for e in group}

    component_of_edge = {}
    for k, group in enumerate(strands.groups(), start=1):
        for e in group:
            component_of_edge[e] = f'K{k}'
    component_of_arc = {arc_of_edge[group[0]]: component_of_edge[group[0]] for group in arc_groups}

    offset = len(strands.groups())
    for extra in range(1, unknot_components + 1):
        component_of_arc[len(arc_groups) + extra] = f'K{offset + extra}'

    diagram = Diagram(
        crossings=crossings,
        edge_count=edge_count,
        arc_of_edge=arc_of_edge,
        arc_count=len(component_of_arc),
        component_of_arc=component_of_arc,
    )
    logger.info(f"Parsed PD diagram: {diagram.crossing_count} crossings, {edge_count} edges, {diagram.arc_count} arcs")
    return diagram


def wirtinger(diagram: Diagram, label: str = '') -> Presentation:
    """One generator per arc, one relator g_over^e g_in g_over^-e g_out^-1 per crossing."""
    relators = []
    for crossing in diagram.crossings:
        over = diagram.arc_of_edge[crossing.over_in]
        incoming = diagram.arc_of_edge[crossing.a]
        outgoing = diagram.arc_of_edge[crossing.c]
        e = crossing.sign
        relators.append((e * over, incoming, -e * over, -outgoing))
    presentation = Presentation(
        label=label,
        generator_count=diagram.arc_count,
        generator_names=[f'g{i}' for i in range(1, diagram.arc_count + 1)],
        relators=relators,
        component_of_generator=dict(diagram.component_of_arc),
    )
    # Free reduction may shorten relators at crossings whose three arcs coincide.
    logger.info(f"Wirtinger presentation: {presentation.generator_count} generators, {len(presentation.relators)} relators")
    return presentation


def explicit_presentation(
    gens: int,
    relators: Iterable[Sequence[int]],
    components: Optional[Dict] = None,
    label: str = '',
    names: Optional[List[str]] = None,
) -> Presentation:
    """Presentation supplied directly, e.g. for embedded graphs."""
    data = {'label': label, 'generators': gens, 'relators': [list(w) for w in relators]}
    if components is not None:
        data['components'] = components
    if names is not None:
        data['names'] = names
    try:
        return Presentation.model_validate(data)
    except ValidationError as exc:
        raise PresentationError(_first_message(exc)) from exc


def presentation_from_json(data: Dict) -> Presentation:
    try:
        return Presentation.model_validate(data)
    except ValidationError as exc:
        raise PresentationError(_first_message(exc)) from exc


def _first_message(exc: ValidationError) -> str:
    error = exc.errors()[0]
    return str(error.get('msg', exc)).removeprefix('Value error, ')
