"""
Declared equivalences of correspondences and the algebra of 2-cells.

Cobordisms are never built here: classes and cells are opaque records
supplied by the caller, with degrees and additive invariants as payload.
"""
import cmath
import logging
import math
from collections import Counter
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from models.cobordism import (
    BoundaryInvariantTable,
    CellProduct,
    CellTable,
    EquivalenceDeclaration,
    EquivalenceKind,
    QuotientTable,
    TwoCell,
)
from models.table import AlgebraElement, CompositionTable, LabelInfo
from services.exceptions import (
    CellCompositionError,
    DegreeMismatch,
    EndpointMismatch,
    IllDefinedComposition,
    MissingInvariant,
    TableError,
    TruncationEscape,
)
from services.union_find import UnionFind

logger = logging.getLogger(__name__)

DAGGER = '†'


def _representative_of(members: Iterable[str]) -> str:
    return min(members, key=lambda label: (len(label), label))


def declare_equivalence(pairs: Sequence[Tuple[str, str]], table: CompositionTable,
                        kind: EquivalenceKind = EquivalenceKind.COBORDISM) -> EquivalenceDeclaration:
    """Merge declared pairs; members of a class must share degrees and endpoint graphs."""
    kind = EquivalenceKind(kind)
    uf = UnionFind()
    for a, b in pairs:
        left, right = table.info(a), table.info(b)
        if (left.n, left.m) != (right.n, right.m):
            raise DegreeMismatch(
                f"{a} has degrees {(left.n, left.m)} but {b} has {(right.n, right.m)}",
                pair=[a, b],
            )
        if (left.source, left.target) != (right.source, right.target):
            raise EndpointMismatch(
                f"{a} lies over {(left.source, left.target)} but {b} over {(right.source, right.target)}",
                pair=[a, b],
            )
        uf.add(a)
        uf.add(b)
        uf.union(a, b)
    classes = {_representative_of(group): group for group in uf.groups() if len(group) > 1}
    logger.info(f"Declared {len(classes)} {kind.value} classes from {len(pairs)} pairs")
    return EquivalenceDeclaration(kind=kind, classes=classes)


def declaration_from_json(data: Mapping, table: CompositionTable) -> EquivalenceDeclaration:
    pairs = []
    for entry in data.get('equiv', []):
        if len(entry) != 2:
            raise TableError(f"Equivalence entries are label pairs, got {entry!r}")
        pairs.append((str(entry[0]), str(entry[1])))
    return declare_equivalence(pairs, table, kind=data.get('kind', EquivalenceKind.COBORDISM))


def _class_transpose(label: str, info: LabelInfo, decl: EquivalenceDeclaration,
                     table: CompositionTable) -> Optional[str]:
    transposes = set()
    for member in decl.members(label):
        partner = table.info(member).transpose
        if partner is not None and table.has(partner):
            transposes.add(decl.representative(partner))
    if len(transposes) > 1:
        raise IllDefinedComposition(
            f"Members of [{label}] have transposes in different classes",
            witness={'class': label, 'transposes': sorted(transposes)},
        )
    return transposes.pop() if transposes else None


def validate_quotient(decl: EquivalenceDeclaration, table: CompositionTable) -> QuotientTable:
    """Class-level table; every member pair of two classes must compose to one class multiset.

    A composable member pair without an entry next to one that has an entry
    is ill-defined as well; class pairs with no entries at all stay open.
    """
    rep = decl.representative
    labels: Dict[str, LabelInfo] = {}
    for label in table.labels:
        r = rep(label)
        if r in labels:
            continue
        info = table.info(r)
        labels[r] = info.model_copy(update={'transpose': _class_transpose(r, info, decl, table)})

    entries: Dict[str, List[str]] = {}
    witnesses: Dict[str, Tuple[str, str]] = {}
    for a, b, components in table.pairs():
        key = CompositionTable.key(rep(a), rep(b))
        image = sorted(rep(c) for c in components)
        if key not in entries:
            entries[key] = image
            witnesses[key] = (a, b)
        elif Counter(entries[key]) != Counter(image):
            first = witnesses[key]
            raise IllDefinedComposition(
                f"{first[0]}∘{first[1]} and {a}∘{b} land in different classes",
                witness={
                    'pairs': [list(first), [a, b]],
                    'classes': [entries[key], image],
                },
            )

    for key, (a0, b0) in witnesses.items():
        for a in decl.members(a0):
            for b in decl.members(b0):
                if table.composable(a, b) and CompositionTable.key(a, b) not in table.entries:
                    raise IllDefinedComposition(
                        f"{a0}∘{b0} has an entry but {a}∘{b} has none",
                        witness={'pairs': [[a0, b0], [a, b]], 'missing': [a, b]},
                    )

    multi = {}
    for label, parts in table.multi.items():
        multi.setdefault(rep(label), sorted(rep(p) for p in parts))

    logger.info(f"Quotient table: {len(table.labels)} labels -> {len(labels)} classes")
    return QuotientTable(
        labels=labels,
        entries=entries,
        multi=multi,
        classes={r: list(members) for r, members in decl.classes.items()},
        kind=decl.kind,
    )


def project(f: AlgebraElement, decl: EquivalenceDeclaration) -> AlgebraElement:
    """Push a function on labels forward to classes by summing over members."""
    result: Dict[str, complex] = {}
    for label, c in f.coefficients.items():
        r = decl.representative(label)
        result[r] = result.get(r, 0j) + c
    return AlgebraElement(coefficients=result)


def identity_cell(label: str, degree: int, boundary: BoundaryInvariantTable,
                  table: Optional[CompositionTable] = None) -> TwoCell:
    """Trivial cobordism M×[0,1]: every boundary invariant of M carries over."""
    invariants = {name: values[label] for name, values in boundary.values.items() if label in values}
    graphs = {}
    if table is not None:
        info = table.info(label)
        graphs = {'source_graph': info.source, 'target_graph': info.target}
    return TwoCell(label=f"{label}×I", source=label, target=label, degree=degree, invariants=invariants, **graphs)


def vertical_compose(w1: TwoCell, w2: TwoCell, boundary: BoundaryInvariantTable,
                     label: Optional[str] = None) -> TwoCell:
    """Glue w2 on top of w1 along the shared correspondence."""
    if w1.target != w2.source:
        raise CellCompositionError(
            f"{w1.label} ends at {w1.target} but {w2.label} starts at {w2.source}",
            first=w1.label, second=w2.label,
        )
    if w1.degree != w2.degree:
        raise CellCompositionError(
            f"Vertical gluing needs equal degrees, got {w1.degree} and {w2.degree}",
            first=w1.label, second=w2.label,
        )
    lonely = sorted(set(w1.invariants) ^ set(w2.invariants))
    if lonely:
        owner = w1.label if lonely[0] in w1.invariants else w2.label
        raise MissingInvariant(
            f"Invariant '{lonely[0]}' of {owner} is missing on the other cell",
            name=lonely[0], first=w1.label, second=w2.label,
        )
    invariants = {
        name: w1.invariants[name] + w2.invariants[name] - boundary.lookup(name, w1.target)
        for name in sorted(w1.invariants)
    }
    return TwoCell(
        label=label or f"{w1.label}•{w2.label}",
        source=w1.source,
        target=w2.target,
        degree=w1.degree,
        invariants=invariants,
        source_graph=w1.source_graph,
        target_graph=w1.target_graph,
    )


def _single_entry(a: str, b: str, table: CompositionTable) -> str:
    try:
        components = table.product(a, b)
    except TruncationEscape as exc:
        raise CellCompositionError(f"No composition of the endpoints {a} and {b}", first=a, second=b) from exc
    if components is None:
        raise CellCompositionError(f"Endpoints {a} and {b} are not composable", first=a, second=b)
    if len(components) != 1:
        raise CellCompositionError(
            f"{a}∘{b} has {len(components)} components; horizontal composition needs one",
            first=a, second=b,
        )
    return components[0]


def horizontal_compose(w1: TwoCell, w2: TwoCell, table: CompositionTable,
                       label: Optional[str] = None) -> TwoCell:
    """Fibered product of cells: endpoints compose in the table, degrees multiply."""
    source = _single_entry(w1.source, w2.source, table)
    target = _single_entry(w1.target, w2.target, table)
    info = table.info(source)
    return TwoCell(
        label=label or f"{w1.label}∘{w2.label}",
        source=source,
        target=target,
        degree=w1.degree * w2.degree,
        source_graph=info.source,
        target_graph=info.target,
    )


def dagger_label(label: str, cells: Optional[CellTable] = None) -> str:
    if cells is not None and cells.daggers:
        if label in cells.daggers:
            return cells.daggers[label]
        for other, partner in cells.daggers.items():
            if partner == label:
                return other
    return label[:-len(DAGGER)] if label.endswith(DAGGER) else f"{label}{DAGGER}"


def dagger(w: TwoCell, table: CompositionTable, cells: Optional[CellTable] = None) -> TwoCell:
    """Reverse the cobordism and transpose its ends: W ↦ W̄∨."""
    return TwoCell(
        label=dagger_label(w.label, cells),
        source=table.transpose_of(w.target),
        target=table.transpose_of(w.source),
        degree=w.degree,
        invariants=dict(w.invariants),
        source_graph=w.target_graph,
        target_graph=w.source_graph,
    )


def dagger_element(f: AlgebraElement, cells: CellTable) -> AlgebraElement:
    """f†(W) = conj f(W†)."""
    result = {}
    for label in f.support:
        cells.cell(label)
        partner = dagger_label(label, cells)
        if partner not in cells.cells:
            raise TableError(f"Dagger of cell '{label}' missing from cell table", label=label)
        result[partner] = f.get(label).conjugate()
    return AlgebraElement(coefficients=result)


def _glues(w1: TwoCell, w2: TwoCell, mode: CellProduct) -> bool:
    if mode == CellProduct.VERTICAL:
        return w1.target == w2.source
    if w1.target_graph is None or w2.source_graph is None:
        return False
    return w1.target_graph == w2.source_graph


def two_cell_convolve(f1: AlgebraElement, f2: AlgebraElement, mode: CellProduct,
                      cells: CellTable) -> AlgebraElement:
    """Sum of f1(W1) f2(W2) over the declared factorizations W = W1·W2."""
    mode = CellProduct(mode)
    products = cells.products(mode)
    result: Dict[str, complex] = {}
    for a in f1.support:
        w1 = cells.cell(a)
        for b in f2.support:
            w2 = cells.cell(b)
            key = f"{a}|{b}"
            if key not in products:
                if _glues(w1, w2, mode):
                    raise TruncationEscape(f"{a}|{b}", f"{mode.value} product has no cell table entry")
                continue
            c = products[key]
            result[c] = result.get(c, 0j) + f1.get(a) * f2.get(b)
    return AlgebraElement(coefficients=result)


def vertical_evolution(f: AlgebraElement, t: float, name: str, cells: CellTable,
                       boundary: BoundaryInvariantTable) -> AlgebraElement:
    """σ_t(f)(W) = exp(it(χ(W) − χ(M₂))) f(W), χ read under `name`."""
    result = {}
    for label, c in f.coefficients.items():
        cell = cells.cell(label)
        exponent = cell.invariant(name) - boundary.lookup(name, cell.target)
        result[label] = cmath.exp(1j * t * exponent) * c
    return AlgebraElement(coefficients=result)


def horizontal_order_evolution(f: AlgebraElement, t: float, cells: CellTable) -> AlgebraElement:
    """σ_t(f)(W) = deg(W)^{it} f(W)."""
    return AlgebraElement(coefficients={
        label: cmath.exp(1j * t * math.log(cells.cell(label).degree)) * c
        for label, c in f.coefficients.items()
    })


def automorphism_residual(evolution: Callable[[AlgebraElement], AlgebraElement], f: AlgebraElement,
                          g: AlgebraElement, mode: CellProduct, cells: CellTable) -> float:
    """Max-norm of σ(f·g) − σ(f)·σ(g) for the chosen product."""
    lhs = evolution(two_cell_convolve(f, g, mode, cells))
    rhs = two_cell_convolve(evolution(f), evolution(g), mode, cells)
    return lhs.distance(rhs)


def load_cells(data: Mapping) -> CellTable:
    return CellTable.model_validate(data)


def load_boundary(data: Mapping) -> BoundaryInvariantTable:
    return BoundaryInvariantTable.model_validate(data)
