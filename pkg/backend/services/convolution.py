import cmath
import logging
import math
from collections import Counter
from typing import Dict, List, Optional

from pydantic import ValidationError

from models.table import AlgebraElement, CompositionTable, EvolutionMode, LabelInfo
from services.exceptions import DivisionUniquenessError, TableError, TruncationEscape

logger = logging.getLogger(__name__)


def load_table(data: Dict, require_transpose: bool = False) -> CompositionTable:
    try:
        table = CompositionTable.model_validate(data)
    except ValidationError as exc:
        raise TableError(f"Invalid table: {exc.errors()[0]['msg']}") from exc
    return validate_table(table, require_transpose=require_transpose)


def validate_table(table: CompositionTable, require_transpose: bool = False) -> CompositionTable:
    """Check endpoints, the product rule, distinct components and division uniqueness."""
    quotients: Dict[tuple, str] = {}
    for a, b, components in table.pairs():
        left, right = table.info(a), table.info(b)
        if left.target != right.source:
            raise TableError(f"Entry {a}|{b} composes non-composable labels")
        if not components:
            raise TableError(f"Entry {a}|{b} has no components")
        if len(set(components)) != len(components):
            raise TableError(f"Entry {a}|{b} repeats a component")
        infos = [table.info(c) for c in components]
        for c, info in zip(components, infos):
            if info.source != left.source or info.target != right.target:
                raise TableError(f"Component {c} of {a}|{b} has wrong endpoints")
        n, m = left.n * right.n, left.m * right.m
        if len(components) == 1 and (infos[0].n, infos[0].m) != (n, m):
            raise TableError(f"Entry {a}|{b} violates the product rule: expected degrees {(n, m)}")
        if len(components) > 1 and (sum(i.n for i in infos), sum(i.m for i in infos)) != (n, m):
            raise TableError(f"Entry {a}|{b} violates the sum rule: components must add up to {(n, m)}")
        for c in components:
            previous = quotients.setdefault((a, c), b)
            if previous != b:
                raise DivisionUniquenessError(
                    f"{c} = {a}∘{previous} and {c} = {a}∘{b}; the right factor must be unique",
                    label=c,
                )
    for label, parts in table.multi.items():
        for part in parts:
            table.info(part)
    for label, info in table.labels.items():
        if info.transpose is None:
            if require_transpose:
                raise TableError(f"Transpose label of '{label}' missing from table", label=label)
            continue
        partner = table.info(info.transpose)
        if partner.transpose != label:
            raise TableError(f"Transpose of {label} is not an involution")
        if (partner.n, partner.m, partner.source, partner.target) != (info.m, info.n, info.target, info.source):
            raise TableError(f"Transpose {info.transpose} of {label} must swap degrees and endpoints")
    logger.info(f"Validated table: {len(table.labels)} labels, {len(table.entries)} entries")
    return table


def single_component(table: CompositionTable) -> bool:
    return all(len(components) == 1 for _, _, components in table.pairs())


def _check_support(f: AlgebraElement, table: CompositionTable) -> None:
    for label in f.coefficients:
        table.info(label)


def convolve(f1: AlgebraElement, f2: AlgebraElement, table: CompositionTable) -> AlgebraElement:
    """(f1*f2)(M) = sum of f1(M1) f2(M2) over M1∘M2 ∋ M."""
    _check_support(f1, table)
    _check_support(f2, table)
    result: Dict[str, complex] = {}
    for a in f1.support:
        for b in f2.support:
            components = table.product(a, b)
            if components is None:
                continue
            weight = f1.get(a) * f2.get(b)
            for c in components:
                result[c] = result.get(c, 0j) + weight
    return AlgebraElement(coefficients=result)


def involve(f: AlgebraElement, table: CompositionTable) -> AlgebraElement:
    """f∨(M) = conj f(M∨)."""
    _check_support(f, table)
    result = {}
    for label in f.support:
        result[table.transpose_of(label)] = f.get(label).conjugate()
    return AlgebraElement(coefficients=result)


def phase(info: LabelInfo, t: float, mode: EvolutionMode) -> complex:
    return cmath.exp(1j * t * math.log(info.degree(mode)))


def evolve(f: AlgebraElement, t: float, mode: EvolutionMode, table: CompositionTable) -> AlgebraElement:
    """Multiply coefficients by n^{it}, m^{it} or (n/m)^{it}."""
    mode = EvolutionMode(mode)
    return AlgebraElement(coefficients={
        label: phase(table.info(label), t, mode) * c for label, c in f.coefficients.items()
    })


def source_unit(label: str, table: CompositionTable) -> str:
    return table.info(label).source


def range_unit(label: str, table: CompositionTable) -> str:
    return table.info(label).target


def find_unit(table: CompositionTable, graph: str) -> Optional[str]:
    """Label acting as the identity at `graph`, if the table contains one."""
    for label, info in sorted(table.labels.items()):
        if (info.n, info.m, info.source, info.target) != (1, 1, graph, graph):
            continue
        try:
            acts = all(
                table.product(label, other) == [other]
                for other, o in table.labels.items() if o.source == graph
            ) and all(
                table.product(other, label) == [other]
                for other, o in table.labels.items() if o.target == graph
            )
        except TruncationEscape:
            acts = False
        if acts:
            return label
    return None


def morphism_space(table: CompositionTable, source: str, target: str) -> List[str]:
    """Basis of the free module Hom(source, target)."""
    return sorted(label for label, info in table.labels.items() if (info.source, info.target) == (source, target))


def compose_morphisms(phi: AlgebraElement, psi: AlgebraElement, table: CompositionTable) -> AlgebraElement:
    """Bilinear composition Hom(G, G') x Hom(G', G'') -> Hom(G, G'')."""
    for name, element in (('first', phi), ('second', psi)):
        ends = {(table.info(l).source, table.info(l).target) for l in element.support}
        if len(ends) > 1:
            raise TableError(f"The {name} morphism mixes Hom spaces {sorted(ends)}")
    return convolve(phi, psi, table)


def multiplicity_counts(table: CompositionTable, graph: str, mode: EvolutionMode = EvolutionMode.LEFT) -> Counter:
    """Number of labels of each degree with target `graph`."""
    mode = EvolutionMode(mode)
    return Counter(int(round(table.info(label).degree(mode))) for label in table.with_target(graph))
