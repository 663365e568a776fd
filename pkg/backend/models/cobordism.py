from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.table import CompositionTable


class EquivalenceKind(str, Enum):
    COBORDISM = 'cobordism'
    B_HOMOTOPY = 'b-homotopy'


class CellProduct(str, Enum):
    VERTICAL = 'vertical'
    HORIZONTAL = 'horizontal'


class EquivalenceDeclaration(BaseModel):
    """Frozen union-find result: representative label -> sorted members."""

    model_config = ConfigDict(frozen=True)

    kind: EquivalenceKind = EquivalenceKind.COBORDISM
    classes: Dict[str, List[str]] = Field(default_factory=dict)

    def representative(self, label: str) -> str:
        for rep, members in self.classes.items():
            if label in members:
                return rep
        return label

    def members(self, label: str) -> List[str]:
        rep = self.representative(label)
        return self.classes.get(rep, [label])


class QuotientTable(CompositionTable):
    """Class-level table; components may repeat (multiplicities)."""

    classes: Dict[str, List[str]] = Field(default_factory=dict)
    kind: EquivalenceKind = EquivalenceKind.COBORDISM

    def to_json(self) -> Dict:
        data = super().to_json()
        data['classes'] = {rep: list(members) for rep, members in sorted(self.classes.items())}
        data['kind'] = self.kind.value
        return data


class TwoCell(BaseModel):
    """Abstract cobordism W between two correspondences of the same C(G, G')."""

    model_config = ConfigDict(populate_by_name=True)

    label: str = ''
    source: str = Field(..., alias='src')
    target: str = Field(..., alias='tgt')
    degree: int = Field(..., ge=1, alias='deg')
    invariants: Dict[str, float] = Field(default_factory=dict, alias='inv')
    source_graph: Optional[str] = None
    target_graph: Optional[str] = None

    def invariant(self, name: str) -> float:
        if name not in self.invariants:
            from services.exceptions import MissingInvariant

            raise MissingInvariant(f"Cell '{self.label}' carries no invariant '{name}'", cell=self.label, name=name)
        return self.invariants[name]

    def to_json(self) -> Dict[str, Any]:
        data = {'src': self.source, 'tgt': self.target, 'deg': self.degree, 'inv': dict(self.invariants)}
        if self.source_graph is not None:
            data['source_graph'] = self.source_graph
        if self.target_graph is not None:
            data['target_graph'] = self.target_graph
        return data

    def __repr__(self):
        return f"<TwoCell '{self.label}' {self.source}=>{self.target} deg={self.degree}>"


class CellTable(BaseModel):
    """Finite set of cells with declared vertical and horizontal factorizations."""

    model_config = ConfigDict(populate_by_name=True)

    cells: Dict[str, TwoCell] = Field(default_factory=dict)
    vertical: Dict[str, str] = Field(default_factory=dict)
    horizontal: Dict[str, str] = Field(default_factory=dict)
    daggers: Dict[str, str] = Field(default_factory=dict, alias='dagger')

    @model_validator(mode='after')
    def label_cells(self):
        for label, cell in self.cells.items():
            if not cell.label:
                cell.label = label
            elif cell.label != label:
                raise ValueError(f"cell key '{label}' differs from its label '{cell.label}'")
        for product in (self.vertical, self.horizontal):
            for key, result in product.items():
                first, sep, second = key.partition('|')
                if not sep:
                    raise ValueError(f"factorization key '{key}' must have the form 'W1|W2'")
                for name in (first, second, result):
                    if name not in self.cells:
                        raise ValueError(f"factorization {key} -> {result} names unknown cell '{name}'")
        for label, partner in self.daggers.items():
            if label not in self.cells or partner not in self.cells:
                raise ValueError(f"dagger pair {label} -> {partner} names an unknown cell")
        return self

    def cell(self, label: str) -> TwoCell:
        if label not in self.cells:
            from services.exceptions import TruncationEscape

            raise TruncationEscape(label, "cell missing from cell table")
        return self.cells[label]

    def products(self, mode: CellProduct) -> Dict[str, str]:
        return self.vertical if CellProduct(mode) == CellProduct.VERTICAL else self.horizontal

    def factorizations(self, mode: CellProduct) -> Iterable[Tuple[str, str, str]]:
        for key, result in sorted(self.products(mode).items()):
            first, _, second = key.partition('|')
            yield first, second, result

    def to_json(self) -> Dict:
        data = {
            'cells': {label: cell.to_json() for label, cell in sorted(self.cells.items())},
            'vertical': dict(sorted(self.vertical.items())),
            'horizontal': dict(sorted(self.horizontal.items())),
        }
        if self.daggers:
            data['dagger'] = dict(sorted(self.daggers.items()))
        return data


class BoundaryInvariantTable(BaseModel):
    """Invariant name -> correspondence label -> value on the glued boundary."""

    values: Dict[str, Dict[str, float]] = Field(default_factory=dict)

    @model_validator(mode='before')
    @classmethod
    def wrap_plain(cls, data: Any):
        if isinstance(data, dict) and 'values' not in data:
            return {'values': data}
        return data

    def lookup(self, name: str, label: str) -> float:
        table = self.values.get(name, {})
        if label not in table:
            from services.exceptions import MissingInvariant

            raise MissingInvariant(f"No boundary value of '{name}' for '{label}'", name=name, label=label)
        return table[label]
