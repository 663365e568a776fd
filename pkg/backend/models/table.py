from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class EvolutionMode(str, Enum):
    LEFT = 'L'
    RIGHT = 'R'
    RATIO = 'ratio'


class LabelInfo(BaseModel):
    """Degrees and endpoint graphs of one table label."""

    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    source: str
    target: str
    transpose: Optional[str] = None

    def degree(self, mode: EvolutionMode) -> float:
        mode = EvolutionMode(mode)
        if mode == EvolutionMode.LEFT:
            return float(self.n)
        if mode == EvolutionMode.RIGHT:
            return float(self.m)
        return self.n / self.m


class CompositionTable(BaseModel):
    """Finite truncation of the composition semigroupoid.

    `entries` maps "A|B" to the components of A∘B; `multi` lists the
    components of multi-connected labels.
    """

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    labels: Dict[str, LabelInfo] = Field(default_factory=dict)
    entries: Dict[str, List[str]] = Field(default_factory=dict, alias='compose')
    multi: Dict[str, List[str]] = Field(default_factory=dict)

    @staticmethod
    def key(a: str, b: str) -> str:
        return f"{a}|{b}"

    @staticmethod
    def split_key(key: str) -> Tuple[str, str]:
        a, sep, b = key.partition('|')
        if not sep:
            raise ValueError(f"composition key '{key}' must have the form 'A|B'")
        return a, b

    @model_validator(mode='after')
    def check_keys(self):
        for key in self.entries:
            self.split_key(key)
        return self

    def has(self, label: str) -> bool:
        return label in self.labels

    def info(self, label: str) -> LabelInfo:
        if label not in self.labels:
            from services.exceptions import TableError

            raise TableError(f"Label '{label}' missing from table", label=label)
        return self.labels[label]

    def composable(self, a: str, b: str) -> bool:
        return self.info(a).target == self.info(b).source

    def product(self, a: str, b: str) -> Optional[List[str]]:
        """Components of a∘b; None when not composable."""
        if not self.composable(a, b):
            return None
        key = self.key(a, b)
        if key not in self.entries:
            from services.exceptions import TruncationEscape

            raise TruncationEscape(f"{a}∘{b}", "composable pair has no table entry")
        return self.entries[key]

    def transpose_of(self, label: str) -> str:
        transpose = self.info(label).transpose
        if transpose is None or transpose not in self.labels:
            from services.exceptions import TableError

            raise TableError(f"Transpose label of '{label}' missing from table", label=label)
        return transpose

    def with_target(self, graph: str) -> List[str]:
        return sorted(label for label, info in self.labels.items() if info.target == graph)

    def graphs(self) -> List[str]:
        return sorted({info.source for info in self.labels.values()} | {info.target for info in self.labels.values()})

    def pairs(self) -> Iterable[Tuple[str, str, List[str]]]:
        for key, components in sorted(self.entries.items()):
            a, b = self.split_key(key)
            yield a, b, components

    def to_json(self) -> Dict:
        data = {
            'labels': {label: info.model_dump(exclude_none=True) for label, info in sorted(self.labels.items())},
            'compose': {key: list(components) for key, components in sorted(self.entries.items())},
        }
        if self.multi:
            data['multi'] = {label: list(parts) for label, parts in sorted(self.multi.items())}
        return data

    def __repr__(self):
        return f"<CompositionTable labels={len(self.labels)} entries={len(self.entries)}>"


def as_complex(value) -> complex:
    """Accepts numbers, [re, im] pairs, {"re", "im"} objects and strings like "1+2j"."""
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, Mapping):
        return complex(float(value.get('re', 0.0)), float(value.get('im', 0.0)))
    if isinstance(value, str):
        return complex(value.replace(' ', '').replace('i', 'j'))
    raise ValueError(f"cannot read {value!r} as a complex number")


class AlgebraElement(BaseModel):
    """Finitely supported complex function on table labels (cells, for the 2-cell layer)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coefficients: Dict[str, complex] = Field(default_factory=dict)

    @field_validator('coefficients', mode='before')
    @classmethod
    def read_complex(cls, value):
        return {str(label): as_complex(c) for label, c in (value or {}).items()}

    @classmethod
    def delta(cls, label: str, coefficient: complex = 1.0) -> 'AlgebraElement':
        return cls(coefficients={label: coefficient})

    @classmethod
    def from_mapping(cls, data: Mapping, table: Optional[CompositionTable] = None) -> 'AlgebraElement':
        """Read an element, expanding multi-connected labels into their components."""
        raw = cls(coefficients=dict(data.get('coefficients', data)))
        if table is None or not table.multi:
            return raw
        expanded: Dict[str, complex] = {}
        for label, c in raw.coefficients.items():
            for part in table.multi.get(label, [label]):
                expanded[part] = expanded.get(part, 0j) + c
        return cls(coefficients=expanded)

    @property
    def support(self) -> List[str]:
        return sorted(label for label, c in self.coefficients.items() if c != 0)

    def get(self, label: str) -> complex:
        return self.coefficients.get(label, 0j)

    def __add__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        result = dict(self.coefficients)
        for label, c in other.coefficients.items():
            result[label] = result.get(label, 0j) + c
        return AlgebraElement(coefficients=result)

    def __sub__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return self + other.scaled(-1)

    def scaled(self, factor: complex) -> 'AlgebraElement':
        return AlgebraElement(coefficients={label: factor * c for label, c in self.coefficients.items()})

    def max_norm(self) -> float:
        return max((abs(c) for c in self.coefficients.values()), default=0.0)

    def distance(self, other: 'AlgebraElement') -> float:
        return (self - other).max_norm()

    def cleaned(self, tolerance: float = 0.0) -> 'AlgebraElement':
        return AlgebraElement(coefficients={l: c for l, c in self.coefficients.items() if abs(c) > tolerance})

    def to_json(self) -> Dict[str, List[float]]:
        return {label: [c.real, c.imag] for label, c in sorted(self.coefficients.items()) if c != 0}

    def __repr__(self):
        return f"<AlgebraElement {self.to_json()}>"


class OperatorMatrix(BaseModel):
    """Complex matrix over an ordered basis of labels."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    basis: List[str]
    matrix: np.ndarray

    @field_validator('matrix', mode='before')
    @classmethod
    def as_array(cls, value):
        return np.asarray(value, dtype=complex)

    @model_validator(mode='after')
    def check_shape(self):
        size = len(self.basis)
        if self.matrix.shape != (size, size):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match basis size {size}")
        return self

    @classmethod
    def zeros(cls, basis: List[str]) -> 'OperatorMatrix':
        return cls(basis=list(basis), matrix=np.zeros((len(basis), len(basis)), dtype=complex))

    def __matmul__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        if self.basis != other.basis:
            raise ValueError("operators act on different bases")
        return OperatorMatrix(basis=self.basis, matrix=self.matrix @ other.matrix)

    def adjoint(self) -> 'OperatorMatrix':
        return OperatorMatrix(basis=self.basis, matrix=self.matrix.conj().T)

    def distance(self, other: 'OperatorMatrix') -> float:
        if self.matrix.size == 0:
            return 0.0
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def is_diagonal(self, tolerance: float = 0.0) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return bool(np.all(np.abs(off) <= tolerance))

    def to_json(self) -> Dict:
        return {
            'basis': list(self.basis),
            'real': self.matrix.real.tolist(),
            'imag': self.matrix.imag.tolist(),
        }
