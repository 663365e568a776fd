from functools import lru_cache, reduce
from operator import mul
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy.combinatorics.free_groups import free_group


@lru_cache(maxsize=None)
def _free_group(rank: int):
    return free_group(','.join(f'x{i}' for i in range(1, rank + 1)))


def free_reduce(word) -> Tuple[int, ...]:
    """Freely reduce a word of signed 1-based generator indices."""
    word = tuple(int(letter) for letter in word)
    if not word:
        return ()
    if 0 in word:
        raise ValueError("generator index 0 is not allowed; indices are 1-based")
    group, *gens = _free_group(max(abs(letter) for letter in word))
    element = reduce(mul, (gens[abs(letter) - 1] ** (1 if letter > 0 else -1) for letter in word), group.identity)
    reduced: List[int] = []
    for symbol, exponent in element.array_form:
        index = int(str(symbol)[1:])
        reduced.extend([index if exponent > 0 else -index] * abs(exponent))
    return tuple(reduced)


class Crossing(BaseModel):
    """One PD crossing X(a,b,c,d): a incoming under-strand, then counterclockwise."""

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    c: int
    d: int
    over_in: int
    over_out: int

    @property
    def labels(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def sign(self) -> int:
        return 1 if self.over_in == self.d else -1

    def __repr__(self):
        return f"<Crossing X({self.a},{self.b},{self.c},{self.d}) sign={self.sign:+d}>"


class Diagram(BaseModel):
    """Link diagram: PD labels are edges; arcs are edges joined along over-strands."""

    crossings: List[Crossing] = Field(default_factory=list)
    edge_count: int = 0
    arc_of_edge: Dict[int, int] = Field(default_factory=dict)
    arc_count: int = Field(..., ge=1)
    component_of_arc: Dict[int, str]

    @model_validator(mode='after')
    def check_arcs(self):
        if set(self.component_of_arc) != set(range(1, self.arc_count + 1)):
            raise ValueError("every arc needs a component label")
        if set(self.arc_of_edge) != set(range(1, self.edge_count + 1)):
            raise ValueError("every edge needs an arc")
        if not set(self.arc_of_edge.values()) <= set(self.component_of_arc):
            raise ValueError("edge mapped to an unknown arc")
        return self

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def components(self) -> List[str]:
        return sorted(set(self.component_of_arc.values()))

    def __repr__(self):
        return f"<Diagram crossings={self.crossing_count} edges={self.edge_count} arcs={self.arc_count}>"


class Presentation(BaseModel):
    """Finitely presented group: relators are words of signed 1-based generator indices."""

    model_config = ConfigDict(populate_by_name=True)

    label: str = ''
    generator_count: int = Field(..., ge=0, alias='generators')
    generator_names: List[str] = Field(default_factory=list, alias='names')
    relators: List[Tuple[int, ...]] = Field(default_factory=list)
    component_of_generator: Dict[int, str] = Field(default_factory=dict, alias='components')

    @field_validator('relators', mode='before')
    @classmethod
    def reduce_relators(cls, value):
        try:
            return [free_reduce(word) for word in value or []]
        except (TypeError, ValueError) as exc:
            raise ValueError(f"invalid relator word: {exc}") from exc

    @model_validator(mode='before')
    @classmethod
    def component_keys_by_name(cls, data: Any):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        count = data.get('generator_count', data.get('generators', 0))
        names = data.get('generator_names', data.get('names')) or [f'g{i}' for i in range(1, int(count) + 1)]
        key = 'components' if 'components' in data else 'component_of_generator'
        components = data.get(key)
        if components is None:
            components = {i: 'K1' for i in range(1, int(count) + 1)}
        position = {name: i for i, name in enumerate(names, start=1)}
        data[key] = {position.get(k, k): v for k, v in components.items()}
        data['names' if 'names' in data else 'generator_names'] = names
        return data

    @model_validator(mode='after')
    def check_ranges(self):
        k = self.generator_count
        if len(self.generator_names) != k or len(set(self.generator_names)) != k:
            raise ValueError(f"expected {k} distinct generator names")
        for index, word in enumerate(self.relators, start=1):
            bad = [letter for letter in word if not 1 <= abs(letter) <= k]
            if bad:
                raise ValueError(f"relator {index} uses out-of-range generator {bad[0]}")
        if set(self.component_of_generator) != set(range(1, k + 1)):
            raise ValueError("every generator needs a component label")
        return self

    @property
    def components(self) -> List[str]:
        return sorted(set(self.component_of_generator.values()))

    def index_of(self, name: str) -> int:
        from services.exceptions import UnknownGenerator

        try:
            return self.generator_names.index(name) + 1
        except ValueError:
            raise UnknownGenerator(name)

    def name_of(self, index: int) -> str:
        return self.generator_names[abs(index) - 1]

    def generators_of_component(self, component: str) -> List[str]:
        return [self.name_of(i) for i, c in sorted(self.component_of_generator.items()) if c == component]

    def word_text(self, word: Tuple[int, ...]) -> str:
        return ' '.join(self.name_of(letter) + ('' if letter > 0 else '^-1') for letter in word) or '1'

    def to_json(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'generators': self.generator_count,
            'names': list(self.generator_names),
            'relators': [list(word) for word in self.relators],
            'components': {str(i): c for i, c in sorted(self.component_of_generator.items())},
        }

    def __repr__(self):
        return f"<Presentation '{self.label}' generators={self.generator_count} relators={len(self.relators)}>"
