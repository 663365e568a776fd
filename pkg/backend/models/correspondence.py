from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.covering import PermRep
from models.presentation import Presentation

# One transport step: (correspondence label, direction); "<" carries loci from
# the right sphere to the left one, ">" from the left sphere to the right one.
Step = Tuple[str, str]
Chain = Tuple[Step, ...]
LocusTerm = Tuple[Chain, str]

TRANSPOSE_MARK = "∨"


def transpose_label(label: str) -> str:
    """Toggle the trailing transpose mark."""
    return label[:-1] if label.endswith(TRANSPOSE_MARK) else label + TRANSPOSE_MARK


class FormalLocus(BaseModel):
    """Symbolic union of branch loci transported through correspondences."""

    model_config = ConfigDict(frozen=True)

    terms: FrozenSet[LocusTerm] = frozenset()

    @classmethod
    def of(cls, locus_label: str) -> 'FormalLocus':
        return cls(terms=frozenset({((), locus_label)})) if locus_label else cls()

    def union(self, other: 'FormalLocus') -> 'FormalLocus':
        return FormalLocus(terms=self.terms | other.terms)

    def transported(self, chain: Chain) -> 'FormalLocus':
        return FormalLocus(terms=frozenset((steps + chain, base) for steps, base in self.terms))

    @staticmethod
    def render_term(term: LocusTerm) -> str:
        steps, base = term
        text = base
        for label, direction in steps:
            text = f"{label}{direction}({text})"
        return text

    def render(self) -> str:
        return ' ∪ '.join(sorted(self.render_term(t) for t in self.terms)) or '∅'

    def __repr__(self):
        return f"<FormalLocus {self.render()}>"


class CorrespondenceHeader(BaseModel):
    """Degree and locus bookkeeping of a correspondence or composite."""

    model_config = ConfigDict(frozen=True)

    label: str
    left_degree: int
    right_degree: int
    source_graph: str
    target_graph: str
    formal_left: FormalLocus = FormalLocus()
    formal_right: FormalLocus = FormalLocus()
    left_chain: Chain = ()
    right_chain: Chain = ()

    def transposed(self) -> 'CorrespondenceHeader':
        return CorrespondenceHeader(
            label=transpose_label(self.label),
            left_degree=self.right_degree,
            right_degree=self.left_degree,
            source_graph=self.target_graph,
            target_graph=self.source_graph,
            formal_left=self.formal_right,
            formal_right=self.formal_left,
            left_chain=self.right_chain,
            right_chain=self.left_chain,
        )


class CoveringSide(BaseModel):
    """One covering map: rep over a branch locus, with the marked subgraph G ⊆ E."""

    rep: PermRep
    branch_locus: str = ''
    marked_subgraph: FrozenSet[str] = frozenset()

    @model_validator(mode='after')
    def check_marked(self):
        unknown = set(self.marked_subgraph) - set(self.rep.presentation.components)
        if unknown:
            raise ValueError(f"marked components {sorted(unknown)} are not components of '{self.branch_locus}'")
        return self

    @property
    def degree(self) -> int:
        return self.rep.degree

    @property
    def presentation(self) -> Presentation:
        return self.rep.presentation

    def graph_label(self) -> str:
        """Default name of the marked subgraph."""
        if set(self.marked_subgraph) == set(self.presentation.components):
            return self.branch_locus
        return f"{self.branch_locus}[{','.join(sorted(self.marked_subgraph))}]"

    def to_json(self) -> Dict:
        return {
            'locus': self.branch_locus,
            'presentation': self.presentation.to_json(),
            'marked': sorted(self.marked_subgraph),
            'coloring': self.rep.coloring_json(),
        }


class Correspondence(BaseModel):
    """Element of C(G, G'): a manifold label with two branched coverings of the sphere."""

    label: str = Field(..., min_length=1)
    left: CoveringSide
    right: CoveringSide
    source_graph: str
    target_graph: str
    formal_left: Optional[FormalLocus] = None
    formal_right: Optional[FormalLocus] = None
    left_chain: Optional[Chain] = None
    right_chain: Optional[Chain] = None

    @model_validator(mode='after')
    def default_bookkeeping(self):
        if self.formal_left is None:
            self.formal_left = FormalLocus.of(self.left.branch_locus)
        if self.formal_right is None:
            self.formal_right = FormalLocus.of(self.right.branch_locus)
        if self.left_chain is None:
            self.left_chain = () if self.is_unit else ((self.label, '<'),)
        if self.right_chain is None:
            self.right_chain = () if self.is_unit else ((self.label, '>'),)
        return self

    @property
    def n(self) -> int:
        return self.left.degree

    @property
    def m(self) -> int:
        return self.right.degree

    @property
    def is_symmetric(self) -> bool:
        return self.left == self.right and self.source_graph == self.target_graph

    @property
    def is_unit(self) -> bool:
        return (self.n == 1 and self.m == 1
                and self.left.presentation.generator_count == 0
                and self.right.presentation.generator_count == 0)

    @property
    def header(self) -> CorrespondenceHeader:
        return CorrespondenceHeader(
            label=self.label,
            left_degree=self.n,
            right_degree=self.m,
            source_graph=self.source_graph,
            target_graph=self.target_graph,
            formal_left=self.formal_left,
            formal_right=self.formal_right,
            left_chain=self.left_chain,
            right_chain=self.right_chain,
        )

    def same_as(self, other: 'Correspondence') -> bool:
        """Equality of everything except the label."""
        return (self.left == other.left and self.right == other.right
                and self.source_graph == other.source_graph and self.target_graph == other.target_graph)

    def to_json(self) -> Dict:
        return {
            'label': self.label,
            'source': self.source_graph,
            'target': self.target_graph,
            'left': self.left.to_json(),
            'right': self.right.to_json(),
        }

    def __repr__(self):
        return f"<Correspondence '{self.label}' ({self.n},{self.m}) {self.source_graph}->{self.target_graph}>"


class MiddleDiagram(BaseModel):
    """Presentation of both middle branch loci on the shared sphere.

    `side1` maps middle generators to generators of the first factor's right
    presentation, `side2` to generators of the second factor's left one. A
    generator may sit on both sides; every generator sits on at least one.
    """

    presentation: Presentation
    side1: Dict[str, str] = Field(default_factory=dict)
    side2: Dict[str, str] = Field(default_factory=dict)

    @field_validator('side1', 'side2', mode='before')
    @classmethod
    def names_as_identity(cls, value):
        if value is None:
            return {}
        if isinstance(value, (list, tuple)):
            return {name: name for name in value}
        return value

    @model_validator(mode='after')
    def check_partition(self):
        names = set(self.presentation.generator_names)
        for side in (self.side1, self.side2):
            unknown = set(side) - names
            if unknown:
                raise ValueError(f"side arcs {sorted(unknown)} are not middle generators")
        uncovered = names - set(self.side1) - set(self.side2)
        if uncovered:
            raise ValueError(f"middle generators {sorted(uncovered)} belong to neither side")
        return self


class CompositeComponent(BaseModel):
    """One orbit of the product action with its restricted middle rep."""

    label: str
    middle_rep: PermRep
    sheets: List[Tuple[int, int]]
    left_degree: int
    right_degree: int
    correspondence: Optional[Correspondence] = None

    @property
    def middle_degree(self) -> int:
        return self.middle_rep.degree

    @property
    def is_cyclic(self) -> bool:
        return bool(self.middle_rep.group().is_cyclic)

    @property
    def lifted(self) -> bool:
        return self.correspondence is not None


class CompositeCorrespondence(BaseModel):
    """Middle-sphere shadow of a fibered product, with outer bookkeeping."""

    label: str
    left_label: str
    right_label: str
    middle: MiddleDiagram
    middle_degrees: Tuple[int, int]
    components: List[CompositeComponent]
    outer_left_degree: int
    outer_right_degree: int
    source_graph: str
    target_graph: str
    formal_left: FormalLocus
    formal_right: FormalLocus
    left_chain: Chain
    right_chain: Chain
    cyclic_split: bool = False
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_sheet_count(self):
        m, m_tilde = self.middle_degrees
        if sum(c.middle_degree for c in self.components) != m * m_tilde:
            raise ValueError("component middle degrees must sum to the product of middle degrees")
        return self

    @property
    def header(self) -> CorrespondenceHeader:
        return CorrespondenceHeader(
            label=self.label,
            left_degree=self.outer_left_degree,
            right_degree=self.outer_right_degree,
            source_graph=self.source_graph,
            target_graph=self.target_graph,
            formal_left=self.formal_left,
            formal_right=self.formal_right,
            left_chain=self.left_chain,
            right_chain=self.right_chain,
        )

    def __repr__(self):
        return f"<CompositeCorrespondence '{self.label}' components={len(self.components)}>"


class AssociativityReport(BaseModel):
    passed: bool
    mismatches: List[str] = Field(default_factory=list)
    degrees: Dict[str, Tuple[int, int]] = Field(default_factory=dict)
    loci: Dict[str, Dict[str, str]] = Field(default_factory=dict)
    component_degrees: Dict[str, List[Tuple[int, int]]] = Field(default_factory=dict)
    sheet_oracle: Optional[List[int]] = None
    skipped: List[str] = Field(default_factory=list)
