from .presentation import Crossing, Diagram, Presentation
from .covering import ColoringHit, ColoringSearch, OrbitDecomposition, PermRep
from .correspondence import (
    AssociativityReport,
    CompositeComponent,
    CompositeCorrespondence,
    Correspondence,
    CorrespondenceHeader,
    CoveringSide,
    FormalLocus,
    MiddleDiagram,
)
from .table import AlgebraElement, CompositionTable, EvolutionMode, LabelInfo, OperatorMatrix
from .cobordism import (
    BoundaryInvariantTable,
    CellProduct,
    CellTable,
    EquivalenceDeclaration,
    EquivalenceKind,
    QuotientTable,
    TwoCell,
)
from .bounds import LocalizedOracle, MultiplicityOracle, PartitionFunctionResult, SpectralSummary
from .session import SessionFile

__all__ = [
    "Crossing",
    "Diagram",
    "Presentation",
    "ColoringHit",
    "ColoringSearch",
    "OrbitDecomposition",
    "PermRep",
    "AssociativityReport",
    "CompositeComponent",
    "CompositeCorrespondence",
    "Correspondence",
    "CorrespondenceHeader",
    "CoveringSide",
    "FormalLocus",
    "MiddleDiagram",
    "AlgebraElement",
    "CompositionTable",
    "EvolutionMode",
    "LabelInfo",
    "OperatorMatrix",
    "BoundaryInvariantTable",
    "CellProduct",
    "CellTable",
    "EquivalenceDeclaration",
    "EquivalenceKind",
    "QuotientTable",
    "TwoCell",
    "LocalizedOracle",
    "MultiplicityOracle",
    "PartitionFunctionResult",
    "SpectralSummary",
    "SessionFile",
]
