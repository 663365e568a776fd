from typing import Any, Dict, Optional


class CorrCalcError(Exception):
    """Base error; `code` is the machine-readable identifier echoed by the CLI."""

    code = 'corrcalc_error'

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'code': self.code, 'detail': self.detail}
        if self.context:
            payload['context'] = self.context
        return payload


class DiagramError(CorrCalcError):
    code = 'invalid_diagram'


class PresentationError(CorrCalcError):
    code = 'invalid_presentation'


class UnknownGenerator(CorrCalcError):
    code = 'unknown_generator'

    def __init__(self, generator: str):
        super().__init__(f"Unknown generator '{generator}'", generator=generator)
        self.generator = generator


class ColoringError(CorrCalcError):
    code = 'invalid_coloring'


class RelatorViolation(CorrCalcError):
    code = 'relator_violation'

    def __init__(self, relator_index: int, permutation: str):
        super().__init__(
            f"Relator {relator_index} evaluates to {permutation}, not the identity",
            relator=relator_index,
            permutation=permutation,
        )
        self.relator_index = relator_index
        self.permutation = permutation


class CorrespondenceError(CorrCalcError):
    code = 'invalid_correspondence'


class CompositionError(CorrCalcError):
    code = 'composition_error'


class TableError(CorrCalcError):
    code = 'invalid_table'


class TruncationEscape(CorrCalcError):
    code = 'truncation_escape'

    def __init__(self, label: str, reason: Optional[str] = None):
        detail = f"Computation leaves the finite table at '{label}'"
        if reason:
            detail = f"{detail}: {reason}"
        super().__init__(detail, label=label)
        self.label = label


class DivisionUniquenessError(TableError):
    code = 'division_uniqueness'


class DegreeMismatch(CorrCalcError):
    code = 'degree_mismatch'


class EndpointMismatch(CorrCalcError):
    code = 'endpoint_mismatch'


class IllDefinedComposition(CorrCalcError):
    code = 'ill_defined_composition'

    def __init__(self, detail: str, witness: Any):
        super().__init__(detail, witness=witness)
        self.witness = witness


class CellCompositionError(CorrCalcError):
    code = 'cell_composition_error'


class MissingInvariant(CorrCalcError):
    code = 'missing_invariant'


class OracleError(CorrCalcError):
    code = 'oracle_error'


class ImplementationFault(CorrCalcError):
    code = 'implementation_fault'


class InputError(CorrCalcError):
    code = 'invalid_input'
