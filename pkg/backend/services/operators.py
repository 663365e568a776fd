"""
Operators on the truncated Hilbert space spanned by correspondences with a
common target graph.

Sign convention: with H diagonal in log-degrees the representation
satisfies rho(sigma_t(f)) = exp(itH) rho(f) exp(-itH).
"""
import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from config import settings
from models.bounds import SpectralSummary
from models.table import AlgebraElement, CompositionTable, EvolutionMode, OperatorMatrix
from services.convolution import evolve, phase
from services.exceptions import DivisionUniquenessError, OracleError, TableError, TruncationEscape

logger = logging.getLogger(__name__)


def basis_for_graph(table: CompositionTable, graph: str) -> List[str]:
    """All labels with target `graph`: the truncation of H_G."""
    return table.with_target(graph)


def _check_basis(basis: Sequence[str], table: CompositionTable) -> Dict[str, int]:
    targets = {table.info(label).target for label in basis}
    if len(targets) > 1:
        raise TableError(f"Basis labels must share one target graph, found {sorted(targets)}")
    if len(set(basis)) != len(basis):
        raise TableError("Basis labels repeat")
    return {label: i for i, label in enumerate(basis)}


def represent(f: AlgebraElement, basis: Sequence[str], table: CompositionTable, strict: bool = True) -> OperatorMatrix:
    """Matrix of rho_G(f) in the delta basis: (rho(f) xi)(M) = sum f(M1) xi(M2) over M1∘M2 ∋ M."""
    index = _check_basis(basis, table)
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)
    dropped = set()
    for a in f.support:
        table.info(a)
        for j, b in enumerate(basis):
            components = table.product(a, b)
            if components is None:
                continue
            for c in components:
                if c not in index:
                    if strict:
                        raise TruncationEscape(c, f"{a}∘{b} leaves the basis")
                    dropped.add(c)
                    continue
                matrix[index[c], j] += f.get(a)
    if dropped:
        logger.warning(f"Compressed representation dropped {len(dropped)} labels outside the basis")
    return OperatorMatrix(basis=list(basis), matrix=matrix)


def annihilator(label: str, basis: Sequence[str], table: CompositionTable, strict: bool = True) -> OperatorMatrix:
    """A_M: 0/1 matrix with (A_M)[M', M''] = 1 when M' is a component of M∘M''."""
    operator = represent(AlgebraElement.delta(label), basis, table, strict=strict)
    for i, row in enumerate(operator.matrix):
        if np.count_nonzero(row) > 1:
            raise DivisionUniquenessError(
                f"{basis[i]} arises from {label} composed with several basis labels",
                label=basis[i],
            )
    return operator


def creator(label: str, basis: Sequence[str], table: CompositionTable, strict: bool = True) -> OperatorMatrix:
    return annihilator(label, basis, table, strict=strict).adjoint()


def projection_pair(label: str, basis: Sequence[str], table: CompositionTable, strict: bool = True):
    """(A_M* A_M, A_M A_M*): the projections P_M and Q_M."""
    a = annihilator(label, basis, table, strict=strict)
    return a.adjoint() @ a, a @ a.adjoint()


def _log_degrees(basis: Sequence[str], table: CompositionTable, mode: EvolutionMode) -> np.ndarray:
    mode = EvolutionMode(mode)
    return np.array([math.log(table.info(label).degree(mode)) for label in basis], dtype=float)


def hamiltonian(basis: Sequence[str], table: CompositionTable, mode: EvolutionMode = EvolutionMode.LEFT) -> OperatorMatrix:
    """Diagonal log n (mode L) or log m (mode R)."""
    mode = EvolutionMode(mode)
    if mode == EvolutionMode.RATIO:
        return dirac_generator(basis, table)
    return OperatorMatrix(basis=list(basis), matrix=np.diag(_log_degrees(basis, table, mode)))


def dirac_generator(basis: Sequence[str], table: CompositionTable) -> OperatorMatrix:
    """D: diagonal log(n/m)."""
    return OperatorMatrix(basis=list(basis), matrix=np.diag(_log_degrees(basis, table, EvolutionMode.RATIO)))


def commutator_norm(d: OperatorMatrix, x: OperatorMatrix) -> float:
    """Operator norm of [D, X]."""
    commutator = d.matrix @ x.matrix - x.matrix @ d.matrix
    if commutator.size == 0:
        return 0.0
    return float(np.linalg.norm(commutator, ord=2))


def _unitary(h: OperatorMatrix, t: float) -> np.ndarray:
    return expm(1j * t * h.matrix)


def conjugation_check(f: AlgebraElement, t: float, basis: Sequence[str], table: CompositionTable,
                      mode: EvolutionMode = EvolutionMode.LEFT, strict: bool = True) -> float:
    """Max-norm residual of rho(sigma_t f) - exp(itH) rho(f) exp(-itH)."""
    h = hamiltonian(basis, table, mode)
    lhs = represent(evolve(f, t, mode, table), basis, table, strict=strict).matrix
    rhs = _unitary(h, t) @ represent(f, basis, table, strict=strict).matrix @ _unitary(h, -t)
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


def operator_evolution_residual(label: str, t: float, basis: Sequence[str], table: CompositionTable,
                                mode: EvolutionMode = EvolutionMode.LEFT, adjoint: bool = False,
                                strict: bool = True) -> float:
    """Residual of sigma_t(A_M) = deg^{it} A_M (or deg^{-it} A_M* when `adjoint`)."""
    h = hamiltonian(basis, table, mode)
    build = creator if adjoint else annihilator
    operator = build(label, basis, table, strict=strict)
    factor = phase(table.info(label), t, EvolutionMode(mode))
    expected = (factor.conjugate() if adjoint else factor) * operator.matrix
    actual = _unitary(h, t) @ operator.matrix @ _unitary(h, -t)
    return float(np.max(np.abs(actual - expected))) if actual.size else 0.0


def gibbs_state(f: AlgebraElement, beta: float, basis: Sequence[str], table: CompositionTable,
                mode: EvolutionMode = EvolutionMode.LEFT, strict: bool = True) -> complex:
    """Tr(rho(f) exp(-beta H)) / Tr(exp(-beta H))."""
    if not basis:
        raise OracleError("Gibbs state on an empty basis")
    weights = expm(-beta * hamiltonian(basis, table, mode).matrix)
    operator = represent(f, basis, table, strict=strict).matrix
    return complex(np.trace(operator @ weights) / np.trace(weights))


def spectral_summary(basis: Sequence[str], table: CompositionTable, mode: EvolutionMode = EvolutionMode.RIGHT,
                     tolerance: Optional[float] = None) -> SpectralSummary:
    """Eigenvalues of the Hamiltonian with multiplicities."""
    tolerance = settings.diagonal_tolerance if tolerance is None else tolerance
    h = hamiltonian(basis, table, mode).matrix
    values = np.linalg.eigvalsh(h.real) if h.size else np.array([])
    eigenvalues: List[float] = []
    multiplicities: List[int] = []
    for value in np.sort(values):
        if eigenvalues and abs(value - eigenvalues[-1]) <= tolerance:
            multiplicities[-1] += 1
        else:
            eigenvalues.append(float(value))
            multiplicities.append(1)
    return SpectralSummary(eigenvalues=eigenvalues, multiplicities=multiplicities)
