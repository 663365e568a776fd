import logging
import math
from functools import lru_cache
from typing import Dict, Mapping, Optional

from scipy.special import zeta as hurwitz_zeta
from sympy import divisors, factorint, isprime

from models.bounds import LocalizedOracle, MultiplicityOracle, PartitionFunctionResult
from models.table import CompositionTable, EvolutionMode
from services.convolution import multiplicity_counts
from services.exceptions import ImplementationFault, OracleError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _partition_count(n: int) -> int:
    # Euler's pentagonal recurrence
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        pentagonal = k * (3 * k - 1) // 2
        if pentagonal > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * (_partition_count(n - pentagonal) + _partition_count(n - pentagonal - k))
        k += 1
    return total


class BoundsCalculator:
    """Multiplicity bounds, homotopy dimensions and partition functions"""

    @staticmethod
    def partitions(n: int) -> int:
        if n < 0:
            raise ValueError("p(n) needs n >= 0")
        for i in range(n + 1):
            _partition_count(i)
        return _partition_count(n)

    @staticmethod
    def moebius(d: int) -> int:
        if d < 1:
            raise ValueError("mu(d) needs d >= 1")
        exponents = factorint(d).values()
        if any(e > 1 for e in exponents):
            return 0
        return -1 if len(exponents) % 2 else 1

    @staticmethod
    def necklace_Q(a: int, b: int) -> int:
        """Q(a, b) = (1/a) sum over d | a of mu(d) b^(a/d)."""
        if a < 1 or b < 0:
            raise ValueError("Q(a, b) needs a >= 1 and b >= 0")
        total = sum(BoundsCalculator.moebius(d) * b ** (a // d) for d in map(int, divisors(a)))
        value, remainder = divmod(total, a)
        if remainder:
            raise ImplementationFault(f"Q({a},{b}) = {total}/{a} is not an integer")
        return value

    @staticmethod
    def rational_homotopy_dim(k: int, n: int) -> int:
        """Dimension D of pi_k(B_n) tensor Q."""
        if k < 1 or n < 1:
            raise ValueError("need k >= 1 and n >= 1")
        p = BoundsCalculator.partitions(n)
        b = p - 1
        if k == 4:
            return p
        if k % 12 in (1, 4, 10) and k not in (1, 4):
            return BoundsCalculator.necklace_Q((k - 1) // 3, b)
        if k % 12 == 7:
            return BoundsCalculator.necklace_Q((k - 1) // 3, b) + BoundsCalculator.necklace_Q((k - 1) // 6, b)
        return 0

    @staticmethod
    def zeta_partial(beta: float, n_max: int) -> float:
        return math.fsum(n ** -beta for n in range(1, n_max + 1))

    @staticmethod
    def partition_function(beta: float, oracle: MultiplicityOracle, n_max: int) -> PartitionFunctionResult:
        """Partial sum of N_n n^-beta, with the zeta lower bracket and the optional upper one."""
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        value = math.fsum(oracle.value(n) * n ** -beta for n in range(1, n_max + 1))
        upper = None
        if all(oracle.upper_value(n) is not None for n in range(1, n_max + 1)):
            upper = math.fsum(oracle.upper_value(n) * n ** -beta for n in range(1, n_max + 1))
        return PartitionFunctionResult(
            beta=beta,
            n_max=n_max,
            value=value,
            zeta_lower=BoundsCalculator.zeta_partial(beta, n_max),
            upper=upper,
        )

    @staticmethod
    def _check_prime(p: int, oracle: LocalizedOracle) -> None:
        if not isprime(p):
            raise OracleError(f"Localization needs a prime, got {p}")
        if oracle.prime is not None and oracle.prime != p:
            raise OracleError(f"Oracle is localized at {oracle.prime}, not {p}")

    @staticmethod
    def localized_zeta(beta: float, p: int, oracle: LocalizedOracle, n_max: int) -> float:
        BoundsCalculator._check_prime(p, oracle)
        return math.fsum(oracle.value(n) * n ** -beta for n in range(1, n_max + 1))

    @staticmethod
    def localized_zeta_closed_form(beta: float, p: int, oracle: LocalizedOracle) -> float:
        """Full sum for a periodic oracle: T^-beta times sum of N_r zeta(beta, r/T)."""
        BoundsCalculator._check_prime(p, oracle)
        if not oracle.period:
            raise OracleError("Closed form needs a periodic oracle")
        if beta <= 1:
            raise OracleError("The series converges only for beta > 1")
        period = len(oracle.period)
        return period ** -beta * math.fsum(
            count * float(hurwitz_zeta(beta, r / period)) for r, count in enumerate(oracle.period, start=1)
        )

    @staticmethod
    def gibbs_functional(f_values: Mapping[str, float], beta: float, basis: Mapping[str, int],
                         oracle: Optional[MultiplicityOracle] = None) -> float:
        """Weighted average of f over class representatives with weights N_n n^-beta."""
        if not basis:
            raise OracleError("Gibbs functional on an empty basis")
        missing = [label for label in basis if label not in f_values]
        if missing:
            raise OracleError(f"No value of f for {missing[0]}")
        weights = {
            label: (oracle.value(n) if oracle else 1) * n ** -beta
            for label, n in basis.items()
        }
        total = math.fsum(weights.values())
        return math.fsum(weights[label] * f_values[label] for label in basis) / total

    @staticmethod
    def oracle_from_table(table: CompositionTable, graph: str,
                          mode: EvolutionMode = EvolutionMode.RIGHT) -> MultiplicityOracle:
        """N_n read off a (quotient) table: labels of degree n with target `graph`."""
        counts: Dict[int, int] = dict(multiplicity_counts(table, graph, mode))
        logger.info(f"Multiplicity oracle for {graph}: {counts}")
        return MultiplicityOracle(counts=counts)
