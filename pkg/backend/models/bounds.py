import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MultiplicityOracle(BaseModel):
    """N_n: number of classes of degree n, with optional upper bounds (#pi_3 values)."""

    model_config = ConfigDict(populate_by_name=True)

    counts: Dict[int, int] = Field(default_factory=dict, alias='N')
    upper: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode='after')
    def check_bracket(self):
        for n, value in self.counts.items():
            if n < 1:
                raise ValueError(f"degree {n} must be positive")
            if value < 1:
                raise ValueError(f"N_{n} = {value}; every degree carries at least the class of the cyclic cover")
            if n in self.upper and self.upper[n] < value:
                raise ValueError(f"upper bound {self.upper[n]} below N_{n} = {value}")
        return self

    @classmethod
    def constant(cls, value: int, n_max: int) -> 'MultiplicityOracle':
        return cls(counts={n: value for n in range(1, n_max + 1)})

    def value(self, n: int) -> int:
        if n not in self.counts:
            from services.exceptions import OracleError

            raise OracleError(f"Oracle has no value for n = {n}", n=n)
        return self.counts[n]

    def upper_value(self, n: int) -> Optional[int]:
        return self.upper.get(n)


class LocalizedOracle(BaseModel):
    """Localized counts at a prime: explicit values or one period repeated."""

    model_config = ConfigDict(populate_by_name=True)

    prime: Optional[int] = Field(default=None, alias='p')
    counts: Dict[int, int] = Field(default_factory=dict, alias='N')
    period: List[int] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_counts(self):
        if any(v < 0 for v in list(self.counts.values()) + list(self.period)):
            raise ValueError("localized counts must be non-negative")
        return self

    @classmethod
    def periodic(cls, values: List[int], prime: Optional[int] = None) -> 'LocalizedOracle':
        return cls(prime=prime, period=list(values))

    def value(self, n: int) -> int:
        if n in self.counts:
            return self.counts[n]
        if self.period:
            return self.period[(n - 1) % len(self.period)]
        from services.exceptions import OracleError

        raise OracleError(f"Localized oracle has no value for n = {n}", n=n)


class SpectralSummary(BaseModel):
    eigenvalues: List[float]
    multiplicities: List[int]

    @model_validator(mode='after')
    def check_spectrum(self):
        if len(self.eigenvalues) != len(self.multiplicities):
            raise ValueError("one multiplicity per eigenvalue")
        if any(b <= a for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        return self

    @property
    def degrees(self) -> List[int]:
        return [int(round(math.exp(value))) for value in self.eigenvalues]


class PartitionFunctionResult(BaseModel):
    beta: float
    n_max: int
    value: float
    zeta_lower: float
    upper: Optional[float] = None
