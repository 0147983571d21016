from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import settings


def _frozen_array(value: Any, dtype=float) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


class SeriesControl(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-16, gt=0)
    max_terms: int = Field(default=100_000, ge=1)


class SeriesResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: complex
    terms: int = Field(ge=1)


class EllipticTriple(BaseModel):
    """Complete elliptic integrals K, E and D = (K - E)/k^2 at modulus k."""

    model_config = ConfigDict(frozen=True)

    k: float
    K: float
    E: float
    D: float


class RecurrenceCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value)

    def __len__(self) -> int:
        return len(self.values)


class TruncatedOperator(BaseModel):
    """An N x N truncation of an operator on the Fock basis {e_0, ..., e_(N-1)}.

    Entries are exact on interior indices; the last row and column feel the cut.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    dim: int = Field(ge=1)
    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value, dtype=complex)

    @model_validator(mode="after")
    def _check_shape(self):
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError(f"{self.name}: entries shape {self.entries.shape} does not match dim={self.dim}")
        return self

    def apply(self, vector) -> np.ndarray:
        return self.entries @ np.asarray(vector, dtype=complex)

    def interior(self) -> np.ndarray:
        return self.entries[:-1, :-1]

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(name=f"{self.name}{other.name}", dim=self.dim, entries=self.entries @ other.entries)

    def commutator(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(
            name=f"[{self.name},{other.name}]",
            dim=self.dim,
            entries=self.entries @ other.entries - other.entries @ self.entries,
        )


class Spectrum(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    convention: Literal["H_eigen", "GK"]
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value)


class MomentSequence(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value)


class WeightAtom(BaseModel):
    model_config = ConfigDict(frozen=True)

    location: float
    mass: float


class WeightDensity(BaseModel):
    """Absolutely continuous density on [lower, upper] plus point masses."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    density: Callable[[float], float]
    atoms: List[WeightAtom]
    lower: float
    upper: float

    @property
    def atom(self) -> WeightAtom:
        return self.atoms[0]


class BGMeasure(WeightDensity):
    pass


class GKWeight(WeightDensity):
    pass


class QuadratureResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    err_estimate: float = Field(ge=0)
    evaluations: int = Field(gt=0)


class BGState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    z: complex
    dim: int
    amplitudes: np.ndarray
    norm_sq_raw: float

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value, dtype=complex)


class GKState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    J: float
    gamma: float
    dim: int
    amplitudes: np.ndarray
    norm_sq_raw: float

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _lock(cls, value):
        return _frozen_array(value, dtype=complex)


class EigenResidual(BaseModel):
    model_config = ConfigDict(frozen=True)

    interior: float
    boundary: float


class MomentRow(BaseModel):
    n: int
    computed: float
    expected: float
    rel_error: float
    passed: bool


class MomentReport(BaseModel):
    name: str
    rows: List[MomentRow]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def max_rel_error(self) -> float:
        return max(row.rel_error for row in self.rows)


class EllipticFinding(BaseModel):
    """Comparison of a printed elliptic closed form with its series value."""

    J: float
    quantity: Literal["mean_n", "mean_n2"]
    series: float
    elliptic: float
    ratio: float
    rel_deviation: float
    agrees: bool


class CheckResult(BaseModel):
    name: str
    computed: Optional[float] = None
    expected: Optional[float] = None
    rel_error: Optional[float] = None
    passed: bool
    diagnostic: str = ""


class Finding(BaseModel):
    """A discrepancy between a printed formula and its computed value."""

    name: str
    message: str
    computed: Optional[float] = None
    printed: Optional[float] = None


class VerificationReport(BaseModel):
    checks: List[CheckResult] = []
    findings: List[Finding] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class Grid(BaseModel):
    """Evenly spaced sample points, written START:STOP:COUNT on the command line."""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    count: int = Field(ge=1)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} must look like START:STOP:COUNT")
        return cls(start=float(parts[0]), stop=float(parts[1]), count=int(parts[2]))

    @model_validator(mode="after")
    def _check_order(self):
        if self.count > 1 and self.stop < self.start:
            raise ValueError(f"grid stop {self.stop} is below start {self.start}")
        return self

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


class RunConfig(BaseModel):
    command: Literal["verify", "table", "eval", "overlap"]
    truncation: int = Field(default=128, ge=3)
    tol: float = Field(default=1e-8, gt=0, lt=1)
    output_format: Literal["json", "csv"] = "json"
    output_path: Optional[Path] = None
    grid_j: Optional[Grid] = None
    grid_x: Optional[Grid] = None
    z: List[complex] = []
    J: List[float] = []
    gamma: List[float] = []
    only: List[str] = []

    @model_validator(mode="after")
    def _check_states(self):
        if self.gamma and len(self.gamma) != len(self.J):
            raise ValueError("every --J needs a matching --gamma")
        if self.command in ("eval", "overlap") and bool(self.z) == bool(self.J):
            raise ValueError(f"{self.command} needs either --z or --J/--gamma, not both")
        return self

    def meta(self) -> Dict[str, Any]:
        return {"truncation": self.truncation, "tol": self.tol, "version": settings.VERSION}
