"""
Refinement loop: build P_n, phi_n and the total oscillation for n = 1, 2, ...
until the uniform bound on |F - Phi_n| meets the tolerance.

Since |f - phi_n| <= Omega_n on [a, b], integrating from a to x gives
|F(x) - Phi_n(x)| <= Omega_n * (x - a) <= Omega_n * (b - a). That product is
the certificate's error bound.

Refining never increases the true total oscillation, so the smallest
certified Omega seen along the trajectory remains a valid bound at every
later level. The certificate carries that running minimum, which makes its
error bound non-increasing in n.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .construction.antiderivative import PiecewiseQuadratic, StreamingIntegral, integrate_pl
from .construction.integrand import Evaluable, Integrand
from .construction.interpolant import from_values
from .construction.oscillation import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_SAMPLES,
    RigorMode,
    block_gaps,
    block_oscillations,
    sweep,
)
from .construction.partition import (
    ABSOLUTE_MAX_LEVEL,
    DEFAULT_MAX_LEVEL,
    DyadicPartition,
    build,
)
from .errors import ConfigurationError, DomainError, LevelOutOfRangeError, OutOfDomainError

logger = logging.getLogger(__name__)


class ConvergenceCertificate(BaseModel):
    """How far Phi_n can be from the true antiderivative F on [a, b]."""

    a: float = Field(..., description="Left endpoint")
    b: float = Field(..., description="Right endpoint")
    level: int = Field(..., ge=1, description="Partition level n of the returned Phi_n")
    omega: float = Field(..., ge=0, description="Total oscillation bound carried to level n")
    level_omega: float = Field(..., ge=0, description="Total oscillation estimated at level n itself")
    error_bound: float = Field(..., ge=0, description="omega * (b - a)")
    tolerance: float = Field(..., gt=0, description="Requested uniform tolerance")
    met: bool = Field(..., description="Whether error_bound <= tolerance")
    rigor: RigorMode = Field(default_factory=RigorMode.sampled)
    evaluations: int = Field(..., ge=0, description="Calls of f, counted per point")
    max_level: int = Field(default=DEFAULT_MAX_LEVEL, ge=1, le=ABSOLUTE_MAX_LEVEL)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_invariants(self) -> "ConvergenceCertificate":
        if self.error_bound != self.omega * (self.b - self.a):
            raise ValueError("error_bound must equal omega * (b - a)")
        if self.met != (self.error_bound <= self.tolerance):
            raise ValueError("met must equal error_bound <= tolerance")
        if self.level > self.max_level:
            raise ValueError("level exceeds max_level")
        return self

    @property
    def status(self) -> str:
        """'certified' under Lipschitz inflation, otherwise 'heuristic'."""
        return "certified" if self.rigor.certified else "heuristic"


class Construction(NamedTuple):
    antiderivative: PiecewiseQuadratic
    certificate: ConvergenceCertificate


class IntegralResult(NamedTuple):
    value: float
    certificate: ConvergenceCertificate


class LevelRow(BaseModel):
    """One row of a convergence table."""

    level: int
    omega: float = Field(..., description="Total oscillation estimated at this level")
    certified_omega: float = Field(..., description="Running minimum carried into the bound")
    error_bound: float
    gap: float = Field(..., ge=0, description="Largest |f - phi_n| over the sample grid")
    integral: float = Field(..., description="Phi_n(b)")
    change: Optional[float] = Field(default=None, description="|Phi_n(b) - Phi_{n-1}(b)|")
    evaluations: int
    met: bool


@dataclass
class _LevelState:
    partition: DyadicPartition
    level_omega: float
    omega: float
    integral: float
    knot_values: Optional[NDArray[np.float64]]
    evaluations: int
    gap: Optional[float] = None


def _check_request(tolerance: float, max_level: int, samples: int) -> None:
    if not (math.isfinite(tolerance) and tolerance > 0):
        raise ConfigurationError(f"Tolerance must be a positive finite number, got {tolerance}")
    if not 1 <= max_level <= ABSOLUTE_MAX_LEVEL:
        raise LevelOutOfRangeError(
            f"max_level must be in [1, {ABSOLUTE_MAX_LEVEL}], got {max_level}"
        )
    if samples < 2:
        raise ConfigurationError(f"Sample count must be at least 2, got {samples}")


def _error_bound(omega: float, a: float, b: float) -> float:
    bound = omega * (b - a)
    if not math.isfinite(bound):
        raise DomainError(
            f"error bound {omega!r} * ({b!r} - {a!r}) is not finite; f varies too much on [a, b]"
        )
    return bound


def _walk_levels(
    integrand: Integrand,
    a: float,
    b: float,
    levels: Sequence[int],
    max_level: int,
    rigor: RigorMode,
    samples: int,
    chunk_size: int,
    keep_values: bool,
    with_gap: bool = False,
) -> Iterator[_LevelState]:
    best = math.inf
    for n in levels:
        p = build(a, b, n, max_level=max_level)
        level_omega = 0.0
        gap = 0.0
        fold = StreamingIntegral()
        parts: List[NDArray[np.float64]] = []
        last_value = 0.0
        for block in sweep(integrand, p, samples, chunk_size):
            level_omega = max(level_omega, float(block_oscillations(block, samples, rigor).max()))
            if with_gap:
                gap = max(gap, float(block_gaps(block).max()))
            fold.add_block(block.knots, block.knot_values)
            if keep_values:
                parts.append(block.values[:, 0])
                last_value = float(block.values[-1, -1])
        knot_values = np.append(np.concatenate(parts), last_value) if keep_values else None
        if not math.isfinite(fold.value):
            raise DomainError(f"integral of phi overflows at level {n}")

        best = min(best, level_omega)
        bound = _error_bound(best, a, b)
        logger.debug(
            f"Level {n}: omega={level_omega!r} carried={best!r} "
            f"bound={bound!r} evaluations={integrand.evaluations}"
        )
        yield _LevelState(
            partition=p,
            level_omega=level_omega,
            omega=best,
            integral=fold.value,
            knot_values=knot_values,
            evaluations=integrand.evaluations,
            gap=gap if with_gap else None,
        )


def _certificate(
    state: _LevelState, tolerance: float, rigor: RigorMode, max_level: int
) -> ConvergenceCertificate:
    p = state.partition
    error_bound = _error_bound(state.omega, p.a, p.b)
    return ConvergenceCertificate(
        a=p.a,
        b=p.b,
        level=p.level,
        omega=state.omega,
        level_omega=state.level_omega,
        error_bound=error_bound,
        tolerance=tolerance,
        met=error_bound <= tolerance,
        rigor=rigor,
        evaluations=state.evaluations,
        max_level=max_level,
    )


def _run(
    f: Evaluable,
    a: float,
    b: float,
    tolerance: float,
    max_level: int,
    rigor: Optional[RigorMode],
    samples: int,
    level: Optional[int],
    chunk_size: int,
    keep_values: bool,
) -> tuple[_LevelState, ConvergenceCertificate]:
    _check_request(tolerance, max_level, samples)
    a, b = float(a), float(b)
    rigor = rigor or RigorMode.sampled()
    if level is not None:
        if not 1 <= level <= max_level:
            raise LevelOutOfRangeError(f"Forced level must be in [1, {max_level}], got {level}")
        levels: Sequence[int] = [level]
    else:
        levels = range(1, max_level + 1)

    integrand = Integrand(f)
    state: Optional[_LevelState] = None
    for state in _walk_levels(
        integrand, a, b, levels, max_level, rigor, samples, chunk_size, keep_values
    ):
        if state.omega * (b - a) <= tolerance:
            break
    assert state is not None

    certificate = _certificate(state, tolerance, rigor, max_level)
    if certificate.met:
        logger.info(
            f"Tolerance {tolerance!r} met at level {certificate.level} "
            f"(bound {certificate.error_bound!r}, {certificate.status})"
        )
    else:
        logger.info(
            f"Tolerance {tolerance!r} not met by level {certificate.level} "
            f"(bound {certificate.error_bound!r})"
        )
    return state, certificate


def construct_antiderivative(
    f: Evaluable,
    a: float,
    b: float,
    tolerance: float,
    max_level: int = DEFAULT_MAX_LEVEL,
    rigor: Optional[RigorMode] = None,
    samples: int = DEFAULT_SAMPLES,
    level: Optional[int] = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    materialize_limit: int = DEFAULT_MAX_LEVEL,
) -> Construction:
    """
    Construct Phi_n for the first level n whose bound meets the tolerance.

    Args:
        f: Expression, callable or Integrand; continuous on [a, b]
        a: Left endpoint
        b: Right endpoint
        tolerance: Uniform tolerance epsilon > 0
        max_level: Highest level tried; the last Phi_n is returned with
            met = False when the tolerance is not reached
        rigor: Sampled (default, heuristic) or Lipschitz-inflated (certified)
        samples: Sub-samples per member for the oscillation estimate
        level: Build only this level, bypassing the stopping rule
        chunk_size: Members evaluated per call of f
        materialize_limit: Highest level whose coefficients may be stored;
            the search stops there even if max_level is larger

    Returns:
        (PiecewiseQuadratic, ConvergenceCertificate)

    Raises:
        DomainError: If f leaves the reals at a knot or sample point
        InvalidIntervalError: If a >= b or an endpoint is not finite
        LevelOutOfRangeError: If max_level (or level) is out of range, or a
            forced level is above materialize_limit
    """
    _check_request(tolerance, max_level, samples)
    if level is not None and level > materialize_limit:
        raise LevelOutOfRangeError(
            f"Level {level} is above the materialization limit {materialize_limit}; "
            f"use definite_integral for Phi_n(b) alone"
        )
    if level is None and max_level > materialize_limit:
        logger.debug(f"Capping max_level {max_level} at materialize_limit {materialize_limit}")
        max_level = materialize_limit
    state, certificate = _run(
        f, a, b, tolerance, max_level, rigor, samples, level, chunk_size, keep_values=True
    )
    assert state.knot_values is not None
    antiderivative = integrate_pl(from_values(state.partition, state.knot_values))
    return Construction(antiderivative=antiderivative, certificate=certificate)


def definite_integral(
    f: Evaluable,
    a: float,
    b: float,
    tolerance: float,
    max_level: int = DEFAULT_MAX_LEVEL,
    rigor: Optional[RigorMode] = None,
    samples: int = DEFAULT_SAMPLES,
    level: Optional[int] = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> IntegralResult:
    """
    Phi_n(b) for the stopping level, computed in streaming mode.

    No segment coefficients are stored, so max_level may go up to 30. Under
    Lipschitz rigor the true integral lies within certificate.error_bound of
    the value. Arguments and errors as for construct_antiderivative.
    """
    state, certificate = _run(
        f, a, b, tolerance, max_level, rigor, samples, level, chunk_size, keep_values=False
    )
    return IntegralResult(value=state.integral, certificate=certificate)


def convergence_table(
    f: Evaluable,
    a: float,
    b: float,
    tolerance: float,
    max_level: int = DEFAULT_MAX_LEVEL,
    rigor: Optional[RigorMode] = None,
    samples: int = DEFAULT_SAMPLES,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> List[LevelRow]:
    """
    One row per level n = 1..max_level with the oscillation, bound and Phi_n(b).

    The loop does not stop at the tolerance; rows show convergence order. Each
    row also reports the largest sampled |f - phi_n|, which the level's own
    oscillation bounds.
    """
    _check_request(tolerance, max_level, samples)
    a, b = float(a), float(b)
    rigor = rigor or RigorMode.sampled()
    integrand = Integrand(f)
    rows: List[LevelRow] = []
    previous: Optional[float] = None
    for state in _walk_levels(
        integrand, a, b, range(1, max_level + 1), max_level, rigor, samples,
        chunk_size, keep_values=False, with_gap=True,
    ):
        error_bound = _error_bound(state.omega, a, b)
        assert state.gap is not None
        rows.append(
            LevelRow(
                level=state.partition.level,
                omega=state.level_omega,
                certified_omega=state.omega,
                error_bound=error_bound,
                gap=state.gap,
                integral=state.integral,
                change=None if previous is None else abs(state.integral - previous),
                evaluations=state.evaluations,
                met=error_bound <= tolerance,
            )
        )
        previous = state.integral
    return rows


def error_bound_at(
    cert: ConvergenceCertificate, x: Union[float, ArrayLike]
) -> Union[float, NDArray[np.float64]]:
    """
    Pointwise bound |F(x) - Phi_n(x)| <= omega * (x - a).

    Raises:
        OutOfDomainError: When x is outside [a, b]
    """
    points = np.asarray(x, dtype=np.float64)
    inside = (points >= cert.a) & (points <= cert.b)
    if not np.all(inside):
        bad = points if points.ndim == 0 else points[~inside][0]
        raise OutOfDomainError(f"x={float(bad)!r} is outside [{cert.a}, {cert.b}]")
    result = cert.omega * (points - cert.a)
    if points.ndim == 0:
        return float(result)
    return result
