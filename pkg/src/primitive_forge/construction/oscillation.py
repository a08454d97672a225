"""
Sampled oscillation of f on the members of a dyadic partition.

The oscillation of f on a member is max f - min f there; the total oscillation
of a partition is the largest member oscillation. A black-box f only gives
samples, so each member is sampled at k+1 equally spaced points (endpoints
included). With k a power of two the grid of level n is a subset of the grid
of level n+1. Sampled total oscillation is non-increasing in n only when the
global sample set stays fixed (k halves per level); with k fixed per member,
finer levels see new samples and the estimate can grow.

Sampled values underestimate the true oscillation. With a Lipschitz constant L
each member value is inflated by 2*L*(hi - lo)/k, which makes it a guaranteed
upper bound.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigurationError, InvalidIntervalError
from .integrand import Evaluable, as_integrand
from .interpolant import PiecewiseLinear, eval_phi
from .partition import DyadicPartition

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 16
DEFAULT_CHUNK_SIZE = 1 << 16


class Rigor(str, Enum):
    """How member oscillations are obtained."""
    SAMPLED = "sampled"
    LIPSCHITZ = "lipschitz"


class RigorMode(BaseModel):
    """Rigor plus the Lipschitz constant it needs, if any."""

    kind: Rigor = Field(default=Rigor.SAMPLED, description="sampled or lipschitz-inflated")
    lipschitz: Optional[float] = Field(
        default=None,
        ge=0,
        allow_inf_nan=False,
        description="Lipschitz constant L for inflation",
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_constant(self) -> "RigorMode":
        if self.kind is Rigor.LIPSCHITZ and self.lipschitz is None:
            raise ValueError("lipschitz rigor needs a Lipschitz constant")
        if self.kind is Rigor.SAMPLED and self.lipschitz is not None:
            raise ValueError("sampled rigor takes no Lipschitz constant")
        return self

    @classmethod
    def sampled(cls) -> "RigorMode":
        return cls(kind=Rigor.SAMPLED)

    @classmethod
    def lipschitz_inflated(cls, lipschitz: float) -> "RigorMode":
        return cls(kind=Rigor.LIPSCHITZ, lipschitz=lipschitz)

    @property
    def certified(self) -> bool:
        return self.kind is Rigor.LIPSCHITZ

    def inflation(self, widths: NDArray[np.float64], k: int) -> NDArray[np.float64]:
        if self.lipschitz is None:
            return np.zeros_like(widths)
        return 2.0 * self.lipschitz * widths / k


class OscillationReport(BaseModel):
    """Per-member oscillations of f on one partition and their maximum."""

    level: int = Field(..., ge=1, description="Partition level n")
    omegas: np.ndarray = Field(..., description="Per-member oscillation estimates")
    omega: float = Field(..., ge=0, description="Total oscillation: max of omegas")
    sample_density: int = Field(..., ge=2, description="Sub-samples per member")
    rigor: RigorMode = Field(default_factory=RigorMode.sampled)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_total(self) -> "OscillationReport":
        if self.omegas.size and float(self.omegas.max()) != self.omega:
            raise ValueError("omega must equal the maximum member oscillation")
        if np.any(self.omegas < 0):
            raise ValueError("member oscillations must be non-negative")
        return self


@dataclass(frozen=True)
class SampleBlock:
    """Samples for members first..first+m-1: points and values of shape (m, k+1)."""

    first: int
    points: NDArray[np.float64]
    values: NDArray[np.float64]

    @property
    def knots(self) -> NDArray[np.float64]:
        """The m+1 partition knots covered by this block."""
        return np.append(self.points[:, 0], self.points[-1, -1])

    @property
    def knot_values(self) -> NDArray[np.float64]:
        return np.append(self.values[:, 0], self.values[-1, -1])


def _check_samples(k: int) -> None:
    if k < 2:
        raise ConfigurationError(f"Sample count k must be at least 2, got {k}")


def sample_grid(p: DyadicPartition, k: int, first: int, last: int) -> NDArray[np.float64]:
    """
    Sample points for members first..last-1, shape (last - first, k + 1).

    Column 0 and column k are the member's knots, bit-identical to p.knots.
    """
    _check_samples(k)
    fine = p.step / k
    j = np.arange(first * k, last * k + 1, dtype=np.float64)
    flat = p.a + j * fine
    knots = p.knot_range(first, last)
    flat[::k] = knots
    m = last - first
    grid = np.empty((m, k + 1), dtype=np.float64)
    grid[:, :k] = flat[:-1].reshape(m, k)
    grid[:, k] = knots[1:]
    return grid


def sweep(
    f: Evaluable, p: DyadicPartition, k: int, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> Iterator[SampleBlock]:
    """
    Evaluate f on the sample grid of p, one block of members at a time.

    Raises:
        DomainError: With the offending sample point
    """
    integrand = as_integrand(f)
    chunk_size = max(1, chunk_size)
    for first in range(0, p.segments, chunk_size):
        last = min(first + chunk_size, p.segments)
        points = sample_grid(p, k, first, last)
        yield SampleBlock(first=first, points=points, values=integrand(points))


def block_oscillations(
    block: SampleBlock, k: int, rigor: Optional[RigorMode] = None
) -> NDArray[np.float64]:
    """Member oscillations for one block, inflated when rigor asks for it."""
    rigor = rigor or RigorMode.sampled()
    omegas = block.values.max(axis=1) - block.values.min(axis=1)
    widths = block.points[:, -1] - block.points[:, 0]
    return omegas + rigor.inflation(widths, k)


def block_gaps(block: SampleBlock) -> NDArray[np.float64]:
    """
    Largest |f - phi| per member over the block's samples.

    phi is the chord through the member's knot samples, evaluated the way
    eval_phi does, so for phi = interpolate(f, p) this matches
    interpolation_gap member by member.
    """
    x0 = block.points[:, :1]
    d0 = block.values[:, :1]
    d1 = block.values[:, -1:]
    slopes = (d1 - d0) / (block.points[:, -1:] - x0)
    phi = np.clip(d0 + slopes * (block.points - x0), np.minimum(d0, d1), np.maximum(d0, d1))
    phi[:, 0] = block.values[:, 0]
    phi[:, -1] = block.values[:, -1]
    gaps: NDArray[np.float64] = np.abs(block.values - phi).max(axis=1)
    return gaps


def interval_oscillation(
    f: Evaluable, lo: float, hi: float, k: int = DEFAULT_SAMPLES,
    rigor: Optional[RigorMode] = None,
) -> float:
    """
    Oscillation of f on [lo, hi] from the samples lo + j*(hi - lo)/k, j = 0..k.

    Args:
        f: Expression, callable or Integrand
        lo: Left end
        hi: Right end, lo < hi
        k: Number of sub-intervals sampled (k + 1 points)
        rigor: Sampled (default) or Lipschitz-inflated

    Returns:
        max - min over the samples, plus 2*L*(hi - lo)/k when inflated

    Raises:
        ConfigurationError: If k < 2
        InvalidIntervalError: If lo >= hi
        DomainError: With the offending sample point
    """
    _check_samples(k)
    if not lo < hi:
        raise InvalidIntervalError(f"Need lo < hi, got [{lo}, {hi}]")
    rigor = rigor or RigorMode.sampled()
    points = lo + np.arange(k + 1, dtype=np.float64) * ((hi - lo) / k)
    points[-1] = hi
    values = as_integrand(f)(points)
    omega = float(values.max() - values.min())
    if rigor.lipschitz is not None:
        omega += 2.0 * rigor.lipschitz * (hi - lo) / k
    return omega


def total_oscillation(
    f: Evaluable,
    p: DyadicPartition,
    k: int = DEFAULT_SAMPLES,
    rigor: Optional[RigorMode] = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> OscillationReport:
    """
    Oscillation of f on every member of p and their maximum.

    Args:
        f: Expression, callable or Integrand
        p: Dyadic partition
        k: Sub-samples per member; a power of two keeps grids nested
        rigor: Sampled (default) or Lipschitz-inflated
        chunk_size: Members evaluated per call of f

    Returns:
        OscillationReport for level p.level

    Raises:
        DomainError: With the offending sample point
    """
    rigor = rigor or RigorMode.sampled()
    parts = [block_oscillations(block, k, rigor) for block in sweep(f, p, k, chunk_size)]
    omegas = np.concatenate(parts)
    omegas.flags.writeable = False
    report = OscillationReport(
        level=p.level,
        omegas=omegas,
        omega=float(omegas.max()),
        sample_density=k,
        rigor=rigor,
    )
    logger.debug(f"Level {p.level}: total oscillation {report.omega!r} ({rigor.kind.value})")
    return report


def interpolation_gap(
    f: Evaluable, pl: PiecewiseLinear, k: int = DEFAULT_SAMPLES,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> float:
    """
    Largest |f(x) - phi(x)| over the sample grid of pl's partition.

    This is the quantity the total oscillation bounds.

    Raises:
        DomainError: With the offending sample point
    """
    gap = 0.0
    for block in sweep(f, pl.partition, k, chunk_size):
        phi = eval_phi(pl, block.points)
        gap = max(gap, float(np.abs(block.values - phi).max()))
    return gap
