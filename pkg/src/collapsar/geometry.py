"""Collapse geometry and per-mode squeezing parameters.

A thin null shell of mass ``m`` collapsing along advanced time forms a
horizon at ``v_H = v0 - 4m`` and radiates at the Hawking temperature
``T_H = 1/(8 pi m)``.  Every field mode of frequency ``omega`` is pair
produced in a two-mode squeezed state whose squeezing angle depends on
geometry only through the dimensionless combination ``x = 4 pi m omega``,
equal to ``omega / (2 T_H)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import SqueezingOverflowError

FOUR_PI = 4.0 * math.pi

# Modes softer than this (in units of x) squeeze so strongly that the
# truncated bosonic representation downstream becomes untrustworthy.
X_MIN_DEFAULT = 1e-6

# Tolerance on the w = e^{-x} consistency check inside SqueezingParams.
# Must absorb a log/exp round trip at x up to ~745 (relative error there
# is about x * eps ~ 8e-14).
_WEIGHT_RTOL = 1e-12


class Statistics(str, Enum):
    """Exchange statistics of a field mode."""

    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class BlackHoleParams:
    """Collapsing shell of mass ``mass``, crossing r = 0 at advanced time ``v0``."""

    mass: float
    v0: float = 0.0

    def __post_init__(self) -> None:
        if not (isinstance(self.mass, (int, float)) and math.isfinite(self.mass) and self.mass > 0.0):
            raise ValueError(f"mass must be a finite positive real, got {self.mass!r}")
        if not (isinstance(self.v0, (int, float)) and math.isfinite(self.v0)):
            raise ValueError(f"v0 must be a finite real, got {self.v0!r}")


@dataclass(frozen=True)
class ModeChannel:
    """One radiated field mode: frequency ``omega`` and its exchange statistics."""

    omega: float
    statistics: Statistics

    def __post_init__(self) -> None:
        if not (isinstance(self.omega, (int, float)) and math.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"omega must be a finite positive real, got {self.omega!r}")
        object.__setattr__(self, "statistics", Statistics(self.statistics))


@dataclass(frozen=True)
class SqueezingParams:
    """Two-mode squeezing of one horizon/outgoing mode pair.

    ``boltzmann_weight`` is ``w = e^{-x}``.  The squeezing angle satisfies
    ``tanh r = w`` for bosons (r unbounded) and ``tan r = w`` for fermions
    (r in (0, pi/4]).  Underflow edges are representable: ``w == 0.0``
    denotes a mode frozen out to the vacuum, and ``w == 1.0`` (reachable
    only for x below ~1e-16) denotes maximal squeezing, with ``r = inf``
    in the bosonic case.
    """

    statistics: Statistics
    r: float
    x: float
    boltzmann_weight: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        w = self.boltzmann_weight
        if not (isinstance(w, (int, float)) and 0.0 <= w <= 1.0):
            raise ValueError(f"boltzmann_weight must lie in [0, 1], got {w!r}")
        if not (isinstance(self.x, (int, float)) and self.x > 0.0):
            raise ValueError(f"x must be positive, got {self.x!r}")
        if not (isinstance(self.r, (int, float)) and self.r >= 0.0):
            raise ValueError(f"r must be nonnegative, got {self.r!r}")
        we = math.exp(-self.x)
        if abs(w - we) > _WEIGHT_RTOL * max(w, we):
            raise ValueError(
                f"inconsistent parameters: boltzmann_weight {w!r} vs e^-x {we!r}"
            )
        if self.statistics is Statistics.BOSON:
            back = math.tanh(self.r)
        else:
            if self.r > math.pi / 4.0:
                raise ValueError(f"fermionic r must not exceed pi/4, got {self.r!r}")
            back = math.tan(self.r)
        # 4 ulp: covers the measured worst case of the atanh/tanh round trip.
        if abs(back - w) > 4.0 * math.ulp(max(w, 1e-300)):
            raise ValueError(
                f"inconsistent parameters: r {self.r!r} does not reproduce weight {w!r}"
            )

    def to_json_dict(self) -> dict:
        """Serialisable header identifying the squeezing: statistics, r, x."""
        return {"statistics": self.statistics.value, "r": self.r, "x": self.x}

    @classmethod
    def from_x(cls, statistics: Statistics | str, x: float) -> "SqueezingParams":
        """Build squeezing parameters from the dimensionless ratio x = 4 pi m omega."""
        statistics = Statistics(statistics)
        if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0.0):
            raise ValueError(f"x must be a finite positive real, got {x!r}")
        w = math.exp(-x)
        if statistics is Statistics.BOSON:
            r = math.inf if w == 1.0 else math.atanh(w)
        else:
            r = math.atan(w)
        return cls(statistics=statistics, r=r, x=float(x), boltzmann_weight=w)

    @classmethod
    def from_r(cls, statistics: Statistics | str, r: float) -> "SqueezingParams":
        """Build squeezing parameters from the squeezing angle itself."""
        statistics = Statistics(statistics)
        if not (isinstance(r, (int, float)) and math.isfinite(r) and r > 0.0):
            raise ValueError(f"r must be a finite positive real, got {r!r}")
        if statistics is Statistics.BOSON:
            w = math.tanh(r)
        else:
            if r > math.pi / 4.0:
                raise ValueError(f"fermionic r must lie in (0, pi/4], got {r!r}")
            w = math.tan(r)
        if w >= 1.0:
            raise ValueError(
                f"r {r!r} rounds to maximal squeezing; construct via from_x instead"
            )
        x = -math.log(w)
        return cls(statistics=statistics, r=float(r), x=x, boltzmann_weight=w)


def horizon_formation(params: BlackHoleParams) -> float:
    """Advanced time at which the last escaping ray leaves: v_H = v0 - 4m."""
    return params.v0 - 4.0 * params.mass


def hawking_temperature(params: BlackHoleParams) -> float:
    """Temperature of the late-time radiation, 1/(8 pi m)."""
    return 1.0 / ((8.0 * math.pi) * params.mass)


def dimensionless_x(params: BlackHoleParams, channel: ModeChannel) -> float:
    """Return x = 4 pi m omega for the given mode.

    The product is evaluated as ((4 pi) * m) * omega in that fixed order, so
    rescalings (k m, omega / k) with k an exact power of two reproduce x bit
    for bit.
    """
    return (FOUR_PI * params.mass) * channel.omega


def squeezing_for(
    params: BlackHoleParams,
    channel: ModeChannel,
    x_min: float = X_MIN_DEFAULT,
) -> SqueezingParams:
    """Squeezing parameters of the pair state produced in ``channel``.

    Parameters
    ----------
    params, channel:
        Geometry and mode under consideration.
    x_min:
        Infrared floor on x.  Modes below it raise SqueezingOverflowError
        rather than silently produce a squeezing too large to truncate.
        Pass 0.0 to disable the floor on closed-form-only paths.
    """
    x = dimensionless_x(params, channel)
    if x < x_min:
        raise SqueezingOverflowError(
            f"x = {x!r} below floor {x_min!r}: mode too soft for a faithful "
            f"truncated representation"
        )
    return SqueezingParams.from_x(channel.statistics, x)
