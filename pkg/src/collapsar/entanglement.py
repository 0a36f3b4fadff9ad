"""Entanglement entropy of collapse radiation: closed forms, numerics, and sweeps.

Every quantity here comes in two independent routes that the tests hold
against each other: a closed-form expression in the squeezing parameters,
and a numerical route that builds the truncated pair state, traces out one
side, and diagonalises the remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSignChangeError, SqueezingOverflowError
from .fock import DensityOperator, mean_occupation, partial_trace, von_neumann_entropy
from .geometry import (
    BlackHoleParams,
    ModeChannel,
    SqueezingParams,
    Statistics,
    X_MIN_DEFAULT,
    dimensionless_x,
    squeezing_for,
)
from .states import (
    EPS_TAIL_DEFAULT,
    build_boson_state,
    build_fermion_state,
)

_LN2 = math.log(2.0)

# Occupation probabilities below this carry no usable information for the
# log-linear temperature fit.
_FIT_FLOOR = 1e-15

# Log grid on which crossover() confirms the sign structure of S_f - S_b.
_SCAN_LO = 1e-3
_SCAN_HI = 100.0
_SCAN_POINTS = 200

CSV_HEADER = (
    "x",
    "omega",
    "mass",
    "statistics",
    "S_closed",
    "S_numeric",
    "gap",
    "mean_occ",
    "T_ratio",
    "error",
)


def _require_statistics(squeezing: SqueezingParams, expected: Statistics) -> None:
    if squeezing.statistics is not expected:
        raise ValueError(
            f"expected {expected.value} squeezing, got {squeezing.statistics.value}"
        )


def boson_entropy(squeezing: SqueezingParams) -> float:
    """Closed-form single-mode entropy of a bosonic pair, in bits.

    Equals cosh^2(r) log2 cosh^2(r) - sinh^2(r) log2 sinh^2(r), evaluated
    in the equivalent stable form -log2(1-q) - q log2(q)/(1-q) with
    q = tanh^2(r).  Returns inf at the maximal-squeezing edge q == 1.
    """
    _require_statistics(squeezing, Statistics.BOSON)
    w = squeezing.boltzmann_weight
    q = w * w
    if q == 0.0:
        return 0.0
    if q >= 1.0:
        return math.inf
    return (-math.log1p(-q) - q * math.log(q) / (1.0 - q)) / _LN2


def boson_entropy_hyperbolic(squeezing: SqueezingParams) -> float:
    """Literal hyperbolic form of boson_entropy, kept as a cross check.

    Loses accuracy through cancellation once x drops below roughly 0.05
    and saturates to inf for r beyond the cosh overflow point; prefer
    boson_entropy everywhere outside diagnostic comparisons.
    """
    _require_statistics(squeezing, Statistics.BOSON)
    r = squeezing.r
    if r == 0.0:
        return 0.0
    if not math.isfinite(r) or r > 350.0:
        return math.inf
    ch2 = math.cosh(r) ** 2
    sh2 = math.sinh(r) ** 2
    return ch2 * math.log2(ch2) - sh2 * math.log2(sh2)


def _xlog2(p: float) -> float:
    return 0.0 if p == 0.0 else p * math.log2(p)


def fermion_entropy(squeezing: SqueezingParams) -> float:
    """Closed-form single-mode entropy of a fermionic pair, in bits.

    Equals -2 [cos^2 r log2 cos^2 r + sin^2 r log2 sin^2 r]; bounded by 2,
    the two bits of a maximally mixed particle/antiparticle slot pair.
    """
    _require_statistics(squeezing, Statistics.FERMION)
    w = squeezing.boltzmann_weight
    w2 = w * w
    denom = 1.0 + w2
    c2 = 1.0 / denom
    s2 = w2 / denom
    return -2.0 * (_xlog2(c2) + _xlog2(s2))


@dataclass(frozen=True)
class EntropyReport:
    """One mode's entanglement summary; field order matches the CSV schema."""

    x: float
    omega: float
    mass: float
    statistics: Statistics
    S_closed: float
    S_numeric: float
    gap: float
    mean_occ: float
    T_ratio: float
    error: str | None = None


def temperature_ratio_fit(rho: DensityOperator, x: float) -> float:
    """Radiation temperature read off the occupation spectrum, over T_H.

    Bosonic ladders get a least-squares fit of log p(n) against n;
    fermionic operators use the two-level ratio p(0,1)/p(0,0).  Returns 1
    for an exactly thermal spectrum and nan when the spectrum retains too
    little weight to fit.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0.0):
        raise ValueError(f"x must be a finite positive real, got {x!r}")
    diag = rho.diagonal()
    if isinstance(rho.basis[0], int):
        ns = np.asarray(rho.basis, dtype=np.float64)
        mask = diag > _FIT_FLOOR
        if int(mask.sum()) < 2:
            return math.nan
        slope = float(np.polyfit(ns[mask], np.log(diag[mask]), 1)[0])
        if not (math.isfinite(slope) and slope < 0.0):
            return math.nan
        return -2.0 * x / slope
    p00 = float(diag[rho.basis.index((0, 0))])
    p01 = float(diag[rho.basis.index((0, 1))])
    if p00 <= 0.0 or p01 <= 0.0 or p00 == p01:
        return math.nan
    return -2.0 * x / math.log(p01 / p00)


def entropy_report(
    params: BlackHoleParams,
    channel: ModeChannel,
    eps_tail: float = EPS_TAIL_DEFAULT,
    keep: str = "out",
    x_min: float = X_MIN_DEFAULT,
) -> EntropyReport:
    """Closed-form and numerical entropies for one mode, with thermality checks.

    The numerical column always goes the long way: build the truncated pair
    state, trace out the complementary side, diagonalise.  ``mean_occ`` is
    the particle-sector occupation of the kept side and ``T_ratio`` the
    fitted-to-Hawking temperature ratio.

    Raises SqueezingOverflowError when the mode cannot be represented;
    sweep() converts that into an in-band error row instead.
    """
    x = dimensionless_x(params, channel)
    sq = squeezing_for(params, channel, x_min=x_min)
    if sq.statistics is Statistics.BOSON:
        s_closed = boson_entropy(sq)
        state = build_boson_state(sq, eps_tail=eps_tail, x_min=x_min)
    else:
        s_closed = fermion_entropy(sq)
        state = build_fermion_state(sq)
    rho = partial_trace(state, keep=keep)
    s_numeric = von_neumann_entropy(rho, method="eigen")
    return EntropyReport(
        x=x,
        omega=float(channel.omega),
        mass=float(params.mass),
        statistics=sq.statistics,
        S_closed=s_closed,
        S_numeric=s_numeric,
        gap=abs(s_closed - s_numeric),
        mean_occ=mean_occupation(rho, "particle"),
        T_ratio=temperature_ratio_fit(rho, x),
    )


def _closed_form_entropy(statistics: Statistics, x: float) -> float:
    sq = SqueezingParams.from_x(statistics, x)
    if statistics is Statistics.BOSON:
        return boson_entropy(sq)
    return fermion_entropy(sq)


@dataclass(frozen=True)
class CrossoverResult:
    """Root of S_fermion - S_boson in x, with convergence evidence."""

    x_star: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def crossover(
    lo: float = 0.1,
    hi: float = 1.0,
    tol: float = 1e-8,
) -> CrossoverResult:
    """Locate the x where the fermionic entropy overtakes the bosonic one.

    Bisects f(x) = S_fermion(x) - S_boson(x) on [lo, hi] until both the
    bracket width and |f| fall below ``tol``.  Before bisecting, a fixed
    200-point log grid over [1e-3, 100] must show exactly one sign change,
    so the returned root is the only one in the surveyed range.

    Raises NoSignChangeError if f keeps one sign on the given bracket.
    """
    if not (
        isinstance(lo, (int, float))
        and isinstance(hi, (int, float))
        and math.isfinite(lo)
        and math.isfinite(hi)
        and 0.0 < lo < hi
    ):
        raise ValueError(f"bad bracket ({lo!r}, {hi!r})")
    if not (isinstance(tol, (int, float)) and math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"tol must be a finite positive real, got {tol!r}")

    def f(x: float) -> float:
        return _closed_form_entropy(Statistics.FERMION, x) - _closed_form_entropy(
            Statistics.BOSON, x
        )

    grid = np.geomspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    signs = []
    for g in grid:
        val = f(float(g))
        if val != 0.0:
            signs.append(math.copysign(1.0, val))
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if changes != 1:
        raise RuntimeError(
            f"expected exactly one sign change on the scan grid, found {changes}"
        )

    fa = f(lo)
    fb = f(hi)
    if not fa * fb < 0.0:
        raise NoSignChangeError(
            f"no sign change on bracket: f({lo!r}) = {fa!r}, f({hi!r}) = {fb!r}"
        )
    a, b = float(lo), float(hi)
    mid = a
    fm = fa
    iterations = 0
    for iterations in range(1, 201):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            raise RuntimeError(
                f"bisection stalled at {mid!r} with residual {fm!r} above tol {tol!r}"
            )
        fm = f(mid)
        if fa * fm <= 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
        if (b - a) <= tol and abs(fm) <= tol:
            break
    else:
        raise RuntimeError(f"bisection did not converge within {iterations} steps")
    return CrossoverResult(
        x_star=mid, bracket=(a, b), residual=fm, iterations=iterations
    )


def sweep(
    params: BlackHoleParams,
    omegas,
    statistics=(Statistics.BOSON, Statistics.FERMION),
    eps_tail: float = EPS_TAIL_DEFAULT,
    keep: str = "out",
    x_min: float = X_MIN_DEFAULT,
) -> list[EntropyReport]:
    """Entropy reports over a frequency grid, statistics interleaved per point.

    Per-point representation failures do not abort the sweep: the report for
    that point carries the closed-form entropy, nan numerics, and the error
    message in band.
    """
    oms = [float(o) for o in omegas]
    if not oms:
        raise ValueError("empty frequency grid")
    for o in oms:
        if not (math.isfinite(o) and o > 0.0):
            raise ValueError(f"omega must be a finite positive real, got {o!r}")
    if any(b <= a for a, b in zip(oms, oms[1:])):
        raise ValueError("frequency grid must be strictly increasing")
    if isinstance(statistics, (Statistics, str)):
        statistics = (statistics,)
    stats = tuple(Statistics(s) for s in statistics)
    if not stats:
        raise ValueError("no statistics selected")
    if len(set(stats)) != len(stats):
        raise ValueError("duplicate statistics selected")

    reports: list[EntropyReport] = []
    for om in oms:
        for st in stats:
            channel = ModeChannel(omega=om, statistics=st)
            try:
                reports.append(
                    entropy_report(
                        params, channel, eps_tail=eps_tail, keep=keep, x_min=x_min
                    )
                )
            except SqueezingOverflowError as exc:
                x = dimensionless_x(params, channel)
                reports.append(
                    EntropyReport(
                        x=x,
                        omega=om,
                        mass=float(params.mass),
                        statistics=st,
                        S_closed=_closed_form_entropy(st, x),
                        S_numeric=math.nan,
                        gap=math.nan,
                        mean_occ=math.nan,
                        T_ratio=math.nan,
                        error=str(exc),
                    )
                )
    return reports


def format_float(value: float) -> str:
    """Canonical 17-significant-digit rendering used by all CSV output."""
    return format(float(value), ".17g")


def report_csv_row(report: EntropyReport) -> list[str]:
    """Row for csv.writer, in CSV_HEADER order; error renders as empty string."""
    return [
        format_float(report.x),
        format_float(report.omega),
        format_float(report.mass),
        report.statistics.value,
        format_float(report.S_closed),
        format_float(report.S_numeric),
        format_float(report.gap),
        format_float(report.mean_occ),
        format_float(report.T_ratio),
        report.error or "",
    ]


def _json_number(value: float):
    # Strict JSON has no nan or inf; emit null for them.
    v = float(value)
    return v if math.isfinite(v) else None


def report_json_dict(report: EntropyReport) -> dict:
    """JSON object mirroring the CSV row, with non-finite numbers as null."""
    return {
        "x": _json_number(report.x),
        "omega": _json_number(report.omega),
        "mass": _json_number(report.mass),
        "statistics": report.statistics.value,
        "S_closed": _json_number(report.S_closed),
        "S_numeric": _json_number(report.S_numeric),
        "gap": _json_number(report.gap),
        "mean_occ": _json_number(report.mean_occ),
        "T_ratio": _json_number(report.T_ratio),
        "error": report.error,
    }
