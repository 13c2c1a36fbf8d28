"""Depolarized-qubit scenario: correlation surfaces and sudden-death runs.

Both registers start in |0>, pass through independent depolarizing channels
with strengths a1, a2 in [-1, 1], and feed the overlap circuit.  The module
sweeps the (a1, a2) square, follows exponential-decay trajectories a_i(t),
and locates the time where the quantum correlations die.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .circuit import TripartiteState, build_closed_form
from .linalg import DensityMatrix, InvalidStateError
from .measures import (
    DISCORD_CLASSICAL_MAX,
    EPS_NEG,
    TAU_OPT,
    QubitMeasurementBasis,
    classify,
    discord_via_measurement,
    negativity,
)

SWEEP_CSV_HEADER = ["a1", "a2", "total_bits", "negativity_sum", "discord_bits", "class"]
TRAJECTORY_CSV_HEADER = ["t"] + SWEEP_CSV_HEADER

# A discord at or below the optimizer tolerance is numerically zero; using the
# looser classification threshold here would date the discord death several
# hundredths of a time unit early, because discord approaches its death point
# quadratically while the negativity approaches linearly.
DISCORD_DEAD_TOL = TAU_OPT
DEATH_TIME_RESOLUTION = 1e-4

KET0 = DensityMatrix.diagonal([1.0, 0.0])


@dataclass(frozen=True)
class DepolarizingParams:
    a1: float
    a2: float

    def __post_init__(self) -> None:
        for name, a in (("a1", self.a1), ("a2", self.a2)):
            if not -1.0 <= a <= 1.0:
                raise InvalidStateError(f"{name}={a} outside [-1, 1]")


@dataclass(frozen=True)
class SweepRow:
    a1: float
    a2: float
    total_correlation: float
    negativity_sum: float
    discord: float
    classification: str


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    row: SweepRow


@dataclass(frozen=True)
class TrajectoryConfig:
    """Piecewise-exponential decay of the channel strengths.

    ``a_i(t) = a_i0 * exp(-gamma_i_early * t)`` up to ``t_switch``; afterwards
    the late rate applies.  With ``carry_across`` (the default) the late
    segment restarts from the value reached at the switch, keeping a_i(t)
    continuous; otherwise the late segment is the global curve
    ``a_i0 * exp(-gamma_i_late * t)``.
    """

    gamma1_early: float = 10.0
    gamma2_early: float = 5.0
    gamma1_late: float = 10.0
    gamma2_late: float = 10.0
    a10: float = 1.0
    a20: float = float(np.exp(-1.0))
    t_switch: float = 0.2
    t_max: float = 0.4
    n_steps: int = 81
    carry_across: bool = True

    def __post_init__(self) -> None:
        if min(self.gamma1_early, self.gamma2_early, self.gamma1_late, self.gamma2_late) < 0:
            raise InvalidStateError("decay rates must be nonnegative")
        if not 0.0 < self.t_switch < self.t_max:
            raise InvalidStateError(
                f"need 0 < t_switch < t_max, got t_switch={self.t_switch}, t_max={self.t_max}"
            )
        if self.n_steps < 2:
            raise InvalidStateError(f"n_steps must be >= 2, got {self.n_steps}")
        for name, a in (("a10", self.a10), ("a20", self.a20)):
            if not -1.0 <= a <= 1.0:
                raise InvalidStateError(f"{name}={a} outside [-1, 1]")

    def a_values(self, t: float) -> tuple[float, float]:
        def decay(a0: float, g_early: float, g_late: float) -> float:
            if t <= self.t_switch:
                return a0 * np.exp(-g_early * t)
            if self.carry_across:
                at_switch = a0 * np.exp(-g_early * self.t_switch)
                return at_switch * np.exp(-g_late * (t - self.t_switch))
            return a0 * np.exp(-g_late * t)

        return (
            decay(self.a10, self.gamma1_early, self.gamma1_late),
            decay(self.a20, self.gamma2_early, self.gamma2_late),
        )


@dataclass(frozen=True)
class TrajectoryResult:
    points: list[TrajectoryPoint]
    death_time: float | None
    discord_death_time: float | None
    negativity_death_time: float | None
    config: TrajectoryConfig = field(repr=False)


def depolarize(chi: DensityMatrix, a: float) -> DensityMatrix:
    """Apply the qubit depolarizing map a*chi + (1-a)/2 * identity.

    Restricted to dimension 2, where the result is guaranteed PSD for
    a in [-1, 1]; the output is validated anyway.
    """
    if chi.dim != 2:
        raise InvalidStateError(f"depolarizing channel is qubit-only, got dim {chi.dim}")
    if not -1.0 <= a <= 1.0:
        raise InvalidStateError(f"channel strength {a} outside [-1, 1]")
    out = a * chi.matrix + (1.0 - a) / 2.0 * np.eye(2)
    return DensityMatrix(out, chi.subsystem_dims)


def example_state(params: DepolarizingParams) -> TripartiteState:
    """Post-circuit state for |0> inputs sent through the two channels."""
    rho1 = depolarize(KET0, params.a1)
    rho2 = depolarize(KET0, params.a2)
    return build_closed_form(rho1, rho2)


def _classify_row(a1: float, a2: float, warm_start) -> tuple[SweepRow, QubitMeasurementBasis]:
    report = classify(example_state(DepolarizingParams(a1, a2)), warm_start=warm_start)
    row = SweepRow(
        a1=a1,
        a2=a2,
        total_correlation=report.total_correlation,
        negativity_sum=report.negativity_sum,
        discord=report.discord,
        classification=report.classification,
    )
    return row, report.discord_basis


def sweep(resolution: int) -> list[SweepRow]:
    """Classify every point of a uniform (a1, a2) grid over [-1, 1]^2.

    Rows come out in row-major order (a1 outer, a2 inner).  The previous
    point's optimal measurement basis warm-starts the discord polish; the
    coarse grid still runs everywhere, so results do not depend on the order
    of evaluation.
    """
    if resolution < 2:
        raise InvalidStateError(f"resolution must be >= 2, got {resolution}")
    values = np.linspace(-1.0, 1.0, resolution)
    rows: list[SweepRow] = []
    warm = None
    for a1 in values:
        for a2 in values:
            row, warm = _classify_row(float(a1), float(a2), warm)
            rows.append(row)
    return rows


def _bisect_death(
    dead: Callable[[float], bool],
    t_lo: float,
    t_hi: float,
) -> float:
    """Shrink (t_lo alive, t_hi dead] down to DEATH_TIME_RESOLUTION."""
    while t_hi - t_lo > DEATH_TIME_RESOLUTION:
        mid = 0.5 * (t_lo + t_hi)
        if dead(mid):
            t_hi = mid
        else:
            t_lo = mid
    return t_hi


def _first_death(times: Sequence[float], dead: Callable[[float], bool]) -> float | None:
    """First grid time where ``dead`` holds, refined by bisection."""
    for i, t in enumerate(times):
        if dead(float(t)):
            if i == 0:
                return float(t)
            return _bisect_death(dead, float(times[i - 1]), float(t))
    return None


def trajectory(config: TrajectoryConfig) -> TrajectoryResult:
    """Classify the state along a_i(t) and locate the correlation death.

    ``death_time`` is the first time where discord and negativity are both
    below their classification thresholds; the per-measure death times use
    the numerically-zero thresholds (DISCORD_DEAD_TOL and EPS_NEG) so that a
    genuine simultaneous death shows up as coinciding estimates.  All death
    estimates are bisected to DEATH_TIME_RESOLUTION.
    """
    times = np.linspace(0.0, config.t_max, config.n_steps)
    points: list[TrajectoryPoint] = []
    warm = None
    for t in times:
        a1, a2 = config.a_values(float(t))
        row, warm = _classify_row(a1, a2, warm)
        points.append(TrajectoryPoint(t=float(t), row=row))

    def measures_at(t: float) -> tuple[float, float]:
        a1, a2 = config.a_values(t)
        state = example_state(DepolarizingParams(a1, a2))
        disc = discord_via_measurement(state).discord
        neg = negativity(state).neg_sum
        return disc, neg

    def both_dead(t: float) -> bool:
        disc, neg = measures_at(t)
        return disc <= DISCORD_CLASSICAL_MAX and neg <= EPS_NEG

    def discord_dead(t: float) -> bool:
        a1, a2 = config.a_values(t)
        state = example_state(DepolarizingParams(a1, a2))
        return discord_via_measurement(state).discord <= DISCORD_DEAD_TOL

    def negativity_dead(t: float) -> bool:
        a1, a2 = config.a_values(t)
        return negativity(example_state(DepolarizingParams(a1, a2))).neg_sum <= EPS_NEG

    return TrajectoryResult(
        points=points,
        death_time=_first_death(times, both_dead),
        discord_death_time=_first_death(times, discord_dead),
        negativity_death_time=_first_death(times, negativity_dead),
        config=config,
    )


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_sweep_csv(rows: Sequence[SweepRow], path: str) -> None:
    """Write sweep rows with 12-significant-digit floats."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for r in rows:
            writer.writerow(
                [_fmt(r.a1), _fmt(r.a2), _fmt(r.total_correlation),
                 _fmt(r.negativity_sum), _fmt(r.discord), r.classification]
            )


def write_trajectory_csv(points: Sequence[TrajectoryPoint], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_CSV_HEADER)
        for p in points:
            r = p.row
            writer.writerow(
                [_fmt(p.t), _fmt(r.a1), _fmt(r.a2), _fmt(r.total_correlation),
                 _fmt(r.negativity_sum), _fmt(r.discord), r.classification]
            )
