"""Closed-loop simulation engine.

One control tick does, in order: sample the measured output (true plus
noise), update estimator/integrator state, evaluate the reference,
compute the heat command, clamp it, then advance the plant one RK4 step
with the applied heat and the current outdoor temperature held constant.
The per-tick log is returned as a list of SimRecord.

Runs are deterministic: the measurement noise comes from the seeded
counter-mode stream in :mod:`heatloop.noise`, so identical scenarios
with identical seeds reproduce identical records bit for bit.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

from .controllers import (
    HEATING_AND_COOLING,
    HEATING_ONLY,
    ActuatorMode,
    FlatGains,
    IpGains,
    PiGains,
    clamp,
    flat_feedforward,
    flat_gains_p,
    flat_gains_pi,
    ip_control,
    pi_control,
)
from .estimation import EstimatorState, UltraLocalConfig, estimate_derivative, estimate_F
from .noise import gaussian
from .plant import NOMINAL, ThermalParams, ThermalState, step_rk4, wall_equilibrium
from .reference import REFERENCE_GENERATORS, Schedule


class SimulationError(RuntimeError):
    """Raised when a run produces a non-finite value."""


# ---------------------------------------------------------------------------
# outdoor temperature profiles


@dataclass(frozen=True)
class ConstantTExt:
    value: float = 5.0

    def at(self, t: float) -> float:
        return self.value


@dataclass(frozen=True)
class SinusoidTExt:
    """mean + amplitude * sin(2*pi*t/period + phase)."""

    mean: float = 5.0
    amplitude: float = 5.0
    period: float = 86400.0
    phase: float = -math.pi

    def at(self, t: float) -> float:
        return self.mean + self.amplitude * math.sin(2.0 * math.pi * t / self.period + self.phase)


@dataclass(frozen=True)
class TableTExt:
    """Tabulated profile, linearly interpolated, end values held outside
    the table.  ``source`` keeps the path the table was loaded from so a
    scenario can be written back to a config file."""

    times: tuple[float, ...]
    temps: tuple[float, ...]
    source: str | None = None

    def __post_init__(self) -> None:
        if len(self.times) != len(self.temps) or len(self.times) < 2:
            raise ValueError("table profile needs at least two (time, temp) rows")
        for a, b in zip(self.times, self.times[1:]):
            if not b > a:
                raise ValueError("table times must be strictly increasing")

    def at(self, t: float) -> float:
        i = bisect_right(self.times, t)
        if i <= 0:
            return self.temps[0]
        if i >= len(self.times):
            return self.temps[-1]
        t0, t1 = self.times[i - 1], self.times[i]
        w = (t - t0) / (t1 - t0)
        return self.temps[i - 1] * (1.0 - w) + self.temps[i] * w


TExtProfile = Union[ConstantTExt, SinusoidTExt, TableTExt]


# ---------------------------------------------------------------------------
# controller configurations (the serializable part of a scenario)


@dataclass(frozen=True)
class IpController:
    alpha: float = 0.5
    k_p: float = -0.5
    window_len: int = 5

    kind = "ip"


@dataclass(frozen=True)
class PiController:
    k_p: float = -0.5
    k_i: float = -0.01

    kind = "pi"


@dataclass(frozen=True)
class FlatPController:
    """Feedforward plus P corrector.  ``model`` is the parameter set the
    controller believes in; it stays fixed when the true plant is
    perturbed (see :func:`sweep`)."""

    pole: float = -0.01
    model: ThermalParams = NOMINAL

    kind = "flat_p"


@dataclass(frozen=True)
class FlatPiController:
    double_pole: float = -0.005
    model: ThermalParams = NOMINAL

    kind = "flat_pi"


ControllerConfig = Union[IpController, PiController, FlatPController, FlatPiController]

CONTROLLER_KINDS = ("ip", "pi", "flat_p", "flat_pi")


# ---------------------------------------------------------------------------
# scenario

DEFAULT_SCHEDULE = Schedule(
    segments=(
        (0.0, 16.0),
        (25200.0, 19.0),    # 07:00  night -> day
        (79200.0, 16.0),    # 22:00  day -> night
        (111600.0, 19.0),
        (165600.0, 16.0),
    ),
    transition_duration=3600.0,
)

DEFAULT_T_EXT = SinusoidTExt()

DEFAULT_INITIAL = ThermalState(16.0, wall_equilibrium(16.0, DEFAULT_T_EXT.at(0.0)))


@dataclass(frozen=True)
class Scenario:
    """Everything a run needs.  The defaults form the frozen reference
    scenario used throughout the test suite: 48 h horizon, 60 s ticks,
    16/19 degree night/day schedule with two transitions per day, smooth
    3600 s setpoint blends, sinusoidal outdoor temperature (mean 5,
    amplitude 5, period 24 h) and 0.05 K measurement noise.  The seed is
    part of the freeze: metrics quoted in the tests assume this exact
    noise stream."""

    horizon: float = 172800.0
    dt: float = 60.0
    plant: ThermalParams = NOMINAL
    initial: ThermalState = DEFAULT_INITIAL
    schedule: Schedule = DEFAULT_SCHEDULE
    reference_mode: str = "smooth"
    controller: ControllerConfig = IpController()
    actuator: ActuatorMode = ActuatorMode()
    t_ext: TExtProfile = DEFAULT_T_EXT
    noise_std: float = 0.05
    rng_seed: int = 63

    @property
    def num_ticks(self) -> int:
        return round(self.horizon / self.dt)

    def validate(self) -> None:
        if not (math.isfinite(self.horizon) and self.horizon > 0.0):
            raise ValueError(f"horizon must be positive, got {self.horizon!r}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        n = self.num_ticks
        if n < 1 or abs(n * self.dt - self.horizon) > 1e-6 * self.dt:
            raise ValueError(f"dt={self.dt!r} does not divide horizon={self.horizon!r}")
        if not (math.isfinite(self.noise_std) and self.noise_std >= 0.0):
            raise ValueError(f"noise_std must be nonnegative, got {self.noise_std!r}")
        if self.reference_mode not in REFERENCE_GENERATORS:
            raise ValueError(f"unknown reference_mode {self.reference_mode!r}")
        if self.schedule.start > 0.0:
            raise ValueError("schedule must start at or before t = 0")
        if not (math.isfinite(self.initial.t_int) and math.isfinite(self.initial.t_wall)):
            raise ValueError("initial state must be finite")
        if getattr(self.controller, "kind", None) not in CONTROLLER_KINDS:
            raise ValueError(f"unknown controller {self.controller!r}")
        if not isinstance(self.rng_seed, int):
            raise ValueError(f"rng_seed must be an integer, got {self.rng_seed!r}")


def default_scenario(**replacements) -> Scenario:
    """The frozen reference scenario, with optional field replacements."""
    return replace(Scenario(), **replacements)


# ---------------------------------------------------------------------------
# per-run loop state (one small class per controller kind)


class _IpLoop:
    def __init__(self, cfg: IpController, dt: float):
        self.gains = IpGains(alpha=cfg.alpha, k_p=cfg.k_p)
        self.est = EstimatorState(UltraLocalConfig(alpha=cfg.alpha, window_len=cfg.window_len, sample_time=dt))

    def command(self, t, y_meas, y_star, y_star_dot, dt):
        self.est.push(t, y_meas)
        if self.est.is_full:
            f_estim = estimate_F(estimate_derivative(self.est), self.est.u_prev, self.gains.alpha)
        else:
            f_estim = 0.0   # warm-up: no slope yet
        e = y_meas - y_star
        return ip_control(f_estim, y_star_dot, e, self.gains), f_estim

    def applied(self, q_applied: float, clamped: bool) -> None:
        self.est.u_prev = q_applied


class _PiLoop:
    def __init__(self, cfg: PiController):
        self.gains = PiGains(k_p=cfg.k_p, k_i=cfg.k_i)
        self.e_integral = 0.0
        self._candidate = 0.0

    def command(self, t, y_meas, y_star, y_star_dot, dt):
        e = y_meas - y_star
        self._candidate = self.e_integral + e * dt    # rectangle rule
        return pi_control(e, self._candidate, self.gains), None

    def applied(self, q_applied: float, clamped: bool) -> None:
        # conditional integration: the integral freezes while the clamp
        # is active, which is what keeps windup bounded
        if not clamped:
            self.e_integral = self._candidate


class _FlatPLoop:
    def __init__(self, cfg: FlatPController):
        self.gains = flat_gains_p(cfg.pole, cfg.model)
        self.model = cfg.model

    def command(self, t, y_meas, y_star, y_star_dot, dt):
        e = y_meas - y_star
        return flat_feedforward(y_star, y_star_dot, self.model) + self.gains.k_p * e, None

    def applied(self, q_applied: float, clamped: bool) -> None:
        pass


class _FlatPiLoop:
    def __init__(self, cfg: FlatPiController):
        self.gains = flat_gains_pi(cfg.double_pole, cfg.model)
        self.model = cfg.model
        self.e_integral = 0.0
        self._candidate = 0.0

    def command(self, t, y_meas, y_star, y_star_dot, dt):
        e = y_meas - y_star
        self._candidate = self.e_integral + e * dt
        q_corr = self.gains.k_p * e + self.gains.k_i * self._candidate
        return flat_feedforward(y_star, y_star_dot, self.model) + q_corr, None

    def applied(self, q_applied: float, clamped: bool) -> None:
        if not clamped:
            self.e_integral = self._candidate


def _build_loop(sc: Scenario):
    cfg = sc.controller
    if cfg.kind == "ip":
        return _IpLoop(cfg, sc.dt)
    if cfg.kind == "pi":
        return _PiLoop(cfg)
    if cfg.kind == "flat_p":
        return _FlatPLoop(cfg)
    if cfg.kind == "flat_pi":
        return _FlatPiLoop(cfg)
    raise ValueError(f"unknown controller {cfg!r}")


# ---------------------------------------------------------------------------
# running and measuring


@dataclass(frozen=True)
class SimRecord:
    """One control tick.  f_estim is None for controllers that do not
    carry an ultra-local estimate."""

    t: float
    t_int_true: float
    t_int_measured: float
    t_wall: float
    t_ext: float
    y_star: float
    y_star_dot: float
    q_command: float
    q_applied: float
    f_estim: float | None


TimeSeries = list


def run(scenario: Scenario, noise_source: Callable[[int], float] | None = None) -> list[SimRecord]:
    """Simulate one closed-loop run and return the per-tick log.

    ``noise_source`` maps a tick index to the measurement noise in K and
    exists so tests can inject tailored streams; by default it is
    noise_std * gaussian(rng_seed, k).
    """
    sc = scenario
    sc.validate()
    if noise_source is None:
        if sc.noise_std > 0.0:
            noise_source = lambda k: sc.noise_std * gaussian(sc.rng_seed, k)
        else:
            noise_source = lambda k: 0.0
    ref = REFERENCE_GENERATORS[sc.reference_mode]
    loop = _build_loop(sc)
    state = sc.initial
    records: list[SimRecord] = []
    for k in range(sc.num_ticks):
        t = k * sc.dt
        te = sc.t_ext.at(t)
        y_true = state.t_int
        y_meas = y_true + noise_source(k)
        y_star, y_star_dot = ref(sc.schedule, t)
        q_command, f_estim = loop.command(t, y_meas, y_star, y_star_dot, sc.dt)
        q_applied = clamp(q_command, sc.actuator)
        loop.applied(q_applied, q_applied != q_command)
        if not (math.isfinite(y_meas) and math.isfinite(q_command)):
            raise SimulationError(f"non-finite controller value at tick {k} (t={t})")
        records.append(SimRecord(t, y_true, y_meas, state.t_wall, te, y_star, y_star_dot, q_command, q_applied, f_estim))
        state = step_rk4(state, q_applied, te, sc.dt, sc.plant)
        if not (math.isfinite(state.t_int) and math.isfinite(state.t_wall)):
            raise SimulationError(f"non-finite plant state at tick {k} (t={t})")
    return records


@dataclass(frozen=True)
class Metrics:
    rmse: float
    max_abs_error: float
    energy: float
    cooling_energy: float
    control_variation: float
    saturation_fraction: float

    FIELDS = ("rmse", "max_abs_error", "energy", "cooling_energy", "control_variation", "saturation_fraction")

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in Metrics.FIELDS}


def compute_metrics(records: list[SimRecord]) -> Metrics:
    """Summary metrics over one run.

    Errors are measured on the true indoor temperature, not the noisy
    measurement.  Integrals use the rectangle rule on the tick grid;
    energy counts positive heat only, cooling_energy the magnitude of
    negative heat.
    """
    if len(records) < 2:
        raise ValueError("need at least two records to infer the tick length")
    dt = records[1].t - records[0].t
    e = np.array([r.t_int_true - r.y_star for r in records])
    q = np.array([r.q_applied for r in records])
    q_cmd = np.array([r.q_command for r in records])
    return Metrics(
        rmse=float(np.sqrt(np.mean(e * e))),
        max_abs_error=float(np.max(np.abs(e))),
        energy=float(dt * np.sum(np.clip(q, 0.0, None))),
        cooling_energy=float(dt * np.sum(np.clip(-q, 0.0, None))),
        control_variation=float(np.sum(np.abs(np.diff(q)))),
        saturation_fraction=float(np.mean(q_cmd != q)),
    )


def transition_spans(sched: Schedule, window_mult: float = 1.0) -> list[tuple[float, float]]:
    """[start, start + window_mult*D] for every setpoint change."""
    spans = []
    for (t0, sp0), (t1, sp1) in zip(sched.segments, sched.segments[1:]):
        if sp1 != sp0:
            spans.append((t1, t1 + window_mult * sched.transition_duration))
    return spans


DEFAULT_SWEEP_FACTORS = (0.5, 0.75, 1.0, 1.5, 2.0)


def sweep(scenario: Scenario, factors: tuple[float, ...] = DEFAULT_SWEEP_FACTORS) -> list[tuple[float, Metrics]]:
    """Re-run the scenario with all five plant parameters multiplied by
    each factor.  Controller tuning is deliberately left untouched: the
    point is to measure how each strategy survives a plant it was not
    tuned for."""
    out = []
    for factor in factors:
        perturbed = replace(scenario, plant=scenario.plant.scaled(factor))
        out.append((factor, compute_metrics(run(perturbed))))
    return out
