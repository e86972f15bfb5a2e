"""Control laws: intelligent-P (model-free), classic PI, and
flatness-based feedforward with P or PI correction.

All controllers share the error convention e = y - y_star, so the usual
gains come out negative (too cold means e < 0 and the heat command must
rise).  Controllers are pure functions; integrator and estimator state
lives in the engine's per-run loop state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plant import ThermalParams

HEATING_ONLY = "heating_only"
HEATING_AND_COOLING = "heating_and_cooling"


@dataclass(frozen=True)
class IpGains:
    """Ultra-local input gain alpha and proportional gain k_p (1/s).

    alpha is a loop-shaping knob, not a physical parameter: rescaling
    (alpha, u) to (c*alpha, u/c) leaves the applied physical heat
    unchanged when F_estim is recomputed consistently.
    """

    alpha: float = 0.5
    k_p: float = -0.5

    def __post_init__(self) -> None:
        if self.alpha == 0.0 or not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be a finite nonzero number, got {self.alpha!r}")


@dataclass(frozen=True)
class PiGains:
    k_p: float = -0.5
    k_i: float = -0.01


@dataclass(frozen=True)
class FlatGains:
    """Corrector gains for the flatness controller, normally derived from
    a requested closed-loop pole via the placement helpers."""

    k_p: float
    k_i: float = 0.0
    pole: float | None = None
    double_pole: float | None = None


def ip_control(f_estim: float, y_star_dot: float, e: float, gains: IpGains) -> float:
    """u = -(F_estim - y_star_dot - k_p*e) / alpha."""
    return -(f_estim - y_star_dot - gains.k_p * e) / gains.alpha


def pi_control(e: float, e_integral: float, gains: PiGains) -> float:
    """q = k_p*e + k_i*integral(e)."""
    return gains.k_p * e + gains.k_i * e_integral


def flat_feedforward(y_star: float, y_star_dot: float, params: ThermalParams) -> float:
    """Nominal heat that tracks y_star on the simplified air-node model
    c_a*T' = q - (k_c + k_f)*T (wall and outdoor terms dropped):

        q_star = c_a*y_star_dot + (k_c + k_f)*y_star
    """
    return params.c_a * y_star_dot + (params.k_c + params.k_f) * y_star


def place_flat_p_gain(pole: float, params: ThermalParams) -> float:
    """Corrector gain putting the simplified closed loop's pole at ``pole``.

    With q = q_star + k_p*e the error obeys c_a*e' = (k_p - (k_c + k_f))*e,
    so k_p = c_a*pole + (k_c + k_f).
    """
    if not pole < 0.0:
        raise ValueError(f"pole must have negative real part, got {pole!r}")
    return params.c_a * pole + (params.k_c + params.k_f)


def place_flat_pi_gains(double_pole: float, params: ThermalParams) -> tuple[float, float]:
    """PI corrector gains for a double closed-loop pole at ``double_pole``.

    The error model c_a*e'' = (k_p - (k_c + k_f))*e' + k_i*e has the
    characteristic polynomial s^2 + ((k_c + k_f - k_p)/c_a)*s - k_i/c_a;
    matching (s - p)^2 gives

        k_p = (k_c + k_f) + 2*p*c_a,    k_i = -c_a*p^2.
    """
    if not double_pole < 0.0:
        raise ValueError(f"double_pole must have negative real part, got {double_pole!r}")
    k_p = (params.k_c + params.k_f) + 2.0 * double_pole * params.c_a
    k_i = -params.c_a * double_pole * double_pole
    return k_p, k_i


def flat_gains_p(pole: float, params: ThermalParams) -> FlatGains:
    return FlatGains(k_p=place_flat_p_gain(pole, params), k_i=0.0, pole=pole)


def flat_gains_pi(double_pole: float, params: ThermalParams) -> FlatGains:
    k_p, k_i = place_flat_pi_gains(double_pole, params)
    return FlatGains(k_p=k_p, k_i=k_i, double_pole=double_pole)


@dataclass(frozen=True)
class ActuatorMode:
    """Saturation limits of the heat actuator.

    heating_only clamps to [0, q_max]; heating_and_cooling to
    [-q_max, q_max].
    """

    mode: str = HEATING_AND_COOLING
    q_max: float = 2000.0

    def __post_init__(self) -> None:
        if self.mode not in (HEATING_ONLY, HEATING_AND_COOLING):
            raise ValueError(f"unknown actuator mode {self.mode!r}")
        if not (math.isfinite(self.q_max) and self.q_max > 0.0):
            raise ValueError(f"q_max must be positive, got {self.q_max!r}")


def clamp(q: float, actuator: ActuatorMode) -> float:
    """Apply the actuator saturation to a commanded heat."""
    lo = 0.0 if actuator.mode == HEATING_ONLY else -actuator.q_max
    return min(max(q, lo), actuator.q_max)
