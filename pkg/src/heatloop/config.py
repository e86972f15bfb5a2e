"""Scenario files: flat ``key = value`` text with dotted prefixes.

The format is deliberately primitive so it stays diff-friendly and
parseable from any language: one assignment per line, ``#`` lines and
blank lines ignored, no sections, no quoting.  Example::

    horizon = 172800.0
    dt = 60.0
    plant.c_a = 1400.0
    schedule.segments = 0.0:16.0, 25200.0:19.0
    controller.kind = ip
    t_ext.kind = sinusoid

Every key is optional; missing keys take the default-scenario values.
Unknown keys are errors.  ``serialize_scenario`` writes floats with
``repr`` so that parse(serialize(s)) == s exactly.
"""

from __future__ import annotations

import math
import os
from dataclasses import replace

from .controllers import HEATING_AND_COOLING, HEATING_ONLY, ActuatorMode
from .engine import (
    ConstantTExt,
    FlatPController,
    FlatPiController,
    IpController,
    PiController,
    Scenario,
    SinusoidTExt,
    TableTExt,
)
from .plant import ThermalParams, ThermalState
from .reference import REFERENCE_GENERATORS, Schedule


class ConfigError(ValueError):
    """Malformed scenario text or file."""


_MISSING = object()

_ACTUATOR_ALIASES = {
    "heat": HEATING_ONLY,
    "heating_only": HEATING_ONLY,
    "heat_cool": HEATING_AND_COOLING,
    "heating_and_cooling": HEATING_AND_COOLING,
}


class _Entries:
    def __init__(self, entries: dict[str, str]):
        self._entries = entries

    def take(self, key: str, default=_MISSING) -> str:
        if key in self._entries:
            return self._entries.pop(key)
        if default is _MISSING:
            raise ConfigError(f"missing required key {key!r}")
        return default

    def take_float(self, key: str, default: float) -> float:
        raw = self.take(key, None)
        if raw is None:
            return default
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"key {key!r}: value must be finite, got {raw!r}")
        return value

    def take_int(self, key: str, default: int) -> int:
        raw = self.take(key, None)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None

    def take_bool(self, key: str, default: bool) -> bool:
        raw = self.take(key, None)
        if raw is None:
            return default
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ConfigError(f"key {key!r}: expected true/false, got {raw!r}")

    def take_choice(self, key: str, choices, default: str) -> str:
        raw = self.take(key, None)
        if raw is None:
            return default
        if raw not in choices:
            raise ConfigError(f"key {key!r}: expected one of {sorted(choices)}, got {raw!r}")
        return raw

    def reject_leftovers(self) -> None:
        if self._entries:
            names = ", ".join(repr(k) for k in sorted(self._entries))
            raise ConfigError(f"unknown key(s): {names}")


def _parse_lines(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _take_params(ent: _Entries, prefix: str, default: ThermalParams) -> ThermalParams:
    try:
        return ThermalParams(
            c_a=ent.take_float(f"{prefix}.c_a", default.c_a),
            c_w=ent.take_float(f"{prefix}.c_w", default.c_w),
            k_c=ent.take_float(f"{prefix}.k_c", default.k_c),
            k_f=ent.take_float(f"{prefix}.k_f", default.k_f),
            k_ext=ent.take_float(f"{prefix}.k_ext", default.k_ext),
            wall_denominator_cw=ent.take_bool(f"{prefix}.wall_denominator_cw", default.wall_denominator_cw),
        )
    except ValueError as exc:
        raise ConfigError(f"{prefix}: {exc}") from None


def _parse_segments(raw: str) -> tuple[tuple[float, float], ...]:
    segments = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        start, sep, sp = token.partition(":")
        if not sep:
            raise ConfigError(f"schedule.segments: expected 'start:setpoint', got {token!r}")
        try:
            segments.append((float(start), float(sp)))
        except ValueError:
            raise ConfigError(f"schedule.segments: bad number in {token!r}") from None
    if not segments:
        raise ConfigError("schedule.segments: no segments given")
    return tuple(segments)


def _load_t_ext_table(path: str) -> tuple[tuple[float, ...], tuple[float, ...]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = [line.strip() for line in fh]
    except OSError as exc:
        raise ConfigError(f"t_ext.file: cannot read {path!r}: {exc}") from None
    times: list[float] = []
    temps: list[float] = []
    for row in rows:
        if not row or row.startswith("#"):
            continue
        fields = [f.strip() for f in row.split(",")]
        if len(fields) != 2:
            raise ConfigError(f"t_ext.file {path!r}: expected 2 columns, got {row!r}")
        try:
            t, temp = float(fields[0]), float(fields[1])
        except ValueError:
            if not times:    # tolerate a single header row
                continue
            raise ConfigError(f"t_ext.file {path!r}: bad number in {row!r}") from None
        times.append(t)
        temps.append(temp)
    if len(times) < 2:
        raise ConfigError(f"t_ext.file {path!r}: need at least two data rows")
    return tuple(times), tuple(temps)


def parse_scenario(text: str, base_dir: str = ".") -> Scenario:
    """Build a Scenario from config text.  Relative t_ext.file paths are
    resolved against ``base_dir``."""
    ent = _Entries(_parse_lines(text))
    base = Scenario()

    horizon = ent.take_float("horizon", base.horizon)
    dt = ent.take_float("dt", base.dt)
    noise_std = ent.take_float("noise_std", base.noise_std)
    seed = ent.take_int("seed", base.rng_seed)

    plant = _take_params(ent, "plant", base.plant)
    initial = ThermalState(
        t_int=ent.take_float("initial.t_int", base.initial.t_int),
        t_wall=ent.take_float("initial.t_wall", base.initial.t_wall),
    )

    raw_segments = ent.take("schedule.segments", None)
    segments = _parse_segments(raw_segments) if raw_segments is not None else base.schedule.segments
    duration = ent.take_float("schedule.transition_duration", base.schedule.transition_duration)
    try:
        schedule = Schedule(segments=segments, transition_duration=duration)
    except ValueError as exc:
        raise ConfigError(f"schedule: {exc}") from None

    mode = ent.take_choice("reference.mode", REFERENCE_GENERATORS, base.reference_mode)

    kind = ent.take_choice("controller.kind", ("ip", "pi", "flat_p", "flat_pi"), "ip")
    controller: object
    if kind == "ip":
        controller = IpController(
            alpha=ent.take_float("controller.alpha", 0.5),
            k_p=ent.take_float("controller.k_p", -0.5),
            window_len=ent.take_int("controller.window_len", 5),
        )
    elif kind == "pi":
        controller = PiController(
            k_p=ent.take_float("controller.k_p", -0.5),
            k_i=ent.take_float("controller.k_i", -0.01),
        )
    elif kind == "flat_p":
        controller = FlatPController(
            pole=ent.take_float("controller.pole", -0.01),
            model=_take_params(ent, "controller.model", plant),
        )
    else:
        controller = FlatPiController(
            double_pole=ent.take_float("controller.double_pole", -0.005),
            model=_take_params(ent, "controller.model", plant),
        )

    raw_act = ent.take("actuator.mode", None)
    if raw_act is None:
        act_mode = base.actuator.mode
    elif raw_act in _ACTUATOR_ALIASES:
        act_mode = _ACTUATOR_ALIASES[raw_act]
    else:
        raise ConfigError(f"key 'actuator.mode': expected one of {sorted(set(_ACTUATOR_ALIASES))}, got {raw_act!r}")
    try:
        actuator = ActuatorMode(mode=act_mode, q_max=ent.take_float("actuator.q_max", base.actuator.q_max))
    except ValueError as exc:
        raise ConfigError(f"actuator: {exc}") from None

    t_kind = ent.take_choice("t_ext.kind", ("constant", "sinusoid", "table"), "sinusoid")
    t_ext: object
    if t_kind == "constant":
        t_ext = ConstantTExt(value=ent.take_float("t_ext.value", 5.0))
    elif t_kind == "sinusoid":
        d = SinusoidTExt()
        t_ext = SinusoidTExt(
            mean=ent.take_float("t_ext.mean", d.mean),
            amplitude=ent.take_float("t_ext.amplitude", d.amplitude),
            period=ent.take_float("t_ext.period", d.period),
            phase=ent.take_float("t_ext.phase", d.phase),
        )
    else:
        rel = ent.take("t_ext.file")
        path = rel if os.path.isabs(rel) else os.path.join(base_dir, rel)
        times, temps = _load_t_ext_table(path)
        t_ext = TableTExt(times=times, temps=temps, source=rel)

    ent.reject_leftovers()

    scenario = Scenario(
        horizon=horizon,
        dt=dt,
        plant=plant,
        initial=initial,
        schedule=schedule,
        reference_mode=mode,
        controller=controller,
        actuator=actuator,
        t_ext=t_ext,
        noise_std=noise_std,
        rng_seed=seed,
    )
    try:
        scenario.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return scenario


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    try:
        return parse_scenario(text, base_dir=os.path.dirname(os.path.abspath(path)))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _params_lines(prefix: str, p: ThermalParams) -> list[str]:
    return [
        f"{prefix}.c_a = {_fmt(float(p.c_a))}",
        f"{prefix}.c_w = {_fmt(float(p.c_w))}",
        f"{prefix}.k_c = {_fmt(float(p.k_c))}",
        f"{prefix}.k_f = {_fmt(float(p.k_f))}",
        f"{prefix}.k_ext = {_fmt(float(p.k_ext))}",
        f"{prefix}.wall_denominator_cw = {_fmt(p.wall_denominator_cw)}",
    ]


def serialize_scenario(sc: Scenario) -> str:
    """Canonical config text; parse_scenario() of the result reproduces
    the scenario exactly."""
    lines = [
        f"horizon = {_fmt(float(sc.horizon))}",
        f"dt = {_fmt(float(sc.dt))}",
        f"noise_std = {_fmt(float(sc.noise_std))}",
        f"seed = {sc.rng_seed}",
    ]
    lines += _params_lines("plant", sc.plant)
    lines += [
        f"initial.t_int = {_fmt(float(sc.initial.t_int))}",
        f"initial.t_wall = {_fmt(float(sc.initial.t_wall))}",
        "schedule.segments = " + ", ".join(f"{_fmt(float(t))}:{_fmt(float(sp))}" for t, sp in sc.schedule.segments),
        f"schedule.transition_duration = {_fmt(float(sc.schedule.transition_duration))}",
        f"reference.mode = {sc.reference_mode}",
        f"controller.kind = {sc.controller.kind}",
    ]
    c = sc.controller
    if c.kind == "ip":
        lines += [
            f"controller.alpha = {_fmt(float(c.alpha))}",
            f"controller.k_p = {_fmt(float(c.k_p))}",
            f"controller.window_len = {c.window_len}",
        ]
    elif c.kind == "pi":
        lines += [
            f"controller.k_p = {_fmt(float(c.k_p))}",
            f"controller.k_i = {_fmt(float(c.k_i))}",
        ]
    elif c.kind == "flat_p":
        lines += [f"controller.pole = {_fmt(float(c.pole))}"]
        lines += _params_lines("controller.model", c.model)
    else:
        lines += [f"controller.double_pole = {_fmt(float(c.double_pole))}"]
        lines += _params_lines("controller.model", c.model)
    lines += [
        f"actuator.mode = {sc.actuator.mode}",
        f"actuator.q_max = {_fmt(float(sc.actuator.q_max))}",
    ]
    t = sc.t_ext
    if isinstance(t, ConstantTExt):
        lines += ["t_ext.kind = constant", f"t_ext.value = {_fmt(float(t.value))}"]
    elif isinstance(t, SinusoidTExt):
        lines += [
            "t_ext.kind = sinusoid",
            f"t_ext.mean = {_fmt(float(t.mean))}",
            f"t_ext.amplitude = {_fmt(float(t.amplitude))}",
            f"t_ext.period = {_fmt(float(t.period))}",
            f"t_ext.phase = {_fmt(float(t.phase))}",
        ]
    else:
        if t.source is None:
            raise ConfigError("cannot serialize a table t_ext profile without a source file")
        lines += ["t_ext.kind = table", f"t_ext.file = {t.source}"]
    return "\n".join(lines) + "\n"


def save_scenario(sc: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_scenario(sc))
