"""
Current-controlled TEAM memristor model.

dx/dt is zero inside the dead zone i_on < i < i_off and otherwise

    k_off * (i / i_off - 1) ** alpha_off * f_off(x)   for i >= i_off
    k_on  * (i / i_on  - 1) ** alpha_on  * f_on(x)    for i <= i_on

with exponential windows f_off(x) = exp(-exp((x - a_off) / w_c)) and
f_on(x) = exp(-exp(-(x - a_on) / w_c)). Resistance is linear in x.
Integration is fixed-step explicit Euler with the state clamped to
[x_on, x_off] after every step.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from .models.device import (
    CurrentWaveform,
    TeamParams,
    TeamState,
    TeamTrajectory,
    WaveformShape,
    WindowParams,
)
from .utils.error_handling import DomainError, InputError, IntegrationAccuracyError

logger = logging.getLogger(__name__)

MAX_STEP_FRACTION = 0.01
DEFAULT_STEPS_PER_WAVEFORM = 10_000

# Resistance endpoints of the corruption experiment (ohm)
REFERENCE_TEAM_R_INITIAL = 138.0
REFERENCE_TEAM_R_TARGET = 336.0
REFERENCE_TEAM_PEAK_CURRENT = 1.2e-3
REFERENCE_TEAM_DURATION = 100e-6
_K_OFF_BRACKET = (1e-7, 5e-6)


def _window_off(params: TeamParams, x: float) -> float:
    return math.exp(-math.exp((x - params.window.a_off) / params.window.w_c))


def _window_on(params: TeamParams, x: float) -> float:
    return math.exp(-math.exp(-(x - params.window.a_on) / params.window.w_c))


def _derivative(params: TeamParams, x: float, i: float) -> float:
    if i >= params.i_off:
        return params.k_off * (i / params.i_off - 1.0) ** params.alpha_off * _window_off(params, x)
    if i <= params.i_on:
        return params.k_on * (i / params.i_on - 1.0) ** params.alpha_on * _window_on(params, x)
    return 0.0


def team_state_derivative(params: TeamParams, state: TeamState, i: float) -> float:
    """dx/dt in m/s for drive current i (A)."""
    state.check_bounds(params)
    return _derivative(params, state.x, float(i))


def _resistance(params: TeamParams, x: float) -> float:
    return params.r_on + (params.r_off - params.r_on) * (x - params.x_on) / params.state_span


def team_resistance(params: TeamParams, state: TeamState) -> float:
    """Linear state-to-resistance map."""
    state.check_bounds(params)
    return _resistance(params, state.x)


def state_for_resistance(params: TeamParams, resistance: float) -> TeamState:
    """Inverse of the linear map."""
    if not params.r_on <= resistance <= params.r_off:
        raise DomainError(
            f"Resistance {resistance} is outside [{params.r_on}, {params.r_off}]"
        )
    fraction = (resistance - params.r_on) / (params.r_off - params.r_on)
    return TeamState(params.x_on + fraction * params.state_span)


def integrate_waveform(
    params: TeamParams,
    state: TeamState,
    waveform: CurrentWaveform,
    max_step_fraction: float = MAX_STEP_FRACTION,
) -> TeamTrajectory:
    """
    Drive one device with a current waveform.

    Args:
        params: TEAM parameters
        state: Initial state, must lie within [x_on, x_off]
        waveform: Drive current samples
        max_step_fraction: Largest allowed state change per step, as a
            fraction of the state span

    Returns:
        Trajectory with t, i, v = R(x) * i, x and R per sample

    Raises:
        IntegrationAccuracyError: If any single step would move the state by
            more than max_step_fraction of the span
    """
    state.check_bounds(params)
    t = waveform.times()
    currents = waveform.currents()
    n = waveform.intervals
    dt = waveform.duration / n
    limit = max_step_fraction * params.state_span

    x = np.empty(n + 1)
    xk = float(state.x)
    x[0] = xk
    for k in range(n):
        step = _derivative(params, xk, float(currents[k])) * dt
        if abs(step) > limit:
            fraction = abs(step) / params.state_span
            raise IntegrationAccuracyError(
                f"State moved {fraction:.2%} of its span in one step at t={t[k]:.3e} s; "
                f"reduce the sample step below {dt:.3e} s",
                max_step_fraction=fraction,
            )
        xk = min(max(xk + step, params.x_on), params.x_off)
        x[k + 1] = xk

    r = params.r_on + (params.r_off - params.r_on) * (x - params.x_on) / params.state_span
    v = r * currents
    final = TeamState(float(x[-1]))
    logger.debug(
        f"Integrated {waveform.shape.value} waveform ({n} steps): "
        f"R {r[0]:.2f} -> {r[-1]:.2f} ohm"
    )
    return TeamTrajectory(
        t=t,
        i=currents,
        v=v,
        x=x,
        r=r,
        final_state=final,
        metadata={"shape": waveform.shape.value, "peak_current": waveform.peak_current},
    )


def hysteresis_sweep(
    params: TeamParams,
    amplitude: float,
    period: float,
    cycles: int = 1,
    initial_state: Optional[TeamState] = None,
    sample_step: Optional[float] = None,
) -> TeamTrajectory:
    """
    Bidirectional sinusoidal current sweep returning the I-V loop.

    Starts from the 138 ohm reference state unless initial_state is given.
    """
    if not (np.isfinite(amplitude) and amplitude > 0):
        raise InputError(f"Sweep amplitude must be > 0, got {amplitude}")
    if not (np.isfinite(period) and period > 0):
        raise InputError(f"Sweep period must be > 0, got {period}")
    if cycles < 1:
        raise InputError(f"Sweep needs at least one cycle, got {cycles}")
    waveform = CurrentWaveform(
        shape=WaveformShape.SINUSOID,
        peak_current=amplitude,
        duration=period * cycles,
        sample_step=sample_step or period / DEFAULT_STEPS_PER_WAVEFORM,
        cycles=cycles,
    )
    if initial_state is None:
        initial_state = reference_team_initial_state(params)
    return integrate_waveform(params, initial_state, waveform)


def loop_area(trajectory: TeamTrajectory) -> float:
    """Magnitude of the enclosed I-V area, the closed integral of v di."""
    return float(abs(trapezoid(trajectory.v, trajectory.i)))


def reference_team_params(k_off: float) -> TeamParams:
    """Preset parameters for a given k_off; k_on is fixed at -0.1 * k_off."""
    x_on, x_off = 0.0, 3e-9
    return TeamParams(
        k_on=-0.1 * k_off,
        k_off=k_off,
        alpha_on=1.0,
        alpha_off=1.0,
        i_on=-50e-6,
        i_off=50e-6,
        x_on=x_on,
        x_off=x_off,
        r_on=100.0,
        r_off=500.0,
        window=WindowParams(a_on=x_on, a_off=x_off, w_c=1e-10),
    )


def reference_team_waveform(
    peak_current: float = REFERENCE_TEAM_PEAK_CURRENT,
    shape: WaveformShape = WaveformShape.SINUSOID,
    duration: float = REFERENCE_TEAM_DURATION,
) -> CurrentWaveform:
    """Single-cycle fault drive sampled at duration / 1e4."""
    return CurrentWaveform(
        shape=shape,
        peak_current=peak_current,
        duration=duration,
        sample_step=duration / DEFAULT_STEPS_PER_WAVEFORM,
    )


def _final_resistance(k_off: float, target: float) -> float:
    params = reference_team_params(k_off)
    state = state_for_resistance(params, REFERENCE_TEAM_R_INITIAL)
    trajectory = integrate_waveform(params, state, reference_team_waveform())
    return trajectory.final_resistance - target


@lru_cache(maxsize=8)
def calibrate_k_off(target_resistance: float = REFERENCE_TEAM_R_TARGET) -> float:
    """
    Find k_off so the reference sweep ends at target_resistance.

    Uses a bracketed Brent search; the bracket is widened geometrically until
    it straddles the root.
    """
    low, high = _K_OFF_BRACKET
    f_low = _final_resistance(low, target_resistance)
    f_high = _final_resistance(high, target_resistance)
    for _ in range(20):
        if f_low < 0 < f_high:
            break
        if f_low >= 0:
            low /= 4.0
            f_low = _final_resistance(low, target_resistance)
        if f_high <= 0:
            high *= 4.0
            f_high = _final_resistance(high, target_resistance)
    else:
        raise DomainError(
            f"No k_off in [{low:.3e}, {high:.3e}] m/s reaches {target_resistance} ohm"
        )

    k_off = brentq(
        _final_resistance, low, high, args=(target_resistance,), xtol=1e-15, rtol=1e-12
    )
    logger.info(f"Calibrated k_off = {k_off:.6e} m/s for a {target_resistance} ohm endpoint")
    return float(k_off)


def reference_team_preset() -> TeamParams:
    """Calibrated preset whose 1.2 mA reference sweep maps 138 ohm to 336 ohm."""
    return reference_team_params(calibrate_k_off())


def reference_team_initial_state(params: TeamParams) -> TeamState:
    return state_for_resistance(params, REFERENCE_TEAM_R_INITIAL)


def amplitude_sweep(
    params: TeamParams,
    state: TeamState,
    amplitudes: Sequence[float],
    shape: WaveformShape = WaveformShape.SINUSOID,
    duration: float = REFERENCE_TEAM_DURATION,
) -> np.ndarray:
    """Final resistance after one waveform per amplitude, each from the same state."""
    finals = [
        integrate_waveform(
            params, state, reference_team_waveform(a, shape, duration)
        ).final_resistance
        for a in amplitudes
    ]
    return np.array(finals)
