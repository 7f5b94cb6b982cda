"""Launch, ballistic flight with quadratic drag, and the wind-release-fly cycle."""

import functools
import math
from dataclasses import dataclass, field

from microjumper import actuator as act
from microjumper.model import require_valid, spring_stiffness, total_mass
from microjumper.ratchet import RatchetState, Stroke, apply_stroke, cycles_to_release, wound_length
from microjumper.spring import SpringState, check_release, stored_energy

DEFAULT_STEP = 10e-6


class IntegrationError(ArithmeticError):
    pass


class StallError(RuntimeError):
    """The drive cannot wind the spring to release, so there is no jump."""


@dataclass(frozen=True)
class FlightSample:
    time: float
    height: float
    velocity: float


@dataclass(frozen=True)
class WindEvent:
    cycle: int
    time: float
    deflection: float
    tension: float


@dataclass(frozen=True)
class ReleaseEvent:
    time: float
    deflection: float
    energy: float


@dataclass(frozen=True)
class StallEvent:
    time: float
    deflection: float
    available_torque: float
    required_torque: float


@dataclass(frozen=True)
class CycleTrace:
    wind_events: tuple[WindEvent, ...]
    release_event: ReleaseEvent | None
    stall_event: StallEvent | None
    flight: tuple[FlightSample, ...] = field(default=())
    apex_height: float = 0.0
    launch_velocity: float = 0.0
    time_to_apex: float = 0.0

    @property
    def released(self):
        return self.release_event is not None

    @property
    def jump_period(self):
        if self.release_event is None:
            return math.inf
        return self.release_event.time + self.time_to_apex


def launch_velocity(energy, mass, efficiency=1.0):
    if energy < 0 or not mass > 0 or not 0 < efficiency <= 1:
        raise ValueError("need energy >= 0, mass > 0 and 0 < efficiency <= 1")
    return math.sqrt(2.0 * efficiency * energy / mass)


def ideal_jump_height(energy, mass, gravity=9.81):
    """Drag-free height reached when all of ``energy`` lifts ``mass``."""
    return energy / (mass * gravity)


def _drag_per_mass(body, mass):
    return 0.5 * body.air_density * body.drag_coefficient * body.reference_area / mass


def _rk4(h, v, dt, g, c):
    def accel(v):
        return -g - c * v * abs(v)

    k1h, k1v = v, accel(v)
    k2h, k2v = v + 0.5 * dt * k1v, accel(v + 0.5 * dt * k1v)
    k3h, k3v = v + 0.5 * dt * k2v, accel(v + 0.5 * dt * k2v)
    k4h, k4v = v + dt * k3v, accel(v + dt * k3v)
    h = h + dt / 6.0 * (k1h + 2 * k2h + 2 * k3h + k4h)
    v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return h, v


def simulate_flight(v0, body, step=DEFAULT_STEP, descend=False, mass=None):
    """Integrate vertical flight from the release point.

    Returns ``(apex, time_to_apex, samples)``. The apex is found where the
    velocity changes sign: velocity is taken as linear across the bracketing
    step, which makes height quadratic there, and the vertex of that parabola
    is the apex. With ``descend`` the integration continues down to h = 0.
    """
    if v0 < 0 or not step > 0:
        raise ValueError("need v0 >= 0 and step > 0")
    mass = total_mass(body) if mass is None else mass
    return _integrate_flight(v0, body, step, descend, mass)


# Design sweeps relaunch identical bodies at identical speeds many times.
@functools.lru_cache(maxsize=4096)
def _integrate_flight(v0, body, step, descend, mass):
    g = body.gravity
    c = _drag_per_mass(body, mass)

    samples = [FlightSample(0.0, 0.0, v0)]
    if v0 == 0:
        return 0.0, 0.0, tuple(samples)

    t, h, v = 0.0, 0.0, v0
    i = 0
    apex = t_apex = None
    while True:
        h_next, v_next = _rk4(h, v, step, g, c)
        if not (math.isfinite(h_next) and math.isfinite(v_next)):
            raise IntegrationError(f"non-finite state at t={t:.6g} s")
        i += 1
        t_next = i * step
        if apex is None and v_next <= 0:
            frac = v / (v - v_next)
            t_apex = t + frac * step
            apex = h + 0.5 * v * frac * step
            if not descend:
                samples.append(FlightSample(t_apex, apex, 0.0))
                break
        if descend and h_next <= 0:
            frac = h / (h - h_next)
            samples.append(FlightSample(t + frac * step, 0.0, v + frac * (v_next - v)))
            break
        t, h, v = t_next, h_next, v_next
        samples.append(FlightSample(t, h, v))
    return apex, t_apex, tuple(samples)


def simulate_cycle(design, source, step=DEFAULT_STEP, descend=False):
    """Run one load-release-flight cycle under ``source``.

    Each drive period is a cw half (positive voltage, the arm winds the
    shaft) followed by a ccw half (the arm returns, the shaft is held). Before
    each cw stroke the available torque is compared with the torque needed at
    the present deflection; falling short, or having no drive at all, ends
    the cycle in a stall.
    """
    require_valid(design)
    k = spring_stiffness(design.spring)
    spec = design.ratchet
    current = act.drive_current(design, source)
    available = act.available_torque(design.actuator, current)
    half = 0.5 / source.frequency
    limit = cycles_to_release(design)

    state = RatchetState()
    deflection = 0.0
    events = []
    for cycle in range(limit + 1):
        t_start = cycle / source.frequency
        needed = act.required_torque(design, deflection).total_required
        if available <= 0 or available < needed:
            stall = StallEvent(t_start, deflection, available, needed)
            return CycleTrace(tuple(events), None, stall)
        state = apply_stroke(state, Stroke.CW, spec)
        wound = wound_length(state, spec)
        outcome = check_release(SpringState.at(k, wound), design.release, k)
        if outcome.released:
            # The snap happens mid-stroke, the moment tension reaches the
            # threshold; the arm sweeps uniformly through the cw half.
            snap = min(wound, design.release.release_force / k)
            while k * snap < design.release.release_force:  # F/k rounded low
                snap = math.nextafter(snap, math.inf)
            frac = (snap - deflection) / (wound - deflection)
            outcome = check_release(SpringState.at(k, snap), design.release, k)
            events.append(WindEvent(cycle + 1, t_start + frac * half, snap, k * snap))
            break
        deflection = wound
        events.append(WindEvent(cycle + 1, t_start + half, deflection, k * deflection))
        state = apply_stroke(state, Stroke.CCW, spec)
    else:  # pragma: no cover - cycles_to_release guarantees a release
        raise RuntimeError("ratchet never reached release deflection")

    energy = outcome.stored_energy_at_event
    mass = total_mass(design.body)
    v0 = launch_velocity(energy, mass, design.body.launch_efficiency)
    apex, t_apex, samples = simulate_flight(v0, design.body, step, descend=descend, mass=mass)
    release = ReleaseEvent(events[-1].time, outcome.deflection_at_event, energy)
    return CycleTrace(tuple(events), release, None, samples, apex, v0, t_apex)


def jump_rate(design, source, step=DEFAULT_STEP):
    """Jumps per minute when every cycle releases."""
    trace = simulate_cycle(design, source, step)
    if not trace.released:
        raise StallError(
            f"drive stalls at {trace.stall_event.deflection * 1e3:.3f} mm; no jumps"
        )
    wind_time = cycles_to_release(design) / source.frequency
    period = wind_time
    if trace.time_to_apex > 0.1 * wind_time:
        period += 2.0 * trace.time_to_apex
    return 60.0 / period


def release_energy(design):
    k = spring_stiffness(design.spring)
    return stored_energy(k, design.release.release_force / k)
