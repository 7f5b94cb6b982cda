"""Coil-and-magnet actuator: force, torque, electrical budget, drive waveform.

Inductance and back-EMF are neglected, so coil current is simply V/R.
"""

import math
from dataclasses import dataclass

from microjumper.model import DriveKind, InvalidSpecError, spring_stiffness

COPPER_RESISTIVITY = 1.68e-8


@dataclass(frozen=True)
class TorqueBudget:
    friction_torque: float
    spring_torque: float
    total_required: float
    available: float | None = None

    @property
    def feasible(self):
        if self.available is None:
            return None
        return self.available >= self.total_required

    @property
    def margin(self):
        if self.available is None:
            return None
        return self.available - self.total_required


@dataclass(frozen=True)
class ElectricalBudget:
    current: float
    voltage: float
    power: float
    resistance: float


def coil_resistance_from_wire(coil, resistivity=COPPER_RESISTIVITY):
    if not coil.wire_diameter > 0 or coil.turns < 1:
        raise InvalidSpecError("coil needs wire_diameter > 0 and turns >= 1")
    wire_length = coil.turns * 2.0 * math.pi * coil.mean_radius
    area = math.pi * (coil.wire_diameter / 2.0) ** 2
    return resistivity * wire_length / area


def coil_resistance(coil):
    return coil.resistance if coil.resistance is not None else coil_resistance_from_wire(coil)


def force_constant(coil):
    """Newtons per ampere: n B 2 pi r."""
    return coil.turns * coil.avg_field * 2.0 * math.pi * coil.mean_radius


def coil_force(coil, current):
    return force_constant(coil) * current


def available_torque(actuator, current):
    return abs(coil_force(actuator.coil, current)) * actuator.moment_arm_length


def required_current(actuator, torque):
    if torque < 0:
        raise ValueError(f"torque must be >= 0, got {torque}")
    per_amp = actuator.moment_arm_length * force_constant(actuator.coil)
    if per_amp == 0:
        raise InvalidSpecError("zero moment arm or field: no current can produce torque")
    return torque / per_amp


def required_torque(design, deflection, current=None):
    """Shaft torque needed to keep winding at ``deflection``.

    String tension both loads the shaft against the support rings (friction)
    and pulls back on it directly (spring torque); both act at the shaft
    radius. With ``current`` given, the budget is filled with the torque the
    actuator can supply.
    """
    if deflection < 0:
        raise ValueError(f"deflection must be >= 0, got {deflection}")
    tension = spring_stiffness(design.spring) * deflection
    r = design.ratchet.shaft_radius
    friction = design.ratchet.friction_coefficient * tension * r
    spring = tension * r
    available = None if current is None else available_torque(design.actuator, current)
    return TorqueBudget(friction, spring, friction + spring, available)


def starting_torque(design):
    """Torque to keep winding at the release point: the bench measurement
    when the design records one, else the friction + spring estimate."""
    measured = design.actuator.measured_starting_torque
    if measured is not None:
        return measured
    deflection = design.release.release_force / spring_stiffness(design.spring)
    return required_torque(design, deflection).total_required


def electrical_budget(coil, current):
    if coil.resistance is None:
        raise InvalidSpecError("CoilSpec.resistance is required for an electrical budget")
    r = coil.resistance
    return ElectricalBudget(current, current * r, current * current * r, r)


def drive_waveform(source, time):
    """Coil voltage at ``time``: +amplitude for the first half of each period.

    A PV pair under alternating illumination behaves as the same ideal
    bidirectional source, so both kinds share one waveform.
    """
    if time < 0:
        raise ValueError(f"time must be >= 0, got {time}")
    if source.kind not in (DriveKind.SQUARE_WAVE_SUPPLY, DriveKind.PV_PAIR):
        raise ValueError(f"unknown drive kind {source.kind!r}")
    phase = math.fmod(time * source.frequency, 1.0)
    return source.amplitude if phase < 0.5 else -source.amplitude


def drive_current(design, source):
    """Peak coil current delivered by ``source``."""
    return source.amplitude / coil_resistance(design.actuator.coil)


def stall_amplitude(design, deflection=None):
    """Smallest drive amplitude whose torque covers winding up to ``deflection``
    (default: the release deflection)."""
    if deflection is None:
        deflection = design.release.release_force / spring_stiffness(design.spring)
    torque = required_torque(design, deflection).total_required
    return required_current(design.actuator, torque) * coil_resistance(design.actuator.coil)
