"""Planar spring and magnetic snap-release."""

from dataclasses import dataclass

from microjumper.model import InvalidSpecError


@dataclass(frozen=True)
class SpringState:
    deflection: float
    tension: float

    @classmethod
    def at(cls, k, deflection):
        return cls(deflection, spring_force(k, deflection))


@dataclass(frozen=True)
class ReleaseOutcome:
    released: bool
    deflection_at_event: float
    stored_energy_at_event: float


def _require_geometry(spring):
    if spring.material is None:
        raise InvalidSpecError("SpringSpec.material is missing")
    for name in ("beam_length", "beam_width", "sheet_thickness"):
        value = getattr(spring, name)
        if value is None or not value > 0:
            raise InvalidSpecError(f"SpringSpec.{name} must be > 0")


def stiffness_from_geometry(spring):
    """Beam-theory stiffness, ignoring any explicit ``spring.stiffness``.

    Each beam is fixed at the frame and guided at the center tap, so its tip
    stiffness is 12EI/l^3 with I = w t^3 / 12.
    """
    _require_geometry(spring)
    E = spring.material.youngs_modulus
    t = spring.sheet_thickness
    second_moment = spring.beam_width * t**3 / 12.0
    return spring.parallel_beam_count * 12.0 * E * second_moment / spring.beam_length**3


def spring_force(k, deflection):
    if deflection < 0:
        raise ValueError(f"deflection must be >= 0, got {deflection}")
    return k * deflection


def stored_energy(k, deflection):
    if deflection < 0:
        raise ValueError(f"deflection must be >= 0, got {deflection}")
    return 0.5 * k * deflection * deflection


def release_deflection(k, release):
    if not k > 0:
        raise InvalidSpecError(f"stiffness must be > 0, got {k}")
    return release.release_force / k


def check_release(state, release, k=None):
    """Snap the magnets once string tension reaches the release force.

    ``k`` is only needed for the energy; it defaults to tension/deflection.
    """
    released = state.tension >= release.release_force
    if not released:
        return ReleaseOutcome(False, state.deflection, 0.0)
    if k is None:
        k = state.tension / state.deflection if state.deflection > 0 else 0.0
    return ReleaseOutcome(True, state.deflection, stored_energy(k, state.deflection))


def max_strain(spring, deflection):
    """Peak surface strain of a fixed-guided beam: 3 t d / l^2."""
    _require_geometry(spring)
    return 3.0 * spring.sheet_thickness * deflection / spring.beam_length**2


def solve_beam_width(spring, target_k):
    """Beam width giving ``target_k`` with the other geometry fixed."""
    _require_geometry(spring)
    return spring.beam_width * target_k / stiffness_from_geometry(spring)
