"""Double-ratchet kinematics: oscillating arm in, monotone shaft rotation out.

On a clockwise stroke ring 3 grips the shaft and drags it forward; on the
return stroke ring 2 holds it. The reverse direction is treated as fully
locked, so string tension never unwinds the shaft between strokes.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

from microjumper.model import InvalidSpecError, require_valid, spring_stiffness
from microjumper.spring import release_deflection


class Stroke(str, Enum):
    CW = "cw_stroke"
    CCW = "ccw_stroke"


@dataclass(frozen=True)
class RatchetState:
    shaft_angle: float = 0.0
    input_phase: Stroke = Stroke.CCW
    cycle_count: int = 0


def apply_stroke(state, direction, spec):
    """Advance the ratchet by one half-cycle of arm motion.

    A cycle is a cw stroke followed by a ccw stroke; ``cycle_count`` ticks on
    the ccw stroke that closes a cycle.
    """
    direction = Stroke(direction)
    if direction is Stroke.CW:
        advance = spec.stroke_angle * spec.winding_efficiency
        return replace(state, shaft_angle=state.shaft_angle + advance, input_phase=Stroke.CW)
    cycles = state.cycle_count + (1 if state.input_phase is Stroke.CW else 0)
    return replace(state, input_phase=Stroke.CCW, cycle_count=cycles)


def wound_length(state, spec):
    """String taken up on a single-layer wrap of constant radius."""
    return spec.shaft_radius * state.shaft_angle


def take_up_per_cycle(spec):
    return spec.shaft_radius * spec.stroke_angle * spec.winding_efficiency


def cycles_to_release(design):
    """Full arm cycles needed to wind the spring to the snap-release point."""
    require_valid(design)
    target = release_deflection(spring_stiffness(design.spring), design.release)
    per_cycle = take_up_per_cycle(design.ratchet)
    if not per_cycle > 0 or target / per_cycle > 1e12:
        raise InvalidSpecError(
            f"per-cycle take-up {per_cycle:.3g} m cannot reach {target:.3g} m"
        )
    n = math.ceil(target / per_cycle)
    # ceil of a ratio can land one short of the accumulated sum; settle on the
    # count that the stroke-by-stroke product actually reaches.
    while n * per_cycle < target:
        n += 1
    while n > 1 and (n - 1) * per_cycle >= target:
        n -= 1
    return n


def tooth_quantize(angle, spec):
    """Largest whole number of tooth pitches not exceeding ``angle``."""
    if angle < 0:
        raise ValueError(f"angle must be >= 0, got {angle}")
    teeth = math.floor(angle / spec.tooth_pitch)
    # guard against 8deg/4deg evaluating to 1.9999999
    if math.isclose((teeth + 1) * spec.tooth_pitch, angle, rel_tol=1e-12):
        teeth += 1
    return teeth * spec.tooth_pitch
