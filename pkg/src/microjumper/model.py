"""Design records for the spring-loaded jumping microrobot.

All records are frozen dataclasses holding SI values. ``BASELINE`` is the
reference robot: 75 mg, 2.5 N/m spring, 7.5 mN magnet release, 1 mm shaft,
384-turn coil on an 8 mm moment arm.
"""

import math
from dataclasses import dataclass, fields, is_dataclass, replace
from enum import Enum


class InvalidSpecError(ValueError):
    """A design record breaks an invariant that an operation depends on."""


class DriveKind(str, Enum):
    SQUARE_WAVE_SUPPLY = "square_wave_supply"
    PV_PAIR = "pv_pair"


@dataclass(frozen=True)
class MaterialSpec:
    youngs_modulus: float
    yield_strain: float
    density: float
    name: str = "material"


@dataclass(frozen=True)
class SpringSpec:
    beam_length: float
    beam_width: float
    sheet_thickness: float
    parallel_beam_count: int
    material: MaterialSpec
    max_deflection_rated: float
    stiffness: float | None = None


@dataclass(frozen=True)
class ReleaseSpec:
    release_force: float


@dataclass(frozen=True)
class RatchetSpec:
    shaft_radius: float
    tooth_pitch: float
    tooth_height: float
    stroke_angle: float
    winding_efficiency: float = 1.0
    friction_coefficient: float = 1.0


@dataclass(frozen=True)
class CoilSpec:
    turns: int
    mean_radius: float
    wire_diameter: float
    avg_field: float
    resistance: float | None = None


@dataclass(frozen=True)
class ActuatorSpec:
    coil: CoilSpec
    moment_arm_length: float
    # Bench value that overrides the friction+spring estimate when set.
    measured_starting_torque: float | None = None


@dataclass(frozen=True)
class DriveSource:
    kind: DriveKind = DriveKind.SQUARE_WAVE_SUPPLY
    amplitude: float = 0.8
    frequency: float = 20.0


@dataclass(frozen=True)
class MassItem:
    label: str
    mass: float


@dataclass(frozen=True)
class BodySpec:
    mass_items: tuple[MassItem, ...]
    drag_coefficient: float = 0.0
    reference_area: float = 0.0
    air_density: float = 1.225
    gravity: float = 9.81
    launch_efficiency: float = 1.0


@dataclass(frozen=True)
class RobotDesign:
    spring: SpringSpec
    release: ReleaseSpec
    ratchet: RatchetSpec
    actuator: ActuatorSpec
    body: BodySpec


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def __str__(self):
        return f"{self.field}: {self.rule}"


def total_mass(body):
    if not body.mass_items:
        raise InvalidSpecError("BodySpec.mass_items is empty")
    return math.fsum(item.mass for item in body.mass_items)


def spring_stiffness(spring):
    """Stiffness used by the rest of the model: the explicit value if set,
    otherwise the beam-theory estimate."""
    if spring.stiffness is not None:
        return spring.stiffness
    from microjumper.spring import stiffness_from_geometry

    return stiffness_from_geometry(spring)


def _positive(out, name, value):
    if not (value > 0 and math.isfinite(value)):
        out.append(Violation(name, "must be > 0"))


def validate_design(design):
    """Return every broken invariant as a :class:`Violation`; empty if valid."""
    out = []
    sp = design.spring
    mat = sp.material
    _positive(out, "MaterialSpec.youngs_modulus", mat.youngs_modulus)
    _positive(out, "MaterialSpec.yield_strain", mat.yield_strain)
    _positive(out, "MaterialSpec.density", mat.density)
    if mat.yield_strain >= 0.05:
        out.append(Violation("MaterialSpec.yield_strain", "must be < 0.05"))

    if sp.stiffness is not None:
        _positive(out, "SpringSpec.stiffness", sp.stiffness)
    for name in ("beam_length", "beam_width", "sheet_thickness", "max_deflection_rated"):
        _positive(out, f"SpringSpec.{name}", getattr(sp, name))
    if sp.sheet_thickness > sp.beam_width:
        out.append(Violation("SpringSpec.sheet_thickness", "must be <= beam_width"))
    if sp.parallel_beam_count < 1:
        out.append(Violation("SpringSpec.parallel_beam_count", "must be >= 1"))

    _positive(out, "ReleaseSpec.release_force", design.release.release_force)

    r = design.ratchet
    for name in ("shaft_radius", "tooth_pitch", "stroke_angle"):
        _positive(out, f"RatchetSpec.{name}", getattr(r, name))
    if not 0 < r.winding_efficiency <= 1:
        out.append(Violation("RatchetSpec.winding_efficiency", "must be in (0, 1]"))
    if r.friction_coefficient < 0:
        out.append(Violation("RatchetSpec.friction_coefficient", "must be >= 0"))

    coil = design.actuator.coil
    if coil.turns < 1:
        out.append(Violation("CoilSpec.turns", "must be >= 1"))
    _positive(out, "CoilSpec.mean_radius", coil.mean_radius)
    _positive(out, "CoilSpec.avg_field", coil.avg_field)
    if coil.resistance is not None:
        _positive(out, "CoilSpec.resistance", coil.resistance)
    _positive(out, "ActuatorSpec.moment_arm_length", design.actuator.moment_arm_length)

    body = design.body
    if not body.mass_items:
        out.append(Violation("BodySpec.mass_items", "must not be empty"))
    for item in body.mass_items:
        if item.mass < 0:
            out.append(Violation(f"BodySpec.mass_items[{item.label}]", "mass must be >= 0"))
    if body.mass_items and not sum(i.mass for i in body.mass_items) > 0:
        out.append(Violation("BodySpec.mass_items", "total mass must be > 0"))
    if not 0 < body.launch_efficiency <= 1:
        out.append(Violation("BodySpec.launch_efficiency", "must be in (0, 1]"))
    _positive(out, "BodySpec.gravity", body.gravity)
    for name in ("drag_coefficient", "reference_area", "air_density"):
        if getattr(body, name) < 0:
            out.append(Violation(f"BodySpec.{name}", "must be >= 0"))

    # The deflection bound only makes sense once the spring itself is sane.
    if not out:
        k = spring_stiffness(sp)
        if design.release.release_force / k > sp.max_deflection_rated:
            out.append(
                Violation(
                    "RobotDesign.release_deflection",
                    "release_force / stiffness must be <= spring.max_deflection_rated",
                )
            )
    return out


def require_valid(design):
    violations = validate_design(design)
    if violations:
        raise InvalidSpecError("; ".join(str(v) for v in violations))


# --- field paths -----------------------------------------------------------


def numeric_paths(record, prefix=""):
    """Dotted paths of every numeric leaf, e.g. ``actuator.coil.turns``."""
    out = []
    for f in fields(record):
        value = getattr(record, f.name)
        path = f"{prefix}{f.name}"
        if is_dataclass(value):
            out.extend(numeric_paths(value, path + "."))
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            out.append(path)
    return out


def get_path(record, path):
    for part in path.split("."):
        record = getattr(record, part)
    return record


def set_path(record, path, value):
    """Return a copy of ``record`` with the dotted ``path`` replaced."""
    head, _, rest = path.partition(".")
    if not hasattr(record, head):
        raise KeyError(path)
    if rest:
        return replace(record, **{head: set_path(getattr(record, head), rest, value)})
    if isinstance(getattr(record, head), int) and not isinstance(getattr(record, head), bool):
        value = int(round(value))
    return replace(record, **{head: value})


# --- reference robot -------------------------------------------------------

REFERENCE_MASSES = (
    MassItem("coil", 13e-6),
    MassItem("magnet + moment arm", 27e-6),
    MassItem("PV cell 1", 1e-6),
    MassItem("PV cell 2", 1e-6),
    MassItem("base-plate + supports", 9e-6),
    MassItem("ratchet tube", 9e-6),
    MassItem("steel spring", 2e-6),
    MassItem("rings + connectors", 11e-6),
    MassItem("stand + feet", 2e-6),
)

# Spring-temper stainless: E = 193 GPa, yield ~1.16 GPa.
STAINLESS_301 = MaterialSpec(
    youngs_modulus=193e9, yield_strain=0.006, density=7900.0, name="stainless 301 full hard"
)

# Fixed-guided beams reconstructed to give 2.5 N/m at 25.4 um sheet thickness
# while staying under yield at 3 mm; the real l, w were never published.
RECONSTRUCTED_SPRING = SpringSpec(
    beam_length=8e-3,
    beam_width=0.2024e-3,
    sheet_thickness=25.4e-6,
    parallel_beam_count=2,
    material=STAINLESS_301,
    max_deflection_rated=5e-3,
    stiffness=2.5,
)

DEFAULT_DRAG_COEFFICIENT = 1.2
DEFAULT_REFERENCE_AREA = 17e-3 * 14e-3

# Empirical factors reproducing the tethered experiments (8 mm, 10 s/jump).
CALIBRATED_LAUNCH_EFFICIENCY = 0.52
CALIBRATED_WINDING_EFFICIENCY = 0.43

BASELINE = RobotDesign(
    spring=RECONSTRUCTED_SPRING,
    release=ReleaseSpec(release_force=7.5e-3),
    ratchet=RatchetSpec(
        shaft_radius=1e-3,
        tooth_pitch=math.radians(4.0),
        tooth_height=25e-6,
        stroke_angle=math.radians(2.0),
        winding_efficiency=1.0,
        friction_coefficient=1.0,
    ),
    actuator=ActuatorSpec(
        coil=CoilSpec(
            turns=48 * 8,
            mean_radius=(1.9e-3 + 2.45e-3) / 4,
            wire_diameter=25e-6,
            avg_field=0.1,
            resistance=100.0,
        ),
        moment_arm_length=8e-3,
        measured_starting_torque=17e-6,
    ),
    body=BodySpec(
        mass_items=REFERENCE_MASSES,
        drag_coefficient=DEFAULT_DRAG_COEFFICIENT,
        reference_area=DEFAULT_REFERENCE_AREA,
        air_density=1.225,
        gravity=9.81,
        launch_efficiency=1.0,
    ),
)

BASELINE_DRIVE = DriveSource(DriveKind.SQUARE_WAVE_SUPPLY, amplitude=0.8, frequency=20.0)


def calibrated(design=BASELINE):
    """``design`` with both empirical efficiencies applied."""
    design = set_path(design, "body.launch_efficiency", CALIBRATED_LAUNCH_EFFICIENCY)
    return set_path(design, "ratchet.winding_efficiency", CALIBRATED_WINDING_EFFICIENCY)
