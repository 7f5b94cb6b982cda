"""TOML design files with a unit on every physical quantity.

    [spring]
    stiffness = "2.5 N/m"
    beam_length = "8 mm"

Files are read with any unit the field's dimension allows and written back in
SI base units, which keeps ``load -> dump -> load`` exact.
"""

from dataclasses import dataclass

import tomli
import tomli_w

from microjumper import units as u
from microjumper.model import (
    ActuatorSpec,
    BodySpec,
    CoilSpec,
    DriveKind,
    DriveSource,
    MassItem,
    MaterialSpec,
    RatchetSpec,
    ReleaseSpec,
    RobotDesign,
    SpringSpec,
)
from microjumper.optimize import DesignVariable, Objective, OptimizationProblem, Scale


class ConfigError(ValueError):
    pass


# (section path, field) -> (unit table, SI unit written on output)
FIELD_UNITS = {
    "spring.material.youngs_modulus": (u.PRESSURE, "Pa"),
    "spring.material.yield_strain": (u.DIMENSIONLESS, ""),
    "spring.material.density": (u.DENSITY, "kg/m^3"),
    "spring.stiffness": (u.STIFFNESS, "N/m"),
    "spring.beam_length": (u.LENGTH, "m"),
    "spring.beam_width": (u.LENGTH, "m"),
    "spring.sheet_thickness": (u.LENGTH, "m"),
    "spring.parallel_beam_count": (None, None),
    "spring.max_deflection_rated": (u.LENGTH, "m"),
    "release.release_force": (u.FORCE, "N"),
    "ratchet.shaft_radius": (u.LENGTH, "m"),
    "ratchet.tooth_pitch": (u.ANGLE, "rad"),
    "ratchet.tooth_height": (u.LENGTH, "m"),
    "ratchet.stroke_angle": (u.ANGLE, "rad"),
    "ratchet.winding_efficiency": (u.DIMENSIONLESS, ""),
    "ratchet.friction_coefficient": (u.DIMENSIONLESS, ""),
    "actuator.moment_arm_length": (u.LENGTH, "m"),
    "actuator.measured_starting_torque": (u.TORQUE, "N*m"),
    "actuator.coil.turns": (None, None),
    "actuator.coil.mean_radius": (u.LENGTH, "m"),
    "actuator.coil.wire_diameter": (u.LENGTH, "m"),
    "actuator.coil.avg_field": (u.FIELD, "T"),
    "actuator.coil.resistance": (u.RESISTANCE, "ohm"),
    "body.drag_coefficient": (u.DIMENSIONLESS, ""),
    "body.reference_area": (u.AREA, "m^2"),
    "body.air_density": (u.DENSITY, "kg/m^3"),
    "body.gravity": (u.ACCEL, "m/s^2"),
    "body.launch_efficiency": (u.DIMENSIONLESS, ""),
    "drive.amplitude": (u.VOLTAGE, "V"),
    "drive.frequency": (u.FREQUENCY, "Hz"),
    "problem.voltage_budget": (u.VOLTAGE, "V"),
    "problem.mass_budget": (u.MASS, "kg"),
    "problem.arm_mass_per_length": ({"kg/m": 1.0, "mg/mm": 1e-3}, "kg/m"),
}

OPTIONAL = {"spring.stiffness", "actuator.measured_starting_torque", "actuator.coil.resistance"}


@dataclass(frozen=True)
class RunConfig:
    design: RobotDesign
    drive: DriveSource
    problem: OptimizationProblem | None = None


def field_table(path):
    """Unit table for a design or drive field path (``None`` for integers)."""
    if path not in FIELD_UNITS:
        raise KeyError(path)
    return FIELD_UNITS[path][0]


def parse_value(path, raw):
    table = field_table(path)
    if table is None:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConfigError(f"{path}: expected an integer, got {raw!r}")
        return raw
    try:
        return u.parse_quantity(raw, table)
    except u.UnitError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _take(section, prefix, name, required=True):
    path = f"{prefix}.{name}"
    if name not in section:
        if required and path not in OPTIONAL:
            raise ConfigError(f"{path}: missing")
        return None
    return parse_value(path, section[name])


def _section(doc, path):
    node = doc
    for part in path.split("."):
        if part not in node or not isinstance(node[part], dict):
            raise ConfigError(f"[{path}]: missing section")
        node = node[part]
    return node


def _record(cls, doc, prefix, names, **extra):
    section = _section(doc, prefix)
    known = set(names) | set(extra)
    unknown = sorted(set(section) - known - {"material", "coil", "mass_items"})
    if unknown:
        raise ConfigError(f"[{prefix}]: unknown field(s) {', '.join(unknown)}")
    values = {n: _take(section, prefix, n) for n in names}
    values = {n: v for n, v in values.items() if v is not None or f"{prefix}.{n}" in OPTIONAL}
    return cls(**values, **extra)


def design_from_dict(doc):
    material_sec = _section(doc, "spring.material")
    material = _record(
        MaterialSpec, doc, "spring.material", ("youngs_modulus", "yield_strain", "density"),
        name=str(material_sec.get("name", "material")),
    )
    spring = _record(
        SpringSpec, doc, "spring",
        ("stiffness", "beam_length", "beam_width", "sheet_thickness",
         "parallel_beam_count", "max_deflection_rated"),
        material=material,
    )
    release = _record(ReleaseSpec, doc, "release", ("release_force",))
    ratchet = _record(
        RatchetSpec, doc, "ratchet",
        ("shaft_radius", "tooth_pitch", "tooth_height", "stroke_angle",
         "winding_efficiency", "friction_coefficient"),
    )
    coil = _record(
        CoilSpec, doc, "actuator.coil",
        ("turns", "mean_radius", "wire_diameter", "avg_field", "resistance"),
    )
    actuator = _record(
        ActuatorSpec, doc, "actuator", ("moment_arm_length", "measured_starting_torque"),
        coil=coil,
    )
    body_sec = _section(doc, "body")
    items = []
    for i, item in enumerate(body_sec.get("mass_items", [])):
        if not isinstance(item, dict) or "label" not in item or "mass" not in item:
            raise ConfigError(f"body.mass_items[{i}]: needs 'label' and 'mass'")
        try:
            mass = u.parse_quantity(item["mass"], u.MASS)
        except u.UnitError as exc:
            raise ConfigError(f"body.mass_items[{i}].mass: {exc}") from None
        items.append(MassItem(str(item["label"]), mass))
    body = _record(
        BodySpec, doc, "body",
        ("drag_coefficient", "reference_area", "air_density", "gravity", "launch_efficiency"),
        mass_items=tuple(items),
    )
    return RobotDesign(spring, release, ratchet, actuator, body)


def drive_from_dict(doc):
    sec = doc.get("drive", {})
    try:
        kind = DriveKind(sec.get("kind", DriveKind.SQUARE_WAVE_SUPPLY.value))
    except ValueError:
        raise ConfigError(f"drive.kind: unknown kind {sec.get('kind')!r}") from None
    amplitude = _take(sec, "drive", "amplitude")
    frequency = _take(sec, "drive", "frequency")
    return DriveSource(kind, amplitude, frequency)


def parse_variable(spec, design_paths):
    """``name:lower:upper[:scale]``; bounds take the field's units, bare
    numbers are SI."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"--var {spec!r}: expected field:lower:upper[:scale]")
    name = parts[0]
    if name not in design_paths:
        raise ConfigError(
            f"--var {spec!r}: unknown field {name!r}; known fields: {', '.join(design_paths)}"
        )
    lo, hi = (parse_bound(name, p) for p in parts[1:3])
    scale = parse_scale(parts[3]) if len(parts) == 4 else Scale.LINEAR
    return DesignVariable(name, lo, hi, scale)


_SCALE_ALIASES = {"lin": Scale.LINEAR, "log": Scale.LOGARITHMIC}


def parse_scale(raw):
    try:
        return _SCALE_ALIASES.get(raw) or Scale(raw)
    except ValueError:
        choices = sorted([s.value for s in Scale] + list(_SCALE_ALIASES))
        raise ConfigError(f"unknown scale {raw!r}; expected one of {choices}") from None


def parse_bound(path, raw):
    table = field_table(path) if path in FIELD_UNITS else None
    try:
        return float(raw)
    except ValueError:
        pass
    if table is None:
        raise ConfigError(f"{path}: cannot read bound {raw!r}")
    try:
        return u.parse_quantity(raw, table)
    except u.UnitError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def problem_from_dict(doc, design, drive):
    sec = doc.get("problem")
    if sec is None:
        return None
    variables = []
    for i, var in enumerate(sec.get("variables", [])):
        try:
            name = var["name"]
            lo = parse_bound(name, var["lower"])
            hi = parse_bound(name, var["upper"])
            scale = parse_scale(var.get("scale", "linear"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"problem.variables[{i}]: {exc}") from None
        variables.append(DesignVariable(name, lo, hi, scale))
    kwargs = {}
    for name in ("voltage_budget", "mass_budget", "arm_mass_per_length"):
        if name in sec:
            kwargs[name] = parse_value(f"problem.{name}", sec[name])
    for name in ("grid_points", "max_evaluations"):
        if name in sec:
            kwargs[name] = int(sec[name])
    if "objective" in sec:
        kwargs["objective"] = Objective(sec["objective"])
    try:
        return OptimizationProblem(tuple(variables), design, drive, **kwargs)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"[problem]: {exc}") from None


def loads(text):
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    design = design_from_dict(doc)
    drive = drive_from_dict(doc) if "drive" in doc else DriveSource()
    return RunConfig(design, drive, problem_from_dict(doc, design, drive))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# --- writing ---------------------------------------------------------------


def _q(path, value):
    if value is None:
        return None
    table, unit = FIELD_UNITS[path]
    if table is None:
        return int(value)
    return u.format_quantity(value, unit, table)


def _fields(prefix, record, names):
    out = {}
    for name in names:
        v = _q(f"{prefix}.{name}", getattr(record, name))
        if v is not None:
            out[name] = v
    return out


def design_to_dict(design):
    sp = design.spring
    spring = _fields(
        "spring", sp,
        ("stiffness", "beam_length", "beam_width", "sheet_thickness",
         "parallel_beam_count", "max_deflection_rated"),
    )
    spring["material"] = {"name": sp.material.name} | _fields(
        "spring.material", sp.material, ("youngs_modulus", "yield_strain", "density")
    )
    actuator = _fields("actuator", design.actuator, ("moment_arm_length", "measured_starting_torque"))
    actuator["coil"] = _fields(
        "actuator.coil", design.actuator.coil,
        ("turns", "mean_radius", "wire_diameter", "avg_field", "resistance"),
    )
    body = _fields(
        "body", design.body,
        ("drag_coefficient", "reference_area", "air_density", "gravity", "launch_efficiency"),
    )
    body["mass_items"] = [
        {"label": item.label, "mass": u.format_quantity(item.mass, "kg", u.MASS)}
        for item in design.body.mass_items
    ]
    return {
        "spring": spring,
        "release": _fields("release", design.release, ("release_force",)),
        "ratchet": _fields(
            "ratchet", design.ratchet,
            ("shaft_radius", "tooth_pitch", "tooth_height", "stroke_angle",
             "winding_efficiency", "friction_coefficient"),
        ),
        "actuator": actuator,
        "body": body,
    }


def drive_to_dict(drive):
    return {"kind": drive.kind.value} | _fields("drive", drive, ("amplitude", "frequency"))


def dumps(config):
    doc = design_to_dict(config.design)
    doc["drive"] = drive_to_dict(config.drive)
    if config.problem is not None:
        p = config.problem
        doc["problem"] = {
            "objective": p.objective.value,
            "mass_budget": _q("problem.mass_budget", p.mass_budget),
            "arm_mass_per_length": _q("problem.arm_mass_per_length", p.arm_mass_per_length),
            "grid_points": p.grid_points,
            "max_evaluations": p.max_evaluations,
            "variables": [
                {"name": v.name, "lower": v.lower, "upper": v.upper, "scale": v.scale.value}
                for v in p.variables
            ],
        }
        if p.voltage_budget is not None:
            doc["problem"]["voltage_budget"] = _q("problem.voltage_budget", p.voltage_budget)
    return tomli_w.dumps(doc)


def dump(config, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(config))
