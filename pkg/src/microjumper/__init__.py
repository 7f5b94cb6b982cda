"""Spring-loaded jumping microrobot: design records, physics, search, CLI."""

from microjumper.model import (
    BASELINE,
    BASELINE_DRIVE,
    RobotDesign,
    DriveSource,
    calibrated,
    total_mass,
    validate_design,
)

__all__ = [
    "BASELINE",
    "BASELINE_DRIVE",
    "RobotDesign",
    "DriveSource",
    "calibrated",
    "total_mass",
    "validate_design",
]

__version__ = "0.1.0"
