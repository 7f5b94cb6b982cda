"""Reference computations that share no code with the package under test."""

import math

import numpy as np
from scipy.integrate import solve_bvp


def beam_tip_response(E, width, thickness, length, load=1e-3, nodes=201):
    """Fixed-guided Euler-Bernoulli beam under a transverse end load.

    Solves EI w'''' = 0 with w(0) = w'(0) = 0 at the clamp and w'(l) = 0,
    EI w'''(l) = -load at the guided end. Returns (tip deflection, max |w''|).
    """
    EI = E * width * thickness**3 / 12.0
    x = np.linspace(0.0, length, nodes)

    def rhs(x, y):
        return np.vstack([y[1], y[2], y[3], np.zeros_like(x)])

    def bc(ya, yb):
        return np.array([ya[0], ya[1], yb[1], EI * yb[3] + load])

    sol = solve_bvp(rhs, bc, x, np.zeros((4, x.size)), tol=1e-10, max_nodes=100000)
    assert sol.success, sol.message
    fine = np.linspace(0.0, length, 2001)
    y = sol.sol(fine)
    return abs(y[0, -1]), float(np.max(np.abs(y[2])))


def beam_stiffness(spring):
    tip, _ = beam_tip_response(
        spring.material.youngs_modulus, spring.beam_width, spring.sheet_thickness,
        spring.beam_length,
    )
    return spring.parallel_beam_count * 1e-3 / tip


def beam_peak_strain(spring, deflection):
    tip, curvature = beam_tip_response(
        spring.material.youngs_modulus, spring.beam_width, spring.sheet_thickness,
        spring.beam_length,
    )
    return 0.5 * spring.sheet_thickness * curvature * deflection / tip


def strokes_until_release(k, release_force, radius, stroke, efficiency, limit=10**7):
    """Count cycles by accumulating shaft angle one stroke at a time."""
    angle = 0.0
    for n in range(1, limit):
        angle += stroke * efficiency
        if k * (radius * angle) >= release_force:
            return n
    raise AssertionError("no release within limit")


def vacuum_apex(v0, g):
    return v0 * v0 / (2.0 * g)


def quadratic_drag_apex(v0, g, drag_per_mass):
    """Closed-form ascent height with F_drag/m = c v^2."""
    c = drag_per_mass
    if c == 0:
        return vacuum_apex(v0, g)
    return math.log1p(c * v0 * v0 / g) / (2.0 * c)
