"""The Gross-Pitaevskii functional, its gradient, and instability scans.

energy() returns the kinetic/potential/quartic breakdown of

    E_a(u) = int |grad u|^2 + V u^2 - (a/2) u^4.

energy_gradient() returns the half-gradient g = -Lap u + V u - a u^3, so that
<g, d> = (1/2) d/dt E_a(u + t d)|_0 and the Euler-Lagrange residual matches
the Townes equation literally at a = a*, V = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateField, ResolutionExceeded, UnnormalizedInput
from .grid import (
    Field,
    Grid2D,
    integrate_power,
    kinetic,
    laplacian_apply,
    mass,
    normalize,
    resample_affine,
)
from .soliton import RadialProfile

MASS_TOL = 1e-8


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    potential: float
    quartic: float
    coupling: float
    total: float

    @classmethod
    def from_parts(cls, kin, pot, quart, a):
        return cls(
            kinetic=kin,
            potential=pot,
            quartic=quart,
            coupling=a,
            total=kin + pot - 0.5 * a * quart,
        )

    def as_dict(self):
        return {
            "kinetic": self.kinetic,
            "potential": self.potential,
            "quartic": self.quartic,
            "coupling": self.coupling,
            "total": self.total,
        }


def energy(u: Field, V: Field, a: float, check_mass: bool = True) -> EnergyBreakdown:
    """Breakdown of E_a(u).  Requires unit mass unless check_mass=False."""
    if check_mass and abs(mass(u) - 1.0) > MASS_TOL:
        raise UnnormalizedInput(f"mass(u) = {mass(u)}, expected 1")
    kin = kinetic(u)
    pot = float(np.sum(V.values * u.values**2) * u.grid.weight)
    quart = integrate_power(u, 4.0)
    return EnergyBreakdown.from_parts(kin, pot, quart, a)


def energy_gradient(u: Field, V: Field, a: float) -> Field:
    """Half-gradient -Lap u + V u - a u^3 of the functional."""
    lap = laplacian_apply(u)
    vals = -lap.values + V.values * u.values - a * u.values**3
    return Field(u.grid, vals)


def gn_quotient(u: Field) -> float:
    """Gagliardo-Nirenberg quotient kinetic*mass / (quartic/2).

    Scale- and translation-invariant; bounded below by the critical coupling.
    """
    quart = integrate_power(u, 4.0)
    if quart <= 0.0:
        raise DegenerateField("quartic integral vanishes")
    return 2.0 * kinetic(u) * mass(u) / quart


def eps_width(u: Field) -> float:
    """Gradient-based width 1/||grad u||."""
    return 1.0 / np.sqrt(kinetic(u))


def dilate(u: Field, ell: float, min_width_dx: float = 4.0) -> Field:
    """Spectrally resampled dilation u_ell(x) = ell * u(ell x), renormalized."""
    if ell < 1.0:
        raise ValueError(f"dilation factor must be >= 1, got {ell}")
    g = u.grid
    predicted = eps_width(u) / ell
    if predicted < min_width_dx * g.dx * (1.0 - 1e-9):
        raise ResolutionExceeded(
            f"dilated width {predicted:.4g} below {min_width_dx} dx = "
            f"{min_width_dx * g.dx:.4g}"
        )
    vals = ell * resample_affine(u, ell)
    # keep only samples whose preimage ell*x stays inside the fundamental box;
    # the periodic interpolant would otherwise alias in wrapped ghost copies
    keep = np.abs(g.x) * ell <= g.L
    vals *= keep[None, :] * keep[:, None]
    return normalize(Field(g, vals))


def dilation_scan(u: Field, V: Field, a: float, scales) -> list[EnergyBreakdown]:
    """Evaluate E_a along the dilation family u_ell; for V=0 kinetic and
    quartic parts scale as ell^2."""
    if abs(mass(u) - 1.0) > MASS_TOL:
        raise UnnormalizedInput("dilation_scan requires a normalized field")
    out = []
    for ell in scales:
        out.append(energy(dilate(u, float(ell)), V, a))
    return out


def smooth_bump(r: np.ndarray, inner: float = 1.0, outer: float = 2.0) -> np.ndarray:
    """Quintic smoothstep bump: 1 on r <= inner, 0 on r >= outer."""
    t = np.clip((outer - r) / (outer - inner), 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def trial_state_energy(
    grid: Grid2D,
    profile: RadialProfile,
    V: Field,
    a: float,
    x0=(0.0, 0.0),
    ell: float = 1.0,
) -> float:
    """Energy of the concentrating cut-off trial state

        u(x) = A * bump(x - x0) * Q0(ell (x - x0)) * ell

    with A the unit-mass normalizer.  Upper-bounds the ground energy."""
    if ell < 1.0:
        raise ValueError(f"concentration scale must be >= 1, got {ell}")
    if 2.0 > grid.L:
        raise ResolutionExceeded("cut-off support does not fit the box")
    if 1.0 / ell < 4.0 * grid.dx / np.sqrt(profile.kinetic / profile.mass + 1.0):
        # crude guard: the concentrated core must stay resolvable
        if 1.0 / ell < 2.0 * grid.dx:
            raise ResolutionExceeded(f"scale {ell} under-resolved on dx={grid.dx}")
    rr = grid.radius(x0)
    spl = profile.spline()
    r_mesh_end = float(profile.r[-1])
    core = np.where(rr * ell <= r_mesh_end, spl(np.minimum(rr * ell, r_mesh_end)), 0.0)
    vals = ell * smooth_bump(rr) * core / np.sqrt(profile.mass)
    u = normalize(Field(grid, vals))
    return energy(u, V, a).total
