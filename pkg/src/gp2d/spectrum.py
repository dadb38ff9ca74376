"""Ground energy of -Lap + V on the truncated domain and the spectral-gap check.

The ground energy is the infimum of the quadratic form over unit-mass fields,
computed with the a=0 projected gradient flow (one code path with the
interacting minimizer).  The gap condition requires this infimum to exceed
the essential infimum of V strictly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence
from .grid import Field, Grid2D, inner, l2_norm
from .minimizer import MinimizerOptions, minimize


@dataclass(frozen=True)
class SpectrumReport:
    lambda0: float
    residual: float
    ess_inf_V: float
    v1_margin: float
    passes_v1: bool
    tol: float

    def as_dict(self):
        return {
            "lambda0": self.lambda0,
            "residual": self.residual,
            "ess_inf_V": self.ess_inf_V,
            "v1_margin": self.v1_margin,
            "passes_v1": self.passes_v1,
            "tol": self.tol,
        }


def ground_energy(V: Field, grid: Grid2D, tol: float = 1e-8, max_iters: int = 50000):
    """Lowest eigenpair of -Lap + V by the a=0 gradient flow.

    Returns (lambda0, eigvec, residual) with residual the L2 norm of
    (-Lap + V - lambda0) applied to the eigvec.
    """
    opts = MinimizerOptions(tol_residual=tol, max_iters=max_iters)
    res = minimize(V, 0.0, grid, opts)
    if not res.converged and res.residual > 100.0 * tol:
        raise NonConvergence(
            f"ground-state flow residual {res.residual} above {100.0 * tol}"
        )
    from .energy import energy_gradient

    u = res.u
    g = energy_gradient(u, V, 0.0)
    lam = inner(g, u)
    residual = l2_norm(Field(grid, g.values - lam * u.values))
    return float(lam), u, float(residual)


def check_v1(
    V: Field,
    grid: Grid2D,
    tol: float = 1e-6,
    ess_inf_V: float | None = None,
) -> SpectrumReport:
    """Spectral-gap report: passes iff lambda0 - ess inf V > tol.

    ess_inf_V, when known analytically, should be passed in; otherwise the
    grid minimum is used (an upper bound on the essential infimum).
    """
    lam, _, residual = ground_energy(V, grid, tol=min(tol, 1e-8))
    if ess_inf_V is None:
        ess_inf_V = float(np.min(V.values))
    margin = lam - ess_inf_V
    return SpectrumReport(
        lambda0=lam,
        residual=residual,
        ess_inf_V=float(ess_inf_V),
        v1_margin=float(margin),
        passes_v1=bool(margin > tol),
        tol=float(tol),
    )
