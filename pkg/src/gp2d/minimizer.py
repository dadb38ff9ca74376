"""Unit-mass energy minimization by projected gradient flow.

The flow iterates u <- normalize(|u - tau * d|) where d descends along the
sphere-projected gradient P_u g = g - <g,u> u, with Armijo backtracking on
tau so the energy trace is monotone nonincreasing.  Positivity is enforced
by taking the absolute value after each step.

By default the descent direction is preconditioned by (c - Lap)^{-1}; the
residual, termination test, and all reported quantities use the plain
projected gradient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import energy, energy_gradient, eps_width
from .errors import CriticalCouplingGuard
from .grid import Field, Grid2D, inner, l2_norm, laplacian_apply, normalize
from .soliton import RadialProfile, lift_to_grid

CRITICALITY_MARGIN = 1e-4


@dataclass
class MinimizerOptions:
    tol_residual: float = 1e-7
    max_iters: int = 20000
    step_init: float = 0.5
    backtrack_factor: float = 0.5
    init_kind: str = "gaussian"  # gaussian | townes | prior_rescaled | from_file
    precondition: bool = True
    precond_shift: float = 1.0
    init_width: float = 1.0

    def __post_init__(self):
        if self.tol_residual <= 0:
            raise ValueError("tol_residual must be positive")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class MinimizerResult:
    u: Field
    E: float
    residual: float
    iters: int
    converged: bool
    eps: float
    coupling: float
    resolution_warning: bool = False
    energy_trace: list = field(default_factory=list, repr=False)


def gaussian_init(grid: Grid2D, V: Field, width: float = 1.0) -> Field:
    """Unit-mass Gaussian of the given width centered at the grid argmin of V."""
    idx = np.unravel_index(np.argmin(V.values), V.values.shape)
    cx, cy = grid.x[idx[1]], grid.x[idx[0]]
    rr = grid.radius((cx, cy))
    return normalize(Field(grid, np.exp(-(rr**2) / (2.0 * width**2))))


def _initial_field(V, grid, opts, init, profile):
    if init is not None:
        return normalize(Field(grid, np.abs(init.values)))
    if opts.init_kind == "townes":
        if profile is None:
            raise ValueError("init_kind='townes' requires a radial profile")
        idx = np.unravel_index(np.argmin(V.values), V.values.shape)
        return lift_to_grid(profile, grid, (grid.x[idx[1]], grid.x[idx[0]]))
    return gaussian_init(grid, V, opts.init_width)


def minimize(
    V: Field,
    a: float,
    grid: Grid2D,
    opts: MinimizerOptions | None = None,
    init: Field | None = None,
    a_star: float | None = None,
    profile: RadialProfile | None = None,
) -> MinimizerResult:
    """Minimize E_a over the unit-mass sphere.

    If a_star is supplied, couplings within the criticality margin of it are
    refused: on a finite grid the infimum there is spurious.
    """
    opts = opts or MinimizerOptions()
    if a < 0:
        raise ValueError(f"coupling must be nonnegative, got {a}")
    if a_star is not None and a >= a_star * (1.0 - CRITICALITY_MARGIN):
        raise CriticalCouplingGuard(
            f"a = {a} too close to the critical coupling {a_star}"
        )

    u = _initial_field(V, grid, opts, init, profile)
    w = grid.weight
    n = grid.n
    k2r = grid.k2r
    parseval = grid.rfft_weights[None, :] * w / n**2
    vvals = V.values
    shape = (n, n)

    def parts(vals, vh):
        kin = float(np.sum(parseval * k2r * np.abs(vh) ** 2))
        pot = float(np.sum(vvals * vals**2) * w)
        quart = float(np.sum(vals**4) * w)
        return kin + pot - 0.5 * a * quart

    uvals = u.values
    uh = np.fft.rfft2(uvals)
    E = parts(uvals, uh)
    trace = [E]
    tau = opts.step_init
    residual = np.inf
    converged = False
    iters = 0
    prev_u = None
    prev_pg = None
    stalls = 0
    for iters in range(1, opts.max_iters + 1):
        lap = np.fft.irfft2(-k2r * uh, s=shape)
        gvals = -lap + vvals * uvals - a * uvals**3
        mu = float(np.sum(gvals * uvals) * w)
        pg = gvals - mu * uvals
        residual = float(np.sqrt(np.sum(pg**2) * w))
        if residual <= opts.tol_residual:
            converged = True
            break
        if opts.precondition:
            # shift tracks the chemical potential so the preconditioner stays
            # effective as the minimizer concentrates
            shift = max(opts.precond_shift, abs(mu))
            d = np.fft.irfft2(np.fft.rfft2(pg) / (shift + k2r), s=shape)
            d -= (np.sum(d * uvals) * w) * uvals
        else:
            d = pg
        slope = float(np.sum(pg * d) * w)  # > 0 for an SPD preconditioner
        # Barzilai-Borwein guess for the trial step, clipped for safety
        if prev_u is not None:
            s = uvals - prev_u
            y = pg - prev_pg
            denom = float(np.sum(s * y))
            if denom != 0.0 and np.isfinite(denom):
                tau = min(max(abs(float(np.sum(s * s)) / denom), 1e-6), 50.0)
            else:
                tau = min(tau / opts.backtrack_factor, opts.step_init)
        else:
            tau = opts.step_init
        prev_u = uvals.copy()
        prev_pg = pg
        accepted = False
        while tau > 1e-14:
            cand = uvals - tau * d
            # positivity enforcement: flip genuinely negative excursions, but
            # leave tiny dips alone -- the sign kinks of a blanket abs()
            # pollute the spectral kinetic term and floor the residual
            if cand.min() < -1e-4 * cand.max():
                np.abs(cand, out=cand)
            ch = np.fft.rfft2(cand)
            m = float(np.sum(cand**2) * w)
            scale = 1.0 / np.sqrt(m)
            cand *= scale
            ch *= scale
            E_cand = parts(cand, ch)
            if E_cand <= E - 1e-4 * tau * slope:
                uvals, uh, E = cand, ch, E_cand
                accepted = True
                break
            tau *= opts.backtrack_factor
        if not accepted:
            # step underflow: drop the Barzilai-Borwein memory and retry once
            # before reporting the best iterate
            stalls += 1
            if stalls >= 2:
                break
            prev_u = None
            prev_pg = None
            tau = opts.step_init
            continue
        stalls = 0
        trace.append(E)

    u = Field(grid, uvals)
    eps = eps_width(u)
    return MinimizerResult(
        u=u,
        E=E,
        residual=float(residual),
        iters=iters,
        converged=converged,
        eps=float(eps),
        coupling=a,
        resolution_warning=bool(eps < 4.0 * grid.dx),
        energy_trace=trace,
    )


def el_residual(result: MinimizerResult, V: Field, a: float) -> float:
    """Euler-Lagrange residual ||-Lap u + V u - a u^3 - mu u|| (diagnostic)."""
    u = result.u
    g = energy_gradient(u, V, a)
    mu = inner(g, u)
    return l2_norm(Field(u.grid, g.values - mu * u.values))


def _recentered_dilate(u: Field, ell: float) -> Field:
    """Dilate about the density argmax so off-center bumps stay put."""
    from .energy import dilate
    from .grid import shift_to_index

    iy, ix = np.unravel_index(np.argmax(np.abs(u.values)), u.values.shape)
    i0 = u.grid.n // 2
    centered = shift_to_index(u, iy, ix)
    try:
        narrowed = dilate(centered, ell)
    except Exception:
        return u
    vals = np.roll(narrowed.values, (iy - i0, ix - i0), axis=(0, 1))
    return Field(u.grid, vals)


def continuation_sweep(
    V: Field,
    schedule,
    grid: Grid2D,
    opts: MinimizerOptions | None = None,
    a_star: float | None = None,
    profile: RadialProfile | None = None,
) -> list[MinimizerResult]:
    """Run minimize along an ascending coupling schedule with warm starts.

    Each entry starts from the previous minimizer rescaled by the ratio of
    predicted widths (a*-a)^(1/4).  Per-entry non-convergence is recorded in
    the result, not raised.
    """
    schedule = [float(a) for a in schedule]
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    opts = opts or MinimizerOptions()
    results: list[MinimizerResult] = []
    init = None
    for i, a in enumerate(schedule):
        if init is not None and a_star is not None and i > 0:
            ell = ((a_star - schedule[i - 1]) / (a_star - a)) ** 0.25
            init = _recentered_dilate(init, max(ell, 1.0))
        res = minimize(V, a, grid, opts, init=init, a_star=a_star, profile=profile)
        results.append(res)
        init = res.u
    return results
