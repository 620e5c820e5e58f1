"""Conformal pseudometrics on the unit disk.

A pseudometric is a nonnegative density with declared isolated zeros
(location and order), an optional exact curvature provider, and optional
curvature pinching bounds.  The module supplies the hyperbolic density,
pullbacks under holomorphic self-maps, the extremal constant-curvature
density with a prescribed zero, scalings and subharmonic-weight variants,
numeric curvature, the domination relation, the extended quotient of two
densities across shared zeros, and a zero-order estimator.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .holomap import HoloMap, critical_points, is_constant, preimages
from .numerics import laplacian_fd

ZERO_MATCH_TOL = 1e-9
QUOTIENT_LIMIT_RADIUS = 1e-4
QUOTIENT_LIMIT_ANGLES = 32
CURVATURE_H = 1e-3
NEAR_BOUNDARY_CUTOFF = 0.999


class MetricError(ValueError):
    """Raised on invalid pseudometric input."""


class DominationError(MetricError):
    """Raised when a required domination relation fails structurally."""


@dataclass(frozen=True)
class ZeroRecord:
    """An isolated zero: density(z) ~ const * |z - location|**order."""

    location: complex
    order: float

    def __post_init__(self):
        if self.order <= 0:
            raise MetricError("zero order must be positive")
        if abs(self.location) >= 1.0:
            raise MetricError("zero location must lie inside the disk")


@dataclass(frozen=True)
class Pseudometric:
    """Conformal pseudometric: density, declared zeros, curvature data.

    ``curvature`` is an exact provider (callable) or None, meaning the
    curvature must be obtained by finite differences of log density.
    ``pinch`` declares bounds (c_low, c_high) with c_low <= kappa <= c_high.
    ``domain_radius`` restricts evaluation for densities that only exist
    on a sub-disk (numerically constructed metrics).
    """

    density: Callable
    zeros: tuple[ZeroRecord, ...] = ()
    curvature: Callable | None = None
    pinch: tuple[float, float] | None = None
    name: str = "metric"
    domain_radius: float = 1.0

    def __post_init__(self):
        locs = [z.location for z in self.zeros]
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if abs(locs[i] - locs[j]) < ZERO_MATCH_TOL:
                    raise MetricError("zero locations must be pairwise distinct")
        if self.pinch is not None and self.pinch[0] > self.pinch[1]:
            raise MetricError("pinch bounds out of order")

    @property
    def has_exact_curvature(self) -> bool:
        return self.curvature is not None

    def zero_at(self, xi: complex) -> ZeroRecord | None:
        for rec in self.zeros:
            if abs(rec.location - xi) < ZERO_MATCH_TOL:
                return rec
        return None

    def without_exact_curvature(self) -> "Pseudometric":
        """Copy with the curvature provider stripped (forces FD paths)."""
        return dataclasses.replace(self, curvature=None)


def _const_curvature(value: float) -> Callable:
    def kappa(z):
        if np.ndim(z):
            return np.full(np.shape(z), value)
        return value

    return kappa


def poincare() -> Pseudometric:
    """The hyperbolic density 1/(1-|z|^2); curvature identically -4."""

    def density(z):
        return 1.0 / (1.0 - np.abs(z) ** 2)

    return Pseudometric(density=density, zeros=(),
                        curvature=_const_curvature(-4.0),
                        pinch=(-4.0, -4.0), name="poincare")


def pullback(f: HoloMap, mu: Pseudometric) -> Pseudometric:
    """Pullback density mu(f(z)) |f'(z)| with its induced zero set.

    Zeros sit at critical points of f (order = multiplicity of the
    critical point) and at preimages of zeros of mu; a preimage hit with
    local valence m of a zero of order beta carries order m*beta + m - 1.
    """
    if is_constant(f):
        raise MetricError("pullback under a constant map is degenerate")
    if mu.domain_radius < 1.0:
        raise MetricError("pullback requires a base metric on the full disk")

    def density(z):
        return mu.density(f.eval(z)) * np.abs(f.deriv(z))

    contributions: dict[complex, float] = {}

    def _add(loc: complex, order: float):
        for known in contributions:
            if abs(known - loc) < ZERO_MATCH_TOL:
                contributions[known] = max(contributions[known], order)
                return
        contributions[loc] = order

    for loc, mult in critical_points(f):
        _add(loc, float(mult))
    for rec in mu.zeros:
        # a preimage of multiplicity m (the local valence) contributes
        # m * order + (m - 1), which subsumes any critical point there
        for loc, m in preimages(f, rec.location):
            _add(loc, m * rec.order + (m - 1))

    zeros = tuple(ZeroRecord(loc, order) for loc, order in contributions.items())
    curvature = None
    if mu.curvature is not None:
        mu_kappa = mu.curvature

        def curvature(z, _f=f, _k=mu_kappa):  # noqa: F811
            return _k(_f.eval(z))

    return Pseudometric(density=density, zeros=zeros, curvature=curvature,
                        pinch=mu.pinch, name=f"pullback({mu.name})")


def mu_max(beta: float) -> Pseudometric:
    """Largest curvature -4 pseudometric with a zero of order beta at 0:
    density (1+beta) |z|^beta / (1 - |z|^(2(1+beta)))."""
    if beta <= 0:
        raise MetricError("beta must be positive")

    def density(z):
        r = np.abs(z)
        return (1.0 + beta) * r**beta / (1.0 - r ** (2.0 * (1.0 + beta)))

    return Pseudometric(density=density, zeros=(ZeroRecord(0j, beta),),
                        curvature=_const_curvature(-4.0), pinch=(-4.0, -4.0),
                        name=f"mu_max({beta})")


def scale(t: float, mu: Pseudometric) -> Pseudometric:
    """Density t * mu; curvature scales as kappa / t^2."""
    if not 0.0 < t <= 1.0:
        raise MetricError("scale factor must lie in (0, 1]")

    def density(z):
        return t * mu.density(z)

    curvature = None
    if mu.curvature is not None:
        def curvature(z, _k=mu.curvature):  # noqa: F811
            return _k(z) / t**2

    pinch = None
    if mu.pinch is not None:
        pinch = (mu.pinch[0] / t**2, mu.pinch[1] / t**2)
    return Pseudometric(density=density, zeros=mu.zeros, curvature=curvature,
                        pinch=pinch, name=f"scale({t},{mu.name})",
                        domain_radius=mu.domain_radius)


def exp_weight(s: Callable, lap_s: Callable | None = None,
               name: str = "exp_weight") -> Pseudometric:
    """Density e^{s(z)} / (1-|z|^2) for a smooth subharmonic weight s <= 0.

    With an exact Laplacian of the weight supplied the curvature is exact:
    kappa = -e^{-2s} (lap(s) (1-|z|^2)^2 + 4); it is <= -4 whenever
    lap(s) >= 0 and s <= 0.
    """

    def density(z):
        return np.exp(s(z)) / (1.0 - np.abs(z) ** 2)

    curvature = None
    if lap_s is not None:
        def curvature(z):  # noqa: F811
            w2 = (1.0 - np.abs(z) ** 2) ** 2
            return -np.exp(-2.0 * s(z)) * (lap_s(z) * w2 + 4.0)

    return Pseudometric(density=density, zeros=(), curvature=curvature,
                        pinch=None, name=name)


# ---------------------------------------------------------------------------
# curvature


def curvature(mu: Pseudometric, z: complex, h: float = CURVATURE_H,
              richardson: bool = True) -> float:
    """Gauss curvature -Lap(log density)/density^2 at z.

    Uses the exact provider when available, otherwise a five-point
    Richardson-extrapolated Laplacian of the log density.  Refuses points
    with |z| > 0.999 (finite differences degrade there) and points whose
    stencil comes within 2h of a declared zero.
    """
    if mu.curvature is not None:
        return float(mu.curvature(z))
    if abs(z) > min(NEAR_BOUNDARY_CUTOFF, mu.domain_radius - 2 * h):
        raise MetricError("refusing near-boundary numeric curvature; "
                          "move the sample point inward")
    for rec in mu.zeros:
        if abs(z - rec.location) < 2.0 * h:
            raise MetricError(
                f"curvature stencil touches the zero at {rec.location}; "
                "use a larger offset")

    def log_density(w):
        return math.log(float(mu.density(w)))

    lap = laplacian_fd(log_density, z, h, richardson=richardson)
    d = float(mu.density(z))
    return -lap / d**2


def curvature_grid(mu: Pseudometric, zs: np.ndarray, h: float = CURVATURE_H) -> np.ndarray:
    """Vectorized numeric curvature on an array of points (no Richardson)."""
    if mu.curvature is not None:
        return np.asarray(mu.curvature(zs), dtype=float)
    zs = np.asarray(zs)
    logd = lambda w: np.log(np.asarray(mu.density(w), dtype=float))
    lap = (logd(zs + h) + logd(zs - h) + logd(zs + 1j * h) + logd(zs - 1j * h)
           - 4.0 * logd(zs)) / h**2
    return -lap / np.asarray(mu.density(zs), dtype=float) ** 2


# ---------------------------------------------------------------------------
# domination and quotients


def require_structural_domination(lam: Pseudometric, mu: Pseudometric) -> None:
    """Every zero of mu must appear among lam's zeros with order >= mu's."""
    for rec in mu.zeros:
        match = lam.zero_at(rec.location)
        if match is None or match.order < rec.order - 1e-12:
            raise DominationError(
                f"not dominated: zero of order {rec.order} at {rec.location} "
                "has no matching zero in the candidate metric")


def _limit_quotient(lam: Pseudometric, mu: Pseudometric, rec: ZeroRecord,
                    lam_order: float) -> float:
    if lam_order > rec.order + 1e-12:
        return 0.0
    angles = np.exp(2j * np.pi * np.arange(QUOTIENT_LIMIT_ANGLES)
                    / QUOTIENT_LIMIT_ANGLES)
    ring = rec.location + QUOTIENT_LIMIT_RADIUS * angles
    vals = np.asarray(lam.density(ring), dtype=float) / \
        np.asarray(mu.density(ring), dtype=float)
    return float(np.mean(vals))


def quotient(lam: Pseudometric, mu: Pseudometric, z):
    """Extended value of lam/mu at z (continuous across zeros of mu).

    Off zeros of mu this is the plain density ratio.  At a zero of mu of
    order beta where lam carries order alpha >= beta, the value is 0 for
    alpha > beta and the angular average of the ratio on a small ring for
    alpha = beta.
    """
    require_structural_domination(lam, mu)
    if np.ndim(z):
        zs = np.asarray(z)
        out = np.empty(zs.shape, dtype=float)
        flat = zs.ravel()
        res = out.ravel()
        special = np.zeros(flat.shape, dtype=bool)
        for rec in mu.zeros:
            special |= np.abs(flat - rec.location) < ZERO_MATCH_TOL
        plain = ~special
        if np.any(plain):
            res[plain] = (np.asarray(lam.density(flat[plain]), dtype=float)
                          / np.asarray(mu.density(flat[plain]), dtype=float))
        for idx in np.nonzero(special)[0]:
            res[idx] = quotient(lam, mu, complex(flat[idx]))
        return out
    z = complex(z)
    for rec in mu.zeros:
        if abs(z - rec.location) < ZERO_MATCH_TOL:
            lam_rec = lam.zero_at(rec.location)
            lam_order = lam_rec.order if lam_rec is not None else 0.0
            return _limit_quotient(lam, mu, rec, lam_order)
    return float(lam.density(z)) / float(mu.density(z))


@dataclass(frozen=True)
class DominationReport:
    passed: bool
    curvature_violations: tuple
    quotient_violations: tuple
    n_checked: int


def default_disk_grid(n_r: int = 9, n_t: int = 16, r_max: float = 0.9,
                      avoid: Sequence[complex] = (), margin: float = 0.02) -> np.ndarray:
    """Sample points in the disk avoiding given locations by a margin."""
    radii = np.linspace(0.08, r_max, n_r)
    angles = np.exp(2j * np.pi * (np.arange(n_t) + 0.31) / n_t)
    pts = np.outer(radii, angles).ravel()
    keep = np.ones(pts.shape, dtype=bool)
    for a in avoid:
        keep &= np.abs(pts - a) > margin
    return pts[keep]


def check_domination(lam: Pseudometric, mu: Pseudometric,
                     grid: np.ndarray | None = None,
                     tol_quotient: float = 1e-7,
                     tol_curvature: float = 1e-3) -> DominationReport:
    """Sampled verification of lam <= mu in the domination order:
    kappa_lam <= kappa_mu + tol and 0 <= lam/mu <= 1 + tol on the grid."""
    require_structural_domination(lam, mu)
    if grid is None:
        avoid = [r.location for r in lam.zeros] + [r.location for r in mu.zeros]
        r_cap = min(0.9, lam.domain_radius * 0.93, mu.domain_radius * 0.93)
        grid = default_disk_grid(r_max=r_cap, avoid=avoid)
    grid = np.asarray(grid)

    qv = []
    q = np.asarray(quotient(lam, mu, grid), dtype=float)
    bad_q = (q < -tol_quotient) | (q > 1.0 + tol_quotient)
    for z, val in zip(grid[bad_q], q[bad_q]):
        qv.append((complex(z), float(val)))

    cv = []
    k_lam = curvature_grid(lam, grid)
    k_mu = curvature_grid(mu, grid)
    # exact-vs-exact comparisons need no finite-difference slack
    tol_c = 1e-10 if (lam.has_exact_curvature and mu.has_exact_curvature) \
        else tol_curvature
    bad_c = k_lam > k_mu + tol_c
    for z, a, b in zip(grid[bad_c], k_lam[bad_c], k_mu[bad_c]):
        cv.append((complex(z), float(a), float(b)))

    return DominationReport(passed=not qv and not cv,
                            curvature_violations=tuple(cv),
                            quotient_violations=tuple(qv),
                            n_checked=int(grid.size))


# ---------------------------------------------------------------------------
# zero orders


def zero_order(mu: Pseudometric, xi: complex, n_angles: int = 16,
               spread_tol: float = 0.05) -> float:
    """Estimate the order of a zero at xi from the growth of the density.

    Least-squares slope of mean log density against log radius over the
    radii 10^-2 .. 10^-5.  Returns 0 for points where the density does
    not vanish.  Raises if the per-decade slopes disagree by more than
    ``spread_tol`` (no clean power behavior).
    """
    xi = complex(xi)
    if float(mu.density(xi)) > 1e-8:
        return 0.0
    radii = 10.0 ** (-np.arange(2, 6, dtype=float))
    angles = np.exp(2j * np.pi * (np.arange(n_angles) + 0.17) / n_angles)
    mean_logs = []
    for r in radii:
        ring = xi + r * angles
        vals = np.asarray(mu.density(ring), dtype=float)
        if np.any(vals <= 0.0):
            raise MetricError("density not positive on a punctured neighborhood")
        mean_logs.append(float(np.mean(np.log(vals))))
    logs = np.array(mean_logs)
    logr = np.log(radii)
    per_decade = np.diff(logs) / np.diff(logr)
    if np.max(per_decade) - np.min(per_decade) > spread_tol:
        raise MetricError(
            f"zero order estimate did not converge (slope spread "
            f"{np.max(per_decade) - np.min(per_decade):.3g})")
    design = np.column_stack([np.ones_like(logr), logr])
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    return float(coef[1])
