"""Boundary Harnack inequality, Hopf-type strictness, and rate scanners.

The central estimate verified here: for dominated pseudometrics lam <= mu
with kappa_mu pinched in [-c, -4],

    log(lam/mu)(z) <= C_r / (1-r^2)^(c/2)
                      * max_{|xi|=r} log(lam/mu)(xi) * (1-|z|^2)^(c/2)

on each annulus r <= |z| < 1, with the explicit constant C_r = e^(1-1/r^2).
The proof devices are exposed as checkable objects: the annulus barrier
v_r(z) = (1-|z|^2)^(c/2) e^((1-|z|^2)/r^2) with its differential
inequality, and the cubic whose positivity on [r^2, 1] drives it.  On top
sit the boundary rigidity scanners (quotient-to-one rates along boundary
paths) and the two-rate check behind the classical cubic-order boundary
Schwarz lemma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .holomap import Blaschke, HoloMap, certify_selfmap, f_eps, hyperbolic_derivative, zpow
from .metric import (MetricError, Pseudometric, check_domination, mu_max,
                     poincare, pullback, quotient, scale)
from .numerics import RateReport, dyadic_ts, fit_boundary_rate, laplacian_fd

INEQ_TOL = 1e-7
ANNULUS_CAP = 0.9995


class HarnackError(ValueError):
    """Raised on invalid checker input."""


@dataclass(frozen=True)
class HarnackReport:
    r: float
    c: float
    lhs_max_violation: float
    passed: bool
    witness: complex | None
    n_checked: int

    @property
    def ok(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class InequalityReport:
    """Generic sampled-inequality report: max violation and witness."""

    passed: bool
    max_violation: float
    witness: complex | None
    n_checked: int
    details: dict | None = None


def harnack_constant(r: float) -> float:
    """The explicit annulus constant e^(1 - 1/r^2)."""
    if not 0.0 < r < 1.0:
        raise HarnackError("r must lie in (0, 1)")
    return math.exp(1.0 - 1.0 / r**2)


def corollary_constant(r: float, big_r: float, rho: float, c_rho: float) -> float:
    """Interior Harnack exponent exp(1-rho^2/r^2) ((rho^2-R^2)/(rho^2-r^2))^(c/2).

    Monotonically decreasing in c_rho since the middle ratio is < 1.
    """
    if not 0.0 < r < big_r < rho < 1.0:
        raise HarnackError("need 0 < r < R < rho < 1")
    if c_rho < 4.0:
        raise HarnackError("pinching constant must be >= 4")
    ratio = (rho**2 - big_r**2) / (rho**2 - r**2)
    return math.exp(1.0 - rho**2 / r**2) * ratio ** (c_rho / 2.0)


# ---------------------------------------------------------------------------
# proof devices: the annulus barrier and its cubic


def barrier_v(r: float, c: float, z: complex) -> float:
    """Barrier (1-|z|^2)^(c/2) e^((1-|z|^2)/r^2), vanishing on |z| = 1."""
    if not 0.0 < r < 1.0:
        raise HarnackError("r must lie in (0, 1)")
    if c < 4.0:
        raise HarnackError("c must be >= 4")
    s = 1.0 - abs(z) ** 2
    if s < 0:
        raise HarnackError("barrier defined on the closed disk only")
    return s ** (c / 2.0) * math.exp(s / r**2)


def barrier_cubic(c: float, r: float):
    """The cubic f with (Lap v_r / v_r)(1-|z|^2)^2 = f(|z|^2).

    Closed-form endpoint values: f(r^2) = 2c + c(c-4) r^2 and
    f(1) = (c-2) c; on [r^2, 1] it stays >= 2c.
    """
    r2, r4 = r**2, r**4

    def f(x):
        return (4.0 * x**3
                - 4.0 * (2.0 + (1.0 + c) * r2) * x**2
                + (4.0 + 4.0 * (2.0 + c) * r2 + c**2 * r4) * x
                - 2.0 * r2 * (2.0 + c * r2)) / r4

    return f


def cubic_check(c: float, r: float, n_samples: int = 400) -> InequalityReport:
    """Endpoint identities and the lower bound f >= 2c on [r^2, 1]."""
    if c < 4.0 or not 0.0 < r < 1.0:
        raise HarnackError("need c >= 4 and r in (0, 1)")
    f = barrier_cubic(c, r)
    at_r2 = f(r**2)
    at_one = f(1.0)
    id_r2 = 2.0 * c + c * (c - 4.0) * r**2
    id_one = (c - 2.0) * c
    xs = np.linspace(r**2, 1.0, n_samples)
    vals = np.array([f(x) for x in xs])
    min_val = float(np.min(vals))
    witness = complex(xs[int(np.argmin(vals))])
    passed = (abs(at_r2 - id_r2) < 1e-9 and abs(at_one - id_one) < 1e-9
              and min_val >= 2.0 * c - 1e-9)
    return InequalityReport(passed=passed,
                            max_violation=max(2.0 * c - min_val,
                                              abs(at_r2 - id_r2),
                                              abs(at_one - id_one)),
                            witness=witness, n_checked=n_samples,
                            details={"f_at_r2": at_r2, "f_at_r2_closed": id_r2,
                                     "f_at_1": at_one, "f_at_1_closed": id_one,
                                     "min_on_interval": min_val})


def verify_barrier_pde(r: float, c: float, grid: np.ndarray | None = None,
                       h: float = 1e-4, tol: float = 1e-5) -> InequalityReport:
    """Check Lap v_r >= 2c v_r / (1-|z|^2)^2 at annulus grid points."""
    if grid is None:
        radii = np.linspace(r + 0.01, 0.99, 12)
        angles = np.exp(2j * np.pi * np.arange(8) / 8)
        grid = np.outer(radii, angles).ravel()
    grid = np.asarray(grid)
    if np.any(np.abs(grid) < r):
        raise HarnackError("barrier inequality only claimed on r <= |z| < 1")
    worst = -np.inf
    witness = None
    for z in grid:
        lap = laplacian_fd(lambda w: barrier_v(r, c, w), complex(z), h,
                           richardson=True)
        rhs = 2.0 * c * barrier_v(r, c, complex(z)) / (1.0 - abs(z) ** 2) ** 2
        viol = rhs - lap
        if viol > worst:
            worst, witness = viol, complex(z)
    return InequalityReport(passed=worst <= tol, max_violation=float(worst),
                            witness=witness, n_checked=int(grid.size))


# ---------------------------------------------------------------------------
# the Harnack checker itself


def annulus_grid(r_min: float, r_max: float, n_r: int = 14, n_t: int = 16) -> np.ndarray:
    radii = np.linspace(r_min, r_max, n_r)
    angles = np.exp(2j * np.pi * (np.arange(n_t) + 0.23) / n_t)
    return np.outer(radii, angles).ravel()


def check_harnack(lam: Pseudometric, mu: Pseudometric, c: float, r: float,
                  grid: np.ndarray | None = None, tol: float = INEQ_TOL,
                  n_circle: int = 180) -> HarnackReport:
    """Verify the boundary Harnack inequality on an annulus grid.

    Requires mu to carry an exact curvature provider with pinch bounds
    inside [-c, -4]; domination of lam by mu is checked first and a
    failure raises before any Harnack sampling happens.
    """
    if not 0.0 < r < 1.0:
        raise HarnackError("r must lie in (0, 1)")
    if c < 4.0:
        raise HarnackError("c must be >= 4")
    if not mu.has_exact_curvature or mu.pinch is None:
        raise HarnackError("dominating metric needs exact curvature with "
                           "declared pinch bounds")
    if mu.pinch[0] < -c - 1e-12 or mu.pinch[1] > -4.0 + 1e-12:
        raise HarnackError(f"pinch bounds {mu.pinch} not inside [-{c}, -4]")
    dom = check_domination(lam, mu)
    if not dom.passed:
        raise MetricError(f"domination fails before the Harnack check: "
                          f"{len(dom.quotient_violations)} quotient and "
                          f"{len(dom.curvature_violations)} curvature violations")

    cap = min(ANNULUS_CAP, 0.97 * lam.domain_radius, 0.97 * mu.domain_radius)
    if grid is None:
        grid = annulus_grid(r, cap)
    grid = np.asarray(grid)
    grid = grid[(np.abs(grid) >= r - 1e-12) & (np.abs(grid) <= cap + 1e-12)]

    circle = r * np.exp(2j * np.pi * np.arange(n_circle) / n_circle)
    inner_max = float(np.max(np.log(np.asarray(quotient(lam, mu, circle),
                                               dtype=float))))
    coeff = harnack_constant(r) / (1.0 - r**2) ** (c / 2.0)

    q = np.asarray(quotient(lam, mu, grid), dtype=float)
    with np.errstate(divide="ignore"):
        lhs = np.log(q)
    rhs = coeff * inner_max * (1.0 - np.abs(grid) ** 2) ** (c / 2.0)
    viol = lhs - rhs
    worst = int(np.argmax(viol))
    max_violation = float(viol[worst])
    return HarnackReport(r=r, c=c, lhs_max_violation=max_violation,
                         passed=max_violation <= tol,
                         witness=complex(grid[worst]) if max_violation > tol else None,
                         n_checked=int(grid.size))


def check_golusin(lam: Pseudometric, grid: np.ndarray | None = None,
                  tol: float = 1e-9) -> InequalityReport:
    """Constant-curvature sharpening of the extremal bound.

    For densities with curvature exactly -4 (pullbacks, extremal-zero
    densities, the hyperbolic density itself):

        lam(z)/lam_D(z) <= (lam(0) + m(z)) / (1 + lam(0) m(z)),
        m(z) = 2|z| / (1 + |z|^2).

    Raises for metrics without exact curvature -4, where the bound is
    known to fail in general.
    """
    if not lam.has_exact_curvature:
        raise HarnackError("bound requires curvature exactly -4; "
                           "this metric has no exact provider")
    probe = np.array([0.11 + 0.07j, -0.4 + 0.31j, 0.62j, 0.55 - 0.21j])
    if np.max(np.abs(np.asarray(lam.curvature(probe), dtype=float) + 4.0)) > 1e-10:
        raise HarnackError("bound requires curvature exactly -4")
    if grid is None:
        grid = annulus_grid(0.05, 0.95, n_r=12, n_t=12)
    grid = np.asarray(grid)
    lam0 = float(lam.density(0j))
    hyp = poincare()
    m = 2.0 * np.abs(grid) / (1.0 + np.abs(grid) ** 2)
    bound = (lam0 + m) / (1.0 + lam0 * m)
    ratio = np.asarray(lam.density(grid), dtype=float) / \
        np.asarray(hyp.density(grid), dtype=float)
    viol = ratio - bound
    worst = int(np.argmax(viol))
    return InequalityReport(passed=float(viol[worst]) <= tol,
                            max_violation=float(viol[worst]),
                            witness=complex(grid[worst]),
                            n_checked=int(grid.size),
                            details={"lam0": lam0})


# ---------------------------------------------------------------------------
# rigidity rate scanners


def rigidity_scan(lam: Pseudometric, mu: Pseudometric, c: float,
                  angle: float = 0.0, k_min: int = 4, k_max: int = 20,
                  path: np.ndarray | None = None,
                  check_pre: bool = True) -> RateReport:
    """Fit (lam/mu - 1) / (1-|z|)^(c/2) along a boundary path.

    A VANISHES verdict certifies the rigidity hypothesis numerically
    (identity of the metrics predicted); BOUNDED_NONZERO or DIVERGES
    means the hypothesis fails at this pinching exponent.
    """
    if check_pre:
        dom = check_domination(lam, mu)
        if not dom.passed:
            raise MetricError("rigidity scan requires domination lam <= mu")
    if path is None:
        ts = dyadic_ts(k_min, k_max)
        path = ts * np.exp(1j * angle)
    else:
        path = np.asarray(path)
        ts = np.abs(path)
    if np.any(np.abs(path) >= 1.0):
        raise HarnackError("scan path leaves the open disk")
    q = np.asarray(quotient(lam, mu, path), dtype=float)
    samples = list(zip(ts, q - 1.0))
    return fit_boundary_rate(samples, c / 2.0)


def identity_spot_check(lam: Pseudometric, mu: Pseudometric,
                        grid: np.ndarray | None = None,
                        tol: float = 1e-6) -> InequalityReport:
    """Spot check of the identity a VANISHES scan predicts.

    A numeric rate can certify the hypothesis, not the conclusion; this
    samples |quotient - 1| on a grid so the predicted coincidence of the
    metrics is checked rather than asserted.
    """
    if grid is None:
        grid = annulus_grid(0.05, 0.9, n_r=10, n_t=12)
    grid = np.asarray(grid)
    dev = np.abs(np.asarray(quotient(lam, mu, grid), dtype=float) - 1.0)
    worst = int(np.argmax(dev))
    return InequalityReport(passed=float(dev[worst]) <= tol,
                            max_violation=float(dev[worst]),
                            witness=complex(grid[worst]),
                            n_checked=int(grid.size))


def boundary_schwarz_scan(f: HoloMap, k_min: int = 4, k_max: int = 20,
                          angle: float = 0.0) -> RateReport:
    """Invariant-derivative-to-one rate for a self-map along a radius."""
    ts = dyadic_ts(k_min, k_max)
    zs = ts * np.exp(1j * angle)
    samples = [(t, hyperbolic_derivative(f, z) - 1.0) for t, z in zip(ts, zs)]
    return fit_boundary_rate(samples, 2.0)


def burns_krantz_check(f: HoloMap, k_min: int = 4, k_max: int = 20) -> tuple[RateReport, RateReport]:
    """Two radial rates behind the cubic-order boundary Schwarz lemma.

    Returns (rate of |f(t) - t| at exponent 3, rate of f^h(t) - 1 at
    exponent 2): when the first vanishes the second must as well.
    """
    ok, mx = certify_selfmap(f)
    if not ok:
        raise HarnackError(f"map is not a certified self-map (max modulus {mx})")
    ts = dyadic_ts(k_min, k_max)
    displacement = [(t, abs(complex(f.eval(t + 0j)) - t)) for t in ts]
    invariant = [(t, hyperbolic_derivative(f, t + 0j) - 1.0) for t in ts]
    return (fit_boundary_rate(displacement, 3.0),
            fit_boundary_rate(invariant, 2.0))


# ---------------------------------------------------------------------------
# built-in catalog of dominated pairs


@dataclass(frozen=True)
class HarnackCase:
    name: str
    lam: Pseudometric
    mu: Pseudometric
    c: float
    r: float


def build_catalog(include_liouville: bool = True,
                  liouville_n: int = 97) -> list[HarnackCase]:
    """Dominated (lam, mu) pairs with correct pinching exponents.

    Includes scaled hyperbolic densities, pullbacks under polynomial and
    Blaschke self-maps, extremal-zero densities, and (optionally) a
    numerically constructed variable-curvature metric with c = 5.
    """
    hyp = poincare()
    cases = [
        HarnackCase("equal", hyp, hyp, 4.0, 0.5),
        HarnackCase("scaled-poincare", scale(0.9, hyp), hyp, 4.0, 0.5),
        HarnackCase("zsquare-pullback", pullback(zpow(2), hyp), hyp, 4.0, 0.5),
        HarnackCase("cubic-perturbation", pullback(f_eps(1.0 / 12.0), hyp),
                    hyp, 4.0, 0.5),
        HarnackCase("blaschke-pullback",
                    pullback(Blaschke((0.3 + 0.2j, -0.4j)), hyp), hyp, 4.0, 0.5),
        HarnackCase("extremal-zero-0.5", mu_max(0.5), hyp, 4.0, 0.5),
        HarnackCase("extremal-zero-2", mu_max(2.0), hyp, 4.0, 0.5),
        HarnackCase("nested-extremal", mu_max(2.0), mu_max(1.0), 4.0, 0.5),
    ]
    if include_liouville:
        from .liouville import make_pinched_metric

        pinched = make_pinched_metric(n=liouville_n)
        cases.append(HarnackCase("pinched-scaled", scale(0.9, pinched),
                                 pinched, 5.0, 0.5))
    return cases


def run_catalog(include_liouville: bool = True, tol: float = INEQ_TOL,
                liouville_n: int = 97) -> list[tuple[HarnackCase, HarnackReport]]:
    out = []
    for case in build_catalog(include_liouville, liouville_n):
        out.append((case, check_harnack(case.lam, case.mu, case.c, case.r,
                                        tol=tol)))
    return out
