"""Exact algebra of holomorphic self-maps of the unit disk.

Maps are immutable expression trees over identity, constants, monomials,
polynomials, disk automorphisms, finite Blaschke products, compositions,
sums, and scalar multiples.  Evaluation and differentiation are exact
closed-form tree operations (no numerical differentiation), which is what
lets boundary quantities be divided by (1-|z|)^2 without noise.

A text serialization in prefix notation is provided so maps can be named
in flat config files.  Grammar (tokens are whitespace separated, complex
literals use Python syntax like ``0.3+0.1j``)::

    map := "id"
         | "const" C
         | "zpow" K                   monomial z^K
         | "poly" N C0 ... C(N-1)     ascending coefficients
         | "auto" A THETA             e^{i THETA} (A - z)/(1 - conj(A) z)
         | "blaschke" N A1 ... AN THETA
         | "compose" map map          outer first
         | "sum" map map
         | "scale" C map
         | "feps" EPS                 z - EPS (z - 1)^3
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

POLE_TOL = 1e-14
SELFMAP_SLACK = 1e-12
ROOT_CLUSTER_TOL = 1e-7
INTERIOR_MARGIN = 1e-9


class HoloMapError(ValueError):
    """Raised on invalid evaluation (poles, non-self-maps, bad input)."""


class HoloMap:
    """Base class; concrete nodes implement eval, deriv and rational."""

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def rational(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (P, Q) ascending coefficient arrays with self = P/Q."""
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def compose(self, inner: "HoloMap") -> "HoloMap":
        return Compose(self, inner)


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return repr(c.real)
    return repr(c).strip("()")


@dataclass(frozen=True)
class Identity(HoloMap):
    def eval(self, z):
        return z

    def deriv(self, z):
        return np.ones_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 1.0 + 0j

    def rational(self):
        return np.array([0, 1], dtype=complex), np.array([1], dtype=complex)

    def to_text(self):
        return "id"


@dataclass(frozen=True)
class Const(HoloMap):
    value: complex

    def eval(self, z):
        return np.full(np.shape(z), self.value) if np.ndim(z) else self.value

    def deriv(self, z):
        return np.zeros(np.shape(z), dtype=complex) if np.ndim(z) else 0j

    def rational(self):
        return np.array([self.value], dtype=complex), np.array([1], dtype=complex)

    def to_text(self):
        return f"const {_fmt_complex(self.value)}"


@dataclass(frozen=True)
class Monomial(HoloMap):
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise HoloMapError("monomial power must be nonnegative")

    def eval(self, z):
        return np.asarray(z) ** self.power if np.ndim(z) else z**self.power

    def deriv(self, z):
        k = self.power
        if k == 0:
            return np.zeros(np.shape(z), dtype=complex) if np.ndim(z) else 0j
        return k * (np.asarray(z) ** (k - 1) if np.ndim(z) else z ** (k - 1))

    def rational(self):
        p = np.zeros(self.power + 1, dtype=complex)
        p[-1] = 1.0
        return p, np.array([1], dtype=complex)

    def to_text(self):
        return f"zpow {self.power}"


@dataclass(frozen=True)
class Poly(HoloMap):
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise HoloMapError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    def eval(self, z):
        return npoly.polyval(z, np.array(self.coeffs))

    def deriv(self, z):
        return npoly.polyval(z, npoly.polyder(np.array(self.coeffs)))

    def rational(self):
        return np.array(self.coeffs, dtype=complex), np.array([1], dtype=complex)

    def to_text(self):
        body = " ".join(_fmt_complex(c) for c in self.coeffs)
        return f"poly {len(self.coeffs)} {body}"


def _moebius_factor_eval(a: complex, z):
    den = 1.0 - np.conj(a) * np.asarray(z)
    if np.any(np.abs(den) < POLE_TOL):
        raise HoloMapError(f"pole of automorphism factor (a={a}) hit")
    return (a - np.asarray(z)) / den


def _moebius_factor_deriv(a: complex, z):
    den = 1.0 - np.conj(a) * np.asarray(z)
    if np.any(np.abs(den) < POLE_TOL):
        raise HoloMapError(f"pole of automorphism factor (a={a}) hit")
    return (abs(a) ** 2 - 1.0) / den**2


@dataclass(frozen=True)
class Automorphism(HoloMap):
    """Disk automorphism e^{i theta} (a - z)/(1 - conj(a) z), |a| < 1."""

    a: complex
    theta: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise HoloMapError("automorphism parameter must satisfy |a| < 1")

    def eval(self, z):
        return cmath.exp(1j * self.theta) * _moebius_factor_eval(self.a, z)

    def deriv(self, z):
        return cmath.exp(1j * self.theta) * _moebius_factor_deriv(self.a, z)

    def rational(self):
        ph = cmath.exp(1j * self.theta)
        num = np.array([ph * self.a, -ph], dtype=complex)
        den = np.array([1.0, -np.conj(self.a)], dtype=complex)
        return num, den

    def to_text(self):
        return f"auto {_fmt_complex(self.a)} {self.theta!r}"


@dataclass(frozen=True)
class Blaschke(HoloMap):
    """Finite Blaschke product e^{i theta} prod_j (a_j - z)/(1 - conj(a_j) z)."""

    zeros: tuple[complex, ...]
    theta: float = 0.0

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        if any(abs(a) >= 1.0 for a in zs):
            raise HoloMapError("Blaschke zeros must have modulus < 1")
        object.__setattr__(self, "zeros", zs)

    def eval(self, z):
        out = cmath.exp(1j * self.theta) * (np.ones(np.shape(z), dtype=complex)
                                            if np.ndim(z) else (1.0 + 0j))
        for a in self.zeros:
            out = out * _moebius_factor_eval(a, z)
        return out

    def deriv(self, z):
        # product rule accumulation keeps zeros of individual factors safe
        factors = [_moebius_factor_eval(a, z) for a in self.zeros]
        dfactors = [_moebius_factor_deriv(a, z) for a in self.zeros]
        total = np.zeros(np.shape(z), dtype=complex) if np.ndim(z) else 0j
        for j in range(len(self.zeros)):
            term = dfactors[j]
            for k in range(len(self.zeros)):
                if k != j:
                    term = term * factors[k]
            total = total + term
        return cmath.exp(1j * self.theta) * total

    def rational(self):
        num = np.array([cmath.exp(1j * self.theta)], dtype=complex)
        den = np.array([1.0], dtype=complex)
        for a in self.zeros:
            num = npoly.polymul(num, np.array([a, -1.0], dtype=complex))
            den = npoly.polymul(den, np.array([1.0, -np.conj(a)], dtype=complex))
        return num, den

    def to_text(self):
        parts = ["blaschke", str(len(self.zeros))]
        parts.extend(_fmt_complex(a) for a in self.zeros)
        parts.append(repr(self.theta))
        return " ".join(parts)


@dataclass(frozen=True)
class Compose(HoloMap):
    outer: HoloMap
    inner: HoloMap

    def eval(self, z):
        return self.outer.eval(self.inner.eval(z))

    def deriv(self, z):
        w = self.inner.eval(z)
        return self.outer.deriv(w) * self.inner.deriv(z)

    def rational(self):
        p, q = self.outer.rational()
        r, s = self.inner.rational()
        return _compose_rational(p, q, r, s)

    def to_text(self):
        return f"compose {self.outer.to_text()} {self.inner.to_text()}"


@dataclass(frozen=True)
class Sum(HoloMap):
    left: HoloMap
    right: HoloMap

    def eval(self, z):
        return self.left.eval(z) + self.right.eval(z)

    def deriv(self, z):
        return self.left.deriv(z) + self.right.deriv(z)

    def rational(self):
        p, q = self.left.rational()
        r, s = self.right.rational()
        num = npoly.polyadd(npoly.polymul(p, s), npoly.polymul(r, q))
        return num, npoly.polymul(q, s)

    def to_text(self):
        return f"sum {self.left.to_text()} {self.right.to_text()}"


@dataclass(frozen=True)
class Scaled(HoloMap):
    factor: complex
    inner: HoloMap

    def eval(self, z):
        return self.factor * self.inner.eval(z)

    def deriv(self, z):
        return self.factor * self.inner.deriv(z)

    def rational(self):
        p, q = self.inner.rational()
        return self.factor * p, q

    def to_text(self):
        return f"scale {_fmt_complex(self.factor)} {self.inner.to_text()}"


def _poly_pow_table(p: np.ndarray, n: int) -> list[np.ndarray]:
    table = [np.array([1.0 + 0j])]
    for _ in range(n):
        table.append(npoly.polymul(table[-1], p))
    return table


def _compose_rational(p, q, r, s):
    """(P/Q) o (R/S) as a rational pair."""
    n = max(len(p), len(q)) - 1
    rp = _poly_pow_table(r, n)
    sp = _poly_pow_table(s, n)
    num = np.array([0j])
    den = np.array([0j])
    for k, c in enumerate(p):
        num = npoly.polyadd(num, c * npoly.polymul(rp[k], sp[n - k]))
    for k, c in enumerate(q):
        den = npoly.polyadd(den, c * npoly.polymul(rp[k], sp[n - k]))
    return num, den


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.array([0j])
    keep = np.abs(c) > 1e-13 * scale
    last = int(np.max(np.nonzero(keep))) if np.any(keep) else 0
    return c[: last + 1]


def is_constant(f: HoloMap) -> bool:
    p, q = f.rational()
    num, den = _trim(p), _trim(q)
    dnum = _trim(npoly.polysub(npoly.polymul(npoly.polyder(num), den),
                               npoly.polymul(num, npoly.polyder(den))))
    return len(dnum) == 1 and abs(dnum[0]) < 1e-13


def cluster_roots(roots: np.ndarray, tol: float = ROOT_CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group nearly equal roots into (location, multiplicity) pairs."""
    clusters: list[list[complex]] = []
    for r in roots:
        for group in clusters:
            if abs(r - group[0]) < tol * max(1.0, abs(group[0])):
                group.append(r)
                break
        else:
            clusters.append([complex(r)])
    return [(complex(np.mean(g)), len(g)) for g in clusters]


def critical_points(f: HoloMap) -> list[tuple[complex, int]]:
    """Zeros of f' strictly inside the unit disk, with multiplicities."""
    p, q = map(_trim, f.rational())
    dnum = _trim(npoly.polysub(npoly.polymul(npoly.polyder(p), q),
                               npoly.polymul(p, npoly.polyder(q))))
    if len(dnum) == 1:
        return []
    roots = npoly.polyroots(dnum)
    inside = roots[np.abs(roots) < 1.0 - INTERIOR_MARGIN]
    return cluster_roots(inside)


def preimages(f: HoloMap, w: complex) -> list[tuple[complex, int]]:
    """Solutions of f(z) = w strictly inside the unit disk."""
    p, q = map(_trim, f.rational())
    shifted = _trim(npoly.polysub(p, w * np.asarray(q)))
    if len(shifted) == 1:
        return []
    roots = npoly.polyroots(shifted)
    inside = roots[np.abs(roots) < 1.0 - INTERIOR_MARGIN]
    return cluster_roots(inside)


# ---------------------------------------------------------------------------
# convenience constructors


def identity() -> HoloMap:
    return Identity()


def zpow(k: int) -> HoloMap:
    return Monomial(k)


def rotation(phi: float) -> HoloMap:
    return Scaled(cmath.exp(1j * phi), Identity())


def f_eps(eps: float) -> HoloMap:
    """The cubic boundary perturbation z - eps (z-1)^3 of the identity."""
    return Poly((eps, 1.0 - 3.0 * eps, 3.0 * eps, -eps))


# ---------------------------------------------------------------------------
# the operations of the module contract


def eval_map(f: HoloMap, z: complex):
    return f.eval(z)


def derivative(f: HoloMap, z: complex):
    return f.deriv(z)


def certify_selfmap(f: HoloMap, n_boundary: int = 4096) -> tuple[bool, float]:
    """Sample |f| on the unit circle; the maximum principle makes boundary
    sampling sufficient.  Returns (verdict, max modulus found)."""
    if n_boundary < 64:
        raise HoloMapError("need at least 64 boundary samples")
    theta = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    vals = np.abs(f.eval(np.exp(1j * theta)))
    max_mod = float(np.max(vals))
    return max_mod <= 1.0 + SELFMAP_SLACK, max_mod


def hyperbolic_derivative(f: HoloMap, z: complex) -> float:
    """(1-|z|^2) |f'(z)| / (1-|f(z)|^2), the invariant derivative."""
    if abs(z) >= 1.0:
        raise HoloMapError("hyperbolic derivative needs |z| < 1")
    w = complex(f.eval(z))
    if abs(w) >= 1.0:
        raise HoloMapError(f"|f(z)| = {abs(w)} >= 1 at interior point: not a self-map")
    return (1.0 - abs(z) ** 2) * abs(complex(f.deriv(z))) / (1.0 - abs(w) ** 2)


# ---------------------------------------------------------------------------
# text serialization


def parse_map(text: str) -> HoloMap:
    tokens = text.split()
    f, rest = _parse_tokens(tokens)
    if rest:
        raise HoloMapError(f"trailing tokens in map expression: {rest}")
    return f


def _take_complex(tokens: list[str]) -> tuple[complex, list[str]]:
    if not tokens:
        raise HoloMapError("unexpected end of map expression")
    try:
        return complex(tokens[0]), tokens[1:]
    except ValueError as exc:
        raise HoloMapError(f"bad complex literal {tokens[0]!r}") from exc


def _parse_tokens(tokens: list[str]) -> tuple[HoloMap, list[str]]:
    if not tokens:
        raise HoloMapError("empty map expression")
    head, rest = tokens[0], tokens[1:]
    if head == "id":
        return Identity(), rest
    if head == "const":
        c, rest = _take_complex(rest)
        return Const(c), rest
    if head == "zpow":
        return Monomial(int(rest[0])), rest[1:]
    if head == "poly":
        n = int(rest[0])
        rest = rest[1:]
        coeffs = []
        for _ in range(n):
            c, rest = _take_complex(rest)
            coeffs.append(c)
        return Poly(tuple(coeffs)), rest
    if head == "auto":
        a, rest = _take_complex(rest)
        return Automorphism(a, float(rest[0])), rest[1:]
    if head == "blaschke":
        n = int(rest[0])
        rest = rest[1:]
        zeros = []
        for _ in range(n):
            a, rest = _take_complex(rest)
            zeros.append(a)
        return Blaschke(tuple(zeros), float(rest[0])), rest[1:]
    if head == "compose":
        outer, rest = _parse_tokens(rest)
        inner, rest = _parse_tokens(rest)
        return Compose(outer, inner), rest
    if head == "sum":
        left, rest = _parse_tokens(rest)
        right, rest = _parse_tokens(rest)
        return Sum(left, right), rest
    if head == "scale":
        c, rest = _take_complex(rest)
        inner, rest = _parse_tokens(rest)
        return Scaled(c, inner), rest
    if head == "feps":
        return f_eps(float(rest[0])), rest[1:]
    raise HoloMapError(f"unknown map constructor {head!r}")
