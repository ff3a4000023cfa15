"""Special functions and quadrature primitives.

Everything downstream (Coulomb kernels, displacement-field kernels, the
identity suite) is built on four ingredients defined here: the cylindrical
Bessel functions J0, J1, J2, the inverse-cube lattice sum xi(u, v), an
adaptive Gauss-Kronrod integrator for exponentially decaying integrands on
(0, inf), and the closed form of the two-sided mode sum
sum_n e^{i alpha n} n^m / (n^2 + beta^2).

All functions are pure; units are dimensionless throughout.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "Tolerance",
    "ModeSumArgs",
    "DEFAULT_TOL",
    "bessel_j",
    "xi",
    "apery_zeta3",
    "integrate_semi_infinite",
    "hyperbolic_mode_sum",
    "direct_mode_sum",
]


@dataclass(frozen=True)
class Tolerance:
    """Accuracy request for series and quadratures.

    abs_tol and rel_tol must be positive; a computation is accepted when its
    error estimate drops below max(abs_tol, rel_tol * |result|).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class ModeSumArgs:
    """Arguments of the mode sum sum_n e^{i alpha n} n^m / (n^2 + beta^2).

    m is restricted to {0, 1}: the sum diverges for m >= 2.
    """

    alpha: float
    beta: float
    m: int

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if self.m not in (0, 1):
            raise DomainError("m must be 0 or 1 (the sum diverges for m >= 2)")


# ---------------------------------------------------------------------------
# Bessel functions J0, J1, J2
#
# Three regimes:
#   x <= 9   ascending power series (max term ~1e2, no harmful cancellation)
#   x >= 18  Hankel asymptotic expansion; the phase is evaluated through
#            cos(x)/sin(x) directly, never through cos(x - phi), so no
#            precision is lost to argument subtraction at large x
#   else     integral representation J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt
#            on a fixed 96-point Gauss-Legendre rule (total phase < 18:
#            the rule is accurate to machine precision there)
# ---------------------------------------------------------------------------

_SERIES_CUT = 9.0
_ASYMPT_CUT = 18.0

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)
_GL_T = 0.5 * np.pi * (_GL_NODES + 1.0)  # nodes mapped to (0, pi)
_GL_W = 0.5 * np.pi * _GL_WEIGHTS
_GL_SIN_T = np.sin(_GL_T)

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _j_series(order: int, x: np.ndarray) -> np.ndarray:
    # J_n(x) = (x/2)^n sum_k (-1)^k (x/2)^{2k} / (k! (n+k)!)
    half = 0.5 * x
    q = half * half
    out = np.ones_like(x)
    term = np.ones_like(x)
    # 40 terms cover x <= 9: the tail term (x/2)^80/40!/... is < 1e-20
    for k in range(1, 41):
        term = term * (-q) / (k * (k + order))
        out = out + term
    for _ in range(order):
        out = out * half
    if order == 2:
        out = out * 0.5  # 1/order!
    return out


def _j_integral(order: int, x: np.ndarray) -> np.ndarray:
    # (1/pi) int_0^pi cos(order*t - x sin t) dt on fixed GL nodes
    phase = order * _GL_T[None, :] - x[:, None] * _GL_SIN_T[None, :]
    return np.cos(phase) @ _GL_W / np.pi


def _hankel_pq(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # P, Q of the Hankel expansion, terms a_k / x^k with
    # a_k = prod_{j<=k} (mu - (2j-1)^2) / (8 k!),  mu = 4 order^2.
    # 20 terms: at x >= 18 the smallest term is far below 1e-16.
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    inv_x = 1.0 / x
    for k in range(1, 21):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k) * inv_x
        if k % 2 == 0:
            p = p + (term if k % 4 == 0 else -term)
        else:
            q = q + (term if k % 4 == 1 else -term)
    return p, q


def _j_asympt(order: int, x: np.ndarray) -> np.ndarray:
    # J_n(x) = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)], chi = x - n pi/2 - pi/4.
    # cos/sin(chi) rewritten in terms of cos(x), sin(x) to avoid subtracting
    # the phase offset from a large argument.
    p, q = _hankel_pq(order, x)
    c, s = np.cos(x), np.sin(x)
    # cos(x - pi/4) = (c + s)/sqrt2, sin(x - pi/4) = (s - c)/sqrt2
    cos_m = (c + s) * _INV_SQRT2
    sin_m = (s - c) * _INV_SQRT2
    if order == 0:
        cos_chi, sin_chi = cos_m, sin_m
    elif order == 1:  # chi = x - 3pi/4
        cos_chi, sin_chi = sin_m, -cos_m
    else:  # order == 2, chi = x - 5pi/4
        cos_chi, sin_chi = -cos_m, -sin_m
    return _SQRT_2_OVER_PI / np.sqrt(x) * (p * cos_chi - q * sin_chi)


def _jv(order: int, x: np.ndarray) -> np.ndarray:
    """Vectorized J_order for order in {0, 1, 2}, x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lo = x <= _SERIES_CUT
    hi = x >= _ASYMPT_CUT
    mid = ~(lo | hi)
    if np.any(lo):
        out[lo] = _j_series(order, x[lo])
    if np.any(mid):
        out[mid] = _j_integral(order, x[mid])
    if np.any(hi):
        out[hi] = _j_asympt(order, x[hi])
    return out


def bessel_j(order: int, x: float) -> float:
    """Cylindrical Bessel function J_order(x) for order in {0, 1, 2}, x >= 0."""
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2, got {order}")
    if x < 0:
        raise DomainError("x must be non-negative")
    return float(_jv(order, np.asarray([x]))[0])


# ---------------------------------------------------------------------------
# Inverse-cube lattice sum xi(u, v)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _index_grid(n_terms: int) -> np.ndarray:
    grid = np.arange(-n_terms, n_terms + 1, dtype=float)
    grid.setflags(write=False)
    return grid


def xi(u: float, v: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Two-sided lattice sum sum_{n in Z} ((2n + u)^2 + v^2)^(-3/2).

    Periodic in u with period 2 and symmetric under u -> 2 - u.  Finite for
    v > 0, and for v = 0 whenever u is not an even integer (there the n
    hitting 2n + u = 0 contributes a non-summable term).

    Direct summation over |n| <= N with N fixed by the analytic tail bound
    sum_{n >= N} (2n - u)^(-3) <= (1/4) (2(N-1) - u)^(-2); cubic decay makes
    this cheap at any realistic tolerance.
    """
    if v < 0:
        raise DomainError("v must be non-negative")
    u = u % 2.0
    if v == 0.0 and u == 0.0:
        raise DomainError("xi diverges at v = 0 with u an even integer")
    target = 0.5 * tol.abs_tol
    # 2 * (1/4) (2N - 2 - u)^(-2) <= target, u < 2
    n_terms = max(8, int(math.ceil(0.5 * (math.sqrt(2.0 / target) + 4.0))))
    a = 2.0 * _index_grid(n_terms) + u
    total = float(np.sum((a * a + v * v) ** -1.5))
    # tighten if the relative request is the binding one
    tail = 0.25 * ((2 * n_terms - 2 + u) ** -2 + (2 * n_terms - 2 - u) ** -2)
    while tail > tol.rel_tol * abs(total) and tail > 0.5 * tol.abs_tol:
        n_terms *= 2
        a = 2.0 * _index_grid(n_terms) + u
        total = float(np.sum((a * a + v * v) ** -1.5))
        tail = 0.25 * ((2 * n_terms - 2 + u) ** -2 + (2 * n_terms - 2 - u) ** -2)
    return total


_ZETA3 = 1.2020569031595942854


def apery_zeta3() -> float:
    """zeta(3) = sum 1/n^3 to full double precision."""
    return _ZETA3


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

# 15-point Kronrod nodes on [-1, 1] and weights, with the embedded 7-point
# Gauss rule (QUADPACK dqk15 constants).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_K15_NODES = np.concatenate([-_XGK[:-1], _XGK[-1:], _XGK[-2::-1]])
_K15_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[-1:], _WGK[-2::-1]])
# positions of the Gauss points inside the 15-node array: odd indices
_G7_IDX = np.arange(1, 15, 2)
_G7_WEIGHTS = np.concatenate([_WG[:-1], _WG[-1:], _WG[-2::-1]])


def _gauss_kronrod(f: Callable, a: float, b: float) -> tuple[float, float]:
    """K15 estimate of int_a^b f and the |K15 - G7| error estimate."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid + half * _K15_NODES
    y = np.asarray(f(x), dtype=float)
    k15 = half * float(y @ _K15_WEIGHTS)
    g7 = half * float(y[_G7_IDX] @ _G7_WEIGHTS)
    return k15, abs(k15 - g7)


def _adaptive(f: Callable, edges: list[float], tol: Tolerance) -> float:
    """Adaptive panel subdivision over the panels defined by edges."""
    heap: list[tuple[float, float, float, float]] = []
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, e = _gauss_kronrod(f, a, b)
        total += val
        err += e
        heapq.heappush(heap, (-e, a, b, val))
    splits = 0
    while err > max(tol.abs_tol, tol.rel_tol * abs(total)):
        if splits >= tol.max_subdivisions:
            raise ConvergenceError(
                f"quadrature error {err:.3e} above tolerance after "
                f"{splits} subdivisions",
                best_estimate=total,
                achieved_error=err,
            )
        neg_e, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        v1, e1 = _gauss_kronrod(f, a, mid)
        v2, e2 = _gauss_kronrod(f, mid, b)
        total += v1 + v2 - val
        err += e1 + e2 + neg_e  # neg_e is -e of the split panel
        heapq.heappush(heap, (-e1, a, mid, v1))
        heapq.heappush(heap, (-e2, mid, b, v2))
        splits += 1
    return total


def _quad_finite(f: Callable, a: float, b: float,
                 tol: Tolerance = DEFAULT_TOL) -> float:
    """Adaptive quadrature of a vectorized integrand on a finite interval."""
    if not b > a:
        raise DomainError("need b > a")
    n_seed = 8
    edges = list(np.linspace(a, b, n_seed + 1))
    return _adaptive(f, edges, tol)


def _seed_edges(x_max: float) -> list[float]:
    # geometric seed panels: dense near 0 where integrands have their
    # structure, coarse towards the truncation point
    edges = [0.0]
    step = min(1.0, x_max / 8.0)
    x = step
    while x < x_max:
        edges.append(x)
        x *= 2.0
    edges.append(x_max)
    return edges


def integrate_semi_infinite(integrand: Callable, decay_rate_hint: float,
                            tol: Tolerance = DEFAULT_TOL) -> float:
    """Integrate a vectorized real integrand over (0, inf).

    The integrand must decay at least like exp(-decay_rate_hint * x) for
    large x; behaviour at 0 may be integrably singular (panels never touch
    the endpoints).  The interval is truncated where the tail bound falls
    below abs_tol/2, assuming an at-worst-quadratic prefactor of the
    exponential decay, and the remainder is integrated adaptively with
    per-panel Gauss-Kronrod error estimates.

    Raises ConvergenceError (carrying the best estimate and the achieved
    error) when the tolerance cannot be met within max_subdivisions panel
    splits.
    """
    if not decay_rate_hint > 0:
        raise DomainError("decay_rate_hint must be positive")
    rate = decay_rate_hint
    x_max = math.log(1.0 / tol.abs_tol) / rate + 10.0
    # absorb polynomial prefactors x^2 into the truncation point
    for _ in range(3):
        x_max = (math.log(1.0 / tol.abs_tol) + 2.0 * math.log1p(x_max)) / rate + 10.0
    return _adaptive(integrand, _seed_edges(x_max), tol)


# ---------------------------------------------------------------------------
# Mode sums
# ---------------------------------------------------------------------------

def hyperbolic_mode_sum(args: ModeSumArgs) -> complex:
    """Closed form of sum_{n in Z} e^{i alpha n} n^m / (n^2 + beta^2).

    Valid for m in {0, 1}; alpha is reduced into [0, 2pi) first (the sum is
    2pi-periodic).  At alpha = 0 the m = 1 sum vanishes identically by
    antisymmetry and is returned as exact zero; for alpha > 0,

        pi i^m beta^(m-1) / sinh(pi beta) * cosh(beta (pi - alpha))   (m even)
                                            sinh(beta (pi - alpha))   (m odd)
    """
    alpha = args.alpha % (2.0 * math.pi)
    beta = args.beta
    if args.m == 1 and alpha == 0.0:
        return 0j
    # {cosh,sinh}(beta(pi - alpha))/sinh(pi beta) through non-positive
    # exponents only: |pi - alpha| <= pi keeps this overflow-free at any beta
    arg = beta * (math.pi - alpha)
    top = math.exp(arg - math.pi * beta)
    bot = math.exp(-arg - math.pi * beta)
    ratio_den = -math.expm1(-2.0 * math.pi * beta)
    pref = math.pi * beta ** (args.m - 1)
    if args.m == 0:
        return complex(pref * (top + bot) / ratio_den)
    return 1j * pref * (top - bot) / ratio_den


def direct_mode_sum(args: ModeSumArgs, n_max: int) -> complex:
    """Symmetric truncation sum_{|n| <= n_max} e^{i alpha n} n^m / (n^2 + beta^2).

    The +n and -n terms are combined before accumulation, which is required
    for the conditionally convergent m = 1 case.
    """
    if n_max < 1:
        raise DomainError("n_max must be positive")
    beta2 = args.beta * args.beta
    n = np.arange(1, n_max + 1, dtype=float)
    denom = n * n + beta2
    if args.m == 0:
        return complex(1.0 / beta2 + 2.0 * float(np.sum(np.cos(args.alpha * n) / denom)))
    return 2j * float(np.sum(np.sin(args.alpha * n) * n / denom))
