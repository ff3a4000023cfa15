"""Displacement-field (gauge-transformation) interaction kernels.

The quadratic kernels D+ and D- = D+ . R are the radiation-side
counterparts of the Coulomb kernels: for every separation,
E+ = -(1/2 pi) D+ entrywise in L = 1 units, which is the cancellation this
package exists to verify.

Two representations are implemented.  The production path integrates the
hyperbolic summed form

    D+(u, v) = pi * int_0^inf dx x^2/sinh(x) *
        [[ (-J0 + J2)(xv) ch,        0,          -2 J1(xv) sh ],
         [ 0,             (-J0 - J2)(xv) ch,                0 ],
         [ -2 J1(xv) sh,              0,          2 J0(xv) ch ]]

with ch = cosh(x(u-1)), sh = sinh(x(u-1)), the hyperbolic ratios folded
into stable non-positive exponentials; the integrand decays like
exp(-x(1-|u-1|)), so the
adaptive integrator is cheap and accurate for 0 < u < 2.  The spectral
(per-axial-index) representation converges only conditionally and is kept
as a regulated cross-check: each transverse integral is damped by
exp(-eps k_perp) and the caller extrapolates eps -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coulomb import D_MINUS, D_PLUS, KernelMatrix, Separation, _rotate
from .errors import DomainError
from .geometry import CavityFrame, reflection_matrix
from .specfun import DEFAULT_TOL, Tolerance, _jv, _quad_finite, integrate_semi_infinite

__all__ = [
    "AnisotropyResult",
    "kernel_d",
    "kernel_d_spectral",
    "quadratic_self_term",
    "anisotropy_delta",
]


@dataclass(frozen=True)
class AnisotropyResult:
    """xx - zz anisotropy of the coincident-point quadratic kernel.

    delta is the anisotropy under a sharp cutoff on the wave-vector modulus;
    isotropic_scale is the cutoff-dominated diagonal magnitude (~ cutoff^3)
    used to normalize it.  The isotropic part itself is divergent and never
    reported.
    """

    delta: float
    cavity_length: float
    cutoff: float
    isotropic_scale: float


def _cosh_ratio(x: np.ndarray, u: float) -> np.ndarray:
    # cosh(x(u-1))/sinh(x) = (e^{x(u-2)} + e^{-xu}) / (1 - e^{-2x});
    # all exponents are <= 0 for 0 < u < 2, so this never overflows
    return (np.exp(x * (u - 2.0)) + np.exp(-x * u)) / (-np.expm1(-2.0 * x))


def _sinh_ratio(x: np.ndarray, u: float) -> np.ndarray:
    return (np.exp(x * (u - 2.0)) - np.exp(-x * u)) / (-np.expm1(-2.0 * x))


def _check_d_domain(sep: Separation):
    # excludes the coincident-point origin too, where the kernel is
    # ill-defined (only its anisotropy has meaning, see anisotropy_delta)
    if not (0.0 < sep.u < 2.0):
        raise DomainError(
            "quadratic kernel requires 0 < u < 2 (hyperbolic integrand "
            "converges only there)")


def _d_plus_base(u: float, v: float, tol: Tolerance) -> np.ndarray:
    """D+ entries in the frame with the transverse separation along x."""
    rate = min(u, 2.0 - u)

    def entry(bessels):
        def f(x):
            return x * x * _cosh_ratio(x, u) * bessels(x)
        return integrate_semi_infinite(f, rate, tol)

    xx = entry(lambda x: -_jv(0, x * v) + _jv(2, x * v))
    yy = entry(lambda x: -_jv(0, x * v) - _jv(2, x * v))
    zz = entry(lambda x: 2.0 * _jv(0, x * v))
    if v == 0.0:
        xz = 0.0  # J1(0) = 0: the off-diagonal integrand vanishes identically
    else:
        xz = integrate_semi_infinite(
            lambda x: x * x * _sinh_ratio(x, u) * (-2.0 * _jv(1, x * v)),
            rate, tol)
    return math.pi * np.array([[xx, 0.0, xz], [0.0, yy, 0.0], [xz, 0.0, zz]])


def kernel_d(sign: str, sep: Separation, tol: Tolerance = DEFAULT_TOL) -> KernelMatrix:
    """Quadratic displacement-field kernel D+ (or D- = D+ . R) in L = 1 units.

    Evaluated with the transverse separation along x and conjugated by the
    rotation through sep.phi.  Requires 0 < u < 2.
    """
    if sign not in ("plus", "minus"):
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")
    _check_d_domain(sep)
    m = _rotate(_d_plus_base(sep.u, sep.v, tol), sep.phi)
    if sign == "minus":
        return KernelMatrix(m @ reflection_matrix(), D_MINUS)
    return KernelMatrix(m, D_PLUS)


def _gl_grid(x_max: float, width: float, order: int = 20):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    n_panels = max(4, int(math.ceil(x_max / width)))
    edges = np.linspace(0.0, x_max, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xs = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    ws = (half[:, None] * weights[None, :]).ravel()
    return xs, ws


def kernel_d_spectral(sep: Separation, regulator_eps: float,
                      tol: Tolerance = DEFAULT_TOL) -> KernelMatrix:
    """D+ from the per-axial-index spectral representation, regulated.

    Sums two-sided over the axial index n with the transverse integrand
    damped by exp(-eps k_perp).  Conditionally convergent as eps -> 0:
    meant for epsilon-extrapolated cross-checks against kernel_d, not for
    production use.
    """
    _check_d_domain(sep)
    if not regulator_eps > 0:
        raise DomainError("regulator_eps must be positive")
    eps = regulator_eps
    u, v = sep.u, sep.v
    x_max = math.log(1.0 / min(tol.abs_tol, 1e-9)) / eps
    width = min(2.0, math.pi / (2.0 * max(v, 0.25)))
    xs, ws = _gl_grid(x_max, width)
    j0 = _jv(0, xs * v)
    j1 = _jv(1, xs * v)
    j2 = _jv(2, xs * v)
    damp = np.exp(-eps * xs) * ws
    n_max = max(64, int(math.ceil(24.0 / eps)))
    xx = yy = zz = xz = 0.0
    xs2 = xs * xs
    for n in range(n_max + 1):
        kn = math.pi * n
        inv_k2 = xs / (kn * kn + xs2)  # k_perp / k^2 on the grid
        w_cos = (1.0 if n == 0 else 2.0 * math.cos(math.pi * n * u))
        common = inv_k2 * damp
        xx += w_cos * float(np.sum(common * ((2 * kn * kn + xs2) * j0 + xs2 * j2)))
        yy += w_cos * float(np.sum(common * ((2 * kn * kn + xs2) * j0 - xs2 * j2)))
        zz += w_cos * float(np.sum(common * (2.0 * xs2 * j0)))
        if n > 0:
            xz += 4.0 * math.sin(math.pi * n * u) * kn \
                * float(np.sum(common * xs * j1))
    m = math.pi * np.array([[xx, 0.0, xz], [0.0, yy, 0.0], [xz, 0.0, zz]])
    return KernelMatrix(_rotate(m, sep.phi), D_PLUS)


def quadratic_self_term(z_over_L: float, tol: Tolerance = DEFAULT_TOL) -> KernelMatrix:
    """Position-dependent single-dipole quadratic term D-(2z zhat).

    This is the piece that cancels the xi part of the Coulomb self-energy
    matrix; the coincident-point part D+(0) is divergent and excluded (only
    its anisotropy is exposed, see anisotropy_delta).
    """
    if not (0.0 < z_over_L < 1.0):
        raise DomainError("dipole must lie strictly between the mirrors")
    return kernel_d("minus", Separation(2.0 * z_over_L, 0.0), tol)


def anisotropy_delta(frame: CavityFrame, cutoff: float,
                     tol: Tolerance = DEFAULT_TOL) -> AnisotropyResult:
    """Anisotropy xx - zz of the coincident-point kernel under a cutoff.

    The sharp cutoff is applied to the wave-vector modulus, |k| <= cutoff,
    i.e. axial index n and reduced transverse coordinate x are restricted to
    x^2 + n^2 <= (cutoff L / pi)^2.  Per-n transverse integrals are done by
    quadrature; the two-sided n sum is finite under the cutoff.

    Replacing the axial sum by an integral (the large-L continuum limit)
    makes the anisotropy vanish identically for any cutoff, so delta decays
    with the cavity length; isotropic_scale (~ cutoff^3 ball magnitude)
    provides the natural normalization.
    """
    L = frame.length_L
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    radius = cutoff * L / math.pi
    if radius < 1.0:
        raise DomainError("no axial mode fits under the cutoff")
    delta_sum = 0.0
    scale_sum = 0.0
    for n in range(0, int(math.floor(radius)) + 1):
        x_top = math.sqrt(radius * radius - n * n)
        if x_top == 0.0:
            continue
        w = 1.0 if n == 0 else 2.0
        if n == 0:
            # integrand x (2n^2 - x^2)/(x^2 + n^2) reduces to -x (and +x
            # for the isotropic numerator 2n^2 + x^2)
            delta_sum += w * _quad_finite(lambda x: -x, 0.0, x_top, tol)
            scale_sum += w * _quad_finite(lambda x: x, 0.0, x_top, tol)
        else:
            n2 = float(n * n)
            delta_sum += w * _quad_finite(
                lambda x: x * (2.0 * n2 - x * x) / (x * x + n2), 0.0, x_top, tol)
            scale_sum += w * _quad_finite(
                lambda x: x * (2.0 * n2 + x * x) / (x * x + n2), 0.0, x_top, tol)
    pref = math.pi ** 3 / (L * L)
    return AnisotropyResult(delta=pref * delta_sum, cavity_length=L,
                            cutoff=cutoff, isotropic_scale=pref * scale_sum)
