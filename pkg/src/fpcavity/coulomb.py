"""Instantaneous-Coulomb interaction kernels of the mirror cavity.

The electrostatic interaction of dipoles between perfect mirrors is the
free-space point-dipole kernel summed over the two-sided image lattice.
Two dimensionless 3x3 kernels carry all of it: E+ (separation-dependent
part, n = 0 term being the direct interaction) and E- = E+ . R (the
mirror-reflected image series).  Physical prefactors 1/(8 pi eps0) and the
1/L^3 length scaling are applied only in the energy assembly, keeping the
kernels identity-check friendly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .geometry import CavityFrame, DipoleSpec, image_positions, reflection_matrix
from .specfun import DEFAULT_TOL, Tolerance, apery_zeta3, xi

__all__ = [
    "Separation",
    "KernelMatrix",
    "kernel_e",
    "self_energy_matrix",
    "dipole_dipole_energy",
    "brute_force_coulomb",
]

E_PLUS = "E_PLUS"
E_MINUS = "E_MINUS"
D_PLUS = "D_PLUS"
D_MINUS = "D_MINUS"
SELF = "SELF"


@dataclass(frozen=True)
class Separation:
    """Dimensionless two-dipole separation.

    u = rho_z / L (axial), v = rho_perp / L >= 0 (transverse magnitude),
    phi = azimuth of the transverse separation in the x-y plane.
    """

    u: float
    v: float
    phi: float = 0.0

    def __post_init__(self):
        if self.v < 0:
            raise DomainError("transverse separation v must be non-negative")

    def is_coincident(self) -> bool:
        return self.v == 0.0 and self.u % 2.0 == 0.0


@dataclass
class KernelMatrix:
    """A real 3x3 interaction kernel in L = 1 reduced units."""

    m: np.ndarray
    kind: str


def _rot_z(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rotate(m: np.ndarray, phi: float) -> np.ndarray:
    if phi == 0.0:
        return m
    rz = _rot_z(phi)
    return rz @ m @ rz.T


def _check_sign(sign: str):
    if sign not in ("plus", "minus"):
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")


def _e_plus_base(u: float, v: float, tol: Tolerance) -> np.ndarray:
    """E+ entries in the frame where the transverse separation lies along x.

    Lattice sum over n of the free-space dipole kernel (1 - 3 rhat rhat)/rho^3
    at rho_n = (v, 0, 2n + u).  Truncated where the analytic tail bound
    (entries are bounded by 2/rho_n^3) drops below abs_tol/2.
    """
    u = u % 2.0  # the lattice sum is exactly 2-periodic in u
    target = 0.5 * tol.abs_tol
    # two-sided tail <= (2(N-1) + u)^-2 + (2(N-1) - u)^-2 with entry factor 2
    n_terms = max(8, int(math.ceil(0.5 * (math.sqrt(8.0 / target) + 6.0))))
    n = np.arange(-n_terms, n_terms + 1, dtype=float)
    a = 2.0 * n + u
    rho2 = a * a + v * v
    inv3 = rho2 ** -1.5
    inv5 = rho2 ** -2.5
    xx = float(np.sum(inv3 - 3.0 * v * v * inv5))
    yy = float(np.sum(inv3))
    zz = float(np.sum(inv3 - 3.0 * a * a * inv5))
    xz = float(np.sum(-3.0 * v * a * inv5))
    return np.array([[xx, 0.0, xz], [0.0, yy, 0.0], [xz, 0.0, zz]])


def kernel_e(sign: str, sep: Separation, tol: Tolerance = DEFAULT_TOL) -> KernelMatrix:
    """Coulomb dipole-dipole kernel E+ (or E- = E+ . R) at a separation.

    Evaluated in the frame with the transverse separation along x, then
    conjugated by the rotation about z through sep.phi.  Coincident source
    points (v = 0 and u an even integer) are a domain error.
    """
    _check_sign(sign)
    if sep.is_coincident():
        raise DomainError("kernel_e is singular at coincident source points")
    m = _rotate(_e_plus_base(sep.u, sep.v, tol), sep.phi)
    if sign == "minus":
        return KernelMatrix(m @ reflection_matrix(), E_MINUS)
    return KernelMatrix(m, E_PLUS)


def self_energy_matrix(z_over_L: float) -> KernelMatrix:
    """Image-lattice self-interaction matrix of a dipole at z/L.

    (zeta(3)/4) diag(1, 1, -2) + xi(2z/L, 0) diag(-1, -1, -2) in L = 1
    units; the physical prefactor 1/(8 pi eps0 L^3) belongs to the energy
    assembly.  Diverges as the dipole reaches a mirror.
    """
    if not (0.0 < z_over_L < 1.0):
        raise DomainError("dipole must lie strictly between the mirrors")
    z3 = apery_zeta3()
    m = (z3 / 4.0) * np.diag([1.0, 1.0, -2.0]) \
        + xi(2.0 * z_over_L, 0.0) * np.diag([-1.0, -1.0, -2.0])
    return KernelMatrix(m, SELF)


def _pair_separations(da: DipoleSpec, db: DipoleSpec, frame: CavityFrame):
    """Separations entering the (A, B) pair energy: direct and image-series."""
    L = frame.length_L
    ra, rb = da.pos(), db.pos()
    dxy = ra[:2] - rb[:2]
    v = float(np.hypot(dxy[0], dxy[1])) / L
    phi = math.atan2(dxy[1], dxy[0]) if v > 0 else 0.0
    sep_plus = Separation((ra[2] - rb[2]) / L, v, phi)
    sep_minus = Separation((ra[2] + rb[2]) / L, v, phi)
    return sep_plus, sep_minus


def dipole_dipole_energy(dipoles: Sequence[DipoleSpec], frame: CavityFrame,
                         tol: Tolerance = DEFAULT_TOL) -> float:
    """Total Coulomb dipole-dipole energy of the configuration (eps0 = 1).

    (1 / 8 pi L^3) sum over ordered pairs A != B of
    d_A . [E+(direct separation) + E-(z_A + z_B axial, same transverse)] . d_B.
    """
    if len(dipoles) < 2:
        raise DomainError("need at least two dipoles")
    L = frame.length_L
    for d in dipoles:
        if not (0.0 < d.pos()[2] < L):
            raise DomainError("dipole outside the cavity")
    total = 0.0
    for i, da in enumerate(dipoles):
        for j, db in enumerate(dipoles):
            if i == j:
                continue
            sp, sm = _pair_separations(da, db, frame)
            if sp.is_coincident():
                raise DomainError("coincident dipoles")
            k = kernel_e("plus", sp, tol).m + kernel_e("minus", sm, tol).m
            total += float(da.mom() @ k @ db.mom())
    return total / (8.0 * math.pi * L ** 3)


def _free_dipole_pair(d1: np.ndarray, r1: np.ndarray,
                      d2: np.ndarray, r2: np.ndarray) -> float:
    """Free-space dipole-dipole energy (1/4pi) [d1.d2 - 3 (d1.rhat)(d2.rhat)]/r^3."""
    dr = r1 - r2
    r2n = float(dr @ dr)
    r = math.sqrt(r2n)
    return (float(d1 @ d2) - 3.0 * float(d1 @ dr) * float(d2 @ dr) / r2n) \
        / (4.0 * math.pi * r2n * r)


def brute_force_coulomb(dipoles: Sequence[DipoleSpec], frame: CavityFrame,
                        n_images: int) -> float:
    """Independent image-lattice oracle for dipole_dipole_energy.

    For each ordered pair (A, B) sums the free-space pair energy of d_A with
    every image of d_B over |n| <= n_images, at half weight so the ordered
    double count reproduces the 1/(8 pi) pair convention.  Deterministic
    finite sum; the truncation error decays as 1/n_images^2.
    """
    if len(dipoles) < 2:
        raise DomainError("need at least two dipoles")
    if n_images < 0:
        raise DomainError("n_images must be non-negative")
    total = 0.0
    for i, da in enumerate(dipoles):
        ra, ma = da.pos(), da.mom()
        for j, db in enumerate(dipoles):
            if i == j:
                continue
            rb, mb = db.pos(), db.mom()
            images = image_positions(rb[2], frame,
                                     range(-n_images, n_images + 1))
            for z_img, orient in images:
                r_img = np.array([rb[0], rb[1], z_img])
                total += 0.5 * _free_dipole_pair(ma, ra, orient @ mb, r_img)
    return total
