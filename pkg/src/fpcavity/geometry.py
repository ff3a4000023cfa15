"""Cavity geometry: mode functions, dispersion, reflection, image lattice.

The cavity is bounded by perfect plane mirrors at z = 0 and z = L with its
axis along z.  Transverse-electric (TE) and transverse-magnetic (TM) mode
functions are returned unnormalized (bare spatial profiles); every quantity
consumed downstream is independent of the mode normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "CavityFrame",
    "WaveVector",
    "DipoleSpec",
    "mode_fn",
    "dispersion",
    "reflection_matrix",
    "image_positions",
]


@dataclass(frozen=True)
class CavityFrame:
    """Planar cavity of length L with mirrors at z = 0 and z = L."""

    length_L: float = 1.0

    def __post_init__(self):
        if not self.length_L > 0:
            raise DomainError("cavity length must be positive")


@dataclass(frozen=True)
class WaveVector:
    """Mode label: axial index n (k_n = n pi / L) and transverse wave vector."""

    n: int
    k_perp: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("axial index must be non-negative")


@dataclass(frozen=True)
class DipoleSpec:
    """Point dipole at a position strictly inside the cavity."""

    position: tuple[float, float, float]
    moment: tuple[float, float, float]

    def pos(self) -> np.ndarray:
        return np.asarray(self.position, dtype=float)

    def mom(self) -> np.ndarray:
        return np.asarray(self.moment, dtype=float)


def _k_parts(k: WaveVector, frame: CavityFrame):
    kp = np.asarray(k.k_perp, dtype=float)
    kp_mag = float(np.hypot(kp[0], kp[1]))
    kn = k.n * math.pi / frame.length_L
    if kp_mag > 0.0:
        kp_hat = kp / kp_mag
    else:
        # polarization direction is arbitrary at k_perp = 0; fix it along x
        kp_hat = np.array([1.0, 0.0])
    return kp, kp_mag, kp_hat, kn


def dispersion(k: WaveVector, frame: CavityFrame = CavityFrame()) -> float:
    """Mode frequency omega = sqrt(k_n^2 + |k_perp|^2) with c = 1."""
    kp = np.asarray(k.k_perp, dtype=float)
    kn = k.n * math.pi / frame.length_L
    return math.sqrt(kn * kn + float(kp @ kp))


def mode_fn(kind: str, k: WaveVector, r, frame: CavityFrame = CavityFrame()) -> np.ndarray:
    """Bare cavity mode function at position r, as a complex 3-vector.

    TE:  (k_perp_hat x z_hat) sin(k_n z) e^{i k_perp . r_perp}
    TM:  (1/k) (k_perp cos(k_n z) z_hat - i k_n sin(k_n z) k_perp_hat)
         e^{i k_perp . r_perp}

    Both satisfy the perfect-mirror boundary conditions (vanishing tangential
    components at z = 0 and z = L) and are divergence-free.  There is no TE
    mode with n = 0.
    """
    r = np.asarray(r, dtype=float)
    z = r[2]
    if not (0.0 <= z <= frame.length_L):
        raise DomainError("position outside the cavity")
    kp, kp_mag, kp_hat, kn = _k_parts(k, frame)
    phase = np.exp(1j * (kp[0] * r[0] + kp[1] * r[1]))
    if kind == "TE":
        if k.n == 0:
            raise DomainError("no TE mode exists with axial index 0")
        pol = np.array([kp_hat[1], -kp_hat[0], 0.0])  # k_perp_hat x z_hat
        return pol * math.sin(kn * z) * phase
    if kind == "TM":
        mod = dispersion(k, frame)
        if mod == 0.0:
            raise DomainError("zero wave vector has no TM mode")
        axial = np.array([0.0, 0.0, 1.0]) * (kp_mag * math.cos(kn * z))
        trans = np.array([kp_hat[0], kp_hat[1], 0.0]) * (kn * math.sin(kn * z))
        return (axial - 1j * trans) / mod * phase
    raise DomainError(f"mode kind must be 'TE' or 'TM', got {kind!r}")


def reflection_matrix() -> np.ndarray:
    """Mirror reflection operator diag(-1, -1, 1)."""
    return np.diag([-1.0, -1.0, 1.0])


def image_positions(z_dip: float, frame: CavityFrame, n_range) -> list[tuple[float, np.ndarray]]:
    """Image lattice of a dipole at axial position z_dip.

    For each n in n_range, emits (2nL + z_dip, identity) followed by
    (2nL - z_dip, R): an unreflected copy and a mirror-reflected copy.  The
    (n = 0, identity) entry is the physical dipole itself.  Orientations
    alternate between identity and R along the axis.
    """
    L = frame.length_L
    if not (0.0 < z_dip < L):
        raise DomainError("dipole must lie strictly between the mirrors")
    ident = np.eye(3)
    refl = reflection_matrix()
    out: list[tuple[float, np.ndarray]] = []
    for n in n_range:
        out.append((2 * n * L + z_dip, ident))
        out.append((2 * n * L - z_dip, refl))
    return out
