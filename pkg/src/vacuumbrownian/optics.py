"""Reflection coefficients and angle-integrated spectral densities.

The reduced angle variable xi in [0, 1] parameterizes the vacuum-side modes:
k = omega * xi is the normal wavenumber, k_T = omega * sqrt(1 - xi^2) the
tangential one, and k_D = omega * sqrt(chi + xi^2) the normal wavenumber on
the medium side.  Two Fresnel-like coefficients control the boundary terms:

    r_tm(xi) = (eps*xi - sqrt(chi + xi^2)) / (eps*xi + sqrt(chi + xi^2)),
    r_te(xi) = (xi - sqrt(chi + xi^2)) / (xi + sqrt(chi + xi^2)),

with eps = 1 + chi.  Both vanish identically at chi = 0 and saturate at
+1 / -1 in the perfect-conductor limit chi -> infinity.

The spectral densities below are the angle-integrated mode sums per unit
omega^3 at fixed (omega, xi), split into the three structural pieces that
downstream omega-integration treats differently: a z-independent constant
(the Minkowski part, dropped when renormalized), an oscillatory coefficient
multiplying cos(2 omega xi z), and an evanescent coefficient multiplying
exp(-2 omega sqrt(chi) xi z).  Overall normalization: the z-component
density carries a prefactor 1/(2 pi)^2 and the parallel one 1/(8 pi^2);
both are applied by the caller, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _validate(xi, chi) -> None:
    if np.any(np.asarray(chi) < 0.0):
        raise ValueError("chi must be non-negative")
    x = np.asarray(xi)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("xi must lie in [0, 1]")


def fresnel_tm(xi, chi):
    """TM-like coefficient (eps*xi - sqrt(chi+xi^2))/(eps*xi + sqrt(chi+xi^2)).

    Vectorized over xi.  At chi = 0 the coefficient is identically 0; at
    xi = 0 with chi > 0 it equals -1.  Changes sign at xi^2 = chi/(eps^2-1).
    """
    _validate(xi, chi)
    if chi == 0.0:
        return np.zeros_like(np.asarray(xi, dtype=float)) if np.ndim(xi) else 0.0
    x = np.asarray(xi, dtype=float)
    s = np.sqrt(chi + x * x)
    ex = (1.0 + chi) * x
    out = (ex - s) / (ex + s)
    return out if np.ndim(xi) else float(out)


def fresnel_te(xi, chi):
    """TE-like coefficient (xi - sqrt(chi+xi^2))/(xi + sqrt(chi+xi^2)).

    Lies in [-1, 0] for chi >= 0 and tends to -1 as chi -> infinity.
    """
    _validate(xi, chi)
    if chi == 0.0:
        return np.zeros_like(np.asarray(xi, dtype=float)) if np.ndim(xi) else 0.0
    x = np.asarray(xi, dtype=float)
    s = np.sqrt(chi + x * x)
    out = (x - s) / (x + s)
    return out if np.ndim(xi) else float(out)


@dataclass(frozen=True)
class SpectralPoint:
    """Frequency/angle coordinates (omega, xi) with omega > 0, xi in [0, 1]."""

    omega: float
    xi: float

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError("xi must lie in [0, 1]")


@dataclass(frozen=True)
class SpectralDensity:
    """Structural coefficients of a spectral density at fixed (omega, xi).

    plane_const multiplies 1 (z-independent), plane_osc multiplies
    cos(2 omega xi z), evan_coeff multiplies exp(-2 omega sqrt(chi) xi z);
    all per unit omega^3 and without the component prefactor.
    """

    plane_const: float
    plane_osc: float
    evan_coeff: float


def _evanescent_z(xi: float, chi: float) -> float:
    eps = 1.0 + chi
    return (1.0 + chi * xi * xi) * 2.0 * eps * np.sqrt(chi) * xi \
        * np.sqrt(1.0 - xi * xi) / (1.0 + (eps * eps - 1.0) * xi * xi)


def _evanescent_parallel(xi: float, chi: float) -> float:
    eps = 1.0 + chi
    sq = np.sqrt(chi)
    root = np.sqrt(1.0 - xi * xi)
    return (2.0 * xi ** 3 * eps * chi * sq * root
            / (1.0 + (eps * eps - 1.0) * xi * xi)
            + 2.0 * xi * sq * root)


def spectral_density_z(point: SpectralPoint, chi: float,
                       renormalized: bool = True) -> SpectralDensity:
    """Normal-component spectral density; prefactor 1/(2 pi)^2 applied by caller.

    plane_const = (1 - xi^2), the Minkowski part, included only when
    ``renormalized`` is False.  plane_osc = (1 - xi^2) * r_tm(xi).
    """
    _validate(point.xi, chi)
    xi = point.xi
    const = 0.0 if renormalized else (1.0 - xi * xi)
    if chi == 0.0:
        return SpectralDensity(const, 0.0, 0.0)
    return SpectralDensity(
        plane_const=const,
        plane_osc=(1.0 - xi * xi) * fresnel_tm(xi, chi),
        evan_coeff=float(_evanescent_z(xi, chi)),
    )


def spectral_density_parallel(point: SpectralPoint, chi: float,
                              renormalized: bool = True) -> SpectralDensity:
    """Parallel-component spectral density; prefactor 1/(8 pi^2) applied by caller.

    plane_const = (1 + xi^2), included only when ``renormalized`` is False.
    plane_osc = r_te(xi) - xi^2 * r_tm(xi), the oscillatory coefficient left
    after the Minkowski constant is split off; note it tends to -1 (not 0)
    as xi -> 0, which is what cancels the evanescent sector's small-xi
    divergence in the time-integrated dispersions.
    """
    _validate(point.xi, chi)
    xi = point.xi
    const = 0.0 if renormalized else (1.0 + xi * xi)
    if chi == 0.0:
        return SpectralDensity(const, 0.0, 0.0)
    return SpectralDensity(
        plane_const=const,
        plane_osc=float(fresnel_te(xi, chi) - xi * xi * fresnel_tm(xi, chi)),
        evan_coeff=float(_evanescent_parallel(xi, chi)),
    )
