"""Domain types, unit conventions, and the dimensionless reduction.

Natural Gaussian units with hbar = c = 1 throughout.  The particle sits at
distance ``z > 0`` from the interface of a non-dispersive dielectric filling
``z < 0`` with constant susceptibility ``chi`` (dielectric constant
``epsilon = 1 + chi``).  All core results are expressed as the reduced
dispersion

    rho_i = <Delta v_i^2> * 4 pi^2 m^2 z^2 / e^2,

a function of (t/z, chi) alone; the particle's charge and mass enter only
through the conversion helpers here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Axis(enum.Enum):
    """Velocity component: Z is normal to the interface, X and Y parallel.

    X and Y are interchangeable everywhere (isotropy in the plane).
    """

    Z = "z"
    X = "x"
    Y = "y"

    @property
    def is_parallel(self) -> bool:
        return self is not Axis.Z


@dataclass(frozen=True)
class Scenario:
    """Physical inputs: distance z, elapsed time t, susceptibility chi.

    Invariants: z > 0 (particle strictly in the vacuum half-space), t >= 0,
    chi >= 0.  ``epsilon`` is derived so that epsilon - chi == 1 exactly.
    """

    z: float
    t: float
    chi: float

    def __post_init__(self):
        if not self.z > 0.0:
            raise ValueError("z must be positive (particle in vacuum region)")
        if self.t < 0.0:
            raise ValueError("t must be non-negative")
        if self.chi < 0.0:
            raise ValueError("chi must be non-negative")

    @property
    def epsilon(self) -> float:
        return 1.0 + self.chi

    @property
    def tau(self) -> float:
        """Dimensionless elapsed time t/z."""
        return self.t / self.z


# 2018 CODATA reduced Compton wavelength of the electron, metres.
ELECTRON_REDUCED_COMPTON_M = 3.8615926796e-13
FINE_STRUCTURE = 1.0 / 137.035999


@dataclass(frozen=True)
class ParticleProperties:
    """Charge and mass data used only for physical-unit conversion.

    ``charge_to_mass_sq`` is e^2/m^2 in natural units, with lengths measured
    in the same unit as ``Scenario.z``.  ``fine_structure`` is alpha, with
    e^2 = 4 pi alpha.
    """

    charge_to_mass_sq: float
    fine_structure: float = FINE_STRUCTURE

    def __post_init__(self):
        if not self.charge_to_mass_sq > 0.0:
            raise ValueError("charge_to_mass_sq must be positive")
        if not self.fine_structure > 0.0:
            raise ValueError("fine_structure must be positive")

    @classmethod
    def electron(cls) -> "ParticleProperties":
        """Electron with lengths in metres: e^2/m^2 = 4 pi alpha lambdabar_C^2."""
        e_sq = 4.0 * math.pi * FINE_STRUCTURE
        return cls(charge_to_mass_sq=e_sq * ELECTRON_REDUCED_COMPTON_M ** 2,
                   fine_structure=FINE_STRUCTURE)


@dataclass(frozen=True)
class ReducedDispersion:
    """Dimensionless dispersion rho_i with provenance.

    ``method`` is one of {"kernel", "spectral", "small_chi_closed_form",
    "large_chi_closed_form"}.  ``regulator_trace`` holds the (eps_reg, value)
    ladder used for extrapolation, empty for closed forms.
    """

    rho: float
    abs_error: float
    method: str
    regulator_trace: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        if self.abs_error < 0.0:
            raise ValueError("abs_error must be non-negative")
        if not math.isfinite(self.rho):
            raise ValueError("rho must be finite")


def refractive_index(z_coord: float, chi: float) -> float:
    """Step profile of the medium: 1 in vacuum (z > 0), 1 + chi in the medium.

    The boundary point z = 0 is assigned to the medium by convention; the
    integrators never evaluate there.
    """
    if chi < 0.0:
        raise ValueError("chi must be non-negative")
    return 1.0 if z_coord > 0.0 else 1.0 + chi


def reduce(raw_dispersion: float, scenario: Scenario,
           particle: ParticleProperties, *, method: str = "kernel",
           abs_error: float = 0.0) -> ReducedDispersion:
    """Convert a raw velocity dispersion to the dimensionless rho."""
    scale = 4.0 * math.pi ** 2 * scenario.z ** 2 / particle.charge_to_mass_sq
    return ReducedDispersion(rho=raw_dispersion * scale,
                             abs_error=abs_error * scale, method=method)


def to_physical(reduced: ReducedDispersion, scenario: Scenario,
                particle: ParticleProperties) -> float:
    """Inverse of :func:`reduce`: rho back to <Delta v^2> (units of c^2)."""
    scale = 4.0 * math.pi ** 2 * scenario.z ** 2 / particle.charge_to_mass_sq
    return reduced.rho / scale
