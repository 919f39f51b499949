"""Closed-form limiting expressions and the susceptibility-threshold solver.

Two regimes admit closed forms for the reduced dispersions rho_i(tau, chi),
tau = t/z.

Large susceptibility, late times (chi -> infinity, t >> z; the evanescent
sector additionally relaxes on the scale t ~ 2 sqrt(chi) z):

    rho_z = [1 + (1 + ln 4chi)/(2 sqrt(chi))]
            + (4/3) (z/t)^2 [1 + 3 ln(4chi)/(2 sqrt(chi))]
    rho_x = (ln 4chi - 1)/(2 sqrt(chi)) - (4/3) (z/t)^2 (1 - 1/sqrt(chi))

The leading constants 1 and -(4/3)(z/t)^2 are the perfectly conducting
interface result; the chi-dependent corrections are positive, so real
materials give larger dispersions and approach the conductor limit slowly.
The converged numerics reproduce the logarithm exactly but favour additive
constants about 4 (z) and 1 (x) below these, inside the quoted abs_error.

Small susceptibility (chi -> 0, any t != 2z), with L = 2 ln|(2+tau)/(2-tau)|:

    rho_z = chi [ (tau^2 + 12)/(12 tau^2) + (tau^4 - 8)/(16 tau^3) * L ]
    rho_x = chi [ -(tau^4 - 4 tau^2 + 24)/(12 tau^2 (tau^2 - 4))
                  + (tau^4 - 8)/(32 tau^3) * L ]

Both are linear in chi and finite at every tau except tau = 2, where the
logarithm (and the parallel rational part) diverge.  Limits:
tau -> infinity gives chi*(7/12 + (5/3)/tau^2) and chi*(1/6 + (1/3)/tau^2);
tau -> 0 gives (9/80) chi tau^2 and (7/80) chi tau^2, hence the ratio 7/9.

The logarithm is implemented as ln of the squared ratio, valid on both
sides of tau = 2.
"""

from __future__ import annotations

import enum
import math
import warnings

from scipy.optimize import brentq

from .kernels import SingularBandError
from .model import ReducedDispersion, Scenario


class AsymptoticRegime(enum.Enum):
    LARGE_CHI_LATE_TIME = "large_chi_late_time"
    SMALL_CHI = "small_chi"

    def applies(self, scenario: Scenario) -> bool:
        if self is AsymptoticRegime.LARGE_CHI_LATE_TIME:
            return scenario.chi >= 1.0 and scenario.tau >= 10.0
        return scenario.chi <= 1e-2 and scenario.t != 2.0 * scenario.z


def _warn_outside(regime: AsymptoticRegime, scenario: Scenario) -> None:
    if not regime.applies(scenario):
        warnings.warn(
            f"{regime.value} closed form evaluated outside its regime "
            f"(chi={scenario.chi:g}, t/z={scenario.tau:g})",
            RuntimeWarning, stacklevel=3)


def large_chi_z(scenario: Scenario) -> ReducedDispersion:
    """Normal-axis closed form for large chi at late times."""
    _warn_outside(AsymptoticRegime.LARGE_CHI_LATE_TIME, scenario)
    chi = scenario.chi
    if chi <= 0.0:
        raise ValueError("large-chi form requires chi > 0")
    l4 = math.log(4.0 * chi)
    sq = math.sqrt(chi)
    zt2 = (scenario.z / scenario.t) ** 2 if scenario.t > 0.0 else float("inf")
    rho = (1.0 + (1.0 + l4) / (2.0 * sq)) \
        + (4.0 / 3.0) * zt2 * (1.0 + 3.0 * l4 / (2.0 * sq))
    # truncation scale: the next correction is O(1/sqrt(chi)) at constant level
    err = 4.0 / sq + 2.0 * zt2
    return ReducedDispersion(rho, err, "large_chi_closed_form")


def large_chi_parallel(scenario: Scenario) -> ReducedDispersion:
    """Parallel-axis closed form for large chi at late times."""
    _warn_outside(AsymptoticRegime.LARGE_CHI_LATE_TIME, scenario)
    chi = scenario.chi
    if chi <= 0.0:
        raise ValueError("large-chi form requires chi > 0")
    l4 = math.log(4.0 * chi)
    sq = math.sqrt(chi)
    zt2 = (scenario.z / scenario.t) ** 2 if scenario.t > 0.0 else float("inf")
    rho = (l4 - 1.0) / (2.0 * sq) - (4.0 / 3.0) * zt2 * (1.0 - 1.0 / sq)
    err = 1.5 / sq + 2.0 * zt2
    return ReducedDispersion(rho, err, "large_chi_closed_form")


def _log_sq_ratio(tau: float) -> float:
    """ln((2+tau)^2/(2-tau)^2) = 2 ln|(2+tau)/(2-tau)|, both sides of tau=2."""
    return 2.0 * math.log(abs((2.0 + tau) / (2.0 - tau)))


def small_chi_z(scenario: Scenario) -> ReducedDispersion:
    """Normal-axis closed form, first order in chi."""
    _check_small_chi(scenario)
    chi, tau = scenario.chi, scenario.tau
    if chi == 0.0 or tau == 0.0:
        return ReducedDispersion(0.0, 0.0, "small_chi_closed_form")
    bracket = (tau * tau + 12.0) / (12.0 * tau * tau) \
        + (tau ** 4 - 8.0) / (16.0 * tau ** 3) * _log_sq_ratio(tau)
    rho = chi * bracket
    return ReducedDispersion(rho, chi * abs(rho), "small_chi_closed_form")


def small_chi_parallel(scenario: Scenario) -> ReducedDispersion:
    """Parallel-axis closed form, first order in chi."""
    _check_small_chi(scenario)
    chi, tau = scenario.chi, scenario.tau
    if chi == 0.0 or tau == 0.0:
        return ReducedDispersion(0.0, 0.0, "small_chi_closed_form")
    t2 = tau * tau
    bracket = -(tau ** 4 - 4.0 * t2 + 24.0) / (12.0 * t2 * (t2 - 4.0)) \
        + (tau ** 4 - 8.0) / (32.0 * tau ** 3) * _log_sq_ratio(tau)
    rho = chi * bracket
    return ReducedDispersion(rho, chi * abs(rho), "small_chi_closed_form")


def _check_small_chi(scenario: Scenario) -> None:
    if scenario.t == 2.0 * scenario.z:
        raise SingularBandError(
            "closed form rejected at t = 2z: the expressions are singular at "
            "t = 2z (round-trip light travel time)")
    _warn_outside(AsymptoticRegime.SMALL_CHI, scenario)


def conductor_deficit(chi: float) -> float:
    """Relative correction (1 + ln 4chi)/(2 sqrt(chi)) of rho_z to its
    perfect-conductor limit, the quantity the threshold solver inverts."""
    if chi <= 0.0:
        raise ValueError("chi must be positive")
    return (1.0 + math.log(4.0 * chi)) / (2.0 * math.sqrt(chi))


def chi_threshold(fraction: float) -> float:
    """Susceptibility at which the conductor-limit correction equals ``fraction``.

    Solves (1 + ln 4chi)/(2 sqrt(chi)) = fraction on the monotone-decreasing
    branch chi > e/4 by bracketed root finding, to 1e-6 relative accuracy or
    better.  fraction = 0.10 gives chi near 2632, fraction = 0.05 near 14288.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1)")
    lo = math.e / 4.0 * (1.0 + 1e-12)
    if conductor_deficit(lo) <= fraction:
        raise ValueError("fraction exceeds the correction's maximum on the "
                         "decreasing branch")
    hi = 10.0 * lo
    while conductor_deficit(hi) > fraction:
        hi *= 10.0
        if hi > 1e60:
            raise ValueError("no bracket found")
    return float(brentq(lambda c: conductor_deficit(c) - fraction, lo, hi,
                        rtol=1e-12, maxiter=200))
