"""Numerical tolerances and physical unit conversions."""

from __future__ import annotations

import dataclasses
import math

from scipy import constants as _sc


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Validation thresholds shared by all modules.

    Override per call with ``dataclasses.replace(TOL, herm=...)``.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    eig_reconstruction: float = 1e-9
    unitary: float = 1e-9
    kraus: float = 1e-10
    cptp: float = 1e-9
    trajectory: float = 1e-7
    ergotropy_clamp: float = 1e-12
    gibbs_defect: float = 1e-9


TOL = Tolerances()


def temperature_scale(omega_c_ghz: float = 10.0) -> float:
    """hbar * omega_c / k_B in kelvin for a cavity at ``omega_c/2pi`` GHz."""
    return _sc.h * omega_c_ghz * 1e9 / _sc.k


def nbar_to_temperature(nbar: float, omega_c_ghz: float = 10.0) -> float:
    """Bose-Einstein inversion: mean occupation -> temperature in kelvin."""
    if nbar <= 0:
        return 0.0
    return temperature_scale(omega_c_ghz) / math.log1p(1.0 / nbar)


def temperature_to_nbar(kelvin: float, omega_c_ghz: float = 10.0) -> float:
    if kelvin <= 0:
        return 0.0
    return 1.0 / math.expm1(temperature_scale(omega_c_ghz) / kelvin)
