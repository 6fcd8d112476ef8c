"""Magnetostatic spin-wave dispersion in thin in-plane magnetized films.

Surface waves (MSSW, propagation across the bias field) and backward volume
waves (BVMSW, along the field) share the k = 0 frequency
``sqrt(f_H (f_H + f_M))``; the surface band rises from there to
``f_H + f_M / 2`` and the backward-volume band falls to ``f_H``.

Units: film thickness in metres, magnetization 4*pi*M0 in gauss, bias field in
oersted, gamma in MHz/Oe, wavenumbers in rad/m, frequencies in GHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import PhaseAngle

MSSW = "MSSW"
BVMSW = "BVMSW"
GAMMA_MHZ_PER_OE = 2.8

# below this k*d0 the backward-volume factor uses its Taylor series
_SERIES_CROSSOVER = 1e-6


class OutOfBandError(ValueError):
    """Frequency has no propagating spin wave in the given medium."""


@dataclass(frozen=True)
class SpinWaveMedium:
    d0: float
    M0_4pi: float
    H0: float = 330.0
    gamma: float = GAMMA_MHZ_PER_OE
    geometry: str = MSSW

    def __post_init__(self):
        for name in ("d0", "M0_4pi", "H0", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.geometry not in (MSSW, BVMSW):
            raise ValueError(f"geometry must be {MSSW!r} or {BVMSW!r}")

    @property
    def f_H(self) -> float:
        return self.gamma * self.H0 / 1e3

    @property
    def f_M(self) -> float:
        return self.gamma * self.M0_4pi / 1e3

    def with_geometry(self, geometry: str) -> "SpinWaveMedium":
        return SpinWaveMedium(self.d0, self.M0_4pi, self.H0, self.gamma, geometry)


# Film of the first delay line in the two-path demonstrator.
YIG_DELAY_LINE_1 = SpinWaveMedium(d0=9.6e-6, M0_4pi=1750.0, H0=330.0)
YIG_DELAY_LINE_2 = SpinWaveMedium(d0=21.3e-6, M0_4pi=1750.0, H0=330.0)


def _bv_factor(x: np.ndarray) -> np.ndarray:
    """(1 - exp(-x)) / x with its limit 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    small = x <= _SERIES_CROSSOVER
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x / 2.0 + x * x / 6.0, -np.expm1(-safe) / safe)


def frequency_at(medium: SpinWaveMedium, k):
    """Frequency in GHz for wavenumber(s) ``k`` in rad/m (scalar or array)."""
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0) or not np.all(np.isfinite(k_arr)):
        raise ValueError("wavenumber must be finite and >= 0")
    x = k_arr * medium.d0
    fH, fM = medium.f_H, medium.f_M
    if medium.geometry == MSSW:
        f = np.sqrt((fH + fM / 2.0) ** 2 - (fM / 2.0) ** 2 * np.exp(-2.0 * x))
    else:
        f = np.sqrt(fH * (fH + fM * _bv_factor(x)))
    return float(f) if f.ndim == 0 else f


def band_limits(medium: SpinWaveMedium) -> tuple[float, float]:
    fH, fM = medium.f_H, medium.f_M
    f0 = math.sqrt(fH * (fH + fM))
    if medium.geometry == MSSW:
        return f0, fH + fM / 2.0
    return fH, f0


def wavenumber_for(medium: SpinWaveMedium, f: float, rtol: float = 1e-12) -> float:
    """Invert the dispersion by bisection; ``f`` must lie strictly inside the band."""
    lo_f, hi_f = band_limits(medium)
    if not lo_f < f < hi_f:
        raise OutOfBandError(
            f"{f:.6g} GHz is outside the {medium.geometry} band ({lo_f:.6g}, {hi_f:.6g}) GHz"
        )
    increasing = medium.geometry == MSSW

    def above(k):
        fk = frequency_at(medium, k)
        return fk > f if increasing else fk < f

    k_lo, k_hi = 0.0, 1.0 / medium.d0
    while not above(k_hi):
        k_lo, k_hi = k_hi, 2.0 * k_hi
    while k_hi - k_lo > rtol * k_hi:
        mid = 0.5 * (k_lo + k_hi)
        if mid in (k_lo, k_hi):
            break
        if above(mid):
            k_hi = mid
        else:
            k_lo = mid
    return 0.5 * (k_lo + k_hi)


def phase_over_length(medium: SpinWaveMedium, f: float, length: float) -> PhaseAngle:
    if not length > 0:
        raise ValueError("length must be > 0")
    return PhaseAngle(wavenumber_for(medium, f) * length)


def dispersion_table(medium: SpinWaveMedium, k_min: float, k_max: float, points: int = 200):
    """(k, f) columns over a log-spaced k range, for plotting or CSV export."""
    if not 0 < k_min < k_max:
        raise ValueError("need 0 < k_min < k_max")
    k = np.geomspace(k_min, k_max, points)
    return k, frequency_at(medium, k)
