"""Gaussian momentum-space meter wavepacket and the squeezed-width mapping.

Natural units with hbar = 1; momenta, widths and the accumulated coupling gt
all share one arbitrary unit, so only ratios such as gt/sigma are physical.
The meter only ever evolves by the exact momentum translation |p> -> |p -+ gt|,
so no position-space representation is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MeterConfigError(ValueError):
    """Raised for contradictory or non-physical meter parameters."""


@dataclass(frozen=True)
class MeterProfile:
    """Momentum wavepacket phi(p) = (2 pi sigma^2)^(-1/4) exp(-(p-p0)^2 / 4 sigma^2)."""

    p0: float = 0.0
    sigma: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma <= 0.0:
            raise MeterConfigError(f"sigma={self.sigma} must be positive and finite")

    def to_dict(self) -> dict:
        return {"p0": self.p0, "sigma": self.sigma}


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezed-vacuum parameter r >= 0; r = 0 is the coherent-state width."""

    r: float

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0.0:
            raise MeterConfigError(f"squeezing parameter r={self.r} must be >= 0")


def sigma_from_squeeze(spec: SqueezeSpec) -> float:
    """Momentum spread of a squeezed vacuum meter: sigma^2 = e^{2r}/4."""
    return np.exp(spec.r) / 2.0


def meter_from_squeeze(r: float, p0: float = 0.0) -> MeterProfile:
    return MeterProfile(p0=p0, sigma=sigma_from_squeeze(SqueezeSpec(r)))


def meter_from_dict(data: dict) -> MeterProfile:
    """Build a meter from {"p0":..., "sigma":...} or {"p0":..., "r":...}.

    The two width keys are mutually exclusive; supplying both (or neither)
    is a configuration error.
    """
    has_sigma = "sigma" in data
    has_r = "r" in data
    if has_sigma == has_r:
        raise MeterConfigError("meter spec needs exactly one of 'sigma' or 'r'")
    p0 = float(data.get("p0", 0.0))
    if has_sigma:
        return MeterProfile(p0=p0, sigma=float(data["sigma"]))
    return meter_from_squeeze(float(data["r"]), p0=p0)


def wavefunction(m: MeterProfile, p) -> np.ndarray:
    """Real momentum amplitude of the Gaussian wavepacket at p (scalar or array)."""
    p = np.asarray(p, dtype=float)
    norm = (2.0 * np.pi * m.sigma**2) ** (-0.25)
    return norm * np.exp(-((p - m.p0) ** 2) / (4.0 * m.sigma**2))
