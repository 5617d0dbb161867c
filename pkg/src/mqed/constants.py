"""Physical constants in the two supported unit systems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysicalConstants:
    """Vacuum constants; ``mu0`` and ``Z0`` are derived from ``c`` and ``eps0``."""

    c: float
    eps0: float
    hbar: float
    name: str = "custom"
    mu0: float = field(init=False)
    Z0: float = field(init=False)

    def __post_init__(self):
        for label in ("c", "eps0", "hbar"):
            value = getattr(self, label)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{label} must be finite and positive, got {value!r}")
        mu0 = 1.0 / (self.eps0 * self.c**2)
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "Z0", math.sqrt(mu0 / self.eps0))


SCALED = PhysicalConstants(c=1.0, eps0=1.0, hbar=1.0, name="scaled")

# CODATA 2018 exact/recommended values
SI = PhysicalConstants(
    c=299_792_458.0,
    eps0=8.8541878128e-12,
    hbar=1.054571817e-34,
    name="si",
)


def get_constants(units: str) -> PhysicalConstants:
    try:
        return {"scaled": SCALED, "si": SI}[units]
    except KeyError:
        raise ValueError(f"unknown unit system {units!r}; expected 'scaled' or 'si'") from None
