"""Repulsive pair potentials.

Every admissible potential is strictly positive and strictly decreasing for
r > 0, diverges at contact and vanishes at infinite separation. Those limits
are what force a colliding asset to zero originality and a remote asset to a
large one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError

FAMILIES = ("coulomb", "screened", "power")


@dataclass(frozen=True)
class PotentialSpec:
    """Pair-potential family plus its parameter.

    coulomb   u(r) = 1/r
    screened  u(r) = exp(-alpha*r)/r   (alpha >= 0; alpha = 0 is coulomb)
    power     u(r) = r**(-n)           (integer n >= 2)
    """

    family: str = "coulomb"
    alpha: float = 0.0
    n: int = 2

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown potential family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.family == "screened" and not (
            np.isfinite(self.alpha) and self.alpha >= 0.0
        ):
            raise ValueError("screening rate alpha must be finite and >= 0")
        if self.family == "power" and (int(self.n) != self.n or self.n < 2):
            raise ValueError("power-law exponent n must be an integer >= 2")

    @classmethod
    def coulomb(cls) -> "PotentialSpec":
        return cls("coulomb")

    @classmethod
    def screened(cls, alpha: float) -> "PotentialSpec":
        return cls("screened", alpha=float(alpha))

    @classmethod
    def power(cls, n: int) -> "PotentialSpec":
        return cls("power", n=int(n))

    def label(self) -> str:
        """CLI-style spelling, parseable by parse_potential."""
        if self.family == "screened":
            return f"screened:{self.alpha:g}"
        if self.family == "power":
            return f"power:{self.n}"
        return "coulomb"


COULOMB = PotentialSpec.coulomb()


def parse_potential(text: str) -> PotentialSpec:
    """Parse 'coulomb', 'screened:ALPHA' or 'power:N'."""
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    if name == "coulomb":
        if arg:
            raise ValueError("coulomb takes no parameter")
        return PotentialSpec.coulomb()
    if name == "screened":
        if not arg:
            raise ValueError("screened needs a rate, e.g. screened:0.5")
        return PotentialSpec.screened(float(arg))
    if name == "power":
        if not arg:
            raise ValueError("power needs an exponent, e.g. power:2")
        return PotentialSpec.power(int(arg))
    raise ValueError(f"unknown potential {text!r}; expected coulomb, screened:ALPHA or power:N")


def potential_values(spec: PotentialSpec, r) -> np.ndarray:
    """Vectorized u(r). Zero distances map to +inf, the collision sentinel."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        if spec.family == "coulomb":
            return 1.0 / r
        if spec.family == "screened":
            return np.exp(-spec.alpha * r) / r
        return r ** float(-spec.n)


def eval_pair_potential(spec: PotentialSpec, r: float) -> float:
    """u(r) for a single pair; r must be strictly positive."""
    if not r > 0:
        raise DegenerateInputError("potential undefined at collision")
    return float(potential_values(spec, r))
