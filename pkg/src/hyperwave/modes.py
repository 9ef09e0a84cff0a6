"""Mode parameters, the helicity spectrum and the map to physical units.

A separated mode is labelled by the energy, the two transverse momenta and
the helicity eigenvalue sigma; mass and the tetrad constant gamma are fixed
constants of the model.
"""
from __future__ import annotations

import cmath
import json
import math

import numpy as np
from dataclasses import asdict, dataclass, replace
from typing import Optional, Tuple

# gamma**2 == 1/2 is the only value for which the Pauli-level system closes
DEFAULT_GAMMA = 1.0 / math.sqrt(2.0)


class DegenerateMomentaError(ValueError):
    """Raised when a = b = 0, where x = i sqrt(a^2+b^2) e^z collapses to 0."""


@dataclass(frozen=True)
class ModeParameters:
    """Quantum numbers and constants of one separated mode (natural units).

    ``sigma`` may be left unset; :func:`hyperwave.solutions.resolve_sigma`
    then fills it from the chosen solution family.
    """

    E: float
    M: float
    a: float
    b: float
    gamma: float = DEFAULT_GAMMA
    sigma: Optional[complex] = None

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("mass M must be positive")

    @property
    def q(self) -> float:
        """sqrt(a^2 + b^2)."""
        return math.hypot(self.a, self.b)

    @property
    def two_em(self) -> float:
        return 2.0 * self.E * self.M

    @property
    def bound_like(self) -> bool:
        """E < 0: helicity eigenvalues become imaginary; allowed but flagged."""
        return self.E < 0

    def with_sigma(self, sigma: complex) -> "ModeParameters":
        return replace(self, sigma=complex(sigma))

    def symbol_values(self) -> dict:
        """Values keyed like the exact-ring symbols."""
        if self.sigma is None:
            raise ValueError("sigma is unset")
        return {"sigma": complex(self.sigma), "E": self.E, "M": self.M, "a": self.a, "b": self.b, "gamma": self.gamma}

    def to_dict(self) -> dict:
        d = asdict(self)
        s = d.pop("sigma")
        d["sigma"] = None if s is None else [complex(s).real, complex(s).imag]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ModeParameters":
        d = dict(d)
        s = d.pop("sigma", None)
        if isinstance(s, (list, tuple)):
            s = complex(s[0], s[1])
        return cls(sigma=s, **d)

    @classmethod
    def from_json(cls, text: str) -> "ModeParameters":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PhysicalUnits:
    """Dimensional data: curvature radius, constants and the physical mode."""

    rho: float
    hbar: float
    c: float
    epsilon_phys: float
    m_phys: float
    P1: float
    P2: float

    def __post_init__(self):
        for name in ("rho", "hbar", "c", "m_phys"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def with_rho(self, rho: float) -> "PhysicalUnits":
        return replace(self, rho=rho)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "PhysicalUnits":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "PhysicalUnits":
        return cls.from_dict(json.loads(text))


def sigma_values(E: float, M: float) -> Tuple[complex, complex]:
    """Nonzero helicity eigenvalues ``(+sqrt(2ME), -sqrt(2ME))``, principal root."""
    if not M > 0:
        raise ValueError("mass M must be positive")
    root = cmath.sqrt(2.0 * M * E)
    return root, -root


def to_x(params: ModeParameters, z):
    """x = i sqrt(a^2+b^2) e^z; accepts scalar or array ``z``."""
    q = params.q
    if q == 0:
        raise DegenerateMomentaError("a = b = 0 gives x = 0 for every z")
    out = 1j * q * np.exp(np.asarray(z, dtype=float))
    return complex(out) if np.ndim(out) == 0 else out


def to_dimensionless(u: PhysicalUnits, gamma: float = DEFAULT_GAMMA) -> ModeParameters:
    """E = eps rho/(hbar c), M = m c rho/hbar, a = P1 rho/hbar, b = P2 rho/hbar (sigma unset)."""
    return ModeParameters(
        E=u.epsilon_phys * u.rho / (u.hbar * u.c),
        M=u.m_phys * u.c * u.rho / u.hbar,
        a=u.P1 * u.rho / u.hbar,
        b=u.P2 * u.rho / u.hbar,
        gamma=gamma,
    )
