"""Pinned physical constants and the reduction of (a, T) to dimensionless variables.

Everything downstream of :func:`reduce` works with :class:`DimensionlessState`
only, so this is the single place where SI quantities are converted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError

# CODATA 2018 exact/recommended values.
HBAR = 1.054571817e-34  # J s
C = 2.99792458e8  # m / s
K_B = 1.380649e-23  # J / K
ELEMENTARY_CHARGE = 1.602176634e-19  # C
E_OVER_HBAR = ELEMENTARY_CHARGE / HBAR  # rad/s per eV
HARTREE_EV = 27.21  # atomic unit of frequency as used for polarizability tables


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    c: float = C
    k_B: float = K_B
    electron_charge_over_hbar: float = E_OVER_HBAR


CONSTANTS = PhysicalConstants()


def ev_to_angular_frequency(energy_ev: float) -> float:
    """Angular frequency (rad/s) of a photon of ``energy_ev`` electronvolts."""
    if not energy_ev >= 0:
        raise DomainError(f"energy must be non-negative, got {energy_ev!r}")
    return energy_ev * E_OVER_HBAR


def plasma_frequency_from_wavelength(lambda_p: float) -> float:
    """omega_p = 2 pi c / lambda_p."""
    if not lambda_p > 0:
        raise DomainError(f"plasma wavelength must be positive, got {lambda_p!r}")
    return 2.0 * math.pi * C / lambda_p


def characteristic_frequency(a: float) -> float:
    """omega_c = c / (2a)."""
    return C / (2.0 * a)


def dimensionless_temperature(a: float, T: float) -> float:
    """tau = 4 pi a k_B T / (hbar c); the Matsubara frequencies are l * tau."""
    return 4.0 * math.pi * a * K_B * T / (HBAR * C)


@dataclass(frozen=True)
class DimensionlessState:
    """Reduced variables for one (separation, temperature, metal, atom) point.

    ``beta_A`` holds one entry per oscillator term and ``weights`` the matching
    ``c_n``; both are empty for a static-polarizability atom or a tabulated one.
    """

    a: float
    T: float
    omega_c: float
    tau: float
    beta_p: float
    beta_A: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    def zeta(self, l: int) -> float:
        return l * self.tau

    @property
    def sum_c_beta_sq(self) -> float:
        return math.fsum(c * b * b for c, b in zip(self.weights, self.beta_A))

    def with_ideal_metal(self) -> "DimensionlessState":
        return replace(self, beta_p=0.0)

    def with_static_atom(self) -> "DimensionlessState":
        return replace(self, beta_A=(), weights=())


def reduce(a: float, T: float, metal, atom) -> DimensionlessState:
    """Convert an SI point to :class:`DimensionlessState`.

    ``metal`` and ``atom`` are the models from :mod:`cpwall.materials`; only
    their characteristic frequencies are read here.
    """
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    if not T >= 0:
        raise DomainError(f"temperature must be non-negative, got {T!r}")
    omega_c = characteristic_frequency(a)
    omega_p = getattr(metal, "omega_p", None)
    beta_p = 0.0 if omega_p is None else omega_c / omega_p
    terms = atom.oscillator_terms()
    beta_A = tuple(omega_c / w0 for _, w0 in terms)
    weights = tuple(c for c, _ in terms)
    return DimensionlessState(
        a=a,
        T=T,
        omega_c=omega_c,
        tau=dimensionless_temperature(a, T),
        beta_p=beta_p,
        beta_A=beta_A,
        weights=weights,
    )
