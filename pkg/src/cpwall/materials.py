"""Wall permittivity and atomic polarizability on the imaginary frequency axis."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .constants import HARTREE_EV, ev_to_angular_frequency
from .errors import ConfigurationError, DomainError, IngestionError

# ---------------------------------------------------------------------------
# metals


@dataclass(frozen=True)
class Ideal:
    """Perfect conductor; epsilon is infinite at every frequency."""

    omega_p = None

    def permittivity(self, xi):
        _check_xi(xi)
        return np.full_like(np.asarray(xi, dtype=float), math.inf) if np.ndim(xi) else math.inf


@dataclass(frozen=True)
class Plasma:
    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError(f"omega_p must be positive, got {self.omega_p!r}")

    def permittivity(self, xi):
        """1 + omega_p^2 / xi^2, infinite at xi = 0."""
        _check_xi(xi)
        with np.errstate(divide="ignore"):
            return 1.0 + np.divide(self.omega_p**2, np.square(xi, dtype=float))


@dataclass(frozen=True)
class Drude:
    omega_p: float
    gamma: float
    max_gamma_ratio: float = 0.1

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError(f"omega_p must be positive, got {self.omega_p!r}")
        if not 0 < self.gamma < self.max_gamma_ratio * self.omega_p:
            raise DomainError(
                f"Drude relaxation must satisfy 0 < gamma < {self.max_gamma_ratio} omega_p"
            )

    def permittivity(self, xi):
        """1 + omega_p^2 / (xi (xi + gamma)), infinite at xi = 0."""
        _check_xi(xi)
        xi = np.asarray(xi, dtype=float)
        with np.errstate(divide="ignore"):
            eps = 1.0 + np.divide(self.omega_p**2, xi * (xi + self.gamma))
        return float(eps) if eps.ndim == 0 else eps


def permittivity_at(metal, xi):
    return metal.permittivity(xi)


def _check_xi(xi):
    if np.any(np.asarray(xi) < 0):
        raise DomainError("frequency must be non-negative")


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class Static:
    """Frequency-independent polarizability."""

    alpha0: float | None = None

    def ratio(self, xi):
        _check_xi(xi)
        return np.ones_like(np.asarray(xi, dtype=float)) if np.ndim(xi) else 1.0

    def oscillator_terms(self):
        return ()


@dataclass(frozen=True)
class MultiOscillator:
    """alpha(i xi) / alpha(0) = sum_n c_n / (1 + xi^2 / omega_0n^2)."""

    terms: tuple[tuple[float, float], ...]
    alpha0: float | None = None

    def __post_init__(self):
        terms = tuple((float(c), float(w)) for c, w in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise DomainError("at least one oscillator term is required")
        if any(c <= 0 or w <= 0 for c, w in terms):
            raise DomainError("oscillator weights and frequencies must be positive")
        total = math.fsum(c for c, _ in terms)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"oscillator weights must sum to 1, got {total!r}")

    def ratio(self, xi):
        _check_xi(xi)
        xi = np.asarray(xi, dtype=float)
        out = sum(c / (1.0 + (xi / w) ** 2) for c, w in self.terms)
        return float(out) if out.ndim == 0 else out

    def oscillator_terms(self):
        return self.terms


class SingleOscillator(MultiOscillator):
    def __init__(self, omega0, alpha0=None):
        super().__init__(terms=((1.0, omega0),), alpha0=alpha0)

    @property
    def omega0(self):
        return self.terms[0][1]

    def __repr__(self):
        return f"SingleOscillator(omega0={self.omega0!r}, alpha0={self.alpha0!r})"


@dataclass(frozen=True)
class Tabulated:
    """Polarizability ratio sampled on a frequency grid (rad/s).

    Interpolates 1/ratio monotonically in xi^2, which is exact for a
    single-oscillator dataset.  Past the last grid point 1/ratio is continued
    linearly in xi^2 with the slope of the last two points, i.e. an
    ``(omega_eff / xi)^2`` tail.
    """

    xi: tuple[float, ...]
    alpha_ratio: tuple[float, ...]
    alpha0: float | None = None
    _interp: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        r = np.asarray(self.alpha_ratio, dtype=float)
        if xi.size == 0:
            raise ConfigurationError("tabulated polarizability has an empty grid")
        if xi.shape != r.shape:
            raise DomainError("grid and ratio columns differ in length")
        if xi[0] != 0.0:
            xi = np.concatenate(([0.0], xi))
            r = np.concatenate(([1.0], r))
        if np.any(np.diff(xi) <= 0):
            raise DomainError("frequency grid must be strictly increasing")
        if abs(r[0] - 1.0) > 1e-6:
            raise DomainError("alpha ratio at zero frequency must be 1")
        r[0] = 1.0
        if np.any(r <= 0) or np.any(np.diff(r) > 0):
            raise DomainError("alpha ratio must be positive and non-increasing")
        object.__setattr__(self, "xi", tuple(xi))
        object.__setattr__(self, "alpha_ratio", tuple(r))
        s = xi**2
        g = 1.0 / r
        if xi.size >= 2:
            interp = PchipInterpolator(s, g, extrapolate=False)
            slope = (g[-1] - g[-2]) / (s[-1] - s[-2])
        else:
            interp = None
            slope = 0.0
        object.__setattr__(self, "_interp", (interp, s[-1], g[-1], slope))

    @property
    def omega_eff(self):
        slope = self._interp[3]
        return math.inf if slope <= 0 else 1.0 / math.sqrt(slope)

    def ratio(self, xi):
        _check_xi(xi)
        interp, s_last, g_last, slope = self._interp
        s = np.square(np.asarray(xi, dtype=float))
        inside = s <= s_last
        g = np.empty_like(s)
        if interp is not None:
            g[inside] = interp(s[inside])
        else:
            g[inside] = g_last
        g[~inside] = g_last + slope * (s[~inside] - s_last)
        out = 1.0 / g
        return float(out) if out.ndim == 0 else out

    def oscillator_terms(self):
        return ()


def polarizability_ratio_at(atom, xi):
    return atom.ratio(xi)


def load_polarizability_table(source, alpha0=None):
    """Read a two-column table (frequency in atomic units, alpha(i xi)/alpha(0)).

    ``source`` is a text stream, a path, or a string holding the file contents.
    Blank lines and lines starting with ``#`` are ignored.
    """
    if isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("#"):
        try:
            with open(source, encoding="utf-8") as fh:
                return load_polarizability_table(fh, alpha0)
        except FileNotFoundError:
            source = io.StringIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    elif hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return load_polarizability_table(fh, alpha0)

    au = ev_to_angular_frequency(HARTREE_EV)
    xi, ratio = [], []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise IngestionError("expected two columns", lineno)
        try:
            f, r = float(parts[0]), float(parts[1])
        except ValueError:
            raise IngestionError(f"cannot parse {line!r}", lineno) from None
        if not (math.isfinite(f) and math.isfinite(r)) or f < 0:
            raise IngestionError(f"invalid values {line!r}", lineno)
        if xi and f * au <= xi[-1]:
            raise IngestionError("frequency column must be strictly increasing", lineno)
        if f == 0 and abs(r - 1.0) > 1e-6:
            raise IngestionError("ratio at zero frequency must be 1", lineno)
        if f > 0 and r > 1.0 + 1e-6:
            raise IngestionError("normalized polarizability exceeds 1", lineno)
        if r <= 0:
            raise IngestionError("normalized polarizability must be positive", lineno)
        if ratio and r > ratio[-1] + 1e-12:
            raise IngestionError("normalized polarizability must be non-increasing", lineno)
        xi.append(f * au)
        ratio.append(min(r, ratio[-1]) if ratio else min(r, 1.0))
    if not xi:
        raise IngestionError("no data rows found")
    return Tabulated(xi=tuple(xi), alpha_ratio=tuple(ratio), alpha0=alpha0)


# ---------------------------------------------------------------------------
# registry

# Frequencies in rad/s as quoted alongside the eV values for the Au wall and
# the He*, Na and Cs single-oscillator fits.
_PRESETS_RAD_S = {"au": 1.37e16, "he-star": 1.794e15, "na": 3.25e15, "cs": 2.36e15}
_PRESETS_EV = {"au": 9.0, "he-star": 1.18, "na": 2.14, "cs": 1.55}

ALIASES = {"he*": "he-star", "he": "he-star", "hestar": "he-star", "gold": "au"}


def registry(convention="rad/s"):
    """Named presets: the Au plasma wall and single-oscillator He*, Na, Cs.

    ``convention="ev"`` converts the quoted eV energies with the pinned
    constants instead of using the quoted rad/s values; the two differ by up
    to 0.4%.
    """
    if convention == "rad/s":
        freqs = dict(_PRESETS_RAD_S)
    elif convention == "ev":
        freqs = {k: ev_to_angular_frequency(v) for k, v in _PRESETS_EV.items()}
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return {
        "au": Plasma(freqs["au"]),
        "he-star": SingleOscillator(freqs["he-star"]),
        "na": SingleOscillator(freqs["na"]),
        "cs": SingleOscillator(freqs["cs"]),
    }


def lookup(name, convention="rad/s"):
    key = ALIASES.get(name.lower(), name.lower())
    presets = registry(convention)
    if key not in presets:
        raise KeyError(name)
    return presets[key]
