"""Closed-form large- and short-separation correction factors and branch selection.

Large separations use an expansion to second order in beta_p and beta_A at any
temperature.  Short separations use a zero-temperature resummation in the
oscillator parameter beta_A, written through upper incomplete gamma functions
and 1F1(1, b; 1/beta_A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import exp1

from . import special
from .constants import DimensionlessState, reduce
from .errors import DomainError, OutOfRegimeError, SeriesError, UnsupportedModelError
from .lifshitz import CorrectionResult, _attach
from .materials import Tabulated, registry

LARGE_VALIDITY_MIN_A = 0.5e-6
HIGH_T_TAU = 20.0

# Eulerian polynomials: sum_l l^i q^l = q A_i(q) / (1 - q)^(i+1)
_EULERIAN = ((1,), (1,), (1, 1), (1, 4, 1), (1, 11, 11, 1), (1, 26, 66, 26, 1))


# ---------------------------------------------------------------------------
# temperature functions


@dataclass(frozen=True)
class TempFunctions:
    tau: float
    s: tuple[float, ...]

    def __getattr__(self, name):
        if len(name) == 2 and name[0] == "s" and name[1].isdigit():
            return self.s[int(name[1])]
        raise AttributeError(name)

    def g(self, i: int) -> float:
        return g_function(i, self.tau)

    @property
    def g4(self):
        return self.g(4)

    @property
    def g6(self):
        return self.g(6)


def s_function(i: int, tau: float) -> float:
    """s_i = tau^i sum_{l>=1} l^i exp(-tau l), for 0 <= i <= 5."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    q = math.exp(-tau)
    one_minus_q = -math.expm1(-tau)
    poly = sum(c * q**j for j, c in enumerate(_EULERIAN[i]))
    return tau**i * q * poly / one_minus_q ** (i + 1)


def g_function(i: int, tau: float, rtol: float = 1e-16) -> float:
    """g_i = tau^i sum_{l>=1} l^i Gamma(0, tau l)."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    if i < 0:
        raise DomainError("g_i is defined for i >= 0")
    total = 0.0
    start = 1
    chunk = 4096
    while True:
        l = np.arange(start, start + chunk, dtype=float)
        terms = l**i * exp1(tau * l)
        total += math.fsum(terms)
        last = terms[-1]
        if last == 0.0 or (tau * l[-1] > i + 1 and last < rtol * total):
            break
        start += chunk
    return tau**i * total


def temp_functions(tau: float) -> TempFunctions:
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return TempFunctions(tau=tau, s=tuple(s_function(i, tau) for i in range(6)))


# ---------------------------------------------------------------------------
# large separations


def _require_oscillator(atom):
    if isinstance(atom, Tabulated):
        raise UnsupportedModelError("closed-form asymptotics need an oscillator-form atom")


def _large(state: DimensionlessState, force: bool) -> float:
    if state.tau >= HIGH_T_TAU:
        # high-temperature forms; the s_i, g_i corrections are below 1e-5
        return state.tau / (8.0 if force else 6.0)
    bp = state.beta_p
    sb2 = state.sum_c_beta_sq
    if state.tau == 0:
        # tau -> 0 limits: tau s_i -> i!, tau g_i -> i! / (i + 1)
        s = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0]
        g4, g6 = 24.0 / 5.0, 720.0 / 7.0
        tau = 1.0
        lead = 0.0
    else:
        tf = temp_functions(state.tau)
        s = list(tf.s)
        tau = state.tau
        g4 = tf.g4 if bp else 0.0
        g6 = tf.g6 if bp else 0.0
        lead = 1.0
    s0, s1, s2, s3, s4, s5 = s
    if not force:
        bracket = (
            lead + 2 * s0 + 2 * s1 + s2
            - (3 * s2 + 3 * s3 - g4) * bp
            + (2 * s2 + 2 * s3 + 3 * s4 - s5 + g6) * bp**2
            - (2 * s2 + 2 * s3 + s4) * sb2
        )
        return tau / 6.0 * bracket
    bracket = (
        3 * lead + 6 * s0 + 6 * s1 + 3 * s2 + s3
        - 2 * (3 * s2 + 3 * s3 + s4) * bp
        + (6 * s2 + 6 * s3 + 5 * s4 + 3 * s5 - g6) * bp**2
        - (6 * s2 + 6 * s3 + 3 * s4 + s5) * sb2
    )
    return tau / 24.0 * bracket


def eta_large(state: DimensionlessState, metal=None, atom=None) -> float:
    """Large-separation free-energy factor, second order in beta_p and beta_A."""
    _require_oscillator(atom)
    return _large(state, force=False)


def kappa_large(state: DimensionlessState, metal=None, atom=None) -> float:
    """Large-separation force factor, second order in beta_p and beta_A."""
    _require_oscillator(atom)
    return _large(state, force=True)


def large_validity(state: DimensionlessState) -> str:
    return "ok" if state.a >= LARGE_VALIDITY_MIN_A else "large-branch-below-0.5um"


# ---------------------------------------------------------------------------
# short separations


@dataclass(frozen=True)
class SeriesTerm:
    value: float
    error: float
    n_terms: int
    which: int
    beta_A: float
    force: bool = False


class _Scaled:
    """Gamma and 1F1 factors at x = 1/beta, with the force substitutions optionally applied.

    ``gamma(d, m)`` returns beta^(-m) Gamma(d, x) and ``hyp(c, m)`` returns
    beta^(-m) exp(-x) 1F1(1, c; x); both combine exponents in log space.
    """

    def __init__(self, beta, force):
        self.beta = beta
        self.x = 1.0 / beta
        self.log_x = -math.log(beta)
        self.force = force

    def gamma(self, d, m=0):
        if self.force:
            d += 1
        g = special.inc_gamma_upper_scaled(d, self.x)
        return math.exp(m * self.log_x - self.x + math.log(g))

    def hyp(self, c, m=0):
        coef = 1.0
        if self.force:
            coef = (c - 1) / c * self.x
            c += 1
        return coef * math.exp(m * self.log_x + math.log(special.hyp1f1_one_scaled(c, self.x)))


# (start index, term(k, scaled)) for each series; term includes the (-1)^k sign
_SERIES = {
    1: (0, lambda k, s: (-1) ** k / ((2 * k + 1) * (2 * k + 4)) * s.hyp(2 * k + 5)),
    2: (0, lambda k, s: (-1) ** k / (2 * k + 1) * s.gamma(2 - 2 * k, 2 * k + 2)),
    3: (1, lambda k, s: (-1) ** k * (k + 2) / ((2 * k + 1) * (2 * k + 3) ** 2) * s.hyp(2 * k + 4)),
    4: (1, lambda k, s: (-1) ** k * k / ((2 * k + 1) * (2 * k + 3)) * s.gamma(-2 * k - 1, 2 * k + 6)),
    5: (1, lambda k, s: (-1) ** k * (4 * k * k + 16 * k + 11)
        / ((k + 2) * (2 * k + 1) * (2 * k + 3) * (2 * k + 5)) * s.hyp(2 * k + 5)),
    6: (0, lambda k, s: (-1) ** k * (8 * k * k + 16 * k - 2)
        / ((2 * k + 1) * (2 * k + 3) * (2 * k + 5)) * s.gamma(-2 * k - 2, 2 * k + 8)),
}

# Orders of the incomplete gamma reach -2k - 2 (one higher for the force), so
# the term count is capped to stay within special.MAX_ORDER.
_MAX_SERIES_TERMS = 30


def _check_beta(beta_A):
    if not beta_A > 0:
        raise DomainError(f"beta_A must be positive, got {beta_A!r}")
    if beta_A >= 1:
        raise OutOfRegimeError(f"short-separation series need beta_A < 1, got {beta_A!r}")


def sigma_series(beta_A: float, which: int, force: bool = False,
                 rtol: float = special.DEFAULT_RTOL) -> SeriesTerm:
    """Sigma_1 ... Sigma_6 at beta_A, optionally with the force substitutions applied.

    The Gamma-type series (2, 4, 6) carry their beta^(-m) factors; the
    1F1-type series (1, 3, 5) are returned with exp(-1/beta) included but
    without their outer beta powers.
    """
    _check_beta(beta_A)
    if which not in _SERIES:
        raise DomainError(f"series index must be 1..6, got {which!r}")
    start, term = _SERIES[which]
    s = _Scaled(beta_A, force)
    value, err, n = special.alternating_sum(
        lambda k: term(k, s), start=start, rtol=rtol, max_terms=_MAX_SERIES_TERMS
    )
    return SeriesTerm(value=value, error=err, n_terms=n, which=which, beta_A=beta_A, force=force)


def short_bracket(beta_A: float, force: bool = False):
    """The beta_p^0, beta_p^1, beta_p^2 coefficients for one oscillator term."""
    _check_beta(beta_A)
    s = _Scaled(beta_A, force)
    sig = {i: sigma_series(beta_A, i, force).value for i in _SERIES}
    half_pi = 0.5 * math.pi
    inv = 1.0 / beta_A
    b0 = inv**4 * sig[1] + half_pi * s.gamma(3, 1) - sig[2]
    b1 = (
        4 * inv**5 * sig[3]
        + half_pi * (s.gamma(0, 5) + 3 * s.gamma(2, 3))
        - 4 * s.gamma(1, 4)
        - 8.0 / 3.0 * s.gamma(3, 2)
        + 4 * sig[4]
    )
    b2 = (
        -(inv**6) * sig[5]
        - 10.0 / 3.0 * s.gamma(0, 6)
        - 2.0 / 3.0 * s.gamma(2, 4)
        + 22.0 / 15.0 * s.gamma(4, 2)
        + half_pi * (2 * s.gamma(1, 5) + s.gamma(-1, 7) - s.gamma(3, 3))
        + sig[6]
    )
    return b0, b1, b2


def static_bracket(force: bool = False):
    """beta_A -> 0 limit of :func:`short_bracket`.

    Each coefficient is a combination of Gamma(p + 2q + 2) / (2q + 1).
    """
    p = 1 if force else 0

    def A(pp, q):
        return math.gamma(pp + p + 2 * q + 2) / (2 * q + 1)

    return A(2, 0), A(-1, 2) - 3 * A(1, 1), 2 * A(0, 2) - A(-2, 3) + A(2, 1)


def _short(state: DimensionlessState, force: bool) -> float:
    bp = state.beta_p
    if state.weights:
        total = 0.0
        for c, b in zip(state.weights, state.beta_A):
            b0, b1, b2 = short_bracket(b, force)
            total += c * (b0 + b1 * bp + b2 * bp * bp)
    else:
        b0, b1, b2 = static_bracket(force)
        total = b0 + b1 * bp + b2 * bp * bp
    return total / (24.0 if force else 6.0)


def eta_short(state: DimensionlessState, metal=None, atom=None) -> float:
    """Zero-temperature short-separation free-energy factor."""
    _require_oscillator(atom)
    return _short(state, force=False)


def kappa_short(state: DimensionlessState, metal=None, atom=None) -> float:
    """Zero-temperature short-separation force factor."""
    _require_oscillator(atom)
    return _short(state, force=True)


# ---------------------------------------------------------------------------
# beta_p-expanded Matsubara form (a third evaluation path, used for cross-checks)


def _expanded_y_integral(zeta, force):
    """int_zeta^inf e^-y y^m [y^2 + (z^4/y - 3 z^2 y) bp + (2 z^4 - z^6/y^2 + z^2 y^2) bp^2] dy.

    Returns the coefficients of bp^0, bp^1, bp^2.
    """
    m = 1 if force else 0
    if zeta == 0:
        return math.factorial(2 + m), 0.0, 0.0

    def G(n):
        return special.inc_gamma_upper(n + m + 1, zeta)

    z2 = zeta * zeta
    c0 = G(2)
    c1 = z2 * z2 * G(-1) - 3 * z2 * G(1)
    c2 = 2 * z2 * z2 * G(0) - z2**3 * G(-2) + z2 * G(2)
    return c0, c1, c2


def expanded_factor(state: DimensionlessState, force: bool = False, rtol: float = 1e-13,
                    linearize_ratio: bool = False) -> float:
    """Correction factor from the beta_p-expanded integrand.

    At T > 0 this is a Matsubara sum; at T = 0 a quadrature over zeta.  With
    ``linearize_ratio`` the polarizability ratio is replaced by
    1 - sum_n c_n beta_n^2 zeta^2, its second-order expansion.
    """
    bp = state.beta_p

    def ratio(zeta):
        if not state.weights:
            return 1.0
        if linearize_ratio:
            return 1.0 - state.sum_c_beta_sq * zeta * zeta
        return sum(c / (1.0 + (b * zeta) ** 2) for c, b in zip(state.weights, state.beta_A))

    def f(zeta):
        c0, c1, c2 = _expanded_y_integral(zeta, force)
        return ratio(zeta) * (c0 + c1 * bp + c2 * bp * bp)

    pref = 1.0 / (24.0 if force else 6.0)
    if state.T == 0:
        val, _ = integrate.quad(f, 0, math.inf, epsabs=0, epsrel=rtol, limit=400)
        return pref * val
    tau = state.tau
    total = 0.5 * f(0.0)
    l = 1
    small = 0
    while small < 3:
        t = f(l * tau)
        total += t
        small = small + 1 if abs(t) < 1e-16 * abs(total) else 0
        l += 1
    return pref * tau * total


# ---------------------------------------------------------------------------
# branch selection


# Joining points (m) for the registry atoms: (energy, force).
DEFAULT_JOINING = {
    "he-star": (1.3e-6, 1.5e-6),
    "na": (1.0e-6, 1.2e-6),
    "cs": (1.1e-6, 1.4e-6),
}


@dataclass(frozen=True)
class CrossoverPolicy:
    """``mode="default"`` uses the per-atom joining points when the atom matches a
    registry preset and falls back to ``"auto"`` otherwise; ``"auto"`` takes the
    argmin of |short - large| on a log grid; ``joining`` overrides both."""

    mode: str = "default"
    joining: tuple[float, float] | None = None
    grid: tuple[float, float, int] = (0.5e-6, 1.5e-6, 41)
    convention: str = "rad/s"


_AUTO_CACHE: dict = {}


def auto_joining(metal, atom, T, grid=(0.5e-6, 1.5e-6, 41)):
    """Separations (energy, force) minimizing |short - large| over a log grid."""
    key = (repr(metal), tuple(atom.oscillator_terms()), T, grid)
    if key in _AUTO_CACHE:
        return _AUTO_CACHE[key]
    a_grid = np.geomspace(grid[0], grid[1], grid[2])
    diffs = {0: [], 1: []}
    for a in a_grid:
        st = reduce(a, T, metal, atom)
        for force in (0, 1):
            try:
                d = abs(_short(st, bool(force)) - _large(st, bool(force)))
            except (OutOfRegimeError, SeriesError):
                d = math.inf
            diffs[force].append(d)
    out = tuple(float(a_grid[int(np.argmin(diffs[f]))]) for f in (0, 1))
    _AUTO_CACHE[key] = out
    return out


def _default_joining(metal, atom, policy):
    if policy.joining is not None:
        return policy.joining
    if policy.mode == "default":
        for name, preset in registry(policy.convention).items():
            if name in DEFAULT_JOINING and preset.oscillator_terms() == atom.oscillator_terms():
                return DEFAULT_JOINING[name]
    elif policy.mode != "auto":
        raise ValueError(f"unknown crossover mode {policy.mode!r}")
    return None


def crossover_select(state, metal, atom, policy: CrossoverPolicy = CrossoverPolicy(), alpha0=None):
    """Pick the short or large branch per quantity and return a :class:`CorrectionResult`."""
    _require_oscillator(atom)
    if not atom.oscillator_terms():
        raise UnsupportedModelError("branch selection needs an oscillator-form atom")
    joining = _default_joining(metal, atom, policy)
    if joining is None:
        joining = auto_joining(metal, atom, state.T, policy.grid)
    values = {}
    methods = []
    for force, a_join in zip((False, True), joining):
        if state.a < a_join:
            values[force] = _short(state, force)
            methods.append("asympt_short")
        else:
            values[force] = _large(state, force)
            methods.append("high_T" if state.tau >= HIGH_T_TAU else "asympt_large")
    method = methods[0] if methods[0] == methods[1] else "/".join(methods)
    validity = "ok"
    if "asympt_large" in methods and large_validity(state) != "ok":
        validity = large_validity(state)
    result = CorrectionResult(
        eta=values[False],
        kappa=values[True],
        method=method,
        validity=validity,
        branch_values={"joining_eta": joining[0], "joining_kappa": joining[1]},
    )
    return _attach(result, state.a, alpha0)


def asymptotic_result(state, metal, atom, branch, alpha0=None):
    """Evaluate one named branch (``"short"`` or ``"large"``) for both quantities."""
    _require_oscillator(atom)
    if branch == "short":
        res = CorrectionResult(_short(state, False), _short(state, True), "asympt_short")
    elif branch == "large":
        tag = "high_T" if state.tau >= HIGH_T_TAU else "asympt_large"
        res = CorrectionResult(_large(state, False), _large(state, True), tag,
                               validity=large_validity(state))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return _attach(res, state.a, alpha0)


__all__ = [
    "TempFunctions", "SeriesTerm", "CrossoverPolicy", "DEFAULT_JOINING",
    "s_function", "g_function", "temp_functions",
    "eta_large", "kappa_large", "large_validity",
    "sigma_series", "short_bracket", "static_bracket", "eta_short", "kappa_short",
    "expanded_factor", "auto_joining", "crossover_select", "asymptotic_result",
]
