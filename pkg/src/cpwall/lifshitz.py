"""Direct evaluation of the atom-wall free energy and force from the Lifshitz formula.

The free energy of an atom at distance ``a`` from a wall is written as

    F(a, T) = eta(a, T) * E0(a),   E0 = -3 hbar c alpha(0) / (8 pi a^4)

with an analogous ``kappa`` for the force.  In reduced variables (zeta = xi / omega_c,
y = 2 a q) both factors are Matsubara sums of semi-infinite y-integrals,

    eta   = (tau / 12) sum'_l ratio(zeta_l) I_0(zeta_l)
    kappa = (tau / 48) sum'_l ratio(zeta_l) I_1(zeta_l)
    I_m(zeta) = int_zeta^inf dy e^-y y^m [2 y^2 r_par + zeta^2 (r_perp - r_par)]

where the prime gives the l = 0 term weight 1/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .constants import C, HBAR, K_B, DimensionlessState
from .errors import ConfigurationError, DomainError, NumericalError, TruncationError

_LAG_X, _LAG_W = np.polynomial.laguerre.laggauss(60)
_LAG_X_CHECK, _LAG_W_CHECK = np.polynomial.laguerre.laggauss(44)
_CHUNK = 256


@dataclass(frozen=True)
class ComputeConfig:
    quad_rel_tol: float = 1e-10
    matsubara_rel_tol: float = 1e-10
    matsubara_max_terms: int = 1_000_000
    zero_T_xi_rel_tol: float = 1e-10

    def __post_init__(self):
        for name in ("quad_rel_tol", "matsubara_rel_tol", "zero_T_xi_rel_tol"):
            v = getattr(self, name)
            if not 0 < v <= 1e-3:
                raise ConfigurationError(f"{name} must lie in (0, 1e-3], got {v!r}")
        if self.matsubara_max_terms < 1:
            raise ConfigurationError("matsubara_max_terms must be at least 1")


DEFAULT_CONFIG = ComputeConfig()


@dataclass(frozen=True)
class CorrectionResult:
    eta: float
    kappa: float
    method: str
    energy: float | None = None
    force: float | None = None
    truncation_report: tuple[int, float] = (0, 0.0)
    validity: str = "ok"
    branch_values: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------------------
# reflection coefficients


def reflection_coefficients(eps, zeta, y, inv_beta_p_sq=math.inf):
    """Fresnel coefficients of the wall in reduced variables.

    ``eps`` may be ``math.inf``.  At ``zeta == 0`` the product zeta^2 (eps - 1)
    is replaced by its limit ``inv_beta_p_sq``: (omega_p / omega_c)^2 for the
    plasma model, 0 for Drude, inf for an ideal metal.
    """
    y = np.asarray(y, dtype=float)
    if zeta < 0 or np.any(y < zeta) or np.any(y <= 0):
        raise DomainError("reflection coefficients need y >= zeta >= 0 and y > 0")
    if zeta == 0:
        if math.isinf(inv_beta_p_sq):
            return np.ones_like(y), np.ones_like(y)
        s = np.sqrt(y * y + inv_beta_p_sq)
        return np.ones_like(y), (s - y) / (s + y)
    if math.isinf(eps):
        return np.ones_like(y), np.ones_like(y)
    s = np.sqrt(y * y + zeta * zeta * (eps - 1.0))
    return (eps * y - s) / (eps * y + s), (s - y) / (s + y)


def _y_integrals(metal, zetas, omega_c, nodes, weights):
    """I_0 and I_1 (see module docstring) for an array of zeta values, via Gauss-Laguerre."""
    zetas = np.asarray(zetas, dtype=float)
    y = zetas[:, None] + nodes[None, :]
    z2 = (zetas * zetas)[:, None]
    eps = np.asarray(metal.permittivity(zetas * omega_c), dtype=float)
    r_par = np.ones_like(y)
    r_perp = np.ones_like(y)
    finite = np.isfinite(eps) & (zetas > 0)
    if np.any(finite):
        e = eps[finite][:, None]
        yy = y[finite]
        s = np.sqrt(yy * yy + z2[finite] * (e - 1.0))
        r_par[finite] = (e * yy - s) / (e * yy + s)
        r_perp[finite] = (s - yy) / (s + yy)
    # zeta = 0: r_perp is multiplied by zeta^2 and drops out; r_par = 1 in every model
    f = 2.0 * y * y * r_par + z2 * (r_perp - r_par)
    damp = np.exp(-zetas)
    return damp * (f @ weights), damp * ((y * f) @ weights)


def _y_integrals_adaptive(metal, zeta, omega_c, tol):
    eps = float(metal.permittivity(zeta * omega_c)) if zeta > 0 else math.inf

    def f(u, m):
        y = zeta + u
        rp, rs = reflection_coefficients(eps, zeta, y) if zeta > 0 else (1.0, 1.0)
        return math.exp(-u) * y**m * (2 * y * y * rp + zeta * zeta * (rs - rp))

    out = []
    for m in (0, 1):
        val, err = integrate.quad(f, 0, math.inf, args=(m,), epsabs=0, epsrel=tol, limit=200)
        out.append((math.exp(-zeta) * val, math.exp(-zeta) * err))
    return out


def _integrals(metal, zetas, omega_c, cfg):
    """y-integrals for each zeta plus an error estimate (Laguerre 60 vs 44 disagreement)."""
    i0, i1 = _y_integrals(metal, zetas, omega_c, _LAG_X, _LAG_W)
    c0, c1 = _y_integrals(metal, zetas, omega_c, _LAG_X_CHECK, _LAG_W_CHECK)
    e0, e1 = np.abs(i0 - c0), np.abs(i1 - c1)
    bad = (e0 > cfg.quad_rel_tol * np.abs(i0)) | (e1 > cfg.quad_rel_tol * np.abs(i1))
    for j in np.flatnonzero(bad):
        (i0[j], e0[j]), (i1[j], e1[j]) = _y_integrals_adaptive(
            metal, zetas[j], omega_c, cfg.quad_rel_tol
        )
    return i0, i1, e0, e1


# ---------------------------------------------------------------------------
# Matsubara sums


def _matsubara(state: DimensionlessState, metal, atom, cfg: ComputeConfig):
    if not state.T > 0:
        raise DomainError("finite-temperature factors need T > 0; use the zero-T variants")
    tau = state.tau
    sums = np.zeros(2)
    quad_err = np.zeros(2)
    small_run = 0
    last_terms = []
    l0 = 0
    while l0 < cfg.matsubara_max_terms:
        ls = np.arange(l0, min(l0 + _CHUNK, cfg.matsubara_max_terms))
        zetas = ls * tau
        ratio = np.asarray(atom.ratio(zetas * state.omega_c), dtype=float)
        i0, i1, e0, e1 = _integrals(metal, zetas, state.omega_c, cfg)
        terms = np.stack([ratio * i0, ratio * i1], axis=1)
        errs = np.stack([np.abs(ratio) * e0, np.abs(ratio) * e1], axis=1)
        if l0 == 0:
            terms[0] *= 0.5
        for j, t in enumerate(terms):
            sums += t
            quad_err += errs[j]
            last_terms.append(t)
            if len(last_terms) > 4:
                last_terms.pop(0)
            if np.all(np.abs(t) < cfg.matsubara_rel_tol * np.abs(sums)):
                small_run += 1
            else:
                small_run = 0
            if small_run >= 3:
                l_used = int(ls[j]) + 1
                tail = _tail_estimate(last_terms) + quad_err
                return sums, l_used, tail
        l0 = int(ls[-1]) + 1
    tail = _tail_estimate(last_terms)
    raise TruncationError(
        f"Matsubara sum not converged after {cfg.matsubara_max_terms} terms",
        partial=(tau / 12 * sums[0], tau / 48 * sums[1]),
        diagnostics={"l_used": l0, "est_tail": tail},
    )


def _tail_estimate(last_terms):
    """Geometric extrapolation of the remaining terms; returns (tail_eta_sum, tail_kappa_sum)."""
    t = np.abs(np.array(last_terms))
    if len(t) < 2:
        return t[-1] if len(t) else np.zeros(2)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.nanmax(np.where(t[:-1] > 0, t[1:] / t[:-1], 0.0), axis=0)
    q = np.clip(q, 0.0, 0.999)
    return 2.0 * t[-1] * q / (1.0 - q)


def lifshitz_result(state, metal, atom, cfg: ComputeConfig = DEFAULT_CONFIG, alpha0=None):
    """Both correction factors from the Matsubara sum, as a :class:`CorrectionResult`."""
    if state.T == 0:
        eta = zero_T_energy_factor(state, metal, atom, cfg)
        kappa = zero_T_force_factor(state, metal, atom, cfg)
        l_used, tail = 0, 0.0
    else:
        sums, l_used, tails = _matsubara(state, metal, atom, cfg)
        eta = state.tau / 12 * sums[0]
        kappa = state.tau / 48 * sums[1]
        tail = float(max(state.tau / 12 * tails[0], state.tau / 48 * tails[1]))
        # rounding in the running sum bounds how well any truncation can be resolved
        tail += 4 * l_used * np.finfo(float).eps * max(abs(eta), abs(kappa))
    return _attach(CorrectionResult(eta, kappa, "lifshitz", truncation_report=(l_used, tail)),
                   state.a, alpha0)


def _attach(result, a, alpha0):
    if alpha0 is None:
        return result
    e0, f0 = ideal_baselines(a, alpha0)
    return CorrectionResult(
        eta=result.eta,
        kappa=result.kappa,
        method=result.method,
        energy=result.eta * e0,
        force=result.kappa * f0,
        truncation_report=result.truncation_report,
        validity=result.validity,
        branch_values=result.branch_values,
    )


def free_energy_factor(state, metal, atom, cfg: ComputeConfig = DEFAULT_CONFIG) -> float:
    """eta(a, T) at T > 0."""
    sums, _, _ = _matsubara(state, metal, atom, cfg)
    return state.tau / 12 * sums[0]


def force_factor(state, metal, atom, cfg: ComputeConfig = DEFAULT_CONFIG) -> float:
    """kappa(a, T) at T > 0."""
    sums, _, _ = _matsubara(state, metal, atom, cfg)
    return state.tau / 48 * sums[1]


def _zero_T(state, metal, atom, cfg, m):
    omega_c = state.omega_c

    def integrand(zeta):
        z = np.array([zeta])
        i = _y_integrals(metal, z, omega_c, _LAG_X, _LAG_W)[m][0]
        return float(atom.ratio(zeta * omega_c)) * i

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                integrand, 0, math.inf, epsabs=0, epsrel=cfg.zero_T_xi_rel_tol, limit=400
            )
        except integrate.IntegrationWarning as exc:
            raise NumericalError(f"zero-temperature integral did not converge: {exc}") from None
    return val, err


def zero_T_energy_factor(state, metal, atom, cfg: ComputeConfig = DEFAULT_CONFIG) -> float:
    """eta(a, 0): the Matsubara sum replaced by an integral over zeta."""
    val, _ = _zero_T(state, metal, atom, cfg, 0)
    return val / 12.0


def zero_T_force_factor(state, metal, atom, cfg: ComputeConfig = DEFAULT_CONFIG) -> float:
    """kappa(a, 0)."""
    val, _ = _zero_T(state, metal, atom, cfg, 1)
    return val / 48.0


# ---------------------------------------------------------------------------
# baselines


def ideal_baselines(a, alpha0):
    """(E0, F0): energy and force for a static atom at an ideal wall at T = 0.

    ``alpha0`` is the static polarizability volume in m^3.
    """
    if alpha0 is None:
        raise ConfigurationError("absolute energies need the static polarizability alpha0")
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    e0 = -3.0 * HBAR * C * alpha0 / (8.0 * math.pi * a**4)
    f0 = -3.0 * HBAR * C * alpha0 / (2.0 * math.pi * a**5)
    return e0, f0


def plate_energy(a):
    """Casimir energy per unit area between two ideal plates, J/m^2."""
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    return -math.pi**2 * HBAR * C / (720.0 * a**3)


# ---------------------------------------------------------------------------
# two semispaces


def two_semispace_free_energy(a, T, N, alpha_fn, metal, cfg: ComputeConfig = DEFAULT_CONFIG,
                              a_ref=None, n_nodes=120):
    """Free energy per unit area (J/m^2) between the metal and a dilute atomic gas.

    The gas permittivity is 1 + 4 pi alpha(i xi) N with ``alpha_fn`` returning
    the polarizability volume in m^3 and ``N`` in m^-3.  The transverse
    momentum integral runs over q = sqrt(k^2 + xi^2/c^2) on fixed Laguerre
    nodes scaled with ``a_ref`` (default ``a``), so nearby separations share
    the same nodes and can be finite-differenced.
    """
    if not a > 0 or not T > 0:
        raise DomainError("two-semispace free energy needs a > 0 and T > 0")
    if N < 0:
        raise DomainError("number density must be non-negative")
    if 4 * math.pi * alpha_fn(0.0) * N >= 1e-3:
        raise DomainError("number density outside the rarefied regime 4 pi alpha(0) N < 1e-3")
    if N == 0:
        return 0.0
    a_ref = a if a_ref is None else a_ref
    u, w = np.polynomial.laguerre.laggauss(n_nodes)
    xi1 = 2 * math.pi * K_B * T / HBAR
    wp = getattr(metal, "omega_p", None)
    total = 0.0
    small_run = 0
    for l in range(cfg.matsubara_max_terms):
        xi = l * xi1
        k0 = xi / C
        q = k0 + u / (2 * a_ref)
        eps_d = 1.0 + 4 * math.pi * alpha_fn(xi) * N
        kd = np.sqrt(q * q + (eps_d - 1.0) * k0 * k0)
        rd_par = (eps_d * q - kd) / (eps_d * q + kd)
        rd_perp = (kd - q) / (kd + q)
        if l == 0:
            rm_par = np.ones_like(q)
            if wp is None:
                rm_perp = np.ones_like(q)
            elif getattr(metal, "gamma", None) is not None:
                rm_perp = np.zeros_like(q)
            else:
                km = np.sqrt(q * q + (wp / C) ** 2)
                rm_perp = (km - q) / (km + q)
        else:
            eps_m = float(metal.permittivity(xi))
            if math.isinf(eps_m):
                rm_par = rm_perp = np.ones_like(q)
            else:
                km = np.sqrt(q * q + (eps_m - 1.0) * k0 * k0)
                rm_par = (eps_m * q - km) / (eps_m * q + km)
                rm_perp = (km - q) / (km + q)
        damp = math.exp(-2 * a * k0)
        g = q * (np.log1p(-rd_par * rm_par * damp * np.exp(-2 * a * (q - k0)))
                 + np.log1p(-rd_perp * rm_perp * damp * np.exp(-2 * a * (q - k0))))
        # dq = du / (2 a_ref); the Laguerre weight e^-u is divided back out
        term = float(np.dot(w, g * np.exp(u) / (2 * a_ref)))
        if l == 0:
            term *= 0.5
        total += term
        if abs(term) < cfg.matsubara_rel_tol * abs(total):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        raise TruncationError("two-semispace Matsubara sum did not converge", partial=total)
    return K_B * T / (2 * math.pi) * total


def rarefaction_atom_wall(a, T, alpha_fn, metal, N=1e20, rel_step=0.02,
                          cfg: ComputeConfig = DEFAULT_CONFIG):
    """Single-atom (free energy, force) recovered from the dilute-gas free energy.

    The N-linear part of the gas-wall free energy per unit area is
    N * int_a^inf F_atom(z) dz, so its first a-derivative gives -F_atom and its
    second gives the atom force.  Both limits N -> 0 and step -> 0 are taken by
    Richardson extrapolation.
    """
    def per_atom(x):
        # error linear in N: 2 f(N/2) - f(N)
        f1 = two_semispace_free_energy(x, T, N, alpha_fn, metal, cfg, a_ref=a) / N
        f2 = two_semispace_free_energy(x, T, N / 2, alpha_fn, metal, cfg, a_ref=a) / (N / 2)
        return 2 * f2 - f1

    centre = per_atom(a)
    est = []
    for h in (rel_step * a, 0.5 * rel_step * a):
        lo, hi = per_atom(a - h), per_atom(a + h)
        est.append(((lo - hi) / (2 * h), (hi - 2 * centre + lo) / (h * h)))
    # central differences: error O(h^2)
    energy = (4 * est[1][0] - est[0][0]) / 3
    force = (4 * est[1][1] - est[0][1]) / 3
    return energy, force
