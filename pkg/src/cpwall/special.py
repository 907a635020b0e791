"""Integer-order upper incomplete gamma, 1F1(1, b; x), and an alternating-series accelerator.

Scaled variants return ``exp(x) * Gamma(n, x)`` and ``exp(-x) * 1F1(1, b; x)``
so the large-argument regimes used by the short-separation expansion stay in
double range.
"""

from __future__ import annotations

import itertools
import math
import operator

from .errors import DomainError, SeriesError, UnsupportedOrderError

MAX_ORDER = 64
DEFAULT_RTOL = 1e-12

_EULER_GAMMA = 0.57721566490153286060651209
_TINY = 1e-300
_MAX_ITER = 2000


def _check_order(n):
    try:
        n = operator.index(n)
    except TypeError:
        raise DomainError(f"incomplete gamma order must be an integer, got {n!r}") from None
    if abs(n) > MAX_ORDER:
        raise UnsupportedOrderError(f"|n| = {abs(n)} exceeds the supported maximum {MAX_ORDER}")
    return n


def _upper_cf_scaled(a, x, rtol):
    """x**(-a) * exp(x) * Gamma(a, x) by modified Lentz; converges for x > 0, best when x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rtol * 0.01:
            return h
    raise SeriesError(f"continued fraction for Gamma({a}, {x}) did not converge", partial=h)


def _e1_scaled_series(x):
    """exp(x) * E1(x) for 0 < x < 1 from the convergent power series."""
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < 1e-17 * abs(total) or k > 200:
            break
        k += 1
    return math.exp(x) * (-_EULER_GAMMA - math.log(x) - total)


def inc_gamma_upper_scaled(n: int, x: float, rtol: float = DEFAULT_RTOL) -> float:
    """exp(x) * Gamma(n, x) for integer n with |n| <= 64.

    Positive orders use the finite sum; non-positive orders use a continued
    fraction for x >= 1 and downward recurrence from E1 below that.
    """
    n = _check_order(n)
    if n >= 1:
        if x < 0:
            raise DomainError(f"x must be non-negative, got {x!r}")
        # (n-1)! * sum_{j<n} x^j / j!
        term = 1.0
        total = 1.0
        for j in range(1, n):
            term *= x / j
            total += term
        return math.factorial(n - 1) * total
    if not x > 0:
        raise DomainError(f"Gamma({n}, x) needs x > 0, got {x!r}")
    if x >= 1.0:
        return math.exp(n * math.log(x)) * _upper_cf_scaled(float(n), x, rtol)
    # Downward recurrence is stable here because x / |k| < 1 at every step.
    g = _e1_scaled_series(x)
    for k in range(0, n, -1):
        g = (g - x ** (k - 1)) / (k - 1)
    return g


def inc_gamma_upper(n: int, x: float, rtol: float = DEFAULT_RTOL) -> float:
    """Upper incomplete gamma Gamma(n, x) = int_x^inf t^(n-1) e^(-t) dt."""
    n = _check_order(n)
    if n >= 1 and x == 0:
        return float(math.factorial(n - 1))
    if n >= 1:
        term = 1.0
        total = 1.0
        for j in range(1, n):
            term *= x / j
            total += term
        return math.factorial(n - 1) * math.exp(-x) * total
    return math.exp(-x) * inc_gamma_upper_scaled(n, x, rtol)


def log_inc_gamma_upper_scaled(n: int, x: float) -> float:
    return math.log(inc_gamma_upper_scaled(n, x))


def _check_b(b):
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"1F1(1, b; x) is undefined for non-positive integer b = {b!r}")
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")


def _hyp1f1_series(b, x, rtol):
    term = 1.0
    total = 1.0
    j = 0
    while True:
        term *= x / (b + j)
        total += term
        j += 1
        if term < rtol * 1e-3 * total:
            return total
        if j > 100_000:
            raise SeriesError(f"1F1(1, {b}; {x}) series did not converge", partial=total)


def hyp1f1_one_scaled(b: float, x: float, rtol: float = DEFAULT_RTOL) -> float:
    """exp(-x) * 1F1(1, b; x) for b > 0, x >= 0."""
    _check_b(b)
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x == 0:
        return 1.0
    if x < b:
        return math.exp(-x) * _hyp1f1_series(b, x, rtol)
    if b <= 1.0:
        # contiguous relation keeps the incomplete-gamma order positive
        return math.exp(-x) + (x / b) * hyp1f1_one_scaled(b + 1.0, x, rtol)
    # 1F1(1, b; x) = (b-1) e^x x^(1-b) gamma(b-1, x), with gamma = Gamma(b-1) - Gamma(b-1, x)
    a = b - 1.0
    complete = math.exp(math.lgamma(b) + (1.0 - b) * math.log(x))
    tail = a * math.exp(-x) * _upper_cf_scaled(a, x, rtol)
    return complete - tail


def hyp1f1_one(b: float, x: float, rtol: float = DEFAULT_RTOL) -> float:
    """Confluent hypergeometric 1F1(1, b; x) = sum_j Gamma(b) / Gamma(b+j) x^j."""
    _check_b(b)
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x < b:
        return _hyp1f1_series(b, x, rtol)
    return math.exp(x) * hyp1f1_one_scaled(b, x, rtol)


def _levin_estimate(terms, partial, k):
    num = 0.0
    den = 0.0
    for j in range(k + 1):
        w = terms[j]
        if w == 0.0:
            continue
        coef = (-1) ** j * math.comb(k, j) * ((j + 1) / (k + 1)) ** (k - 1)
        num += coef * partial[j] / w
        den += coef / w
    return num / den if den != 0.0 else partial[k]


def levin_t(terms):
    """Levin t-transform of the partial sums of ``terms``.

    Returns the successive estimates L_1, L_2, ...; L_k uses the first k + 1 terms.
    """
    partial = list(itertools.accumulate(terms))
    return [_levin_estimate(terms, partial, k) for k in range(1, len(terms))]


def alternating_sum(term, start=0, rtol=DEFAULT_RTOL, min_terms=6, max_terms=40):
    """Sum ``term(k)`` for k = start, start+1, ... with Levin acceleration.

    Returns ``(value, error_estimate, terms_used)``.  Stops once two successive
    accelerated estimates agree to ``rtol``; raises :class:`SeriesError` if that
    does not happen within ``max_terms``.
    """
    terms = []
    partial = []
    best = None
    prev = None
    for k in range(start, start + max_terms):
        t = term(k)
        terms.append(t)
        partial.append(partial[-1] + t if partial else t)
        if len(terms) < 2:
            continue
        est = _levin_estimate(terms, partial, len(terms) - 1)
        if prev is not None:
            err = abs(est - prev)
            if best is None or err < best[1]:
                best = (est, err, len(terms))
            scale = max(abs(est), max(abs(v) for v in terms) * 1e-3)
            if len(terms) >= min_terms and err <= rtol * scale:
                return est, err, len(terms)
        prev = est
        if t == 0.0 and len(terms) >= min_terms:
            return est, 0.0, len(terms)
    if best is not None and best[1] <= 1e3 * rtol * max(abs(best[0]), 1e-300):
        return best
    raise SeriesError(
        f"alternating series did not converge within {max_terms} terms",
        partial=None if best is None else best[0],
        diagnostics={"error_estimate": None if best is None else best[1]},
    )
