"""Numeric rendering and the two numeric experiments behind the CLI.

Ratio columns follow the published tables: tau ratios print as exact
decimals when they terminate within four places ("0.5", "2") and as
four round-half-even decimals otherwise ("0.3810"); omega / log d is
always fixed four decimals.  High-precision sums are carried at 60
significant digits so residual assertions are not drowned by rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import numpy as np

from . import arith


def _round_half_even(numerator: int, denominator: int) -> int:
    """Nearest integer to numerator/denominator, ties to even."""
    q, r = divmod(numerator, denominator)
    double = 2 * r
    if double > denominator or (double == denominator and q % 2):
        q += 1
    return q


def format_tau_ratio(value: Fraction) -> str:
    """Exact minimal decimal when terminating within 4 places, else
    fixed 4 decimals (round-half-even)."""
    scaled = value * 10_000
    if scaled.denominator == 1:
        text = f"{scaled.numerator // 10_000}.{scaled.numerator % 10_000:04d}"
        return text.rstrip("0").rstrip(".")
    q = _round_half_even(value.numerator * 10_000, value.denominator)
    return f"{q // 10_000}.{q % 10_000:04d}"


def format_omega_ratio(omega: int, d: int) -> str:
    """omega / log d to fixed 4 decimals, computed at 50 digits."""
    if d < 2:
        raise ValueError("log d ratio needs d >= 2")
    with localcontext() as ctx:
        ctx.prec = 50
        value = Decimal(omega) / Decimal(d).ln()
        return str(value.quantize(Decimal("0.0001")))


# -- log-sum experiment -------------------------------------------------

# sum_{k>=1} log(1 - 2^-k) = log prod (1 - 2^-k); the partial sums of the
# error term decrease monotonically to this limit, so the residual always
# lies in (LOG_SUM_LIMIT, 0).
def _log_sum_limit() -> mpmath.mpf:
    with mpmath.workdps(60):
        total = mpmath.mpf(0)
        k = 1
        while True:
            term = mpmath.log1p(-mpmath.mpf(2) ** -k)
            total += term
            if abs(term) < mpmath.mpf(10) ** -55:
                return total
            k += 1


@dataclass(frozen=True)
class LogSumReport:
    n: int
    exact_sum: str     # sum_{k<=n} log(2^k - 1), 50 significant digits
    main_term: str     # n (n+1) log 2 / 2
    residual: float    # exact_sum - main_term, in (limit, 0)
    limit: float       # lim of the residual as n -> infinity


def log_sum_check(n: int) -> LogSumReport:
    """Compare sum_{k<=n} log(2^k - 1) with n(n+1) log2 / 2.

    log(2^k - 1) = k log 2 + log(1 - 2^-k), so the residual is the partial
    sum of the convergent series log(1 - 2^-k): strictly decreasing in n
    and bounded below by its limit ~ -1.2421 (asserted exactly).
    """
    if n < 1:
        raise ValueError("log_sum_check needs n >= 1")
    with mpmath.workdps(60):
        residual = mpmath.fsum(mpmath.log1p(-mpmath.mpf(2) ** -k)
                               for k in range(1, n + 1))
        main = mpmath.mpf(n) * (n + 1) * mpmath.log(2) / 2
        total = main + residual
        limit = _log_sum_limit()
        if not limit < residual < 0:
            raise AssertionError(f"log-sum residual {residual} out of ({limit}, 0)")
        return LogSumReport(n, mpmath.nstr(total, 50), mpmath.nstr(main, 50),
                            float(residual), float(limit))


# -- big-omega distribution ---------------------------------------------

OMEGA_DIST_MAX = 10**8  # sieve memory bound


@dataclass(frozen=True)
class OmegaDistRow:
    k: int
    count: int
    normalized: float | None  # count * 2^k / (x k log x); None for k == 0


def omega_distribution(x: int, k_max: int | None = None) -> list[OmegaDistRow]:
    """Counts of n <= x with big_omega(n) == K, by an additive sieve.

    Each prime power p^j <= x contributes 1 to every multiple, which sums
    to the multiplicity of p in n.  Data output only; the Hall-Tenenbaum
    constant is not asserted.
    """
    if x < 1:
        raise ValueError("omega_distribution needs x >= 1")
    if x > OMEGA_DIST_MAX:
        raise ValueError(f"x exceeds the sieve memory bound {OMEGA_DIST_MAX}")
    counts = np.zeros(x + 1, dtype=np.uint8)
    for p in arith.primes_upto(x):
        pk = p
        while pk <= x:
            counts[pk::pk] += 1
            pk *= p
    hist = np.bincount(counts[1:])  # n = 1..x; big_omega(1) == 0
    top = len(hist) - 1 if k_max is None else k_max
    rows = []
    logx = math.log(x)
    for k in range(top + 1):
        count = int(hist[k]) if k < len(hist) else 0
        if k == 0 or logx == 0:
            rows.append(OmegaDistRow(k, count, None))
        else:
            rows.append(OmegaDistRow(k, count, count * 2.0**k / (x * k * logx)))
    return rows
