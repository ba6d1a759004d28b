"""Divisor statistics of 2^n - 1 and 2^n + 1 assembled from cyclotomic pieces.

2^n - 1 is the product of Phi_d(2) over d | n, and 2^n + 1 the product
over d | 2n with d not dividing n, so factorizations are always merged
from the store's Phi_2 records and 2^n + 1 is never factored directly.
On top of the assembly sit the summatory functions f and f', the
record-breaking ("highly composite Mersenne") indices, and the finite
inequality checks behind the paper-scale conjecture experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .errors import IncompleteDataError
from .factoring import Deadline, Factorization, _NO_DEADLINE
from .store import BFileKind, FactorStore, Kind

MINUS = Kind.MERSENNE_MINUS
PLUS = Kind.MERSENNE_PLUS

_TAU_TABLE_FOR = {MINUS: BFileKind.TAU_MERSENNE_MINUS, PLUS: BFileKind.TAU_MERSENNE_PLUS}


def mersenne_value(n: int, sign: Kind) -> int:
    if n < 1:
        raise ValueError("needs n >= 1")
    return (1 << n) + (1 if sign is PLUS else -1)


def phi2_divisor_set(n: int, sign: Kind) -> list[int]:
    """Indices d with Phi_d(2) dividing 2^n - 1 (d | n) resp. 2^n + 1
    (d | 2n, d not | n)."""
    if sign is MINUS:
        return arith.divisors(n)
    return [d for d in arith.divisors(2 * n) if n % d != 0]


def factor_mersenne(n: int, sign: Kind, store: FactorStore,
                    deadline: Deadline = _NO_DEADLINE) -> Factorization:
    """Merge the cyclotomic factorizations over the divisor set.

    Exponents add up where a prime recurs across pieces (the intrinsic
    prime 3 divides both Phi_2(2) and Phi_6(2), for instance).  Partial
    pieces propagate: their cofactors multiply into the result's cofactor.
    """
    factors: dict[int, int] = {}
    cofactor = 1
    probable: set[int] = set()
    for d in phi2_divisor_set(n, sign):
        piece = store.ensure_phi2(d, deadline)
        for p, e in piece.factors.items():
            factors[p] = factors.get(p, 0) + e
        if piece.cofactor is not None:
            cofactor *= piece.cofactor
        probable.update(piece.probable)
    fac = Factorization(dict(sorted(factors.items())),
                        cofactor if cofactor > 1 else None, frozenset(probable))
    if fac.value() != mersenne_value(n, sign):
        raise AssertionError(f"assembly of 2^{n}{'+' if sign is PLUS else '-'}1 failed")
    return fac


def incomplete_divisors(n: int, sign: Kind, store: FactorStore,
                        deadline: Deadline = _NO_DEADLINE) -> list[int]:
    """The d values whose Phi_d(2) factorization is still partial."""
    return [d for d in phi2_divisor_set(n, sign)
            if not store.ensure_phi2(d, deadline).complete]


def tau_mersenne(n: int, sign: Kind, store: FactorStore,
                 deadline: Deadline = _NO_DEADLINE) -> int:
    """tau(2^n -+ 1) from a complete assembly; raises IncompleteDataError
    naming the blocking d values otherwise."""
    fac = factor_mersenne(n, sign, store, deadline)
    if not fac.complete:
        blocking = incomplete_divisors(n, sign, store, deadline)
        raise IncompleteDataError(
            f"tau(2^{n}{'+' if sign is PLUS else '-'}1) needs complete data; "
            f"blocked at d in {blocking}", missing=blocking)
    return fac.tau()


def omega_mersenne(n: int, sign: Kind, store: FactorStore,
                   deadline: Deadline = _NO_DEADLINE) -> tuple[int, bool]:
    """(count, exact): distinct primes of 2^n -+ 1, a lower bound when
    the assembly is partial."""
    fac = factor_mersenne(n, sign, store, deadline)
    if fac.complete:
        return fac.omega(), True
    return fac.omega_lower_bound(), False


def tau_lookup(n: int, sign: Kind, store: FactorStore,
               deadline: Deadline = _NO_DEADLINE) -> int | None:
    """tau from an imported b-file if attached, else natively; None when
    neither source can supply the value."""
    imported = store.imported_tau(n, _TAU_TABLE_FOR[sign])
    if imported is not None:
        return imported
    try:
        return tau_mersenne(n, sign, store, deadline)
    except IncompleteDataError:
        return None


@dataclass(frozen=True)
class MersenneRow:
    n: int
    tau: int | None          # present iff the assembly was complete
    omega: int               # exact, or a lower bound when not complete
    complete: bool


def mersenne_row(n: int, sign: Kind, store: FactorStore,
                 deadline: Deadline = _NO_DEADLINE) -> MersenneRow:
    fac = factor_mersenne(n, sign, store, deadline)
    if fac.complete:
        return MersenneRow(n, fac.tau(), fac.omega(), True)
    return MersenneRow(n, None, fac.omega_lower_bound(), False)


# -- summatory functions ----------------------------------------------


def f_sum(n: int, store: FactorStore, deadline: Deadline = _NO_DEADLINE) -> int:
    """f(n) = sum of tau(2^k - 1) for k <= n (exact)."""
    if n < 1:
        raise ValueError("f_sum needs n >= 1")
    total = 0
    missing = []
    for k in range(1, n + 1):
        t = tau_lookup(k, MINUS, store, deadline)
        if t is None:
            missing.append(k)
        else:
            total += t
    if missing:
        raise IncompleteDataError(f"f({n}) is missing tau(2^k-1) for k in {missing}",
                                  missing=missing)
    return total


def f_prime_sum(n: int) -> int:
    """f'(n) = sum of 2^tau(k) for k <= n (exact)."""
    if n < 1:
        raise ValueError("f_prime_sum needs n >= 1")
    return sum(1 << arith.tau(k) for k in range(1, n + 1))


@dataclass(frozen=True)
class SummarySeries:
    """f, f' for 1..2*max_n and the ratios f(2n)/f(n) for 1..max_n."""

    f: list[int]
    f_prime: list[int]
    ratio: list[Fraction]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.f, self.f[1:])):
            raise AssertionError("f must be strictly increasing")
        if any(4 * a < b for a, b in zip(self.f, self.f_prime)):
            raise AssertionError("f >= f'/4 must hold pointwise")


def ratio_series(max_n: int, store: FactorStore,
                 deadline: Deadline = _NO_DEADLINE) -> SummarySeries:
    if max_n < 1:
        raise ValueError("ratio_series needs max_n >= 1")
    top = 2 * max_n
    taus = []
    missing = []
    for k in range(1, top + 1):
        t = tau_lookup(k, MINUS, store, deadline)
        if t is None:
            missing.append(k)
        else:
            taus.append(t)
    if missing:
        raise IncompleteDataError(f"ratio series is missing tau(2^k-1) for k in {missing}",
                                  missing=missing)
    f = []
    acc = 0
    for t in taus:
        acc += t
        f.append(acc)
    fp = []
    acc = 0
    for k in range(1, top + 1):
        acc += 1 << arith.tau(k)
        fp.append(acc)
    ratios = [Fraction(f[2 * n - 1], f[n - 1]) for n in range(1, max_n + 1)]
    return SummarySeries(f, fp, ratios)


# -- record-breaking indices ------------------------------------------


@dataclass(frozen=True)
class HcmRow:
    """A row of the record-index table: tau(2^N - 1) beats every smaller
    index, and ratio_plus is tau(2^N + 1) / N."""

    n: int
    tau_minus: int
    ratio_plus: Fraction


def hcm_indices(limit: int, store: FactorStore,
                deadline: Deadline = _NO_DEADLINE) -> list[HcmRow]:
    """All indices N <= limit with tau(2^N - 1) > tau(2^m - 1) for m < N."""
    if limit < 1:
        raise ValueError("hcm_indices needs limit >= 1")
    missing = []
    taus = {}
    for k in range(1, limit + 1):
        t = tau_lookup(k, MINUS, store, deadline)
        if t is None:
            missing.append(k)
        else:
            taus[k] = t
    if missing:
        raise IncompleteDataError(
            f"record scan to {limit} is missing tau(2^k-1) for k in {missing}",
            missing=missing)
    rows = []
    best = 0
    plus_missing = []
    for k in range(1, limit + 1):
        if taus[k] > best:
            best = taus[k]
            tau_plus = tau_lookup(k, PLUS, store, deadline)
            if tau_plus is None:
                plus_missing.append(k)
                continue
            rows.append(HcmRow(k, taus[k], Fraction(tau_plus, k)))
    if plus_missing:
        raise IncompleteDataError(
            f"missing tau(2^N+1) at record indices {plus_missing}", missing=plus_missing)
    return rows


# -- inequality and identity checks ------------------------------------


def compare_lower_bound(k: int, store: FactorStore,
                        deadline: Deadline = _NO_DEADLINE) -> bool:
    """tau(2^k - 1) >= 2^omega(2^k - 1) >= 2^tau(k) / 4, checked in exact
    integer arithmetic (the 1/4 as 2^tau(k) <= 4 * 2^omega)."""
    fac = factor_mersenne(k, MINUS, store, deadline)
    if not fac.complete:
        raise IncompleteDataError(f"compare_lower_bound({k}) needs complete data",
                                  missing=incomplete_divisors(k, MINUS, store, deadline))
    t, w = fac.tau(), fac.omega()
    return t >= (1 << w) and (1 << arith.tau(k)) <= 4 * (1 << w)


def tau_upper_bound_check(n: int, store: FactorStore,
                          deadline: Deadline = _NO_DEADLINE) -> bool:
    """tau(2^n - 1) <= n^omega(2^n - 1) for n >= 2 (exact)."""
    if n < 2:
        raise ValueError("tau_upper_bound_check needs n >= 2")
    fac = factor_mersenne(n, MINUS, store, deadline)
    if not fac.complete:
        raise IncompleteDataError(f"tau_upper_bound_check({n}) needs complete data",
                                  missing=incomplete_divisors(n, MINUS, store, deadline))
    return fac.tau() <= n ** fac.omega()


def omega_decomposition_check(n: int, store: FactorStore,
                              deadline: Deadline = _NO_DEADLINE) -> tuple[int, int, int]:
    """(omega(2^n - 1), sum over d | n of omega(Phi_d(2)), defect).

    The defect counts intrinsic primes tallied more than once across the
    divisor set; it satisfies 0 <= defect <= big_omega(n) exactly (each
    intrinsic prime p repeats at d = ord * p^j for 1 <= j <= v_p(n)).
    """
    if n < 1:
        raise ValueError("omega_decomposition_check needs n >= 1")
    pieces = {}
    missing = []
    for d in arith.divisors(n):
        piece = store.ensure_phi2(d, deadline)
        if not piece.complete:
            missing.append(d)
        pieces[d] = piece
    if missing:
        raise IncompleteDataError(
            f"omega decomposition at n={n} blocked at d in {missing}", missing=missing)
    rhs = sum(piece.omega() for piece in pieces.values())
    lhs = len({p for piece in pieces.values() for p in piece.factors})
    defect = rhs - lhs
    if not 0 <= defect <= arith.big_omega(n):
        raise AssertionError(f"omega decomposition defect {defect} out of range at n={n}")
    return lhs, rhs, defect


def conjecture1_table(limit: int, store: FactorStore,
                      deadline: Deadline = _NO_DEADLINE) -> list[tuple[int, Fraction]]:
    """(N, tau(2^N + 1) / N) over the record indices N <= limit; trend data
    only, nothing about convergence is asserted."""
    return [(row.n, row.ratio_plus) for row in hcm_indices(limit, store, deadline)]


@dataclass(frozen=True)
class Conjecture2Result:
    exceptions: list[int]
    sup_ratio: float
    argmax_d: int


def conjecture2_scan(max_d: int, store: FactorStore, c: float = 10.0,
                     deadline: Deadline = _NO_DEADLINE) -> Conjecture2Result:
    """Exceptions to omega(Phi_d(2)) <= c * log d over 2 <= d <= max_d,
    plus the empirical sup of omega / log d and where it occurs.

    omega comes from a complete store record, an imported omega b-file,
    or native factoring, in that order of preference.
    """
    if max_d < 2:
        raise ValueError("conjecture2_scan needs max_d >= 2")
    exceptions = []
    sup_ratio = 0.0
    argmax = 2
    missing = []
    for d in range(2, max_d + 1):
        w = omega_phi2_lookup(d, store, deadline)
        if w is None:
            missing.append(d)
            continue
        ratio = w / math.log(d)
        if ratio > sup_ratio:
            sup_ratio = ratio
            argmax = d
        if w > c * math.log(d):
            exceptions.append(d)
    if missing:
        raise IncompleteDataError(
            f"omega(Phi_d(2)) unavailable for d in {missing}", missing=missing)
    return Conjecture2Result(exceptions, sup_ratio, argmax)


def omega_phi2_lookup(d: int, store: FactorStore,
                      deadline: Deadline = _NO_DEADLINE) -> int | None:
    """Exact omega(Phi_d(2)) from the store, the imported table, or a
    native attempt; None if all three fail."""
    from .store import Kind as _K, StoreKey
    record = store.get(StoreKey(_K.PHI2, d))
    if record is not None and record.factorization.complete:
        return record.factorization.omega()
    imported = store.imported_omega_phi2(d)
    if imported is not None:
        return imported
    fac = store.ensure_phi2(d, deadline)
    return fac.omega() if fac.complete else None


def theorem3_bound_check(n: int, store: FactorStore,
                         deadline: Deadline = _NO_DEADLINE) -> bool:
    """tau(2^N + 1) >= 2^(tau(M) - 2) where N = 2^a * M with M odd.

    The bound floors at 1 so degenerate small exponents cannot fail a
    suite run (tau(M) < 2 only for M = 1).
    """
    if n < 1:
        raise ValueError("theorem3_bound_check needs n >= 1")
    m = n
    while m % 2 == 0:
        m //= 2
    exponent = arith.tau(m) - 2
    bound = (1 << exponent) if exponent > 0 else 1
    fac = factor_mersenne(n, PLUS, store, deadline)
    if not fac.complete:
        raise IncompleteDataError(f"theorem3_bound_check({n}) needs complete data",
                                  missing=incomplete_divisors(n, PLUS, store, deadline))
    return fac.tau() >= bound
