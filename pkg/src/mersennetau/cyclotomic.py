"""Exact values and multiplicative structure of Phi_d(2).

2^n - 1 factors as the product of Phi_d(2) over the divisors d of n.
Every prime factor of Phi_d(2) has multiplicative order exactly d mod 2
(so the prime sets are disjoint across d), except that the largest prime
factor of d may divide as well -- the "intrinsic" prime.  The primitive
part is Phi_d(2) with that intrinsic prime divided out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import arith
from .errors import IncompleteDataError
from .factoring import (DEFAULT_POLICY, Deadline, FactorPolicy, Factorization,
                        Verdict, _NO_DEADLINE, factor, is_probable_prime)


@lru_cache(maxsize=None)
def phi2(d: int) -> int:
    """Phi_d(2) as an exact integer via the Moebius product over 2^e - 1.

    Numerator and denominator are multiplied out separately and divided
    once; the division is exact (asserted) so no polynomial arithmetic is
    ever needed.
    """
    if d < 1:
        raise ValueError("phi2 needs d >= 1")
    num = den = 1
    for e in arith.divisors(d):
        mu = arith.moebius(d // e)
        if mu == 1:
            num *= (1 << e) - 1
        elif mu == -1:
            den *= (1 << e) - 1
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"Moebius product for Phi_{d}(2) did not divide exactly")
    return q


def product_identity_check(n: int) -> bool:
    """True iff the product of phi2(d) over d | n equals 2^n - 1 exactly."""
    if n < 1:
        raise ValueError("product_identity_check needs n >= 1")
    return math.prod(phi2(d) for d in arith.divisors(n)) == (1 << n) - 1


def intrinsic_prime(d: int) -> int | None:
    """The largest prime factor p of d when it divides Phi_d(2), else None.

    When present, d / ord_2(p) is a power of p (sanity-asserted).
    """
    if d < 2:
        return None
    p = arith.factorize(d)[-1][0]
    if phi2(d) % p != 0:
        return None
    quotient = d // arith.multiplicative_order(2, p)
    while quotient % p == 0:
        quotient //= p
    if quotient != 1:
        raise AssertionError(f"intrinsic prime {p} of d={d} violates the order relation")
    return p


def primitive_part(d: int) -> int:
    """Phi_d(2) with the intrinsic prime divided out to full multiplicity."""
    if d < 1:
        raise ValueError("primitive_part needs d >= 1")
    v = phi2(d)
    p = intrinsic_prime(d)
    if p is not None:
        while v % p == 0:
            v //= p
    return v


def has_primitive_prime_divisor(m: int) -> bool:
    """Whether 2^m - 1 has a prime factor dividing no smaller 2^l - 1.

    Equivalent to primitive_part(m) > 1; false exactly for m in {1, 6}.
    """
    if m < 1:
        raise ValueError("needs m >= 1")
    return primitive_part(m) > 1


def residue_hint(d: int) -> int:
    """Modulus r such that primes of the primitive part are = 1 (mod r)."""
    return d if d % 2 == 0 else 2 * d


def hinted_policy(d: int, policy: FactorPolicy = DEFAULT_POLICY) -> FactorPolicy:
    return policy.with_residue(residue_hint(d)) if d >= 3 else policy


def factor_phi2(d: int, policy: FactorPolicy = DEFAULT_POLICY,
                deadline: Deadline = _NO_DEADLINE) -> Factorization:
    """Factor Phi_d(2): intrinsic prime stripped first, then the primitive
    part with residue-class trial division (its primes are = 1 mod d)."""
    if d < 1:
        raise ValueError("factor_phi2 needs d >= 1")
    v = phi2(d)
    if v == 1:
        return Factorization({})
    factors: dict[int, int] = {}
    p = intrinsic_prime(d)
    part = v
    if p is not None:
        e = 0
        while part % p == 0:
            part //= p
            e += 1
        factors[p] = e
    if part == 1:
        return Factorization(factors)
    inner = factor(part, hinted_policy(d, policy), deadline)
    for q, e in inner.factors.items():
        factors[q] = factors.get(q, 0) + e
    return Factorization(dict(sorted(factors.items())), inner.cofactor, inner.probable)


def bang_primitive_divisor(m: int, policy: FactorPolicy = DEFAULT_POLICY,
                           deadline: Deadline = _NO_DEADLINE) -> int | None:
    """A prime dividing 2^m - 1 but no smaller 2^l - 1; None iff m in {1, 6}.

    Any prime factor of the primitive part qualifies.  Existence is decided
    exactly (primitive_part(m) > 1); producing a witness may require the
    factoring budget, and raises IncompleteDataError if it runs out with no
    prime extracted.
    """
    if m < 1:
        raise ValueError("bang_primitive_divisor needs m >= 1")
    part = primitive_part(m)
    if part == 1:
        return None
    if is_probable_prime(part, policy) != Verdict.COMPOSITE:
        return part
    found = factor(part, hinted_policy(m, policy), deadline)
    if found.factors:
        return min(found.factors)
    raise IncompleteDataError(
        f"2^{m}-1 has a primitive prime divisor, but none was extracted within budget",
        missing=[m])


@dataclass(frozen=True)
class OmegaPhi2Result:
    d: int
    omega: int            # exact count, or a lower bound when not exact
    exact: bool
    ratio: float | None   # omega / log d; None for d < 2 or inexact counts


def omega_phi2(d: int, store=None, policy: FactorPolicy = DEFAULT_POLICY,
               deadline: Deadline = _NO_DEADLINE) -> OmegaPhi2Result:
    """Distinct-prime count of Phi_d(2), intrinsic prime included.

    Uses the store's cached/imported factorization when one is supplied,
    else factors natively.  A partial factorization yields an explicit
    inexact result carrying a lower bound.
    """
    if d < 1:
        raise ValueError("omega_phi2 needs d >= 1")
    if store is not None:
        fac = store.ensure_phi2(d, deadline)
    else:
        fac = factor_phi2(d, policy, deadline)
    if fac.complete:
        w = fac.omega()
        return OmegaPhi2Result(d, w, True, w / math.log(d) if d >= 2 else None)
    return OmegaPhi2Result(d, fac.omega_lower_bound(), False, None)


@dataclass(frozen=True)
class CyclotomicValue:
    """Phi_d(2) together with its intrinsic prime and primitive part."""

    d: int
    value: int
    intrinsic_prime: int | None
    primitive_part: int

    @classmethod
    def of(cls, d: int) -> "CyclotomicValue":
        return cls(d, phi2(d), intrinsic_prime(d), primitive_part(d))
