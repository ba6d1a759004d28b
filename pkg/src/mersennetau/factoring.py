"""Arbitrary-precision factorization with budgeted methods.

The pipeline is trial division (optionally restricted to a residue class,
which is how callers exploit that prime factors of the primitive part of
2^d - 1 are = 1 mod d), a primality screen, perfect-power extraction, then
repeated Pollard p-1 and Brent-cycle rho on whatever composite survives.
Budgets exhausting is an ordinary outcome: the result is then Partial and
carries the unfactored cofactor.

Every random stream is keyed by (seed, method, n), so results are
reproducible for a fixed policy seed regardless of call order or
parallelism.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

from . import arith

# Largest modulus for which the first 13 prime bases are a proven
# Miller-Rabin witness set (Sorenson & Webster); below it the verdict is
# deterministic, above it extra random rounds give only "probable prime".
DETERMINISTIC_MR_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97)


class Verdict(Enum):
    PRIME = "prime"
    PROBABLE_PRIME = "probable-prime"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class FactorPolicy:
    """Budgets and knobs for the factoring pipeline.

    ``trial_bound`` defaults to 10^5, or 10^6 when a residue hint is set
    (the hint shrinks the candidate set by a factor of the modulus, so a
    larger bound stays cheap).  ``rho_budget`` counts iterations of the
    rho map per invocation.
    """

    trial_bound: int | None = None
    residue_modulus: int | None = None
    rho_budget: int = 100_000_000
    p_minus_1_bound: int = 100_000
    rng_seed: int = 1
    mr_rounds: int = 64

    def __post_init__(self):
        for name in ("rho_budget", "p_minus_1_bound", "mr_rounds"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.trial_bound is not None and self.trial_bound < 0:
            raise ValueError("trial_bound must be >= 0")
        if self.residue_modulus is not None and self.residue_modulus < 1:
            raise ValueError("residue_modulus must be >= 1")

    @property
    def effective_trial_bound(self) -> int:
        if self.trial_bound is not None:
            return self.trial_bound
        return 1_000_000 if self.residue_modulus else 100_000

    def with_residue(self, modulus: int) -> "FactorPolicy":
        return replace(self, residue_modulus=modulus)


DEFAULT_POLICY = FactorPolicy()


class Deadline:
    """Soft wall-clock cutoff checked at coarse intervals inside loops."""

    def __init__(self, seconds: float | None):
        self.expiry = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.expiry is not None and time.monotonic() >= self.expiry


_NO_DEADLINE = Deadline(None)


@dataclass(frozen=True)
class Factorization:
    """Possibly-partial factorization: prime -> exponent, plus a cofactor.

    The cofactor, when present, is a composite > 1 that the budgets could
    not split; ``probable`` lists factors certified only probabilistically
    (above the deterministic Miller-Rabin bound).
    """

    factors: dict[int, int]
    cofactor: int | None = None
    probable: frozenset[int] = frozenset()

    @property
    def complete(self) -> bool:
        return self.cofactor is None

    @property
    def status(self) -> str:
        return "complete" if self.complete else "partial"

    def value(self) -> int:
        v = math.prod(p**e for p, e in self.factors.items())
        return v * (self.cofactor or 1)

    def tau(self) -> int:
        if not self.complete:
            raise ValueError("tau needs a complete factorization")
        return math.prod(e + 1 for e in self.factors.values())

    def omega(self) -> int:
        if not self.complete:
            raise ValueError("omega needs a complete factorization")
        return len(self.factors)

    def omega_lower_bound(self) -> int:
        return len(self.factors) + (0 if self.complete else 1)

    def verify(self, n: int, check_primality: bool = False,
               policy: FactorPolicy = DEFAULT_POLICY) -> None:
        """Raise if this is not a valid factorization of n."""
        if self.value() != n:
            raise ValueError(f"factor product does not reconstruct {n}")
        if self.cofactor is not None:
            if self.cofactor <= 1:
                raise ValueError("cofactor must be > 1")
            if check_primality and is_probable_prime(self.cofactor, policy) != Verdict.COMPOSITE:
                raise ValueError(f"cofactor {self.cofactor} is not composite")
        for p, e in self.factors.items():
            if e < 1:
                raise ValueError(f"exponent of {p} must be >= 1")
            if check_primality and is_probable_prime(p, policy) == Verdict.COMPOSITE:
                raise ValueError(f"stored factor {p} is composite")


def _strong_probable_prime(n: int, a: int) -> bool:
    """One Miller-Rabin round; n odd >= 3."""
    a %= n
    if a == 0:
        return True
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, policy: FactorPolicy = DEFAULT_POLICY) -> Verdict:
    """Deterministic verdict below DETERMINISTIC_MR_BOUND, else a
    probabilistic one after ``mr_rounds`` extra random-base rounds.

    0 and 1 are classified Composite (i.e. "not prime").
    """
    if n < 2:
        return Verdict.COMPOSITE
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return Verdict.PRIME if n == p else Verdict.COMPOSITE
    if n < _SMALL_PRIMES[-1] ** 2:
        return Verdict.PRIME
    for a in _MR_BASES:
        if not _strong_probable_prime(n, a):
            return Verdict.COMPOSITE
    if n < DETERMINISTIC_MR_BOUND:
        return Verdict.PRIME
    rng = random.Random(f"mr:{policy.rng_seed}:{n}")
    for _ in range(policy.mr_rounds):
        if not _strong_probable_prime(n, rng.randrange(2, n - 1)):
            return Verdict.COMPOSITE
    return Verdict.PROBABLE_PRIME


def trial_division(n: int, policy: FactorPolicy = DEFAULT_POLICY,
                   ) -> tuple[list[tuple[int, int]], int]:
    """Strip prime factors <= the trial bound; returns (found, remaining).

    With a residue hint set, only candidates = 1 (mod modulus) are tried
    (each is primality-checked before dividing, since a composite in the
    class could divide when n has factors outside the class).
    """
    if n < 1:
        raise ValueError("trial_division needs n >= 1")
    bound = policy.effective_trial_bound
    found: list[tuple[int, int]] = []
    rem = n
    if policy.residue_modulus:
        step = policy.residue_modulus
        for c in range(1 + step, bound + 1, step):
            if c > rem:
                break
            if rem % c == 0 and is_probable_prime(c) == Verdict.PRIME:
                e = 0
                while rem % c == 0:
                    rem //= c
                    e += 1
                found.append((c, e))
        return found, rem
    table = arith.shared_table()
    table.ensure(bound)
    for p in table.primes:
        if p > bound or p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            found.append((p, e))
    # The sqrt cutoff may leave a prime <= bound behind.
    if 1 < rem <= bound:
        found.append((rem, 1))
        rem = 1
    return found, rem


def pollard_rho(n: int, policy: FactorPolicy = DEFAULT_POLICY,
                deadline: Deadline = _NO_DEADLINE) -> int | None:
    """Brent-cycle rho: a nontrivial divisor of n, or None on exhausted budget.

    Precondition: n is an odd composite >= 9 (callers must pre-screen;
    a prime n just burns the budget).
    """
    if n < 9 or n % 2 == 0:
        raise ValueError("pollard_rho needs an odd composite >= 9")
    rng = random.Random(f"rho:{policy.rng_seed}:{n}")
    remaining = policy.rho_budget
    block = 128
    while remaining > 0 and not deadline.expired():
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1 and remaining > 0:
            x = y
            steps = min(r, remaining)
            for _ in range(steps):
                y = (y * y + c) % n
            remaining -= steps
            k = 0
            while k < r and g == 1 and remaining > 0:
                ys = y
                span = min(block, r - k, remaining)
                for _ in range(span):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                remaining -= span
                g = math.gcd(q, n)
                k += span
                if deadline.expired():
                    remaining = 0
            r *= 2
        if g == n:
            # The batched gcd overshot: redo the last block one step at
            # a time from the saved point.
            g = 1
            for _ in range(block + 1):
                ys = (ys * ys + c) % n
                g = math.gcd(x - ys, n)
                if g > 1:
                    break
        if 1 < g < n:
            return g
        # g == 1 (budget out) or g == n (degenerate cycle): retry with
        # fresh parameters if budget remains.
    return None


@lru_cache(maxsize=8)
def _pm1_exponent_primes(bound: int) -> tuple[tuple[int, int], ...]:
    """(p, e) with p^e the largest power <= bound, largest primes first.

    Descending order puts the 2-power tail last, which is where smooth
    factors that saturate together most often come apart.
    """
    out = []
    for p in arith.primes_upto(bound):
        e = 1
        while p ** (e + 1) <= bound:
            e += 1
        out.append((p, e))
    return tuple(reversed(out))


def pollard_p_minus_1(n: int, policy: FactorPolicy = DEFAULT_POLICY,
                      deadline: Deadline = _NO_DEADLINE) -> int | None:
    """Stage-1 p-1 up to the policy bound; divisor or None.

    Splits n when some prime p | n has p-1 smooth to the bound, which is
    common here because prime factors of 2^d - 1 satisfy d | p - 1.  Runs
    the fixed bases 2, 3, 5 (deterministic); when a batch saturates every
    factor at once it is replayed one multiplication at a time to catch
    the separation point.
    """
    if n < 9 or n % 2 == 0:
        raise ValueError("pollard_p_minus_1 needs an odd composite >= 9")
    bound = policy.p_minus_1_bound
    if bound < 2:
        return None
    plan = _pm1_exponent_primes(bound)
    checkpoint = 64
    for a in (2, 3, 5):
        if deadline.expired():
            return None
        g = math.gcd(a, n)
        if g == n:
            continue
        if g > 1:
            return g
        x = a
        i = 0
        while i < len(plan):
            saved = x
            batch = plan[i:i + checkpoint]
            for p, e in batch:
                x = pow(x, p**e, n)
            i += len(batch)
            g = math.gcd(x - 1, n)
            if g == 1:
                if deadline.expired():
                    return None
                continue
            if g < n:
                return g
            # The whole batch saturated every factor at once; replay it
            # one multiplication at a time.
            x = saved
            for p, e in batch:
                for _ in range(e):
                    x = pow(x, p, n)
                    g = math.gcd(x - 1, n)
                    if 1 < g < n:
                        return g
                    if g == n:
                        break
                if g == n:
                    break
            break  # this base cannot separate the factors
    return None


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root by Newton iteration."""
    if n < 2:
        return n
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x


def perfect_power(n: int) -> tuple[int, int] | None:
    """(base, k) with base**k == n and k maximal >= 2, else None."""
    if n < 4:
        return None
    best = None
    for k in arith.primes_upto(n.bit_length()):
        r = _iroot(n, k)
        if r**k == n:
            best = (r, k)
            sub = perfect_power(r)
            if sub:
                best = (sub[0], sub[1] * k)
            break
    return best


def factor(n: int, policy: FactorPolicy = DEFAULT_POLICY,
           deadline: Deadline = _NO_DEADLINE) -> Factorization:
    """Full pipeline; Partial with a composite cofactor when budgets exhaust."""
    if n < 1:
        raise ValueError("factor needs n >= 1")
    if n == 1:
        return Factorization({})
    found, remaining = trial_division(n, policy)
    factors: dict[int, int] = {}
    for p, e in found:
        factors[p] = factors.get(p, 0) + e
    probable: set[int] = set()
    cofactor = 1
    stack: list[tuple[int, int]] = [(remaining, 1)] if remaining > 1 else []
    while stack:
        m, mult = stack.pop()
        while m % 2 == 0:  # residue-hinted trial division can leave even parts
            factors[2] = factors.get(2, 0) + mult
            m //= 2
        if m == 1:
            continue
        verdict = is_probable_prime(m, policy)
        if verdict != Verdict.COMPOSITE:
            factors[m] = factors.get(m, 0) + mult
            if verdict == Verdict.PROBABLE_PRIME:
                probable.add(m)
            continue
        if deadline.expired():
            cofactor *= m**mult
            continue
        power = perfect_power(m)
        if power:
            stack.append((power[0], mult * power[1]))
            continue
        divisor = pollard_p_minus_1(m, policy, deadline)
        if divisor is None:
            divisor = pollard_rho(m, policy, deadline)
        if divisor is None:
            cofactor *= m**mult
            continue
        stack.append((divisor, mult))
        stack.append((m // divisor, mult))
    result = Factorization(
        dict(sorted(factors.items())),
        cofactor if cofactor > 1 else None,
        frozenset(probable),
    )
    if result.value() != n:
        raise AssertionError(f"factorization of {n} failed to reconstruct")
    return result
