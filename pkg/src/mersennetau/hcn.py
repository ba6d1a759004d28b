"""Highly composite numbers (HCN): N with tau(N) > tau(m) for all m < N.

Candidates are generated as products of consecutive primes 2, 3, 5, ...
with nonincreasing positive exponents -- every HCN has that shape -- and
records are then filtered by tau.  The brute-force record scan is used
only as a test oracle.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from . import arith


@dataclass(frozen=True)
class HcnRecord:
    n: int
    exponents: tuple[int, ...]  # nonincreasing, over primes 2, 3, 5, ...
    tau: int

    def __post_init__(self):
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be positive")
        if any(a < b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be nonincreasing")
        primes = arith.primes_upto(200)
        n = math.prod(p**e for p, e in zip(primes, self.exponents))
        if n != self.n or math.prod(e + 1 for e in self.exponents) != self.tau:
            raise ValueError("inconsistent HCN record")


def exponent_candidates(limit: int) -> list[tuple[int, tuple[int, ...]]]:
    """All (value, exponents) with nonincreasing exponents and value <= limit."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    primes = []
    prod = 1
    table = arith.shared_table()
    i = 0
    while True:
        table.ensure_count(i + 1)
        prod *= table.primes[i]
        if prod > limit:
            break
        primes.append(table.primes[i])
        i += 1
    if not primes and limit >= 2:
        primes = [2]
    out: list[tuple[int, tuple[int, ...]]] = [(1, ())]

    def descend(i: int, value: int, cap: int, exps: tuple[int, ...]) -> None:
        p = primes[i]
        e = 1
        v = value * p
        while v <= limit and e <= cap:
            out.append((v, exps + (e,)))
            if i + 1 < len(primes) and v * primes[i + 1] <= limit:
                descend(i + 1, v, e, exps + (e,))
            e += 1
            v *= p

    if primes:
        descend(0, 1, limit.bit_length(), ())
    return sorted(out)


def enumerate_hcn(limit: int) -> list[HcnRecord]:
    """All highly composite numbers <= limit, in increasing order."""
    records = []
    best = 0
    for value, exps in exponent_candidates(limit):
        t = math.prod(e + 1 for e in exps)
        if t > best:
            best = t
            records.append(HcnRecord(value, exps, t))
    return records


_cache_lock = threading.Lock()
_cached: tuple[int, list[HcnRecord]] = (0, [])


def _records_upto(limit: int) -> list[HcnRecord]:
    global _cached
    with _cache_lock:
        bound, records = _cached
        if limit > bound:
            records = enumerate_hcn(max(limit, 2 * bound))
            _cached = (max(limit, 2 * bound), records)
        return records


def largest_hcn_leq(n: int) -> HcnRecord:
    """The maximal HCN <= n; always exceeds n/2 since tau(2m) > tau(m)."""
    if n < 1:
        raise ValueError("largest_hcn_leq needs n >= 1")
    records = _records_upto(n)
    best = None
    for rec in records:
        if rec.n > n:
            break
        best = rec
    if best is None or 2 * best.n <= n:
        raise AssertionError(f"HCN gap contradiction at n={n}")
    return best


def tau_jump(record: HcnRecord) -> int:
    """tau(2N) - tau(N), asserted equal to tau(N) / (e_1 + 1) exactly."""
    e1 = record.exponents[0] if record.exponents else 0
    exps2 = (e1 + 2,) + tuple(e + 1 for e in record.exponents[1:])
    jump = math.prod(exps2) - record.tau
    quotient, r = divmod(record.tau, e1 + 1)
    if r or jump != quotient:
        raise AssertionError(f"tau jump identity fails at N={record.n}")
    return jump


def hcn_tau_exponent(record: HcnRecord) -> float:
    """log2(tau(N)) * log(log N) / log N, the quantity trending to 1.

    Experiment output only; nothing about convergence is asserted.
    """
    if record.n < 3:
        raise ValueError("log log N undefined for N <= 2")
    return math.log2(record.tau) * math.log(math.log(record.n)) / math.log(record.n)
