"""Persistent, mergeable cache of factorizations keyed by kind and index.

Storage is a single plain-text file, one record per line:

    phi2 11 = 23 89
    phi2 360 = 37361^2 64513? C:123456789
    m- 11 = 23 89

A factor is ``prime``, optionally ``^exponent``, optionally a trailing
``?`` marking a probable (not proven) prime; ``C:digits`` is the
unfactored composite cofactor.  '#' starts a comment.  Every record is
checked on load against the exact value implied by its key.

The store also ingests OEIS-style b-files ("index value" lines) that
supply tau(2^n -+ 1) and omega(Phi_d(2)) beyond native factoring reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import cyclotomic
from .errors import StoreCorruptionError, StoreParseError
from .factoring import (DEFAULT_POLICY, Deadline, FactorPolicy, Factorization,
                        Verdict, _NO_DEADLINE, DETERMINISTIC_MR_BOUND,
                        is_probable_prime)


class Kind(Enum):
    PHI2 = "phi2"
    MERSENNE_MINUS = "m-"
    MERSENNE_PLUS = "m+"


_KIND_ORDER = {Kind.PHI2: 0, Kind.MERSENNE_MINUS: 1, Kind.MERSENNE_PLUS: 2}
_KIND_BY_TOKEN = {k.value: k for k in Kind}


@dataclass(frozen=True)
class StoreKey:
    kind: Kind
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("store index must be >= 1")

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.index)

    def __str__(self):
        return f"{self.kind.value} {self.index}"


def key_value(key: StoreKey) -> int:
    """The exact integer a record for this key factors."""
    if key.kind is Kind.PHI2:
        return cyclotomic.phi2(key.index)
    if key.kind is Kind.MERSENNE_MINUS:
        return (1 << key.index) - 1
    return (1 << key.index) + 1


@dataclass
class StoreRecord:
    key: StoreKey
    factorization: Factorization
    provenance: str  # "computed" | "imported"


class BFileKind(Enum):
    TAU_MERSENNE_MINUS = "tau-m-"
    TAU_MERSENNE_PLUS = "tau-m+"
    OMEGA_PHI2 = "omega-phi2"


@dataclass
class BFile:
    """Parsed sequence data: (index, value) pairs, indices strictly increasing."""

    entries: list[tuple[int, int]]

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


def import_bfile(path) -> BFile:
    """Parse an "index value" sequence file.

    Accepts '#' comments and blank lines, and tolerates a single
    non-numeric CSV header line (so the CLI's emitted two-column CSVs
    round-trip through this parser).  Extra columns beyond the first two
    are ignored.
    """
    entries: list[tuple[int, int]] = []
    header_allowed = True
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.replace(",", " ").split()
            if len(fields) < 2:
                raise StoreParseError(path, lineno, f"expected 'index value', got {line!r}")
            try:
                index, value = int(fields[0]), int(fields[1])
            except ValueError:
                if header_allowed:
                    header_allowed = False
                    continue
                raise StoreParseError(path, lineno, f"non-numeric entry {line!r}") from None
            header_allowed = False
            if entries and index <= entries[-1][0]:
                raise StoreParseError(path, lineno,
                                      f"index {index} not increasing (previous {entries[-1][0]})")
            entries.append((index, value))
    return BFile(entries)


def _parse_factor_token(token: str, path, lineno):
    probable = token.endswith("?")
    if probable:
        token = token[:-1]
    base, _, exp = token.partition("^")
    try:
        prime = int(base)
        exponent = int(exp) if exp else 1
    except ValueError:
        raise StoreParseError(path, lineno, f"bad factor token {token!r}") from None
    if prime < 2 or exponent < 1:
        raise StoreParseError(path, lineno, f"bad factor token {token!r}")
    return prime, exponent, probable


class FactorStore:
    """In-memory store with text-file persistence and b-file side tables.

    ``ensure_phi2`` is the cache entry point: it returns the stored
    factorization of Phi_d(2) or computes one natively (and caches it).
    Merging on upsert is monotone -- known prime factors never disappear,
    and a record refines an existing one by splitting its cofactor.
    """

    def __init__(self, policy: FactorPolicy = DEFAULT_POLICY):
        self.policy = policy
        self.records: dict[StoreKey, StoreRecord] = {}
        self.tau_tables: dict[BFileKind, dict[int, int]] = {
            BFileKind.TAU_MERSENNE_MINUS: {},
            BFileKind.TAU_MERSENNE_PLUS: {},
        }
        self.omega_phi2_table: dict[int, int] = {}
        self.bfile_sources: dict[BFileKind, str] = {}

    # -- record access -------------------------------------------------

    def get(self, key: StoreKey) -> StoreRecord | None:
        return self.records.get(key)

    def upsert(self, record: StoreRecord, check_primality: bool = True) -> StoreRecord:
        value = key_value(record.key)
        if record.factorization.value() != value:
            raise StoreCorruptionError(
                f"record for {record.key} does not multiply out to its value",
                key=record.key)
        existing = self.records.get(record.key)
        if existing is None:
            merged_fac = self._normalize(record.key, [record.factorization],
                                         check_primality)
            merged = StoreRecord(record.key, merged_fac, record.provenance)
        else:
            merged_fac = self._normalize(
                record.key, [existing.factorization, record.factorization],
                check_primality)
            provenance = existing.provenance
            if merged_fac.factors != existing.factorization.factors:
                provenance = record.provenance
            merged = StoreRecord(record.key, merged_fac, provenance)
        self.records[record.key] = merged
        return merged

    def _normalize(self, key: StoreKey, sources: list[Factorization],
                   check_primality: bool) -> Factorization:
        """Rebuild a canonical factorization of key's value from the union
        of the claimed primes, recomputing every exponent by division."""
        value = key_value(key)
        claimed: set[int] = set()
        proven: set[int] = set()
        for fac in sources:
            claimed.update(fac.factors)
            proven.update(p for p in fac.factors if p not in fac.probable)
        factors: dict[int, int] = {}
        probable: set[int] = set()
        rem = value
        for p in sorted(claimed):
            if rem % p != 0:
                raise StoreCorruptionError(
                    f"claimed factor {p} does not divide the value of {key}", key=key)
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            factors[p] = e
            if p >= DETERMINISTIC_MR_BOUND and p not in proven:
                probable.add(p)
            if check_primality:
                verdict = is_probable_prime(p, self.policy)
                if verdict == Verdict.COMPOSITE:
                    raise StoreCorruptionError(
                        f"claimed factor {p} of {key} is composite", key=key)
        if rem > 1:
            verdict = is_probable_prime(rem, self.policy)
            if verdict != Verdict.COMPOSITE:
                factors[rem] = 1
                if verdict == Verdict.PROBABLE_PRIME:
                    probable.add(rem)
                rem = 1
        return Factorization(dict(sorted(factors.items())),
                             rem if rem > 1 else None, frozenset(probable))

    def ensure_phi2(self, d: int, deadline: Deadline = _NO_DEADLINE) -> Factorization:
        """Cached factorization of Phi_d(2); computes and stores on miss.

        A stored partial record is retried natively so later calls with a
        bigger budget can refine it.  Phi_1(2) = 1 is never stored: the
        record grammar has no empty factor list.
        """
        if d == 1:
            return Factorization({})
        key = StoreKey(Kind.PHI2, d)
        record = self.records.get(key)
        if record is not None and record.factorization.complete:
            return record.factorization
        fac = cyclotomic.factor_phi2(d, self.policy, deadline)
        merged = self.upsert(StoreRecord(key, fac, "computed"), check_primality=False)
        return merged.factorization

    # -- store files ----------------------------------------------------

    def import_store_file(self, path, check_primality: bool = True) -> int:
        """Merge records from a store file; returns the record count read."""
        count = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                record = self._parse_record_line(line, path, lineno)
                try:
                    self.upsert(record, check_primality=check_primality)
                except StoreCorruptionError as exc:
                    raise StoreCorruptionError(f"{path}:{lineno}: {exc}",
                                               key=exc.key) from None
                count += 1
        return count

    def _parse_record_line(self, line: str, path, lineno) -> StoreRecord:
        tokens = line.split()
        if len(tokens) < 4 or tokens[2] != "=":
            raise StoreParseError(path, lineno, f"expected 'kind index = factors', got {line!r}")
        kind = _KIND_BY_TOKEN.get(tokens[0])
        if kind is None:
            raise StoreParseError(path, lineno, f"unknown kind {tokens[0]!r}")
        try:
            index = int(tokens[1])
        except ValueError:
            raise StoreParseError(path, lineno, f"bad index {tokens[1]!r}") from None
        if index < 1:
            raise StoreParseError(path, lineno, "index must be >= 1")
        factors: dict[int, int] = {}
        probable: set[int] = set()
        cofactor = None
        for token in tokens[3:]:
            if token.startswith("C:"):
                if cofactor is not None:
                    raise StoreParseError(path, lineno, "more than one cofactor")
                try:
                    cofactor = int(token[2:])
                except ValueError:
                    raise StoreParseError(path, lineno, f"bad cofactor {token!r}") from None
                if cofactor <= 1:
                    raise StoreParseError(path, lineno, "cofactor must be > 1")
                continue
            prime, exponent, is_probable = _parse_factor_token(token, path, lineno)
            factors[prime] = factors.get(prime, 0) + exponent
            if is_probable:
                probable.add(prime)
        fac = Factorization(dict(sorted(factors.items())), cofactor, frozenset(probable))
        return StoreRecord(StoreKey(kind, index), fac, "imported")

    def export_text(self) -> str:
        """The store serialized in key order, header comment first."""
        lines = ["# mersennetau factor store v1"]
        for key in sorted(self.records, key=StoreKey.sort_key):
            fac = self.records[key].factorization
            parts = []
            for p, e in sorted(fac.factors.items()):
                token = str(p) if e == 1 else f"{p}^{e}"
                if p in fac.probable:
                    token += "?"
                parts.append(token)
            if fac.cofactor is not None:
                parts.append(f"C:{fac.cofactor}")
            lines.append(f"{key.kind.value} {key.index} = " + " ".join(parts))
        return "\n".join(lines) + "\n"

    def export_store_file(self, path) -> int:
        """Write all records in key order; returns the record count."""
        Path(path).write_text(self.export_text(), encoding="utf-8")
        return len(self.records)

    # -- b-files ---------------------------------------------------------

    def attach_bfile(self, kind: BFileKind, path) -> BFile:
        """Import a sequence b-file and wire it in as a lookup table."""
        bfile = import_bfile(path)
        if kind is BFileKind.OMEGA_PHI2:
            self.omega_phi2_table.update(bfile.as_dict())
        else:
            self.tau_tables[kind].update(bfile.as_dict())
        self.bfile_sources[kind] = str(path)
        return bfile

    def imported_tau(self, index: int, kind: BFileKind) -> int | None:
        return self.tau_tables[kind].get(index)

    def imported_omega_phi2(self, d: int) -> int | None:
        return self.omega_phi2_table.get(d)
