"""Segmented Mobius sieve and the bit-packed square-free sequence.

The sequence under study lists mu at square-free numbers only, recoded as
bits: bit = (mu + 1) / 2, so 0 stands for mu = -1 and 1 for mu = +1.
Ordinals are 1-based with square-free number #1 equal to 1.

Windows of exact mu values are produced by a classic segmented sieve:
mark multiples of p^2 as zero, divide each entry by every prime p <=
sqrt(hi) that divides it, and flip the sign once more when a single
prime factor > sqrt(hi) is left over.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from math import isqrt
from typing import Iterator

import numpy as np

DEFAULT_SEGMENT = 1 << 22
MAX_WINDOW = 1 << 26

MAGIC = b"MSF1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQQ")

PI2_OVER_6 = 1.6449340668482264


class SequenceFormatError(ValueError):
    """Raised when a sequence file has a bad magic, version, or size."""


class SegmentBudgetError(RuntimeError):
    """Raised when a single requested window exceeds the memory budget."""


_prime_cache: dict[str, np.ndarray] = {}


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit, cached per process (grows monotonically)."""
    cached = _prime_cache.get("primes")
    if cached is None or _prime_cache["limit"] < limit:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        cached = np.nonzero(sieve)[0].astype(np.int64)
        _prime_cache["primes"] = cached
        _prime_cache["limit"] = limit
    return cached[cached <= limit]


@dataclass(frozen=True)
class MobiusWindow:
    """Exact mu values on [lo, hi): values[m - lo] = mu(m)."""

    lo: int
    hi: int
    values: np.ndarray  # int8, entries in {-1, 0, +1}

    def __len__(self):
        return self.hi - self.lo


def _sieve_segment(lo: int, hi: int, primes: np.ndarray, want_omega: bool):
    n = hi - lo
    mu = np.ones(n, dtype=np.int8)
    omega = np.zeros(n, dtype=np.uint8) if want_omega else None
    residue = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        start = (-lo) % p
        mu[start::p] = -mu[start::p]
        residue[start::p] //= p
        if want_omega:
            omega[start::p] += 1
        p2 = p * p
        mu[(-lo) % p2::p2] = 0
    leftover = residue > 1
    mu[leftover] = -mu[leftover]
    if want_omega:
        omega[leftover] += 1
    if lo == 0:
        mu[0] = 0  # mu(0) undefined; keep the slot inert
    return mu, omega


def iter_mobius(lo: int, hi: int, segment: int = DEFAULT_SEGMENT,
                want_omega: bool = False) -> Iterator[tuple]:
    """Stream (seg_lo, seg_hi, mu[, omega]) covering [lo, hi) in order."""
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    primes = base_primes(isqrt(hi - 1) + 1)
    for seg_lo in range(lo, hi, segment):
        seg_hi = min(seg_lo + segment, hi)
        mu, omega = _sieve_segment(seg_lo, seg_hi, primes, want_omega)
        if want_omega:
            yield seg_lo, seg_hi, mu, omega
        else:
            yield seg_lo, seg_hi, mu


def mobius_range(lo: int, hi: int, segment: int = DEFAULT_SEGMENT,
                 max_window: int = MAX_WINDOW) -> MobiusWindow:
    """Exact mu values on [lo, hi) as one in-memory window."""
    if not 1 <= lo < hi:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    if hi - lo > max_window:
        raise SegmentBudgetError(
            f"window of {hi - lo} integers exceeds budget {max_window}; "
            "use iter_mobius to stream")
    chunks = [mu for _, _, mu in iter_mobius(lo, hi, segment)]
    return MobiusWindow(lo, hi, np.concatenate(chunks))


def squarefree_count(x: int) -> int:
    """Q(x): exact number of square-free integers in [1, x]."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    r = isqrt(x)
    mu = mobius_range(1, r + 1).values.astype(np.int64)
    d = np.arange(1, r + 1, dtype=np.int64)
    return int(np.sum(mu * (x // (d * d))))


def nth_squarefree(n: int) -> int:
    """The n-th square-free number (1-based, sqf_1 = 1)."""
    if n < 1:
        raise ValueError(f"ordinal must be >= 1, got {n}")
    if n == 1:
        return 1
    # Q(x) ~ x * 6/pi^2, so bracket around the linear estimate and bisect
    # for the smallest x with Q(x) >= n; that x is itself square-free.
    guess = int(n * PI2_OVER_6)
    lo, hi = max(1, guess - 10), guess + 10
    while squarefree_count(lo) >= n:
        lo = max(1, lo - max(64, (hi - lo) * 2))
    while squarefree_count(hi) < n:
        hi += max(64, (hi - lo) * 2)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if squarefree_count(mid) >= n:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class BitSequence:
    """A window of the bit sequence, packed LSB-first within each byte."""

    start_ordinal: int
    length: int
    bits: np.ndarray  # uint8, ceil(length/8) bytes, pad bits zero

    def __post_init__(self):
        if self.start_ordinal < 1:
            raise ValueError(f"start_ordinal must be >= 1, got {self.start_ordinal}")
        if self.bits.size != (self.length + 7) // 8:
            raise ValueError(
                f"payload has {self.bits.size} bytes, expected {(self.length + 7) // 8}")

    @classmethod
    def from_bits(cls, start_ordinal: int, bit_values: np.ndarray) -> "BitSequence":
        packed = np.packbits(bit_values.astype(np.uint8), bitorder="little")
        return cls(start_ordinal, int(bit_values.size), packed)

    def covers(self, ordinal: int, count: int) -> bool:
        return (ordinal >= self.start_ordinal
                and ordinal + count <= self.start_ordinal + self.length)

    def slice_bits(self, ordinal: int, count: int) -> np.ndarray:
        """Unpacked {0,1} values for ordinals [ordinal, ordinal + count)."""
        if not self.covers(ordinal, count):
            raise ValueError(
                f"[{ordinal}, {ordinal + count}) not covered by sequence "
                f"[{self.start_ordinal}, {self.start_ordinal + self.length})")
        off = ordinal - self.start_ordinal
        b_lo, b_hi = off // 8, (off + count + 7) // 8
        unpacked = np.unpackbits(self.bits[b_lo:b_hi], bitorder="little")
        return unpacked[off - 8 * b_lo:off - 8 * b_lo + count]

    def slice_mu(self, ordinal: int, count: int) -> np.ndarray:
        """Signed mu values in {-1,+1} for the same window."""
        return (2 * self.slice_bits(ordinal, count).astype(np.int8) - 1)


def iter_restricted_bits(start_ordinal: int, length: int,
                         segment: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Stream unpacked {0,1} chunks of the sequence in ordinal order."""
    if start_ordinal < 1:
        raise ValueError(f"start_ordinal must be >= 1, got {start_ordinal}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    lo = nth_squarefree(start_ordinal)
    hi = nth_squarefree(start_ordinal + length - 1) + 1
    remaining = length
    for _, _, mu in iter_mobius(lo, hi, segment):
        nz = mu[mu != 0]
        if nz.size > remaining:
            nz = nz[:remaining]
        remaining -= nz.size
        yield ((nz + 1) // 2).astype(np.uint8)
        if remaining == 0:
            return
    if remaining:
        raise AssertionError("sieve exhausted before covering the request")


def restricted_sequence(start_ordinal: int, length: int,
                        segment: int = DEFAULT_SEGMENT) -> BitSequence:
    """Materialize the bit sequence for [start_ordinal, start_ordinal+length)."""
    chunks = list(iter_restricted_bits(start_ordinal, length, segment))
    return BitSequence.from_bits(start_ordinal, np.concatenate(chunks))


def write_sequence(seq: BitSequence, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, seq.start_ordinal, seq.length))
        seq.bits.tofile(fh)


def read_sequence(path) -> BitSequence:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise SequenceFormatError(f"{path}: truncated header")
        magic, version, start_ordinal, length = _HEADER.unpack(header)
        if magic != MAGIC:
            raise SequenceFormatError(f"{path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise SequenceFormatError(f"{path}: unsupported version {version}")
        payload = np.fromfile(fh, dtype=np.uint8)
    expected = (length + 7) // 8
    if payload.size != expected:
        raise SequenceFormatError(
            f"{path}: payload has {payload.size} bytes, expected {expected}")
    return BitSequence(start_ordinal, length, payload)


def generate_sequence_file(path, start_ordinal: int, length: int,
                           segment: int = DEFAULT_SEGMENT) -> dict:
    """Stream the sequence straight to disk; returns a small summary.

    Memory use stays bounded by the segment size, so lengths of 1e9+
    ordinals are fine.
    """
    ones = 0
    carry = np.empty(0, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, start_ordinal, length))
        for chunk in iter_restricted_bits(start_ordinal, length, segment):
            ones += int(chunk.sum())
            buf = np.concatenate([carry, chunk]) if carry.size else chunk
            whole = (buf.size // 8) * 8
            np.packbits(buf[:whole], bitorder="little").tofile(fh)
            carry = buf[whole:]
        if carry.size:
            np.packbits(carry, bitorder="little").tofile(fh)
    return {
        "start_ordinal": start_ordinal,
        "length": length,
        "ones": ones,
        "ones_fraction": ones / length,
    }
