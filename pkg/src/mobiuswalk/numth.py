"""Number-theory oracles along the square-free sequence.

Everything here is exact counting over a streamed sieve plus the handful
of analytic estimates they are compared against: the prime counting
integral, the log log law for the mean number of prime divisors, and the
shifted Poisson model for the factor-count classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, log

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .seqgen import PI2_OVER_6, iter_mobius, nth_squarefree
from .statcore import PValue, chi2_pvalue

_SERIES_TOL = 1e-12


def primorial(q: int) -> int:
    """Product of the first q primes (arbitrary precision)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    out = 1
    count = 0
    candidate = 1
    while count < q:
        candidate += 1
        if all(candidate % p for p in range(2, isqrt(candidate) + 1)):
            out *= candidate
            count += 1
    return out


@lru_cache(maxsize=None)
def _primorials_upto(bound: int) -> tuple:
    vals = []
    prod = 1
    p = 1
    while True:
        p += 1
        if all(p % d for d in range(2, isqrt(p) + 1)):
            prod *= p
            if prod > bound:
                return tuple(vals)
            vals.append(prod)


def factor_squarefree(value: int) -> list[int]:
    """Prime factors of a square-free integer; rejects squared factors."""
    if value < 1:
        raise ValueError(f"value must be >= 1, got {value}")
    factors = []
    x = value
    d = 2
    while d * d <= x:
        if x % d == 0:
            x //= d
            if x % d == 0:
                raise ValueError(f"{value} is not square-free (divisible by {d}^2)")
            factors.append(d)
        d += 1 if d == 2 else 2
    if x > 1:
        factors.append(x)
    return factors


def omega(sqf_value: int) -> int:
    """Number of distinct prime factors of a square-free integer."""
    return len(factor_squarefree(sqf_value))


def term_count(sqf_value: int) -> int:
    """The unique eta with primorial(eta) <= value < primorial(eta+1)."""
    if sqf_value < 2:
        raise ValueError(f"value must be >= 2, got {sqf_value}")
    factor_squarefree(sqf_value)  # raises on non-square-free input
    prims = _primorials_upto(sqf_value)
    return len(prims)


@dataclass(frozen=True)
class SqfSnapshot:
    """Accumulated statistics over the first n square-free numbers."""

    n: int
    sqf_n: int
    prime_count: int
    omega_sum: int
    omega_sumsq: int
    mertens: int
    class_counts: np.ndarray  # index k -> # with omega == k (k=0 counts the unit)
    div_counts: dict  # prime -> # divisible


def scan_squarefree(n: int, checkpoints: tuple = (), div_primes: tuple = ()) -> list[SqfSnapshot]:
    """One streamed pass over the first n square-free numbers.

    Returns snapshots at each requested checkpoint ordinal plus the final
    one at n.  Per-checkpoint work inside a segment is O(1) after a single
    set of prefix sums, so thousands of checkpoints are cheap.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    marks = sorted(set(int(c) for c in checkpoints) | {n})
    if marks[0] < 1 or marks[-1] > n:
        raise ValueError(f"checkpoints must lie in [1, {n}]")
    hi = nth_squarefree(n) + 1
    max_k = 24

    seen = 0
    prime_count = 0
    omega_sum = 0
    omega_sumsq = 0
    mertens = 0
    cls = np.zeros(max_k, dtype=np.int64)
    div = {int(p): 0 for p in div_primes}
    snapshots: list[SqfSnapshot] = []
    next_mark = 0

    for seg_lo, seg_hi, mu, om in iter_mobius(1, hi, want_omega=True):
        mask = mu != 0
        seg_count = int(np.count_nonzero(mask))

        if next_mark < len(marks) and seen + seg_count >= marks[next_mark]:
            # prefix sums once per segment, then O(1) per checkpoint
            cum_mask = np.cumsum(mask)
            om_sel = np.where(mask, om, 0).astype(np.int64)
            cum_om = np.cumsum(om_sel)
            cum_om2 = np.cumsum(om_sel * om_sel)
            cum_prime = np.cumsum(mask & (om == 1))
            cum_mu = np.cumsum(mu, dtype=np.int64)
            cum_cls = {k: np.cumsum(mask & (om == k)) for k in range(max_k)
                       if np.any(om[mask] == k)}
            div_pos = {p: np.nonzero(mask[(-seg_lo) % p::p])[0] for p in div}
            while next_mark < len(marks) and seen + seg_count >= marks[next_mark]:
                c = marks[next_mark]
                i = int(np.searchsorted(cum_mask, c - seen, side="left"))
                cp_cls = cls.copy()
                for k, cum in cum_cls.items():
                    cp_cls[k] += int(cum[i])
                snapshots.append(SqfSnapshot(
                    n=c,
                    sqf_n=seg_lo + i,
                    prime_count=prime_count + int(cum_prime[i]),
                    omega_sum=omega_sum + int(cum_om[i]),
                    omega_sumsq=omega_sumsq + int(cum_om2[i]),
                    mertens=mertens + int(cum_mu[i]),
                    class_counts=cp_cls,
                    div_counts={p: div[p] + int(np.searchsorted(
                        pos, (i - (-seg_lo) % p) // p, side="right"))
                        for p, pos in div_pos.items()},
                ))
                next_mark += 1

        sel = om[mask]
        prime_count += int(np.count_nonzero(sel == 1))
        omega_sum += int(sel.sum(dtype=np.int64))
        omega_sumsq += int((sel.astype(np.int64) ** 2).sum())
        mertens += int(mu.sum(dtype=np.int64))
        cls += np.bincount(sel, minlength=max_k).astype(np.int64)
        for p in div:
            div[p] += int(mask[(-seg_lo) % p::p].sum())
        seen += seg_count
        if next_mark >= len(marks):
            break
    return snapshots


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-6, max_depth: int = 60) -> float:
    """Plain adaptive Simpson quadrature to absolute tolerance."""
    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    m = 0.5 * (a + b)
    stack = [(a, b, f(a), f(m), f(b), simpson(a, b, f(a), f(m), f(b)), tol, 0)]
    total = 0.0
    while stack:
        x0, x2, f0, f1, f2, whole, eps, depth = stack.pop()
        xm = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        flm, frm = f(lm), f(rm)
        left = simpson(x0, xm, f0, flm, f1)
        right = simpson(xm, x2, f1, frm, f2)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * eps:
            total += left + right + (left + right - whole) / 15.0
        else:
            stack.append((x0, xm, f0, flm, f1, left, eps / 2.0, depth + 1))
            stack.append((xm, x2, f1, frm, f2, right, eps / 2.0, depth + 1))
    return total


def li_squarefree(x: float, tol: float = 1e-6) -> float:
    """Prime-count estimate along square-free numbers: int_2^x dt/log(t+1)."""
    if x <= 2:
        return 0.0
    return adaptive_simpson(lambda t: 1.0 / log(t + 1.0), 2.0, float(x), tol)


def pi_sqf_exact(n: int) -> int:
    """Exact number of primes among the first n square-free numbers."""
    return scan_squarefree(n)[-1].prime_count


def pi_sqf_theoretical(n: int) -> float:
    return li_squarefree(nth_squarefree(n))


def divisor_probability_check(p: int, n: int) -> tuple[float, float]:
    """(empirical, theoretical) probability that a square-free number is
    divisible by the prime p; theoretical value is 1/(p+1)."""
    if any(p % d == 0 for d in range(2, isqrt(p) + 1)) or p < 2:
        raise ValueError(f"{p} is not prime")
    snap = scan_squarefree(n, div_primes=(p,))[-1]
    return snap.div_counts[p] / n, 1.0 / (p + 1)


@dataclass(frozen=True)
class Constants:
    kronecker_A: float
    series_B: float
    omega_offset: float
    variance_correction: float


@lru_cache(maxsize=1)
def constants_compute() -> Constants:
    """Recompute the constants of the log log law for the mean of omega.

    A is the Kronecker (Mertens) constant; B and the variance correction
    come from the alternating series over prime powers with the prime sums
    smoothed by the density 1/log t, integrated from 2.
    """
    a_const = float(np.euler_gamma)
    mu_sign = _mu_small(128)
    k = 2
    while True:
        term = log(float(zeta(k))) / k
        a_const += mu_sign[k] * term
        if term < _SERIES_TOL:
            break
        k += 1

    b_const = 0.0
    k = 2
    while True:
        i_k = quad(lambda t, kk=k: t ** (-kk) / log(t), 2.0, np.inf, epsabs=1e-14)[0]
        b_const += (-1) ** k * i_k
        if i_k < _SERIES_TOL:
            break
        k += 1

    var_corr = 0.0
    k = 1
    while True:
        i_k = quad(lambda t, kk=k: t ** (-(kk + 1)) / log(t), 2.0, np.inf, epsabs=1e-14)[0]
        var_corr += (-1) ** (k - 1) * k * i_k
        if k * i_k < _SERIES_TOL:
            break
        k += 1

    return Constants(a_const, b_const, a_const - b_const, var_corr)


def _mu_small(n: int) -> np.ndarray:
    mus = np.ones(n + 1, dtype=np.int64)
    mus[0] = 0
    for p in range(2, n + 1):
        if all(p % q for q in range(2, isqrt(p) + 1)):
            mus[p::p] *= -1
            mus[p * p::p * p] = 0
    return mus


def omega_mean_theoretical(n: int) -> float:
    return log(log(PI2_OVER_6 * n + 1.0)) + constants_compute().omega_offset


@dataclass(frozen=True)
class OmegaStats:
    n: int
    mean_observed: float
    mean_theoretical: float
    variance_observed: float
    lam: float


def omega_stats(n: int) -> OmegaStats:
    """Observed vs predicted average number of prime divisors."""
    if n < 1000:
        raise ValueError(f"n must be >= 1000 for the asymptotic formula, got {n}")
    snap = scan_squarefree(n)[-1]
    mean = snap.omega_sum / n
    var = snap.omega_sumsq / n - mean * mean
    mean_th = omega_mean_theoretical(n)
    return OmegaStats(n, mean, mean_th, var, mean_th - 1.0)


@dataclass(frozen=True)
class ClassCounts:
    """Square-free numbers <= sqf_n grouped by number of prime factors.

    counts[k] is N_k for k >= 1; counts[0] = 1 accounts for the unit,
    which carries mu = +1 and therefore joins the even (n_plus) side.
    """

    n: int
    counts: np.ndarray
    n_plus: int
    n_minus: int

    @property
    def alternating_sum(self) -> int:
        signs = np.where(np.arange(self.counts.size) % 2 == 0, 1, -1)
        return int(np.sum(signs * self.counts))


def class_counts(n: int) -> ClassCounts:
    snap = scan_squarefree(n)[-1]
    q = len(_primorials_upto(snap.sqf_n)) if snap.sqf_n >= 2 else 0
    counts = snap.class_counts[:max(q + 1, int(np.max(np.nonzero(snap.class_counts)[0])) + 1)].copy()
    evens = int(counts[0::2].sum())
    odds = int(counts[1::2].sum())
    return ClassCounts(n, counts, evens, odds)


@dataclass(frozen=True)
class PoissonFit:
    chi2: float
    dof: int
    p_value: PValue
    ks: tuple
    observed: tuple
    expected: tuple


def poisson_fit(cc: ClassCounts, lam: float) -> PoissonFit:
    """Goodness of the shifted Poisson model P(k) = lam^(k-1) e^-lam/(k-1)!.

    Only categories with expected count >= 5 enter the chi-square; the
    result is a report, not a hard verdict.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    ks, obs, exp = [], [], []
    for k in range(1, cc.counts.size):
        e = cc.n * math.exp(-lam) * lam ** (k - 1) / math.factorial(k - 1)
        if e >= 5.0:
            ks.append(k)
            obs.append(int(cc.counts[k]))
            exp.append(e)
    if not ks:
        raise ValueError("all expected class counts below 5; fit is degenerate")
    chi2 = sum((o - e) ** 2 / e for o, e in zip(obs, exp))
    dof = max(1, len(ks) - 1)
    return PoissonFit(chi2, dof, chi2_pvalue(chi2, dof), tuple(ks), tuple(obs), tuple(exp))


def erdos_kac_normalize(n: int, omega_value: int) -> float:
    """Center and scale omega by the log log law."""
    t = log(log(PI2_OVER_6 * n + 1.0))
    if t <= 0:
        raise ValueError(f"log log((pi^2/6)n+1) must be positive, got n={n}")
    return (omega_value - t) / math.sqrt(t)


def pi_table(ordinals) -> list[tuple]:
    """Rows (n, observed, theoretical, relative_error) for the prime count."""
    ordinals = sorted(int(v) for v in ordinals)
    snaps = scan_squarefree(ordinals[-1], checkpoints=tuple(ordinals))
    rows = []
    for snap in snaps:
        th = li_squarefree(snap.sqf_n)
        rows.append((snap.n, snap.prime_count, th,
                     abs(th - snap.prime_count) / snap.prime_count))
    return rows


def omega_table(ordinals) -> list[tuple]:
    ordinals = sorted(int(v) for v in ordinals)
    snaps = scan_squarefree(ordinals[-1], checkpoints=tuple(ordinals))
    rows = []
    for snap in snaps:
        mean = snap.omega_sum / snap.n
        th = omega_mean_theoretical(snap.n)
        rows.append((snap.n, mean, th, abs(th - mean) / mean))
    return rows


def divisor_table(primes, n: int) -> list[tuple]:
    snap = scan_squarefree(n, div_primes=tuple(primes))[-1]
    return [(p, snap.div_counts[p] / n, 1.0 / (p + 1),
             abs(snap.div_counts[p] / n - 1.0 / (p + 1)) * (p + 1))
            for p in primes]
