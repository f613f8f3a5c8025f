"""Exact integer arithmetic: valuations, residue symbols, factorization,
power-free tests, cube decomposition and the Pell conic a^2 + 11ab - b^2 = 19.

Everything here works on Python ints and is free of shared mutable state
except for the bounded factorization memo, which is per-process.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator


class FactorizationIncomplete(ArithmeticError):
    """Raised when a composite cofactor survives the configured work budget."""

    def __init__(self, n: int, cofactor: int):
        super().__init__(f"could not split {cofactor} (while factoring {n})")
        self.n = n
        self.cofactor = cofactor


class _Infinity:
    """Valuation of zero. Compares greater than every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "∞"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INF - INF")
        return self


INF = _Infinity()


def valuation(n: int, p: int):
    """Largest k with p**k | n; ``INF`` for n == 0."""
    if n == 0:
        return INF
    if n < 0:
        n = -n
    k = 0
    # peel off p^8 at a time before single steps; matters for Δ^k-sized inputs
    p8 = p ** 8
    while n % p8 == 0:
        n //= p8
        k += 8
    while n % p == 0:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------- primality

_SMALL_PRIMES_LIMIT = 1 << 16


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


SMALL_PRIMES = _sieve(_SMALL_PRIMES_LIMIT)
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)

# deterministic for n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, error < 2^-64 beyond."""
    if n < 2:
        return False
    if n <= _SMALL_PRIMES_LIMIT:
        return n in _SMALL_PRIME_SET
    for p in SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if not _strong_probable_prime(n, a, d, s):
            return False
    if n < 3317044064679887385961981:
        return True
    rng = random.Random(n)
    for _ in range(32):
        if not _strong_probable_prime(n, rng.randrange(2, n - 1), d, s):
            return False
    return True


# ---------------------------------------------------------------- factoring


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization; ``pairs`` sorted by prime."""

    sign: int
    pairs: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def value(self) -> int:
        v = self.sign
        for p, e in self.pairs:
            v *= p**e
        return v

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def exponent(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


# Total Brent iterations allowed per composite cofactor. Roughly enough to
# pull out any prime factor below ~10^13; callers may raise it.
DEFAULT_BUDGET = 4_000_000
TRIAL_LIMIT = 1000
_TRIAL_PRIMES = [p for p in SMALL_PRIMES if p < TRIAL_LIMIT]


def _brent(n: int, budget: int, seed: int) -> int | None:
    """One Pollard-Brent run; returns a nontrivial factor or None."""
    rng = random.Random(seed)
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        used += r
        r <<= 1
        if used > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in range(2, n.bit_length() + 1):
        r = iroot(n, k)
        if r < 2:
            break
        if r**k == n:
            return r, k
    return None


def _split_large(n: int, budget: int, out: dict[int, int], mult: int, top: int):
    """Factor n > 1 with no prime factor below TRIAL_LIMIT into ``out``."""
    stack = [(n, mult)]
    while stack:
        m, e = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(m):
            out[m] = out.get(m, 0) + e
            continue
        pp = _perfect_power(m)
        if pp is not None:
            stack.append((pp[0], e * pp[1]))
            continue
        d = None
        for attempt in range(8):
            d = _brent(m, budget, seed=m + attempt)
            if d is not None:
                break
        if d is None:
            raise FactorizationIncomplete(top, m)
        stack.append((d, e))
        stack.append((m // d, e))


@lru_cache(maxsize=1 << 16)
def _factor_positive(n: int, budget: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    m = n
    for p in _TRIAL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        _split_large(m, budget, out, 1, n)
    # cofactors split by Brent can produce the same prime twice
    return tuple(sorted(out.items()))


def factorize(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Complete factorization of a nonzero integer.

    Trial division by primes below 1000, then Pollard-Brent on the composite
    part. A cofactor that resists ``budget`` iterations raises
    FactorizationIncomplete rather than being reported as prime.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    if n == 1:
        return Factorization(sign, ())
    return Factorization(sign, _factor_positive(n, budget))


def prime_divisors(n: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    return factorize(n, budget).primes()


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, exact."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def exact_root(n: int, k: int) -> int | None:
    """Integer r with r**k == n, or None. Odd k accepts negative n."""
    if n < 0:
        if k % 2 == 0:
            return None
        r = exact_root(-n, k)
        return None if r is None else -r
    r = iroot(n, k)
    return r if r**k == n else None


def is_kth_power_free(n: int, k: int, budget: int = DEFAULT_BUDGET) -> bool:
    if k < 2:
        raise ValueError("k must be at least 2")
    if n == 0:
        raise ValueError("0 is divisible by every power")
    return all(e < k for _, e in factorize(n, budget))


def is_squarefree(n: int) -> bool:
    return is_kth_power_free(n, 2)


# ---------------------------------------------------------------- symbols


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n. No primality check."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p); p must be an odd prime."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return jacobi(a, p)


# ---------------------------------------------------------------- a = c^3 d^2 e


@dataclass(frozen=True)
class CubeDecomposition:
    c: int
    d: int
    e: int


def cube_decompose(a: int, budget: int = DEFAULT_BUDGET) -> CubeDecomposition:
    """The unique c, d, e > 0 with a = c^3 d^2 e and d*e squarefree."""
    if a < 1:
        raise ValueError("a must be positive")
    c = d = e = 1
    for p, k in factorize(a, budget):
        q, r = divmod(k, 3)
        c *= p**q
        if r == 2:
            d *= p
        elif r == 1:
            e *= p
    return CubeDecomposition(c, d, e)


# ---------------------------------------------------------------- Pell conic

# binary quadratic form A a^2 + B ab + C b^2 with value N
_PELL_FORM = (1, 11, -1)
_PELL_VALUE = 19


def _fundamental_unit(disc: int) -> tuple[int, int]:
    """Smallest u >= 1 with t^2 - disc*u^2 = 4 solvable; returns (t, u)."""
    u = 1
    while True:
        t2 = disc * u * u + 4
        t = math.isqrt(t2)
        if t * t == t2:
            return t, u
        u += 1


@lru_cache(maxsize=None)
def _pell_automorph() -> tuple[int, int, int, int]:
    A, B, C = _PELL_FORM
    t, u = _fundamental_unit(B * B - 4 * A * C)
    # proper automorph of (A, B, C) attached to (t + u sqrt(D))/2
    return ((t - B * u) // 2, -C * u, A * u, (t + B * u) // 2)


def _form(a: int, b: int) -> int:
    A, B, C = _PELL_FORM
    return A * a * a + B * a * b + C * b * b


def _solutions_with_bounded_b(limit: int) -> list[tuple[int, int]]:
    """All solutions with |b| <= limit, by solving for a."""
    A, B, C = _PELL_FORM
    sols = []
    for b in range(-limit, limit + 1):
        # A a^2 + (B b) a + (C b^2 - N) = 0
        disc = (B * b) ** 2 - 4 * A * (C * b * b - _PELL_VALUE)
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for num in {-B * b + s, -B * b - s}:
            if num % (2 * A) == 0:
                sols.append((num // (2 * A), b))
    return sols


def pell19_solutions(bound: int) -> list[tuple[int, int]]:
    """All integer (a, b) with a^2 + 11ab - b^2 = 19 and max(|a|,|b|) <= bound.

    Seeds are the small solutions; every solution is reached from a seed by
    a power of the form's automorph, and the automorph grows coordinates by a
    factor above 100 per step, so a handful of steps each way covers the box.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    p, q, r, s = _pell_automorph()
    seeds = _solutions_with_bounded_b(p + q + r + s)
    steps = 2
    while 100**steps <= bound:
        steps += 1
    found = set()
    for a0, b0 in seeds:
        for m in ((p, q, r, s), (s, -q, -r, p)):
            a, b = a0, b0
            for _ in range(steps + 2):
                if max(abs(a), abs(b)) <= bound:
                    found.add((a, b))
                a, b = m[0] * a + m[1] * b, m[2] * a + m[3] * b
    out = sorted(x for x in found if _form(*x) == _PELL_VALUE)
    return out
