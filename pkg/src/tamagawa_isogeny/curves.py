"""Weierstrass models over Q: invariants, changes of variables, p-adic
signatures, global minimal and reduced minimal models, naive height."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .arith import INF, DEFAULT_BUDGET, factorize, valuation

Rational = Union[int, Fraction]


class SingularCurve(ValueError):
    pass


class NonIntegralModel(ValueError):
    pass


class NonMinimalModel(ValueError):
    pass


def _norm(x) -> Rational:
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6"""

    a1: Rational = 0
    a2: Rational = 0
    a3: Rational = 0
    a4: Rational = 0
    a6: Rational = 0

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _norm(getattr(self, name)))

    @classmethod
    def from_list(cls, ai) -> "WeierstrassModel":
        return cls(*ai)

    @property
    def ai(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.ai)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ai) + "]"


@dataclass(frozen=True)
class Invariants:
    b2: Rational
    b4: Rational
    b6: Rational
    b8: Rational
    c4: Rational
    c6: Rational
    disc: Rational
    j: Fraction


def b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(a1, a2, a3, a4, a6):
    """(c4, c6, disc) straight from the coefficients; no object overhead."""
    b2, b4, b6, b8 = b_invariants(a1, a2, a3, a4, a6)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


def invariants(m: WeierstrassModel) -> Invariants:
    b2, b4, b6, b8 = b_invariants(*m.ai)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        raise SingularCurve(f"model {m} is singular")
    return Invariants(
        *(_norm(v) for v in (b2, b4, b6, b8, c4, c6, disc)),
        j=Fraction(c4) ** 3 / Fraction(disc),
    )


def j_invariant(m: WeierstrassModel) -> Fraction:
    return invariants(m).j


# ---------------------------------------------------------------- isomorphisms


@dataclass(frozen=True)
class IsomorphismData:
    """[u, r, s, t]: x = u^2 x' + r, y = u^3 y' + u^2 s x' + t."""

    u: Rational = 1
    r: Rational = 0
    s: Rational = 0
    t: Rational = 0

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, _norm(getattr(self, name)))
        if self.u == 0:
            raise ValueError("u must be nonzero")

    def compose(self, other: "IsomorphismData") -> "IsomorphismData":
        """Apply self first, then other."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return IsomorphismData(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1**3 * t2 + u1 * u1 * s1 * r2,
        )

    def inverse(self) -> "IsomorphismData":
        u = Fraction(self.u)
        r, s, t = self.r, self.s, self.t
        return IsomorphismData(1 / u, -r / u**2, -s / u, (r * s - t) / u**3)

    def is_identity(self) -> bool:
        return (self.u, self.r, self.s, self.t) == (1, 0, 0, 0)


IDENTITY = IsomorphismData()


def change_of_variables(m: WeierstrassModel, iso: IsomorphismData) -> WeierstrassModel:
    a1, a2, a3, a4, a6 = m.ai
    u, r, s, t = iso.u, iso.r, iso.s, iso.t
    if u == 0:
        raise ValueError("u must be nonzero")
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    if u == 1:
        return WeierstrassModel(n1, n2, n3, n4, n6)
    u = Fraction(u)
    return WeierstrassModel(n1 / u, n2 / u**2, n3 / u**3, n4 / u**4, n6 / u**6)


def isomorphism_between(m1: WeierstrassModel, m2: WeierstrassModel, u) -> IsomorphismData:
    """The [u,r,s,t] sending m1 to m2, given u. Raises if none exists."""
    u = Fraction(u)
    b2, _, _, _ = b_invariants(*m1.ai)
    b2p, _, _, _ = b_invariants(*m2.ai)
    r = (u * u * b2p - b2) / 12
    s = (u * m2.a1 - m1.a1) / 2
    t = (u**3 * m2.a3 - m1.a3 - r * m1.a1) / 2
    iso = IsomorphismData(u, r, s, t)
    if change_of_variables(m1, iso) != m2:
        raise ValueError("models are not related by this u")
    return iso


# ---------------------------------------------------------------- local data


def signature(m: WeierstrassModel, p: int) -> tuple:
    """(v_p(c4), v_p(c6), v_p(disc)); ``INF`` marks a vanishing invariant."""
    if not m.is_integral():
        raise NonIntegralModel(f"signature needs an integral model, got {m}")
    c4, c6, disc = c_invariants(*m.ai)
    if disc == 0:
        raise SingularCurve(f"model {m} is singular")
    return (valuation(c4, p), valuation(c6, p), valuation(disc, p))


def _kraus_local(c4: int, c6: int, p: int) -> bool:
    """Do integers c4, c6 come from a model integral at p (p = 2, 3)?"""
    if p == 3:
        if (c4**3 - c6 * c6) % 27:
            return False
        return valuation(c6, 3) != 2
    if p == 2:
        if (c4**3 - c6 * c6) % 64:
            return False
        if c6 % 4 == 3:
            return True
        return (c4 % 16 == 0) and (c6 % 32 in (0, 8))
    return True


def _integral_scaling(m: WeierstrassModel) -> int:
    """Smallest positive integer lam with m scaled by u = 1/lam integral."""
    lam = 1
    for i, a in zip((1, 2, 3, 4, 6), m.ai):
        if isinstance(a, Fraction):
            for p, e in factorize(a.denominator):
                need = -(-e // i)
                lam_e = valuation(lam, p)
                if need > lam_e:
                    lam *= p ** (need - lam_e)
    return lam


def minimal_c4c6(c4: int, c6: int, budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """Scale integral (c4, c6) of an integral model down to the minimal pair.

    Returns (c4', c6', u) with c4 = u^4 c4', c6 = u^6 c6'.
    """
    g = math.gcd(c4, c6)
    u = 1
    for p, _ in factorize(g, budget):
        k = min(
            valuation(c4, p) // 4 if c4 else 10**9,
            valuation(c6, p) // 6 if c6 else 10**9,
        )
        if k == 0:
            continue
        if p <= 3:
            while k > 0 and not _kraus_local(c4 // p ** (4 * k), c6 // p ** (6 * k), p):
                k -= 1
        if k:
            u *= p**k
            c4 //= p ** (4 * k)
            c6 //= p ** (6 * k)
    return c4, c6, u


def model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """The reduced model (a1, a3 in {0,1}, a2 in {-1,0,1}) with the given c4, c6.

    The pair must satisfy the integrality conditions at 2 and 3.
    """
    b2 = -c6 % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise NonIntegralModel(f"no integral model with c4={c4}, c6={c6}")
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    a4 = (b4 - a1 * a3) // 2
    a6 = (b6 - a3) // 4
    m = WeierstrassModel(a1, a2, a3, a4, a6)
    c4m, c6m, _ = c_invariants(*m.ai)
    if (c4m, c6m) != (c4, c6):
        raise NonIntegralModel(f"no integral model with c4={c4}, c6={c6}")
    return m


def minimal_model(m: WeierstrassModel, budget: int = DEFAULT_BUDGET):
    """Global minimal model, reduced, together with the [u,r,s,t] that maps m to it."""
    inv = invariants(m)
    lam = _integral_scaling(m)
    c4 = int(inv.c4 * lam**4)
    c6 = int(inv.c6 * lam**6)
    c4, c6, u = minimal_c4c6(c4, c6, budget)
    mm = model_from_c4c6(c4, c6)
    iso = isomorphism_between(m, mm, Fraction(u, lam))
    return mm, iso


def reduced_minimal_model(m: WeierstrassModel, budget: int = DEFAULT_BUDGET) -> WeierstrassModel:
    return minimal_model(m, budget)[0]


def is_globally_minimal(m: WeierstrassModel, budget: int = DEFAULT_BUDGET) -> bool:
    if not m.is_integral():
        return False
    c4, c6, _ = c_invariants(*m.ai)
    return minimal_c4c6(c4, c6, budget)[2] == 1


# ---------------------------------------------------------------- height


def height_from_c4c6(c4: int, c6: int) -> float:
    big = max(abs(c4) ** 3, c6 * c6)
    # math.log accepts arbitrary ints without overflow
    return math.log(big) / 12


def height(m: WeierstrassModel, check_minimal: bool = True) -> float:
    """(1/12) log max(|c4|^3, c6^2) of a globally minimal model."""
    if not m.is_integral():
        raise NonMinimalModel("height is taken on the integral minimal model")
    c4, c6, disc = c_invariants(*m.ai)
    if disc == 0:
        raise SingularCurve(f"model {m} is singular")
    if check_minimal and minimal_c4c6(c4, c6)[2] != 1:
        raise NonMinimalModel(f"{m} is not globally minimal")
    return height_from_c4c6(c4, c6)


def height_threshold(X: float) -> int:
    """ceil(exp(12 X)), so that ht < X  <=>  max(|c4|^3, c6^2) < height_threshold(X).

    Computed in mpmath with enough precision that the ceiling is exact.
    """
    import mpmath

    digits = int(12 * abs(float(X)) / 2.302585092994046) + 30
    with mpmath.workdps(digits):
        v = mpmath.exp(12 * mpmath.mpf(X))
        c = int(mpmath.ceil(v))
        # guard against v landing within rounding distance of an integer
        if abs(v - mpmath.nint(v)) < mpmath.mpf(10) ** (-10):
            raise ArithmeticError("exp(12X) too close to an integer to round safely")
    return c
