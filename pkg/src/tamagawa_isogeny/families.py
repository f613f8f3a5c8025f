"""The parametrised families E_T(a,b) with an l-torsion point at (0,0),
their l-isogenous partners, Velu quotients and a few torsion criteria.

T is one of C3, C3^0 (j = 0, one parameter), C5, C7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import exact_root, factorize
from .curves import (
    SingularCurve,
    WeierstrassModel,
    c_invariants,
    reduced_minimal_model,
)

C3 = "C3"
C30 = "C3^0"
C5 = "C5"
C7 = "C7"
FAMILIES = (C3, C30, C5, C7)
ELL = {C3: 3, C30: 3, C5: 5, C7: 7}

_ALIASES = {
    "c3": C3,
    "c3^0": C30,
    "c30": C30,
    "c3_0": C30,
    "c3⁰": C30,
    "c3o": C30,
    "c5": C5,
    "c7": C7,
}


class DegenerateParameters(ValueError):
    pass


def family_name(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}") from None


@dataclass(frozen=True)
class ParamSpec:
    family: str
    a: int
    b: Optional[int] = None

    def __post_init__(self):
        fam = family_name(self.family)
        object.__setattr__(self, "family", fam)
        if fam == C30:
            if self.b is not None:
                raise ValueError("C3^0 takes a single parameter")
            if self.a < 1:
                raise ValueError("a must be positive")
            if any(e >= 3 for _, e in factorize(self.a)):
                raise ValueError(f"a = {self.a} is not cubefree")
        else:
            if self.b is None:
                raise ValueError(f"{fam} needs two parameters")
            if self.a < 1:
                raise ValueError("a must be positive")
            if math.gcd(self.a, self.b) != 1:
                raise ValueError(f"gcd({self.a}, {self.b}) != 1")

    @property
    def ell(self) -> int:
        return ELL[self.family]

    def __str__(self):
        if self.family == C30:
            return f"{self.family}({self.a})"
        return f"{self.family}({self.a},{self.b})"


# ---------------------------------------------------------------- the models


def e_coefficients(family: str, a: int, b: int = 0) -> tuple:
    """(a1, a2, a3, a4, a6) of E_T; no validity checks."""
    if family == C30:
        return (0, 0, a, 0, 0)
    if family == C3:
        return (a, 0, a * a * b, 0, 0)
    if family == C5:
        return (a - b, -a * b, -a * a * b, 0, 0)
    if family == C7:
        return (
            a * a + a * b - b * b,
            a * a * b * b - a * b**3,
            a**4 * b * b - a**3 * b**3,
            0,
            0,
        )
    raise ValueError(family)


def e_tilde_coefficients(family: str, a: int, b: int = 0) -> tuple:
    """(a1, a2, a3, a4, a6) of the quotient curve, in Velu's normalisation."""
    a1, a2, a3, _, _ = e_coefficients(family, a, b)
    if family == C30:
        return (a1, a2, a3, 0, -7 * a * a)
    if family == C3:
        return (a1, a2, a3, -5 * a**3 * b, -(a**4) * b * (a + 7 * b))
    if family == C5:
        a4 = 5 * a * b * (a * a - 2 * a * b - b * b)
        a6 = a * b * (a**4 - 15 * a**3 * b + 5 * a * a * b * b - 10 * a * b**3 - b**4)
        return (a1, a2, a3, a4, a6)
    if family == C7:
        ab = a * b * (a - b)
        a4 = 5 * ab * (a * a - a * b + b * b) * (a**3 - 5 * a * a * b + 2 * a * b * b + b**3)
        a6 = ab * (
            a**9
            - 18 * a**8 * b
            + 76 * a**7 * b**2
            - 182 * a**6 * b**3
            + 211 * a**5 * b**4
            - 132 * a**4 * b**5
            + 70 * a**3 * b**6
            - 37 * a**2 * b**7
            + 9 * a * b**8
            + b**9
        )
        return (a1, a2, a3, a4, a6)
    raise ValueError(family)


def _args(spec: ParamSpec):
    return (spec.a,) if spec.family == C30 else (spec.a, spec.b)


def e_model(spec: ParamSpec) -> WeierstrassModel:
    return _checked(WeierstrassModel(*e_coefficients(spec.family, *_args(spec))), spec)


def e_tilde_model(spec: ParamSpec) -> WeierstrassModel:
    return _checked(WeierstrassModel(*e_tilde_coefficients(spec.family, *_args(spec))), spec)


def _checked(m: WeierstrassModel, spec) -> WeierstrassModel:
    if c_invariants(*m.ai)[2] == 0:
        raise DegenerateParameters(f"{spec} gives a singular curve")
    return m


@dataclass(frozen=True)
class CurvePair:
    E: WeierstrassModel
    E_tilde: WeierstrassModel
    spec: ParamSpec


def build_pair(spec: ParamSpec, verify: bool = True) -> CurvePair:
    """E_T and its quotient by <(0,0)>.

    With ``verify`` the quotient is recomputed by Velu's formulas and must
    agree with the tabulated coefficients.
    """
    E = e_model(spec)
    Et = e_tilde_model(spec)
    if verify:
        V = velu_quotient(E, (0, 0), spec.ell)
        if V != Et:
            raise AssertionError(f"Velu quotient {V} disagrees with table model {Et}")
    return CurvePair(E, Et, spec)


# ---------------------------------------------------------------- points

Point = Optional[tuple]  # None is the point at infinity


def on_curve(m: WeierstrassModel, P: Point) -> bool:
    if P is None:
        return True
    x, y = P
    a1, a2, a3, a4, a6 = m.ai
    return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6


def negate(m: WeierstrassModel, P: Point) -> Point:
    if P is None:
        return None
    x, y = P
    return (x, -y - m.a1 * x - m.a3)


def add(m: WeierstrassModel, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = m.ai
    x1, y1 = Fraction(P[0]), Fraction(P[1])
    x2, y2 = Fraction(Q[0]), Fraction(Q[1])
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (_simplify(x3), _simplify(y3))


def _simplify(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def multiply(m: WeierstrassModel, P: Point, k: int) -> Point:
    if k < 0:
        return multiply(m, negate(m, P), -k)
    R = None
    Q = P
    while k:
        if k & 1:
            R = add(m, R, Q)
        Q = add(m, Q, Q)
        k >>= 1
    return R


def torsion_point_order(m: WeierstrassModel, P: Point, bound: int = 12) -> Optional[int]:
    """Exact order of P if at most ``bound``, else None (infinite or beyond)."""
    if not on_curve(m, P):
        raise ValueError(f"{P} is not on {m}")
    Q = P
    for k in range(1, bound + 1):
        if Q is None:
            return k
        Q = add(m, Q, P)
    return None


# ---------------------------------------------------------------- Velu


def velu_quotient(m: WeierstrassModel, P: Point, ell: int) -> WeierstrassModel:
    """m / <P> for P of odd prime order ell, in Velu's normalisation."""
    if ell % 2 == 0:
        raise ValueError("only odd ell is supported")
    if torsion_point_order(m, P, ell) != ell:
        raise ValueError(f"{P} does not have order {ell}")
    a1, a2, a3, a4, a6 = (Fraction(a) for a in m.ai)
    v = w = Fraction(0)
    Q = P
    for _ in range((ell - 1) // 2):
        x, y = Fraction(Q[0]), Fraction(Q[1])
        gx = 3 * x * x + 2 * a2 * x + a4 - a1 * y
        gy = -2 * y - a1 * x - a3
        vQ = 2 * gx - a1 * gy
        uQ = gy * gy
        v += vQ
        w += uQ + x * vQ
        Q = add(m, Q, P)
    return WeierstrassModel(a1, a2, a3, a4 - 5 * v, a6 - (a1 * a1 + 4 * a2) * v - 7 * w)


# ---------------------------------------------------------------- normalisation


def normalize_params(family: str, a: int, b: Optional[int] = None) -> ParamSpec:
    """An equivalent ParamSpec with a > 0, and b > 0 as well for C5 and C7.

    (a, b) -> (-a, -b) is an isomorphism in every family. For negative b
    the maps used are (a, b) -> (-b, a) for C5 and (a, b) -> (-b, a - b)
    for C7; both preserve the subgroup generated by (0, 0), so the quotient
    curves correspond too.
    """
    family = family_name(family)
    if family == C30:
        if b is not None:
            raise ValueError("C3^0 takes a single parameter")
        if a == 0:
            raise DegenerateParameters("a = 0")
        # y^2 - a y = x^3 is y^2 + a y = x^3 under y -> -y
        return ParamSpec(C30, abs(a))
    if b is None:
        raise ValueError(f"{family} needs two parameters")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) != 1")
    if c_invariants(*e_coefficients(family, a, b))[2] == 0:
        raise DegenerateParameters(f"{family}({a},{b}) is singular")
    if a < 0:
        a, b = -a, -b
    if family in (C5, C7) and b < 0:
        if family == C5:
            a, b = -b, a
        else:
            a, b = -b, a - b
    return ParamSpec(family, a, b)


def same_curve(m1: WeierstrassModel, m2: WeierstrassModel) -> bool:
    return reduced_minimal_model(m1) == reduced_minimal_model(m2)


# ---------------------------------------------------------------- torsion on the quotient


def tilde_c3_torsion(a: int, b: int) -> Optional[tuple]:
    """A rational 3-torsion point on the C3 quotient curve, if one exists.

    One exists exactly when a and b are both cubes, a = s^3 and b = t^3,
    and then (s^4 t (s + 3t), 4 s^6 t^3) is such a point.
    """
    if a < 1 or math.gcd(a, b) != 1:
        raise ValueError("need a > 0 and gcd(a, b) = 1")
    if c_invariants(*e_coefficients(C3, a, b))[2] == 0:
        raise DegenerateParameters(f"C3({a},{b}) is singular")
    s = exact_root(a, 3)
    t = exact_root(b, 3)
    if s is None or t is None:
        return None
    return (s**4 * t * (s + 3 * t), 4 * s**6 * t**3)


def tilde_c30_torsion(a: int) -> Optional[tuple]:
    """A rational 3-torsion point on the C3^0 quotient curve, if one exists."""
    if a < 1 or any(e >= 3 for _, e in factorize(a)):
        raise ValueError(f"a = {a} must be positive and cubefree")
    # x-coordinates of nonzero 3-torsion: x = 0 (never rational y) or x^3 = 27 a^2
    x = exact_root(27 * a * a, 3)
    if x is None:
        return None
    # y^2 + a y - (x^3 - 7 a^2) = 0
    disc = a * a + 4 * (x**3 - 7 * a * a)
    r = exact_root(disc, 2) if disc >= 0 else None
    if r is None:
        return None
    return (x, (-a + r) // 2)


# ---------------------------------------------------------------- rational torsion


def _integer_roots_cubic(A: int, C: int) -> list[int]:
    """Integer roots of x^3 + A x + C."""
    import numpy as np

    found = set()
    for r in np.roots([1.0, 0.0, float(A), float(C)]):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        x0 = int(round(r.real))
        for x in range(x0 - 2, x0 + 3):
            if x**3 + A * x + C == 0:
                found.add(x)
    return sorted(found)


def torsion_points(m: WeierstrassModel) -> list:
    """Rational torsion points of an integral model, by Nagell-Lutz on the
    short model y^2 = x^3 - 27 c4 x - 54 c6. Points are returned on that
    short model, the point at infinity first."""
    if not m.is_integral():
        raise ValueError("torsion_points needs an integral model")
    c4, c6, disc = c_invariants(*m.ai)
    if disc == 0:
        raise SingularCurve(f"model {m} is singular")
    A, B = -27 * c4, -54 * c6
    short = WeierstrassModel(0, 0, 0, A, B)
    D = abs(4 * A**3 + 27 * B * B)
    ys = [0]
    # y^2 | D
    fac = factorize(D)
    divs = [1]
    for p, e in fac:
        divs = [d * p**k for d in divs for k in range(e // 2 + 1)]
    ys += divs
    pts = [None]
    for y in ys:
        for x in _integer_roots_cubic(A, B - y * y):
            for P in {(x, y), (x, -y)}:
                if torsion_point_order(short, P, 12) is not None:
                    pts.append(P)
    return pts


def torsion_structure(m: WeierstrassModel) -> tuple:
    """Invariants of E(Q)_tors: () for trivial, (n,) cyclic, (2, 2k) otherwise."""
    pts = torsion_points(m)
    n = len(pts)
    two = sum(1 for P in pts if P is not None and P[1] == 0)
    if n == 1:
        return ()
    if two == 3:
        return (2, n // 2)
    return (n,)
