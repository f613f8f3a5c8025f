"""Tate's algorithm over Z_p, p = 2 and 3 included.

This is the ground-truth oracle: Kodaira type, local Tamagawa number c_p and
conductor exponent f_p at each prime, plus the global Tamagawa product.
Step numbers in comments follow Silverman's exposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .arith import DEFAULT_BUDGET, INF, factorize, jacobi, valuation
from .curves import (
    NonIntegralModel,
    NonMinimalModel,
    SingularCurve,
    WeierstrassModel,
    b_invariants,
    c_invariants,
    minimal_model,
)

GOOD = "good"
SPLIT = "split-multiplicative"
NONSPLIT = "nonsplit-multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class KodairaType:
    """symbol is one of I, I*, II, III, IV, II*, III*, IV*; n is the I_n index."""

    symbol: str
    n: int = 0

    def __str__(self):
        if self.symbol == "I":
            return f"I{self.n}"
        if self.symbol == "I*":
            return f"I{self.n}*"
        return self.symbol

    @classmethod
    def parse(cls, s: str) -> "KodairaType":
        s = s.strip()
        if s.startswith("I") and len(s) > 1 and s[1].isdigit():
            if s.endswith("*"):
                return cls("I*", int(s[1:-1]))
            return cls("I", int(s[1:]))
        if s in ("II", "III", "IV", "II*", "III*", "IV*"):
            return cls(s)
        raise ValueError(f"unknown Kodaira symbol {s!r}")

    def pari_code(self) -> int:
        """PARI's integer encoding, handy for cross-checks."""
        table = {"II": 2, "III": 3, "IV": 4, "II*": -2, "III*": -3, "IV*": -4}
        if self.symbol == "I":
            return 1 if self.n == 0 else 4 + self.n
        if self.symbol == "I*":
            return -1 if self.n == 0 else -4 - self.n
        return table[self.symbol]


I0 = KodairaType("I", 0)


@dataclass(frozen=True)
class LocalReduction:
    p: int
    kodaira: KodairaType
    c_p: int
    f_p: int
    v_min: int
    reduction_class: str
    # how many Step-11 rescalings were needed; 0 means the input was minimal at p
    rescalings: int = 0

    def is_good(self) -> bool:
        return self.reduction_class == GOOD


# ---------------------------------------------------------------- helpers mod p


def _has_quadratic_root(a: int, b: int, c: int, p: int) -> bool:
    """Does a X^2 + b X + c have a root in F_p? a is a unit mod p."""
    if p == 2:
        return c % 2 == 0 or (a + b + c) % 2 == 0
    d = (b * b - 4 * a * c) % p
    return d == 0 or jacobi(d, p) == 1


def _polmulmod(f, g, P, p):
    """Product of polys f, g (low degree first) reduced mod monic cubic P and p."""
    prod = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                prod[i + j] += x * y
    # P = T^3 + P[2] T^2 + P[1] T + P[0]
    for k in range(len(prod) - 1, 2, -1):
        top = prod[k] % p
        if top:
            prod[k - 1] -= top * P[2]
            prod[k - 2] -= top * P[1]
            prod[k - 3] -= top * P[0]
        prod[k] = 0
    return [x % p for x in prod[:3]] + [0] * (3 - len(prod[:3]))


def _poly_gcd_degree(f, g, p) -> int:
    def trim(h):
        h = [x % p for x in h]
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(f), trim(g)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            if not f:
                break
            coef = f[-1] * inv % p
            shift = len(f) - len(g)
            for i, x in enumerate(g):
                f[i + shift] -= coef * x
            f = trim(f)
        f, g = g, f
    return len(f) - 1


def count_cubic_roots(b: int, c: int, d: int, p: int) -> int:
    """Number of distinct roots of T^3 + b T^2 + c T + d in F_p."""
    if p < 64:
        return sum(1 for T in range(p) if (T * T * T + b * T * T + c * T + d) % p == 0)
    P = [d % p, c % p, b % p]
    # T^p mod P by square-and-multiply
    result, base, e = [1, 0, 0], [0, 1, 0], p
    while e:
        if e & 1:
            result = _polmulmod(result, base, P, p)
        base = _polmulmod(base, base, P, p)
        e >>= 1
    result[1] -= 1
    return _poly_gcd_degree([d, c, b, 1], result, p)


def _cubic_multiple_root(b: int, c: int, d: int, p: int, triple: bool) -> int:
    """Residue of the double (or triple) root of T^3 + b T^2 + c T + d mod p."""
    if p <= 3:
        for T in range(p):
            val = T**3 + b * T * T + c * T + d
            der = 3 * T * T + 2 * b * T + c
            sec = 3 * T + b
            if val % p == 0 and der % p == 0 and (not triple or sec % p == 0 or p == 3):
                if triple and p == 3:
                    # over F_3 the second derivative vanishes identically; test the cube
                    if ((b + 3 * T) % 3, (c - 3 * T * T) % 3, (d + T**3) % 3) != (0, 0, 0):
                        continue
                return T
        raise AssertionError("no multiple root found")
    if triple:
        return -b * pow(3, -1, p) % p
    x = 3 * c - b * b
    return (b * c - 9 * d) * pow(2 * x, -1, p) % p


def _apply(ai, r=0, s=0, t=0):
    """Integral change of variables with u = 1."""
    a1, a2, a3, a4, a6 = ai
    return [
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    ]


def _singular_point_shift(ai, p, c4, c6, b2):
    """(r, t) moving the singular point of the reduction to (0, 0)."""
    a1, a2, a3, a4, a6 = ai
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise AssertionError("reduction has no singular point")
    if c4 % p == 0:
        r = -b2 * pow(12, -1, p) % p
    else:
        r = -(c6 + b2 * c4) * pow(12 * c4, -1, p) % p
    t = -(a1 * r + a3) * pow(2, -1, p) % p
    return r, t


# ---------------------------------------------------------------- the algorithm


def tate_ai(ai, p: int) -> LocalReduction:
    """Tate's algorithm on integral coefficients (a1, a2, a3, a4, a6) at p."""
    ai = [int(a) for a in ai]
    rescalings = 0
    while True:
        a1, a2, a3, a4, a6 = ai
        b2, b4, b6, b8 = b_invariants(*ai)
        c4, c6, disc = c_invariants(*ai)
        if disc == 0:
            raise SingularCurve("singular model")
        n = valuation(disc, p)
        # Step 1
        if n == 0:
            return LocalReduction(p, I0, 1, 0, 0, GOOD, rescalings)

        r, t = _singular_point_shift(ai, p, c4, c6, b2)
        ai = _apply(ai, r=r, t=t)
        a1, a2, a3, a4, a6 = ai
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0
        b2, b4, b6, b8 = b_invariants(*ai)

        # Step 2: multiplicative
        if c4 % p:
            if _has_quadratic_root(1, a1, -a2, p):
                return LocalReduction(p, KodairaType("I", n), n, 1, n, SPLIT, rescalings)
            cp = 2 if n % 2 == 0 else 1
            return LocalReduction(p, KodairaType("I", n), cp, 1, n, NONSPLIT, rescalings)

        def additive(kod, cp, f):
            return LocalReduction(p, kod, cp, f, n, ADDITIVE, rescalings)

        # Step 3
        if a6 % (p * p):
            return additive(KodairaType("II"), 1, n)
        # Step 4
        if b8 % p**3:
            return additive(KodairaType("III"), 2, n - 1)
        # Step 5
        if b6 % p**3:
            cp = 3 if _has_quadratic_root(1, a3 // p, -(a6 // (p * p)), p) else 1
            return additive(KodairaType("IV"), cp, n - 2)

        # Step 6: arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p <= 3:
            ai = _search_step6(ai, p)
        else:
            k = (p + 1) // 2  # inverse of 2 mod p
            ai = _apply(ai, s=-a1 * k, t=-a3 * k)
        a1, a2, a3, a4, a6 = ai
        assert a1 % p == 0 and a2 % p == 0, ai
        assert a3 % (p * p) == 0 and a4 % (p * p) == 0 and a6 % p**3 == 0, ai

        b = a2 // p
        c = a4 // (p * p)
        d = a6 // p**3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b

        if w % p:
            # distinct roots: I0*
            cp = 1 + count_cubic_roots(b, c, d, p)
            return additive(KodairaType("I*", 0), cp, n - 4)

        if x % p:
            # Step 7: one double root, I_m*
            root = _cubic_multiple_root(b, c, d, p, triple=False)
            ai = _apply(ai, r=p * root)
            ix = iy = 3
            mx = my = p * p
            cp = 0
            while cp == 0:
                a1, a2, a3, a4, a6 = ai
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa3 * xa3 + 4 * xa6) % p:
                    cp = 4 if _has_quadratic_root(1, xa3, -xa6, p) else 2
                    break
                y0 = xa6 % 2 if p == 2 else (-xa3 * ((p + 1) // 2)) % p
                ai = _apply(ai, t=my * y0)
                my *= p
                iy += 1
                a1, a2, a3, a4, a6 = ai
                xa2 = a2 // p
                xa3 = a3 // my
                xa4 = a4 // (p * mx)
                xa6 = a6 // (mx * my)
                if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                    cp = 4 if _has_quadratic_root(xa2, xa4, xa6, p) else 2
                    break
                if p == 2:
                    x0 = (xa6 * xa2) % 2
                else:
                    x0 = (-xa4 * pow(2 * xa2, -1, p)) % p
                ai = _apply(ai, r=mx * x0)
                mx *= p
                ix += 1
            m = ix + iy - 5
            return additive(KodairaType("I*", m), cp, n - m - 4)

        # Step 8: triple root
        root = _cubic_multiple_root(b, c, d, p, triple=True)
        ai = _apply(ai, r=p * root)
        a1, a2, a3, a4, a6 = ai
        a3t = a3 // (p * p)
        a6t = a6 // p**4
        if (a3t * a3t + 4 * a6t) % p:
            cp = 3 if _has_quadratic_root(1, a3t, -a6t, p) else 1
            return additive(KodairaType("IV*"), cp, n - 6)
        y0 = a6t % 2 if p == 2 else (-a3t * ((p + 1) // 2)) % p
        ai = _apply(ai, t=p * p * y0)
        a1, a2, a3, a4, a6 = ai
        # Step 9
        if a4 % p**4:
            return additive(KodairaType("III*"), 2, n - 7)
        # Step 10
        if a6 % p**6:
            return additive(KodairaType("II*"), 1, n - 8)
        # Step 11: not minimal, rescale and start over
        ai = [a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6]
        rescalings += 1


def _search_step6(ai, p):
    for s in range(p):
        for t in range(p * p):
            cand = _apply(ai, s=s, t=t)
            if (
                cand[0] % p == 0
                and cand[1] % p == 0
                and cand[2] % (p * p) == 0
                and cand[3] % (p * p) == 0
                and cand[4] % p**3 == 0
            ):
                return cand
    raise AssertionError("step 6 normalisation failed")


def tate_local(m: WeierstrassModel, p: int) -> LocalReduction:
    if not m.is_integral():
        raise NonIntegralModel("Tate's algorithm needs an integral model")
    return tate_ai(m.ai, p)


def reduction_class(m: WeierstrassModel, p: int) -> str:
    loc = tate_local(m, p)
    if loc.rescalings:
        raise NonMinimalModel(f"model is not minimal at {p}")
    return loc.reduction_class


def bad_primes(m: WeierstrassModel, budget: int = DEFAULT_BUDGET) -> list[int]:
    mm, _ = minimal_model(m, budget)
    _, _, disc = c_invariants(*mm.ai)
    return factorize(disc, budget).primes()


def global_tamagawa(m: WeierstrassModel, budget: int = DEFAULT_BUDGET):
    """(product of c_p, list of LocalReduction at the bad primes)."""
    mm, _ = minimal_model(m, budget)
    _, _, disc = c_invariants(*mm.ai)
    locs = [tate_ai(mm.ai, p) for p in factorize(disc, budget).primes()]
    total = reduce(lambda x, y: x * y, (loc.c_p for loc in locs), 1)
    return total, locs


def conductor(m: WeierstrassModel, budget: int = DEFAULT_BUDGET) -> int:
    _, locs = global_tamagawa(m, budget)
    N = 1
    for loc in locs:
        N *= loc.p**loc.f_p
    return N


# ---------------------------------------------------------------- p >= 5 lookup


def kodaira_from_signature(sig, p: int) -> KodairaType:
    """Kodaira type from (v(c4), v(c6), v(disc)) of a minimal model, p >= 5."""
    if p < 5:
        raise ValueError("signature lookup only valid for p >= 5")
    v4, v6, vd = sig
    if vd == 0:
        return I0
    if v4 == 0:
        return KodairaType("I", vd)
    # additive reduction at p >= 5 is determined by v(disc) alone, given minimality
    if vd == 2 and v6 == 1:
        return KodairaType("II")
    if vd == 3 and v4 == 1:
        return KodairaType("III")
    if vd == 4 and v6 == 2:
        return KodairaType("IV")
    if vd == 6 and (v4 >= 2) and (v6 >= 3):
        return KodairaType("I*", 0)
    if vd > 6 and v4 == 2 and v6 == 3:
        return KodairaType("I*", vd - 6)
    if vd == 8 and v4 >= 3 and v6 == 4:
        return KodairaType("IV*")
    if vd == 9 and v4 == 3 and v6 >= 5:
        return KodairaType("III*")
    if vd == 10 and v4 >= 4 and v6 == 5:
        return KodairaType("II*")
    raise NonMinimalModel(f"signature {sig} is not that of a minimal model")
