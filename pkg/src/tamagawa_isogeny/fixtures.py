"""Curves from the public elliptic curve database that the package is checked
against. Everything is embedded; nothing is fetched.

Expected local data was frozen from an independent Tate implementation
(PARI's elllocalred), torsion from PARI's elltors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import SMALL_PRIMES, jacobi
from .curves import WeierstrassModel, c_invariants, reduced_minimal_model
from .families import (
    C3,
    C30,
    C5,
    ParamSpec,
    e_model,
    e_tilde_model,
    torsion_structure,
)
from .tate import conductor, global_tamagawa


@dataclass(frozen=True)
class Fixture:
    label: str
    a_invariants: tuple
    conductor: int
    tamagawa: int
    local: tuple  # (p, kodaira symbol, c_p) at every bad prime
    torsion: tuple  # invariants, () when trivial
    # set when the label itself could not be confirmed offline
    note: str = ""

    @property
    def model(self) -> WeierstrassModel:
        return WeierstrassModel(*self.a_invariants)

    @property
    def torsion_order(self) -> int:
        n = 1
        for k in self.torsion:
            n *= k
        return n


FIXTURES = (
    Fixture("11.a3", (0, -1, 1, 0, 0), 11, 1, ((11, "I1", 1),), (5,)),
    Fixture("27.a1", (0, 0, 1, -270, -1708), 27, 1, ((3, "II*", 1),), ()),
    Fixture("27.a2", (0, 0, 1, -30, 63), 27, 1, ((3, "IV", 1),), (3,)),
    Fixture("27.a3", (0, 0, 1, 0, -7), 27, 3, ((3, "IV*", 3),), (3,)),
    Fixture("27.a4", (0, 0, 1, 0, 0), 27, 1, ((3, "II", 1),), (3,)),
    Fixture("54.a3", (1, -1, 0, 12, 8), 54, 3, ((2, "I3", 1), (3, "IV*", 3)), (3,)),
    Fixture("880.h1", (0, 0, 0, -947, -11214), 880, 8, ((2, "I4*", 2), (5, "I4", 4), (11, "I1", 1)), (2,)),
    Fixture("880.h2", (0, 0, 0, -467, 3794), 880, 16, ((2, "I4*", 4), (5, "I1", 1), (11, "I4", 4)), (4,)),
    Fixture("880.h3", (0, 0, 0, -67, -126), 880, 16, ((2, "I4*", 4), (5, "I2", 2), (11, "I2", 2)), (2, 2)),
    Fixture("880.h4", (0, 0, 0, 13, -14), 880, 4, ((2, "I4*", 4), (5, "I1", 1), (11, "I1", 1)), (2,)),
    Fixture(
        "14400.cr",
        (0, 0, 0, -15, 0),
        14400,
        4,
        ((2, "II", 1), (3, "III", 2), (5, "III", 2)),
        (2,),
        note="class letter not confirmed offline; a 2-isogenous pair of conductor 14400 with local ratio 4",
    ),
    Fixture(
        "14400.cr'",
        (0, 0, 0, 60, 0),
        14400,
        16,
        ((2, "I2*", 4), (3, "III", 2), (5, "III", 2)),
        (2,),
        note="2-isogenous to the curve above",
    ),
)

BY_LABEL = {f.label: f for f in FIXTURES}


# curves of the families that land on a fixture: (spec, "E" or "E~", label)
FAMILY_LINKS = (
    (ParamSpec(C30, 1), "E", "27.a4"),
    (ParamSpec(C30, 1), "E~", "27.a3"),
    (ParamSpec(C3, 24, 1), "E", "27.a3"),
    (ParamSpec(C3, 216, -1), "E", "27.a2"),
    (ParamSpec(C3, 216, -1), "E~", "27.a4"),
    (ParamSpec(C3, 27, -1), "E~", "54.a3"),
    (ParamSpec(C5, 1, 1), "E", "11.a3"),
)

# curves of 880.h that have a subgroup of order 4 locally but not globally
LOCALLY_FOUR = ("880.h1", "880.h4")


def _short(m: WeierstrassModel):
    c4, c6, _ = c_invariants(*m.ai)
    return -27 * c4, -54 * c6


def count_points_mod_p(m: WeierstrassModel, p: int) -> int:
    """#E(F_p) for a prime p >= 5 of good reduction."""
    if p < 5:
        raise ValueError("p must be at least 5")
    A, B = _short(m)
    s = 0
    for x in range(p):
        s += jacobi(x**3 + A * x + B, p)
    return p + 1 + s


def locally_has_order(m: WeierstrassModel, k: int, bound: int = 500) -> bool:
    """k | #E(F_p) for every good prime 5 <= p < bound."""
    N = conductor(m)
    _, _, disc = c_invariants(*m.ai)
    for p in SMALL_PRIMES:
        if p >= bound:
            break
        if p < 5 or N % p == 0 or (disc * 6) % p == 0:
            continue
        if count_points_mod_p(m, p) % k:
            return False
    return True


def check_fixture(f: Fixture) -> list[str]:
    """Mismatches between the fixture and what this package computes."""
    problems = []
    m = f.model
    if reduced_minimal_model(m) != m:
        problems.append("model is not the reduced minimal model")
    N = conductor(m)
    if N != f.conductor:
        problems.append(f"conductor {N} != {f.conductor}")
    total, locs = global_tamagawa(m)
    if total != f.tamagawa:
        problems.append(f"tamagawa {total} != {f.tamagawa}")
    got = tuple((lr.p, str(lr.kodaira), lr.c_p) for lr in locs if not lr.is_good())
    if got != f.local:
        problems.append(f"local data {got} != {f.local}")
    tors = torsion_structure(m)
    if tors != f.torsion:
        problems.append(f"torsion {tors} != {f.torsion}")
    return problems


def check_links() -> list[str]:
    problems = []
    for spec, which, label in FAMILY_LINKS:
        m = e_model(spec) if which == "E" else e_tilde_model(spec)
        if reduced_minimal_model(m) != BY_LABEL[label].model:
            problems.append(f"{which} of {spec} is not {label}")
    return problems


def check_880h() -> list[str]:
    problems = []
    for label in LOCALLY_FOUR:
        f = BY_LABEL[label]
        if f.torsion_order % 4 == 0:
            problems.append(f"{label} has a global subgroup of order 4")
        if not locally_has_order(f.model, 4):
            problems.append(f"{label} does not locally have a subgroup of order 4")
    return problems


def local_ratio(m1: WeierstrassModel, m2: WeierstrassModel) -> dict:
    """{p: c_p(m1) / c_p(m2)} over the bad primes of either curve."""
    l1 = {lr.p: lr.c_p for lr in global_tamagawa(m1)[1]}
    l2 = {lr.p: lr.c_p for lr in global_tamagawa(m2)[1]}
    return {p: Fraction(l1.get(p, 1), l2.get(p, 1)) for p in sorted(set(l1) | set(l2))}


def two_isogenous(m1: WeierstrassModel, m2: WeierstrassModel) -> bool:
    """Is m2 the quotient of m1 by a rational 2-torsion point? Checked via
    the standard formula for y^2 = x^3 + a x^2 + b x after moving the point
    to (0, 0)."""
    from .families import _integer_roots_cubic

    c4, c6, _ = c_invariants(*m1.ai)
    A, B = -27 * c4, -54 * c6
    target = reduced_minimal_model(m2)
    for x0 in _integer_roots_cubic(A, B):
        # translate x -> x + x0: y^2 = x^3 + 3 x0 x^2 + (3 x0^2 + A) x
        a, b = 3 * x0, 3 * x0 * x0 + A
        q = WeierstrassModel(0, -2 * a, 0, a * a - 4 * b, 0)
        if reduced_minimal_model(q) == target:
            return True
    return False


def check_ratio_four() -> list[str]:
    E, F = BY_LABEL["14400.cr"].model, BY_LABEL["14400.cr'"].model
    problems = []
    if not two_isogenous(E, F):
        problems.append("14400.cr pair is not 2-isogenous")
    ratios = local_ratio(E, F)
    if not any(r in (4, Fraction(1, 4)) for r in ratios.values()):
        problems.append(f"no local ratio 4 in {ratios}")
    return problems


def run_all() -> dict:
    """{name: [problems]} for every fixture and cross-check."""
    report = {f.label: check_fixture(f) for f in FIXTURES}
    report["family links"] = check_links()
    report["880.h local order 4"] = check_880h()
    report["14400.cr ratio 4"] = check_ratio_four()
    return report
