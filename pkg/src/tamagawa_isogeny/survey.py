"""Enumeration harness: representatives of (a,b) space up to isomorphism,
height filtering, the N / G statistics of the isogenous curves, the a = 1
line count, the fifth-power experiment and the X_7 prime count.

Heights use exact integers: ht(E) < X  <=>  max(|c4|^3, c6^2) < ceil(e^{12X}).
Floating point is only used to discard pairs that are far from the cutoff.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .arith import DEFAULT_BUDGET, exact_root, factorize, is_prime
from .classifier import classify_global, classify_local
from .curves import c_invariants, height_from_c4c6, height_threshold, model_from_c4c6
from .families import C5, C7, ParamSpec, e_coefficients

FAMILY_OF_ELL = {5: C5, 7: C7}
# degree of max(|c4|^3, c6^2) as a form in (a, b)
_HEIGHT_DEGREE = {5: 12, 7: 24}


@dataclass(frozen=True)
class SurveyRow:
    ell: int
    X: float
    N: int
    G: int
    # pairs whose max(|c4|^3, c6^2) sits on ceil(e^{12X}) or one below it
    boundary: int = 0

    @property
    def percent(self) -> float:
        return 100.0 * self.N / self.G if self.G else 0.0

    def summary(self) -> dict:
        return {"ell": self.ell, "X": self.X, "N": self.N, "G": self.G, "percent": round(self.percent, 2)}


@dataclass(frozen=True)
class Representative:
    spec: ParamSpec
    c4: int
    c6: int

    @property
    def key(self) -> tuple:
        """a-invariants of the reduced minimal model."""
        return model_from_c4c6(self.c4, self.c6).ai

    @property
    def height(self) -> float:
        return height_from_c4c6(self.c4, self.c6)


# ---------------------------------------------------------------- sum bound


def _height_form_min(ell: int, samples: int = 200_001) -> float:
    """min of max(|c4|^3, c6^2) over a + b = 1, a, b >= 0, refined locally."""
    fam = FAMILY_OF_ELL[ell]

    def M(x):
        c4, c6, _ = c_invariants(*e_coefficients(fam, x, 1.0 - x))
        return np.maximum(np.abs(c4) ** 3, c6 * c6)

    xs = np.linspace(0.0, 1.0, samples)
    vals = M(xs)
    best = float(vals.min())
    step = xs[1] - xs[0]
    for i in np.argsort(vals)[:8]:
        lo, hi = max(0.0, xs[i] - step), min(1.0, xs[i] + step)
        fine = np.linspace(lo, hi, 4001)
        best = min(best, float(M(fine).min()))
    return best


def sum_bound(ell: int, X: float, pad: float = 1.25) -> int:
    """S such that ht(E_T(a,b)) < X forces a + b < S for positive a, b.

    max(|c4|^3, c6^2) is a form of degree d in (a, b), so it is at least
    m * (a + b)^d with m its minimum on the simplex. The sampled minimum is
    halved before use as a safety margin, then the bound is padded.
    """
    d = _HEIGHT_DEGREE[ell]
    m = _height_form_min(ell) / 2
    S = math.exp((12 * X - math.log(m)) / d)
    return int(math.ceil(S * pad)) + 1


# ---------------------------------------------------------------- enumeration


def _is_fifth_power_pair(a: int, b: int) -> bool:
    return exact_root(a * b, 5) is not None


def _block_candidates(ell: int, a_lo: int, a_hi: int, S: int, logB: Optional[float]):
    """Coprime (a, b), a in [a_lo, a_hi), a + b < S, float height near or under the cutoff."""
    fam = FAMILY_OF_ELL[ell]
    out = []
    for a in range(a_lo, a_hi):
        bs = np.arange(1, S - a, dtype=np.int64)
        if bs.size == 0:
            continue
        bs = bs[np.gcd(bs, a) == 1]
        if ell == 7:
            # n_7 = ab(a - b) vanishes on the diagonal
            bs = bs[bs != a]
        if logB is not None:
            af = float(a)
            bf = bs.astype(np.float64)
            c4, c6, _ = c_invariants(*e_coefficients(fam, af, bf))
            with np.errstate(divide="ignore"):
                lh = np.maximum(3 * np.log(np.abs(c4)), 2 * np.log(np.abs(c6)))
            # keep a generous margin; the exact test happens later
            bs = bs[lh < logB + 1e-6]
        out.extend((a, int(b)) for b in bs)
    return out


def enumerate_representatives(
    ell: int,
    sum_bound: int,
    X: Optional[float] = None,
    exclude_fifth_powers: bool = True,
    boundary: Optional[list] = None,
) -> list[Representative]:
    """One representative per isomorphism class of E_T(a,b), a, b > 0 coprime, a + b < sum_bound.

    With ``X`` only curves of height below X are kept. For ell = 5 pairs
    with ab a fifth power (both curves then carry 5-torsion) are dropped
    unless ``exclude_fifth_powers`` is False. The representative of a class
    is its lexicographically first (a, b).
    Pairs whose invariant lands on B - 1 or B (so that the verdict would
    change under a neighbouring threshold) are appended to ``boundary``.
    """
    if ell not in FAMILY_OF_ELL:
        raise ValueError("ell must be 5 or 7")
    fam = FAMILY_OF_ELL[ell]
    B = height_threshold(X) if X is not None else None
    logB = math.log(B) if B is not None else None
    seen = {}
    for a, b in _block_candidates(ell, 1, sum_bound, sum_bound, logB):
        if ell == 5 and exclude_fifth_powers and _is_fifth_power_pair(a, b):
            continue
        c4, c6, _ = c_invariants(*e_coefficients(fam, a, b))
        if B is not None:
            M = max(abs(c4) ** 3, c6 * c6)
            if boundary is not None and M in (B - 1, B):
                boundary.append((a, b))
            if M >= B:
                continue
        key = (c4, c6)
        if key not in seen:
            seen[key] = Representative(ParamSpec(fam, a, b), c4, c6)
    return sorted(seen.values(), key=lambda r: (r.spec.a, r.spec.b))


# ---------------------------------------------------------------- statistics


@dataclass
class CurveRecord:
    family: str
    a: int
    b: int
    height: float
    c: int
    c_tilde: int
    bad_primes: list
    rules: list

    CSV_HEADER = "family,a,b,height,c,c_tilde,bad_primes,rules"

    def csv(self) -> str:
        return ",".join(
            [
                self.family,
                str(self.a),
                str(self.b),
                f"{self.height:.6f}",
                str(self.c),
                str(self.c_tilde),
                ";".join(str(p) for p in self.bad_primes),
                ";".join(self.rules),
            ]
        )


def _record(rep: Representative, budget: int) -> CurveRecord:
    c, ct, breakdown = classify_global(rep.spec, budget)
    return CurveRecord(
        rep.spec.family,
        rep.spec.a,
        rep.spec.b,
        rep.height,
        c,
        ct,
        [lp.p for lp in breakdown],
        [lp.rule for lp in breakdown],
    )


def _classify_chunk(args):
    reps, budget = args
    return [_record(r, budget) for r in reps]


def classify_representatives(reps, jobs: int = 1, budget: int = DEFAULT_BUDGET) -> list[CurveRecord]:
    """Classify in order; with jobs > 1 chunks go to a process pool, output order unchanged."""
    reps = list(reps)
    if jobs <= 1 or len(reps) < 2000:
        return [_record(r, budget) for r in reps]
    import multiprocessing as mp

    size = max(1000, len(reps) // (jobs * 8))
    chunks = [(reps[i : i + size], budget) for i in range(0, len(reps), size)]
    with mp.get_context("spawn").Pool(jobs) as pool:
        parts = pool.map(_classify_chunk, chunks)
    return [rec for part in parts for rec in part]


def tilde_stats(
    ell: int,
    X: float,
    jobs: int = 1,
    budget: int = DEFAULT_BUDGET,
    exclude_fifth_powers: bool = False,
    sum_bound_override: Optional[int] = None,
    records: Optional[list] = None,
    checkpoint: Optional[str] = None,
    block: int = 5000,
) -> SurveyRow:
    """N = #{E in G~_{ell,X} : ell | c(E~)} and G = #G~_{ell,X}.

    By default pairs with ab a fifth power are kept for ell = 5; that is the
    convention under which the published counts are reproduced.
    If ``records`` is a list, per-curve CurveRecords are appended to it.
    With ``checkpoint`` the classification runs in blocks of ``block``
    representatives, each finished block recorded in that NDJSON file, so an
    interrupted survey resumes where it stopped.
    """
    S = sum_bound_override or sum_bound(ell, X)
    flagged: list = []
    reps = enumerate_representatives(ell, S, X, exclude_fifth_powers, boundary=flagged)
    if checkpoint is None:
        recs = classify_representatives(reps, jobs, budget)
    else:
        blocks = [(ell, float(X), lo, min(lo + block, len(reps))) for lo in range(0, len(reps), block)]

        def work(key):
            part = classify_representatives(reps[key[2] : key[3]], jobs, budget)
            return [asdict(r) for r in part]

        recs = [CurveRecord(**d) for _, part in run_checkpointed(blocks, work, checkpoint) for d in part]
    if records is not None:
        records.extend(recs)
    N = sum(1 for r in recs if r.c_tilde % ell == 0)
    return SurveyRow(ell, X, N, len(reps), len(flagged))


def ratio_table(rows: list[SurveyRow], step: float = 1) -> list[tuple]:
    """(X, G(X + step) / G(X), N(X + step) / N(X)) wherever both rows are present."""
    by_x = {r.X: r for r in rows}
    out = []
    for X in sorted(by_x):
        nxt = by_x.get(X + step)
        if nxt is None:
            continue
        r0 = by_x[X]
        if r0.G == 0 or r0.N == 0:
            raise ZeroDivisionError(f"row at X={X} has a zero count")
        out.append((X, nxt.G / r0.G, nxt.N / r0.N))
    return out


# ---------------------------------------------------------------- the a = 1 line


def intro_count(X: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{t in [1, X] : 5 divides the Tamagawa number of E_{C5}(1, t) / <(0,0)>}."""
    if X < 1:
        raise ValueError("X must be positive")
    n = 0
    for t in range(1, X + 1):
        _, ct, _ = classify_global(ParamSpec(C5, 1, t), budget)
        if ct % 5 == 0:
            n += 1
    return n


# ---------------------------------------------------------------- fifth powers


def d_forms(s: int, t: int) -> tuple[int, int, int]:
    """The three factors of f_5(s^5, t^5)."""
    d1 = s * s + s * t - t * t
    d2 = s**4 - 3 * s**3 * t + 4 * s * s * t * t - 2 * s * t**3 + t**4
    d3 = s**4 + 2 * s**3 * t + 4 * s * s * t * t + 3 * s * t**3 + t**4
    return d1, d2, d3


def _spf_table(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def _spf_primes(n: int, spf) -> list[int]:
    out = []
    while n > 1:
        p = int(spf[n])
        out.append(p)
        while n % p == 0:
            n //= p
    return out


def fifth_power_pair(s: int, t: int, budget: int = DEFAULT_BUDGET, spf=None):
    """(c(E~), c(E)) for the C5 pair at (s^5, t^5), or None for a factor
    already known to carry 5^5 in both; the caller only needs the test
    against 5^5, so a pair is skipped once both are certainly divisible."""
    a, b = s**5, t**5
    pa = _spf_primes(s, spf) if spf is not None else factorize(s).primes()
    pb = _spf_primes(t, spf) if spf is not None else factorize(t).primes()
    # at p | st: c_p = 25 v_p(st), c~_p = 5 v_p(st); both pick up 5 per prime at least
    if len(pa) + len(pb) >= 5:
        return None
    primes = set(pa) | set(pb) | {5}
    for d in d_forms(s, t):
        if abs(d) > 1:
            primes.update(factorize(d, budget).primes())
    spec = ParamSpec(C5, a, b)
    c = ct = 1
    for p in sorted(primes):
        lp = classify_local(spec, p)
        c *= lp.c_p
        ct *= lp.c_tilde_p
    return ct, c


def fifth_power_experiment(range_max: int, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Counts of coprime (s, t) in [2, range_max]^2 with 5^5 not dividing
    c(E~_{C5}(s^5, t^5)), respectively c(E_{C5}(s^5, t^5))."""
    if range_max < 2:
        raise ValueError("range_max must be at least 2")
    spf = _spf_table(range_max)
    q = 5**5
    n_tilde = n_e = 0
    for s in range(2, range_max + 1):
        for t in range(2, range_max + 1):
            if math.gcd(s, t) != 1:
                continue
            res = fifth_power_pair(s, t, budget, spf)
            if res is None:
                continue
            ct, c = res
            n_tilde += ct % q != 0
            n_e += c % q != 0
    return n_tilde, n_e


# ---------------------------------------------------------------- X_7 primes


def _kth_power_free_table(n: int, k: int) -> np.ndarray:
    ok = np.ones(n + 1, dtype=bool)
    ok[0] = False
    p = 2
    while p**k <= n:
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            ok[:: p**k] = False
        p += 1
    return ok


def x7_primes(range_max: int) -> set[int]:
    """Distinct primes q = f_7(a, b) = -1 mod 7 over coprime a, b in [1, range_max]
    with ab(a - b) 7th-power-free."""
    if range_max < 1:
        raise ValueError("range_max must be positive")
    free = _kth_power_free_table(range_max, 7)
    r = np.arange(1, range_max + 1, dtype=np.int64)
    found: set[int] = set()
    checked: dict[int, bool] = {}
    use_numpy = range_max <= 100_000  # f_7 then fits in int64
    for a in range(1, range_max + 1):
        bs = r[np.gcd(r, a) == 1]
        bs = bs[bs != a]
        if not free[a]:
            continue
        bs = bs[free[bs] & free[np.abs(a - bs)]]
        if use_numpy:
            f = a**3 + 5 * a * a * bs - 8 * a * bs * bs + bs**3
            vals = f[(f > 0) & (f % 7 == 6)].tolist()
        else:
            vals = [v for v in (a**3 + 5 * a * a * b - 8 * a * b * b + b**3 for b in bs.tolist()) if v > 0 and v % 7 == 6]
        for v in vals:
            if v in checked:
                continue
            checked[v] = is_prime(v)
            if checked[v]:
                found.add(v)
    return found


def x7_prime_count(range_max: int) -> int:
    return len(x7_primes(range_max))


# ---------------------------------------------------------------- checkpoints


def run_checkpointed(blocks: Iterable[tuple], work, path: str) -> Iterator[tuple]:
    """Run ``work(block)`` for each block, appending one NDJSON line per
    finished block to ``path``; blocks already present in the file are
    replayed instead of recomputed."""
    done = {}
    if os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    # a torn last line from an interrupted run
                    continue
                done[tuple(obj["block"])] = obj["result"]
    with open(path, "a") as fh:
        if fh.tell() > 0:
            with open(path, "rb") as rb:
                rb.seek(-1, os.SEEK_END)
                if rb.read(1) != b"\n":
                    fh.write("\n")
        for block in blocks:
            key = tuple(block)
            if key in done:
                yield key, done[key]
                continue
            result = work(block)
            fh.write(json.dumps({"block": list(key), "result": result}) + "\n")
            fh.flush()
            yield key, result
