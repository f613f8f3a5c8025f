"""Tate's algorithm on the minimal models, used as the reference for the
closed-form classifier."""

from tamagawa_isogeny.arith import factorize
from tamagawa_isogeny.classifier import candidate_primes, classify_local
from tamagawa_isogeny.curves import c_invariants, minimal_model
from tamagawa_isogeny.families import build_pair
from tamagawa_isogeny.tate import tate_ai


def compare(spec, coverage=None):
    """List of (p, classifier pair, tate pair) disagreements for one spec.

    Also reports a bad prime the classifier would never look at."""
    pair = build_pair(spec, verify=False)
    E, _ = minimal_model(pair.E)
    Et, _ = minimal_model(pair.E_tilde)
    bad = set(factorize(c_invariants(*E.ai)[2]).primes()) | set(factorize(c_invariants(*Et.ai)[2]).primes())
    cand = set(candidate_primes(spec))
    out = [(p, None, "missed bad prime") for p in sorted(bad - cand)]
    for p in sorted(cand):
        lp = classify_local(spec, p, coverage=coverage)
        tate = (tate_ai(E.ai, p).c_p, tate_ai(Et.ai, p).c_p)
        if (lp.c_p, lp.c_tilde_p) != tate or (p in bad) != (lp.rule != "good"):
            out.append((p, lp, tate))
    return out


def targeted_c3_specs():
    """C3 parameters that land in every p = 3 row: a with v_3(a) in 5..8
    and a = 27 b + 3^e m with e in 5..10."""
    import math

    from tamagawa_isogeny.families import C3, ParamSpec

    out = []
    for base in (243, 729, 3**7, 3**8):
        for k in (1, 2, 4, 5, 7, 8, 10, 11, 13):
            for b in range(-20, 21):
                a = base * k
                if b and math.gcd(a, b) == 1:
                    out.append(ParamSpec(C3, a, b))
    for e in range(5, 11):
        for m in (1, 2, -1, -2, 4, 5, 7, -7):
            for b in range(-30, 31):
                if b % 3 == 0:
                    continue
                a = 27 * b + 3**e * m
                if a > 0 and math.gcd(a, b) == 1:
                    out.append(ParamSpec(C3, a, b))
    return out
