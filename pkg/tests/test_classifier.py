import math
from collections import Counter

import pytest

from oracle import compare, targeted_c3_specs
from tamagawa_isogeny.arith import is_prime, legendre, pell19_solutions
from tamagawa_isogeny.classifier import (
    RULES,
    ConflictingRows,
    candidate_primes,
    classify_global,
    classify_local,
    coprime_to_ell,
    family_forms,
    lemma65_check,
    x5_member,
    x7_member,
)
from tamagawa_isogeny.families import C3, C30, C5, C7, DegenerateParameters, ParamSpec, build_pair, normalize_params
from tamagawa_isogeny.tate import reduction_class


def _specs(family, bound):
    for a in range(1, bound):
        for b in range(-(bound - a), bound - a + 1):
            if b == 0 or math.gcd(a, b) != 1:
                continue
            try:
                yield normalize_params(family, a, b)
            except DegenerateParameters:
                continue


@pytest.mark.parametrize("family", [C3, C5, C7])
def test_classifier_matches_tate_small_box(family):
    for spec in set(_specs(family, 40)):
        assert compare(spec) == [], spec


def test_c30_matches_tate():
    for a in range(1, 200):
        try:
            spec = ParamSpec(C30, a)
        except ValueError:
            continue
        assert compare(spec) == [], spec


def test_every_c3_row_is_reached():
    cov = Counter()
    for spec in targeted_c3_specs():
        assert compare(spec, cov) == [], spec
    for spec in set(_specs(C3, 30)):
        compare(spec, cov)
    missing = [r for r in RULES[C3] if cov[r] == 0]
    assert missing == []


def test_examples():
    assert classify_global(ParamSpec(C5, 1, 1))[:2] == (1, 5)
    assert classify_global(ParamSpec(C3, 24, 1))[:2] == (3, 1)
    c, ct, rows = classify_global(ParamSpec(C5, 3, 64))
    assert ct == 6
    assert {r.p: r.rule for r in rows}[2] == "C5.p|ab"


def test_ctilde_c5_1_2_nonsplit_at_19():
    lp = classify_local(ParamSpec(C5, 1, 2), 19)
    assert lp.rule == "C5.p|f.nonsplit"
    assert legendre(-25, 19) == -1
    Et = build_pair(ParamSpec(C5, 1, 2)).E_tilde
    assert reduction_class(Et, 19) == "nonsplit-multiplicative"


def test_good_prime():
    assert classify_local(ParamSpec(C5, 1, 1), 7).rule == "good"


def test_degenerate_rejected():
    with pytest.raises(DegenerateParameters):
        classify_global(ParamSpec(C7, 1, 1))


def test_family_forms():
    F = family_forms(5, 2, 3)
    assert (F.n_ell, F.f_ell, F.g_ell) == (6, 4 + 66 - 9, 13)
    with pytest.raises(ValueError):
        family_forms(3, 1, 1)


def test_candidate_primes_contain_bad_primes():
    from tamagawa_isogeny.tate import bad_primes
    from tamagawa_isogeny.curves import reduced_minimal_model

    for spec in [ParamSpec(C5, 3, 64), ParamSpec(C3, 24, 1), ParamSpec(C7, 5, 3)]:
        pair = build_pair(spec)
        cands = set(candidate_primes(spec))
        assert set(bad_primes(reduced_minimal_model(pair.E))) <= cands
        assert set(bad_primes(reduced_minimal_model(pair.E_tilde))) <= cands
    assert set(candidate_primes(ParamSpec(C7, 2, 1))) >= {2, 7}


@pytest.mark.parametrize("family,ell,bound", [(C5, 5, 80), (C7, 7, 40)])
def test_coprime_to_ell_matches_local_computation(family, ell, bound):
    for spec in set(_specs(family, bound)):
        ct = classify_global(spec)[1]
        assert coprime_to_ell(spec) == (ct % ell != 0), spec


def test_literal_power_free_form_is_too_strong():
    spec = ParamSpec(C5, 3, 64)
    assert classify_global(spec)[1] == 6
    assert coprime_to_ell(spec)
    assert not coprime_to_ell(spec, literal=True)


def test_coprime_to_ell_rejects_c3():
    with pytest.raises(ValueError):
        coprime_to_ell(ParamSpec(C3, 2, 1))


def test_x5_members():
    assert x5_member(1, 2)
    assert not x5_member(2, 1)
    sols = [s for s in pell19_solutions(10**4)]
    members = [s for s in sols if x5_member(*s)]
    assert members
    for a, b in sols:
        assert math.gcd(a, b) == 1
        assert legendre(-5 * (a * a + b * b), 19) == -1
    # every member has c~ prime to 5
    for a, b in members:
        spec = normalize_params(C5, a, b)
        assert classify_global(spec)[1] % 5 != 0


def test_x7_members():
    hits = 0
    for a in range(1, 40):
        for b in range(1, 40):
            if x7_member(a, b):
                hits += 1
                spec = ParamSpec(C7, a, b)
                assert classify_global(spec)[1] % 7 != 0 or not coprime_to_ell(spec)
    assert hits > 0
    assert not x7_member(1, 1)


def test_prime_f7_residue_property_on_box():
    n = 0
    for a in range(1, 101):
        for b in range(1, 101):
            if math.gcd(a, b) != 1:
                continue
            f = family_forms(7, a, b).f_ell
            if not is_prime(abs(f)):
                continue
            assert lemma65_check(a, b), (a, b)
            n += 1
    assert n > 1000


def test_prime_f7_check_rejects_composite():
    a, b = next((a, b) for a in range(1, 20) for b in range(1, 20)
                if math.gcd(a, b) == 1 and not is_prime(abs(family_forms(7, a, b).f_ell)))
    with pytest.raises(ValueError):
        lemma65_check(a, b)


def test_cube_sum_primes_are_1_mod_6():
    from tamagawa_isogeny.arith import factorize

    for c in range(1, 10**4 + 1):
        for v in (c * c + 3 * c + 9, c * c - 3 * c + 9):
            for p in factorize(v).primes():
                if p != 3:
                    assert p % 6 == 1, (c, p)
