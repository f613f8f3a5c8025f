"""One test per acceptance criterion. Each prints, and records for the
terminal summary, a single line "ACCEPTANCE n: PASS|FAIL ..."."""

import math
import random
import time
from collections import Counter

import pytest

from conftest import ACCEPTANCE_LINES
from oracle import compare, targeted_c3_specs
from tamagawa_isogeny.classifier import RULES, classify_global, coprime_to_ell
from tamagawa_isogeny.curves import c_invariants
from tamagawa_isogeny.families import C3, C30, C5, C7, DegenerateParameters, ParamSpec, build_pair, e_coefficients, e_tilde_coefficients, normalize_params
from tamagawa_isogeny.fixtures import BY_LABEL, run_all
from tamagawa_isogeny.survey import fifth_power_experiment, fifth_power_pair, intro_count, ratio_table, tilde_stats, x7_prime_count
from tamagawa_isogeny.tate import conductor, global_tamagawa

# tolerance for the printed four-decimal ratios
RATIO_TOL = 1e-4

_rows: dict = {}


def record(n, ok, detail):
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _row(ell, X):
    if (ell, X) not in _rows:
        _rows[ell, X] = tilde_stats(ell, X)
    return _rows[ell, X]


def _normalized_specs(family, total):
    specs = set()
    for a in range(1, total):
        for b in range(-(total - a), total - a + 1):
            if b == 0 or math.gcd(a, b) != 1:
                continue
            try:
                specs.add(normalize_params(family, a, b))
            except DegenerateParameters:
                continue
    return specs


def _cubefree(a):
    return all(a % (p**3) for p in range(2, round(a ** (1 / 3)) + 2))


@pytest.mark.slow
def test_criterion_1_oracle_equivalence():
    t0 = time.time()
    cov = {fam: Counter() for fam in RULES}
    bad = []
    n = 0
    for fam in (C3, C5, C7):
        for spec in sorted(_normalized_specs(fam, 201), key=lambda s: (s.a, s.b)):
            bad += [(spec, d) for d in compare(spec, cov[fam])]
            n += 1
    for spec in targeted_c3_specs():
        bad += [(spec, d) for d in compare(spec, cov[C3])]
        n += 1
    for a in range(1, 501):
        if not _cubefree(a):
            continue
        try:
            spec = ParamSpec(C30, a)
        except ValueError:
            continue
        bad += [(spec, d) for d in compare(spec, cov[C30])]
        n += 1
    missing = [r for fam in RULES for r in RULES[fam] if not cov[fam].get(r)]
    ok = not bad and not missing
    record(1, ok, f"{n} specs, {len(bad)} mismatches, {sum(len(RULES[f]) for f in RULES) - len(missing)}/{sum(len(RULES[f]) for f in RULES)} rule rows hit ({time.time() - t0:.0f}s)")
    assert not bad, bad[:5]
    assert not missing, missing


def test_criterion_2_intro_counts():
    expected = {10: 4, 100: 59, 1000: 705, 10**4: 7393}
    got = {X: intro_count(X) for X in expected}
    ok = got == expected
    record(2, ok, f"intro_count {got} expected {expected}")
    assert ok


def test_criterion_3_table4_ell5():
    expected = {4: (581, 958), 5: (4611, 7105), 6: (35603, 52412)}
    got = {X: (_row(5, X).N, _row(5, X).G) for X in expected}
    flags = sum(_row(5, X).boundary for X in expected)
    ok = got == expected and flags == 0
    record(3, ok, f"(N, G) {got} expected {expected}, boundary flags {flags}")
    assert ok


@pytest.mark.slow
def test_criterion_4_table4_ell7():
    expected = {13: (113594, 162440), 14: (313490, 441616)}
    got = {X: (_row(7, X).N, _row(7, X).G) for X in expected}
    flags = sum(_row(7, X).boundary for X in expected)
    ok = got == expected and flags == 0
    record(4, ok, f"(N, G) {got} expected {expected}, boundary flags {flags}")
    assert ok


@pytest.mark.slow
def test_criterion_5_ratios():
    # printed G and N ratios for X -> X + 1 at ell = 5; the ell = 7 rows
    # available (13, 14) give an X = 13 ratio that is not printed
    printed = {4: (7.4165, 7.9363), 5: (7.3768, 7.7213)}
    rows = [_row(5, X) for X in (4, 5, 6)]
    got = {X: (g, n) for X, g, n in ratio_table(rows)}
    errs = [abs(got[X][i] - printed[X][i]) for X in printed for i in (0, 1)]
    r7 = ratio_table([_row(7, 13), _row(7, 14)])[0]
    ok = max(errs) <= RATIO_TOL
    shown = {X: (round(g, 4), round(n, 4)) for X, (g, n) in got.items()}
    record(5, ok, f"ell=5 ratios {shown} vs {printed}, max err {max(errs):.2e} (tol {RATIO_TOL}); ell=7 X=13 G {r7[1]:.4f} N {r7[2]:.4f} (not printed)")
    assert ok


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="count differs from the published value under every reading tried")
def test_criterion_6_x7_prime_count():
    got = x7_prime_count(1000)
    ok = got == 32139
    record(6, ok, f"x7_prime_count(1000) = {got}, expected 32139")
    assert ok


def _fifth_oracle(R):
    q = 5**5
    n_tilde = n_e = 0
    mismatches = 0
    for s in range(2, R + 1):
        for t in range(2, R + 1):
            if math.gcd(s, t) != 1:
                continue
            pair = build_pair(ParamSpec(C5, s**5, t**5), verify=False)
            c = global_tamagawa(pair.E)[0]
            ct = global_tamagawa(pair.E_tilde)[0]
            res = fifth_power_pair(s, t)
            if res is None:
                mismatches += c % q != 0 or ct % q != 0
            else:
                mismatches += res != (ct, c)
            n_tilde += ct % q != 0
            n_e += c % q != 0
    return (n_tilde, n_e), mismatches


@pytest.mark.slow
def test_criterion_7_fifth_powers():
    reduced = fifth_power_experiment(100)
    recount, mismatches = _fifth_oracle(100)
    full = fifth_power_experiment(1000)
    ok = full == (18, 36180) and reduced == recount and mismatches == 0
    record(7, ok, f"fifth_power_experiment(1000) = {full} expected (18, 36180); range 100: {reduced} vs Tate recount {recount}, {mismatches} pair mismatches")
    assert ok


def test_criterion_8_fixtures():
    report = run_all()
    failing = [k for k, v in report.items() if v]
    t = {lab: BY_LABEL[lab].tamagawa for lab in ("27.a2", "27.a3", "27.a4")}
    ok = (
        not failing
        and BY_LABEL["11.a3"].torsion_order == 5
        and BY_LABEL["11.a3"].tamagawa == 1
        and t == {"27.a2": 1, "27.a3": 3, "27.a4": 1}
        and BY_LABEL["54.a3"].tamagawa == 3
    )
    record(8, ok, f"{len(report)} fixture checks, failing: {failing or 'none'}")
    assert ok


def _discriminant_violations():
    bad = 0
    from tamagawa_isogeny.classifier import family_forms

    for ell, fam in ((5, C5), (7, C7)):
        for a in range(1, 300):
            for b in range(-(300 - a), 300 - a + 1):
                if b == 0 or math.gcd(a, b) != 1:
                    continue
                F = family_forms(ell, a, b)
                d = c_invariants(*e_coefficients(fam, a, b))[2]
                dt = c_invariants(*e_tilde_coefficients(fam, a, b))[2]
                bad += d != -(F.n_ell**ell) * F.f_ell or dt != -F.n_ell * F.f_ell**ell
    return bad


def _coprime_violations():
    bad = n = 0
    for fam, ell, total in ((C5, 5, 150), (C7, 7, 80)):
        for spec in _normalized_specs(fam, total):
            n += 1
            bad += coprime_to_ell(spec) != (classify_global(spec)[1] % ell != 0)
    return bad, n


def _conductor_violations():
    rng = random.Random(5)
    bad = 0
    for _ in range(150):
        fam = rng.choice((C3, C5, C7))
        a, b = rng.randint(1, 300), rng.randint(-300, 300)
        if b == 0 or math.gcd(a, b) != 1:
            continue
        try:
            pair = build_pair(normalize_params(fam, a, b))
        except DegenerateParameters:
            continue
        bad += conductor(pair.E) != conductor(pair.E_tilde)
    return bad


@pytest.mark.slow
def test_criterion_9_property_suites():
    import test_classifier as tc
    import test_families as tf

    failures = []

    def run(name, fn, *args):
        try:
            fn(*args)
        except AssertionError as exc:
            failures.append(f"{name}: {exc}")

    d = _discriminant_violations()
    if d:
        failures.append(f"discriminant identities: {d}")
    run("d-form factorization", tf.test_fifth_power_factorisation)
    run("cube criterion", tf.test_tilde_c3_torsion_cube_criterion)
    run("prime congruence", tc.test_cube_sum_primes_are_1_mod_6)
    run("Legendre property", tc.test_x5_members)
    run("prime f7 box", tc.test_prime_f7_residue_property_on_box)
    cv, cn = _coprime_violations()
    if cv:
        failures.append(f"coprime criterion: {cv} of {cn}")
    k = _conductor_violations()
    if k:
        failures.append(f"conductor invariance: {k}")
    ok = not failures
    record(9, ok, f"8 property suites, {cn} specs for the coprime criterion, violations: {failures or 'none'}")
    assert ok
