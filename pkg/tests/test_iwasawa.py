import itertools
import random

import pytest

from kida.curves import REDUCTION_TYPES
from kida.errors import (
    AssumptionViolation,
    ContradictsLemma,
    DecompositionViolation,
    DegreeMismatch,
    InvalidCorank,
)
from kida.iwasawa import (
    ASSUMPTIONS,
    Bounds,
    Corank,
    LambdaLedger,
    LedgerPlace,
    PlaceDatum,
    TowerSpec,
    anticyclotomic_sigma_class,
    classify_place,
    congruence_ledger,
    herbrand_ord,
    imprimitive_lambda,
    kida_lambda,
    lambda_difference,
    lambda_via_herbrand,
    sigma_diff_bound,
)

P = 5


def place(e, reduction="good", over_p=False, torsion=False, label="w", fin=True):
    return PlaceDatum(label, e, reduction, over_p, torsion, fin)


def tower(places, degree=P, lambda_K=0, p=P, **flags):
    assumptions = dict.fromkeys(ASSUMPTIONS, True) | flags
    return TowerSpec(p, degree, lambda_K, list(places), assumptions)


# over_p x reduction x local p-torsion: 2 * 4 * 2 = 16 place types
PLACE_TYPES = list(itertools.product((False, True), REDUCTION_TYPES, (False, True)))


def grid_places(p):
    for (over_p, red, tor), e in itertools.product(PLACE_TYPES, (1, p)):
        yield place(e, red, over_p, tor)


def test_classify_examples():
    assert classify_place(place(5, "split_mult"), P) == "P1"
    assert classify_place(place(5, "good", torsion=True), P) == "P2"
    assert classify_place(place(1, "good"), P) == "neither"
    assert classify_place(place(1, "good", torsion=True), P) == "neither"
    assert classify_place(place(1, "split_mult"), P) == "P1"


def test_over_p_never_p1_or_p2():
    for w in grid_places(P):
        if w.over_p:
            assert classify_place(w, P) == "neither"


def test_kida_examples():
    assert kida_lambda(tower([place(5, "split_mult")])) == 4
    assert kida_lambda(tower([], degree=25, lambda_K=3)) == 75
    assert kida_lambda(tower([place(5, "good", torsion=True)], degree=25, lambda_K=1)) == 33


def test_herbrand_examples():
    assert herbrand_ord(tower([place(5, "split_mult")])) == 1
    assert herbrand_ord(tower([place(5, "good", torsion=True)])) == 2
    assert herbrand_ord(tower([place(1, "split_mult"), place(1, "good")])) == 0
    assert lambda_via_herbrand(tower([place(5, "split_mult")])) == 4
    assert lambda_via_herbrand(tower([place(1, "good")], lambda_K=2)) == 10
    assert lambda_via_herbrand(tower([place(5, "good", torsion=True)])) == 8
    with pytest.raises(DegreeMismatch):
        herbrand_ord(tower([], degree=25))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_kida_equals_herbrand_single_places(p):
    for w, lam in itertools.product(grid_places(p), range(6)):
        t = tower([w], degree=p, lambda_K=lam, p=p)
        assert kida_lambda(t) == lambda_via_herbrand(t)


def test_kida_equals_herbrand_place_pairs():
    places = list(grid_places(P))
    for a, b in itertools.product(places, repeat=2):
        for lam in range(6):
            t = tower([a, b], lambda_K=lam)
            assert kida_lambda(t) == lambda_via_herbrand(t)


def test_linear_in_lambda_k():
    rng = random.Random(40)
    places = list(grid_places(P))
    for _ in range(200):
        ws = rng.sample(places, rng.randint(0, 6))
        degree = rng.choice((1, 5, 25, 125))
        ws = [w for w in ws if degree % w.e == 0]
        base = kida_lambda(tower(ws, degree=degree))
        for lam in range(6):
            assert kida_lambda(tower(ws, degree=degree, lambda_K=lam)) == base + degree * lam


def test_additive_over_place_lists():
    rng = random.Random(41)
    places = list(grid_places(P))
    for _ in range(200):
        a = rng.sample(places, rng.randint(0, 4))
        b = rng.sample(places, rng.randint(0, 4))
        lam = rng.randrange(6)
        d = P * lam
        both = kida_lambda(tower(a + b, lambda_K=lam))
        assert both - d == (kida_lambda(tower(a, lambda_K=lam)) - d) + (kida_lambda(tower(b, lambda_K=lam)) - d)


def test_chained_degree_p_steps_equal_direct_p2():
    """K -> M -> L with [M:K] = [L:M] = p.

    A prime with step indices (e1, e2) has p/e1 places in M and
    (p/e1)(p/e2) places in L, each of total index e1*e2.
    """
    rng = random.Random(42)
    for _ in range(300):
        lam = rng.randrange(6)
        kinds = [
            (rng.choice(("good", "split_mult", "nonsplit_mult", "additive")), rng.random() < 0.5,
             rng.choice((1, P)), rng.choice((1, P)))
            for _ in range(rng.randint(0, 4))
        ]
        step1, step2, direct = [], [], []
        for red, tor, e1, e2 in kinds:
            step1 += [place(e1, red, torsion=tor)] * (P // e1)
            step2 += [place(e2, red, torsion=tor)] * ((P // e1) * (P // e2))
            direct += [place(e1 * e2, red, torsion=tor)] * ((P // e1) * (P // e2))
        lam_m = kida_lambda(tower(step1, lambda_K=lam))
        chained = kida_lambda(tower(step2, lambda_K=lam_m))
        assert chained == kida_lambda(tower(direct, degree=P * P, lambda_K=lam))


def test_assumption_flags():
    for flag in ASSUMPTIONS:
        with pytest.raises(AssumptionViolation) as err:
            kida_lambda(tower([], **{flag: False}))
        assert err.value.flag == flag


def test_infinitely_decomposed_p1_place():
    with pytest.raises(DecompositionViolation) as err:
        kida_lambda(tower([place(5, "split_mult", fin=False)]))
    assert "finitely decomposed" in str(err.value)
    # irrelevant places may be infinitely decomposed
    assert kida_lambda(tower([place(5, "good", fin=False)])) == 0


def test_tower_validation():
    with pytest.raises(ValueError):
        tower([], degree=10)
    with pytest.raises(ValueError):
        tower([place(25, "good")], degree=5)
    with pytest.raises(ValueError):
        tower([], p=2, degree=2)
    with pytest.raises(ValueError):
        place(0)
    with pytest.raises(ValueError):
        place(5, "bad_type")


def ledger(lam, pairs):
    return LambdaLedger(P, lam, [LedgerPlace(f"v{i}", a, b) for i, (a, b) in enumerate(pairs)])


def test_ledger_examples():
    assert lambda_difference(ledger(3, [(Corank(2), Corank(2)), (Corank(0), Corank(0))])) == 3
    assert lambda_difference(ledger(0, [(Corank(1), Corank(0))] * 2)) == 2
    res = lambda_difference(ledger(0, [(Corank(1, exact=False), Corank(0))] * 4))
    assert res == Bounds(4, None) and res.describe("lambda_2") == "lambda_2 >= 4"
    assert lambda_difference(ledger(1, [(Corank(2), Corank(0))])) == 3


def test_ledger_rejects_negative():
    with pytest.raises(InvalidCorank):
        Corank(-1)
    with pytest.raises(InvalidCorank):
        lambda_difference(ledger(-1, []))
    with pytest.raises(ValueError):
        LedgerPlace("v", Corank(0), Corank(0), over_p=True)


def test_ledger_antisymmetry():
    rng = random.Random(43)
    for _ in range(300):
        pairs = [(Corank(rng.randrange(4)), Corank(rng.randrange(4))) for _ in range(rng.randint(0, 5))]
        lam1 = rng.randrange(6)
        led = ledger(lam1, pairs)
        lam2 = lambda_difference(led)
        if lam2 < 0:
            continue
        assert lambda_difference(led.swapped(lam2)) == lam1
        assert imprimitive_lambda(led) == imprimitive_lambda(led.swapped(lam2))


def test_ledger_bounds_contain_truth():
    rng = random.Random(44)
    for _ in range(300):
        true = [(rng.randrange(4), rng.randrange(4)) for _ in range(rng.randint(1, 5))]
        known = []
        for a, b in true:
            drop = rng.randrange(a + 1)
            known.append((Corank(a - drop, exact=drop == 0 and rng.random() < 0.5), Corank(b)))
        lam1 = rng.randrange(6)
        exact = lam1 + sum(a - b for a, b in true)
        got = lambda_difference(ledger(lam1, known))
        if isinstance(got, int):
            assert got == exact
        else:
            assert got.lo is None or got.lo <= exact
            assert got.hi is None or exact <= got.hi


def test_bounds_arithmetic():
    b = Bounds(2, None)
    assert b + 3 == Bounds(5, None)
    assert -b == Bounds(None, -2)
    assert Bounds(1, 4).describe("x") == "1 <= x <= 4"
    assert Bounds(None, None).describe("x") == "x unbounded"
    assert Bounds(7, 7).exact and Bounds(7, 7).describe("x") == "x = 7"


def test_sigma_diff_bound_examples():
    assert sigma_diff_bound("good", "split_mult", True, True) == 1
    assert sigma_diff_bound("good", "split_mult", False, True) == 0
    assert sigma_diff_bound("good", "additive", False, True) == 0
    with pytest.raises(ContradictsLemma):
        sigma_diff_bound("good", "additive", True, True)
    with pytest.raises(ContradictsLemma):
        sigma_diff_bound("good", "nonsplit_mult", True, True)
    with pytest.raises(DecompositionViolation):
        sigma_diff_bound("good", "split_mult", True, False)
    with pytest.raises(ValueError):
        sigma_diff_bound("good", "good", True, True)
    with pytest.raises(ValueError):
        sigma_diff_bound("good", "split_mult", True, True, over_p=True)


def test_anticyclotomic_class():
    assert anticyclotomic_sigma_class(5, False, 5) == "finitely_decomposed"
    assert anticyclotomic_sigma_class(13, True, 5) == "finitely_decomposed"
    assert anticyclotomic_sigma_class(7, False, 5) == "infinitely_decomposed"


def test_congruence_ledger_for_known_pair():
    led = congruence_ledger([63241, 63901])
    assert len(led.omega0) == 4
    assert lambda_difference(led) == Bounds(4, None)
    with pytest.raises(DecompositionViolation):
        congruence_ledger([63241, 7])
