import random

import pytest

from kida.arith import factor, small_primes
from kida.errors import OutOfRange, SchemaError
from kida.polymod import PolyModP, poly_gcd, roots, splits_distinct_linear
from kida.rsfamily import (
    F_COEFFS,
    F_PRIME_COEFFS,
    OCTIC,
    QUARTIC,
    check_phi5,
    disc_eval,
    f_eval,
    f_eval_mod,
    f_mod,
    f_prime_mod,
    format_phi5,
    inadmissible_primes,
    is_admissible,
    parse_phi5,
    phi5_at_1728,
    phi5_mod,
    phi5_symmetric_at_1728,
    phi5_table,
    res_f_fprime,
    resultant,
)

KNOWN_T = 1059545078

# Transcribed by hand from the published display, in its order.
PUBLISHED_PHI5 = [
    (0, 0, "141359947154721358697753474691071362751004672000"),
    (1, 0, "53274330803424425450420160273356509151232000"),
    (1, 1, "-264073457076620596259715790247978782949376"),
    (2, 0, "6692500042627997708487149415015068467200"),
    (2, 1, "36554736583949629295706472332656640000"),
    (2, 2, "5110941777552418083110765199360000"),
    (3, 0, "280244777828439527804321565297868800"),
    (3, 1, "-192457934618928299655108231168000"),
    (3, 2, "26898488858380731577417728000"),
    (3, 3, "-441206965512914835246100"),
    (4, 0, "1284733132841424456253440"),
    (4, 1, "128541798906828816384000"),
    (4, 2, "383083609779811215375"),
    (4, 3, "107878928185336800"),
    (4, 4, "1665999364600"),
    (5, 0, "1963211489280"),
    (5, 1, "-246683410950"),
    (5, 2, "2028551200"),
    (5, 3, "-4550940"),
    (5, 4, "3720"),
    (5, 5, "-1"),
    (6, 0, "1"),
]

# the displayed factors (x + c)
DISPLAYED = {
    63241: [9130, 26600, 28822, 31643, 37410, 60303],
    63901: [15646, 16523, 16743, 31583, 36229, 58255],
}


def sylvester_resultant(f, g):
    """Res(f, g) as the Sylvester determinant, by fraction-free Bareiss elimination."""
    f, g = list(reversed(f)), list(reversed(g))  # big-endian
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = [[0] * i + f + [0] * (size - m - 1 - i) for i in range(n)]
    rows += [[0] * i + g + [0] * (size - n - 1 - i) for i in range(m)]
    a = [row[:] for row in rows]
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def test_f_examples():
    assert f_eval(0) == 1
    assert f_eval(1) == 4 * -304 == -1216
    v = f_eval(KNOWN_T)
    assert v % 63241 == 0 and v % 63901 == 0


def test_f_is_the_displayed_product():
    for t in range(-20, 21):
        q = 5 * t**4 - 2 * t**2 + 1
        o = 25 * t**8 - 100 * t**6 - 210 * t**4 - 20 * t**2 + 1
        assert f_eval(t) == q * o
    assert F_COEFFS[0] == 1 and len(F_COEFFS) == 13
    assert QUARTIC[-1] == 5 and OCTIC[-1] == 25


def test_disc_examples():
    assert disc_eval(0) == 64
    assert disc_eval(1) == 64 * (-1216) ** 5


def test_disc_identity_random():
    rng = random.Random(20)
    for _ in range(1000):
        t = rng.randrange(-(10**10), 10**10)
        q = 5 * t**4 - 2 * t**2 + 1
        o = 25 * t**8 - 100 * t**6 - 210 * t**4 - 20 * t**2 + 1
        # 4^3 * quartic^5 * octic^5, as displayed
        assert disc_eval(t) == 4**3 * q**5 * o**5 == 64 * f_eval(t) ** 5


def test_f_mod_paths_agree():
    rng = random.Random(21)
    ell_pool = [p for p in small_primes(10**5) if p > 5]
    for _ in range(1000):
        t = rng.randrange(10**40)
        ell = rng.choice(ell_pool)
        assert f_eval(t) % ell == f_eval_mod(t, ell) == f_eval(t % ell) % ell == f_mod(ell)(t)


def test_resultant_matches_sylvester_determinant():
    assert resultant(F_COEFFS, F_PRIME_COEFFS) == sylvester_resultant(F_COEFFS, F_PRIME_COEFFS)
    rng = random.Random(22)
    for _ in range(50):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(2, 6))] + [rng.randint(1, 5)]
        g = [rng.randint(-9, 9) for _ in range(rng.randint(1, 5))] + [rng.randint(1, 5)]
        assert resultant(f, g) == sylvester_resultant(f, g)


def test_resultant_value():
    res = res_f_fprime()
    assert res != 0
    rep = factor(abs(res))
    assert rep.factors == [(2, 132), (5, 28)]
    assert inadmissible_primes() == {2, 5}


def test_admissibility_matches_gcd():
    for ell in small_primes(10**4):
        if ell <= 5:
            continue
        coprime = poly_gcd(f_mod(ell), f_prime_mod(ell)).degree == 0
        assert is_admissible(ell) == coprime, ell


def test_admissibility_examples():
    assert is_admissible(63241)
    assert is_admissible(7) == (poly_gcd(f_mod(7), f_prime_mod(7)).degree == 0)
    with pytest.raises(OutOfRange):
        is_admissible(5)


def test_phi5_table_is_byte_identical():
    rows = phi5_table()
    assert [(i, j, str(c)) for i, j, c in rows] == PUBLISHED_PHI5
    assert format_phi5(rows) == "".join(f"{i} {j} {c}\n" for i, j, c in PUBLISHED_PHI5)
    assert parse_phi5(format_phi5(rows)) == list(rows)


def test_phi5_monic_sextic():
    coeffs = phi5_at_1728()
    assert len(coeffs) == 7 and coeffs[-1] == 1


def test_phi5_self_check_catches_typos():
    rows = [list(r) for r in phi5_table()]
    rows[5][2] += 1
    with pytest.raises(SchemaError):
        check_phi5([tuple(r) for r in rows])


def test_phi5_parser_rejects_garbage():
    for bad in ("1 2\n", "0 1 5\n", "a b c\n"):
        with pytest.raises(SchemaError):
            parse_phi5(bad)
    assert parse_phi5("# comment\n\n2 1 -7\n") == [(2, 1, -7)]


@pytest.mark.parametrize("ell", sorted(DISPLAYED))
def test_phi5_roots_match_displayed_factorization(ell):
    f = phi5_mod(ell)
    assert roots(f) == sorted(ell - c for c in DISPLAYED[ell])
    assert splits_distinct_linear(f)
    # brute-force confirmation that nothing else vanishes
    assert sum(1 for x in range(ell) if f(x) == 0) == 6


def test_symmetric_phi5_has_double_root_at_1728():
    # the fully symmetric polynomial is divisible by (X - 1728)^2, so it never
    # splits into distinct linear factors; the displayed factorizations come
    # from evaluating the table monomial by monomial
    sym = PolyModP(63241, phi5_symmetric_at_1728())
    assert sym(1728) == 0 and sym.derivative()(1728) == 0
    assert not splits_distinct_linear(sym)
    assert sum(c * 1728**k for k, c in enumerate(phi5_symmetric_at_1728())) == 0
