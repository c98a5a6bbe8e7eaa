import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cndescent.arith import jacobi, octic_minus4, primes_in, quartic_symbol
from cndescent.errors import (
    CompositeModulus,
    Inert,
    NoPrimaryAssociate,
    NotCoprime,
    UndefinedSymbol,
)
from cndescent.quadring import (
    EPS2,
    GAUSS,
    RINGS,
    SQRT2,
    SQRTM2,
    QuadInt,
    primary_associate,
    primary_associate_mod4,
    ring_symbol,
    split_prime,
    symbol_capital,
)

quadints = st.builds(
    QuadInt,
    st.sampled_from(RINGS),
    st.integers(-200, 200),
    st.integers(-200, 200),
)


@given(quadints, quadints)
def test_norm_multiplicative(x, y):
    if x.ring != y.ring:
        return
    assert (x * y).norm == x.norm * y.norm


@given(quadints, quadints)
def test_conjugation_is_multiplicative(x, y):
    if x.ring != y.ring:
        return
    assert (x * y).conj() == x.conj() * y.conj()


def test_split_prime_small_exhaustive_agreement():
    for p in primes_in(3, 2000):
        for ring in RINGS:
            admissible = {
                GAUSS: p % 4 == 1,
                SQRT2: p % 8 in (1, 7),
                SQRTM2: p % 8 in (1, 3),
            }[ring]
            if not admissible:
                with pytest.raises(Inert):
                    split_prime(p, ring)
                continue
            g = split_prime(p, ring)
            if ring is SQRT2:
                # sign of the norm is an associate choice, not pinned
                assert abs(g.norm) == p
            else:
                assert g.norm == p


def test_split_prime_known_values():
    assert split_prime(17, GAUSS).norm == 17
    assert abs(split_prime(17, SQRT2).norm) == 17
    assert split_prime(89, GAUSS).norm == 89
    assert split_prime(1361, GAUSS).norm == 1361
    assert abs(split_prime(7, SQRT2).norm) == 7
    # primary normalization in Z[sqrt2] forces b even, hence norm = 1 mod 8
    assert primary_associate(split_prime(7, SQRT2)).norm == -7


def test_split_prime_large():
    p = primes_in(10**6, 10**6 + 2000, residue=1)[0]
    for ring in RINGS:
        assert abs(split_prime(p, ring).norm) == p


def test_primary_associate_known_values():
    assert primary_associate(QuadInt(GAUSS, 1, 4)) == QuadInt(GAUSS, 1, 4)
    assert primary_associate(QuadInt(SQRT2, 5, 2)) == QuadInt(SQRT2, 5, 2)
    assert primary_associate(QuadInt(SQRTM2, 3, 2)) == QuadInt(SQRTM2, -3, 2)
    assert primary_associate(QuadInt(GAUSS, 5, 8)) == QuadInt(GAUSS, 5, 8)


def test_primary_associate_idempotent_and_primary():
    rng = random.Random(7)
    for _ in range(300):
        ring = rng.choice(RINGS)
        x = QuadInt(ring, rng.randrange(-50, 50), rng.randrange(-50, 50))
        if x.is_zero or x.norm % 2 == 0:
            continue
        try:
            y = primary_associate(x)
        except NoPrimaryAssociate:
            # only Z[sqrt-2] elements of norm = 3 mod 8 lack one (b is odd)
            assert ring is SQRTM2 and x.norm % 8 == 3
            continue
        assert y.is_primary()
        assert abs(y.norm) == abs(x.norm)
        assert primary_associate(y) == y


def test_primary_associate_mod4_normalization():
    for p in primes_in(17, 500, residue=1):
        g = primary_associate_mod4(split_prime(p, SQRT2))
        assert g.b % 2 == 0 and (g.a + g.b) % 4 == 1
    # norm -l case, l = 7 mod 8
    for l in primes_in(7, 500, residue=7):
        g = primary_associate_mod4(split_prime(l, SQRT2))
        assert g.norm == -l
        assert g.b % 2 == 0 and (g.a + g.b) % 4 == 1


def test_ring_symbol_norm_descent():
    # [c / beta] = (c / q) for rational c and beta of norm +-q
    rng = random.Random(8)
    primes = primes_in(3, 3000)
    for _ in range(200):
        ring = rng.choice(RINGS)
        classes = {GAUSS: (1,), SQRT2: (1, 7), SQRTM2: (1, 3)}[ring]
        p = rng.choice(primes)
        if p % (4 if ring is GAUSS else 8) not in classes:
            continue
        beta = split_prime(p, ring)
        c = rng.randrange(1, p)
        assert ring_symbol(QuadInt(ring, c, 0), beta) == jacobi(c, p)


def test_ring_symbol_multiplicative():
    rng = random.Random(9)
    beta = split_prime(89, SQRT2)
    for _ in range(100):
        x = QuadInt(SQRT2, rng.randrange(-30, 30), rng.randrange(-30, 30))
        y = QuadInt(SQRT2, rng.randrange(-30, 30), rng.randrange(-30, 30))
        try:
            sx, sy = ring_symbol(x, beta), ring_symbol(y, beta)
        except NotCoprime:
            continue
        assert ring_symbol(x * y, beta) == sx * sy


def test_ring_symbol_unit_eps2_is_octic_character():
    for p in primes_in(17, 2000, residue=1)[:100]:
        beta = split_prime(p, SQRT2)
        assert ring_symbol(EPS2, beta) == octic_minus4(p)


def test_ring_symbol_errors():
    with pytest.raises(CompositeModulus):
        ring_symbol(QuadInt(GAUSS, 1, 1), QuadInt(GAUSS, 3, 0))  # norm 9
    beta = split_prime(17, GAUSS)
    with pytest.raises(NotCoprime):
        ring_symbol(beta, beta)


def test_symbol_capital_known_values():
    assert symbol_capital(17, 89, SQRT2) == 1
    assert symbol_capital(17, 137, SQRT2) == -1
    assert symbol_capital(41, 113, SQRT2) == 1


def test_symbol_capital_preconditions():
    with pytest.raises(UndefinedSymbol):
        symbol_capital(17, 41, SQRT2)  # (17/41) = -1
    with pytest.raises(UndefinedSymbol):
        symbol_capital(17, 17, SQRT2)
    with pytest.raises(UndefinedSymbol):
        symbol_capital(13, 17, SQRT2)  # 13 not 1 mod 8


def _admissible_pairs(bound, count, seed):
    ps = primes_in(17, bound, residue=1)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p, l = rng.sample(ps, 2)
        if jacobi(p, l) == 1:
            out.append((p, l))
    return out


def test_gauss_symbol_is_burde_product():
    # [pi/lambda] = (p/l)_4 (l/p)_4
    for p, l in _admissible_pairs(3000, 60, seed=10):
        assert symbol_capital(p, l, GAUSS) == quartic_symbol(p, l) * quartic_symbol(l, p)


def test_three_ring_product_relation():
    # [P/L][P*/L*] = [pi/lambda]
    for p, l in _admissible_pairs(3000, 60, seed=11):
        lhs = symbol_capital(p, l, SQRT2) * symbol_capital(p, l, SQRTM2)
        assert lhs == symbol_capital(p, l, GAUSS)


def test_reciprocity_in_real_and_imaginary_rings():
    for p, l in _admissible_pairs(3000, 60, seed=12):
        assert symbol_capital(p, l, SQRT2) == symbol_capital(l, p, SQRT2)
        assert symbol_capital(p, l, SQRTM2) == symbol_capital(l, p, SQRTM2)


def test_conjugate_choice_does_not_change_symbol():
    for p, l in _admissible_pairs(2000, 40, seed=13):
        for ring in RINGS:
            base = symbol_capital(p, l, ring)
            pi_conj = primary_associate(split_prime(p, ring).conj())
            lam = primary_associate(split_prime(l, ring))
            lam_conj = primary_associate(split_prime(l, ring).conj())
            assert ring_symbol(pi_conj, lam) == base
            assert ring_symbol(pi_conj, lam_conj) == base
