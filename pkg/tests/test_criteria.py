"""Residue-symbol criteria: profiles, the 32-row grid, family classifiers,
coprime-squares relations, and witness coherence."""

import pytest

from cndescent.arith import is_prime, jacobi, octic_minus4, quartic_symbol
from cndescent.criteria import (
    ALL_PROFILES,
    PHI_CLASSES,
    PSI_CASES,
    ResidueProfile,
    check_witness,
    classify_11_minus,
    classify_11_plus,
    classify_2p,
    classify_auto,
    classify_profile,
    classify_small_residues,
    decompose_psi_point,
    phi_class_holds,
    phi_divisor_conditions,
    phi_obstruction,
    phi_pass_classes,
    psi_case_holds,
    psi_obstructed,
    psi_obstruction,
    residue_profile,
    square_pair_relations,
    witness_fixed_sign,
    witness_octic_sign,
)
from cndescent.descent import PHI, PSI, Torsor, search_points, selmer_group
from cndescent.errors import FamilyMismatch, HypothesisViolated
from cndescent.sqclass import SquareClassGroup


def primes_with(residue, modulus, count, start=3):
    out = []
    n = start
    while len(out) < count:
        if n % modulus == residue and is_prime(n):
            out.append(n)
        n += 2
    return out


# --- residue profiles ---------------------------------------------------------


PROFILE_ORACLES = {
    (17, 1361): (1, 1, 1, -1, -1),
    (41, 769): (1, 1, 1, 1, -1),
    (113, 569): (-1, 1, 1, 1, 1),
    (17, 89): (1, 1, -1, -1, -1),
    (41, 113): (1, 1, -1, 1, 1),
}


def test_residue_profile_oracles():
    for (p, l), signs in PROFILE_ORACLES.items():
        assert residue_profile(p, l).as_tuple() == signs, (p, l)


def test_residue_profile_rejects_bad_pairs():
    with pytest.raises(FamilyMismatch):
        residue_profile(5, 13)  # not 1 mod 8
    with pytest.raises(FamilyMismatch):
        residue_profile(17, 17)
    with pytest.raises(FamilyMismatch):
        residue_profile(17, 97)  # (17/97) = -1
    with pytest.raises(FamilyMismatch):
        residue_profile(17, 91)  # 91 = 7 * 13


# --- the 32-profile grid ------------------------------------------------------


def test_grid_census():
    rank0 = rank4 = 0
    for profile in ALL_PROFILES:
        pc = classify_profile(profile)
        # W is the span of the passing classes, and must itself pass
        passing = phi_pass_classes(profile)
        assert pc.w_phi == (passing | {"1"})
        # complement: disjoint from W except "1", contained in failing classes
        assert pc.w_phi & pc.sha_phi_complement == {"1"}
        assert all(
            c == "1" or not phi_class_holds(c, profile)
            for c in pc.sha_phi_complement
        )
        assert pc.sha_phi_dim == 3 - (len(pc.w_phi).bit_length() - 1)
        assert pc.rank_bound == 4 - pc.sha_phi_dim - pc.sha_psi_dim
        if pc.rank_bound == 0:
            rank0 += 1
        if pc.rank_bound == 4:
            rank4 += 1
    assert rank0 == 16
    assert rank4 == 1


SPOT_ROWS = {
    # (pi, a, b, c, d): (sha_psi_dim, w_phi, complement, rank_bound)
    (1, 1, 1, 1, 1): (0, {"1", "2", "p", "2p", "l", "2l", "pl", "2pl"}, {"1"}, 4),
    (1, 1, 1, 1, -1): (0, {"1", "p"}, {"1", "2", "l", "2l"}, 2),
    (1, 1, 1, -1, 1): (0, {"1", "l"}, {"1", "2", "p", "2p"}, 2),
    (1, 1, 1, -1, -1): (1, {"1"}, {"1", "2", "p", "2p", "l", "2l", "pl", "2pl"}, 0),
    (1, 1, -1, -1, -1): (0, {"1", "2pl"}, {"1", "2", "p", "2p"}, 2),
}


def test_grid_spot_rows():
    for signs, (sha_psi, w, comp, rank) in SPOT_ROWS.items():
        pc = classify_profile(ResidueProfile(*signs))
        assert pc.sha_psi_dim == sha_psi, signs
        assert pc.w_phi == frozenset(w), signs
        assert pc.sha_phi_complement == frozenset(comp), signs
        assert pc.rank_bound == rank, signs


def test_psi_case_labels():
    profile = ResidueProfile(1, 1, 1, 1, 1)
    assert all(psi_case_holds(c, profile) for c in ("1Aa", "1Ab", "2Ab", "2Bb"))
    with pytest.raises(ValueError):
        psi_case_holds("3Aa", profile)
    with pytest.raises(ValueError):
        phi_class_holds("q", profile)
    assert not psi_obstructed(profile)


def test_concrete_obstruction_groups():
    # row 4 pair: fully obstructed on both sides
    assert psi_obstruction(17, 1361) == SquareClassGroup.span(17)
    w, comp = phi_obstruction(17, 1361)
    assert w == SquareClassGroup.trivial()
    assert comp == SquareClassGroup.span(2, 17, 1361)
    # row 8 pair: psi side unobstructed, complement <2, p>
    assert psi_obstruction(17, 89) == SquareClassGroup.trivial()
    w, comp = phi_obstruction(17, 89)
    assert w == SquareClassGroup.span(2 * 17 * 89)
    assert comp == SquareClassGroup.span(2, 17)


# --- family classifiers -------------------------------------------------------


def test_classify_11_plus_row4_pair():
    cls = classify_11_plus(17, 1361)
    assert cls.noncongruent
    assert cls.rank_bound == 0
    assert cls.sha2_dim == 4
    assert cls.sha_psi == SquareClassGroup.span(17)
    assert cls.sha_phi == SquareClassGroup.span(2, 17, 1361)
    assert cls.selmer_psi == SquareClassGroup.span(-1, 17, 1361)
    assert cls.selmer_phi == SquareClassGroup.span(2, 17, 1361)


def test_classify_11_plus_row8_pair():
    cls = classify_11_plus(17, 89)
    assert not cls.noncongruent
    assert cls.rank_bound == 2
    assert cls.sha2_dim is None
    assert cls.sha_psi == SquareClassGroup.trivial()
    assert cls.sha_phi == SquareClassGroup.span(2, 17)
    assert cls.w_phi == SquareClassGroup.span(2 * 17 * 89)


def test_classify_11_minus():
    # octic signs: 17 -> -1, 41 -> +1, 73 -> -1
    cls = classify_11_minus(17, 41)
    assert cls.k == 697
    assert cls.noncongruent
    assert cls.sha_phi == SquareClassGroup.span(2, 697)
    assert cls.sha2_dim == 2
    assert cls.selmer_psi == SquareClassGroup.span(-1, 697)
    # product +1: no certificate
    cls = classify_11_minus(17, 73)
    assert not cls.noncongruent
    assert cls.rank_bound == 2
    with pytest.raises(FamilyMismatch):
        classify_11_minus(17, 89)  # (17/89) = +1


def test_classify_2p():
    for p, expect in [(17, False), (41, True), (73, True), (89, True), (97, False)]:
        cls = classify_2p(p)
        assert cls.k == 2 * p
        assert cls.selmer_psi == SquareClassGroup.span(-1, 2, p)
        assert cls.selmer_phi == SquareClassGroup.span(p)
        assert cls.noncongruent == expect, p
        if expect:
            assert cls.sha_psi == cls.sha_phi == SquareClassGroup.span(p)
            assert cls.sha2_dim == 2
    with pytest.raises(FamilyMismatch):
        classify_2p(3)
    with pytest.raises(FamilyMismatch):
        classify_2p(91)


def test_classify_small_residues_3mod8():
    cls = classify_small_residues(3, 11)
    assert cls.noncongruent
    assert cls.sha2_dim == 0
    assert cls.selmer_phi == SquareClassGroup.trivial()
    assert cls.selmer_psi == SquareClassGroup.span(-1, 33)
    assert classify_small_residues(3, 19).noncongruent
    assert classify_small_residues(11, 19).noncongruent


def test_classify_small_residues_5mod8():
    # (p/l) = +1: quartic symmetry criterion
    cls = classify_small_residues(5, 29)
    assert cls.selmer_phi == SquareClassGroup.span(5, 29)
    assert not cls.noncongruent  # (5/29)_4 = (29/5)_4
    cls = classify_small_residues(5, 61)
    assert cls.noncongruent
    assert cls.sha_phi == SquareClassGroup.span(5, 61)
    assert cls.sha2_dim == 2
    # (p/l) = -1: pinned Gaussian-unit criterion. 65 is a classical
    # congruent number, so (5, 13) must not be certified.
    cls = classify_small_residues(5, 13)
    assert cls.selmer_phi == SquareClassGroup.span(10, 26)
    assert not cls.noncongruent
    cls = classify_small_residues(5, 37)
    assert cls.noncongruent
    assert cls.sha_phi == SquareClassGroup.span(10, 74)
    assert cls.sha2_dim == 2


def test_classify_small_residues_7mod8():
    # (p, l) ordered internally so (p/l) = +1
    cls = classify_small_residues(7, 23)
    assert not cls.noncongruent  # [Lambda/Pi] = +1 for (23, 7)
    assert cls.selmer_phi == SquareClassGroup.span(2)
    cls = classify_small_residues(7, 31)
    assert cls.noncongruent
    assert cls.sha_psi == SquareClassGroup.span(cls.p)
    assert cls.sha_phi == SquareClassGroup.span(2)
    assert cls.sha2_dim == 2
    assert classify_small_residues(31, 23).noncongruent


def test_classify_small_residues_rejects():
    with pytest.raises(FamilyMismatch):
        classify_small_residues(3, 13)  # mixed residues
    with pytest.raises(FamilyMismatch):
        classify_small_residues(17, 41)  # 1 mod 8 pairs live elsewhere
    with pytest.raises(FamilyMismatch):
        classify_small_residues(7, 7)


def test_classify_auto_dispatch():
    assert classify_auto(65).family == "pl-5mod8"
    assert classify_auto(34).family == "2p"
    assert classify_auto(697).family == "pl-1mod8-minus"
    assert classify_auto(4633).family == "pl-1mod8-plus"
    assert classify_auto(33).family == "pl-3mod8"
    assert classify_auto(217).family == "pl-7mod8"
    assert classify_auto(30) is None  # three factors
    assert classify_auto(12) is None  # not squarefree
    assert classify_auto(17) is None  # single prime
    assert classify_auto(-65) is None


def sample_family_inputs():
    """(family label, [k classifier inputs]) for the Selmer agreement check."""
    p18 = primes_with(1, 8, 40, start=17)
    pairs_plus, pairs_minus = [], []
    for i, p in enumerate(p18):
        for l in p18[i + 1:]:
            (pairs_plus if jacobi(p, l) == 1 else pairs_minus).append((p, l))
    p3 = primes_with(3, 8, 9)
    p5 = primes_with(5, 8, 9)
    p7 = primes_with(7, 8, 9)
    def pairs_of(ps):
        return [(p, l) for i, p in enumerate(ps) for l in ps[i + 1:]]
    return [
        ("2p", [(p,) for p in p18[:20]]),
        ("plus", sorted(pairs_plus, key=lambda t: t[0] * t[1])[:20]),
        ("minus", sorted(pairs_minus, key=lambda t: t[0] * t[1])[:20]),
        ("3mod8", pairs_of(p3)[:20]),
        ("5mod8", pairs_of(p5)[:20]),
        ("7mod8", pairs_of(p7)[:20]),
    ]


@pytest.mark.parametrize("family,inputs", sample_family_inputs())
def test_selmer_agreement_with_descent_module(family, inputs):
    """Closed-form Selmer groups match the local-solvability computation."""
    assert len(inputs) == 20 or family in ("3mod8", "5mod8", "7mod8")
    for tup in inputs:
        if family == "2p":
            cls = classify_2p(*tup)
        elif family == "plus":
            cls = classify_11_plus(*tup)
        elif family == "minus":
            cls = classify_11_minus(*tup)
        else:
            cls = classify_small_residues(*tup)
        assert cls.selmer_psi == selmer_group(cls.k, PSI), (family, tup)
        assert cls.selmer_phi == selmer_group(cls.k, PHI), (family, tup)


# --- general-divisor conditions on the phi side --------------------------------


def test_phi_divisor_conditions_trivial_class():
    res = phi_divisor_conditions(17 * 89, 1)
    assert all(res.values())


def test_phi_divisor_conditions_rejects():
    with pytest.raises(FamilyMismatch):
        phi_divisor_conditions(17 * 5, 17)  # 5 is not 1 mod 8
    with pytest.raises(FamilyMismatch):
        phi_divisor_conditions(17 * 97, 17)  # not mutual residues
    with pytest.raises(FamilyMismatch):
        phi_divisor_conditions(17 * 89, 3)  # not a divisor


def admissible_pairs(count):
    p18 = primes_with(1, 8, 30, start=17)
    out = []
    for i, p in enumerate(p18):
        for l in p18[i + 1:]:
            if jacobi(p, l) == 1:
                out.append((p, l))
    return sorted(out, key=lambda t: t[0] * t[1])[:count]


@pytest.mark.parametrize("p,l", admissible_pairs(12))
def test_phi_divisor_conditions_match_class_table(p, l):
    """For k = pl the four divisor conditions, taken together, agree with
    the per-class sign conditions of the profile table."""
    profile = residue_profile(p, l)
    for a_div, cls_name in [(p, "p"), (l, "l"), (p * l, "pl")]:
        res = phi_divisor_conditions(p * l, a_div)
        assert all(res.values()) == phi_class_holds(cls_name, profile), (
            p, l, a_div, res,
        )


def test_phi_divisor_conditions_three_primes():
    # 17, 89, 257: pairwise residues, all 1 mod 8
    k = 17 * 89 * 257
    for a_div in (1, 17, 89 * 257, k):
        res = phi_divisor_conditions(k, a_div)
        assert set(res) == {
            "A_octic_trivial",
            "alpha_trivial_over_B",
            "A_octic_matches_B_quartic",
            "cofactor_symbols_trivial",
        }
        assert all(isinstance(v, bool) for v in res.values())


# --- coprime-squares relations --------------------------------------------------


def mutual_pool():
    """Primes = 1 mod 8 that are pairwise quadratic residues."""
    pool = [17, 89, 257]
    for q, r in [(17, 89), (17, 257), (89, 257)]:
        assert jacobi(q, r) == 1
    return pool


def collect_representation_pairs(limit):
    """Instances A x^2 + B y^2 = C v^2, A x^2 - B y^2 = D w^2 with the
    coefficient alphabet {1, 17, 89, 257}."""
    from math import gcd, isqrt

    pool = [1] + mutual_pool()
    found = []
    for a_c in pool:
        for b_c in pool:
            for c_c in pool:
                for d_c in pool:
                    coeffs = [a_c, b_c, c_c, d_c]
                    if any(
                        gcd(u, t) != 1
                        for i, u in enumerate(coeffs)
                        for t in coeffs[i + 1:]
                    ):
                        continue
                    for x in range(1, 130):
                        for y in range(1, 130):
                            s = a_c * x * x + b_c * y * y
                            d2 = a_c * x * x - b_c * y * y
                            if d2 <= 0 or s % c_c or d2 % d_c:
                                continue
                            v2, w2 = s // c_c, d2 // d_c
                            v, w = isqrt(v2), isqrt(w2)
                            if v * v == v2 and w * w == w2:
                                found.append((a_c, b_c, c_c, d_c, x, y, v, w))
                                if len(found) >= limit:
                                    return found
    return found


def test_square_pair_relations_hold_on_instances():
    instances = collect_representation_pairs(25)
    assert len(instances) >= 20
    seen_nontrivial = 0
    for inst in instances:
        rel = square_pair_relations(*inst)
        assert rel.congruence and rel.rel_quartic and rel.rel_octic, inst
        if set(inst[:4]) != {1}:
            seen_nontrivial += 1
    assert seen_nontrivial > 0


def test_square_pair_relations_rejects():
    with pytest.raises(HypothesisViolated):
        square_pair_relations(1, 1, 1, 1, 1, 1, 1, 1)  # equations fail
    # 3^2 + 4^2 = 5^2 but 3 mod 4 coefficients are out of scope
    with pytest.raises(HypothesisViolated):
        square_pair_relations(3, 1, 1, 1, 1, 2, 0, 0)
    with pytest.raises(HypothesisViolated):
        # valid equations, coefficients not coprime (17 shared)
        square_pair_relations(17, 17, 1, 1, 1, 1, 0, 0)


# --- witness lemmas -------------------------------------------------------------


def test_witness_fixed_sign_instance():
    # 117^2 - 2*83^2 = -89, 117^2 - 83^2 = 17 * 20^2
    assert witness_fixed_sign(89, 17, 117, 83, 1, 20, 1) == 1
    with pytest.raises(HypothesisViolated):
        witness_fixed_sign(89, 17, 117, 83, 2, 20, 1)
    with pytest.raises(HypothesisViolated):
        witness_fixed_sign(89, 17, 117, 83, 1, 20, 2)
    with pytest.raises(HypothesisViolated):
        witness_fixed_sign(89, 97, 117, 83, 1, 20, 1)  # (89/97) = -1


def test_witness_octic_sign_instances():
    # eps = +1: 5^2 + 2*8^2 = 17*3^2 and 5^2 + 8^2 = 89
    assert witness_octic_sign(17, 89, 5, 8, 3, 1, 1) == (
        quartic_symbol(17, 89) * quartic_symbol(89, 17) * octic_minus4(89)
    )
    assert witness_octic_sign(17, 89, 5, 8, 3, 1, 1) == 1
    # eps = -1: 25^2 - 2*16^2 = 113 and 25^2 - 16^2 = 41*3^2
    assert witness_octic_sign(113, 41, 25, 16, 1, 3, -1) == octic_minus4(41) == 1
    with pytest.raises(HypothesisViolated):
        witness_octic_sign(17, 89, 5, 8, 3, 1, -1)


# --- point decomposition and full coherence -------------------------------------


def test_decompose_known_point():
    dec = decompose_psi_point(41, 113, (3936, 25, 1))
    assert dec.case == "2Aa"
    assert (dec.m_val, dec.e_val, dec.a_val, dec.b_val) == (25, 1, 3, 16)
    assert dec.quadruple == (41, 1, 1, 113)
    assert dec.variables == (3, 16, 25, 1)
    assert dec.lemma == "octic"
    assert dec.lemma_pl == (113, 41)
    assert dec.eps == -1


def test_decompose_rejects_bad_points():
    with pytest.raises(HypothesisViolated):
        decompose_psi_point(41, 113, (3936, 25, 2))
    with pytest.raises(HypothesisViolated):
        decompose_psi_point(41, 113, (3936, 50, 2))


def test_check_witness_known_point():
    rep = check_witness(41, 113, (3936, 25, 1))
    assert rep.ok
    assert rep.actual_symbol == 1
    assert rep.predicted_symbol == 1
    assert rep.table_symbol == 1
    assert all(rep.relations)
    assert rep.case_conditions_hold


@pytest.mark.parametrize("p,l", [(41, 113), (17, 89), (17, 137), (73, 137)])
def test_check_witness_over_searched_points(p, l):
    """Every point found on T(p) at small height passes all coherence
    checks; same for T(l) with the roles of p and l exchanged."""
    k = p * l
    checked = 0
    for pr, lq in ((p, l), (l, p)):
        torsor = Torsor(PSI, pr, -pr * lq * lq)
        for pt in search_points(torsor, 140):
            rep = check_witness(pr, lq, pt)
            assert rep.ok, (pr, lq, pt)
            checked += 1
    assert checked > 0, (p, l)
