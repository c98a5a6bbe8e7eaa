"""Residue-symbol criteria: obstruction certificates and rank bounds.

For k = pl with p = l = 1 mod 8 and (p/l) = +1 everything is driven by the
five-sign residue profile

    ( [P/L], (l/p)_4, (p/l)_4, (-4/p)_8, (-4/l)_8 )

with [P/L] the Z[sqrt2] symbol of the primary primes. Eight case conditions
govern the psi-side torsor T(p); seven class conditions govern the phi-side
torsors. A class whose condition fails has no rational point, which turns
local-only Selmer elements into certified Tate-Shafarevich classes. The
remaining families (k = 2p, (p/l) = -1, and the small residue classes mod 8)
have their own closed-form criteria.

Sign conventions: every symbol value is +1 or -1, never 0; a composite
(-4/n)_8 means the product over prime factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .arith import (
    factor,
    is_prime,
    jacobi,
    octic_minus4,
    octic_minus4_product,
    quartic_symbol,
    quartic_symbol_product,
)
from .errors import (
    FamilyMismatch,
    HypothesisViolated,
    InconsistentCriteria,
)
from .quadring import (
    GAUSS,
    SQRT2,
    QuadInt,
    primary_associate,
    primary_associate_mod4,
    ring_symbol,
    split_prime,
    symbol_capital,
)
from .sqclass import SquareClassGroup, squarefree_mul

# --- the residue profile ----------------------------------------------------


@dataclass(frozen=True)
class ResidueProfile:
    """The five signs that control the k = pl, (p/l) = +1 classification."""

    pi: int  # [P/L] in Z[sqrt2]
    a: int  # (l/p)_4
    b: int  # (p/l)_4
    c: int  # (-4/p)_8
    d: int  # (-4/l)_8

    def __iter__(self):
        return iter((self.pi, self.a, self.b, self.c, self.d))

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.pi, self.a, self.b, self.c, self.d)


def residue_profile(p: int, l: int) -> ResidueProfile:
    """Profile of an admissible pair: p, l distinct primes = 1 mod 8 with
    (p/l) = +1."""
    if p % 8 != 1 or l % 8 != 1 or p == l or not (is_prime(p) and is_prime(l)):
        raise FamilyMismatch(f"({p}, {l}) is not a pair of distinct primes = 1 mod 8")
    if jacobi(p, l) != 1:
        raise FamilyMismatch(f"profile needs (p/l) = +1; ({p}/{l}) = -1")
    return ResidueProfile(
        pi=symbol_capital(p, l, SQRT2),
        a=quartic_symbol(l, p),
        b=quartic_symbol(p, l),
        c=octic_minus4(p),
        d=octic_minus4(l),
    )


ALL_PROFILES = tuple(
    ResidueProfile(pi, a, b, c, d)
    for pi in (1, -1)
    for a in (1, -1)
    for b in (1, -1)
    for c in (1, -1)
    for d in (1, -1)
)

# --- psi side: eight solvability cases for T(p) ------------------------------

PSI_CASES = ("1Aa", "1Ab", "1Ba", "1Bb", "2Aa", "2Ab", "2Ba", "2Bb")


def psi_case_holds(case: str, profile: ResidueProfile) -> bool:
    """Necessary conditions on the profile for a T(p) point in this case.

    A global point on N^2 = p M^4 - p l^2 e^4 falls into exactly one of
    eight cases by the parities of e and N/p, whether l | M, and which of
    M^2 +- l e^2 the prime p divides; each case forces three sign
    conditions. If all eight fail, T(p) has no rational point.
    """
    pi, a, b, c, d = profile.as_tuple()
    table = {
        "1Aa": pi == 1 and a == 1 and c == 1,
        "1Ab": pi == 1 and b == 1 and a * c == 1,
        "1Ba": pi == c * d and a == 1 and b * c == 1,
        "1Bb": pi == d and b == 1 and c == 1,
        "2Aa": pi == c and a == 1 and d == 1,
        "2Ab": pi == 1 and a == 1 and b * d == 1,
        "2Ba": pi == c * d and b == 1 and a * d == 1,
        "2Bb": pi == 1 and b == 1 and d == 1,
    }
    try:
        return table[case]
    except KeyError:
        raise ValueError(f"unknown case label {case!r}") from None


def psi_obstructed(profile: ResidueProfile) -> bool:
    """True when every psi case fails: T(p) is then a Sha class."""
    return not any(psi_case_holds(case, profile) for case in PSI_CASES)


def psi_obstruction(p: int, l: int) -> SquareClassGroup:
    """Certified subgroup of Sha on the psi side, as concrete classes.

    Either trivial or <p>: the free classes <-1, pl> always have points,
    so the quotient of the psi Selmer group <-1, p, l> is generated by
    the image of p.
    """
    if psi_obstructed(residue_profile(p, l)):
        return SquareClassGroup.span(p)
    return SquareClassGroup.trivial()


# --- phi side: seven class conditions ----------------------------------------

PHI_CLASSES = ("2", "p", "2p", "l", "2l", "pl", "2pl")


def phi_class_holds(cls: str, profile: ResidueProfile) -> bool:
    """Necessary profile conditions for a rational point on the phi-side
    torsor of the given class (classes named by their b1 = 1 mod squares
    representative in terms of 2, p, l)."""
    pi, a, b, c, d = profile.as_tuple()
    table = {
        "2": c == 1 and d == 1 and pi == 1,
        "p": b == 1 and a == 1 and c == 1,
        "2p": a * b == d and c == 1 and pi == a,
        "l": b == 1 and a == 1 and d == 1,
        "2l": a * b == c and d == 1 and pi == b,
        "pl": a == b and c == 1 and d == 1,
        "2pl": a * b == c and c == d and pi == 1,
    }
    try:
        return table[cls]
    except KeyError:
        raise ValueError(f"unknown phi class {cls!r}") from None


def phi_pass_classes(profile: ResidueProfile) -> frozenset[str]:
    return frozenset(c for c in PHI_CLASSES if phi_class_holds(c, profile))


_SYMBOLIC_ORDER = ("2", "p", "2p", "l", "2l", "pl", "2pl")
_SYMBOLIC_MUL = {}


def _symbolic_mul(x: str, y: str) -> str:
    """Product in the group {1,2,p,2p,l,2l,pl,2pl} mod squares."""
    if not _SYMBOLIC_MUL:
        vec = {"1": 0b000, "2": 0b001, "p": 0b010, "2p": 0b011,
               "l": 0b100, "2l": 0b101, "pl": 0b110, "2pl": 0b111}
        inv = {v: k for k, v in vec.items()}
        for s, sv in vec.items():
            for t, tv in vec.items():
                _SYMBOLIC_MUL[(s, t)] = inv[sv ^ tv]
    return _SYMBOLIC_MUL[(x, y)]


def _symbolic_span(gens) -> frozenset[str]:
    elems = {"1"}
    for g in gens:
        elems |= {_symbolic_mul(g, e) for e in list(elems)}
    # closure (dim <= 3, two passes suffice)
    for _ in range(2):
        elems |= {_symbolic_mul(x, y) for x in list(elems) for y in list(elems)}
    return frozenset(elems)


@dataclass(frozen=True)
class ProfileClassification:
    """Symbolic classification of one residue profile."""

    profile: ResidueProfile
    sha_psi_dim: int  # 0 or 1
    w_phi: frozenset[str]  # passing classes + "1"; always a group
    sha_phi_complement: frozenset[str]  # canonical certified complement
    rank_bound: int

    @property
    def sha_phi_dim(self) -> int:
        return len(self.sha_phi_complement).bit_length() - 1


def classify_profile(profile: ResidueProfile) -> ProfileClassification:
    """Pure sign logic: W candidates, certified Sha dimensions, rank bound."""
    passing = phi_pass_classes(profile)
    w = _symbolic_span(passing) if passing else frozenset({"1"})
    if not (passing | {"1"}) == w:
        raise InconsistentCriteria(
            f"phi pass set {sorted(passing)} is not a group for {profile}"
        )
    failing = [c for c in _SYMBOLIC_ORDER if c not in w]
    # canonical complement: greedy over failing classes in the fixed order
    comp: frozenset[str] = frozenset({"1"})
    target = 8 // len(w)
    for c in failing:
        cand = _symbolic_span(set(comp - {"1"}) | {c})
        if all(x == "1" or x in failing for x in cand):
            comp = cand
            if len(comp) == target:
                break
    if len(comp) != target:
        raise InconsistentCriteria(
            f"no certified complement of dimension {target.bit_length() - 1} "
            f"for {profile}"
        )
    sha_psi_dim = 1 if psi_obstructed(profile) else 0
    sha_phi_dim = len(comp).bit_length() - 1
    rank_bound = 4 - sha_phi_dim - sha_psi_dim
    return ProfileClassification(
        profile=profile,
        sha_psi_dim=sha_psi_dim,
        w_phi=w,
        sha_phi_complement=comp,
        rank_bound=rank_bound,
    )


def _concretize(symbolic: frozenset[str], p: int, l: int) -> SquareClassGroup:
    values = {"1": 1, "2": 2, "p": p, "2p": 2 * p, "l": l, "2l": 2 * l,
              "pl": p * l, "2pl": 2 * p * l}
    return SquareClassGroup.from_elements({values[s] for s in symbolic})


def phi_obstruction(
    p: int, l: int
) -> tuple[SquareClassGroup, SquareClassGroup]:
    """(W candidates, certified Sha complement) for the phi side, concrete."""
    pc = classify_profile(residue_profile(p, l))
    return _concretize(pc.w_phi, p, l), _concretize(pc.sha_phi_complement, p, l)


# --- classifications per family ----------------------------------------------


@dataclass(frozen=True)
class Classification:
    """Everything the residue criteria can say about one k."""

    family: str
    k: int
    p: int | None
    l: int | None
    profile: ResidueProfile | None
    selmer_psi: SquareClassGroup
    selmer_phi: SquareClassGroup
    sha_psi: SquareClassGroup
    sha_phi: SquareClassGroup
    w_phi: SquareClassGroup
    rank_bound: int
    sha2_dim: int | None
    notes: tuple[str, ...] = ()

    @property
    def noncongruent(self) -> bool:
        return self.rank_bound == 0


def classify_11_plus(p: int, l: int) -> Classification:
    """k = pl, p = l = 1 mod 8, (p/l) = +1: the 32-profile grid."""
    profile = residue_profile(p, l)
    pc = classify_profile(profile)
    k = p * l
    s_psi = SquareClassGroup.span(-1, p, l)
    s_phi = SquareClassGroup.span(2, p, l)
    sha_psi = SquareClassGroup.span(p) if pc.sha_psi_dim else SquareClassGroup.trivial()
    w_phi = _concretize(pc.w_phi, p, l)
    sha_phi = _concretize(pc.sha_phi_complement, p, l)
    rank_bound = pc.rank_bound
    return Classification(
        family="pl-1mod8-plus",
        k=k,
        p=p,
        l=l,
        profile=profile,
        selmer_psi=s_psi,
        selmer_phi=s_phi,
        sha_psi=sha_psi,
        sha_phi=sha_phi,
        w_phi=w_phi,
        rank_bound=rank_bound,
        sha2_dim=(sha_psi.dim + sha_phi.dim) if rank_bound == 0 else None,
    )


def classify_11_minus(p: int, l: int) -> Classification:
    """k = pl, p = l = 1 mod 8, (p/l) = -1.

    Selmer groups collapse to <-1, pl> and <2, pl>; the psi side has no
    obstruction (W already fills its Selmer group). The phi side is fully
    obstructed exactly when (-4/p)_8 (-4/l)_8 = -1, giving rank 0 with
    #Sha(E)[2] = 4. Otherwise each nontrivial class carries a necessary
    condition which that sign equation makes pass or fail together.
    """
    if p % 8 != 1 or l % 8 != 1 or not (is_prime(p) and is_prime(l)) or p == l:
        raise FamilyMismatch(f"({p}, {l}) is not a pair of distinct primes = 1 mod 8")
    if jacobi(p, l) != -1:
        raise FamilyMismatch(f"classify_11_minus needs (p/l) = -1 for ({p}, {l})")
    k = p * l
    s_psi = SquareClassGroup.span(-1, k)
    s_phi = SquareClassGroup.span(2, k)
    cp, cl = octic_minus4(p), octic_minus4(l)
    notes = (
        f"class 2 and 2pl need (-4/p)8 = (-4/l)8; got {cp:+d}, {cl:+d}",
        f"class pl needs (-4/pl)8 = +1; got {cp * cl:+d}",
    )
    if cp * cl == -1:
        sha_phi = s_phi
        w_phi = SquareClassGroup.trivial()
        rank_bound = 0
    else:
        sha_phi = SquareClassGroup.trivial()
        w_phi = s_phi
        rank_bound = 2
    return Classification(
        family="pl-1mod8-minus",
        k=k,
        p=p,
        l=l,
        profile=None,
        selmer_psi=s_psi,
        selmer_phi=s_phi,
        sha_psi=SquareClassGroup.trivial(),
        sha_phi=sha_phi,
        w_phi=w_phi,
        rank_bound=rank_bound,
        sha2_dim=sha_phi.dim if rank_bound == 0 else None,
        notes=notes,
    )


def classify_2p(p: int) -> Classification:
    """k = 2p with p = 1 mod 8: Selmer <-1, 2, p> and <p>; rank 0 with
    Sha[psi] = Sha[phi] = <p> when p = 9 mod 16."""
    if p % 8 != 1 or not is_prime(p):
        raise FamilyMismatch(f"classify_2p needs a prime = 1 mod 8, got {p}")
    k = 2 * p
    s_psi = SquareClassGroup.span(-1, 2, p)
    s_phi = SquareClassGroup.span(p)
    if p % 16 == 9:
        sha = SquareClassGroup.span(p)
        return Classification(
            family="2p",
            k=k,
            p=p,
            l=None,
            profile=None,
            selmer_psi=s_psi,
            selmer_phi=s_phi,
            sha_psi=sha,
            sha_phi=sha,
            w_phi=SquareClassGroup.trivial(),
            rank_bound=0,
            sha2_dim=2,
        )
    return Classification(
        family="2p",
        k=k,
        p=p,
        l=None,
        profile=None,
        selmer_psi=s_psi,
        selmer_phi=s_phi,
        sha_psi=SquareClassGroup.trivial(),
        sha_phi=SquareClassGroup.trivial(),
        w_phi=s_phi,
        rank_bound=2,
        sha2_dim=None,
        notes=(f"p = {p % 16} mod 16: no obstruction certificate",),
    )


def _gauss_unit_symbol(p: int, l: int) -> int:
    """[(1+i)pi/lambda] for p = l = 5 mod 8, with the conjugate of pi pinned.

    For p = 5 mod 8 both primes above p are primary, and the two choices
    give opposite symbols ([2ip/lambda] = -1 here), so the bare symbol
    carries no information.  A point on N^2 = 2p M^4 + 2p l^2 e^4 gives a
    factorization M^2 + i l e^2 = (1+i) pi alpha^2 over Z[i], and reducing
    the conjugate equation mod pi forces [1-i/pi] = -[pibar/pi], which
    pins the divisor.  Reducing mod lambda then makes [(1+i)pi/lambda]=+1
    necessary for solvability.  At the pinned pi the symbol does not
    depend on the choice of lambda ([2p/lambda] = +1), and it is
    symmetric in p and l.
    """
    pi = primary_associate(split_prime(p, GAUSS))
    if ring_symbol(QuadInt(GAUSS, 1, -1), pi) != -ring_symbol(pi.conj(), pi):
        pi = pi.conj()
    lam = primary_associate(split_prime(l, GAUSS))
    return ring_symbol(QuadInt(GAUSS, 1, 1) * pi, lam)


def classify_small_residues(p: int, l: int) -> Classification:
    """k = pl for the residue families (5,5), (3,3), (7,7) mod 8.

    Selmer groups come from the closed-form table; obstruction criteria:
      (5,5), (p/l) = +1: all of T(p), T(l), T(pl) on the phi side die
          when (p/l)_4 != (l/p)_4;
      (5,5), (p/l) = -1: T(2p), T(2l), T(pl) die when [(1+i)pi/lambda]=-1
          at the pinned prime pi above p (see _gauss_unit_symbol);
      (3,3): the phi Selmer group is trivial; rank 0 unconditionally;
      (7,7): with p, l ordered so (p/l) = +1: T(2) on phi and T(p), T(l)
          on psi die when [Lambda/Pi] = -1 in Z[sqrt2], Lambda primary of
          norm -l.
    """
    if not (is_prime(p) and is_prime(l)) or p == l or p % 2 == 0 or l % 2 == 0:
        raise FamilyMismatch(f"({p}, {l}) is not a pair of distinct odd primes")
    r = p % 8
    if l % 8 != r or r not in (3, 5, 7):
        raise FamilyMismatch(
            f"classify_small_residues covers p = l = 3, 5, 7 mod 8; "
            f"got ({p % 8}, {l % 8})"
        )
    k = p * l
    if r == 3:
        return Classification(
            family="pl-3mod8",
            k=k,
            p=p,
            l=l,
            profile=None,
            selmer_psi=SquareClassGroup.span(-1, k),
            selmer_phi=SquareClassGroup.trivial(),
            sha_psi=SquareClassGroup.trivial(),
            sha_phi=SquareClassGroup.trivial(),
            w_phi=SquareClassGroup.trivial(),
            rank_bound=0,
            sha2_dim=0,
        )
    if r == 5:
        s_psi = SquareClassGroup.span(-1, k)
        if jacobi(p, l) == 1:
            s_phi = SquareClassGroup.span(p, l)
            obstructed = quartic_symbol(p, l) != quartic_symbol(l, p)
            note = "criterion: (p/l)4 = (l/p)4 fails" if obstructed else \
                "criterion: (p/l)4 = (l/p)4 holds; no certificate"
        else:
            s_phi = SquareClassGroup.span(2 * p, 2 * l)
            sym = _gauss_unit_symbol(p, l)
            obstructed = sym == -1
            note = f"criterion: [(1+i)pi/lambda] = {sym:+d} at the pinned pi"
        if obstructed:
            sha_phi = s_phi
            w_phi = SquareClassGroup.trivial()
            rank_bound = 0
        else:
            sha_phi = SquareClassGroup.trivial()
            w_phi = s_phi
            rank_bound = 2
        return Classification(
            family="pl-5mod8",
            k=k,
            p=p,
            l=l,
            profile=None,
            selmer_psi=s_psi,
            selmer_phi=s_phi,
            sha_psi=SquareClassGroup.trivial(),
            sha_phi=sha_phi,
            w_phi=w_phi,
            rank_bound=rank_bound,
            sha2_dim=sha_phi.dim if rank_bound == 0 else None,
            notes=(note,),
        )
    # r == 7: order so that (p/l) = +1 (always possible: the two Legendre
    # symbols are opposite for p = l = 3 mod 4)
    if jacobi(p, l) != 1:
        p, l = l, p
    s_psi = SquareClassGroup.span(-1, p, l)
    s_phi = SquareClassGroup.span(2)
    lam = primary_associate_mod4(split_prime(l, SQRT2))
    cap_pi = primary_associate(split_prime(p, SQRT2))
    sym = ring_symbol(lam, cap_pi)
    if sym == -1:
        sha_psi = SquareClassGroup.span(p)
        sha_phi = SquareClassGroup.span(2)
        w_phi = SquareClassGroup.trivial()
        rank_bound = 0
    else:
        sha_psi = SquareClassGroup.trivial()
        sha_phi = SquareClassGroup.trivial()
        w_phi = s_phi
        rank_bound = 2
    return Classification(
        family="pl-7mod8",
        k=p * l,
        p=p,
        l=l,
        profile=None,
        selmer_psi=s_psi,
        selmer_phi=s_phi,
        sha_psi=sha_psi,
        sha_phi=sha_phi,
        w_phi=w_phi,
        rank_bound=rank_bound,
        sha2_dim=(sha_psi.dim + sha_phi.dim) if rank_bound == 0 else None,
        notes=(f"criterion: [Lambda/Pi] = {sym:+d}, Lambda of norm -{l}",),
    )


def classify_auto(k: int) -> Classification | None:
    """Dispatch k to whichever family classifier applies, else None."""
    f = factor(k)
    if f.sign < 0 or f.value != f.radical:
        return None  # not squarefree positive: no criteria apply
    ps = [q for q, _ in f.factors]
    if len(ps) == 2 and ps[0] == 2 and ps[1] % 8 == 1:
        return classify_2p(ps[1])
    if len(ps) == 2 and ps[0] % 2 == 1:
        p, l = ps
        if p % 8 == l % 8 == 1:
            if jacobi(p, l) == 1:
                return classify_11_plus(p, l)
            return classify_11_minus(p, l)
        if p % 8 == l % 8 and p % 8 in (3, 5, 7):
            return classify_small_residues(p, l)
    return None


# --- general-k necessary conditions (phi side) --------------------------------


def phi_divisor_conditions(k: int, a_div: int) -> dict[str, bool]:
    """Necessary conditions for a rational point on the phi-side torsor of
    class A = a_div, for squarefree k whose prime factors are all = 1 mod 8
    and pairwise quadratic residues.

    With B = k/A and alpha any primary Gaussian integer of norm A, a point
    forces all four of:
      A_octic_trivial:            (-4/A)_8 = +1
      alpha_trivial_over_B:       [alpha/pi] = +1 for every pi | B
      A_octic_matches_B_quartic:  (-4/p)_8 = (B/p)_4 for every p | A
      cofactor_symbols_trivial:   [alpha/pi . pi^-1 /pi] = +1 for pi | alpha
    Evaluated over every primary alpha of norm A (all conjugation patterns
    of its prime factors), combined with logical and.
    """
    f = factor(k)
    ps = [q for q, _ in f.factors]
    if f.sign < 0 or f.value != f.radical or any(q % 8 != 1 for q in ps):
        raise FamilyMismatch(
            "need squarefree positive k with all prime factors = 1 mod 8"
        )
    for i, q in enumerate(ps):
        for r in ps[i + 1:]:
            if jacobi(q, r) != 1:
                raise FamilyMismatch(
                    f"prime factors {q}, {r} of k are not mutual residues"
                )
    if a_div <= 0 or k % a_div != 0:
        raise FamilyMismatch(f"A = {a_div} is not a positive divisor of k = {k}")
    b_div = k // a_div
    a_primes = [q for q in ps if a_div % q == 0]
    b_primes = [q for q in ps if b_div % q == 0]

    base = [primary_associate(split_prime(q, GAUSS)) for q in a_primes]
    one = QuadInt(GAUSS, 1, 0)
    alphas: list[tuple[QuadInt, list[QuadInt]]] = []
    for mask in range(1 << len(base)):
        parts = [g.conj() if (mask >> i) & 1 else g for i, g in enumerate(base)]
        al = one
        for part in parts:
            al = al * part
        alphas.append((al, parts))

    cond1 = octic_minus4_product(a_div) == 1
    cond2 = all(
        ring_symbol(al, primary_associate(split_prime(q, GAUSS))) == 1
        for q in b_primes
        for al, _ in alphas
    )
    cond3 = all(
        octic_minus4(q) == quartic_symbol_product(b_div, q) for q in a_primes
    )
    cond4 = True
    for _, parts in alphas:
        for i, piq in enumerate(parts):
            cof = one
            for j, other in enumerate(parts):
                if j != i:
                    cof = cof * other
            if ring_symbol(cof, piq) != 1:
                cond4 = False
    return {
        "A_octic_trivial": cond1,
        "alpha_trivial_over_B": cond2,
        "A_octic_matches_B_quartic": cond3,
        "cofactor_symbols_trivial": cond4,
    }


# --- witness decomposition and coherence checks --------------------------------


class PairRelations(tuple):
    """Result triple of square_pair_relations."""

    __slots__ = ()

    def __new__(cls, congruence, rel_quartic, rel_octic):
        return super().__new__(cls, (congruence, rel_quartic, rel_octic))

    congruence = property(lambda s: s[0])
    rel_quartic = property(lambda s: s[1])
    rel_octic = property(lambda s: s[2])


def _mutual_residue_products(*ns: int) -> bool:
    """Each n a product of primes = 1 mod 4, all primes mutual residues."""
    primes: list[int] = []
    for n in ns:
        f = factor(n)
        if f.sign < 0 or f.value != f.radical:
            return False
        for q, _ in f.factors:
            if q % 4 != 1:
                return False
            primes.append(q)
    for i, q in enumerate(primes):
        for r in primes[i + 1:]:
            if q != r and jacobi(q, r) != 1:
                return False
    return True


def square_pair_relations(
    a_c: int, b_c: int, c_c: int, d_c: int, x: int, y: int, v: int, w: int
) -> PairRelations:
    """Consequences of the simultaneous representations

        A x^2 + B y^2 = C v^2,   A x^2 - B y^2 = D w^2

    for pairwise coprime A, B, C, D built from primes = 1 mod 4 that are
    residues of each other: C = D mod 8, a quartic-symbol product relation,
    and an octic relation involving (2/CD)_4. Quartic symbols of composite
    modulus mean the product over its prime factors.
    """
    if min(x, y, v, w) < 1 or min(a_c, b_c, c_c, d_c) < 1:
        raise HypothesisViolated("all coefficients and variables must be positive")
    if a_c * x * x + b_c * y * y != c_c * v * v:
        raise HypothesisViolated("A x^2 + B y^2 = C v^2 fails")
    if a_c * x * x - b_c * y * y != d_c * w * w:
        raise HypothesisViolated("A x^2 - B y^2 = D w^2 fails")
    pairs = [(a_c, b_c), (a_c, c_c), (a_c, d_c), (b_c, c_c), (b_c, d_c), (c_c, d_c)]
    if any(gcd(u, t) != 1 for u, t in pairs):
        raise HypothesisViolated("A, B, C, D must be pairwise coprime")
    if not _mutual_residue_products(a_c, b_c, c_c, d_c):
        raise HypothesisViolated(
            "A, B, C, D must be products of primes = 1 mod 4, mutual residues"
        )
    congruence = (c_c - d_c) % 8 == 0
    if not congruence:
        raise InconsistentCriteria(
            "C = D mod 8 fails on a valid representation pair; this is a bug"
        )
    rel4 = (
        quartic_symbol_product(a_c * b_c, c_c)
        * quartic_symbol_product(a_c * d_c, b_c)
        * quartic_symbol_product(b_c * d_c, a_c)
        == 1
    )
    exp = ((c_c - d_c) // 8) % 2
    rel5 = (
        (-1) ** exp
        * quartic_symbol_product(2, c_c * d_c)
        * quartic_symbol_product(b_c * c_c, d_c)
        * quartic_symbol_product(b_c * d_c, c_c)
        * quartic_symbol_product(c_c * d_c, a_c)
        == 1
    )
    return PairRelations(congruence, rel4, rel5)


def witness_fixed_sign(
    p_pr: int, l_pr: int, x: int, y: int, z: int, w: int, eps: int
) -> int:
    """Predicted [P/L] from a solution of x^2 - 2y^2 = -P z^2 together with
    x^2 - y^2 = eps L w^2: always +1."""
    _check_symbol_pair(p_pr, l_pr)
    if eps not in (1, -1):
        raise HypothesisViolated(f"eps must be +-1, got {eps}")
    if min(x, y, z, w) < 1:
        raise HypothesisViolated("witness entries must be positive")
    if x * x - 2 * y * y != -p_pr * z * z:
        raise HypothesisViolated("x^2 - 2y^2 = -P z^2 fails")
    if x * x - y * y != eps * l_pr * w * w:
        raise HypothesisViolated("x^2 - y^2 = eps L w^2 fails")
    return 1


def witness_octic_sign(
    p_pr: int, l_pr: int, x: int, y: int, z: int, w: int, eps: int
) -> int:
    """Predicted [P/L] from a solution of x^2 + 2 eps y^2 = P z^2 together
    with x^2 + eps y^2 = L w^2: (-4/L)_8 when eps = -1, and
    (P/L)_4 (L/P)_4 (-4/L)_8 when eps = +1."""
    _check_symbol_pair(p_pr, l_pr)
    if eps not in (1, -1):
        raise HypothesisViolated(f"eps must be +-1, got {eps}")
    if min(x, y, z, w) < 1:
        raise HypothesisViolated("witness entries must be positive")
    if x * x + 2 * eps * y * y != p_pr * z * z:
        raise HypothesisViolated("x^2 + 2 eps y^2 = P z^2 fails")
    if x * x + eps * y * y != l_pr * w * w:
        raise HypothesisViolated("x^2 + eps y^2 = L w^2 fails")
    if eps == -1:
        return octic_minus4(l_pr)
    return (
        quartic_symbol(p_pr, l_pr)
        * quartic_symbol(l_pr, p_pr)
        * octic_minus4(l_pr)
    )


def _check_symbol_pair(p_pr: int, l_pr: int) -> None:
    if (
        p_pr % 8 != 1
        or l_pr % 8 != 1
        or p_pr == l_pr
        or not (is_prime(p_pr) and is_prime(l_pr))
        or jacobi(p_pr, l_pr) != 1
    ):
        raise HypothesisViolated(
            f"need distinct primes P, L = 1 mod 8 with (P/L) = +1; "
            f"got ({p_pr}, {l_pr})"
        )


# per-case data for decomposing a point on the psi torsor T(p), k = pl:
# divisors (dp, dq) so that u/(dp) and v/(dq) are the two squares, the
# square-pair quadruple (A, B, C, D), which witness checker applies, its
# argument order, and its eps.
_CASE_TABLE = {
    # case: (u_div, v_div, ABCD, checker, checker_vars, eps)
    "1Aa": ((1, "p"), (1, 1), ("1", "l", "p", "1"), "fixed", "bMae", -1),
    "1Ab": ((1, 1), (1, "p"), ("1", "l", "1", "p"), "fixed", "aMbe", 1),
    "1Ba": ((1, "p"), (1, 1), ("l", "1", "p", "1"), "octic", "beam", 1),
    "1Bb": ((1, 1), (1, "p"), ("l", "1", "1", "p"), "octic", "aebm", -1),
    "2Aa": ((2, "p"), (2, 1), ("p", "1", "1", "l"), "octic", "Mbea", -1),
    "2Ab": ((2, 1), (2, "p"), ("1", "p", "1", "l"), "fixed", "Maeb", 1),
    "2Ba": ((2, "p"), (2, 1), ("p", "1", "l", "1"), "octic", "ebma", 1),
    "2Bb": ((2, 1), (2, "p"), ("1", "p", "l", "1"), "fixed", "eamb", -1),
}


@dataclass(frozen=True)
class CaseDecomposition:
    """A psi-torsor point split into its two-squares representation."""

    case: str
    p: int
    l: int
    m_val: int  # M, or m = M/l in the B cases
    e_val: int
    a_val: int
    b_val: int
    quadruple: tuple[int, int, int, int]  # square-pair (A, B, C, D)
    variables: tuple[int, int, int, int]  # square-pair (x, y, v, w)
    lemma: str  # "fixed" or "octic", selecting the witness checker
    lemma_args: tuple[int, int, int, int]  # (x, y, z, w) for the checker
    lemma_pl: tuple[int, int]  # (P, L) for the checker
    eps: int


def decompose_psi_point(p: int, l: int, point) -> CaseDecomposition:
    """Split a primitive point (N, M, e) on N^2 = p M^4 - p l^2 e^4 into its
    case: 1 or 2 by the parity of e, A or B by l | M, a or b by which of the
    two square factors p divides."""
    if hasattr(point, "N"):
        n_val, m_raw, e_val = int(point.N), int(point.M), int(point.e)
    else:
        n_val, m_raw, e_val = (int(t) for t in point)
    n_val, m_raw = abs(n_val), abs(m_raw)
    if min(n_val, m_raw, e_val) < 1:
        raise HypothesisViolated("need a nontrivial point with N, M, e nonzero")
    if gcd(m_raw, e_val) != 1:
        raise HypothesisViolated("point must be primitive: gcd(M, e) = 1")
    if n_val * n_val != p * m_raw**4 - p * l * l * e_val**4:
        raise HypothesisViolated("point does not lie on the psi torsor of p")
    digit = "1" if e_val % 2 == 0 else "2"
    if m_raw % l == 0:
        letter = "B"
        m_val = m_raw // l
        u = l * m_val * m_val + e_val * e_val
        v = l * m_val * m_val - e_val * e_val
    else:
        letter = "A"
        m_val = m_raw
        u = m_val * m_val + l * e_val * e_val
        v = m_val * m_val - l * e_val * e_val
    if v <= 0:
        raise InconsistentCriteria("difference of squares side is nonpositive")
    sub = "a" if u % p == 0 else "b"
    case = digit + letter + sub
    (u2, up), (v2, vp) = _CASE_TABLE[case][0], _CASE_TABLE[case][1]
    du = u2 * (p if up == "p" else 1)
    dv = v2 * (p if vp == "p" else 1)
    if u % du or v % dv:
        raise InconsistentCriteria(f"case {case}: expected divisors fail")
    a_sq, b_sq = u // du, v // dv
    a_val, b_val = isqrt(a_sq), isqrt(b_sq)
    if a_val * a_val != a_sq or b_val * b_val != b_sq:
        raise InconsistentCriteria(f"case {case}: factors are not squares")
    _, _, abcd_sym, lemma, lemma_vars, eps = _CASE_TABLE[case]
    concrete = {"1": 1, "p": p, "l": l}
    quadruple = tuple(concrete[s] for s in abcd_sym)
    if digit == "1":
        variables = (m_val, e_val, a_val, b_val)
    else:
        variables = (a_val, b_val, m_val, e_val)
    env = {"M": m_val, "m": m_val, "e": e_val, "a": a_val, "b": b_val}
    lemma_args = tuple(env[c] for c in lemma_vars)
    lemma_pl = (p, l) if case in ("1Aa", "1Ab", "1Ba", "1Bb") else (l, p)
    return CaseDecomposition(
        case=case,
        p=p,
        l=l,
        m_val=m_val,
        e_val=e_val,
        a_val=a_val,
        b_val=b_val,
        quadruple=quadruple,
        variables=variables,
        lemma=lemma,
        lemma_args=lemma_args,
        lemma_pl=lemma_pl,
        eps=eps,
    )


# net value of [P/L] implied by each case, as a function of the profile
_CASE_NET_SYMBOL = {
    "1Aa": lambda pr: 1,
    "1Ab": lambda pr: 1,
    "1Ba": lambda pr: pr.c * pr.d,
    "1Bb": lambda pr: pr.d,
    "2Aa": lambda pr: pr.c,
    "2Ab": lambda pr: 1,
    "2Ba": lambda pr: pr.c * pr.d,
    "2Bb": lambda pr: 1,
}


@dataclass(frozen=True)
class WitnessReport:
    """Every coherence check a single psi-torsor point gives rise to."""

    decomposition: CaseDecomposition
    relations: PairRelations
    predicted_symbol: int
    table_symbol: int
    actual_symbol: int
    case_conditions_hold: bool

    @property
    def ok(self) -> bool:
        return (
            all(self.relations)
            and self.predicted_symbol == self.actual_symbol
            and self.table_symbol == self.actual_symbol
            and self.case_conditions_hold
        )


def check_witness(p: int, l: int, point) -> WitnessReport:
    """Run every residue-symbol consequence of a found psi-torsor point:
    the two-squares relations, the lemma prediction for [P/L] against the
    directly computed symbol, and the case's profile conditions."""
    dec = decompose_psi_point(p, l, point)
    relations = square_pair_relations(*dec.quadruple, *dec.variables)
    fn = witness_fixed_sign if dec.lemma == "fixed" else witness_octic_sign
    predicted = fn(*dec.lemma_pl, *dec.lemma_args, dec.eps)
    profile = residue_profile(p, l)
    actual = profile.pi
    return WitnessReport(
        decomposition=dec,
        relations=relations,
        predicted_symbol=predicted,
        table_symbol=_CASE_NET_SYMBOL[dec.case](profile),
        actual_symbol=actual,
        case_conditions_hold=psi_case_holds(dec.case, profile),
    )
