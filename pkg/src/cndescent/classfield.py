"""Classical invariants of real quadratic orders: continued-fraction
fundamental units, Pell representability, and strict class groups of binary
quadratic forms with Gauss composition.

Nothing in here touches residue symbols. That is the point: these are
independent oracles, and the correspondences the descent criteria rely on
(unit norms and class numbers from quartic symbols, strict principality of
the prime above 2, fourth-power class membership) are verified against them
in the test suite rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from sympy import divisors
from sympy.ntheory.residue_ntheory import sqrt_mod

from .arith import half_symbols, is_prime, jacobi, octic_minus4
from .errors import (
    BadResidueClass,
    BudgetExceeded,
    InconsistentCriteria,
    NoRepresentation,
    PreconditionUnmet,
)

# --- units and Pell equations ---------------------------------------------------


def fundamental_unit(d: int) -> tuple[int, int, int]:
    """Least unit > 1 of Z[sqrt(d)] as (u, v, norm), meaning u + v sqrt(d).

    Walks the continued fraction of sqrt(d); the convergent just before the
    period closes gives the minimal solution of u^2 - d v^2 = +-1, with the
    sign determined by the period length.
    """
    a0 = isqrt(d)
    if d < 2 or a0 * a0 == d:
        raise ValueError(f"need a nonsquare d >= 2, got {d}")
    p_, q_ = 0, 1
    a = a0
    h0, h1 = 1, a0
    k0, k1 = 0, 1
    while True:
        p_ = a * q_ - p_
        q_ = (d - p_ * p_) // q_
        a = (a0 + p_) // q_
        if q_ == 1 and a == 2 * a0:
            break
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
    return (h1, k1, h1 * h1 - d * k1 * k1)


def pell_solvable(d: int, c: int, scan: int = 20000) -> tuple[int, int] | None:
    """A solution (x, y) of x^2 - d y^2 = c with x, y >= 0, or None.

    For 0 < |c| < sqrt(d) any solution appears among the convergents of
    sqrt(d), so a miss over two full periods is a certified absence. For
    sqrt(d) <= |c| <= 2 sqrt(d) a bounded scan decides in practice but a
    miss is not a proof. Larger |c| raises BudgetExceeded.
    """
    a0 = isqrt(d)
    if d < 2 or a0 * a0 == d:
        raise ValueError(f"need a nonsquare d >= 2, got {d}")
    if c == 0:
        raise ValueError("c = 0 has only the trivial solution")
    if abs(c) > 2 * a0 + 2:
        raise BudgetExceeded(f"|c| = {abs(c)} beyond the supported range for d = {d}")
    if c > 0:
        r = isqrt(c)
        if r * r == c:
            return (r, 0)
    # convergent sweep over two periods
    p_, q_ = 0, 1
    a = a0
    h0, h1 = 1, a0
    k0, k1 = 0, 1
    periods = 0
    while periods < 2:
        if h1 * h1 - d * k1 * k1 == c:
            return (h1, k1)
        p_ = a * q_ - p_
        q_ = (d - p_ * p_) // q_
        a = (a0 + p_) // q_
        if q_ == 1 and a == 2 * a0:
            periods += 1
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
    if c * c < d:
        # |c| < sqrt(d): the convergent sweep was exhaustive
        return None
    for y in range(1, scan):
        t = c + d * y * y
        if t >= 0:
            x = isqrt(t)
            if x * x == t:
                return (x, y)
    return None


# --- binary quadratic forms of positive discriminant -----------------------------


def _is_reduced(form: tuple[int, int, int], d: int) -> bool:
    # sqrt(d) - 2|a| < b < sqrt(d), all comparisons exact via squaring
    a, b, _ = form
    if b <= 0 or b * b >= d:
        return False
    ta = 2 * abs(a)
    if (b + ta) ** 2 <= d:
        return False
    if ta > b and (ta - b) ** 2 >= d:
        return False
    return True


def _rho(form: tuple[int, int, int], d: int) -> tuple[int, int, int]:
    """Reduction/cycle step: (a, b, c) -> (c, b', c')."""
    _, b, c = form
    cc = abs(c)
    s = isqrt(d)
    hi = s if cc <= s else cc
    b2 = (-b) % (2 * cc)
    b2 += ((hi - b2) // (2 * cc)) * (2 * cc)
    c2 = (b2 * b2 - d) // (4 * c)
    return (c, b2, c2)


def _reduce_form(form: tuple[int, int, int], d: int) -> tuple[int, int, int]:
    seen = 0
    while not _is_reduced(form, d):
        form = _rho(form, d)
        seen += 1
        if seen > 10000:
            raise InconsistentCriteria(f"reduction of {form} failed to terminate")
    return form


def _reduced_forms(d: int) -> list[tuple[int, int, int]]:
    s = isqrt(d)
    out = []
    for b in range(1, s + 1):
        if (d - b * b) % 4:
            continue
        m = (d - b * b) // 4  # equals -a*c > 0
        for aa in divisors(m):
            if (b + 2 * aa) ** 2 <= d:
                continue
            if 2 * aa > b and (2 * aa - b) ** 2 >= d:
                continue
            cval = m // aa
            for a, c in ((aa, -cval), (-aa, cval)):
                if gcd(gcd(abs(a), b), abs(c)) == 1:
                    out.append((a, b, c))
    return out


def _transformed(form, x, r, y, s):
    a, b, c = form
    return (
        a * x * x + b * x * y + c * y * y,
        2 * a * x * r + b * (x * s + y * r) + 2 * c * y * s,
        a * r * r + b * r * s + c * s * s,
    )


def _coprime_lead(form: tuple[int, int, int], n: int) -> tuple[int, int, int]:
    """A form properly equivalent to `form` whose first coefficient is
    nonzero and coprime to n."""
    a, b, c = form
    for x in range(0, 60):
        for y in range(0, 60):
            if gcd(x, y) != 1:
                continue
            for xx, yy in ((x, y), (x, -y), (-x, y), (-x, -y)):
                val = a * xx * xx + b * xx * yy + c * yy * yy
                if val == 0 or gcd(val, n) != 1:
                    continue
                # complete (xx, yy) to a determinant +1 matrix; _ext_gcd
                # may return -gcd for negative inputs, so renormalize
                g_, u, v = _ext_gcd(xx, yy)
                if g_ < 0:
                    u, v = -u, -v
                return _transformed(form, xx, -v, yy, u)
    raise InconsistentCriteria(
        f"no small value of {form} is coprime to {n}"
    )


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _compose_forms(f1, f2, d):
    """Gauss composition via a concordant pair."""
    a1, b1, _ = f1
    a2, b2, _ = _coprime_lead(f2, a1)
    m = abs(a2)
    if m == 1:
        t = 0
    else:
        t = ((b2 - b1) // 2 * pow(a1 % m, -1, m)) % m
    b = b1 + 2 * a1 * t
    a = a1 * a2
    return (a, b, (b * b - d) // (4 * a))


class FormClassGroup:
    """Strict class group of primitive forms of one positive discriminant.

    Classes are cycles of reduced forms; composition works on cycle
    representatives and is memoized. The wide class number comes from the
    fundamental unit's norm (quotient by the totally-negative principal
    class when N(eps) = +1).
    """

    def __init__(self, disc: int, limit: int = 8 * 10**4):
        if disc <= 0 or disc % 4 != 0:
            raise ValueError(f"need a positive discriminant = 0 mod 4, got {disc}")
        s = isqrt(disc)
        if s * s == disc:
            raise ValueError(f"square discriminant {disc}")
        if disc > limit:
            raise BudgetExceeded(f"discriminant {disc} above budget {limit}")
        self.disc = disc
        _, _, self.norm_eps = fundamental_unit(disc // 4)
        forms = _reduced_forms(disc)
        index: dict[tuple[int, int, int], int] = {}
        cycles: list[tuple[tuple[int, int, int], ...]] = []
        for f in forms:
            if f in index:
                continue
            cyc = [f]
            g = _rho(f, disc)
            while g != f:
                cyc.append(g)
                g = _rho(g, disc)
            for h in cyc:
                index[h] = len(cycles)
            cycles.append(tuple(cyc))
        self.cycles = tuple(cycles)
        self._index = index
        self._mul: dict[tuple[int, int], int] = {}
        b0 = s if s % 2 == 0 else s - 1
        self.identity = self.class_of((1, b0, (b0 * b0 - disc) // 4))

    @property
    def h_plus(self) -> int:
        return len(self.cycles)

    @property
    def h(self) -> int:
        return self.h_plus if self.norm_eps == -1 else self.h_plus // 2

    def class_of(self, form: tuple[int, int, int]) -> int:
        a, b, c = form
        if b * b - 4 * a * c != self.disc:
            raise ValueError(f"{form} has discriminant {b*b-4*a*c}, not {self.disc}")
        if gcd(gcd(abs(a), abs(b)), abs(c)) != 1:
            raise ValueError(f"{form} is not primitive")
        return self._index[_reduce_form(form, self.disc)]

    def compose(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        if key not in self._mul:
            f = _compose_forms(self.cycles[key[0]][0], self.cycles[key[1]][0], self.disc)
            self._mul[key] = self.class_of(f)
        return self._mul[key]

    def power(self, i: int, n: int) -> int:
        out = self.identity
        for _ in range(n):
            out = self.compose(out, i)
        return out

    def squares(self) -> frozenset[int]:
        return frozenset(self.compose(i, i) for i in range(self.h_plus))

    def fourth_powers(self) -> frozenset[int]:
        return frozenset(self.power(i, 4) for i in range(self.h_plus))


def form_class_group(disc: int) -> FormClassGroup:
    return FormClassGroup(disc)


def represented_value(form: tuple[int, int, int], coprime_to: int) -> int:
    """Smallest positive value of the form at a primitive point, coprime to
    the given modulus. Used to read off genus characters of a class."""
    best = None
    for x in range(0, 40):
        for y in range(0, 40):
            if gcd(x, y) != 1:
                continue
            for xx in {x, -x}:
                for yy in {y, -y}:
                    a, b, c = form
                    val = a * xx * xx + b * xx * yy + c * yy * yy
                    if val > 0 and gcd(val, coprime_to) == 1:
                        if best is None or val < best:
                            best = val
    if best is None:
        raise InconsistentCriteria(f"{form} represents nothing coprime to {coprime_to}")
    return best


# --- Scholz-style predictions ----------------------------------------------------


@dataclass(frozen=True)
class ScholzPrediction:
    """What the quartic symbols of 2 and l force on (N(eps), h, h+) of the
    order of discriminant 8l."""

    case: str
    norm_eps: int | None  # None = unconstrained
    h_mod: tuple[int, int] | None  # (modulus, required residue)
    h_plus_mod: tuple[int, int] | None

    def admits(self, norm_eps: int, h: int, h_plus: int) -> bool:
        if self.norm_eps is not None and norm_eps != self.norm_eps:
            return False
        if self.h_mod is not None and h % self.h_mod[0] != self.h_mod[1]:
            return False
        if self.h_plus_mod is not None and h_plus % self.h_plus_mod[0] != self.h_plus_mod[1]:
            return False
        return True


def scholz_case(l: int) -> ScholzPrediction:
    """Case split for the order of discriminant 8l, l prime = 1 mod 4:
    the norm of the fundamental unit and the residues of h and h+ are
    pinned by ((2/l), (2/l)_4, (l/2)_4) alone, except in the doubly-split
    case where only divisibility survives."""
    if l % 4 != 1 or not is_prime(l):
        raise BadResidueClass(f"need a prime = 1 mod 4, got {l}")
    if l % 8 == 5:
        return ScholzPrediction("2-nonresidue", -1, (4, 2), (4, 2))
    q2, l2 = half_symbols(l)
    if q2 != l2:
        return ScholzPrediction("split-1", 1, (4, 2), (8, 4))
    if q2 == -1:
        return ScholzPrediction("split-2", -1, (8, 4), (8, 4))
    return ScholzPrediction("split-3", None, (4, 0), (8, 0))


# --- the two class-field predicates the descent criteria use ---------------------


def strict_two_principal(l: int) -> bool:
    """Is the prime above 2 in the order of discriminant 8l principal in
    the strict sense, i.e. is x^2 - 2l y^2 = +2 solvable?

    Only meaningful under (-4/l)_8 = -1 (which forces N(eps) = +1 and the
    prime above 2 principal in the wide sense); outside that range the
    answer is not governed by a single quartic symbol, so refuse.
    """
    if l % 8 != 1 or not is_prime(l):
        raise BadResidueClass(f"need a prime = 1 mod 8, got {l}")
    if octic_minus4(l) != -1:
        raise PreconditionUnmet(f"(-4/{l})_8 = +1: criterion out of range")
    return pell_solvable(2 * l, 2) is not None


def fourth_power_class_test(p: int, l: int) -> bool:
    """Is the strict class of a form of discriminant 8l representing p a
    fourth power in the strict class group?

    Requires p = l = 1 mod 8 and (p/l) = +1 (otherwise no form of this
    discriminant represents p).
    """
    if p % 8 != 1 or l % 8 != 1 or p == l or not (is_prime(p) and is_prime(l)):
        raise BadResidueClass(f"need distinct primes = 1 mod 8, got ({p}, {l})")
    if jacobi(p, l) != 1:
        raise NoRepresentation(
            f"(2l/{p}) = -1: no form of discriminant {8 * l} represents {p}"
        )
    grp = form_class_group(8 * l)
    r = int(sqrt_mod(8 * l % p, p))
    b = r if r % 2 == 0 else p - r
    form = (p, b, (b * b - 8 * l) // (4 * p))
    return grp.class_of(form) in grp.fourth_powers()


# --- convenience record -----------------------------------------------------------


@dataclass(frozen=True)
class QuadFieldData:
    """Everything this module can say about the order of discriminant 8l."""

    l: int
    d: int  # 2l
    discriminant: int  # 8l
    eps: tuple[int, int]
    norm_eps: int
    h: int
    h_plus: int
    two_strict_principal: bool


def quad_field_data(l: int) -> QuadFieldData:
    if l % 8 != 1 or not is_prime(l):
        raise BadResidueClass(f"need a prime = 1 mod 8, got {l}")
    u, v, norm = fundamental_unit(2 * l)
    grp = form_class_group(8 * l)
    if grp.norm_eps != norm:
        raise InconsistentCriteria(f"unit norm mismatch for l = {l}")
    return QuadFieldData(
        l=l,
        d=2 * l,
        discriminant=8 * l,
        eps=(u, v),
        norm_eps=norm,
        h=grp.h,
        h_plus=grp.h_plus,
        two_strict_principal=pell_solvable(2 * l, 2) is not None,
    )
