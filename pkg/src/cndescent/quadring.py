"""Arithmetic in Z[i], Z[sqrt(2)], Z[sqrt(-2)] and their residue symbols.

These three rings are norm-Euclidean PIDs, which is all the splitting code
relies on. The central export is `symbol_capital`, the quadratic residue
symbol [P/L] of one primary split prime modulo another; its conjugate
independence (for (p/l) = +1) and reciprocity are verified by the test
suite, not assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from sympy.ntheory.residue_ntheory import sqrt_mod

from .arith import is_prime
from .errors import (
    BadResidueClass,
    CompositeModulus,
    Inert,
    NoPrimaryAssociate,
    NotCoprime,
    SplitFailed,
    UndefinedSymbol,
)


@dataclass(frozen=True)
class Ring:
    name: str
    omega2: int  # omega^2: -1, 2, or -2

    def __repr__(self) -> str:
        return self.name


GAUSS = Ring("Z[i]", -1)
SQRT2 = Ring("Z[sqrt2]", 2)
SQRTM2 = Ring("Z[sqrt-2]", -2)

RINGS = (GAUSS, SQRT2, SQRTM2)


@dataclass(frozen=True)
class QuadInt:
    """a + b*omega in the given ring."""

    ring: Ring
    a: int
    b: int

    @property
    def norm(self) -> int:
        return self.a * self.a - self.ring.omega2 * self.b * self.b

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conj(self) -> "QuadInt":
        return QuadInt(self.ring, self.a, -self.b)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.ring, -self.a, -self.b)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        if self.ring != other.ring:
            raise ValueError("mixed rings")
        w2 = self.ring.omega2
        return QuadInt(
            self.ring,
            self.a * other.a + w2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        if self.ring != other.ring:
            raise ValueError("mixed rings")
        return QuadInt(self.ring, self.a - other.a, self.b - other.b)

    def is_primary(self) -> bool:
        """Primary congruence: = 1 mod (2+2i), mod 2*sqrt(2), mod 2*sqrt(-2)."""
        a, b = self.a, self.b
        if self.ring is GAUSS:
            return a % 2 == 1 and b % 2 == 0 and (a - 1 - b) % 4 == 0
        return a % 4 == 1 and b % 2 == 0

    def __str__(self) -> str:
        sym = {-1: "i", 2: "sqrt2", -2: "sqrt-2"}[self.ring.omega2]
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}{sym}"


EPS2 = QuadInt(SQRT2, 1, 1)  # fundamental unit of Z[sqrt2], norm -1
EPS2_INV = QuadInt(SQRT2, -1, 1)  # eps2^-1 = -1 + sqrt2


def _round_div(num: int, den: int) -> int:
    """Nearest-integer division, ties toward +infinity."""
    return (2 * num + den) // (2 * den)


def _euclid_gcd(x: QuadInt, y: QuadInt) -> QuadInt:
    """Euclidean gcd; valid because all three rings are norm-Euclidean."""
    while not y.is_zero:
        # quotient = round(x * conj(y) / N(y)) componentwise
        n = y.norm
        prod = x * y.conj()
        q = QuadInt(x.ring, _round_div(prod.a, n), _round_div(prod.b, n))
        x, y = y, x - q * y
    return x


def split_prime(p: int, ring: Ring) -> QuadInt:
    """An element of norm +p (Z[i], Z[sqrt-2]) or +-p (Z[sqrt2]).

    Raises Inert when p lies outside the split residue classes:
    p = 1 mod 4 for Z[i], p = +-1 mod 8 for Z[sqrt2], p = 1 or 3 mod 8
    for Z[sqrt-2].
    """
    if not is_prime(p):
        raise BadResidueClass(f"split_prime needs a prime, got {p}")
    ok = {
        GAUSS: p % 4 == 1,
        SQRT2: p % 8 in (1, 7),
        SQRTM2: p % 8 in (1, 3),
    }[ring]
    if not ok:
        raise Inert(f"{p} does not split in {ring}")
    r = sqrt_mod(ring.omega2 % p, p)
    if r is not None:
        g = _euclid_gcd(QuadInt(ring, p, 0), QuadInt(ring, int(r), -1))
        if abs(g.norm) == p:
            return g
    return _split_exhaustive(p, ring)


def _split_exhaustive(p: int, ring: Ring) -> QuadInt:
    # fallback for small p; the gcd route should never get here
    if p >= 10**6:
        raise SplitFailed(f"norm equation for {p} in {ring} not solved")
    top = 2 * isqrt(p) + 2
    for b in range(top):
        a2 = p + ring.omega2 * b * b
        if a2 >= 0:
            a = isqrt(a2)
            if a * a == a2:
                return QuadInt(ring, a, b)
        if ring is SQRT2:
            a2 = 2 * b * b - p
            if a2 >= 0:
                a = isqrt(a2)
                if a * a == a2:
                    return QuadInt(ring, a, b)
    raise SplitFailed(f"norm equation for {p} in {ring} not solved")


def _unit_candidates(ring: Ring, extended: bool = False):
    """Yields (|exponent|, unit) pairs; both signs of each power."""
    if ring is GAUSS:
        yield 0, QuadInt(ring, 1, 0)
        yield 1, QuadInt(ring, 0, 1)
        yield 1, QuadInt(ring, 0, -1)
        yield 2, QuadInt(ring, -1, 0)
        return
    if ring is SQRTM2:
        yield 0, QuadInt(ring, 1, 0)
        yield 0, QuadInt(ring, -1, 0)
        return
    # Z[sqrt2]: +-eps2^n, |n| <= 2 normally (covers every unit class
    # mod 2 sqrt 2), |n| <= 6 in the extended sweep
    bound = 6 if extended else 2
    powers = {0: QuadInt(SQRT2, 1, 0)}
    for n in range(1, bound + 1):
        powers[n] = powers[n - 1] * EPS2
        powers[-n] = powers[-(n - 1)] * EPS2_INV
    for n, u in powers.items():
        yield abs(n), u
        yield abs(n), -u


def primary_associate(alpha: QuadInt) -> QuadInt:
    """The primary element among unit multiples of alpha and conj(alpha).

    Ties are broken by smallest |unit exponent|, then positive rational
    part, then positive omega part, then alpha before its conjugate.
    The result is a fixed point of this map. Requires odd norm.
    """
    if alpha.norm % 2 == 0:
        raise NoPrimaryAssociate(f"{alpha} has even norm")
    for extended in (False, True):
        best: tuple | None = None
        for conj_flag, base in ((0, alpha), (1, alpha.conj())):
            for n, u in _unit_candidates(alpha.ring, extended):
                cand = u * base
                if cand.is_primary():
                    key = (n, cand.a <= 0, cand.b <= 0, conj_flag)
                    if best is None or key < best[0]:
                        best = (key, cand)
        if best is not None:
            return best[1]
    raise NoPrimaryAssociate(f"no primary associate of {alpha}")


def primary_associate_mod4(alpha: QuadInt) -> QuadInt:
    """Z[sqrt2] only: associate with b even and a+b = 1 mod 4.

    Stronger than the mod-2*sqrt(2) congruence: its primary units are the
    squares <eps2^2>, so residue symbols of these representatives are
    unambiguous even for moduli of negative norm. Conjugates are not tried;
    the ideal is preserved.
    """
    if alpha.ring is not SQRT2:
        raise BadResidueClass("mod-4 normalization is specific to Z[sqrt2]")
    if alpha.norm % 2 == 0:
        raise NoPrimaryAssociate(f"{alpha} has even norm")
    for extended in (False, True):
        for _n, u in _unit_candidates(SQRT2, extended):
            cand = u * alpha
            if cand.b % 2 == 0 and (cand.a + cand.b) % 4 == 1:
                return cand
    raise NoPrimaryAssociate(f"no mod-4 primary associate of {alpha}")


def ring_symbol(alpha: QuadInt, beta: QuadInt) -> int:
    """Quadratic residue symbol [alpha/beta], beta of odd prime norm.

    Computed through the residue-field embedding: beta = c + d*omega of
    norm +-q gives omega = -c/d mod q, then the Euler criterion in F_q.
    """
    if alpha.ring != beta.ring:
        raise ValueError("mixed rings")
    q = abs(beta.norm)
    if q % 2 == 0 or not is_prime(q):
        raise CompositeModulus(f"|N({beta})| = {q} is not an odd prime")
    c, d = beta.a % q, beta.b % q
    if d == 0:
        # would force q^2 | N(beta); unreachable for prime norm
        raise CompositeModulus(f"{beta} is not a degree-one prime")
    r = (-c * pow(d, -1, q)) % q
    t = (alpha.a + alpha.b * r) % q
    if t == 0:
        raise NotCoprime(f"{alpha} shares the prime {beta}")
    s = pow(t, (q - 1) // 2, q)
    return 1 if s == 1 else -1


def symbol_capital(p: int, l: int, ring: Ring) -> int:
    """[P/L]: the symbol of the primary prime over p modulo the one over l.

    Defined for distinct primes p, l = 1 mod 8 with (p/l) = +1; under that
    hypothesis the value does not depend on the conjugate choices.
    """
    from .arith import jacobi  # local import keeps module deps one-way

    if p % 8 != 1 or l % 8 != 1 or p == l:
        raise UndefinedSymbol(f"need distinct primes = 1 mod 8, got {p}, {l}")
    if jacobi(p, l) != 1:
        raise UndefinedSymbol(f"[P/L] needs (p/l) = +1, got -1 for ({p}, {l})")
    cap_p = primary_associate(split_prime(p, ring))
    cap_l = primary_associate(split_prime(l, ring))
    return ring_symbol(cap_p, cap_l)
