"""Invariants of quadratic fields Q(sqrt(m)).

Fundamental units and their norms via continued fractions, class groups of
imaginary fields via composition of binary quadratic forms, narrow and wide
class numbers of real fields via cycles of reduced indefinite forms, and
2-part extraction from invariant factor lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, isqrt


class InvalidRadicandError(ValueError):
    pass


class InvalidDiscriminantError(ValueError):
    pass


class SquareClassError(ArithmeticError):
    """No sign choice yields the guaranteed perfect squares (computation bug)."""


def is_squarefree(m: int) -> bool:
    m = abs(m)
    if m == 0:
        return False
    if m % 4 == 0:
        return False
    p = 3
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        if m % p == 0:
            m //= p
        p += 2
    return True


def discriminant_of(m: int) -> int:
    """Fundamental discriminant of Q(sqrt(m)) for squarefree m."""
    if m in (0, 1) or not is_squarefree(m):
        raise InvalidRadicandError(f"radicand {m} must be squarefree and != 0, 1")
    return m if m % 4 == 1 else 4 * m


def two_part(factors) -> tuple[int, ...]:
    """2-adic valuations of the invariant factors, zero valuations dropped.

    Returns the nondecreasing exponent tuple, i.e. the abelian type of the
    2-primary part: (66,2,2) -> (1,1,1) and (88,8) -> (3,3).
    """
    exps = []
    for f in factors:
        v = 0
        while f % 2 == 0:
            f //= 2
            v += 1
        if v:
            exps.append(v)
    return tuple(sorted(exps))


def two_valuation(n: int) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


# ---------------------------------------------------------------------------
# fundamental units


@dataclass(frozen=True)
class FundamentalUnit:
    """Fundamental unit (x_num + y_num*sqrt(m)) / denom of the maximal order."""

    x_num: int
    y_num: int
    denom: int
    m: int
    norm: int

    def check(self) -> bool:
        return (
            self.x_num**2 - self.m * self.y_num**2
            == self.norm * self.denom**2
        )


def _pell_minimal(m: int) -> tuple[int, int, int]:
    """Minimal (x, y, norm) with x^2 - m y^2 = ±1, via the CF of sqrt(m)."""
    a0 = isqrt(m)
    p_prev, p_cur = 1, a0
    q_prev, q_cur = 0, 1
    pp, qq, a = 0, 1, a0
    while True:
        pp = a * qq - pp
        qq = (m - pp * pp) // qq
        a = (a0 + pp) // qq
        if qq == 1:
            # period closes after this partial quotient
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            x, y = p_prev, q_prev
            return x, y, x * x - m * y * y
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev


def _icbrt(n: int) -> int:
    """Floor integer cube root of n >= 0."""
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def fundamental_unit(m: int) -> FundamentalUnit:
    """Fundamental unit of the maximal order of Q(sqrt(m)), m > 1 squarefree.

    For m ≡ 1 (mod 4) the unit may be half-integral; it is recovered exactly
    from the integral Pell solution by testing for a cube root in the
    maximal order (the unit index [O* : Z[sqrt(m)]*] is 1 or 3).
    """
    if m <= 1 or not is_squarefree(m):
        raise InvalidRadicandError(f"radicand {m} must be squarefree and > 1")
    x0, y0, s = _pell_minimal(m)
    if m % 4 == 1:
        # look for eps = (u + v sqrt(m))/2 with eps^3 = x0 + y0 sqrt(m);
        # the rational part forces u^3 - 3su = 2 x0.
        t = _icbrt(2 * x0)
        for u in (t - 1, t, t + 1, t + 2):
            if u <= 0 or u % 2 == 0 or u * (u * u - 3 * s) != 2 * x0:
                continue
            den = u * u - s
            if den and 2 * y0 % den == 0:
                v = 2 * y0 // den
                if v % 2 == 1 and u * u - m * v * v == 4 * s:
                    return FundamentalUnit(u, v, 2, m, s)
    return FundamentalUnit(x0, y0, 1, m, s)


# ---------------------------------------------------------------------------
# binary quadratic forms


@dataclass(frozen=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


def principal_form(D: int) -> BinaryQuadraticForm:
    k = D & 1
    return BinaryQuadraticForm(1, k, (k * k - D) // 4)


def reduce_definite(f: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """Unique reduced representative of a positive definite form class."""
    a, b, c = f.a, f.b, f.c
    while True:
        if -a < b <= a <= c:
            break
        if a > c:
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c = a * r * r + b * r + c
        b = b2
    if a == c and b < 0:
        b = -b
    return BinaryQuadraticForm(a, b, c)


def _solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    # solutions of a x ≡ b (mod m) as x = u + v k
    g = gcd(a, m)
    if b % g:
        raise ArithmeticError("no solution to linear congruence")
    d = pow(a // g, -1, m // g) if m // g > 1 else 0
    return (b // g * d) % max(m // g, 1), m // g


def compose(f1: BinaryQuadraticForm, f2: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """Dirichlet composition of primitive forms of one discriminant, reduced."""
    a1, b1, c1 = f1.a, f1.b, f1.c
    a2, b2, c2 = f2.a, f2.b, f2.c
    g = (b1 + b2) // 2
    h = (b2 - b1) // 2
    w = gcd(gcd(a1, a2), g)
    s, t, u = a1 // w, a2 // w, g // w
    mu, nu = _solve_linmod(t * u, h * u + s * c1, s * t)
    if s > 1:
        lam, _ = _solve_linmod(t * nu, h - t * mu, s)
    else:
        lam = 0
    k = mu + nu * lam
    ell = (k * t - h) // s
    mm = (t * u * k - h * u - c1 * s) // (s * t)
    A = s * t
    B = w * u - (k * t + ell * s)
    C = k * ell - w * mm
    return reduce_definite(BinaryQuadraticForm(A, B, C))


def form_power(f: BinaryQuadraticForm, e: int) -> BinaryQuadraticForm:
    r = reduce_definite(principal_form(f.disc))
    base = f
    while e:
        if e & 1:
            r = compose(r, base)
        base = compose(base, base)
        e >>= 1
    return r


def _check_fundamental(D: int) -> None:
    if D % 4 == 1:
        ok = is_squarefree(D)
    elif D % 4 == 0:
        q = D // 4
        ok = q % 4 in (2, 3) and is_squarefree(q)
    else:
        ok = False
    if not ok:
        raise InvalidDiscriminantError(f"{D} is not a fundamental discriminant")


def reduced_forms_imaginary(D: int) -> list[BinaryQuadraticForm]:
    """All reduced primitive positive definite forms of discriminant D < 0."""
    forms = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(BinaryQuadraticForm(a, b, c))
    return forms


def _exponent_partition(elems, identity, p: int) -> list[int]:
    """Cyclic-factor exponents of the p-part of a finite abelian group.

    Counts how many elements are killed by each p-power; the jumps give the
    number of factors of each exponent.
    """
    layer_sizes = []  # lambda_k = #factors with exponent >= k
    prev_count = 1
    powers = list(elems)
    while True:
        powers = [form_power(g, p) for g in powers]
        count = sum(1 for g in powers if g == identity)
        if count == prev_count:
            break
        lam = round(math.log(count / prev_count, p))
        layer_sizes.append(lam)
        prev_count = count
        if all(g == identity for g in powers):
            break
    exps = []
    for k, lam in enumerate(layer_sizes, start=1):
        nxt = layer_sizes[k] if k < len(layer_sizes) else 0
        exps.extend([k] * (lam - nxt))
    return sorted(exps, reverse=True)


def class_group_imaginary(D: int, with_structure: bool = True):
    """Class number and group structure of the form class group, D < 0.

    Returns (h, invariant_factors_descending, two_part_type).  Structure is
    derived from order statistics under composition; pass
    with_structure=False to skip it when only h is needed.
    """
    if D >= 0:
        raise InvalidDiscriminantError("discriminant must be negative")
    _check_fundamental(D)
    forms = reduced_forms_imaginary(D)
    h = len(forms)
    if not with_structure:
        return h, None, None
    identity = reduce_definite(principal_form(D))
    # primary decomposition per prime dividing h
    primary: dict[int, list[int]] = {}
    hh = h
    for p in range(2, h + 1):
        if p * p > hh:
            break
        if hh % p == 0:
            while hh % p == 0:
                hh //= p
            primary[p] = _exponent_partition(forms, identity, p)
    if hh > 1:
        primary[hh] = _exponent_partition(forms, identity, hh)
    # merge prime-power lists (each descending) into invariant factors
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, exps in primary.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    assert math.prod(factors) == h
    cl2 = tuple(sorted(e for e in primary.get(2, []) if e))
    return h, factors, cl2


# ---------------------------------------------------------------------------
# real quadratic fields: narrow and wide class numbers


def _reduced_indefinite_forms(D: int) -> list[BinaryQuadraticForm]:
    forms = []
    for b in range(1, isqrt(D) + 1):
        if (b - D) % 2:
            continue
        n = (D - b * b) // 4
        for u in range(1, isqrt(n) + 1):
            if n % u:
                continue
            for aa in {u, n // u}:
                for a, c in ((aa, -(n // aa)), (-aa, n // aa)):
                    if (abs(a) + abs(c)) ** 2 >= D:
                        continue
                    if gcd(gcd(a, b), c) != 1:
                        continue
                    forms.append(BinaryQuadraticForm(a, b, c))
    return sorted(forms, key=lambda f: (f.a, f.b, f.c))


def _rho_indefinite(f: BinaryQuadraticForm, D: int, s0: int) -> BinaryQuadraticForm:
    """Reduction-step neighbor of a reduced indefinite form (cycle successor)."""
    c2 = abs(f.c)
    r = -f.b + 2 * c2 * ((s0 + f.b) // (2 * c2))
    return BinaryQuadraticForm(f.c, r, (r * r - D) // (4 * f.c))


def narrow_class_number_real(D: int) -> int:
    """Number of cycles of reduced indefinite forms = narrow class number h+."""
    if D <= 0:
        raise InvalidDiscriminantError("discriminant must be positive")
    if isqrt(D) ** 2 == D:
        raise InvalidDiscriminantError("discriminant must not be a square")
    _check_fundamental(D)
    s0 = isqrt(D)
    pending = set(_reduced_indefinite_forms(D))
    cycles = 0
    while pending:
        start = next(iter(pending))
        cycles += 1
        f = start
        while True:
            pending.discard(f)
            f = _rho_indefinite(f, D, s0)
            if f == start:
                break
    return cycles


def class_number_real(m: int) -> tuple[int, int]:
    """(h, h2) of Q(sqrt(m)); h+ halves when the fundamental unit has norm +1."""
    D = discriminant_of(m)
    hplus = narrow_class_number_real(D)
    unit = fundamental_unit(m)
    h = hplus if unit.norm == -1 else hplus // 2
    return h, 2 ** two_valuation(h)


# ---------------------------------------------------------------------------
# unit square classes


@dataclass(frozen=True)
class SquareClassWitness:
    sign: int
    root1: int
    root2: int


def _is_square(n: int) -> tuple[bool, int]:
    if n < 0:
        return False, 0
    r = isqrt(n)
    return r * r == n, r


def unit_square_class(unit: FundamentalUnit, p1: int, p2: int) -> SquareClassWitness:
    """Perfect-square witness attached to a fundamental unit of norm +1.

    For the unit a + b*sqrt(p1*p2): one sign makes 2*p1*(a+s) and 2*p2*(a-s)
    both perfect squares.  For the unit x + y*sqrt(p1*p2*q): one sign makes
    p1*p2*(x+s) and q*(x-s) both perfect squares.  Returns the sign and the
    integer roots; failure indicates a computation bug, not bad input.
    """
    if unit.norm != 1:
        raise ValueError("square-class witness requires a unit of norm +1")
    if unit.denom != 1:
        raise ValueError("square-class witness requires an integral unit")
    a = unit.x_num
    if unit.m == p1 * p2:
        for s in (1, -1):
            ok1, r1 = _is_square(2 * p1 * (a + s))
            ok2, r2 = _is_square(2 * p2 * (a - s))
            if ok1 and ok2:
                return SquareClassWitness(s, r1, r2)
    elif unit.m % (p1 * p2) == 0:
        q = unit.m // (p1 * p2)
        for s in (1, -1):
            ok1, r1 = _is_square(p1 * p2 * (a + s))
            ok2, r2 = _is_square(q * (a - s))
            if ok1 and ok2:
                return SquareClassWitness(s, r1, r2)
    else:
        raise ValueError(f"unit radicand {unit.m} does not involve {p1}*{p2}")
    raise SquareClassError(f"no sign works for radicand {unit.m}")
