"""Exact Gaussian integer arithmetic and quadratic residue symbols in Z[i]."""

from __future__ import annotations

from dataclasses import dataclass

from .ntheory import sqrt_mod_prime


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self) -> str:
        return f"({self.re}{self.im:+d}i)"


ONE = GaussianInt(1, 0)
I_UNIT = GaussianInt(0, 1)
ONE_PLUS_I = GaussianInt(1, 1)


def _round_half_down(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0), ties rounded toward -infinity."""
    return -((d - 2 * n) // (2 * d))


def gi_divmod(a: GaussianInt, m: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division a = q*m + r with N(r) <= N(m)/2.

    The quotient coordinates are rounded to the nearest integer, ties toward
    -infinity, which makes the remainder unique.
    """
    if m.is_zero():
        raise ZeroDivisionError("division by zero in Z[i]")
    nm = m.norm()
    t = a * m.conj()
    q = GaussianInt(_round_half_down(t.re, nm), _round_half_down(t.im, nm))
    return q, a - q * m


def gi_mod(a: GaussianInt, m: GaussianInt) -> GaussianInt:
    """Canonical remainder of a modulo m."""
    return gi_divmod(a, m)[1]


def gi_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    while not b.is_zero():
        a, b = b, gi_mod(a, b)
    return a


def gi_divides(m: GaussianInt, a: GaussianInt) -> bool:
    return gi_mod(a, m).is_zero()


def split_prime(p: int) -> tuple[GaussianInt, GaussianInt]:
    """Split a rational prime p ≡ 1 (mod 4) in Z[i].

    Returns the conjugate pair (e + 2fi, e - 2fi) normalized so that e and f
    are positive and e is odd; then e^2 + 4f^2 = p.
    """
    if p % 4 != 1:
        raise ValueError(f"p = {p} does not split in Z[i]")
    r = sqrt_mod_prime(p - 1, p)
    g = gi_gcd(GaussianInt(p, 0), GaussianInt(r, 1))
    a, b = abs(g.re), abs(g.im)
    if a % 2 == 0:
        a, b = b, a
    pi = GaussianInt(a, b)
    assert pi.norm() == p and b % 2 == 0
    return pi, pi.conj()


def gi_quadratic_symbol(alpha: GaussianInt, pi: GaussianInt) -> int:
    """Quadratic residue symbol [alpha | pi] in {-1, 1} for a Gaussian prime pi.

    Computed as alpha^((N(pi)-1)/2) reduced mod pi, then identified with ±1
    by an exact divisibility test.
    """
    n = pi.norm()
    e = (n - 1) // 2
    result = ONE
    base = gi_mod(alpha, pi)
    while e:
        if e & 1:
            result = gi_mod(result * base, pi)
        base = gi_mod(base * base, pi)
        e >>= 1
    if gi_divides(pi, result - ONE):
        return 1
    if gi_divides(pi, result + ONE):
        return -1
    raise ArithmeticError(f"symbol of {alpha} mod {pi} is not ±1 (pi divides alpha?)")


def symbol_one_plus_i(pi: GaussianInt) -> int:
    """Quadratic symbol [1+i | pi]."""
    return gi_quadratic_symbol(ONE_PLUS_I, pi)
