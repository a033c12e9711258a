"""Elementary rational number theory: sieve, primality, residue symbols."""


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i, f in enumerate(sieve) if f]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, in {-1, 0, 1}."""
    if p <= 2 or p % 2 == 0:
        raise ValueError(f"modulus {p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def quartic_residue_symbol(a: int, p: int) -> int:
    """Rational quartic residue symbol (a|p)_4 in {-1, 1}.

    Defined only for p ≡ 1 (mod 4) and a a quadratic residue mod p, where
    a^((p-1)/4) is guaranteed to be ±1 mod p.
    """
    if p % 4 != 1:
        raise ValueError(f"p = {p} must be 1 mod 4")
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a nonzero quadratic residue mod {p}")
    r = pow(a % p, (p - 1) // 4, p)
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise ArithmeticError(f"symbol value {r} not ±1; {p} is not prime?")


def quartic_symbol_of_two(m: int) -> int:
    """Quartic symbol (2|m)_4 = (-1)^((m-1)/8) for m ≡ 1 (mod 8)."""
    if m % 8 != 1:
        raise ValueError(f"m = {m} must be 1 mod 8")
    return -1 if ((m - 1) // 8) % 2 else 1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Canonical square root of a mod an odd prime p.

    Returns the root r with 0 <= r <= (p-1)/2.  Raises ValueError when a is
    a nonresidue.  Uses Tonelli-Shanks.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        # find least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)
