"""Prime triples, their invariant tuple, and the census scan.

A valid triple (p1, p2, q) has p1 ≡ p2 ≡ 5 (mod 8), q ≡ 3 (mod 4) and
(p1|q) = (p2|q) = -1.  The invariants (gamma, delta, N, m, n, pi, beta, I)
drive every downstream prediction about the second 2-class group of
Q(sqrt(p1*p2*q), i).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gaussian import gi_quadratic_symbol, split_prime, symbol_one_plus_i
from .ntheory import is_prime, legendre, primes_up_to, quartic_residue_symbol, quartic_symbol_of_two
from .quadfield import (
    class_group_imaginary,
    class_number_real,
    fundamental_unit,
    two_valuation,
)


class TripleConditionError(ValueError):
    """Triple rejected; .conditions lists the failed condition names."""

    def __init__(self, conditions: list[str]):
        super().__init__("invalid triple: " + "; ".join(conditions))
        self.conditions = conditions


@dataclass(frozen=True)
class FieldTriple:
    p1: int
    p2: int
    q: int

    @property
    def d(self) -> int:
        return self.p1 * self.p2 * self.q


@dataclass(frozen=True)
class FieldInvariants:
    triple: FieldTriple
    gamma: int
    delta: int | None  # only when gamma = +1
    unit_norm: int
    m: int
    n: int
    pi_symbol: int
    beta: int
    bigI: int | None  # only when gamma = -1
    disc_k: int
    order_G: int
    class_G: int
    coclass_G: int
    tau_ideal: str  # "H1H3" or "H2H3"
    group_label: str


def validate_triple(p1: int, p2: int, q: int) -> FieldTriple:
    failed = []
    for name, v in (("p1", p1), ("p2", p2), ("q", q)):
        if not is_prime(v):
            failed.append(f"{name}={v} is not prime")
    if failed:
        raise TripleConditionError(failed)
    if len({p1, p2, q}) != 3:
        failed.append("p1, p2, q are not distinct")
    if p1 % 4 != 1:
        failed.append(f"p1 ≡ {p1 % 4} (mod 4), expected 1")
    if p2 % 4 != 1:
        failed.append(f"p2 ≡ {p2 % 4} (mod 4), expected 1")
    if q % 4 != 3:
        failed.append(f"q ≡ {q % 4} (mod 4), expected 3")
    if not failed:
        if legendre(2, p1) != -1:
            failed.append("legendre(2,p1) ≠ -1")
        if legendre(2, p2) != -1:
            failed.append("legendre(2,p2) ≠ -1")
        if legendre(p1, q) != -1:
            failed.append("legendre(p1,q) ≠ -1")
        if legendre(p2, q) != -1:
            failed.append("legendre(p2,q) ≠ -1")
    if failed:
        raise TripleConditionError(failed)
    if p1 > p2:
        p1, p2 = p2, p1
    return FieldTriple(p1, p2, q)


@dataclass(frozen=True)
class PairData:
    """Cached per-(p1,p2) quantities shared by every q."""

    unit_norm: int
    m: int
    n: int
    pi_symbol: int
    beta: int


def compute_pair_data(p1: int, p2: int) -> PairData:
    m12 = p1 * p2
    unit_norm = fundamental_unit(m12).norm
    h_im, _, _ = class_group_imaginary(-4 * m12, with_structure=False)
    m = two_valuation(h_im) - 1
    _, h2_re = class_number_real(m12)
    n = two_valuation(h2_re)
    pi1 = split_prime(p1)[0]
    pi3 = split_prime(p2)[0]
    pi_symbol = gi_quadratic_symbol(pi1, pi3)
    beta = symbol_one_plus_i(pi1) * symbol_one_plus_i(pi3)
    return PairData(unit_norm, m, n, pi_symbol, beta)


def predicted_order_class_coclass(gamma: int, delta: int | None, unit_norm: int,
                                  m: int, n: int) -> tuple[int, int, int]:
    order = 2 ** (m + n + 3)
    if gamma == -1:
        cls = m + 1
    elif unit_norm == 1 and delta == -1:
        cls = m
    else:
        cls = n + 2
    coclass = 4 if (gamma == 1 and unit_norm == 1 and delta == -1) else 3
    return order, cls, coclass


_LABELS_NEG_M2 = {1: "64.180", 2: "128.985", 3: "256.6720", 4: "512.60892"}
_LABELS_NEG_N1 = {2: "64.180", 3: "128.986", 4: "256.6721", 5: "512.60893",
                  6: "512.60891-#1;3"}
_LABELS_POS_N1 = {3: "128.439", 4: "256.5492", 5: "512.58909"}


def group_label(m: int, n: int, unit_norm: int) -> str:
    if unit_norm == -1:
        if m == 2 and n in _LABELS_NEG_M2:
            return _LABELS_NEG_M2[n]
        if n == 1 and m in _LABELS_NEG_N1:
            return _LABELS_NEG_N1[m]
    else:
        if n == 1 and m in _LABELS_POS_N1:
            return _LABELS_POS_N1[m]
        if (m, n) == (2, 2):
            return "128.986v"
    return f"unlabeled({m},{n},{unit_norm:+d})"


def compute_invariants(t: FieldTriple, pair: PairData | None = None) -> FieldInvariants:
    p1, p2, q = t.p1, t.p2, t.q
    if pair is None:
        pair = compute_pair_data(p1, p2)
    gamma = legendre(p1, p2)
    delta = None
    bigI = None
    if gamma == 1:
        delta = quartic_residue_symbol(p1, p2) * quartic_residue_symbol(p2, p1)
    else:
        bigI = (quartic_symbol_of_two(p1 * p2)
                * quartic_residue_symbol(2 * p1, p2)
                * quartic_residue_symbol(2 * p2, p1))
    if gamma == 1:
        tau_ideal = "H1H3" if pair.beta == 1 else "H2H3"
    else:
        tau_ideal = "H1H3" if bigI == pair.pi_symbol else "H2H3"
    order, cls, coclass = predicted_order_class_coclass(
        gamma, delta, pair.unit_norm, pair.m, pair.n)
    return FieldInvariants(
        triple=t,
        gamma=gamma,
        delta=delta,
        unit_norm=pair.unit_norm,
        m=pair.m,
        n=pair.n,
        pi_symbol=pair.pi_symbol,
        beta=pair.beta,
        bigI=bigI,
        disc_k=16 * p1 * p1 * p2 * p2 * q * q,
        order_G=order,
        class_G=cls,
        coclass_G=coclass,
        tau_ideal=tau_ideal,
        group_label=group_label(pair.m, pair.n, pair.unit_norm),
    )


def candidate_triples(max_d: int) -> list[FieldTriple]:
    """All valid triples with d < max_d, sorted by d (no invariants)."""
    primes = primes_up_to(max_d // 15 + 1)
    ps = [p for p in primes if p % 8 == 5]
    qs = [p for p in primes if p % 4 == 3]
    out = []
    for i, p1 in enumerate(ps):
        if p1 * p1 * 3 >= max_d:
            break
        for p2 in ps[i + 1:]:
            m12 = p1 * p2
            if m12 * 3 >= max_d:
                break
            if legendre(p1, p2) == 0:
                continue
            for q in qs:
                if m12 * q >= max_d:
                    break
                if legendre(p1, q) == -1 and legendre(p2, q) == -1:
                    out.append(FieldTriple(p1, p2, q))
    out.sort(key=lambda t: t.d)
    return out


def scan(max_d: int, pair_cache: dict | None = None) -> list[FieldInvariants]:
    """Invariants for every valid triple with d < max_d, ordered by d."""
    cache = pair_cache if pair_cache is not None else {}
    rows = []
    for t in candidate_triples(max_d):
        key = (t.p1, t.p2)
        if key not in cache:
            cache[key] = compute_pair_data(*key)
        rows.append(compute_invariants(t, cache[key]))
    return rows
