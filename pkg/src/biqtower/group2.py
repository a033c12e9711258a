"""Exact finite 2-group engine.

Two carriers implement the same group interface: a structural carrier built
from a rank-2 abelian lattice with an involutive action and a central square
element (the two-generator abelian subgroup ⟨sigma, tau⟩ extended by rho),
and an enumerated carrier obtained from Todd-Coxeter coset enumeration of a
finite presentation.  On top of either carrier the module computes subgroup
closures, derived and lower central series, abelian invariants, Artin
transfers with their kernels, the two layers of subgroups over the derived
subgroup, and an isomorphism-grade fingerprint.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

ELEMENT_CAP = 2**13


class GroupSizeError(RuntimeError):
    pass


class EnumerationOverflowError(RuntimeError):
    pass


class ConstructionError(RuntimeError):
    pass


class NotAbelianError(RuntimeError):
    pass


class RankError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# integer lattice helpers (2 columns)


def hermite_rows(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Row Hermite form (A, B), (0, C) of a full-rank integer row lattice."""
    rows = [list(r) for r in rows if r != (0, 0)]
    # eliminate first column down to one row by gcd steps
    work = rows
    while sum(1 for r in work if r[0] != 0) > 1:
        nz = sorted((r for r in work if r[0] != 0), key=lambda r: abs(r[0]))
        a, b = nz[0], nz[1]
        q = b[0] // a[0]
        b[0] -= q * a[0]
        b[1] -= q * a[1]
    top = next((r for r in work if r[0] != 0), None)
    if top is None:
        raise ConstructionError("lattice not full rank")
    c = 0
    for r in work:
        if r is not top:
            c = gcd(c, r[1])
    if c == 0:
        raise ConstructionError("lattice not full rank")
    A, B = abs(top[0]), top[1] if top[0] > 0 else -top[1]
    B %= c
    return A, B, c


def smith_invariants(mat: tuple[int, int, int, int]) -> tuple[int, int]:
    """Invariant factors (d1, d2), d1 | d2, of a 2x2 integer matrix."""
    a, b, c, d = mat
    det = abs(a * d - b * c)
    if det == 0:
        raise ConstructionError("singular relation matrix")
    d1 = gcd(gcd(a, b), gcd(c, d))
    return d1, det // d1


class AbelianLattice:
    """A = Z^2 / L for a full-rank relation lattice L, with canonical reps."""

    def __init__(self, rows: list[tuple[int, int]]):
        self.rows = [tuple(r) for r in rows]
        self.A, self.B, self.C = hermite_rows(rows)
        self.order = self.A * self.C

    def canon(self, v: tuple[int, int]) -> tuple[int, int]:
        x, y = v
        k = x // self.A
        x -= k * self.A
        y = (y - k * self.B) % self.C
        return x, y

    def contains(self, v: tuple[int, int]) -> bool:
        return self.canon(v) == (0, 0)

    def basis(self) -> tuple[int, int, int]:
        return self.A, self.B, self.C


def lattice_sum(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite basis of the lattice spanned by the given row vectors."""
    return hermite_rows(list(vectors))


def quotient_type_2(sub: tuple[int, int, int], lat: AbelianLattice) -> tuple[int, ...]:
    """Abelian type (2-exponents, ascending) of S/L for lattices L ⊆ S."""
    A, B, C = sub
    coeffs = []
    for (x, y) in lat.rows:
        if x % A:
            raise ConstructionError("relation lattice not inside subgroup lattice")
        al = x // A
        if (y - al * B) % C:
            raise ConstructionError("relation lattice not inside subgroup lattice")
        coeffs.extend([al, (y - al * B) // C])
    d1, d2 = smith_invariants(tuple(coeffs))
    exps = []
    for d in (d1, d2):
        v = 0
        while d % 2 == 0:
            d //= 2
            v += 1
        if d != 1:
            raise ConstructionError("quotient is not a 2-group")
        if v:
            exps.append(v)
    return tuple(sorted(exps))


def lattices_equal(b1: tuple[int, int, int], b2: tuple[int, int, int]) -> bool:
    return b1 == b2


# ---------------------------------------------------------------------------
# group carriers


class FiniteTwoGroup:
    """Common interface: identity, mul, inv, generators, order, elements()."""

    order: int
    identity: object
    generators: dict

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def elements(self) -> list:
        raise NotImplementedError

    def conj(self, a, b):
        """b^-1 a b"""
        return self.mul(self.inv(b), self.mul(a, b))

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b"""
        return self.mul(self.inv(self.mul(b, a)), self.mul(a, b))

    def power(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.identity
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def word(self, letters) -> object:
        """Evaluate a word given as names or (name, exponent) pairs."""
        r = self.identity
        for item in letters:
            name, e = item if isinstance(item, tuple) else (item, 1)
            r = self.mul(r, self.power(self.generators[name], e))
        return r


class StructuralGroup(FiniteTwoGroup):
    """Extension of A = Z^2/L by an order-2 coset: elements (eps, x, y).

    Multiplication: (e1, a1)(e2, a2) = (e1 xor e2, phi^e2(a1) + a2 + [e1 & e2] r0).
    """

    def __init__(self, lattice_rows, phi_matrix, r0, params=None):
        self.lat = AbelianLattice(lattice_rows)
        self.phi_matrix = phi_matrix  # rows = images of e1, e2
        self.r0 = self.lat.canon(r0)
        self.params = params
        self.order = 2 * self.lat.order
        self.identity = (0, 0, 0)
        self.generators = {
            "rho": (1, 0, 0),
            "sigma": (0,) + self.lat.canon((1, 0)),
            "tau": (0,) + self.lat.canon((0, 1)),
        }
        self._validate()

    def _phi_raw(self, v):
        (m00, m01), (m10, m11) = self.phi_matrix
        return (v[0] * m00 + v[1] * m10, v[0] * m01 + v[1] * m11)

    def _validate(self):
        for row in self.lat.rows:
            if not self.lat.contains(self._phi_raw(row)):
                raise ConstructionError("action does not preserve the lattice")
            if row[0] % 2 or row[1] % 2:
                raise ConstructionError("lattice must lie in 2Z^2")
        for e in ((1, 0), (0, 1)):
            img = self._phi_raw(self._phi_raw(e))
            if self.lat.canon((img[0] - e[0], img[1] - e[1])) != (0, 0):
                raise ConstructionError("action is not an involution")
        if self.lat.canon((2 * self.r0[0], 2 * self.r0[1])) != (0, 0):
            raise ConstructionError("square element is not 2-torsion")
        fr0 = self._phi_raw(self.r0)
        if self.lat.canon((fr0[0] - self.r0[0], fr0[1] - self.r0[1])) != (0, 0):
            raise ConstructionError("square element is not action-invariant")

    def mul(self, g, h):
        e1, x1, y1 = g
        e2, x2, y2 = h
        if e2:
            x1, y1 = self._phi_raw((x1, y1))
        x, y = x1 + x2, y1 + y2
        if e1 and e2:
            x, y = x + self.r0[0], y + self.r0[1]
        return (e1 ^ e2,) + self.lat.canon((x, y))

    def inv(self, g):
        e, x, y = g
        if not e:
            return (0,) + self.lat.canon((-x, -y))
        fx, fy = self._phi_raw((x, y))
        return (1,) + self.lat.canon((-fx - self.r0[0], -fy - self.r0[1]))

    def elements(self):
        if self.order > ELEMENT_CAP:
            raise GroupSizeError(f"order {self.order} exceeds cap {ELEMENT_CAP}")
        out = []
        for e in (0, 1):
            for x in range(self.lat.A):
                for y in range(self.lat.C):
                    out.append((e, x, y))
        return out

    def coset_bits(self, g) -> int:
        """Coordinates of g modulo ⟨squares⟩ in the basis (rho, sigma, tau)."""
        e, x, y = g
        return e | ((x & 1) << 1) | ((y & 1) << 2)

    # ---- lattice-side analysis (valid beyond the element cap) ----

    def _phi_minus_one_image(self, basis):
        A, B, C = basis
        vecs = []
        for v in ((A, B), (0, C)):
            fx, fy = self._phi_raw(v)
            vecs.append((fx - v[0], fy - v[1]))
        return vecs

    def derived_lattice(self) -> tuple[int, int, int]:
        """Lattice basis of the derived subgroup inside A."""
        vecs = self._phi_minus_one_image((1, 0, 1)) + list(self.lat.rows)
        return lattice_sum(vecs)

    def derived_type_lattice(self) -> tuple[int, ...]:
        return quotient_type_2(self.derived_lattice(), self.lat)

    def squares_lattice(self) -> tuple[int, int, int]:
        """Lattice basis of ⟨sigma^2, tau^2⟩ inside A."""
        return lattice_sum([(2, 0), (0, 2)] + list(self.lat.rows))

    def lower_central_lattices(self) -> list[tuple[int, int, int]]:
        """Bases of gamma_2, gamma_3, ... as sublattices of A, ending at L."""
        out = []
        cur = self.derived_lattice()
        while True:
            out.append(cur)
            if cur == self.lat.basis():
                break
            vecs = self._phi_minus_one_image(cur) + list(self.lat.rows)
            nxt = lattice_sum(vecs)
            if nxt == cur:
                raise ConstructionError("lower central series does not terminate")
            cur = nxt
        return out

    def nilpotency_class_lattice(self) -> int:
        series = self.lower_central_lattices()
        if series[0] == self.lat.basis():
            return 1
        return len(series)


class EnumeratedGroup(FiniteTwoGroup):
    """Regular permutation representation; elements are integers 0..n-1."""

    def __init__(self, gen_perms: dict[str, tuple[int, ...]]):
        self.degree = len(next(iter(gen_perms.values())))
        self.identity = 0
        # grow the full regular multiplication table by closure
        perms = {0: tuple(range(self.degree))}
        queue = deque()
        for p in gen_perms.values():
            if p[0] not in perms:
                perms[p[0]] = p
                queue.append(p)
        while queue:
            p = queue.popleft()
            for g in gen_perms.values():
                q = tuple(g[i] for i in p)
                if q[0] not in perms:
                    perms[q[0]] = q
                    queue.append(q)
        if len(perms) != self.degree:
            raise ConstructionError("representation is not regular")
        self.table = [perms[i] for i in range(self.degree)]
        self._inv = [self.table[i].index(0) for i in range(self.degree)]
        self.order = self.degree
        self.generators = {name: p[0] for name, p in gen_perms.items()}

    def mul(self, a, b):
        return self.table[b][a]

    def inv(self, a):
        return self._inv[a]

    def elements(self):
        return list(range(self.degree))


# ---------------------------------------------------------------------------
# Todd-Coxeter coset enumeration


def word_inverse(w):
    return tuple(-x for x in reversed(w))


def word_comm(u, v):
    return word_inverse(u) + word_inverse(v) + tuple(u) + tuple(v)


def word_power(u, e: int):
    if e < 0:
        return word_inverse(word_power(u, -e))
    return tuple(u) * e


def coset_enumerate(gen_names: list[str], relators, max_cosets: int = 400000
                    ) -> EnumeratedGroup:
    """Enumerate the cosets of the trivial subgroup (HLT with coincidences)."""
    k = len(gen_names)
    ncols = 2 * k

    def col(x: int) -> int:
        i = abs(x) - 1
        return 2 * i if x > 0 else 2 * i + 1

    table = [[None] * ncols]
    parent = [0]
    pending: deque = deque()

    def rep(c: int) -> int:
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def merge(a: int, b: int):
        a, b = rep(a), rep(b)
        if a != b:
            if a > b:
                a, b = b, a
            parent[b] = a
            pending.append(b)

    def coincidence(a: int, b: int):
        merge(a, b)
        while pending:
            e = pending.popleft()
            row = table[e]
            for c in range(ncols):
                d = row[c]
                if d is None:
                    continue
                table[d][c ^ 1] = None
                e1, d1 = rep(e), rep(d)
                if table[e1][c] is not None:
                    merge(d1, table[e1][c])
                elif table[d1][c ^ 1] is not None:
                    merge(e1, table[d1][c ^ 1])
                else:
                    table[e1][c] = d1
                    table[d1][c ^ 1] = e1

    def define(a: int, c: int) -> int:
        if len(table) >= max_cosets:
            raise EnumerationOverflowError(
                f"coset budget {max_cosets} exhausted")
        b = len(table)
        table.append([None] * ncols)
        parent.append(b)
        table[a][c] = b
        table[b][c ^ 1] = a
        return b

    def scan_and_fill(a: int, w):
        f, i = a, 0
        b, j = a, len(w) - 1
        while True:
            while i <= j and table[f][col(w[i])] is not None:
                f = table[f][col(w[i])]
                i += 1
            if i > j:
                if rep(f) != rep(b):
                    coincidence(f, b)
                return
            while j >= i and table[b][col(-w[j])] is not None:
                b = table[b][col(-w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][col(w[i])] = b
                table[b][col(w[i]) ^ 1] = f
                return
            define(f, col(w[i]))

    a = 0
    while a < len(table):
        if rep(a) != a:
            a += 1
            continue
        for w in relators:
            if rep(a) != a:
                break
            scan_and_fill(a, w)
        if rep(a) == a:
            for c in range(ncols):
                if rep(a) != a:
                    break
                if table[a][c] is None:
                    define(a, c)
        a += 1

    live = [i for i in range(len(table)) if rep(i) == i]
    index = {c: i for i, c in enumerate(live)}
    perms = {}
    for gi, name in enumerate(gen_names):
        perms[name] = tuple(index[rep(table[c][2 * gi])] for c in live)
    return EnumeratedGroup(perms)


# ---------------------------------------------------------------------------
# the two-parameter presentations and the pc-presentation families


def two_param_relators(m: int, n: int, norm: int, variant: str = "a"):
    """Relator words for the presented group, generators (rho, sigma, tau)."""
    r, s, t = (1,), (2,), (3,)
    if norm == -1:
        rels = [
            word_power(r, 4),
            word_power(s, 2 ** (m + 1)),
            word_power(t, 2 ** (n + 2)),
            word_power(s, 2**m) + word_power(t, -(2 ** (n + 1))),
            word_power(r, 2) + word_inverse(
                word_power(t, 2**n) + word_power(s, 2 ** (m - 1))),
            word_comm(t, s),
            word_comm(s, r) + word_power(s, -(2**m - 2)),
            word_comm(r, t) + word_power(t, -2),
        ]
    elif norm == 1:
        if variant == "a":
            square = word_power(t, 2 ** (n + 1)) + word_power(s, 2 ** (m - 1))
        elif variant == "b":
            square = word_power(s, 2 ** (m - 1))
        else:
            raise ValueError(f"unknown variant {variant!r}")
        rels = [
            word_power(r, 4),
            word_power(s, 2**m),
            word_power(t, 2 ** (n + 2)),
            word_power(r, 2) + word_inverse(square),
            word_comm(t, s),
            word_comm(r, s) + word_power(s, -2),
            word_comm(t, r) + word_power(t, -(2 ** (n + 1) - 2)),
        ]
    else:
        raise ValueError("norm must be ±1")
    return ["rho", "sigma", "tau"], rels


def build_two_param_group(m: int, n: int, norm: int, variant: str = "a"
                          ) -> StructuralGroup:
    """Structural build of the presented group on parameters (m, n, ±1)."""
    if m < 2 or n < 1:
        raise ValueError(f"parameters out of range: m={m}, n={n}")
    if norm == -1:
        rows = [(2**m, -(2 ** (n + 1))), (0, 2 ** (n + 2))]
        phi = ((2**m - 1, 0), (0, -1))
        r0 = (2 ** (m - 1), 2**n)
    elif norm == 1:
        rows = [(2**m, 0), (0, 2 ** (n + 2))]
        phi = ((-1, 0), (0, 2 ** (n + 1) - 1))
        if variant == "a":
            r0 = (2 ** (m - 1), 2 ** (n + 1))
        elif variant == "b":
            r0 = (2 ** (m - 1), 0)
        else:
            raise ValueError(f"unknown variant {variant!r}")
    else:
        raise ValueError("norm must be ±1")
    g = StructuralGroup(rows, phi, r0, params=(m, n, norm, variant))
    if g.order != 2 ** (m + n + 3):
        raise ConstructionError(
            f"order {g.order} != 2^{m + n + 3} for (m,n,norm)=({m},{n},{norm})")
    return g


def _pc_relators(names, definitions, powers):
    """Relators for a pc-presentation.

    definitions: {gen: (u, v)} meaning gen = [u, v]; powers: {gen: word of
    names} meaning gen^2 = word (empty tuple for 1).  Every generator pair
    without a listed relation commutes.
    """
    idx = {g: i + 1 for i, g in enumerate(names)}
    rels = []
    related = set()
    for g, (u, v) in definitions.items():
        rels.append(word_comm((idx[u],), (idx[v],)) + (-idx[g],))
        related.add(frozenset((u, v)))
        related.add(frozenset((g,)))  # placeholder, never matches a pair
    for g, rhs in powers.items():
        w = (idx[g], idx[g]) + word_inverse(tuple(idx[h] for h in rhs))
        rels.append(w)
    for i, u in enumerate(names):
        for v in names[i + 1:]:
            if frozenset((u, v)) not in related:
                rels.append(word_comm((idx[u],), (idx[v],)))
    return rels


def _family_presentation(family: str, p: int):
    x, y, z = "x", "y", "z"
    if family in ("mainline-cc3", "seq985"):
        if p < 2:
            raise ValueError(f"{family} needs param >= 2")
        ts = [f"t{j}" for j in range(2, p + 3)]
        names = [x, y, z, "s2"] + ts
        defs = {"s2": (y, x), "t2": (z, x)}
        for j in range(3, p + 3):
            defs[f"t{j}"] = (f"t{j-1}", x)
        powers = {x: ("s2",), z: ("t2", "t3"), "s2": ()}
        powers[y] = ("s2",) if family == "mainline-cc3" else ("s2", f"t{p+2}")
        for j in range(2, p + 1):
            powers[f"t{j}"] = (f"t{j+1}", f"t{j+2}")
        powers[f"t{p+1}"] = (f"t{p+2}",)
        expected = 2 ** (p + 5)
    elif family == "seq986":
        if p < 3:
            raise ValueError("seq986 needs param >= 3")
        ts = [f"t{j}" for j in range(2, p + 2)]
        names = [x, y, z, "s2"] + ts
        defs = {"s2": (y, x), "t2": (z, x)}
        for j in range(3, p + 2):
            defs[f"t{j}"] = (f"t{j-1}", x)
        powers = {x: ("s2",), y: ("s2",), z: ("t2", "t3", f"t{p+1}"), "s2": ()}
        for j in range(2, p):
            powers[f"t{j}"] = (f"t{j+1}", f"t{j+2}")
        powers[f"t{p}"] = (f"t{p+1}",)
        expected = 2 ** (p + 4)
    elif family in ("mainline-cc4", "seq5492"):
        if p < 3:
            raise ValueError(f"{family} needs param >= 3")
        ss = [f"s{j}" for j in range(2, p + 1)]
        names = [x, y, z] + ss + ["t2", "t3"]
        defs = {"s2": (y, x), "t2": (z, x), "t3": ("t2", x)}
        for j in range(3, p + 1):
            defs[f"s{j}"] = (f"s{j-1}", x)
        powers = {y: ("s2", "s3"), z: ("t2",), "t2": ("t3",)}
        powers[x] = () if family == "mainline-cc4" else (f"s{p}",)
        for j in range(2, p - 1):
            powers[f"s{j}"] = (f"s{j+1}", f"s{j+2}")
        powers[f"s{p-1}"] = (f"s{p}",)
        expected = 2 ** (p + 4)
    else:
        raise ValueError(f"unknown family {family!r}")
    return names, _pc_relators(names, defs, powers), expected


def build_family_group(family: str, param: int) -> EnumeratedGroup:
    """Build a group from one of the parametrized pc-presentations."""
    names, rels, expected = _family_presentation(family, param)
    g = coset_enumerate(names, rels)
    if g.order != expected:
        raise ConstructionError(
            f"{family}({param}) enumerated order {g.order}, expected {expected}")
    return g


# ---------------------------------------------------------------------------
# generic subgroup machinery


@dataclass(frozen=True)
class Subgroup:
    group: FiniteTwoGroup = field(compare=False, hash=False, repr=False)
    gens: tuple
    members: frozenset

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.group.order // len(self.members)


def subgroup_closure(G: FiniteTwoGroup, gens) -> Subgroup:
    gens = tuple(gens)
    members = {G.identity}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = G.mul(a, g)
            if b not in members:
                members.add(b)
                queue.append(b)
    return Subgroup(G, gens, frozenset(members))


def normal_closure(G: FiniteTwoGroup, seeds, conj_gens) -> Subgroup:
    gens = [s for s in seeds if s != G.identity]
    while True:
        sub = subgroup_closure(G, gens)
        new = None
        for x in sub.members:
            for g in conj_gens:
                y = G.conj(x, g)
                if y not in sub.members:
                    new = y
                    break
            if new:
                break
        if new is None:
            return sub
        gens.append(new)


def whole_group(G: FiniteTwoGroup) -> Subgroup:
    gens = tuple(G.generators.values())
    return Subgroup(G, gens, frozenset(G.elements()))


def derived_subgroup(G: FiniteTwoGroup, H: Subgroup | None = None) -> Subgroup:
    if H is None:
        H = whole_group(G)
    gens = H.gens
    seeds = [G.comm(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return normal_closure(G, seeds, gens)


def lower_central_series(G: FiniteTwoGroup) -> list[Subgroup]:
    """[G, gamma_2, gamma_3, ...] down to (and including) the trivial term."""
    series = [whole_group(G)]
    ggens = tuple(G.generators.values())
    cur = derived_subgroup(G)
    while True:
        series.append(cur)
        if cur.order == 1:
            break
        seeds = [G.comm(x, g) for x in cur.members for g in ggens]
        nxt = normal_closure(G, seeds, ggens)
        if nxt.order == cur.order:
            raise ConstructionError("lower central series stalls (not nilpotent)")
        cur = nxt
    return series


def nilpotency_class(G: FiniteTwoGroup) -> int:
    return len(lower_central_series(G)) - 1


def center(G: FiniteTwoGroup) -> Subgroup:
    gens = tuple(G.generators.values())
    members = [a for a in G.elements()
               if all(G.mul(a, g) == G.mul(g, a) for g in gens)]
    return Subgroup(G, tuple(members), frozenset(members))


def _coset_partition(G, member_list, normal_members):
    """Map element -> coset id over member_list, cosets of normal_members."""
    coset_of = {}
    reps = []
    for g in member_list:
        if g in coset_of:
            continue
        cid = len(reps)
        reps.append(g)
        for h in normal_members:
            coset_of[G.mul(h, g)] = cid
    return coset_of, reps


def _two_type_from_squaring(nc: int, sq: list[int], id_idx: int) -> tuple[int, ...]:
    if nc & (nc - 1):
        raise NotAbelianError("quotient order is not a 2-power")
    counts = []
    cur = list(range(nc))
    while True:
        cur = [sq[i] for i in cur]
        cnt = sum(1 for i in cur if i == id_idx)
        counts.append(cnt)
        if cnt == nc:
            break
    lam = []
    prev = 1
    for c in counts:
        lam.append((c // prev).bit_length() - 1)
        prev = c
    exps = []
    for k, l in enumerate(lam, start=1):
        nxt = lam[k] if k < len(lam) else 0
        exps.extend([k] * (l - nxt))
    return tuple(sorted(exps))


def abelian_invariants(G: FiniteTwoGroup, H: Subgroup,
                       modulo: Subgroup | None = None) -> tuple[int, ...]:
    """Abelian type (ascending 2-exponents) of H or of the quotient H/modulo."""
    if modulo is None:
        for i, a in enumerate(H.gens):
            for b in H.gens[i + 1:]:
                if G.comm(a, b) != G.identity:
                    raise NotAbelianError("subgroup is not abelian")
        normal = [G.identity]
    else:
        normal = list(modulo.members)
    coset_of, reps = _coset_partition(G, sorted(H.members), normal)
    sq = [coset_of[G.mul(r, r)] for r in reps]
    return _two_type_from_squaring(len(reps), sq, coset_of[G.identity])


# ---------------------------------------------------------------------------
# quotient G/G' with (2,2,2) coordinates, layers, transfers


@dataclass
class DerivedQuotient:
    group: FiniteTwoGroup
    derived: Subgroup
    coset_of: dict
    bits_of: list[int]  # coset id -> bit vector over generator basis

    def bits(self, g) -> int:
        return self.bits_of[self.coset_of[g]]


def derived_quotient(G: FiniteTwoGroup) -> DerivedQuotient:
    dsub = derived_subgroup(G)
    coset_of, reps = _coset_partition(G, G.elements(), list(dsub.members))
    if len(reps) != 8:
        raise RankError(f"G/G' has order {len(reps)}, expected 8")
    # choose a basis of three generators that are independent modulo G'
    bits_of = [None] * 8
    bits_of[coset_of[G.identity]] = 0
    assigned = {coset_of[G.identity]: G.identity}
    next_bit = 0
    for x in G.generators.values():
        if bits_of[coset_of[x]] is not None:
            continue
        if next_bit == 3:
            raise RankError("generator images are not independent mod G'")
        bit = 1 << next_bit
        next_bit += 1
        for cid, g in list(assigned.items()):
            h = G.mul(g, x)
            bits_of[coset_of[h]] = bits_of[cid] | bit
            assigned[coset_of[h]] = h
    if any(b is None for b in bits_of):
        raise RankError("generators do not span G/G'")
    return DerivedQuotient(G, dsub, coset_of, bits_of)


def layer_subgroups(G: FiniteTwoGroup, q: DerivedQuotient | None = None
                    ) -> tuple[list[Subgroup], list[Subgroup]]:
    """The 7 index-2 and 7 index-4 subgroups of G containing G'."""
    if q is None:
        q = derived_quotient(G)
    reps_by_bits = {}
    for g in G.elements():
        b = q.bits(g)
        reps_by_bits.setdefault(b, g)
    layer1, layer2 = [], []
    elems = G.elements()
    for f in range(1, 8):
        members1 = frozenset(g for g in elems
                             if bin(q.bits(g) & f).count("1") % 2 == 0)
        gens1 = tuple(reps_by_bits[b] for b in range(8)
                      if bin(b & f).count("1") % 2 == 0 and b) + tuple(
                          q.derived.gens)
        layer1.append(Subgroup(G, gens1, members1))
        members2 = frozenset(g for g in elems if q.bits(g) in (0, f))
        gens2 = (reps_by_bits[f],) + tuple(q.derived.gens)
        layer2.append(Subgroup(G, gens2, members2))
    return layer1, layer2


def preimage_subgroup(G: FiniteTwoGroup, q: DerivedQuotient,
                      bit_set: set[int]) -> Subgroup:
    """Preimage in G of a subgroup of G/G' given by its bit vectors."""
    reps_by_bits = {}
    for g in G.elements():
        reps_by_bits.setdefault(q.bits(g), g)
    members = frozenset(g for g in G.elements() if q.bits(g) in bit_set)
    gens = tuple(reps_by_bits[b] for b in bit_set if b) + tuple(q.derived.gens)
    return Subgroup(G, gens, members)


@dataclass
class Transfer:
    """Artin transfer data from G into a finite-index subgroup H."""

    group: FiniteTwoGroup
    sub: Subgroup
    sub_derived: Subgroup
    _rep_of: dict
    _reps: list
    _h_coset_of: dict

    def value(self, g) -> int:
        """V(g) as a coset id of H/H'."""
        G = self.group
        prod = G.identity
        for r in self._reps:
            x = G.mul(r, g)
            prod = G.mul(prod, G.mul(x, G.inv(self._rep_of[x])))
        return self._h_coset_of[prod]

    @property
    def trivial_target(self) -> int:
        return self._h_coset_of[self.group.identity]


def transfer(G: FiniteTwoGroup, H: Subgroup) -> Transfer:
    rep_of = {}
    reps = []
    for g in G.elements():
        if g in rep_of:
            continue
        reps.append(g)
        for h in H.members:
            rep_of[G.mul(h, g)] = g
    hprime = derived_subgroup(G, H)
    h_coset_of, _ = _coset_partition(G, list(H.members), list(hprime.members))
    return Transfer(G, H, hprime, rep_of, reps, h_coset_of)


def transfer_kernel(G: FiniteTwoGroup, H: Subgroup,
                    q: DerivedQuotient | None = None) -> set[int]:
    """Kernel of the transfer as a set of bit vectors in G/G' ≅ (2,2,2)."""
    if q is None:
        q = derived_quotient(G)
    tr = transfer(G, H)
    reps_by_bits = {}
    for g in G.elements():
        reps_by_bits.setdefault(q.bits(g), g)
    kernel = set()
    for b, g in reps_by_bits.items():
        if tr.value(g) == tr.trivial_target:
            kernel.add(b)
    return kernel


def index2_transfer_value(G: FiniteTwoGroup, H: Subgroup, z, g):
    """Closed form of the index-2 transfer: g^2 [g,z] if g in H, else g^2."""
    if g in H.members:
        return G.mul(G.mul(g, g), G.comm(g, z))
    return G.mul(g, g)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    nilpotency_class: int
    coclass: int
    abelianization: tuple
    derived_type: tuple
    center_type: tuple
    layer1_ttt: tuple
    layer2_ttt: tuple
    tkt_kernel_sizes: tuple


def fingerprint(G: FiniteTwoGroup) -> GroupFingerprint:
    if G.order & (G.order - 1):
        raise ValueError("order is not a 2-power")
    cached = getattr(G, "_fingerprint", None)
    if cached is not None:
        return cached
    q = derived_quotient(G)
    cls = nilpotency_class(G)
    coclass = G.order.bit_length() - 1 - cls
    ab = abelian_invariants(G, whole_group(G), modulo=q.derived)
    dtype = abelian_invariants(G, q.derived)
    ctype = abelian_invariants(G, center(G))
    layer1, layer2 = layer_subgroups(G, q)
    ttt1, sizes = [], []
    for H in layer1:
        hp = derived_subgroup(G, H)
        ttt1.append(abelian_invariants(G, H, modulo=hp))
        sizes.append(len(transfer_kernel(G, H, q)))
    ttt2 = []
    for H in layer2:
        hp = derived_subgroup(G, H)
        ttt2.append(abelian_invariants(G, H, modulo=hp))
    fp = GroupFingerprint(
        order=G.order,
        nilpotency_class=cls,
        coclass=coclass,
        abelianization=ab,
        derived_type=dtype,
        center_type=ctype,
        layer1_ttt=tuple(sorted(ttt1)),
        layer2_ttt=tuple(sorted(ttt2)),
        tkt_kernel_sizes=tuple(sorted(sizes)),
    )
    G._fingerprint = fp
    return fp
