"""Tests for the finite 2-group engine: structural groups, coset enumeration,
subgroup machinery, and transfer maps."""

import pytest
from hypothesis import given, settings, strategies as st

from biqtower.group2 import (
    AbelianLattice,
    GroupSizeError,
    abelian_invariants,
    build_family_group,
    build_two_param_group,
    center,
    coset_enumerate,
    derived_quotient,
    derived_subgroup,
    fingerprint,
    hermite_rows,
    index2_transfer_value,
    layer_subgroups,
    lower_central_series,
    nilpotency_class,
    normal_closure,
    quotient_type_2,
    smith_invariants,
    subgroup_closure,
    transfer,
    transfer_kernel,
    whole_group,
)


# ---------------------------------------------------------------- lattices

def test_hermite_and_smith_basics():
    A, B, C = hermite_rows([(2, 4), (6, 8)])
    assert A > 0 and C > 0 and 0 <= B < C
    # the HNF basis spans the same lattice: index = |det| is preserved
    assert A * C == abs(2 * 8 - 4 * 6)
    assert smith_invariants((2, 0, 0, 4)) == (2, 4)
    assert smith_invariants((2, 4, 6, 8)) == smith_invariants((6, 8, 2, 4))


def test_quotient_type_two_known():
    # Z^2 / <(2,0),(0,8)> has 2-type (1, 3)
    lat = AbelianLattice([(2, 0), (0, 8)])
    assert quotient_type_2((1, 0, 1), lat) == (1, 3)
    # index-2 sublattice <(2,0),(0,2)> over <(2,0),(0,8)> is cyclic of order 4
    assert quotient_type_2(hermite_rows([(2, 0), (0, 2)]), lat) == (2,)


# ----------------------------------------------------- structural groups

@settings(deadline=None, max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_group_axioms_on_random_elements(i, j, k):
    G = build_two_param_group(2, 2, -1)
    els = G.elements()
    a, b, c = els[i % len(els)], els[j % len(els)], els[k % len(els)]
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.identity) == a
    assert G.mul(G.inv(a), a) == G.identity


@pytest.mark.parametrize("m,n,norm", [(2, 1, -1), (2, 2, -1), (3, 1, -1),
                                      (3, 1, 1), (2, 2, 1), (4, 1, 1)])
def test_structural_group_sizes_and_class(m, n, norm):
    G = build_two_param_group(m, n, norm)
    assert G.order == 2 ** (m + n + 3)
    # lattice-side class agrees with the generic lower central series
    assert G.nilpotency_class_lattice() == nilpotency_class(G)
    # lattice-side derived subgroup type agrees with the generic one
    D = derived_subgroup(G)
    assert abelian_invariants(G, D) == G.derived_type_lattice()


def test_derived_equals_squares_sublattice():
    for (m, n, norm) in [(2, 1, -1), (3, 2, -1), (2, 3, 1), (4, 2, 1)]:
        G = build_two_param_group(m, n, norm, variant="a")
        assert G.derived_lattice() == G.squares_lattice()


def test_lower_central_series_matches_power_subgroups():
    # gamma_{j+1}(G) = <sigma^{2^j}, tau^{2^j}> for these groups
    G = build_two_param_group(3, 2, -1)
    sigma, tau = G.generators["sigma"], G.generators["tau"]
    series = lower_central_series(G)
    for j in range(1, len(series)):
        H = subgroup_closure(G, [G.power(sigma, 2 ** j), G.power(tau, 2 ** j)])
        assert series[j].members == H.members


def test_element_cap_enforced():
    with pytest.raises(GroupSizeError):
        build_two_param_group(8, 6, -1).elements()


def test_known_small_group_structure():
    G = build_two_param_group(2, 1, -1)
    fp = fingerprint(G)
    assert fp.order == 64
    assert fp.nilpotency_class == 3
    assert fp.coclass == 3
    assert fp.derived_type == (1, 2)
    assert fp.abelianization == (1, 1, 1)


def test_isomorphic_parameter_coincidence():
    # (m, n, norm) = (2, 2, +1) and (3, 1, -1) give isomorphic groups
    assert fingerprint(build_two_param_group(2, 2, 1)) == \
        fingerprint(build_two_param_group(3, 1, -1))


# ----------------------------------------------------- coset enumeration

def test_coset_enumeration_dihedral_8():
    # a^4 = b^2 = (ab)^2 = 1
    G = coset_enumerate(["a", "b"], [(1, 1, 1, 1), (2, 2), (1, 2, 1, 2)])
    assert G.order == 8
    assert abelian_invariants(G, derived_subgroup(G)) == (1,)
    assert nilpotency_class(G) == 2


def test_coset_enumeration_quaternion_8():
    # a^4 = 1, b^2 = a^2, b^-1 a b = a^-1
    G = coset_enumerate(["a", "b"], [(1, 1, 1, 1), (2, 2, -1, -1),
                                     (-2, 1, 2, 1)])
    assert G.order == 8
    assert center(G).order == 2
    # every subgroup of Q8 is normal; the three cyclic order-4 subgroups
    a, b = G.generators["a"], G.generators["b"]
    for g in (a, b, G.mul(a, b)):
        H = subgroup_closure(G, [g])
        assert H.order == 4


def test_coset_enumeration_abelian_2_4():
    # a^2 = b^4 = [a,b] = 1
    G = coset_enumerate(["a", "b"], [(1, 1), (2, 2, 2, 2), (-1, -2, 1, 2)])
    assert G.order == 8
    assert abelian_invariants(G, whole_group(G)) == (1, 2)


# ------------------------------------------------------------ pc families

@pytest.mark.parametrize("family,p,order", [
    ("mainline-cc3", 2, 128), ("seq985", 2, 128), ("seq985", 3, 256),
    ("seq986", 3, 128), ("mainline-cc4", 3, 128), ("seq5492", 4, 256),
])
def test_family_presentation_orders(family, p, order):
    G = build_family_group(family, p)
    assert G.order == order


def test_family_matches_structural_counterpart():
    assert fingerprint(build_family_group("seq985", 2)) == \
        fingerprint(build_two_param_group(2, 2, -1))
    assert fingerprint(build_family_group("seq986", 3)) == \
        fingerprint(build_two_param_group(3, 1, -1))
    assert fingerprint(build_family_group("seq5492", 4)) == \
        fingerprint(build_two_param_group(4, 1, 1))


# ------------------------------------------------------ subgroups/transfer

def test_layer_subgroups_counts():
    G = build_two_param_group(2, 1, -1)
    layer1, layer2 = layer_subgroups(G)
    assert len(layer1) == 7 and all(h.index == 2 for h in layer1)
    assert len(layer2) == 7 and all(h.index == 4 for h in layer2)


def test_derived_quotient_is_elementary_rank_3():
    for args in [(2, 1, -1), (3, 1, 1)]:
        G = build_two_param_group(*args)
        q = derived_quotient(G)
        assert abelian_invariants(G, whole_group(G),
                                  modulo=q.derived) == (1, 1, 1)
        assert sorted({q.bits(g) for g in G.elements()}) == list(range(8))


def test_transfer_closed_form_index_two():
    G = build_two_param_group(2, 1, -1)
    layer1, _ = layer_subgroups(G)
    for H in layer1:
        tr = transfer(G, H)
        z = next(g for g in G.elements() if g not in H.members)
        for g in G.elements():
            assert tr.value(g) == tr._h_coset_of[index2_transfer_value(G, H, z, g)]


def test_transfer_kernel_known():
    G = build_two_param_group(2, 1, -1)
    q = derived_quotient(G)
    H = subgroup_closure(G, [G.generators["sigma"], G.generators["rho"]])
    ker = transfer_kernel(G, H, q)
    assert ker == {0, 1, 2, 3}


def test_normal_closure_and_center():
    G = build_two_param_group(2, 2, -1)
    gens = tuple(G.generators.values())
    rho, sigma, tau = (G.generators[k] for k in ("rho", "sigma", "tau"))
    N = normal_closure(G, [G.comm(rho, sigma), G.comm(rho, tau)], gens)
    D = derived_subgroup(G)
    assert N.members == D.members
    Z = center(G)
    for z in Z.members:
        assert all(G.mul(z, g) == G.mul(g, z) for g in G.elements())
