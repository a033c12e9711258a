"""Tests for triple validation and field-invariant computation."""

import pytest

from biqtower.params import (
    TripleConditionError,
    candidate_triples,
    compute_invariants,
    compute_pair_data,
    group_label,
    predicted_order_class_coclass,
    scan,
    validate_triple,
)


def test_validate_triple_accepts_known_good():
    t = validate_triple(5, 13, 7)
    assert (t.p1, t.p2, t.q) == (5, 13, 7)
    assert t.d == 455


def test_validate_triple_rejects_with_named_conditions():
    with pytest.raises(TripleConditionError) as exc:
        validate_triple(5, 13, 11)  # q = 11 is 3 mod 8 but (5/11) = +1
    assert any("legendre" in c for c in exc.value.conditions)
    with pytest.raises(TripleConditionError):
        validate_triple(5, 7, 3)  # p2 = 7 is not 5 mod 8
    # swapped p1, p2 is accepted and canonicalized
    t = validate_triple(13, 5, 7)
    assert (t.p1, t.p2) == (5, 13)
    with pytest.raises(TripleConditionError):
        validate_triple(5, 13, 5)  # q must be a distinct prime, 3 mod 4


def test_pair_data_known_values():
    pair = compute_pair_data(5, 13)
    assert pair.unit_norm == -1
    assert (pair.m, pair.n) == (2, 1)
    pair = compute_pair_data(5, 61)
    assert pair.unit_norm == 1
    assert (pair.m, pair.n) == (3, 1)


def test_invariants_for_smallest_triple():
    inv = compute_invariants(validate_triple(5, 13, 7))
    assert inv.gamma == -1
    assert inv.delta is None
    assert inv.unit_norm == -1
    assert (inv.m, inv.n) == (2, 1)
    assert inv.disc_k == 16 * 25 * 169 * 49
    assert (inv.order_G, inv.class_G, inv.coclass_G) == (64, 3, 3)
    assert inv.group_label == "64.180"


def test_invariants_positive_norm_triple():
    inv = compute_invariants(validate_triple(5, 61, 7))
    assert inv.gamma == 1
    assert inv.delta == -1
    assert inv.unit_norm == 1
    assert (inv.m, inv.n) == (3, 1)
    assert (inv.order_G, inv.class_G, inv.coclass_G) == (128, 3, 4)
    assert inv.group_label == "128.439"


def test_predicted_order_class_coclass_cases():
    assert predicted_order_class_coclass(-1, None, -1, 2, 1) == (64, 3, 3)
    assert predicted_order_class_coclass(1, -1, 1, 3, 1) == (128, 3, 4)
    assert predicted_order_class_coclass(1, 1, -1, 2, 2) == (128, 4, 3)
    assert predicted_order_class_coclass(1, -1, -1, 2, 2) == (128, 4, 3)


def test_group_labels():
    assert group_label(2, 1, -1) == "64.180"
    assert group_label(2, 2, -1) == "128.985"
    assert group_label(3, 1, -1) == "128.986"
    assert group_label(2, 2, 1) == "128.986v"
    assert group_label(3, 1, 1) == "128.439"
    assert group_label(4, 1, 1) == "256.5492"
    assert group_label(7, 3, -1).startswith("unlabeled")


def test_candidate_triples_small_range():
    triples = candidate_triples(1000)
    assert all(t.d <= 1000 for t in triples)
    assert triples == sorted(triples, key=lambda t: (t.d, t.p1, t.p2, t.q))
    assert any((t.p1, t.p2, t.q) == (5, 13, 7) for t in triples)
    # every candidate revalidates cleanly
    for t in triples:
        validate_triple(t.p1, t.p2, t.q)


def test_scan_small_range():
    rows = scan(1000)
    assert len(rows) == len(candidate_triples(1000))
    for inv in rows:
        assert inv.order_G == 2 ** (inv.m + inv.n + 3)
        if inv.gamma == 1:
            assert inv.delta in (1, -1) and inv.bigI is None
        else:
            assert inv.delta is None and inv.bigI in (1, -1)
