"""Tests for capitulation/class-group predictions, the consistency harness,
and the bundled fixture tables."""

import pytest

from biqtower.params import compute_invariants, validate_triple
from biqtower.predict import (
    FIXTURE_TABLES,
    FULL_SPACE,
    H1,
    H2,
    H3,
    LAYER2_COMPOSITION,
    FixtureFormatError,
    capitulation_kernels,
    consistency_check,
    field_catalog,
    k3_kernel_options,
    load_allowlist,
    norm_groups,
    octic_types,
    parse_fixture_table,
    predict_all,
    quartic_types,
    span,
    verify_all_fixtures,
    verify_fixture,
)


def inv_of(p1, p2, q):
    return compute_invariants(validate_triple(p1, p2, q))


# ----------------------------------------------------------------- catalog

def test_field_catalog_shape():
    cat = field_catalog()
    assert [e.label for e in cat] == [f"K{j}" for j in range(1, 8)] + \
        [f"L{j}" for j in range(1, 8)]
    by_label = {e.label: e for e in cat}
    # conjugates pair up symmetrically
    for e in cat:
        if e.conjugate is not None:
            assert by_label[e.conjugate].conjugate == e.label
    # each quartic field appears in exactly 3 octic composita
    for j in range(1, 8):
        count = sum(1 for e in cat if e.composition and f"K{j}" in e.composition)
        assert count == 3
    assert LAYER2_COMPOSITION[1] == (1, 2, 3)


def test_span_is_xor_closure():
    assert span() == frozenset({0})
    assert span(H1, H2) == frozenset({0, 1, 2, 3})
    assert span(H1, H2, H3) == FULL_SPACE
    assert len(FULL_SPACE) == 8


# ------------------------------------------------------------- predictions

def test_norm_groups_are_index_two():
    for args in [(5, 13, 7), (5, 61, 7), (5, 29, 3)]:
        groups = norm_groups(inv_of(*args))
        assert set(groups) == set(range(1, 8))
        for g in groups.values():
            assert len(g) == 4 and 0 in g


def test_kernels_have_expected_sizes():
    for args in [(5, 13, 7), (5, 61, 7)]:
        inv = inv_of(*args)
        kernels = capitulation_kernels(inv)
        assert len(kernels[3]) == 2
        for j in (1, 2, 4, 5, 6, 7):
            assert len(kernels[j]) == 4
        for j, k in kernels.items():
            assert k <= FULL_SPACE and 0 in k


def test_k3_kernel_options():
    opts = k3_kernel_options(inv_of(5, 13, 7))
    assert len(opts) >= 1 and all(1 <= o <= 7 for o in opts)


def test_predict_all_known_triple():
    inv = inv_of(5, 13, 7)  # gamma = -1, N = -1, m = 2, n = 1
    rep = predict_all(inv)
    assert rep.order == 64
    assert (rep.nilpotency_class, rep.coclass) == (3, 3)
    assert set(rep.quartic_types) == set(range(1, 8))
    assert set(rep.octic_types) == set(range(1, 8))
    assert rep.octic_types[1] == (1, 3)  # genus-field layer, (m, n) = (2, 1)
    assert rep.derived_type == (1, 2)
    assert rep.tower_length == 2


def test_octic_conjugate_pairs_share_types():
    for args in [(5, 13, 7), (5, 61, 7), (5, 29, 3)]:
        inv = inv_of(*args)
        kt, lt = quartic_types(inv), octic_types(inv)
        assert kt[4] == kt[7] and kt[5] == kt[6]
        assert lt[2] == lt[3] and lt[4] == lt[5]


# ------------------------------------------------------------- consistency

@pytest.mark.parametrize("p1,p2,q", [(5, 13, 7), (5, 29, 3), (5, 61, 7)])
def test_consistency_check_passes(p1, p2, q):
    rep = consistency_check(inv_of(p1, p2, q))
    assert rep.ok, rep.failures
    assert rep.assignment is not None


# ---------------------------------------------------------------- fixtures

def test_parse_all_fixture_tables():
    for stem in FIXTURE_TABLES:
        rows = parse_fixture_table(stem)
        assert rows, stem
        for row in rows:
            assert row.d == row.p1 * row.p2 * row.q
            assert row.m >= 2 and row.n >= 1


def test_parse_fixture_rejects_garbage(tmp_path):
    bad = tmp_path / "base.txt"
    bad.write_text("this is not ; a fixture @@ row\n")
    with pytest.raises(FixtureFormatError):
        parse_fixture_table("base", base_dir=tmp_path)


def test_allowlist_is_parsed():
    allow = load_allowlist()
    assert isinstance(allow, set)
    for entry in allow:
        stem, d, col = entry
        assert stem in FIXTURE_TABLES and isinstance(d, int)


def test_verify_single_base_row():
    row = next(r for r in parse_fixture_table("base") if r.d == 455)
    verdicts = verify_fixture(row)
    assert verdicts, verdicts
    assert all(v in ("match", "not-checked") for v in verdicts.values()), verdicts
    assert sum(v == "match" for v in verdicts.values()) >= 8


def test_verify_all_fixtures_no_mismatches():
    results = verify_all_fixtures()
    assert set(results) == set(FIXTURE_TABLES)
    for stem, rows in results.items():
        for d, verdicts in rows:
            bad = {c: v for c, v in verdicts.items()
                   if v.startswith("mismatch")}
            assert not bad, f"{stem} d={d}: {bad}"
