import itertools

import numpy as np
import pytest

from normlap import digraph as dg
from normlap.census import (REFERENCE_TABLE, ROW_FIELDS, CanonicalCode, CensusError, balanced_class_codes,
                            canonical_code, canonical_codes, class_codes, class_flags, compare_with_reference,
                            count_classes_burnside, decode, encode, enumerate_digraphs, census_row)
from normlap.exact import is_normal_laplacian, normality_combinatorial
from normlap.generators import random_digraph, rng_for


def _labeled_codes(n):
    return range(1 << (n * (n - 1)))


def test_encode_decode_round_trip(c3):
    assert decode(encode(c3), 3) == c3
    # pair (0, 1) is the most significant bit
    assert encode(dg.from_arcs(3, [(0, 1)])) == 1 << 5
    assert encode(dg.from_arcs(3, [(2, 1)])) == 1


def test_canonical_code_relabelings(c3):
    codes = {canonical_code(c3.relabel(p)) for p in itertools.permutations(range(3))}
    assert len(codes) == 1
    assert canonical_code(c3.reverse()) == canonical_code(c3)
    a = dg.from_arcs(3, [(0, 1), (1, 2)])
    b = dg.from_arcs(3, [(2, 1), (1, 0)])
    assert canonical_code(a) == canonical_code(b)
    assert canonical_code(a) != canonical_code(c3)


def test_canonical_code_is_minimum(c3):
    code = canonical_code(c3)
    assert isinstance(code, CanonicalCode)
    assert canonical_code(code.to_digraph()) == code
    assert code.value == min(encode(c3.relabel(p)) for p in itertools.permutations(range(3)))
    assert len(code.bits) == 6


@pytest.mark.parametrize("n", [2, 3, 4])
def test_batch_matches_single(n):
    codes = np.arange(1 << (n * (n - 1)), dtype=np.int64)
    batch = canonical_codes(codes, n)
    single = [canonical_code(decode(int(c), n)).value for c in codes]
    assert batch.tolist() == single


@pytest.mark.parametrize("n", [5, 6])
def test_batch_matches_single_random(n):
    rng = rng_for(n)
    graphs = [random_digraph(n, 0.4, rng) for _ in range(200)]
    batch = canonical_codes([encode(g) for g in graphs], n)
    assert batch.tolist() == [canonical_code(g).value for g in graphs]


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 16), (4, 218), (5, 9608)])
def test_class_counts(n, count):
    assert len(class_codes(n)) == count
    assert count_classes_burnside(n) == count


def test_burnside_n6():
    assert count_classes_burnside(6) == 1540944


@pytest.mark.parametrize("n", [2, 3, 4])
def test_classes_match_labeled_dedup(n):
    labeled = {canonical_code(decode(c, n)).value for c in _labeled_codes(n)}
    assert sorted(labeled) == class_codes(n).tolist()


@pytest.mark.parametrize("n, shards", [(4, 3), (5, 4), (5, 7)])
def test_shards_partition(n, shards):
    parts = [set(class_codes(n, s, shards).tolist()) for s in range(shards)]
    assert sum(len(p) for p in parts) == len(class_codes(n))
    assert set().union(*parts) == set(class_codes(n).tolist())


def test_shard_errors():
    with pytest.raises(CensusError):
        class_codes(4, 3, 3)
    with pytest.raises(CensusError):
        class_codes(7)


def test_enumerate_digraphs_predicate():
    assert sum(1 for _ in enumerate_digraphs(2)) == 3
    assert sum(1 for _ in enumerate_digraphs(4, dg.is_tournament)) == 4
    assert len(list(enumerate_digraphs(4, is_normal_laplacian, shard=1, shards=2))) <= 218


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_balanced_classes_match_filter(n):
    expected = [c for c in class_codes(n).tolist() if dg.is_balanced(decode(c, n))]
    assert balanced_class_codes(n).tolist() == expected


@pytest.mark.parametrize("n", [4, 5])
def test_census_rows_match_reference(n):
    row = census_row(n)
    assert row.as_tuple() == REFERENCE_TABLE[n]
    cmp = compare_with_reference(row)
    assert all(entry["match"] for entry in cmp["rows"].values())
    assert row.checks == {"combinatorial_disagreements": 0, "normal_connected_unbalanced": 0}


def test_census_n6_balanced_rows():
    row = census_row(6)
    assert row.digraphs is None
    assert row.as_tuple()[1:7] == REFERENCE_TABLE[6][1:7]
    cmp = compare_with_reference(row)
    assert cmp["rows"]["digraphs"]["match"] is None
    assert row.checks["combinatorial_disagreements"] == 0
    # undirected row: every candidate universe is reported
    assert set(row.calibration["undirected"]) >= {"symmetric", "symmetric and eulerian"}
    assert row.calibration["undirected"]["symmetric"] == 156


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_row_invariants(n):
    row = census_row(n)
    assert row.normal <= min(row.normal_laplacian, row.normal_adjacency)
    assert row.normal_laplacian <= row.digraphs
    # undirected graphs: the symmetric candidate counts all graphs on n vertices
    assert row.calibration["undirected"]["symmetric"] == {2: 2, 3: 4, 4: 11, 5: 34}[n]


def test_row_fields_and_dict():
    row = census_row(3)
    assert set(ROW_FIELDS) <= set(row.to_dict())
    assert row.as_tuple() == tuple(row.to_dict()[f] for f in ROW_FIELDS)
    assert census_row(3) == row


def test_census_rejects():
    with pytest.raises(CensusError):
        census_row(7)


def test_class_flags(c3):
    f = class_flags(c3)
    assert f.balanced and f.euler_circuit and f.connected and f.regular
    assert f.normal_laplacian and f.normal_adjacency and f.combinatorial and not f.symmetric


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_normal_rows_agree_with_criterion(n):
    for code in balanced_class_codes(n):
        g = decode(int(code), n)
        assert normality_combinatorial(g) == is_normal_laplacian(g)
