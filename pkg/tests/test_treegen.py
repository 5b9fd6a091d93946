import pytest

from fpdm.treegen import enumerate_rooted_trees, level_sequences, rooted_trees

import oracles

KNOWN_COUNTS = [1, 2, 4, 9, 20, 48, 115, 286, 719]


@pytest.mark.parametrize("n", range(1, 10))
def test_counts(n):
    assert sum(1 for _ in rooted_trees(n)) == KNOWN_COUNTS[n - 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_matches_brute_force_shapes(n):
    shapes = [oracles.ahu(t) for t in rooted_trees(n)]
    assert len(set(shapes)) == len(shapes)
    assert set(shapes) == oracles.distinct_shapes(n)


def test_canonical_forms_unique_up_to_nine():
    forms = [t.canonical_form for t in enumerate_rooted_trees(9)]
    assert len(forms) == sum(KNOWN_COUNTS)
    assert len(set(forms)) == len(forms)


def test_small_cases():
    assert [t.edges for t in enumerate_rooted_trees(1)] == [((0, 1),)]
    assert sum(1 for _ in enumerate_rooted_trees(5)) == 1 + 2 + 4 + 9 + 20
    three = list(rooted_trees(3))
    assert len(three) == 4
    # chain and star are both present
    assert any(t.edges == ((0, 1), (1, 2), (2, 3)) for t in three)
    assert any(t.edges == ((0, 1), (0, 2), (0, 3)) for t in three)


def test_breadth_first_labels():
    for t in enumerate_rooted_trees(6):
        order = [0]
        for node in order:
            order.extend(t.children[node])
        assert order == list(range(t.k + 1))


def test_order_is_deterministic():
    a = [t.edges for t in enumerate_rooted_trees(7)]
    b = [t.edges for t in enumerate_rooted_trees(7)]
    assert a == b
    sizes = [len(e) for e in a]
    assert sizes == sorted(sizes)


def test_level_sequences_start_with_path():
    first = next(level_sequences(5))
    assert first == [0, 1, 2, 3, 4]
    assert list(level_sequences(0)) == []


@pytest.mark.parametrize("bad", [0, 10, -1, 2.5, True])
def test_range_errors(bad):
    with pytest.raises(ValueError):
        list(enumerate_rooted_trees(bad))
