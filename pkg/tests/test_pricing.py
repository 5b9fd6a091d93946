import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpdm.network import branches
from fpdm.pricing import (
    branch_prices,
    brute_force_optimal_price,
    chain_case_revenue,
    chain_sizes,
    expected_revenue_base,
    expected_revenue_fpdm,
    expected_revenue_opt,
    optimal_price,
    revenue_curve,
    revenue_point,
)
from fpdm.verification import partitions

import oracles
from conftest import chain, star

# Frozen from tests/oracles.py (branch claim-pattern enumeration and direct
# evaluation); see test_frozen_values_match_oracles.
E_BASE_3 = 0.472470393710577
E_OPT_10 = 0.715266765633429
E_FPDM_32 = 0.539362595198459
E_FPDM_532 = 0.677350392733129


def test_frozen_values_match_oracles():
    assert oracles.revenue_by_branch_patterns([3, 2]) == pytest.approx(E_FPDM_32, abs=1e-14)
    assert oracles.revenue_by_branch_patterns([5, 3, 2]) == pytest.approx(E_FPDM_532, abs=1e-14)
    assert 3 / 4 * oracles.price(3) == pytest.approx(E_BASE_3, abs=1e-14)
    assert 10 / 11 * oracles.price(10) == pytest.approx(E_OPT_10, abs=1e-14)


@pytest.mark.parametrize("x, expected", [(3, 0.6300), (1, 0.5), (5, 0.6988)])
def test_optimal_price(x, expected):
    assert optimal_price(x) == pytest.approx(expected, abs=5e-4)


def test_optimal_price_exact_forms():
    assert optimal_price(1) == 0.5
    assert optimal_price(3) == pytest.approx(0.25 ** (1 / 3), rel=1e-15)
    assert optimal_price(0) == pytest.approx(1 / math.e, rel=1e-15)


@pytest.mark.parametrize("fn", [optimal_price, expected_revenue_base, expected_revenue_opt])
def test_negative_counts_rejected(fn):
    with pytest.raises(ValueError):
        fn(-1)


def test_expected_revenue_base():
    assert expected_revenue_base(0) == 0.0
    assert expected_revenue_base(3) == pytest.approx(E_BASE_3, abs=1e-12)
    assert expected_revenue_base(2) == pytest.approx(2 / 3 * math.sqrt(1 / 3), rel=1e-14)


def test_expected_revenue_base_against_monte_carlo():
    p = optimal_price(3)
    est = oracles.mc_baseline(3, p, 1_000_000, seed=11)
    se = math.sqrt(E_BASE_3 * (p - E_BASE_3) / 1_000_000)  # Var = p*E - E^2
    assert abs(est - E_BASE_3) < 4 * se


def test_expected_revenue_opt():
    assert expected_revenue_opt(1) == 0.25
    assert expected_revenue_opt(10) == pytest.approx(E_OPT_10, abs=1e-12)
    assert expected_revenue_opt(0) == 0.0
    values = [expected_revenue_opt(k) for k in range(1, 2001)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] < 1.0
    assert expected_revenue_opt(10**9) == pytest.approx(1.0, abs=1e-7)


def test_branch_prices_example(example):
    prices = branch_prices(branches(example))
    assert prices == pytest.approx([0.699, 0.743, 0.760], abs=5e-4)


def test_branch_price_single_branch():
    assert branch_prices(branches(chain(4))) == [pytest.approx(0.36788, abs=1e-5)]


def test_branch_prices_equal_branches():
    from fpdm.network import build_tree

    t = build_tree([(0, 1), (0, 2), (1, 3), (2, 4)])
    p = branch_prices(branches(t))
    assert p[0] == p[1]


def test_expected_revenue_fpdm_values():
    assert expected_revenue_fpdm([3, 2]) == pytest.approx(E_FPDM_32, abs=1e-13)
    assert expected_revenue_fpdm([5, 3, 2]) == pytest.approx(E_FPDM_532, abs=1e-13)
    assert expected_revenue_fpdm([]) == 0.0
    for m in (1, 2, 7):
        assert expected_revenue_fpdm([m]) == pytest.approx((1 - math.exp(-m)) / math.e, rel=1e-14)


def test_expected_revenue_fpdm_on_whole_network(example):
    # exact enumeration over every buyer's claim decision, mechanism in the loop
    assert oracles.revenue_by_buyer_patterns(example) == pytest.approx(E_FPDM_532, abs=1e-12)


def test_expected_revenue_fpdm_order_free_and_validated():
    assert expected_revenue_fpdm([2, 3]) == expected_revenue_fpdm([3, 2])
    with pytest.raises(ValueError):
        expected_revenue_fpdm([2, 0])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=5))
def test_expected_revenue_fpdm_matches_branch_oracle(sizes):
    sizes = sorted(sizes, reverse=True)
    assert expected_revenue_fpdm(sizes) == pytest.approx(oracles.revenue_by_branch_patterns(sizes), abs=1e-12)


def test_chain_case_consistency():
    assert chain_case_revenue(5, 5) == pytest.approx(expected_revenue_fpdm([1] * 5), abs=1e-15)
    v = chain_case_revenue(2, 50)
    assert 0 < v < 1
    assert v == pytest.approx(expected_revenue_fpdm([49, 1]), abs=1e-12)


def test_chain_case_matches_general_formula_grid():
    worst = max(
        abs(chain_case_revenue(x, k) - expected_revenue_fpdm(chain_sizes(x, k)))
        for x in range(2, 11)
        for k in range(x, 101)
    )
    assert worst < 1e-12


def test_chain_case_errors():
    with pytest.raises(ValueError):
        chain_case_revenue(1, 5)
    with pytest.raises(ValueError):
        chain_case_revenue(5, 4)


def test_chain_case_limit():
    k = 10**6
    ratio = chain_case_revenue(5, k) / expected_revenue_opt(k)
    assert ratio == pytest.approx(0.2**0.25, abs=1e-3)
    assert math.isfinite(chain_case_revenue(5, 10**12))


def test_revenue_curve_chain_x5():
    points = revenue_curve(5, range(5, 201))
    assert [p.k for p in points] == list(range(5, 201))
    assert min(p.ratio for p in points) >= 0.5
    assert all(p.e_fpdm > p.e_base for p in points if p.k >= 6)
    first = points[0]
    assert first.e_fpdm == pytest.approx(expected_revenue_fpdm([1] * 5))
    assert first.e_opt == expected_revenue_opt(5)
    assert first.ratio == first.e_fpdm / first.e_opt


def test_revenue_curve_rejects_small_k():
    with pytest.raises(ValueError):
        revenue_curve(5, [4])


def test_revenue_point_invariants():
    for k in range(1, 11):
        for sizes in partitions(k):
            p = revenue_point(list(sizes))
            assert 0 <= p.e_base <= p.e_opt <= 1
            assert 0 < p.ratio <= 1


@pytest.mark.parametrize("x, step, expected, tol", [(1, 1e-4, 0.5, 1e-4), (3, 1e-4, 0.6300, 1e-4)])
def test_brute_force_examples(x, step, expected, tol):
    assert brute_force_optimal_price(x, step) == pytest.approx(expected, abs=tol + 5e-5)


def test_brute_force_x20():
    assert abs(brute_force_optimal_price(20, 1e-5) - optimal_price(20)) <= 1e-5


def test_brute_force_matches_pure_python_grid():
    for x in (1, 2, 7):
        assert brute_force_optimal_price(x, 1e-3) == pytest.approx(oracles.grid_argmax_price(x, 1e-3), abs=1e-12)


def test_brute_force_bad_step():
    with pytest.raises(ValueError):
        brute_force_optimal_price(3, 0.02)
    with pytest.raises(ValueError):
        brute_force_optimal_price(3, 0)


def test_brute_force_agreement_up_to_50():
    step = 1e-4
    for x in range(1, 51):
        assert abs(brute_force_optimal_price(x, step) - optimal_price(x)) <= step


def test_monotonicity_up_to_1e4():
    xs = np.arange(1, 10_001)
    prices = [optimal_price(int(x)) for x in xs]
    revenues = [expected_revenue_base(int(x)) for x in xs]
    assert all(b > a for a, b in zip(prices, prices[1:]))
    assert all(b > a for a, b in zip(revenues, revenues[1:]))


def test_prices_and_revenues_in_range():
    for x in range(0, 300):
        assert 0 < optimal_price(x) < 1
        assert 0 <= expected_revenue_base(x) < 1
    for k in range(1, 13):
        for sizes in partitions(k):
            assert 0 <= expected_revenue_fpdm(sizes) < 1


def test_dominance_holds_exactly_when_information_spreads():
    """E_FPDM > E_base for every size vector with some branch beyond one buyer.

    With only singleton branches the mechanism posts (1/x)^(1/(x-1)) instead
    of the neighbours' optimum, so it falls short of E_base; that is the
    complete list of exceptions for k <= 12.
    """
    failing = []
    for k in range(1, 13):
        for sizes in partitions(k):
            if not expected_revenue_fpdm(sizes) > expected_revenue_base(len(sizes)):
                failing.append(sizes)
    assert failing == [(1,) * k for k in range(1, 13)]


def test_star_base_revenue():
    assert expected_revenue_base(len(star(3).seller_children)) == pytest.approx(E_BASE_3)
