"""Closed-form posted prices and expected revenues under U[0, 1] valuations.

All exponentials are evaluated in log space, so very large buyer counts
underflow cleanly to 0 instead of producing NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .network import BranchDecomposition


def _check_count(x: int, name: str = "x") -> int:
    if isinstance(x, bool) or int(x) != x:
        raise ValueError(f"{name} must be an integer, got {x!r}")
    x = int(x)
    if x < 0:
        raise ValueError(f"{name} must be non-negative, got {x}")
    return x


def log_optimal_price(x: int) -> float:
    """``log`` of :func:`optimal_price`; equals -1 at ``x = 0``."""
    x = _check_count(x)
    if x == 0:
        return -1.0
    return -math.log1p(x) / x


def optimal_price(x: int) -> float:
    """Revenue-maximising posted price for ``x`` buyers, ``(1/(1+x))^(1/x)``.

    ``x = 0`` returns the limit ``1/e``.
    """
    return math.exp(log_optimal_price(x))


def expected_revenue_base(x: int) -> float:
    """Expected revenue of the optimal posted price sold to ``x`` buyers."""
    x = _check_count(x)
    if x == 0:
        return 0.0
    return x / (1 + x) * optimal_price(x)


def expected_revenue_opt(k: int) -> float:
    """Benchmark revenue when all ``k`` buyers are seller neighbours."""
    return expected_revenue_base(_check_count(k, "k"))


def branch_prices(decomp: BranchDecomposition) -> list[float]:
    return [optimal_price(b.outside) for b in decomp]


def expected_revenue_fpdm(sizes: Iterable[int]) -> float:
    """Expected gross revenue of the diffusion mechanism for branch ``sizes``.

    Branches are visited in descending size order; the sum runs over the
    probability that branch ``i`` is the first one holding a claimer.
    """
    sizes = sorted((_check_count(s, "branch size") for s in sizes), reverse=True)
    if not sizes:
        return 0.0
    if sizes[-1] == 0:
        raise ValueError("branch sizes must be positive")
    k = sum(sizes)
    total = 0.0
    log_unsold = 0.0  # log P(no claimer in earlier branches)
    for size in sizes:
        lp = log_optimal_price(k - size)
        total += math.exp(lp + log_unsold) * -math.expm1(size * lp)
        log_unsold += size * lp
    return total


def chain_case_revenue(x: int, k: int) -> float:
    """Revenue when only one of ``x`` seller neighbours has descendants.

    The big branch holds ``k - x + 1`` buyers, the others one each.
    """
    x = _check_count(x)
    k = _check_count(k, "k")
    if x < 2:
        raise ValueError(f"chain case needs x >= 2, got {x}")
    if k < x:
        raise ValueError(f"chain case needs k >= x, got k={k}, x={x}")
    log_x, log_k = math.log(x), math.log(k)
    log_miss_big = -log_x * (k - x + 1) / (x - 1)
    first = -math.expm1(log_miss_big) * math.exp(-log_x / (x - 1))
    second = (
        math.exp(log_miss_big)
        * -math.expm1(-log_k * (x - 1) / (k - 1))
        * math.exp(-log_k / (k - 1))
    )
    return first + second


def chain_sizes(x: int, k: int) -> list[int]:
    return [k - x + 1] + [1] * (x - 1)


@dataclass(frozen=True)
class RevenuePoint:
    k: int
    x: int
    e_fpdm: float
    e_base: float
    e_opt: float

    @property
    def ratio(self) -> float:
        return self.e_fpdm / self.e_opt if self.e_opt > 0 else float("nan")


def revenue_point(sizes: Sequence[int]) -> RevenuePoint:
    k, x = sum(sizes), len(sizes)
    return RevenuePoint(k, x, expected_revenue_fpdm(sizes), expected_revenue_base(x), expected_revenue_opt(k))


def revenue_curve(x: int, k_values: Iterable[int]) -> list[RevenuePoint]:
    """Chain-case sweep: one point per total buyer count ``k >= x``."""
    x = _check_count(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    out = []
    for k in k_values:
        k = _check_count(k, "k")
        if k < x:
            raise ValueError(f"k={k} is below x={x}")
        out.append(revenue_point(chain_sizes(x, k)))
    return out


def brute_force_optimal_price(x: int, step: float = 1e-4) -> float:
    """Grid argmax of ``(1 - p**x) * p`` over ``{step, 2*step, ...} < 1``.

    Ties resolve to the smaller price.
    """
    x = _check_count(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    if not (0 < step <= 0.01):
        raise ValueError(f"grid step must lie in (0, 0.01], got {step}")
    n = math.ceil(1 / step - 1e-9)
    grid = np.arange(1, n) * step
    grid = grid[grid < 1]
    revenue = (1 - grid**x) * grid
    return float(grid[int(np.argmax(revenue))])
