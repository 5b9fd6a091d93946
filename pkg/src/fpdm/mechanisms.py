"""Posted-price mechanisms: the neighbours-only baseline and the diffusion one.

Payments follow the sign convention ``p > 0`` buyer pays, ``p < 0`` buyer is
paid. Both runners return an :class:`Outcome` under seeded tie-breaking and an
:class:`OutcomeDistribution` (every tied winner, uniform weights) under
``tie_mode="expect"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .network import (
    SELLER,
    ActionProfile,
    InfeasibleProfileError,
    SocialTree,
    branches,
    effective_tree,
    path_to,
    validate_profile,
)
from .pricing import branch_prices, optimal_price

REWARD_MODES = ("literal", "clamped")
THRESHOLDS = ("strict", "weak")
TIE_MODES = ("seeded", "expect")


@dataclass(frozen=True)
class MechanismConfig:
    """Knobs shared by both mechanisms.

    ``threshold=None`` picks each mechanism's own default: strict (``v > p``)
    for the baseline, weak (``v >= p``) for the diffusion mechanism.
    """

    alpha: float = 0.1
    reward_mode: str = "clamped"
    threshold: str | None = None
    tie_mode: str = "seeded"

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.reward_mode not in REWARD_MODES:
            raise ValueError(f"reward_mode must be one of {REWARD_MODES}, got {self.reward_mode!r}")
        if self.threshold is not None and self.threshold not in THRESHOLDS:
            raise ValueError(f"threshold must be one of {THRESHOLDS}, got {self.threshold!r}")
        if self.tie_mode not in TIE_MODES:
            raise ValueError(f"tie_mode must be one of {TIE_MODES}, got {self.tie_mode!r}")

    def claims(self, value: float, price: float, default: str) -> bool:
        if (self.threshold or default) == "weak":
            return value >= price
        return value > price


@dataclass(frozen=True)
class BranchVisit:
    root: int | None
    price: float
    claimers: tuple[int, ...]


@dataclass(frozen=True)
class AllocationTrace:
    """Why the winner was chosen.

    ``shallowest`` are the claimers of minimal depth in the winning branch,
    ``most_children`` those among them with the most reported children, and
    ``tied`` the final candidates handed to the tie-break.
    """

    visits: tuple[BranchVisit, ...] = ()
    shallowest: tuple[int, ...] = ()
    most_children: tuple[int, ...] = ()
    tied: tuple[int, ...] = ()
    tie_break: str = ""

    def lines(self) -> list[str]:
        out = []
        for v in self.visits:
            label = "neighbours" if v.root is None else f"branch {v.root}"
            out.append(f"visit {label} price={v.price:.6g} claimers={list(v.claimers)}")
        if self.tied:
            out.append(f"min depth -> {list(self.shallowest)}")
            out.append(f"max reported children -> {list(self.most_children)}")
            out.append(f"tie-break ({self.tie_break}) among {list(self.tied)}")
        else:
            out.append("no claimers: seller keeps the item")
        return out


@dataclass(frozen=True)
class Outcome:
    winner: int | None
    branch: int | None
    price: float | None
    payments: Mapping[int, float]
    p_base: float | None = None
    trace: AllocationTrace = field(default_factory=AllocationTrace)

    @property
    def sold(self) -> bool:
        return self.winner is not None

    @property
    def gross_revenue(self) -> float:
        return self.payments[self.winner] if self.winner is not None else 0.0

    @property
    def net_revenue(self) -> float:
        return float(sum(self.payments[b] for b in sorted(self.payments)))

    def allocation(self, buyer: int) -> int:
        return 1 if buyer == self.winner else 0


@dataclass(frozen=True)
class OutcomeDistribution:
    """Uniform lottery over tied winners."""

    outcomes: tuple[Outcome, ...]

    @property
    def probabilities(self) -> tuple[float, ...]:
        n = len(self.outcomes)
        return tuple(1.0 / n for _ in range(n))

    def __iter__(self):
        return iter(zip(self.probabilities, self.outcomes))

    def __len__(self) -> int:
        return len(self.outcomes)

    @property
    def winners(self) -> tuple[int | None, ...]:
        return tuple(o.winner for o in self.outcomes)

    def expected_gross_revenue(self) -> float:
        return sum(p * o.gross_revenue for p, o in self)

    def outcome_for(self, winner: int | None) -> Outcome:
        for o in self.outcomes:
            if o.winner == winner:
                return o
        raise KeyError(f"no outcome with winner {winner}")


def _check_value(buyer: int, v: float) -> float:
    v = float(v)
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"valuation of buyer {buyer} must lie in [0, 1], got {v}")
    return v


def _resolve_ties(
    tied: Sequence[int],
    config: MechanismConfig,
    seed,
    build,
) -> Outcome | OutcomeDistribution:
    if config.tie_mode == "expect":
        return OutcomeDistribution(tuple(build(w, "expect") for w in tied))
    if len(tied) == 1:
        return build(tied[0], "none")
    rng = np.random.default_rng(seed)
    return build(tied[int(rng.integers(len(tied)))], "seeded")


def run_baseline(
    valuations: Mapping[int, float],
    price: float,
    config: MechanismConfig | None = None,
    seed=None,
) -> Outcome | OutcomeDistribution:
    """Posted price ``price`` offered to the seller's neighbours only.

    ``valuations`` maps each neighbour id to her value.
    """
    config = config or MechanismConfig()
    price = float(price)
    if not (0.0 <= price <= 1.0):
        raise ValueError(f"price must lie in [0, 1], got {price}")
    values = {b: _check_value(b, v) for b, v in sorted(valuations.items())}
    claimers = tuple(b for b, v in values.items() if config.claims(v, price, "strict"))
    visit = BranchVisit(None, price, claimers)

    if not claimers:
        return _unsold(values, price, None, AllocationTrace((visit,)), config)

    def build(w: int, how: str) -> Outcome:
        pay = {b: 0.0 for b in values}
        pay[w] = price
        trace = AllocationTrace((visit,), claimers, claimers, claimers, how)
        return Outcome(w, None, price, pay, None, trace)

    return _resolve_ties(claimers, config, seed, build)


def _unsold(buyers, price, p_base, trace, config):
    out = Outcome(None, None, None, {b: 0.0 for b in buyers}, p_base, trace)
    return OutcomeDistribution((out,)) if config.tie_mode == "expect" else out


def path_payment(p_base: float, price: float, alpha: float, depth: int, mode: str) -> float:
    """Payment of a path buyer at ``depth`` when the winner paid ``price``.

    ``literal`` evaluates ``(p_base - price) * alpha * (1/2)**depth`` as is, so
    it is a charge whenever ``price < p_base``; ``clamped`` never charges.
    """
    scale = alpha * 0.5**depth
    if mode == "literal":
        return (p_base - price) * scale
    if price > p_base:
        return -(price - p_base) * scale
    return 0.0


def fpdm_payments(
    tree: SocialTree,
    effective: SocialTree,
    winner: int,
    price: float,
    p_base: float,
    config: MechanismConfig,
) -> dict[int, float]:
    pay = {b: 0.0 for b in tree.buyers}
    pay[winner] = price
    for l in path_to(effective, winner):
        pay[l] = path_payment(p_base, price, config.alpha, effective.depths[l], config.reward_mode)
    return pay


def run_fpdm(
    tree: SocialTree,
    actions: ActionProfile | None,
    valuations: Mapping[int, float],
    config: MechanismConfig | None = None,
    seed=None,
) -> Outcome | OutcomeDistribution:
    """Run the fixed-price diffusion mechanism on one instance.

    Only buyers reached under ``actions`` need a valuation. ``p_base`` is the
    optimal price for the seller's true neighbour count.

    Raises
    ------
    InfeasibleProfileError
        If ``actions`` is not a valid profile on ``tree``.
    ValueError
        If a reached buyer has no valuation or one outside ``[0, 1]``.
    """
    config = config or MechanismConfig()
    if actions is not None:
        validate_profile(tree, actions, allow_opt_out=True)
    eff = effective_tree(tree, actions)
    values = {}
    for b in eff.buyers:
        if b not in valuations:
            raise ValueError(f"missing valuation for reachable buyer {b}")
        values[b] = _check_value(b, valuations[b])

    p_base = optimal_price(len(tree.seller_children))
    decomp = branches(eff)
    visits = []
    for branch, price in zip(decomp, branch_prices(decomp)):
        claimers = tuple(sorted(b for b in branch.members if config.claims(values[b], price, "weak")))
        visits.append(BranchVisit(branch.root, price, claimers))
        if not claimers:
            continue
        d_min = min(eff.depths[b] for b in claimers)
        shallow = tuple(b for b in claimers if eff.depths[b] == d_min)
        c_max = max(len(eff.children[b]) for b in shallow)
        most = tuple(b for b in shallow if len(eff.children[b]) == c_max)

        def build(w: int, how: str, price=price, root=branch.root, shallow=shallow, most=most) -> Outcome:
            trace = AllocationTrace(tuple(visits), shallow, most, most, how)
            pay = fpdm_payments(tree, eff, w, price, p_base, config)
            return Outcome(w, root, price, pay, p_base, trace)

        return _resolve_ties(most, config, seed, build)
    return _unsold(tree.buyers, None, p_base, AllocationTrace(tuple(visits)), config)


def utilities(outcome: Outcome, valuations: Mapping[int, float]) -> dict[int, float]:
    """``u_i = pi_i * v_i - p_i`` for every buyer listed in the outcome."""
    out = {}
    for b in sorted(outcome.payments):
        if b == outcome.winner:
            out[b] = float(valuations[b]) - outcome.payments[b]
        else:
            out[b] = 0.0 - outcome.payments[b]
    return out


def expected_utilities(dist: OutcomeDistribution | Outcome, valuations: Mapping[int, float]) -> dict[int, float]:
    if isinstance(dist, Outcome):
        return utilities(dist, valuations)
    total: dict[int, float] = {}
    for prob, o in dist:
        for b, u in utilities(o, valuations).items():
            total[b] = total.get(b, 0.0) + prob * u
    return total


def as_distribution(result: Outcome | OutcomeDistribution) -> OutcomeDistribution:
    return result if isinstance(result, OutcomeDistribution) else OutcomeDistribution((result,))


__all__ = [
    "SELLER",
    "AllocationTrace",
    "BranchVisit",
    "InfeasibleProfileError",
    "MechanismConfig",
    "Outcome",
    "OutcomeDistribution",
    "as_distribution",
    "expected_utilities",
    "fpdm_payments",
    "path_payment",
    "run_baseline",
    "run_fpdm",
    "utilities",
]
