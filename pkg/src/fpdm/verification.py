"""Empirical checks of the diffusion mechanism's guarantees.

Exhaustive IR/IC checks rely on one fact about the mechanism: for a fixed
network and action profile, the outcome depends on the valuations only
through the set of buyers who claim. :class:`_PatternTable` runs
:func:`~fpdm.mechanisms.run_fpdm` once per claim pattern and the grid sweep
then looks outcomes up in bulk. Every recorded violation is recomputed
through the scalar mechanism, so it replays exactly.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

import numpy as np

from .estimators import DiffusionMechanism, FixedPriceMechanism
from .mechanisms import (
    MechanismConfig,
    OutcomeDistribution,
    as_distribution,
    expected_utilities,
    run_fpdm,
    utilities,
)
from .network import (
    SELLER,
    ActionProfile,
    SocialTree,
    branches,
    deviations,
    effective_tree,
    path_to,
)
from .pricing import branch_prices, expected_revenue_base, expected_revenue_fpdm
from .treegen import enumerate_rooted_trees

# Expected utilities are sums of tie-weighted terms; differences below this
# are rounding, not incentives.
IC_TOLERANCE = 1e-12
MAX_FULL_SCOPE_BUYERS = 6
MAX_GRID_PROFILES = 20_000_000


class ScopeError(ValueError):
    """Raised instead of silently truncating an oversized check."""


# --------------------------------------------------------------------------
# valuation sources


@dataclass(frozen=True)
class ValuationGrid:
    """Offset grid ``{step/2, 3*step/2, ...}`` applied to every buyer."""

    step: float = 0.1

    def __post_init__(self):
        if not (0 < self.step <= 0.5):
            raise ValueError(f"grid step must lie in (0, 0.5], got {self.step}")

    @property
    def values(self) -> np.ndarray:
        n = int(math.floor(1 / self.step + 1e-9))
        return np.array([round((i + 0.5) * self.step, 12) for i in range(n)])

    def size(self, k: int) -> int:
        return len(self.values) ** k

    def profiles(self, k: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        vals = self.values
        g = len(vals)
        total = g**k
        if total > MAX_GRID_PROFILES:
            raise ScopeError(f"grid of {total} profiles exceeds the limit {MAX_GRID_PROFILES}")
        for start in range(0, total, chunk):
            rem = np.arange(start, min(total, start + chunk))
            digits = np.empty((len(rem), k), dtype=np.int64)
            for col in range(k - 1, -1, -1):
                digits[:, col] = rem % g
                rem = rem // g
            yield vals[digits]

    def describe(self) -> str:
        return f"grid(step={self.step})"


@dataclass(frozen=True)
class ValuationSample:
    """``n_profiles`` i.i.d. U[0, 1] profiles drawn from ``seed``."""

    n_profiles: int
    seed: int = 0

    def size(self, k: int) -> int:
        return self.n_profiles

    def profiles(self, k: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
        rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        for start in range(0, self.n_profiles, chunk):
            yield rng.random((min(chunk, self.n_profiles - start), k))

    def describe(self) -> str:
        return f"sample(n={self.n_profiles}, seed={self.seed})"


# --------------------------------------------------------------------------
# reports


def _action_key(action) -> tuple:
    if action is None:
        return (1, ())
    return (0, tuple(sorted(action)))


@dataclass(frozen=True)
class Violation:
    """One replayable counterexample.

    For IR, ``winner`` names the tie outcome in which ``buyer`` loses money.
    For IC, ``deviant_action`` is the report that beats truthful diffusion
    and ``others`` the reports of everyone else (``None`` means truthful).
    """

    prop: str
    tree: SocialTree
    valuations: tuple[tuple[int, float], ...]
    buyer: int
    config: MechanismConfig
    truthful_utility: float
    deviant_utility: float | None = None
    deviator: int | None = None
    deviant_action: frozenset[int] | None = None
    winner: int | None = None
    others: ActionProfile | None = None

    def sort_key(self) -> tuple:
        return (
            self.prop,
            self.tree.k,
            self.tree.edges,
            (self.config.alpha, self.config.reward_mode, self.config.threshold or ""),
            self.valuations,
            self.buyer,
            -1 if self.deviator is None else self.deviator,
            _action_key(self.deviant_action) if self.prop == "IC" else (),
            self.others.key() if self.others is not None else (),
            -1 if self.winner is None else self.winner,
        )

    def replay(self) -> tuple[float, float | None]:
        """Recompute ``(truthful_utility, deviant_utility)`` from scratch."""
        vals = dict(self.valuations)
        cfg = replace(self.config, tie_mode="expect")
        base = self.others or ActionProfile.truthful(self.tree)
        truthful = base.replace(self.buyer, self.tree.children[self.buyer])
        dist = as_distribution(run_fpdm(self.tree, truthful, vals, cfg))
        if self.prop == "IR":
            return utilities(dist.outcome_for(self.winner), vals)[self.buyer], None
        u_t = expected_utilities(dist, vals)[self.buyer]
        deviant = base.replace(self.buyer, self.deviant_action)
        dev = as_distribution(run_fpdm(self.tree, deviant, vals, cfg))
        return u_t, expected_utilities(dev, vals)[self.buyer]

    def replays(self) -> bool:
        return self.replay() == (self.truthful_utility, self.deviant_utility)

    def describe(self) -> str:
        vals = " ".join(f"{b}:{v!r}" for b, v in self.valuations)
        head = f"{self.prop} tree={list(self.tree.edges)} buyer={self.buyer} v=[{vals}]"
        cfg = f"alpha={self.config.alpha!r} mode={self.config.reward_mode}"
        if self.prop == "IR":
            return f"{head} winner={self.winner} u={self.truthful_utility!r} {cfg}"
        action = "nil" if self.deviant_action is None else sorted(self.deviant_action)
        others = "" if self.others is None else f" others={_format_profile(self.others)}"
        return (
            f"{head} deviation={action}{others} u_truthful={self.truthful_utility!r} "
            f"u_deviant={self.deviant_utility!r} {cfg}"
        )


def _format_profile(profile: ActionProfile) -> str:
    parts = []
    for b, r in profile.reports:
        parts.append(f"{b}->" + ("nil" if r is None else ",".join(map(str, sorted(r)))))
    return "[" + " ".join(parts) + "]"


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of an IR or IC check.

    ``violations`` holds at most ``max_records`` entries per checked
    (tree, config) pair; ``violation_count`` counts all of them.
    ``invariant_failures`` lists broken hard invariants (always a bug).
    """

    prop: str
    instances: int
    violations: tuple[Violation, ...] = ()
    violation_count: int = 0
    invariant_failures: tuple[str, ...] = ()
    trees: int = 0
    deviations: int = 0

    @property
    def verdict(self) -> str:
        if self.invariant_failures:
            return "fail"
        return "findings" if self.violation_count else "pass"

    @staticmethod
    def merge(prop: str, reports: Iterable["PropertyReport"]) -> "PropertyReport":
        reports = list(reports)
        return PropertyReport(
            prop,
            sum(r.instances for r in reports),
            tuple(sorted((v for r in reports for v in r.violations), key=Violation.sort_key)),
            sum(r.violation_count for r in reports),
            tuple(sorted(f for r in reports for f in r.invariant_failures)),
            sum(r.trees for r in reports),
            sum(r.deviations for r in reports),
        )

    def summary_lines(self) -> list[str]:
        return [
            f"property: {self.prop}",
            f"checks: {self.trees}",
            f"deviations: {self.deviations}",
            f"instances: {self.instances}",
            f"violations: {self.violation_count}",
            f"recorded: {len(self.violations)}",
            f"invariant_failures: {len(self.invariant_failures)}",
            f"verdict: {self.verdict}",
        ]


# --------------------------------------------------------------------------
# claim-pattern tables


class _PatternTable:
    """Outcome lottery for every claim pattern under one action profile."""

    def __init__(self, tree: SocialTree, profile: ActionProfile, config: MechanismConfig):
        self.tree = tree
        self.profile = profile
        self.config = replace(config, tie_mode="expect")
        self.effective = eff = effective_tree(tree, profile)
        self.decomposition = decomp = branches(eff)
        price_of = {}
        for branch, p in zip(decomp, branch_prices(decomp)):
            for b in branch.members:
                price_of[b] = p
        self.branch_price = {b.root: p for b, p in zip(decomp, branch_prices(decomp))}
        column = {b: i for i, b in enumerate(tree.buyers)}
        self.active = sorted(eff.buyers)
        self.columns = np.array([column[b] for b in self.active], dtype=np.int64)
        self.prices = np.array([price_of[b] for b in self.active])
        self.weak = (self.config.threshold or "weak") == "weak"
        self.bits = np.left_shift(1, np.arange(len(self.active), dtype=np.int64))

        k = tree.k
        self.lotteries: list[OutcomeDistribution] = []
        for mask in range(1 << len(self.active)):
            vals = {b: 1.0 if mask >> j & 1 else 0.0 for j, b in enumerate(self.active)}
            self.lotteries.append(as_distribution(run_fpdm(tree, profile, vals, self.config)))
        width = max(len(d) for d in self.lotteries)
        n = len(self.lotteries)
        self.alloc = np.zeros((n, width, k))
        self.pay = np.zeros((n, width, k))
        self.exp_alloc = np.zeros((n, k))
        self.exp_pay = np.zeros((n, k))
        # padded slots repeat the last outcome and must not be counted twice
        self.valid = np.zeros((n, width), dtype=bool)
        for m, dist in enumerate(self.lotteries):
            self.valid[m, : len(dist)] = True
            for t in range(width):
                o = dist.outcomes[min(t, len(dist) - 1)]
                self.pay[m, t] = [o.payments[b] for b in tree.buyers]
                if o.winner is not None:
                    self.alloc[m, t, column[o.winner]] = 1.0
            for t, (prob, o) in enumerate(dist):
                self.exp_pay[m] += prob * self.pay[m, t]
                if o.winner is not None:
                    self.exp_alloc[m, column[o.winner]] += prob

    def masks(self, V: np.ndarray) -> np.ndarray:
        if not len(self.active):
            return np.zeros(len(V), dtype=np.int64)
        values = V[:, self.columns]
        claims = values >= self.prices if self.weak else values > self.prices
        return claims.astype(np.int64) @ self.bits


class _TableCache:
    def __init__(self, tree: SocialTree, config: MechanismConfig):
        self.tree, self.config = tree, config
        self._tables: dict[tuple, _PatternTable] = {}

    def get(self, profile: ActionProfile) -> _PatternTable:
        key = effective_tree(self.tree, profile).edges
        if key not in self._tables:
            self._tables[key] = _PatternTable(self.tree, profile, self.config)
        return self._tables[key]


def _valuation_tuple(tree: SocialTree, row: np.ndarray) -> tuple[tuple[int, float], ...]:
    return tuple((b, float(v)) for b, v in zip(tree.buyers, row))


# --------------------------------------------------------------------------
# individual rationality


def check_ir(
    tree: SocialTree,
    source: ValuationGrid | ValuationSample = ValuationGrid(),
    config: MechanismConfig | None = None,
    *,
    max_records: int = 20,
) -> PropertyReport:
    """Check ``u_i >= 0`` for every buyer, tie outcome and valuation profile.

    All buyers diffuse truthfully.
    """
    config = config or MechanismConfig()
    table = _PatternTable(tree, ActionProfile.truthful(tree), config)
    records: list[Violation] = []
    count = instances = 0
    for V in source.profiles(tree.k):
        instances += len(V)
        masks = table.masks(V)
        U = table.alloc[masks] * V[:, None, :] - table.pay[masks]
        bad = (U < 0) & table.valid[masks][:, :, None]
        if not bad.any():
            continue
        rows, ts, cols = np.nonzero(bad)
        count += len(rows)
        for r, t, c in zip(rows, ts, cols):
            if len(records) >= max_records:
                break
            vals = _valuation_tuple(tree, V[r])
            outcome = table.lotteries[masks[r]].outcomes[t]
            buyer = tree.buyers[c]
            u = utilities(outcome, dict(vals))[buyer]
            if u < 0:
                records.append(Violation("IR", tree, vals, buyer, config, u, winner=outcome.winner))
    return PropertyReport("IR", instances, tuple(sorted(records, key=Violation.sort_key)), count, trees=1)


# --------------------------------------------------------------------------
# incentive compatibility


def _structural_failures(tree: SocialTree, table: _PatternTable) -> list[str]:
    """Off-path buyers must have exactly zero utility in every outcome."""
    out = []
    eff = table.effective
    for dist in table.lotteries:
        for o in dist.outcomes:
            on_path = set() if o.winner is None else set(path_to(eff, o.winner)) | {o.winner}
            for b, p in o.payments.items():
                if b not in on_path and p != 0.0:
                    out.append(
                        f"(c) tree={list(tree.edges)} profile={_format_profile(table.profile)} "
                        f"winner={o.winner} buyer {b} off the winner path pays {p!r}"
                    )
    return out


def _compare_deviation(
    tree: SocialTree,
    buyer: int,
    action,
    truth: _PatternTable,
    dev: _PatternTable,
    source,
    config: MechanismConfig,
    others: ActionProfile | None,
    max_records: int,
    records: list[Violation],
) -> tuple[int, int, list[str]]:
    failures: list[str] = []
    col = tree.buyers.index(buyer)
    eff_t = truth.effective

    # (a) a deviation inside branch j leaves branch j's price untouched
    root = _branch_root(eff_t, buyer)
    if root in dev.branch_price and dev.branch_price[root] != truth.branch_price[root]:
        failures.append(
            f"(a) tree={list(tree.edges)} buyer={buyer} deviation={_fmt_action(action)} "
            f"moves branch {root} price {truth.branch_price[root]!r} -> {dev.branch_price[root]!r}"
        )

    count = instances = 0
    checked_pairs: set[tuple[int, int]] = set()
    for V in source.profiles(tree.k):
        instances += len(V)
        mt, md = truth.masks(V), dev.masks(V)
        v = V[:, col]
        u_t = truth.exp_alloc[mt, col] * v - truth.exp_pay[mt, col]
        u_d = dev.exp_alloc[md, col] * v - dev.exp_pay[md, col]
        profitable = np.nonzero(u_d - u_t > IC_TOLERANCE)[0]
        for r in profitable:
            vals = dict(_valuation_tuple(tree, V[r]))
            # scalar recomputation is what gets recorded
            st = expected_utilities(truth.lotteries[mt[r]], vals)[buyer]
            sd = expected_utilities(dev.lotteries[md[r]], vals)[buyer]
            if sd - st > IC_TOLERANCE:
                count += 1
                if len(records) < max_records:
                    records.append(
                        Violation("IC", tree, _valuation_tuple(tree, V[r]), buyer, config, st, sd,
                                  deviator=buyer, deviant_action=action, others=others)
                    )

        # (b) if the winner survives the deviation, the deviator's payment is unchanged
        pairs = np.unique(np.stack([mt, md], axis=1), axis=0)
        for a, b in pairs:
            if (a, b) in checked_pairs:
                continue
            checked_pairs.add((a, b))
            lt, ld = truth.lotteries[a], dev.lotteries[b]
            for w in set(lt.winners) & set(ld.winners):
                if w is None:
                    continue
                if buyer != w and buyer not in path_to(eff_t, w):
                    continue
                pt = lt.outcome_for(w).payments[buyer]
                pd = ld.outcome_for(w).payments[buyer]
                if pt != pd:
                    failures.append(
                        f"(b) tree={list(tree.edges)} buyer={buyer} deviation={_fmt_action(action)} "
                        f"winner={w} payment {pt!r} -> {pd!r}"
                    )
    return count, instances, failures


def _branch_root(eff: SocialTree, buyer: int) -> int:
    node = buyer
    while eff.parent[node] != SELLER:
        node = eff.parent[node]
    return node


def _fmt_action(action) -> str:
    return "nil" if action is None else str(sorted(action))


def check_ic(
    tree: SocialTree,
    source: ValuationGrid | ValuationSample = ValuationGrid(),
    config: MechanismConfig | None = None,
    scope: str = "unilateral",
    *,
    allow_opt_out: bool = False,
    max_records: int = 20,
) -> PropertyReport:
    """Search for diffusion reports that beat truthful diffusion.

    Utilities are expectations over the uniform final tie-break. With
    ``scope="unilateral"`` everybody else diffuses truthfully; ``"full"``
    also ranges over every report plan of the other buyers and is limited to
    small trees. Profitable deviations are findings; the hard sub-invariants
    (branch price, path payment and off-path invariance) are reported in
    ``invariant_failures``.

    Raises
    ------
    ScopeError
        If ``scope="full"`` is requested on more than 6 buyers.
    """
    config = config or MechanismConfig()
    if scope not in ("unilateral", "full"):
        raise ValueError(f"scope must be 'unilateral' or 'full', got {scope!r}")
    if scope == "full" and tree.k > MAX_FULL_SCOPE_BUYERS:
        raise ScopeError(f"full-scope IC is limited to {MAX_FULL_SCOPE_BUYERS} buyers, tree has {tree.k}")

    cache = _TableCache(tree, config)
    truthful = ActionProfile.truthful(tree)
    records: list[Violation] = []
    failures: list[str] = []
    count = instances = n_dev = 0
    seen_tables: set[int] = set()

    for buyer in tree.buyers:
        for base, others in _contexts(tree, buyer, scope, truthful):
            truth = cache.get(base)
            for action in deviations(tree, buyer, allow_opt_out=allow_opt_out)[1:]:
                dev = cache.get(base.replace(buyer, action))
                for t in (truth, dev):
                    if id(t) not in seen_tables:
                        seen_tables.add(id(t))
                        failures.extend(_structural_failures(tree, t))
                n_dev += 1
                c, i, f = _compare_deviation(
                    tree, buyer, action, truth, dev, source, config, others, max_records, records
                )
                count += c
                instances += i
                failures.extend(f)
    return PropertyReport(
        "IC",
        instances,
        tuple(sorted(records, key=Violation.sort_key)),
        count,
        tuple(failures),
        trees=1,
        deviations=n_dev,
    )


def _contexts(tree, buyer, scope, truthful) -> Iterator[tuple[ActionProfile, ActionProfile | None]]:
    """Profiles of the other buyers against which ``buyer`` is tested."""
    if scope == "unilateral":
        yield truthful, None
        return
    others = [b for b in tree.buyers if b != buyer]
    options = [deviations(tree, b) for b in others]
    for combo in itertools.product(*options):
        reports = dict(zip(others, combo))
        reports[buyer] = frozenset(tree.children[buyer])
        base = ActionProfile(tuple((b, reports[b]) for b in tree.buyers))
        if buyer not in effective_tree(tree, base):
            continue
        yield base, base


# --------------------------------------------------------------------------
# sweeps over enumerated trees


def _run_task(task):
    prop, tree, source, config, scope, allow_opt_out, max_records = task
    if prop == "IR":
        return check_ir(tree, source, config, max_records=max_records)
    return check_ic(tree, source, config, scope, allow_opt_out=allow_opt_out, max_records=max_records)


def verify_trees(
    prop: str,
    max_buyers: int,
    source: ValuationGrid | ValuationSample = ValuationGrid(),
    configs: Sequence[MechanismConfig] = (MechanismConfig(),),
    *,
    scope: str = "unilateral",
    allow_opt_out: bool = False,
    max_records: int = 20,
    n_jobs: int = 1,
) -> PropertyReport:
    """Run ``check_ir`` or ``check_ic`` on every rooted tree up to ``max_buyers``.

    The merged report is sorted, so it does not depend on ``n_jobs``.
    """
    prop = prop.upper()
    if prop not in ("IR", "IC"):
        raise ValueError(f"property must be IR or IC, got {prop!r}")
    if prop == "IC" and scope == "full" and max_buyers > MAX_FULL_SCOPE_BUYERS:
        raise ScopeError(f"full-scope IC is limited to {MAX_FULL_SCOPE_BUYERS} buyers, asked for {max_buyers}")
    tasks = [
        (prop, tree, source, config, scope, allow_opt_out, max_records)
        for tree in enumerate_rooted_trees(max_buyers)
        for config in configs
    ]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        reports = [_run_task(t) for t in tasks]
    return PropertyReport.merge(prop, reports)


# --------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloEstimate:
    replications: int
    mean: float
    std_error: float
    seed: int

    def z_score(self, target: float) -> float:
        if not self.std_error > 0:
            return float("nan")
        return (self.mean - target) / self.std_error


def _block_revenue(args) -> np.ndarray:
    model, columns, k, seed, block, size, net = args
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    V = rng.random((size, k))
    if isinstance(model, FixedPriceMechanism):
        model = model.set_params(random_state=rng)
        return model.revenue(V[:, columns])
    return model.revenue(V, net=net, rng=rng)


def monte_carlo_revenue(
    tree: SocialTree,
    actions: ActionProfile | None = None,
    config: MechanismConfig | None = None,
    replications: int = 100_000,
    seed: int = 0,
    *,
    baseline: bool = False,
    price: float | None = None,
    net: bool = False,
    block_size: int = 8192,
    n_jobs: int = 1,
) -> MonteCarloEstimate:
    """Mean seller revenue over i.i.d. U[0, 1] valuations.

    Replication ``r`` lives in block ``r // block_size``, whose stream is
    seeded from ``(seed, block)``; the estimate is therefore the same for any
    ``n_jobs``. ``baseline=True`` sells only to the seller's neighbours at
    ``price`` (default: their optimal price).
    """
    config = config or MechanismConfig()
    if replications < 1:
        raise ValueError("replications must be at least 1")
    if baseline:
        x = len(tree.seller_children)
        columns = np.array([tree.buyers.index(b) for b in tree.seller_children], dtype=np.int64)
        model = FixedPriceMechanism(price=price, threshold=config.threshold or "strict")
        model.fit(np.zeros((1, x)))
    else:
        columns = None
        model = DiffusionMechanism(
            alpha=config.alpha,
            reward_mode=config.reward_mode,
            threshold=config.threshold or "weak",
        ).fit(tree, actions)
    blocks = [
        (model, columns, tree.k, seed, b, min(block_size, replications - b * block_size), net)
        for b in range(math.ceil(replications / block_size))
    ]
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(_block_revenue, blocks))
    else:
        parts = [_block_revenue(b) for b in blocks]
    revenue = np.concatenate(parts)
    mean = float(revenue.mean())
    # shifting by the first draw keeps a constant sample at exactly zero spread
    spread = (revenue - revenue[0]).std(ddof=1) if len(revenue) > 1 else float("nan")
    se = float(spread / math.sqrt(len(revenue)))
    return MonteCarloEstimate(replications, mean, se, seed)


# --------------------------------------------------------------------------
# revenue dominance


@dataclass(frozen=True)
class DominanceEntry:
    sizes: tuple[int, ...]
    e_fpdm: float
    e_base: float

    @property
    def k(self) -> int:
        return sum(self.sizes)

    @property
    def x(self) -> int:
        return len(self.sizes)

    @property
    def dominant(self) -> bool:
        return self.e_fpdm > self.e_base

    @property
    def diffused(self) -> bool:
        """At least one branch reaches beyond the seller's neighbour."""
        return max(self.sizes) > 1


@dataclass(frozen=True)
class DominanceReport:
    entries: tuple[DominanceEntry, ...] = field(default_factory=tuple)

    @property
    def non_dominant(self) -> tuple[DominanceEntry, ...]:
        return tuple(e for e in self.entries if not e.dominant)


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of ``n`` with parts in descending order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def revenue_dominance_scan(max_total: int) -> DominanceReport:
    """Compare diffusion revenue with the neighbours-only optimum.

    Every branch-size vector with at most ``max_total`` buyers is checked
    against the optimal posted price over its ``x`` branches.
    """
    if isinstance(max_total, bool) or int(max_total) != max_total or not 1 <= max_total <= 14:
        raise ValueError(f"max_total must be an integer in [1, 14], got {max_total!r}")
    entries = [
        DominanceEntry(sizes, expected_revenue_fpdm(sizes), expected_revenue_base(len(sizes)))
        for k in range(1, int(max_total) + 1)
        for sizes in partitions(k)
    ]
    return DominanceReport(tuple(entries))


__all__ = [
    "DominanceEntry",
    "DominanceReport",
    "IC_TOLERANCE",
    "MonteCarloEstimate",
    "PropertyReport",
    "ScopeError",
    "ValuationGrid",
    "ValuationSample",
    "Violation",
    "check_ic",
    "check_ir",
    "enumerate_rooted_trees",
    "monte_carlo_revenue",
    "partitions",
    "revenue_dominance_scan",
    "verify_trees",
]
