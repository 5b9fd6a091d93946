"""Estimator-style wrappers that run a mechanism over many valuation profiles.

``fit`` reads the network (or the number of neighbours) and fixes the posted
prices; ``predict`` allocates the item for each row of a valuation matrix.
Rows are profiles, columns are buyers in ``tree.buyers`` order. Both classes
follow the scikit-learn parameter conventions, so ``get_params``,
``set_params`` and ``clone`` work.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .mechanisms import MechanismConfig, fpdm_payments
from .network import ActionProfile, SocialTree, branches, effective_tree, validate_profile
from .pricing import branch_prices, optimal_price
from .validation import check_probability, check_valuations

_UNSOLD = -1


def check_random_state(seed) -> np.random.Generator:
    """Like sklearn's helper, but for ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _allocate(values, prices, groups, weak, rng):
    """Vectorised priority allocation.

    ``groups`` ranks candidates (smaller wins); equal ranks are broken by
    ``rng``. Returns the winning column per row, ``-1`` if nobody claims.
    """
    n, m = values.shape
    if m == 0:
        return np.full(n, _UNSOLD)
    claims = values >= prices if weak else values > prices
    big = np.iinfo(np.int64).max
    ranked = np.where(claims, groups, big)
    best = ranked.min(axis=1)
    tied = ranked == best[:, None]
    scores = rng.random((n, m)) if rng is not None else np.zeros((n, m))
    choice = np.argmax(np.where(tied, scores, -1.0), axis=1)
    return np.where(best < big, choice, _UNSOLD)


def _tie_weights(values, prices, groups, weak):
    claims = values >= prices if weak else values > prices
    big = np.iinfo(np.int64).max
    ranked = np.where(claims, groups, big)
    best = ranked.min(axis=1)
    tied = (ranked == best[:, None]) & claims
    counts = tied.sum(axis=1, keepdims=True)
    return np.divide(tied, counts, out=np.zeros(tied.shape), where=counts > 0)


class FixedPriceMechanism(BaseEstimator):
    """Posted price offered only to the seller's direct neighbours.

    Parameters
    ----------
    price : float or None
        Posted price. ``None`` uses the optimal price for the number of
        columns seen in ``fit``.
    threshold : {"strict", "weak"}
        Claim when ``v > price`` or ``v >= price``.
    random_state : int, Generator or None
        Seeds the uniform choice among claimers.
    """

    def __init__(self, price=None, threshold="strict", random_state=None):
        self.price = price
        self.threshold = threshold
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_valuations(X)
        self.n_features_in_ = X.shape[1]
        if self.price is None:
            self.price_ = optimal_price(self.n_features_in_)
        else:
            self.price_ = check_probability(self.price, "price")
        MechanismConfig(threshold=self.threshold)
        return self

    def predict(self, X):
        """Winning column index per row, ``-1`` when unsold."""
        check_is_fitted(self, "price_")
        X = check_valuations(X, self.n_features_in_)
        m = X.shape[1]
        return _allocate(
            X,
            np.full(m, self.price_),
            np.zeros(m, dtype=np.int64),
            self.threshold == "weak",
            check_random_state(self.random_state),
        )

    def revenue(self, X):
        return np.where(self.predict(X) >= 0, self.price_, 0.0)


class DiffusionMechanism(BaseEstimator):
    """Fixed-price diffusion mechanism over a fitted network.

    Parameters
    ----------
    alpha : float
        Reward scale in ``[0, 1]``.
    reward_mode : {"clamped", "literal"}
    threshold : {"weak", "strict"}
    random_state : int, Generator or None
        Seeds the final uniform tie-break.

    Attributes
    ----------
    effective_ : SocialTree
        Buyers reached under the fitted action profile.
    prices_ : ndarray
        Posted price per branch, in visiting order.
    p_base_ : float
        Optimal price among the seller's neighbours.
    payment_table_ : ndarray of shape (n_active + 1, k)
        Payment row for each possible winner; the last row is "unsold".
    """

    def __init__(self, alpha=0.1, reward_mode="clamped", threshold="weak", random_state=None):
        self.alpha = alpha
        self.reward_mode = reward_mode
        self.threshold = threshold
        self.random_state = random_state

    def _config(self) -> MechanismConfig:
        return MechanismConfig(alpha=self.alpha, reward_mode=self.reward_mode, threshold=self.threshold)

    def fit(self, tree: SocialTree, actions: ActionProfile | None = None):
        config = self._config()
        if actions is not None:
            validate_profile(tree, actions, allow_opt_out=True)
        self.tree_ = tree
        self.n_features_in_ = tree.k
        self.effective_ = eff = effective_tree(tree, actions)
        self.decomposition_ = decomp = branches(eff)
        self.prices_ = np.array(branch_prices(decomp))
        self.p_base_ = optimal_price(len(tree.seller_children))

        column = {b: i for i, b in enumerate(tree.buyers)}
        active, price, key = [], [], []
        for rank, (branch, p) in enumerate(zip(decomp, self.prices_)):
            for b in sorted(branch.members):
                active.append(b)
                price.append(p)
                key.append((rank, eff.depths[b], -len(eff.children[b])))
        order = {kk: g for g, kk in enumerate(sorted(set(key)))}
        self.active_ = np.array(active, dtype=np.int64)
        self.active_columns_ = np.array([column[b] for b in active], dtype=np.int64)
        self.active_prices_ = np.array(price, dtype=float)
        self.priority_ = np.array([order[kk] for kk in key], dtype=np.int64)

        table = np.zeros((len(active) + 1, tree.k))
        for j, b in enumerate(active):
            pay = fpdm_payments(tree, eff, b, price[j], self.p_base_, config)
            table[j] = [pay[c] for c in tree.buyers]
        self.payment_table_ = table
        return self

    def _active_values(self, X):
        check_is_fitted(self, "payment_table_")
        X = check_valuations(X, self.n_features_in_)
        return X, X[:, self.active_columns_]

    def _winner_index(self, X, rng):
        X, values = self._active_values(X)
        idx = _allocate(values, self.active_prices_, self.priority_, self.threshold == "weak", rng)
        return X, np.where(idx >= 0, idx, len(self.active_))

    def predict(self, X):
        """Winning buyer id per row, ``-1`` when unsold."""
        _, idx = self._winner_index(X, check_random_state(self.random_state))
        ids = np.append(self.active_, _UNSOLD)
        return ids[idx]

    def predict_proba(self, X):
        """Probability each buyer (column) receives the item, ties uniform."""
        X, values = self._active_values(X)
        weights = _tie_weights(values, self.active_prices_, self.priority_, self.threshold == "weak")
        out = np.zeros(X.shape)
        out[:, self.active_columns_] = weights
        return out

    def predict_payments(self, X):
        _, idx = self._winner_index(X, check_random_state(self.random_state))
        return self.payment_table_[idx]

    def revenue(self, X, net=False, rng=None):
        """Seller revenue per row; ``net`` also counts path rewards."""
        rng = check_random_state(self.random_state) if rng is None else rng
        _, idx = self._winner_index(X, rng)
        if net:
            return self.payment_table_[idx].sum(axis=1)
        gross = np.append(self.active_prices_, 0.0)
        return gross[idx]

    def utilities(self, X):
        X, idx = self._winner_index(X, check_random_state(self.random_state))
        pay = self.payment_table_[idx]
        won = np.zeros(X.shape)
        sold = idx < len(self.active_)
        won[np.nonzero(sold)[0], self.active_columns_[idx[sold]]] = 1.0
        return won * X - pay
