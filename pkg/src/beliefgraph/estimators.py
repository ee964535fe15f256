"""scikit-learn style wrappers.

Each estimator takes a belief system as ``X`` (a :class:`BeliefSystem`, a
decoded JSON document, or a path) and ignores ``y``. Hyper-parameters follow
the usual convention: stored verbatim by ``__init__``, validated in ``fit``,
and exposed through ``get_params``/``set_params`` so the wrappers work with
:func:`sklearn.base.clone` and :class:`sklearn.pipeline.Pipeline`.

>>> from sklearn.pipeline import make_pipeline
>>> pipe = make_pipeline(ConfidencePropagator(), DivergenceClassifier())
>>> labels = pipe.fit(system).predict(system)  # doctest: +SKIP
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import BeliefSystem, induced_subgraph
from .diagnostics import divergence_map, graph_report
from .extraction import DEFAULT_EXACT_LIMIT, max_coherent_subgraph
from .propagation import propagate_confidence
from .validation import check_node_subset, check_propagation_config, check_system, check_thresholds

__all__ = [
    "ConfidencePropagator",
    "CoherentSubgraphExtractor",
    "DivergenceClassifier",
    "BeliefGraphAnalyzer",
]


class ConfidencePropagator(TransformerMixin, BaseEstimator):
    """Replace assigned confidence with support-propagated confidence.

    Parameters
    ----------
    damping : float or "auto", default="auto"
        Step size in (0, 1]. ``"auto"`` uses 1.0 on acyclic support graphs
        and 0.5 otherwise.
    tolerance : float, default=1e-9
    max_iterations : int, default=10000

    Attributes
    ----------
    result_ : PropagationResult
    conf_ : dict
        Propagated confidence by node id.
    n_iter_ : int
    converged_ : bool
    """

    def __init__(self, damping="auto", tolerance=1e-9, max_iterations=10_000):
        self.damping = damping
        self.tolerance = tolerance
        self.max_iterations = max_iterations

    def _config(self):
        return check_propagation_config(self.damping, self.tolerance, self.max_iterations)

    def fit(self, X, y=None):
        sys = check_system(X)
        self.result_ = propagate_confidence(sys, self._config())
        self.conf_ = dict(self.result_.conf_out)
        self.n_iter_ = self.result_.iterations
        self.converged_ = self.result_.converged
        self.residual_ = self.result_.residual
        self._fitted_on = sys
        return self

    def transform(self, X) -> BeliefSystem:
        check_is_fitted(self, "result_")
        sys = check_system(X)
        result = self.result_ if sys == self._fitted_on else propagate_confidence(sys, self._config())
        return sys.with_conf(result.conf_out)


class CoherentSubgraphExtractor(TransformerMixin, BaseEstimator):
    """Select a maximum-weight locally coherent node set.

    Parameters
    ----------
    objective : {"count", "total_cred", "total_conf"}, default="count"
    mode : {"exact", "heuristic", "auto"}, default="auto"
    exact_limit : int, default=40
        Largest number of conflicting nodes ``auto`` mode solves exactly.

    Attributes
    ----------
    nodes_ : frozenset of str
    score_ : float
    exact_ : bool
    """

    def __init__(self, objective="count", mode="auto", exact_limit=DEFAULT_EXACT_LIMIT):
        self.objective = objective
        self.mode = mode
        self.exact_limit = exact_limit

    def fit(self, X, y=None):
        sys = check_system(X)
        res = max_coherent_subgraph(sys, self.objective, self.mode, exact_limit=self.exact_limit)
        self.result_ = res
        self.nodes_ = res.nodes
        self.score_ = res.score
        self.exact_ = res.exact
        return self

    def transform(self, X) -> BeliefSystem:
        """The subsystem induced by the selected nodes."""
        check_is_fitted(self, "nodes_")
        sys = check_system(X)
        return induced_subgraph(sys, check_node_subset(sys, self.nodes_))

    def predict(self, X) -> np.ndarray:
        """Boolean membership mask over ``X``'s nodes in sorted id order."""
        check_is_fitted(self, "nodes_")
        sys = check_system(X)
        return np.array([n in self.nodes_ for n in sys.node_ids], dtype=bool)


class DivergenceClassifier(BaseEstimator):
    """Label each node by how its credibility and confidence relate.

    Labels are ``CredibleUnsupported``, ``DubiousReinforced``, ``Aligned``
    or ``Indeterminate``. ``predict`` returns them in sorted node-id order.
    """

    def __init__(self, tau_high=0.7, tau_low=0.3, conf_source="assigned",
                 damping="auto", tolerance=1e-9, max_iterations=10_000):
        self.tau_high = tau_high
        self.tau_low = tau_low
        self.conf_source = conf_source
        self.damping = damping
        self.tolerance = tolerance
        self.max_iterations = max_iterations

    def _entries(self, sys):
        th = check_thresholds(self.tau_high, self.tau_low, 1.0)
        cfg = check_propagation_config(self.damping, self.tolerance, self.max_iterations)
        return divergence_map(sys, th, self.conf_source, cfg=cfg)

    def fit(self, X, y=None):
        sys = check_system(X)
        self.entries_ = self._entries(sys)
        self.classes_ = np.array(["Aligned", "CredibleUnsupported", "DubiousReinforced", "Indeterminate"])
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "entries_")
        sys = check_system(X)
        by_node = {e.node: e.cls.value for e in self._entries(sys)}
        return np.array([by_node[n] for n in sys.node_ids], dtype=object)


class BeliefGraphAnalyzer(BaseEstimator):
    """Compute the full diagnostic report for a system.

    Attributes
    ----------
    report_ : GraphReport
    """

    def __init__(self, tau_high=0.7, tau_low=0.3, sigma_strong=1.0, damping="auto",
                 tolerance=1e-9, max_iterations=10_000, include_cycles=True,
                 max_cycles=10_000, chain_max_len=5, max_chains=10_000):
        self.tau_high = tau_high
        self.tau_low = tau_low
        self.sigma_strong = sigma_strong
        self.damping = damping
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.include_cycles = include_cycles
        self.max_cycles = max_cycles
        self.chain_max_len = chain_max_len
        self.max_chains = max_chains

    def fit(self, X, y=None):
        sys = check_system(X)
        th = check_thresholds(self.tau_high, self.tau_low, self.sigma_strong)
        cfg = check_propagation_config(self.damping, self.tolerance, self.max_iterations)
        self.report_ = graph_report(
            sys, th, cfg, include_cycles=self.include_cycles, max_cycles=self.max_cycles,
            chain_max_len=self.chain_max_len, max_chains=self.max_chains,
        )
        return self
