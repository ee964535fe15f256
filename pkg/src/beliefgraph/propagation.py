"""Structure-derived confidence.

Confidence of a node is proportional to the weighted confidence of its
supporters::

    conf(j) ∝ Σ_{i -> j support} w(i, j) · conf(i)

The proportionality is resolved as a weighted average, dividing by the total
incoming support weight. Nodes without incoming support keep their assigned
confidence. The fixed point is found by damped Jacobi iteration starting
from the assigned scores; contradiction and qualification edges play no part.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import sparse

from .config import PropagationConfig
from .core import BeliefSystem, EdgeKind, NodeId

__all__ = ["PropagationResult", "propagate_confidence", "support_is_acyclic", "support_depth"]


@dataclass(frozen=True)
class PropagationResult:
    conf_out: Mapping[NodeId, float]
    iterations: int
    converged: bool
    residual: float
    damping: float = 1.0
    history: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "conf_out": dict(self.conf_out),
            "iterations": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
            "damping": self.damping,
        }


def _support_order(sys: BeliefSystem) -> list[NodeId] | None:
    ts = graphlib.TopologicalSorter({n: () for n in sys.nodes})
    for e in sys.edges:
        if e.kind is EdgeKind.SUPPORT:
            ts.add(e.target, e.source)
    try:
        return list(ts.static_order())
    except graphlib.CycleError:
        return None


def support_is_acyclic(sys: BeliefSystem) -> bool:
    return _support_order(sys) is not None


def support_depth(sys: BeliefSystem) -> int:
    """Number of edges on the longest support path (support subgraph must be acyclic)."""
    order = _support_order(sys)
    if order is None:
        raise ValueError("support subgraph has a cycle")
    depth = {n: 0 for n in order}
    for n in order:
        for e in sys.in_edges(n):
            if e.kind is EdgeKind.SUPPORT:
                depth[n] = max(depth[n], depth[e.source] + 1)
    return max(depth.values(), default=0)


def _support_operator(sys: BeliefSystem):
    """Row-normalised support matrix and the mask of nodes that have supporters."""
    idx = sys.index
    n = len(idx)
    rows, cols, vals = [], [], []
    for e in sys.edges:
        if e.kind is EdgeKind.SUPPORT:
            rows.append(idx[e.target])
            cols.append(idx[e.source])
            vals.append(e.weight)
    w = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=float)
    totals = np.asarray(w.sum(axis=1)).ravel()
    supported = totals > 0
    scale = np.zeros(n)
    scale[supported] = 1.0 / totals[supported]
    return sparse.diags(scale) @ w, supported


def propagate_confidence(sys: BeliefSystem, cfg: PropagationConfig | None = None) -> PropagationResult:
    """Iterate the support-weighted average to a fixed point.

    Each step replaces every supported node's confidence with the
    weight-averaged confidence of its supporters, blended with the previous
    value by ``damping``. Iteration stops once the largest change is within
    ``tolerance`` or after ``max_iterations`` steps; failure to converge is
    reported through ``converged=False`` rather than raised.
    """
    cfg = cfg or PropagationConfig()
    damping = cfg.damping
    if damping is None:
        damping = 1.0 if support_is_acyclic(sys) else 0.5
    ids = sys.node_ids
    if not ids:
        return PropagationResult({}, 0, True, 0.0, damping)

    op, supported = _support_operator(sys)
    conf = np.array([sys.nodes[n].conf for n in ids], dtype=float)
    history = []
    residual = float("inf")
    converged = False
    it = 0
    while it < cfg.max_iterations:
        it += 1
        update = np.where(supported, op @ conf, conf)
        new = (1.0 - damping) * conf + damping * update
        np.clip(new, 0.0, 1.0, out=new)  # rounding only
        residual = float(np.max(np.abs(new - conf)))
        conf = new
        history.append(residual)
        if residual <= cfg.tolerance:
            converged = True
            break
    return PropagationResult(
        {n: float(c) for n, c in zip(ids, conf)}, it, converged, residual, damping, tuple(history)
    )
