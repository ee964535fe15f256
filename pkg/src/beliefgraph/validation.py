"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import os
from typing import Any, Iterable, Mapping

from .config import PropagationConfig, Thresholds
from .core import BeliefSystem
from .exceptions import InvalidParameter, UnknownNode

__all__ = ["check_system", "check_node_subset", "check_thresholds", "check_propagation_config"]


def check_system(X: Any) -> BeliefSystem:
    """Coerce ``X`` to a :class:`BeliefSystem`.

    Accepts a system, a decoded JSON document (mapping), or a path to a
    ``.bgl``/``.json`` file.
    """
    if isinstance(X, BeliefSystem):
        return X
    if isinstance(X, Mapping):
        from .format import system_from_dict

        return system_from_dict(dict(X)).system
    if isinstance(X, (str, os.PathLike)):
        from .format import load

        return load(X).system
    raise TypeError(
        f"expected a BeliefSystem, a JSON document mapping or a file path; got {type(X).__name__}"
    )


def check_node_subset(sys: BeliefSystem, subset: Iterable[str]) -> frozenset[str]:
    s = frozenset(subset)
    for n in sorted(s):
        if n not in sys:
            raise UnknownNode(n)
    return s


def check_thresholds(tau_high: float, tau_low: float, sigma_strong: float) -> Thresholds:
    return Thresholds(tau_high=tau_high, tau_low=tau_low, sigma_strong=sigma_strong)


def check_propagation_config(damping, tolerance, max_iterations) -> PropagationConfig:
    if isinstance(damping, str):
        if damping != "auto":
            raise InvalidParameter(f"damping must be a number in (0, 1] or 'auto', got {damping!r}")
        damping = None
    return PropagationConfig(damping=damping, tolerance=tolerance, max_iterations=max_iterations)
