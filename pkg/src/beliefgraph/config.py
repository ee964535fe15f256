"""Configuration records for thresholds and the propagation solver."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .exceptions import InvalidParameter

__all__ = ["Thresholds", "PropagationConfig"]


@dataclass(frozen=True)
class Thresholds:
    """Cutoffs that turn "high", "low" and "strong" into numbers.

    Parameters
    ----------
    tau_high : float
        Scores at or above this value count as high.
    tau_low : float
        Scores at or below this value count as low. Must be below ``tau_high``.
    sigma_strong : float
        Minimum support mass ``sum(w * conf)`` over consistent, highly
        confident supporters for support to count as strong.
    """

    tau_high: float = 0.7
    tau_low: float = 0.3
    sigma_strong: float = 1.0

    def __post_init__(self):
        for name in ("tau_high", "tau_low"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise InvalidParameter(f"{name} must lie in [0, 1], got {v!r}")
        if not self.tau_low < self.tau_high:
            raise InvalidParameter(
                f"tau_low ({self.tau_low}) must be strictly below tau_high ({self.tau_high})"
            )
        s = self.sigma_strong
        if not isinstance(s, (int, float)) or not math.isfinite(s) or s <= 0:
            raise InvalidParameter(f"sigma_strong must be positive, got {s!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PropagationConfig:
    """Controls for the damped fixed-point confidence solver.

    ``damping=None`` picks 1.0 when the support subgraph is acyclic and 0.5
    otherwise.
    """

    damping: float | None = None
    tolerance: float = 1e-9
    max_iterations: int = 10_000

    def __post_init__(self):
        d = self.damping
        if d is not None and (not isinstance(d, (int, float)) or not 0.0 < d <= 1.0):
            raise InvalidParameter(f"damping must lie in (0, 1], got {d!r}")
        t = self.tolerance
        if not isinstance(t, (int, float)) or not math.isfinite(t) or t <= 0:
            raise InvalidParameter(f"tolerance must be positive, got {t!r}")
        m = self.max_iterations
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise InvalidParameter(f"max_iterations must be a positive integer, got {m!r}")

    def to_dict(self) -> dict:
        return asdict(self)
