"""Shared optimizer configuration and error types."""

from __future__ import annotations

from dataclasses import dataclass, field


class ConvergenceError(RuntimeError):
    """An optimizer ran out of budget; carries the best bracket found."""

    def __init__(self, message: str, best_value: float):
        super().__init__(message)
        self.best_value = best_value


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the multistart descent/ascent optimizers.

    ``restarts`` is the total number of starts; deterministic warm starts and
    ``extra_starts`` fill the list first and random starts top it up. ``tol``
    is the successive-objective-change stopping threshold.
    """

    restarts: int = 5
    max_iter: int = 5000
    tol: float = 1e-10
    seed: int = 0
    extra_starts: tuple = field(default=())
