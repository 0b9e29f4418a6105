"""
Explicit Runge-Kutta integrators.

Integrator classes advance a flat state vector y(t) under dy/dt = func(t, y).
They know nothing about the PDM model; the integration service wires the
equations of motion in and decides what to record.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.config import settings
from src.core.vectors import FloatArray

Derivative = Callable[[float, FloatArray], FloatArray]


@dataclass(frozen=True)
class StepResult:
    """Outcome of one attempted step."""

    y: FloatArray
    h: float
    accepted: bool = True
    error: float = 0.0


class Integrator(ABC):
    """Base class of the explicit integrators."""

    order: int = 0

    def __init__(self, func: Derivative) -> None:
        """
        Initialize the integrator.

        Args:
            func: Right-hand side f(t, y).
        """
        self._func = func

    @abstractmethod
    def step(self, t: float, y: FloatArray, h: float) -> StepResult:
        """
        Attempt one step of size h from (t, y).

        Args:
            t: Current time.
            y: Current state.
            h: Proposed step size.

        Returns:
            StepResult with the new state and the step actually taken.
        """
        raise NotImplementedError


class RungeKutta4(Integrator):
    """Classic fixed-step fourth-order Runge-Kutta."""

    order = 4

    def step(self, t: float, y: FloatArray, h: float) -> StepResult:
        """Advance by exactly h."""
        k1 = self._func(t, y)
        k2 = self._func(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = self._func(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = self._func(t + h, y + h * k3)
        return StepResult(y=y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, h=h)


class DormandPrince45(Integrator):
    """
    Dormand-Prince 5(4) embedded pair with PI step-size control.

    Propagates the fifth-order solution (local extrapolation) and uses the
    difference to the embedded fourth-order solution as error estimate. The
    last stage is evaluated at the new point and reused as the first stage of
    the next step.
    """

    order = 4

    nodes = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
    tableau: tuple[tuple[float, ...], ...] = (
        (1 / 5,),
        (3 / 40, 9 / 40),
        (44 / 45, -56 / 15, 32 / 9),
        (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
        (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
        (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
    )
    # Fifth-order weights minus fourth-order weights
    error_weights = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

    def __init__(
        self,
        func: Derivative,
        abs_tol: float = 1e-12,
        rel_tol: float = 1e-10,
        safety: float | None = None,
        min_factor: float | None = None,
        max_factor: float | None = None,
    ) -> None:
        """
        Initialize the adaptive integrator.

        Args:
            func: Right-hand side f(t, y).
            abs_tol: Absolute tolerance per component.
            rel_tol: Relative tolerance per component.
            safety: Step-size safety factor.
            min_factor: Smallest step-size change per step.
            max_factor: Largest step-size change per step.
        """
        super().__init__(func)
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.safety = settings.ADAPTIVE_SAFETY if safety is None else safety
        self.min_factor = settings.ADAPTIVE_MIN_FACTOR if min_factor is None else min_factor
        self.max_factor = settings.ADAPTIVE_MAX_FACTOR if max_factor is None else max_factor
        # PI controller exponents for an error estimate of order 4
        self._alpha = 0.7 / 5.0
        self._beta = 0.4 / 5.0
        self._previous_error = 1.0
        self._first_stage: tuple[float, FloatArray, FloatArray] | None = None

    def initial_step(self, t: float, y: FloatArray, span: float) -> float:
        """
        Estimate a starting step from the scaled state and derivative norms.

        Args:
            t: Start time.
            y: Initial state.
            span: Length of the integration interval.

        Returns:
            A positive step size no longer than span.
        """
        scale = self.abs_tol + self.rel_tol * np.abs(y)
        d0 = float(np.sqrt(np.mean((y / scale) ** 2)))
        d1 = float(np.sqrt(np.mean((self._func(t, y) / scale) ** 2)))
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        return min(h, abs(span))

    def _error_norm(self, y: FloatArray, y_new: FloatArray, error: FloatArray) -> float:
        scale = self.abs_tol + self.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.sqrt(np.mean((error / scale) ** 2)))

    def step(self, t: float, y: FloatArray, h: float) -> StepResult:
        """
        Attempt a step; on rejection the state is unchanged and h shrinks.

        Returns:
            StepResult whose h is the suggested next step size.
        """
        if self._first_stage is not None and self._first_stage[0] == t and np.array_equal(self._first_stage[1], y):
            k = [self._first_stage[2]]
        else:
            k = [self._func(t, y)]

        for node, row in zip(self.nodes[1:], self.tableau, strict=True):
            increment = sum((a * kj for a, kj in zip(row, k, strict=False) if a != 0.0), np.zeros_like(y))
            k.append(self._func(t + node * h, y + h * increment))

        # Row 6 holds the fifth-order weights; k[6] is f at the new point
        y_new = y + h * sum((b * kj for b, kj in zip(self.tableau[-1], k, strict=False) if b != 0.0), np.zeros_like(y))
        error = h * sum((e * kj for e, kj in zip(self.error_weights, k, strict=True) if e != 0.0), np.zeros_like(y))
        norm = self._error_norm(y, y_new, error)

        if norm <= 1.0:
            if norm == 0.0:
                factor = self.max_factor
            else:
                factor = self.safety * norm**-self._alpha * self._previous_error**self._beta
            factor = min(self.max_factor, max(self.min_factor, factor))
            self._previous_error = max(norm, 1e-4)
            self._first_stage = (t + h, y_new, k[6])
            return StepResult(y=y_new, h=h * factor, accepted=True, error=norm)

        factor = max(self.min_factor, self.safety * norm**-0.2)
        return StepResult(y=y, h=h * factor, accepted=False, error=norm)
