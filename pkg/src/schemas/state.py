"""
Phase-space value types.

PhaseState is a single sample; Trajectory and ReferenceTrajectory keep their
samples column-wise so numerical checks can operate on whole arrays.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from src.core.vectors import FloatArray, as_vector
from src.schemas.model import OscillatorModel


def _frozen(values: ArrayLike) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class PhaseState:
    """Time, position and velocity of one point in phase space."""

    t: float
    x: FloatArray
    v: FloatArray

    def __post_init__(self) -> None:
        x = _frozen(as_vector(self.x))
        v = _frozen(as_vector(self.v))
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError(f"x and v must be equal-length vectors, got {x.shape} and {v.shape}")
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        """Number of coordinates."""
        return int(self.x.shape[0])

    @classmethod
    def of(cls, t: float, x: ArrayLike, v: ArrayLike) -> PhaseState:
        """Build a state from plain sequences."""
        return cls(t=t, x=as_vector(x), v=as_vector(v))


@dataclass(frozen=True)
class Trajectory:
    """Recorded samples of an integration with re-scaled time and energy."""

    model: OscillatorModel
    t: FloatArray
    x: FloatArray
    v: FloatArray
    tau: FloatArray
    energy: FloatArray
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        t = _frozen(self.t)
        x = _frozen(self.x).reshape(t.shape[0], -1)
        v = _frozen(self.v).reshape(t.shape[0], -1)
        tau = _frozen(self.tau)
        energy = _frozen(self.energy)
        if not (x.shape == v.shape and tau.shape == t.shape == energy.shape):
            raise ValueError("Trajectory columns have inconsistent lengths")
        if x.shape[1] != self.model.dim:
            raise ValueError(f"Samples have {x.shape[1]} coordinates, model dim is {self.model.dim}")
        if t.shape[0] > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("Sample times must be strictly increasing")
        for name, value in (("t", t), ("x", x), ("v", v), ("tau", tau), ("energy", energy)):
            object.__setattr__(self, name, value)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def __iter__(self) -> Iterator[tuple[PhaseState, float, float]]:
        for i in range(len(self)):
            yield self.sample(i)

    @property
    def dim(self) -> int:
        """Number of coordinates."""
        return int(self.x.shape[1])

    def state(self, index: int) -> PhaseState:
        """Phase state of one sample."""
        return PhaseState(t=float(self.t[index]), x=self.x[index], v=self.v[index])

    def sample(self, index: int) -> tuple[PhaseState, float, float]:
        """One sample as (state, tau, energy)."""
        return self.state(index), float(self.tau[index]), float(self.energy[index])

    @property
    def final_state(self) -> PhaseState:
        """Last recorded state."""
        return self.state(len(self) - 1)


@dataclass(frozen=True)
class ReferenceTrajectory:
    """Samples in the constant-mass reference coordinates (tau, q, dq/dtau)."""

    tau: FloatArray
    q: FloatArray
    qtilde: FloatArray

    def __post_init__(self) -> None:
        tau = _frozen(self.tau)
        q = _frozen(self.q).reshape(tau.shape[0], -1)
        qtilde = _frozen(self.qtilde).reshape(tau.shape[0], -1)
        if q.shape != qtilde.shape:
            raise ValueError("q and qtilde must have the same shape")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qtilde", qtilde)

    def __len__(self) -> int:
        return int(self.tau.shape[0])

    @property
    def dim(self) -> int:
        """Number of reference coordinates."""
        return int(self.q.shape[1])
