"""
Dynamics service for the PDM equations of motion.

Every equation is written as  scale * a + rest = 0  so that the same terms
produce both the solved acceleration and the residual of a given acceleration.
Positions and velocities may be single vectors (n,) or batches (..., n).
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from src.config import settings
from src.core.exceptions import SingularMassError
from src.core.vectors import FloatArray, as_vector
from src.schemas.model import EomForm, OscillatorModel
from src.schemas.state import PhaseState
from src.services.profile_service import (
    model_terms,
    potential,
    potential_gradient,
    radial_terms,
)

# Forms derived with the parallel identity; exact only for collinear motion
REDUCED_FORMS: frozenset[str] = frozenset({"el2-mdot", "el2-radial", "newton-parallel"})

AxisFunction = Callable[[FloatArray], FloatArray]
GradientFunction = Callable[[FloatArray], FloatArray]


@dataclass(frozen=True)
class PerAxisMassSpec:
    """Per-axis masses m_i(x_i) and derivatives for the EL-I Lagrangian."""

    masses: tuple[AxisFunction, ...]
    derivatives: tuple[AxisFunction, ...]
    m0: float = 1.0

    def __post_init__(self) -> None:
        if len(self.masses) != len(self.derivatives) or not self.masses:
            raise ValueError("Need one (mass, derivative) pair per axis")

    @property
    def dim(self) -> int:
        """Number of axes."""
        return len(self.masses)

    def evaluate(self, x: FloatArray) -> tuple[FloatArray, FloatArray]:
        """
        Evaluate masses and derivatives column by column.

        Args:
            x: Position(s), shape (..., dim).

        Returns:
            Tuple of (m_i, m_i') arrays shaped like x.
        """
        m = np.stack([np.asarray(fn(x[..., i]), dtype=np.float64) for i, fn in enumerate(self.masses)], axis=-1)
        dm = np.stack(
            [np.asarray(fn(x[..., i]), dtype=np.float64) for i, fn in enumerate(self.derivatives)], axis=-1
        )
        return m, dm

    @classmethod
    def uniform(cls, dim: int, m0: float = 1.0) -> "PerAxisMassSpec":
        """Constant unit mass on every axis."""
        one: AxisFunction = np.ones_like
        zero: AxisFunction = np.zeros_like
        return cls(masses=(one,) * dim, derivatives=(zero,) * dim, m0=m0)

    @classmethod
    def mathews_lakshmanan(
        cls, lams: tuple[float, ...], signs: tuple[float, ...] | None = None, m0: float = 1.0
    ) -> "PerAxisMassSpec":
        """Per-axis masses 1/(1 +/- lambda_i x_i^2)."""
        branch = signs or (1.0,) * len(lams)

        def make(lam: float, s: float) -> tuple[AxisFunction, AxisFunction]:
            def m(xi: FloatArray) -> FloatArray:
                result: FloatArray = 1.0 / (1.0 + s * lam * xi**2)
                return result

            def dm(xi: FloatArray) -> FloatArray:
                result: FloatArray = -2.0 * s * lam * xi / (1.0 + s * lam * xi**2) ** 2
                return result

            return m, dm

        pairs = [make(lam, s) for lam, s in zip(lams, branch, strict=True)]
        return cls(
            masses=tuple(p[0] for p in pairs),
            derivatives=tuple(p[1] for p in pairs),
            m0=m0,
        )

    @classmethod
    def from_model(cls, model: OscillatorModel) -> "PerAxisMassSpec":
        """
        Apply the model's profile to each axis separately.

        Axis i sees the one-dimensional radius |x_i + xi_i|.
        """
        shift = model.shift

        def make(i: int) -> tuple[AxisFunction, AxisFunction]:
            def m(xi: FloatArray) -> FloatArray:
                return radial_terms(model.profile, np.abs(xi + shift[i])).m

            def dm(xi: FloatArray) -> FloatArray:
                yi = xi + shift[i]
                # d/dx_i of m(|y_i|) = m'(|y_i|) * y_i / |y_i|
                result: FloatArray = radial_terms(model.profile, np.abs(yi)).dm_dr_over_r * yi
                return result

            return m, dm

        pairs = [make(i) for i in range(model.dim)]
        return cls(
            masses=tuple(p[0] for p in pairs),
            derivatives=tuple(p[1] for p in pairs),
            m0=model.m0,
        )


def _guard_mass(m: FloatArray) -> None:
    if np.any(~np.isfinite(m)) or np.any(np.abs(m) < settings.SINGULAR_MASS_TOL):
        raise SingularMassError(f"Mass multiplier {float(np.min(np.abs(m))):.3g} is singular")


def per_axis_potential_gradient(model: OscillatorModel) -> GradientFunction:
    """
    Gradient of the separable EL-I potential built from a model.

    Each axis carries the one-dimensional version of the model's potential:
    1/2 m0 w0^2 m(|y_i|) y_i^2 for type-a/type-c, 1/2 m0 w0^2 m(|x_i|) zeta_i^2
    for type-b (zeta_i^2 rescaled so that they sum to the signed zeta^2).

    Args:
        model: The oscillator model.

    Returns:
        Function mapping x (..., dim) to the gradient.
    """
    w2 = model.m0 * model.omega0**2
    shift = model.shift
    zeta = model.zeta_vector
    zeta_norm_sq = float(np.dot(zeta, zeta))
    zeta_axis_sq = zeta**2 * (model.zeta_squared / zeta_norm_sq) if zeta_norm_sq > 0 else zeta**2

    def gradient(x: FloatArray) -> FloatArray:
        y = np.asarray(x, dtype=np.float64) + shift
        terms = radial_terms(model.profile, np.abs(y))
        if model.family == "type-b":
            result: FloatArray = 0.5 * w2 * zeta_axis_sq * terms.dm_dr_over_r * y
        else:
            result = w2 * terms.m * (1.0 + 0.5 * terms.log_slope) * y
        return result

    return gradient


def per_axis_potential(model: OscillatorModel, x: ArrayLike) -> FloatArray | float:
    """Separable EL-I potential matching per_axis_potential_gradient."""
    y = as_vector(x) + model.shift
    terms = radial_terms(model.profile, np.abs(y))
    w2 = model.m0 * model.omega0**2
    if model.family == "type-b":
        zeta = model.zeta_vector
        axis_sq = zeta**2 * (model.zeta_squared / float(np.dot(zeta, zeta)))
        values = 0.5 * w2 * np.sum(terms.m * axis_sq, axis=-1)
    else:
        values = 0.5 * w2 * np.sum(terms.m * y**2, axis=-1)
    return float(values) if np.ndim(values) == 0 else values


def _el1_parts(
    spec: PerAxisMassSpec, potential_grad: GradientFunction, x: FloatArray, v: FloatArray
) -> tuple[FloatArray, FloatArray]:
    m, dm = spec.evaluate(x)
    _guard_mass(m)
    # m_i-dot = m_i'(x_i) x_i-dot
    m_dot = dm * v
    rest = (m_dot / (2.0 * m)) * v + potential_grad(x) / (spec.m0 * m)
    return np.ones_like(m), rest


def _el2_parts(
    model: OscillatorModel, form: EomForm, x: FloatArray, v: FloatArray
) -> tuple[FloatArray, FloatArray]:
    y, terms = model_terms(model, x)
    m = terms.m
    _guard_mass(m)

    force = potential_gradient(model, x) / (model.m0 * m)[..., None]
    # dm/dr / (r m), the common radial coefficient
    kappa = (terms.dm_dr_over_r / m)[..., None]
    speed_sq = np.sum(v * v, axis=-1, keepdims=True)
    m_dot_over_m = kappa * np.sum(y * v, axis=-1, keepdims=True)

    if form in ("el2-direct", "newton-full"):
        rest = m_dot_over_m * v - 0.5 * kappa * speed_sq * y + force
    elif form == "el2-mdot":
        rest = 0.5 * m_dot_over_m * v + force
    else:
        rest = 0.5 * kappa * speed_sq * y + force

    scale = np.ones_like(m)
    if form == "newton-full":
        # Vector form keeps the mass on the acceleration: m0 (m a + ...) + grad V
        scale = model.m0 * m
        rest = scale[..., None] * rest
    return scale, rest


def eom_parts(
    model: OscillatorModel, form: EomForm, x: ArrayLike, v: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """
    Split an equation of motion into scale * a + rest.

    Args:
        model: The oscillator model.
        form: Which equation to use.
        x: Position(s).
        v: Velocity(ies).

    Returns:
        Tuple of (scale with shape (...), rest with shape (..., n)).

    Raises:
        DomainError: Outside the mass domain.
        SingularMassError: When |m| vanishes.
    """
    position = as_vector(x)
    velocity = as_vector(v)
    if position.shape != velocity.shape or position.shape[-1] != model.dim:
        raise ValueError(f"Expected x and v of dimension {model.dim}")
    if form == "el1":
        return _el1_parts(
            PerAxisMassSpec.from_model(model), per_axis_potential_gradient(model), position, velocity
        )
    return _el2_parts(model, form, position, velocity)


def accelerations(model: OscillatorModel, form: EomForm, x: ArrayLike, v: ArrayLike) -> FloatArray:
    """
    Solve the chosen equation for the acceleration, batch version.

    Args:
        model: The oscillator model.
        form: Which equation to use.
        x: Position(s).
        v: Velocity(ies).

    Returns:
        Accelerations shaped like x.
    """
    scale, rest = eom_parts(model, form, x, v)
    result: FloatArray = -rest / scale[..., None]
    return result


def acceleration(model: OscillatorModel, form: EomForm, state: PhaseState) -> FloatArray:
    """
    Acceleration solving the chosen equation of motion at a state.

    Args:
        model: The oscillator model.
        form: Which equation to use.
        state: The phase state.

    Returns:
        The acceleration vector.
    """
    return accelerations(model, form, state.x, state.v)


def el_residual(
    model: OscillatorModel, form: EomForm, state: PhaseState, accel: ArrayLike
) -> FloatArray:
    """
    Left-hand side of the chosen equation with the given acceleration.

    Args:
        model: The oscillator model.
        form: Which equation to use.
        state: The phase state.
        accel: Candidate acceleration.

    Returns:
        Residual vector; zero iff accel solves the equation.
    """
    return residuals(model, form, state.x, state.v, accel)


def residuals(
    model: OscillatorModel, form: EomForm, x: ArrayLike, v: ArrayLike, accel: ArrayLike
) -> FloatArray:
    """Batch version of el_residual."""
    scale, rest = eom_parts(model, form, x, v)
    result: FloatArray = scale[..., None] * as_vector(accel) + rest
    return result


def newtonian_vector_residual(model: OscillatorModel, state: PhaseState, accel: ArrayLike) -> FloatArray:
    """
    Residual of the full Newtonian vector equation.

    Evaluates m0 (m a + dm/dr v (r.v)/r - 1/2 dm/dr r (v.v)/r) + grad V with no
    collinearity assumed.

    Args:
        model: The oscillator model.
        state: The phase state.
        accel: Candidate acceleration.

    Returns:
        Residual vector.
    """
    return newtonian_vector_residuals(model, state.x, state.v, accel)


def newtonian_vector_residuals(
    model: OscillatorModel, x: ArrayLike, v: ArrayLike, accel: ArrayLike
) -> FloatArray:
    """Batch version of newtonian_vector_residual, evaluated term by term."""
    position = as_vector(x)
    velocity = as_vector(v)
    y, terms = model_terms(model, position)
    rho = terms.rho[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        r_hat = np.where(rho > 0.0, y / rho, 0.0)
    # Both bracketed terms carry r_hat and vanish at the anchor origin
    radial_speed = np.sum(r_hat * velocity, axis=-1, keepdims=True)
    speed_sq = np.sum(velocity * velocity, axis=-1, keepdims=True)
    bracket = terms.dm_dr[..., None] * (velocity * radial_speed - 0.5 * r_hat * speed_sq)
    result: FloatArray = model.m0 * (terms.m[..., None] * as_vector(accel) + bracket) + potential_gradient(
        model, position
    )
    return result


def el1_acceleration(
    spec: PerAxisMassSpec, potential_grad: GradientFunction, state: PhaseState
) -> FloatArray:
    """
    Decoupled per-axis EL-I accelerations.

    Solves x_i'' + (m_i-dot / 2 m_i) x_i' + (1/m_i) dV/dx_i = 0 with
    m_i-dot = m_i'(x_i) x_i'.

    Args:
        spec: Per-axis mass functions.
        potential_grad: Gradient of the potential.
        state: The phase state.

    Returns:
        The acceleration vector.

    Raises:
        SingularMassError: When some m_i vanishes.
    """
    if state.dim != spec.dim:
        raise ValueError(f"State has {state.dim} axes, spec has {spec.dim}")
    scale, rest = _el1_parts(spec, potential_grad, state.x, state.v)
    result: FloatArray = -rest / scale
    return result


def el1_residual(
    spec: PerAxisMassSpec, potential_grad: GradientFunction, state: PhaseState, accel: ArrayLike
) -> FloatArray:
    """Left-hand side of the EL-I equations with the given acceleration."""
    scale, rest = _el1_parts(spec, potential_grad, state.x, state.v)
    result: FloatArray = scale * as_vector(accel) + rest
    return result


def energies(model: OscillatorModel, x: ArrayLike, v: ArrayLike, form: EomForm = "el2-direct") -> FloatArray | float:
    """
    Total energy for positions and velocities, batch version.

    EL-II forms use 1/2 m0 m |v|^2 + V; the EL-I form uses the separable
    per-axis Lagrangian.

    Args:
        model: The oscillator model.
        x: Position(s).
        v: Velocity(ies).
        form: Which Lagrangian the motion follows.

    Returns:
        Energy per sample.
    """
    position = as_vector(x)
    velocity = as_vector(v)
    if form == "el1":
        m, _ = PerAxisMassSpec.from_model(model).evaluate(position)
        kinetic = 0.5 * model.m0 * np.sum(m * velocity**2, axis=-1)
        values = kinetic + per_axis_potential(model, position)
    else:
        _, terms = model_terms(model, position)
        kinetic = 0.5 * model.m0 * terms.m * np.sum(velocity**2, axis=-1)
        values = kinetic + potential(model, position)
    return float(values) if np.ndim(values) == 0 else np.asarray(values)


def total_energy(model: OscillatorModel, state: PhaseState) -> float:
    """
    Total energy 1/2 m0 m |v|^2 + V at a state.

    Args:
        model: The oscillator model.
        state: The phase state.

    Returns:
        The energy.

    Raises:
        DomainError: Outside the mass domain.
    """
    return float(energies(model, state.x, state.v))
