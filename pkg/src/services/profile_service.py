"""
Mass-profile service.

Evaluates the mass multiplier, its radial derivative, the time- and
space-scale factors and the deformed potential for every profile/family pair.
All functions accept a single position of shape (n,) or a batch (..., n).
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from src.config import settings
from src.core.exceptions import DomainError
from src.core.vectors import FloatArray, as_vector
from src.schemas.model import OscillatorModel, PdmProfile


@dataclass(frozen=True)
class RadialTerms:
    """Radial quantities of a profile at the anchor radius rho."""

    rho: FloatArray
    m: FloatArray
    dm_dr: FloatArray
    # dm/dr divided by rho, finite at the origin for the ML kinds
    dm_dr_over_r: FloatArray
    # rho * (dm/dr) / m, analytic per kind
    log_slope: FloatArray


@dataclass(frozen=True)
class ProfileEvaluation:
    """Mass, scale factors and potential at one point."""

    m: float
    dm_dr: float
    f: float
    g: float
    V: float


def _collapse(values: FloatArray) -> FloatArray | float:
    return float(values) if np.ndim(values) == 0 else values


def _profile_anchor(profile: PdmProfile, x: FloatArray) -> FloatArray:
    if not profile.shift:
        return x
    shift = np.asarray(profile.shift, dtype=np.float64)
    if shift.shape[0] != x.shape[-1]:
        raise ValueError(f"shift has {shift.shape[0]} components, position has {x.shape[-1]}")
    result: FloatArray = x + shift
    return result


def radial_terms(profile: PdmProfile, rho: ArrayLike) -> RadialTerms:
    """
    Evaluate m and its radial derivatives at the given anchor radii.

    Args:
        profile: The mass profile.
        rho: Anchor radius (|x| or |x + xi|), scalar or array.

    Returns:
        RadialTerms with arrays broadcast to the shape of rho.

    Raises:
        DomainError: If the mass is singular at any radius.
    """
    r = np.asarray(rho, dtype=np.float64)

    if profile.kind in ("mathews-lakshmanan", "shifted-ml"):
        s, lam = profile.sign, profile.lam
        if s < 0.0 and lam > 0.0:
            outside = r**2 >= 1.0 / lam - settings.DOMAIN_MARGIN
            if np.any(outside):
                worst = float(np.max(np.where(outside, r, 0.0)))
                raise DomainError(
                    f"Mass singular: r = {worst:.6g} reaches 1/sqrt(lambda) = {lam**-0.5:.6g}"
                )
        denom = 1.0 + s * lam * r**2
        m = 1.0 / denom
        dm_dr_over_r = -2.0 * s * lam / denom**2
        return RadialTerms(
            rho=r,
            m=m,
            dm_dr=dm_dr_over_r * r,
            dm_dr_over_r=dm_dr_over_r,
            log_slope=-2.0 * s * lam * r**2 / denom,
        )

    k, ups = profile.k, profile.upsilon
    if ups < 0.0 and np.any(r == 0.0):
        raise DomainError(f"Mass singular at r = 0 for exponent upsilon = {ups}")
    if ups == 0.0:
        zeros = np.zeros_like(r)
        return RadialTerms(rho=r, m=np.full_like(r, k), dm_dr=zeros, dm_dr_over_r=zeros, log_slope=zeros)

    with np.errstate(divide="ignore", invalid="ignore"):
        m = k * r ** (2.0 * ups)
        dm_dr = 2.0 * ups * k * r ** (2.0 * ups - 1.0)
        dm_dr_over_r = 2.0 * ups * k * r ** (2.0 * ups - 2.0)
    return RadialTerms(
        rho=r,
        m=m,
        dm_dr=dm_dr,
        dm_dr_over_r=dm_dr_over_r,
        log_slope=np.full_like(r, 2.0 * ups),
    )


def mass(profile: PdmProfile, x: ArrayLike) -> FloatArray | float:
    """
    Mass multiplier m at position(s) x.

    Shifted profiles are evaluated at y = |x + xi|.

    Args:
        profile: The mass profile.
        x: Position(s).

    Returns:
        1/(1 +/- lambda r^2), k r^(2 upsilon) or 1/(1 +/- lambda y^2).

    Raises:
        DomainError: At a mass singularity.
    """
    y = _profile_anchor(profile, as_vector(x))
    return _collapse(radial_terms(profile, np.linalg.norm(y, axis=-1)).m)


def mass_radial_derivative(profile: PdmProfile, x: ArrayLike) -> FloatArray | float:
    """
    Radial derivative dm/dr (dm/dy for shifted profiles).

    Args:
        profile: The mass profile.
        x: Position(s).

    Returns:
        The analytic derivative.

    Raises:
        DomainError: At a mass singularity.
    """
    y = _profile_anchor(profile, as_vector(x))
    return _collapse(radial_terms(profile, np.linalg.norm(y, axis=-1)).dm_dr)


def model_terms(model: OscillatorModel, x: ArrayLike) -> tuple[FloatArray, RadialTerms]:
    """
    Anchor positions and radial terms for a model.

    Args:
        model: The oscillator model.
        x: Position(s), shape (..., dim).

    Returns:
        Tuple of (anchor y = x + xi, radial terms at |y|).
    """
    y = model.anchor(as_vector(x))
    return y, radial_terms(model.profile, np.linalg.norm(y, axis=-1))


def _time_scale(model: OscillatorModel, x: FloatArray, terms: RadialTerms) -> FloatArray:
    if model.family == "type-b":
        # (dm/dr / 2m) * (r_hat . zeta); reduces to zeta dm/dr / 2m when r is co-directional with zeta
        projection = np.sum(x * model.zeta_vector, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = 0.5 * terms.dm_dr_over_r / terms.m * projection
        if not np.all(np.isfinite(f)):
            raise DomainError("Type-b time scale undefined at this point")
        result: FloatArray = f
        return result
    result = 1.0 + 0.5 * terms.log_slope
    return result


def time_scale_f(model: OscillatorModel, x: ArrayLike) -> FloatArray | float:
    """
    Time-scale factor f with d(tau) = f dt.

    type-a: 1 + r dm/dr / 2m; type-b: (dm/dr / 2m) zeta projected on r_hat;
    type-c: 1 + y dm/dy / 2m.

    Args:
        model: The oscillator model.
        x: Position(s).

    Returns:
        The factor f.

    Raises:
        DomainError: At a mass singularity.
    """
    position = as_vector(x)
    _, terms = model_terms(model, position)
    return _collapse(_time_scale(model, position, terms))


def space_scale_g(model: OscillatorModel, x: ArrayLike) -> FloatArray | float:
    """
    Space-scale factor g = m f^2.

    Args:
        model: The oscillator model.
        x: Position(s).

    Returns:
        The factor g.
    """
    position = as_vector(x)
    _, terms = model_terms(model, position)
    f = _time_scale(model, position, terms)
    return _collapse(terms.m * f**2)


def potential(model: OscillatorModel, x: ArrayLike) -> FloatArray | float:
    """
    Deformed oscillator potential, scaled by m0.

    type-a/type-c: 1/2 m omega0^2 |y|^2; type-b: 1/2 m omega0^2 zeta^2.

    Args:
        model: The oscillator model.
        x: Position(s).

    Returns:
        The potential energy.
    """
    y, terms = model_terms(model, x)
    if model.family == "type-b":
        values = 0.5 * model.m0 * terms.m * model.omega0**2 * model.zeta_squared
    else:
        values = 0.5 * model.m0 * terms.m * model.omega0**2 * np.sum(y**2, axis=-1)
    return _collapse(np.asarray(values))


def potential_gradient(model: OscillatorModel, x: ArrayLike) -> FloatArray:
    """
    Analytic gradient of the potential with respect to x.

    Args:
        model: The oscillator model.
        x: Position(s), shape (..., dim).

    Returns:
        Gradient with the shape of x.
    """
    y, terms = model_terms(model, x)
    w2 = model.m0 * model.omega0**2
    if model.family == "type-b":
        coefficient = 0.5 * w2 * model.zeta_squared * terms.dm_dr_over_r
    else:
        coefficient = w2 * terms.m * (1.0 + 0.5 * terms.log_slope)
    gradient: FloatArray = np.asarray(coefficient)[..., None] * y
    return gradient


def evaluate(model: OscillatorModel, x: ArrayLike) -> ProfileEvaluation:
    """
    Evaluate every profile quantity at one position.

    Args:
        model: The oscillator model.
        x: A single position.

    Returns:
        ProfileEvaluation with m, dm/dr, f, g and V.
    """
    position = as_vector(x)
    if position.ndim != 1:
        raise ValueError("evaluate expects a single position")
    y, terms = model_terms(model, position)
    f = float(_time_scale(model, position, terms))
    m = float(terms.m)
    return ProfileEvaluation(
        m=m,
        dm_dr=float(terms.dm_dr),
        f=f,
        g=m * f**2,
        V=float(potential(model, position)),
    )
