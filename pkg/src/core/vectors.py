"""
Vector helpers shared by every module.

All functions accept arrays of shape (..., n) and reduce over the last axis,
so a single state and a batch of states go through the same code.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.config import settings

FloatArray = NDArray[np.float64]


def as_vector(values: ArrayLike) -> FloatArray:
    """
    Convert input to a float64 array with at least one axis.

    Args:
        values: Vector or batch of vectors.

    Returns:
        A float64 array.
    """
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 0:
        array = array.reshape(1)
    return array


def radius(x: ArrayLike) -> FloatArray | float:
    """
    Euclidean norm over the last axis.

    Args:
        x: Position vector(s).

    Returns:
        The norm, a float for a single vector.
    """
    norm = np.linalg.norm(as_vector(x), axis=-1)
    return float(norm) if np.ndim(norm) == 0 else norm


def collinearity_defect(x: ArrayLike, v: ArrayLike) -> FloatArray | float:
    """
    Measure how far two vectors are from being parallel.

    Returns 1 - (x.v)^2 / ((x.x)(v.v)), computed through the Lagrange identity
    so that parallel inputs give an exact zero. A zero vector is parallel to
    everything and yields 0.

    Args:
        x: First vector(s).
        v: Second vector(s), same shape as x.

    Returns:
        Defect in [0, 1]; a float for a single pair.
    """
    a = as_vector(x)
    b = as_vector(v)
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} vs {b.shape}")

    wedge = a[..., :, None] * b[..., None, :] - b[..., :, None] * a[..., None, :]
    cross_sq = 0.5 * np.sum(wedge**2, axis=(-2, -1))
    norms_sq = np.sum(a**2, axis=-1) * np.sum(b**2, axis=-1)

    with np.errstate(divide="ignore", invalid="ignore"):
        defect = np.where(norms_sq > 0.0, cross_sq / norms_sq, 0.0)
    defect = np.clip(defect, 0.0, 1.0)
    return float(defect) if np.ndim(defect) == 0 else defect


def is_collinear(x: ArrayLike, v: ArrayLike, tol: float | None = None) -> bool:
    """
    Check whether every pair is collinear within tolerance.

    Args:
        x: First vector(s).
        v: Second vector(s).
        tol: Threshold on the defect; defaults to the configured value.

    Returns:
        True if all defects are at or below the threshold.
    """
    threshold = settings.COLLINEARITY_TOL if tol is None else tol
    return bool(np.all(np.asarray(collinearity_defect(x, v)) <= threshold))


def parallel_identity_residual(a: ArrayLike, b: ArrayLike) -> FloatArray:
    """
    Evaluate (A.B)A - (A.A)B, which vanishes when A is parallel to B.

    Args:
        a: Vector(s) A.
        b: Vector(s) B.

    Returns:
        The residual vector(s).
    """
    va = as_vector(a)
    vb = as_vector(b)
    dot_ab = np.sum(va * vb, axis=-1, keepdims=True)
    dot_aa = np.sum(va * va, axis=-1, keepdims=True)
    result: FloatArray = dot_ab * va - dot_aa * vb
    return result
