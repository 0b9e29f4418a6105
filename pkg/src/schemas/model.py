"""
Pydantic schemas for mass profiles and oscillator models.

Defines the immutable parameter sets every evaluation is driven by.
"""

from typing import Literal, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.vectors import FloatArray

ProfileKind = Literal["mathews-lakshmanan", "power-law", "shifted-ml"]
SignBranch = Literal["plus", "minus"]
Family = Literal["type-a", "type-b", "type-c"]
EomForm = Literal["el1", "el2-direct", "el2-mdot", "el2-radial", "newton-full", "newton-parallel"]


class PdmProfile(BaseModel):
    """A mass-deformation family and its parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    kind: ProfileKind = Field(..., description="Mass-deformation family")
    lam: float = Field(
        default=0.0,
        alias="lambda",
        description="Deformation strength of the Mathews-Lakshmanan kinds",
    )
    sign_branch: SignBranch = Field(
        default="plus",
        alias="signBranch",
        description="Sign in 1 +/- lambda r^2",
    )
    k: float = Field(default=1.0, description="Power-law prefactor")
    upsilon: float = Field(default=0.0, description="Power-law exponent, m ~ r^(2 upsilon)")
    shift: tuple[float, ...] = Field(
        default=(),
        description="Shift vector xi; empty or zero for unshifted kinds",
    )

    @model_validator(mode="after")
    def check_parameters(self) -> Self:
        """Validate per-kind parameter constraints."""
        if self.kind in ("mathews-lakshmanan", "shifted-ml") and self.lam < 0.0:
            raise ValueError("lambda must be non-negative; the branch carries the sign")
        if self.kind == "power-law" and self.k == 0.0:
            raise ValueError("power-law prefactor k must be non-zero")
        if self.kind == "shifted-ml" and not self.shift:
            raise ValueError("shifted-ml requires a shift vector")
        if self.kind != "shifted-ml" and any(s != 0.0 for s in self.shift):
            raise ValueError(f"{self.kind} profiles take no shift")
        return self

    @property
    def sign(self) -> float:
        """Numeric sign of the branch, +1 for plus and -1 for minus."""
        return 1.0 if self.sign_branch == "plus" else -1.0

    def shift_vector(self, dim: int) -> FloatArray:
        """
        Shift vector xi padded to the model dimension.

        Args:
            dim: Model dimension.

        Returns:
            The shift as an array of length dim.
        """
        if not self.shift:
            return np.zeros(dim)
        return np.asarray(self.shift, dtype=np.float64)

    @classmethod
    def mathews_lakshmanan(cls, lam: float, sign_branch: SignBranch = "plus") -> "PdmProfile":
        """Build m = 1/(1 +/- lambda r^2)."""
        return cls(kind="mathews-lakshmanan", lam=lam, sign_branch=sign_branch)

    @classmethod
    def power_law(cls, k: float, upsilon: float) -> "PdmProfile":
        """Build m = k r^(2 upsilon)."""
        return cls(kind="power-law", k=k, upsilon=upsilon)

    @classmethod
    def shifted_ml(
        cls, lam: float, shift: tuple[float, ...], sign_branch: SignBranch = "plus"
    ) -> "PdmProfile":
        """Build m = 1/(1 +/- lambda |x + xi|^2)."""
        return cls(kind="shifted-ml", lam=lam, sign_branch=sign_branch, shift=tuple(shift))


class OscillatorModel(BaseModel):
    """A mass profile combined with a substitution family."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    profile: PdmProfile = Field(..., description="Mass profile")
    family: Family = Field(..., description="Substitution family")
    dim: int = Field(..., ge=1, description="Configuration-space dimension")
    omega0: float = Field(default=1.0, gt=0.0, description="Reference angular frequency")
    m0: float = Field(default=1.0, gt=0.0, description="Constant mass scale")
    zeta: tuple[float, ...] = Field(
        default=(),
        description="Constant vector of the type-b substitution",
    )
    zeta_sq: float | None = Field(
        default=None,
        alias="zetaSq",
        description="Signed squared magnitude of zeta used by type-b; defaults to |zeta|^2",
    )

    @model_validator(mode="after")
    def check_consistency(self) -> Self:
        """Validate dimensions and family/profile pairing."""
        if self.profile.shift and len(self.profile.shift) != self.dim:
            raise ValueError(f"shift has {len(self.profile.shift)} components, dim is {self.dim}")
        if self.profile.kind == "shifted-ml" and self.family != "type-c":
            raise ValueError("shifted-ml profiles pair with the type-c family only")
        if self.family == "type-b":
            if len(self.zeta) != self.dim:
                raise ValueError(f"type-b needs zeta with {self.dim} components")
            if not any(self.zeta):
                raise ValueError("type-b needs a non-zero zeta")
        elif self.zeta_sq is not None:
            raise ValueError("zeta_sq only applies to the type-b family")
        return self

    @property
    def shift(self) -> FloatArray:
        """Shift vector xi of the profile, zero for unshifted kinds."""
        return self.profile.shift_vector(self.dim)

    @property
    def zeta_vector(self) -> FloatArray:
        """Constant vector zeta as an array (zeros outside type-b)."""
        if not self.zeta:
            return np.zeros(self.dim)
        return np.asarray(self.zeta, dtype=np.float64)

    @property
    def zeta_squared(self) -> float:
        """Signed zeta^2 used by the type-b potential and equations."""
        if self.zeta_sq is not None:
            return self.zeta_sq
        return float(np.dot(self.zeta_vector, self.zeta_vector))

    @property
    def has_formal_zeta(self) -> bool:
        """True when zeta^2 is a formal (negative) bookkeeping value."""
        return self.family == "type-b" and self.zeta_squared < 0.0

    def anchor(self, x: FloatArray) -> FloatArray:
        """
        Deformation anchor y = x + xi.

        Args:
            x: Position(s), shape (..., dim).

        Returns:
            The anchored position(s).
        """
        result: FloatArray = np.asarray(x, dtype=np.float64) + self.shift
        return result
