"""Services package for the numerical core."""

from src.services.dynamics_service import PerAxisMassSpec
from src.services.integrators import DormandPrince45, Integrator, RungeKutta4
from src.services.verification_service import VerificationService

__all__ = [
    "PerAxisMassSpec",
    "Integrator",
    "RungeKutta4",
    "DormandPrince45",
    "VerificationService",
]
