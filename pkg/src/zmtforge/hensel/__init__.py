"""Hensel systems, Newton iteration, and the Multivariate Hensel Lemma."""

from .system import (HenselSystem, IsolationData, NewtonState, extend_system, isolate_zero, newton_run,
                     newton_step, rational_inverse, verify_newton_state)
from .monic import MonicizationResult, cleared_identity, monicize, verify_monicization
from .reduce import (MhlResult, MhlRun, TransportedZero, mhl_pipeline, mhl_reduce, normalize_sign, residual_shape,
                     transport_zero, unique_zero_check, verify_hensel_polynomial, verify_mhl)

__all__ = [
    "HenselSystem", "IsolationData", "NewtonState", "extend_system", "isolate_zero", "newton_run",
    "newton_step", "rational_inverse", "verify_newton_state",
    "MonicizationResult", "cleared_identity", "monicize", "verify_monicization",
    "MhlResult", "MhlRun", "TransportedZero", "mhl_pipeline", "mhl_reduce", "normalize_sign", "residual_shape",
    "transport_zero", "unique_zero_check", "verify_hensel_polynomial", "verify_mhl",
]
