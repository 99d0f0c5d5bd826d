"""Synthesis of two-mode Gaussian gates from a fixed quadratic coupling and local phase shifts."""

__version__ = "0.1.0"

from .errors import DocumentError, SynthesisError  # noqa: E402
from .gates import BeamSplitter, Custom, Identity, SingleModeSqueezer, TwoModeSqueezer, parse_target  # noqa: E402
from .oracle_verify import brute_force_params, replay, verify  # noqa: E402
from .scheduler import GateSchedule, build_schedule, synthesize  # noqa: E402
from .symplectic_core import (  # noqa: E402
    CanonicalHamiltonian,
    CouplingClass,
    CouplingMatrix,
    Generator,
    PhaseShiftPair,
    canonical_form,
)

__all__ = [
    "BeamSplitter",
    "CanonicalHamiltonian",
    "CouplingClass",
    "CouplingMatrix",
    "Custom",
    "DocumentError",
    "GateSchedule",
    "Generator",
    "Identity",
    "PhaseShiftPair",
    "SingleModeSqueezer",
    "SynthesisError",
    "TwoModeSqueezer",
    "brute_force_params",
    "build_schedule",
    "canonical_form",
    "parse_target",
    "replay",
    "synthesize",
    "verify",
]
