"""Three-step decompositions for generic canonical couplings.

With ``c1 = 1`` and ``c2 = +s^2`` (amplifier-like) or ``c2 = -s^2``
(beam-splitter-like) every gate here is realized as the symmetric sequence
``S1(alpha/s) S2(beta/s) S1(alpha/s)``; ``alpha`` and ``beta`` are rescaled
interaction times.

The root formulas are evaluated in rationalized form (numerator and
denominator multiplied by the conjugate surd). This is the same root, but it
stays accurate at ``phi -> 0``, ``phi = pi/2`` and for large ``r``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AboveThreshold, ConditioningWarning, Degenerate, OutOfRange, WrongClass
from .symplectic_core import CouplingClass, Family, Generator, compose

#: |s - 1| below which s is treated as exactly 1
DEGENERATE_TOL = 1e-12
#: |s - 1| below which a conditioning warning is emitted
WARN_BAND = 1e-3


@dataclass(frozen=True)
class GenericDecomposition:
    alpha: float
    beta: float
    cls: CouplingClass

    def __post_init__(self):
        if self.cls.family is Family.XP:
            raise WrongClass("generic decompositions need an amplifier-like or beam-splitter-like class")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("interaction times must be finite")

    @property
    def steps(self) -> tuple:
        s = self.cls.s
        return (
            (Generator.H1, self.alpha / s),
            (Generator.H2, self.beta / s),
            (Generator.H1, self.alpha / s),
        )

    @property
    def times(self) -> tuple:
        return tuple(t for _, t in self.steps)

    @property
    def total_time(self) -> float:
        return (2 * abs(self.alpha) + abs(self.beta)) / self.cls.s

    def block(self) -> np.ndarray:
        return compose(self.cls, self.steps)


def _check_s(s: float, what: str) -> None:
    if not (s > 0 and math.isfinite(s)):
        raise ValueError(f"s must be finite and positive, got {s!r}")
    if abs(s - 1.0) <= DEGENERATE_TOL:
        raise Degenerate(f"{what} is impossible for s = 1")
    if abs(s - 1.0) < WARN_BAND:
        warnings.warn(
            f"s = {s!r} is within {WARN_BAND} of the degenerate point s = 1; interaction times blow up",
            ConditioningWarning,
            stacklevel=3,
        )


def _check_phi(phi: float) -> None:
    if not (0.0 <= phi <= math.pi / 2):
        raise OutOfRange(f"closed form covers phi in [0, pi/2], got {phi!r}")


def synth_tms_amp(r: float, s: float) -> GenericDecomposition:
    """Two-mode squeezer with ``H1 = x_A p_B + s^2 p_A x_B``.

    Finite for every finite ``r``; ``tanh(alpha)`` tends to ``1/(1/s + 1 + s)``
    while ``beta`` grows without bound.
    """
    if not (r >= 0 and math.isfinite(r)):
        raise OutOfRange(f"two-mode squeezing must be finite and non-negative, got {r!r}")
    _check_s(s, "two-mode squeezing with an amplifier-like coupling")
    q = s + 1 / s
    K = s**-2 + 1 + s**2
    e2 = math.exp(-2 * r)
    u = 4 * K * e2 / (1 + e2) ** 2  # K / cosh(r)^2
    root = math.sqrt(1 + u)
    y = math.tanh(r) / (q + root)
    alpha = math.atanh(y)
    if r == 0:
        return GenericDecomposition(alpha, 0.0, CouplingClass.amplifier(s))
    # tanh(beta) = 2y / (1 - K y^2), evaluated as a log because tanh(beta) -> 1.
    # 1 - 2y - K y^2 = K (y_inf - y)(y - y_2) with y_inf = 1/(q+1), y_2 = -1/(q-1),
    # and y_inf - y = e^{-2r} * gap exactly.
    gap = (2 * (q + 1) / (1 + e2) + 4 * K / ((1 + e2) ** 2 * (1 + root))) / ((q + root) * (q + 1))
    upper = 1 + 2 * y - K * y * y
    beta = r + 0.5 * math.log(upper / (K * gap * (y + 1 / (q - 1))))
    return GenericDecomposition(alpha, beta, CouplingClass.amplifier(s))


def synth_bs_amp(phi: float, s: float) -> GenericDecomposition:
    """Beam splitter with an amplifier-like coupling, ``phi`` in [0, pi/2]."""
    _check_phi(phi)
    _check_s(s, "a beam splitter with an amplifier-like coupling")
    d = 1 / s - s
    K = s**-2 - 1 + s**2
    c = math.cos(phi)
    y = -math.sin(phi) / (d * c + math.copysign(math.sqrt(K - c * c), d))
    alpha = math.atanh(y)
    beta = math.atanh(-2 * y / (1 + K * y * y))
    return GenericDecomposition(alpha, beta, CouplingClass.amplifier(s))


def synth_bs_osc(phi: float, s: float) -> GenericDecomposition:
    """Beam splitter with ``H1 = x_A p_B - s^2 p_A x_B``; ``|alpha|, |beta| <= pi/2``."""
    _check_phi(phi)
    if not (s > 0 and math.isfinite(s)):
        raise ValueError(f"s must be finite and positive, got {s!r}")
    q = s + 1 / s
    K = s**-2 + 1 + s**2
    c = math.cos(phi)
    y = -math.sin(phi) / (q * c + math.sqrt(K + c * c))
    alpha = math.atan(y)
    beta = math.atan(-2 * y / (1 + K * y * y))
    return GenericDecomposition(alpha, beta, CouplingClass.beam_splitter(s))


def r_threshold(s: float) -> float:
    """Largest two-mode squeezing one oscillatory 3-step block can produce."""
    if not (s > 0 and math.isfinite(s)):
        raise ValueError(f"s must be finite and positive, got {s!r}")
    return math.acosh(math.sqrt(s**-2 - 1 + s**2))


def synth_tms_osc(r: float, s: float) -> GenericDecomposition:
    """Two-mode squeezer with an oscillatory coupling, ``0 <= r <= r_threshold(s)``."""
    if not (r >= 0 and math.isfinite(r)):
        raise OutOfRange(f"two-mode squeezing must be finite and non-negative, got {r!r}")
    _check_s(s, "two-mode squeezing with a beam-splitter-like coupling")
    r_th = r_threshold(s)
    if r > r_th:
        raise AboveThreshold(f"r = {r!r} exceeds the single-block threshold {r_th!r} for s = {s!r}")
    d = 1 / s - s
    K = s**-2 - 1 + s**2
    ch = math.cosh(r)
    y = math.sinh(r) / (d * ch + math.copysign(math.sqrt(max(K - ch * ch, 0.0)), d))
    alpha = math.atan(y)
    # the denominator changes sign just below threshold, so keep the quadrant
    beta = math.atan2(2 * y, 1 - K * y * y)
    return GenericDecomposition(alpha, beta, CouplingClass.beam_splitter(s))
