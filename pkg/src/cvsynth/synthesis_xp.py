"""Closed-form decompositions for the XP coupling ``H1 = x_A p_B``, ``H2 = p_A x_B``.

A decomposition lists steps in time order, so ``[(H1, a), (H2, b), (H1, c)]``
composes to ``S1(c) @ S2(b) @ S1(a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveR, PoleAngle, ZeroAlpha
from .gates import reduce_bs_angle
from .symplectic_core import CouplingClass, Generator, compose

#: distance from phi = pi below which tan(phi/2) is treated as the pole
POLE_TOL = 1e-12


@dataclass(frozen=True)
class DecompositionParams:
    """Alternating ``(generator, time)`` steps for a fixed coupling class."""

    steps: tuple
    cls: CouplingClass = CouplingClass.xp()

    def __post_init__(self):
        steps = tuple((Generator(g), float(t)) for g, t in self.steps)
        if not steps:
            raise ValueError("a decomposition needs at least one step")
        for (g0, _), (g1, _) in zip(steps, steps[1:]):
            if g0 is g1:
                raise ValueError("consecutive steps must use different generators")
        if not all(math.isfinite(t) for _, t in steps):
            raise ValueError("step times must be finite")
        object.__setattr__(self, "steps", steps)

    @property
    def times(self) -> tuple:
        return tuple(t for _, t in self.steps)

    @property
    def total_time(self) -> float:
        return sum(abs(t) for t in self.times)

    def block(self) -> np.ndarray:
        return compose(self.cls, self.steps)

    def inverse(self) -> "DecompositionParams":
        return DecompositionParams(tuple((g, -t) for g, t in reversed(self.steps)), self.cls)


def _three(alpha: float, beta: float, gamma: float) -> DecompositionParams:
    return DecompositionParams(((Generator.H1, alpha), (Generator.H2, beta), (Generator.H1, gamma)))


def synth_bs_xp(phi: float) -> DecompositionParams:
    """Beam splitter ``[[cos, sin], [-sin, cos]]`` in three steps.

    Raises:
        PoleAngle: if ``phi = pi`` (mod 2 pi); split into two ``pi/2`` swaps instead.
    """
    phi = reduce_bs_angle(phi)
    if abs(math.pi - phi) < POLE_TOL:
        raise PoleAngle("phi = pi is a pole of tan(phi/2); compose two pi/2 swaps instead")
    # tan(phi/2) in half-angle form: exact at phi = pi/2, accurate up to the pole
    c, sn = math.cos(phi), math.sin(phi)
    half_tan = sn / (1 + c) if c >= 0 else (1 - c) / sn
    alpha = -half_tan
    return _three(alpha, math.sin(phi), alpha)


def synth_tms_xp(r: float) -> DecompositionParams:
    """Two-mode squeezer ``[[cosh, sinh], [sinh, cosh]]`` in three steps."""
    alpha = math.tanh(r / 2)
    return _three(alpha, math.sinh(r), alpha)


def split_tms(r: float, n: int) -> list[DecompositionParams]:
    """``n`` equal two-mode squeezers of strength ``r/n``.

    The middle step grows like ``sinh r``, so for large ``r`` splitting
    trades extra steps for a shorter total interaction time.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    return [synth_tms_xp(r / n) for _ in range(n)]


def optimal_alpha_sms(r: float) -> float:
    """Free parameter minimizing ``|a| + |b| + |c| + |d|`` of the 4-step squeezer."""
    if not r > 0:
        raise NonPositiveR(f"optimal alpha is derived for r > 0, got r = {r!r}")
    return math.sqrt(math.expm1(2 * r) / (1 + math.exp(-r)))


def synth_sms_xp(r: float, alpha: float | None = None) -> DecompositionParams:
    """Single-mode squeezer ``diag(e^r, e^-r)`` in four steps.

    The solutions form a one-parameter family in ``alpha``; when ``alpha`` is
    omitted the time-optimal value for ``|r|`` is used (the family stays exact
    for negative ``r``). ``r = 0`` without ``alpha`` gives the all-zero limit.
    """
    if alpha is None:
        if r == 0:
            return DecompositionParams(
                ((Generator.H1, 0.0), (Generator.H2, 0.0), (Generator.H1, 0.0), (Generator.H2, 0.0))
            )
        alpha = optimal_alpha_sms(abs(r))
    elif alpha == 0:
        raise ZeroAlpha("alpha must be nonzero")
    em1 = math.expm1(r)
    beta = em1 / alpha
    gamma = -alpha * math.exp(-r)
    delta = -math.exp(r) * em1 / alpha
    return DecompositionParams(
        ((Generator.H1, alpha), (Generator.H2, beta), (Generator.H1, gamma), (Generator.H2, delta))
    )
