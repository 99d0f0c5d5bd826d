"""Turn abstract decompositions into physical pulse schedules.

A schedule runs the *native* Hamiltonian only forward in time. Each abstract
step ``(generator, t)`` is realized by conjugating the native evolution with
a local phase shift chosen from ``SIGNED_GENERATOR_PHASES`` (composed with the
canonicalizing rotation when the native coupling is not canonical) and
running it for ``|t|``. Adjacent phase shifts are fused into a single one.

Durations are dimensionless, in units of ``1/c1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import ClassMismatch, Degenerate, NoConvergence, OutOfRange, PoleAngle, Unsupported
from .gates import BeamSplitter, Custom, Identity, SingleModeSqueezer, TwoModeSqueezer
from .symplectic_core import (
    IDENTITY_PHASE,
    SIGNED_GENERATOR_PHASES,
    CanonicalHamiltonian,
    CouplingClass,
    Family,
    Generator,
    PhaseShiftPair,
)
from .synthesis_generic import (
    DEGENERATE_TOL,
    r_threshold,
    synth_bs_amp,
    synth_bs_osc,
    synth_tms_amp,
    synth_tms_osc,
)
from .synthesis_xp import (
    DecompositionParams,
    split_tms,
    synth_bs_xp,
    synth_sms_xp,
    synth_tms_xp,
)

DEFAULT_MARGIN = 0.1


@dataclass(frozen=True)
class ScheduleStep:
    """Phase shift, then evolution under the native Hamiltonian for ``duration``.

    ``post_phase`` is only non-trivial in unfused schedules, where every step
    undoes its own phase shift.
    """

    pre_phase: PhaseShiftPair
    duration: float
    post_phase: PhaseShiftPair = IDENTITY_PHASE

    def __post_init__(self):
        if not (self.duration >= 0 and math.isfinite(self.duration)):
            raise ValueError(f"durations must be finite and non-negative, got {self.duration!r}")


@dataclass(frozen=True)
class GateSchedule:
    steps: tuple
    post_phase: PhaseShiftPair
    target: object
    coupling_class: CouplingClass
    canonicalization_phase: PhaseShiftPair | None = None
    n_blocks: int = 1
    fused: bool = True

    @property
    def total_time(self) -> float:
        return math.fsum(step.duration for step in self.steps)


def _blocks(params) -> list:
    if isinstance(params, (list, tuple)):
        return list(params)
    return [params]


def build_schedule(
    params,
    native: CanonicalHamiltonian,
    target=None,
    *,
    fuse: bool = True,
) -> GateSchedule:
    """Schedule one decomposition, or a list of them run back to back.

    Steps with zero time are dropped, so an identity decomposition yields an
    empty schedule.

    Raises:
        ClassMismatch: if any block was synthesized for another coupling class.
    """
    blocks = _blocks(params)
    native_cls = native.coupling_class
    for block in blocks:
        if not block.cls.matches(native_cls):
            raise ClassMismatch(
                f"parameters are for {block.cls.to_dict()}, native coupling is {native_cls.to_dict()}"
            )
    rot = native.rotation
    frames = []
    for block in blocks:
        for g, t in block.steps:
            if t == 0:
                continue
            sign = 1 if t > 0 else -1
            frames.append((rot + SIGNED_GENERATOR_PHASES[(g, sign)], abs(t)))

    if fuse:
        steps, prev = [], IDENTITY_PHASE
        for phase, duration in frames:
            steps.append(ScheduleStep(phase - prev, duration))
            prev = phase
        post = -prev
    else:
        steps = [ScheduleStep(phase, duration, -phase) for phase, duration in frames]
        post = IDENTITY_PHASE

    if target is None:
        target = Identity() if not frames else _composed_target(blocks)
    return GateSchedule(
        steps=tuple(steps),
        post_phase=post,
        target=target,
        coupling_class=native_cls,
        canonicalization_phase=rot if native.is_rotated else None,
        n_blocks=len(blocks),
        fused=fuse,
    )


def _composed_target(blocks) -> Custom:
    S = blocks[0].block()
    for block in blocks[1:]:
        S = block.block() @ S
    return Custom(S)


def _bs_blocks(phi: float, synth, s: float) -> list:
    # closed forms cover [0, pi/2]; other angles become n equal in-range blocks
    phi = phi % (2 * math.pi)
    n = max(1, math.ceil(phi / (math.pi / 2) - 1e-12))
    return [synth(phi / n, s)] * n


def _native_for(cls: CouplingClass) -> CanonicalHamiltonian:
    return CanonicalHamiltonian(1.0, cls.c2)


def schedule_tms_above_threshold(
    r: float,
    s: float,
    margin: float = DEFAULT_MARGIN,
    native: CanonicalHamiltonian | None = None,
    *,
    fuse: bool = True,
) -> GateSchedule:
    """Two-mode squeezing with an oscillatory coupling, split into equal blocks.

    Uses ``n = ceil(r / ((1 - margin) r_th(s)))`` blocks so each stays clear of
    the threshold, where the closed form is ill-conditioned.
    """
    if not 0 < margin < 1:
        raise ValueError(f"margin must lie in (0, 1), got {margin!r}")
    if not (r >= 0 and math.isfinite(r)):
        raise OutOfRange(f"two-mode squeezing must be finite and non-negative, got {r!r}")
    if abs(s - 1.0) <= DEGENERATE_TOL:
        raise Degenerate("s = 1 gives r_th = 0; no number of blocks can squeeze")
    if native is None:
        native = _native_for(CouplingClass.beam_splitter(s))
    r_th = r_threshold(s)
    n = max(1, math.ceil(r / ((1 - margin) * r_th)))
    blocks = [synth_tms_osc(r / n, s)] * n
    return build_schedule(blocks, native, TwoModeSqueezer(r), fuse=fuse)


def resolve_pole_bs(native: CanonicalHamiltonian | None = None, *, fuse: bool = True) -> GateSchedule:
    """``phi = pi`` beam splitter (``-I`` on the x-block) as two swaps."""
    if native is None:
        native = _native_for(CouplingClass.xp())
    swap = synth_bs_xp(math.pi / 2)
    return build_schedule([swap, swap], native, BeamSplitter(math.pi), fuse=fuse)


def synthesize(
    target,
    native: CanonicalHamiltonian,
    *,
    margin: float = DEFAULT_MARGIN,
    split: int = 1,
    fuse: bool = True,
    oracle_seeds: int = 50,
) -> GateSchedule:
    """Pick the synthesis route for ``target`` on ``native`` and schedule it.

    Oscillatory two-mode squeezing is always routed through
    :func:`schedule_tms_above_threshold`, which returns a single block when
    ``r`` is small enough. Custom targets go to the brute-force solver with
    the smallest step count that converges.
    """
    cls = native.coupling_class
    fam = cls.family

    if isinstance(target, Custom):
        return _synthesize_custom(target, native, fuse=fuse, seeds=oracle_seeds)
    if isinstance(target, Identity):
        return build_schedule([], native, target, fuse=fuse)

    if fam is Family.XP:
        if isinstance(target, BeamSplitter):
            try:
                params = synth_bs_xp(target.phi)
            except PoleAngle:
                return resolve_pole_bs(native, fuse=fuse)
            return build_schedule(params, native, target, fuse=fuse)
        if isinstance(target, TwoModeSqueezer):
            blocks = split_tms(target.r, split) if split > 1 else synth_tms_xp(target.r)
            return build_schedule(blocks, native, target, fuse=fuse)
        if isinstance(target, SingleModeSqueezer):
            return build_schedule(synth_sms_xp(target.r), native, target, fuse=fuse)

    if isinstance(target, SingleModeSqueezer):
        raise Unsupported("single-mode squeezing is only synthesized for the XP coupling")

    if fam is Family.AMPLIFIER:
        if abs(cls.s - 1.0) <= DEGENERATE_TOL:
            raise Degenerate("c1 = c2 makes H1 = H2; no gate can be synthesized")
        if isinstance(target, BeamSplitter):
            return build_schedule(_bs_blocks(target.phi, synth_bs_amp, cls.s), native, target, fuse=fuse)
        if isinstance(target, TwoModeSqueezer):
            return build_schedule(synth_tms_amp(target.r, cls.s), native, target, fuse=fuse)

    if fam is Family.BEAM_SPLITTER:
        if isinstance(target, BeamSplitter):
            return build_schedule(_bs_blocks(target.phi, synth_bs_osc, cls.s), native, target, fuse=fuse)
        if isinstance(target, TwoModeSqueezer):
            return schedule_tms_above_threshold(target.r, cls.s, margin, native, fuse=fuse)

    raise Unsupported(f"no route for {type(target).__name__} on a {fam.value} coupling")


def _synthesize_custom(target: Custom, native: CanonicalHamiltonian, *, fuse: bool, seeds: int) -> GateSchedule:
    # imported here: oracle_verify is the verification side and must not depend on this module
    from .oracle_verify import brute_force_params

    cls = native.coupling_class
    S = target.block()
    for n in range(1, 7):
        for first in Generator:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NoConvergence)
                res = brute_force_params(S, cls, n, seeds, first=first)
            if res.converged:
                params = DecompositionParams(res.steps, cls)
                return build_schedule(params, native, target, fuse=fuse)
    raise Unsupported("brute-force search found no decomposition with up to 6 steps")

