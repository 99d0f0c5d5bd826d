"""Target gates, described by their 2x2 x-block."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def reduce_bs_angle(phi: float) -> float:
    """Reduce an angle to (-pi, pi]; values already in range are returned unchanged."""
    phi = float(phi)
    if -math.pi < phi <= math.pi:
        return phi
    return math.pi - (math.pi - phi) % (2.0 * math.pi)


@dataclass(frozen=True)
class BeamSplitter:
    phi: float
    kind = "bs"

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError("beam-splitter angle must be finite")
        object.__setattr__(self, "phi", reduce_bs_angle(self.phi))

    def block(self) -> np.ndarray:
        c, s = math.cos(self.phi), math.sin(self.phi)
        return np.array([[c, s], [-s, c]])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "phi": self.phi}


@dataclass(frozen=True)
class TwoModeSqueezer:
    r: float
    kind = "tms"

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise ValueError("squeezing must be finite")
        object.__setattr__(self, "r", float(self.r))

    def block(self) -> np.ndarray:
        c, s = math.cosh(self.r), math.sinh(self.r)
        return np.array([[c, s], [s, c]])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r": self.r}


@dataclass(frozen=True)
class SingleModeSqueezer:
    """Squeezes ``x_A`` by ``e^r`` and, necessarily, ``x_B`` by ``e^-r``."""

    r: float
    kind = "sms"

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise ValueError("squeezing must be finite")
        object.__setattr__(self, "r", float(self.r))

    def block(self) -> np.ndarray:
        return np.diag([math.exp(self.r), math.exp(-self.r)])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "r": self.r}


@dataclass(frozen=True)
class Custom:
    """Arbitrary unit-determinant x-block.

    Entries within tolerance of unit determinant are rescaled by
    ``det^(-1/2)`` so the stored block is unimodular to rounding.
    """

    entries: tuple = field()
    kind = "custom"

    def __post_init__(self):
        S = np.asarray(self.entries, dtype=float)
        if S.shape != (2, 2) or not np.all(np.isfinite(S)):
            raise ValueError("custom target must be a finite 2x2 matrix")
        det = float(np.linalg.det(S))
        if abs(det - 1.0) > 1e-9 * max(1.0, float(np.abs(S).max()) ** 2):
            raise ValueError(f"custom target must have unit determinant, got {det!r}")
        if det != 1.0:
            S = S / math.sqrt(det)
        object.__setattr__(self, "entries", tuple(tuple(float(v) for v in row) for row in S))

    def block(self) -> np.ndarray:
        return np.array(self.entries)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "matrix": [list(row) for row in self.entries]}


@dataclass(frozen=True)
class Identity:
    kind = "identity"

    def block(self) -> np.ndarray:
        return np.eye(2)

    def to_dict(self) -> dict:
        return {"kind": self.kind}


TargetGate = BeamSplitter | TwoModeSqueezer | SingleModeSqueezer | Custom | Identity


def target_from_dict(d: dict) -> TargetGate:
    kind = d["kind"]
    if kind == "bs":
        return BeamSplitter(float(d["phi"]))
    if kind == "tms":
        return TwoModeSqueezer(float(d["r"]))
    if kind == "sms":
        return SingleModeSqueezer(float(d["r"]))
    if kind == "custom":
        return Custom(tuple(tuple(row) for row in d["matrix"]))
    if kind == "identity":
        return Identity()
    raise ValueError(f"unknown target kind {kind!r}")


def parse_target(text: str) -> TargetGate:
    """Parse ``bs:<phi>``, ``tms:<r>``, ``sms:<r>`` or ``custom:a,b,c,d``."""
    kind, sep, value = text.partition(":")
    if not sep:
        raise ValueError(f"target must look like kind:value, got {text!r}")
    kind = kind.strip().lower()
    if kind == "custom":
        vals = [float(v) for v in value.split(",")]
        if len(vals) != 4:
            raise ValueError("custom target needs four comma-separated entries")
        return Custom(((vals[0], vals[1]), (vals[2], vals[3])))
    x = float(value)
    if kind == "bs":
        return BeamSplitter(x)
    if kind == "tms":
        return TwoModeSqueezer(x)
    if kind == "sms":
        return SingleModeSqueezer(x)
    raise ValueError(f"unknown target kind {kind!r}")
