"""Symplectic building blocks for two coupled modes.

Quadratures are ordered ``(x_A, x_B, p_A, p_B)`` throughout. A unitary ``U``
is represented by the real 4x4 matrix ``M`` of its Heisenberg action,
``U^dag r U = M r``, so a time-ordered product ``U_2 U_1`` maps to ``M_2 M_1``.

The local phase shift ``exp(-i phi a^dag a)`` acts as::

    x -> x cos(phi) + p sin(phi)
    p -> -x sin(phi) + p cos(phi)

Canonical Hamiltonians ``c1 x_A p_B + c2 p_A x_B`` never mix ``x`` with ``p``,
so their evolution is ``diag(S, R)`` with ``R = (S^-1)^T`` and only the 2x2
x-block ``S`` needs to be tracked. Time is measured in units of ``1/c1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonlocalityError, Singular, WrongClass

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-10

#: relative size of |c2|/c1 below which a coupling is treated as pure XP
XP_TOL = 1e-12


class Generator(enum.Enum):
    """The two canonical Hamiltonians reachable by local phase shifts."""

    H1 = "H1"
    H2 = "H2"

    @property
    def other(self) -> "Generator":
        return Generator.H2 if self is Generator.H1 else Generator.H1


class Family(enum.Enum):
    XP = "xp"
    AMPLIFIER = "amplifier"
    BEAM_SPLITTER = "beam_splitter"


def _reduce_angle(phi: float) -> float:
    phi = float(phi) % TWO_PI
    # x % 2pi can round up to exactly 2pi for tiny negative x
    if phi >= TWO_PI or phi == 0.0:
        return 0.0
    return phi


@dataclass(frozen=True)
class PhaseShiftPair:
    """Local phase shifts ``(phi_A, phi_B)`` in radians, reduced to [0, 2pi)."""

    phi_a: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.phi_a) and math.isfinite(self.phi_b)):
            raise ValueError("phase shifts must be finite")
        object.__setattr__(self, "phi_a", _reduce_angle(self.phi_a))
        object.__setattr__(self, "phi_b", _reduce_angle(self.phi_b))

    def __add__(self, other: "PhaseShiftPair") -> "PhaseShiftPair":
        return PhaseShiftPair(self.phi_a + other.phi_a, self.phi_b + other.phi_b)

    def __neg__(self) -> "PhaseShiftPair":
        return PhaseShiftPair(-self.phi_a, -self.phi_b)

    def __sub__(self, other: "PhaseShiftPair") -> "PhaseShiftPair":
        return self + (-other)

    @property
    def is_identity(self) -> bool:
        return self.phi_a == 0.0 and self.phi_b == 0.0


IDENTITY_PHASE = PhaseShiftPair()


@dataclass(frozen=True)
class CouplingMatrix:
    """Coefficients of ``c11 xA xB + c12 xA pB + c21 pA xB + c22 pA pB``.

    Rows are indexed by ``(x_A, p_A)`` and columns by ``(x_B, p_B)``, so
    ``H = u_A^T C u_B`` with ``u_j = (x_j, p_j)``.
    """

    c11: float
    c12: float
    c21: float
    c22: float

    def __post_init__(self):
        vals = (self.c11, self.c12, self.c21, self.c22)
        if not all(math.isfinite(v) for v in vals):
            raise NonlocalityError("coupling entries must be finite")
        if all(v == 0.0 for v in vals):
            raise NonlocalityError("the all-zero coupling is local and cannot synthesize anything")
        for name, v in zip(("c11", "c12", "c21", "c22"), vals):
            object.__setattr__(self, name, float(v))

    @classmethod
    def from_matrix(cls, C) -> "CouplingMatrix":
        C = np.asarray(C, dtype=float)
        if C.shape != (2, 2):
            raise ValueError(f"coupling matrix must be 2x2, got shape {C.shape}")
        return cls(C[0, 0], C[0, 1], C[1, 0], C[1, 1])

    @classmethod
    def canonical(cls, c1: float, c2: float) -> "CouplingMatrix":
        """Matrix of ``c1 x_A p_B + c2 p_A x_B``."""
        return cls(0.0, c1, c2, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c21, self.c22]])


@dataclass(frozen=True)
class CouplingClass:
    """Dynamical class of a canonical Hamiltonian normalized to ``c1 = 1``.

    ``s`` is defined by ``|c2| = s**2`` and is ``None`` for the XP family.
    """

    family: Family
    s: float | None = None

    def __post_init__(self):
        if self.family is Family.XP:
            if self.s is not None:
                raise ValueError("XP coupling has no s parameter")
        elif self.s is None or not (self.s > 0 and math.isfinite(self.s)):
            raise ValueError(f"{self.family.value} coupling needs finite s > 0, got {self.s!r}")

    @classmethod
    def xp(cls) -> "CouplingClass":
        return cls(Family.XP)

    @classmethod
    def amplifier(cls, s: float) -> "CouplingClass":
        return cls(Family.AMPLIFIER, float(s))

    @classmethod
    def beam_splitter(cls, s: float) -> "CouplingClass":
        return cls(Family.BEAM_SPLITTER, float(s))

    @classmethod
    def from_ratio(cls, ratio: float, tol: float = XP_TOL) -> "CouplingClass":
        """Classify from ``c2/c1``."""
        if abs(ratio) <= tol:
            return cls.xp()
        if ratio > 0:
            return cls.amplifier(math.sqrt(ratio))
        return cls.beam_splitter(math.sqrt(-ratio))

    @property
    def c2(self) -> float:
        """Normalized second coupling constant (``c1 = 1``)."""
        if self.family is Family.XP:
            return 0.0
        sign = 1.0 if self.family is Family.AMPLIFIER else -1.0
        return sign * self.s**2

    @property
    def tms_degenerate(self) -> bool:
        """True when ``H1 == H2`` (amplifier family with ``s = 1``)."""
        return self.family is Family.AMPLIFIER and abs(self.s - 1.0) <= 1e-12

    def matches(self, other: "CouplingClass", tol: float = 1e-9) -> bool:
        if self.family is not other.family:
            return False
        if self.family is Family.XP:
            return True
        return abs(self.s - other.s) <= tol * max(1.0, self.s)

    def to_dict(self) -> dict:
        out = {"family": self.family.value}
        if self.s is not None:
            out["s"] = self.s
        return out


@dataclass(frozen=True)
class CanonicalHamiltonian:
    """Canonical form ``c1 x_A p_B + c2 p_A x_B`` of a native coupling.

    ``rot_a``, ``rot_b`` are the local phase shifts that take the native
    Hamiltonian to the canonical one: ``conjugate_hamiltonian(native,
    rotation) == canonical``.
    """

    c1: float
    c2: float
    rot_a: float = 0.0
    rot_b: float = 0.0
    sign_degenerate: bool = False

    def __post_init__(self):
        if not (self.c1 > 0 and math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise NonlocalityError(f"canonical form needs finite c1 > 0, got c1={self.c1!r}")
        object.__setattr__(self, "rot_a", _reduce_angle(self.rot_a))
        object.__setattr__(self, "rot_b", _reduce_angle(self.rot_b))

    @property
    def rotation(self) -> PhaseShiftPair:
        return PhaseShiftPair(self.rot_a, self.rot_b)

    @property
    def coupling_class(self) -> CouplingClass:
        return CouplingClass.from_ratio(self.c2 / self.c1)

    @property
    def is_rotated(self) -> bool:
        return not self.rotation.is_identity

    def canonical_coupling(self) -> CouplingMatrix:
        return CouplingMatrix.canonical(self.c1, self.c2)

    def native_coupling(self) -> CouplingMatrix:
        """Native coupling reconstructed by undoing the canonicalizing rotation."""
        return conjugate_hamiltonian(self.canonical_coupling(), -self.rotation)


_QUARTER = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def cos_sin(phi: float) -> tuple:
    """``(cos, sin)`` that is exact at multiples of ``pi/2``.

    Quarter turns are the most common phase shifts; the rounding in
    ``cos(pi/2) = 6e-17`` otherwise leaks x into p and is amplified by strong
    squeezing.
    """
    k = round(phi / (math.pi / 2))
    if abs(phi - k * (math.pi / 2)) <= 4 * math.ulp(max(1.0, abs(phi))):
        return _QUARTER[k % 4]
    return math.cos(phi), math.sin(phi)


def _rot2(phi: float) -> np.ndarray:
    c, s = cos_sin(phi)
    return np.array([[c, s], [-s, c]])


_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def canonical_form(C: CouplingMatrix, tol: float = 1e-12) -> CanonicalHamiltonian:
    """Reduce a coupling to ``c1 x_A p_B + c2 p_A x_B`` by local rotations.

    ``c1`` is the largest singular value of ``C`` and ``|c2|`` the smallest.
    Local phase shifts are proper rotations and leave ``det C`` invariant,
    while the canonical matrix ``[[0, c1], [c2, 0]]`` has determinant
    ``-c1 c2``; hence ``sign(c2) = -sign(det C)``. When ``det C`` vanishes
    (relative to ``tol``) ``c2`` is set to zero and ``sign_degenerate`` is set.
    """
    # Working with D = C P (P swaps columns) turns the target into diag(c1, c2)
    # and the rotation on mode B into its P-conjugate, which is again a rotation.
    D = C.matrix @ _SWAP
    U, sig, Vt = np.linalg.svd(D)
    V = Vt.T
    c1, c2 = float(sig[0]), float(sig[1])
    if np.linalg.det(U) < 0:
        U[:, 1] *= -1
        c2 = -c2
    if np.linalg.det(V) < 0:
        V[:, 1] *= -1
        c2 = -c2
    sign_degenerate = abs(c2) <= tol * c1
    if sign_degenerate:
        c2 = 0.0
    RA = U
    RB = _SWAP @ V @ _SWAP
    rot_a = math.atan2(RA[0, 1], RA[0, 0])
    rot_b = math.atan2(RB[0, 1], RB[0, 0])
    return CanonicalHamiltonian(c1, c2, rot_a, rot_b, sign_degenerate)


def conjugate_hamiltonian(C: CouplingMatrix, ph: PhaseShiftPair) -> CouplingMatrix:
    """Coupling of ``V^dag H V`` with ``V = exp(-i phi_A a^dag a) exp(-i phi_B b^dag b)``."""
    return CouplingMatrix.from_matrix(_rot2(ph.phi_a).T @ C.matrix @ _rot2(ph.phi_b))


#: table of phase pairs turning H1 into each signed canonical generator
SIGNED_GENERATOR_PHASES = {
    (Generator.H1, +1): PhaseShiftPair(0.0, 0.0),
    (Generator.H2, +1): PhaseShiftPair(math.pi / 2, 3 * math.pi / 2),
    (Generator.H1, -1): PhaseShiftPair(math.pi, 0.0),
    (Generator.H2, -1): PhaseShiftPair(math.pi / 2, math.pi / 2),
}


def generator_matrix(cls: CouplingClass, which: Generator) -> np.ndarray:
    """2x2 matrix ``A`` with ``dx/dt = A x`` for the normalized ``H1``/``H2``."""
    c2 = cls.c2
    if which is Generator.H1:
        return np.array([[0.0, c2], [1.0, 0.0]])
    return np.array([[0.0, 1.0], [c2, 0.0]])


def propagator_xp(which: Generator, t: float) -> np.ndarray:
    """x-block of ``exp(-i H t)`` for ``H1 = x_A p_B`` or ``H2 = p_A x_B``."""
    if which is Generator.H1:
        return np.array([[1.0, 0.0], [t, 1.0]])
    return np.array([[1.0, t], [0.0, 1.0]])


def propagator_generic(cls: CouplingClass, which: Generator, t: float) -> np.ndarray:
    """x-block for ``H1 = x_A p_B + c2 p_A x_B`` (or ``H2``) with ``c2 = +-s^2``."""
    if cls.family is Family.XP:
        raise WrongClass("propagator_generic needs an amplifier-like or beam-splitter-like class")
    s = cls.s
    if cls.family is Family.AMPLIFIER:
        c, sh = math.cosh(s * t), math.sinh(s * t)
        if which is Generator.H1:
            return np.array([[c, s * sh], [sh / s, c]])
        return np.array([[c, sh / s], [s * sh, c]])
    c, sn = math.cos(s * t), math.sin(s * t)
    if which is Generator.H1:
        return np.array([[c, -s * sn], [sn / s, c]])
    return np.array([[c, sn / s], [-s * sn, c]])


def propagator(cls: CouplingClass, which: Generator, t: float) -> np.ndarray:
    """Dispatch to the closed-form propagator of the right family."""
    if cls.family is Family.XP:
        return propagator_xp(which, t)
    return propagator_generic(cls, which, t)


def compose(cls: CouplingClass, steps) -> np.ndarray:
    """x-block of a time-ordered sequence of ``(generator, t)`` steps."""
    S = np.eye(2)
    for which, t in steps:
        S = propagator(cls, which, t) @ S
    return S


def p_block(S, tol: float = DEFAULT_TOL, *, unimodular: bool = False) -> np.ndarray:
    """Momentum block ``R = (S^-1)^T`` paired with an x-block ``S``.

    With ``unimodular=True`` the determinant is taken to be exactly 1 and
    ``R`` is the adjugate. Use it for blocks that have unit determinant
    analytically: for strong squeezing the computed ``cosh^2 - sinh^2``
    loses most of its digits and dividing by it only adds error.
    """
    S = np.asarray(S, dtype=float)
    adj = np.array([[S[1, 1], -S[1, 0]], [-S[0, 1], S[0, 0]]])
    if unimodular:
        return adj
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    if abs(det) < tol:
        raise Singular(f"x-block is singular (det = {det:.3e})")
    return adj / det


def lift_full(S, tol: float = DEFAULT_TOL, *, unimodular: bool = False) -> np.ndarray:
    """4x4 matrix ``diag(S, (S^-1)^T)`` on ``(x_A, x_B, p_A, p_B)``."""
    S = np.asarray(S, dtype=float)
    M = np.zeros((4, 4))
    M[:2, :2] = S
    M[2:, 2:] = p_block(S, tol, unimodular=unimodular)
    return M


def phase_rotation_full(ph: PhaseShiftPair) -> np.ndarray:
    """Heisenberg matrix of the local phase shift pair."""
    M = np.zeros((4, 4))
    for x, p, phi in ((0, 2, ph.phi_a), (1, 3, ph.phi_b)):
        c, s = cos_sin(phi)
        M[x, x], M[x, p] = c, s
        M[p, x], M[p, p] = -s, c
    return M


def symplectic_form() -> np.ndarray:
    """``Omega`` for the ordering ``(x_A, x_B, p_A, p_B)``."""
    return np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


def symplectic_defect(M) -> float:
    """``max |M Omega M^T - Omega|``."""
    M = np.asarray(M, dtype=float)
    Om = symplectic_form()
    return float(np.abs(M @ Om @ M.T - Om).max())


def hamiltonian_generator(C: CouplingMatrix) -> np.ndarray:
    """4x4 ``A`` with ``dr/dt = A r`` for the quadratic Hamiltonian ``C``.

    Built as ``Omega K`` from the Hessian ``K`` of ``H``; it does not use any
    of the closed-form propagators, so ``expm(A t)`` is an independent check.
    """
    K = np.zeros((4, 4))
    # rows/cols: xA=0, xB=1, pA=2, pB=3; H = u_A^T C u_B with u_A=(xA,pA), u_B=(xB,pB)
    a_idx, b_idx = (0, 2), (1, 3)
    Cm = C.matrix
    for i, a in enumerate(a_idx):
        for j, b in enumerate(b_idx):
            K[a, b] = K[b, a] = Cm[i, j]
    return symplectic_form() @ K
