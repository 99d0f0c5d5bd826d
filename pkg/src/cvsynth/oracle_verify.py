"""Independent checks of synthesized schedules.

``replay`` rebuilds the 4x4 Heisenberg matrix of a schedule from phase
rotations and lifted propagators, ``evolve_gaussian`` pushes covariance
matrices through it, and ``brute_force_params`` re-derives step times by
multi-start least squares without looking at any closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import ClassMismatch, NoConvergence
from .symplectic_core import (
    CanonicalHamiltonian,
    CouplingClass,
    Generator,
    compose,
    generator_matrix,
    lift_full,
    phase_rotation_full,
    propagator,
    symplectic_defect,
    symplectic_form,
)


def evolution_full(H: CanonicalHamiltonian, t: float) -> np.ndarray:
    """Heisenberg matrix of ``exp(-i H_native t)``, ``t`` in units of ``1/c1``.

    ``H_native = V H_c V^dag`` with ``V`` the canonicalizing rotation.
    """
    E = lift_full(propagator(H.coupling_class, Generator.H1, t), unimodular=True)
    if not H.is_rotated:
        return E
    return phase_rotation_full(H.rotation) @ E @ phase_rotation_full(-H.rotation)


def replay(schedule, H: CanonicalHamiltonian, log: list | None = None) -> np.ndarray:
    """4x4 matrix realized by running ``schedule`` on the native Hamiltonian ``H``.

    If ``log`` is a list, one dict per step is appended to it.
    """
    if not schedule.coupling_class.matches(H.coupling_class):
        raise ClassMismatch(
            f"schedule built for {schedule.coupling_class.to_dict()}, "
            f"Hamiltonian is {H.coupling_class.to_dict()}"
        )
    M = np.eye(4)
    for i, step in enumerate(schedule.steps):
        M = phase_rotation_full(step.pre_phase) @ M
        M = evolution_full(H, step.duration) @ M
        if not step.post_phase.is_identity:
            M = phase_rotation_full(step.post_phase) @ M
        if log is not None:
            log.append(
                {
                    "index": i,
                    "phiA": step.pre_phase.phi_a,
                    "phiB": step.pre_phase.phi_b,
                    "duration": step.duration,
                    "symplectic_defect": symplectic_defect(M),
                }
            )
    return phase_rotation_full(schedule.post_phase) @ M


@dataclass(frozen=True)
class CovarianceState:
    """Gaussian covariance matrix over ``(x_A, x_B, p_A, p_B)``; vacuum is ``I/2``."""

    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        if sigma.shape != (4, 4):
            raise ValueError("covariance matrix must be 4x4")
        if not np.allclose(sigma, sigma.T, atol=1e-12 * max(1.0, np.abs(sigma).max())):
            raise ValueError("covariance matrix must be symmetric")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def vacuum(cls) -> "CovarianceState":
        return cls(0.5 * np.eye(4))

    def uncertainty_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of ``sigma + (i/2) Omega``; all >= 0 for a physical state."""
        return np.linalg.eigvalsh(self.sigma + 0.5j * symplectic_form())

    def is_physical(self, tol: float = 1e-10) -> bool:
        return bool(self.uncertainty_eigenvalues().min() >= -tol)

    def purity_det(self) -> float:
        """``det(2 sigma)``; equals 1 exactly for pure states."""
        return float(np.linalg.det(2 * self.sigma))

    def variance(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(v @ self.sigma @ v)

    def marginal(self, mode: str) -> np.ndarray:
        """2x2 covariance of ``(x, p)`` for mode ``"A"`` or ``"B"``."""
        idx = {"A": [0, 2], "B": [1, 3]}[mode]
        return self.sigma[np.ix_(idx, idx)]


def evolve_gaussian(state: CovarianceState, M) -> CovarianceState:
    M = np.asarray(M, dtype=float)
    return CovarianceState(M @ state.sigma @ M.T)


@dataclass(frozen=True)
class VerificationReport:
    max_entry_error: float
    symplectic_defect: float
    tol: float
    steps: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_entry_error < self.tol and self.symplectic_defect < self.tol

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "tol": self.tol,
            "max_entry_error": self.max_entry_error,
            "symplectic_defect": self.symplectic_defect,
            "steps": self.steps,
        }


def verify(schedule, H: CanonicalHamiltonian, target=None, tol: float = 1e-9) -> VerificationReport:
    """Compare the replayed schedule with the lifted target block.

    Never raises on a mismatch; failures are carried by the report.
    """
    target = schedule.target if target is None else target
    log: list = []
    M = replay(schedule, H, log)
    err = float(np.abs(M - lift_full(target.block(), unimodular=True)).max())
    return VerificationReport(err, symplectic_defect(M), tol, log)


@dataclass(frozen=True)
class BruteForceResult:
    times: tuple
    generators: tuple
    residual: float
    converged: bool
    #: distinct converged parameter vectors, best first
    solutions: tuple = ()

    @property
    def steps(self) -> tuple:
        return tuple(zip(self.generators, self.times))


def _alternating(first: Generator, n: int) -> tuple:
    g, out = first, []
    for _ in range(n):
        out.append(g)
        g = g.other
    return tuple(out)


def _residual_and_jacobian(cls: CouplingClass, gens, target: np.ndarray):
    gen_mats = [generator_matrix(cls, g) for g in gens]

    def factors(x):
        return [propagator(cls, g, t) for g, t in zip(gens, x)]

    def fun(x):
        S = np.eye(2)
        for F in factors(x):
            S = F @ S
        return (S - target).ravel()

    def jac(x):
        F = factors(x)
        n = len(F)
        # prefix[k] = F[k-1] ... F[0]; suffix[k] = F[n-1] ... F[k+1]
        prefix = [np.eye(2)]
        for f in F:
            prefix.append(f @ prefix[-1])
        suffix = [np.eye(2)] * n
        acc = np.eye(2)
        for k in range(n - 1, -1, -1):
            suffix[k] = acc
            acc = acc @ F[k]
        J = np.empty((4, n))
        for k in range(n):
            # d/dt exp(A t) = A exp(A t)
            J[:, k] = (suffix[k] @ gen_mats[k] @ F[k] @ prefix[k]).ravel()
        return J

    return fun, jac


def brute_force_params(
    target,
    cls: CouplingClass,
    n_steps: int,
    seeds=50,
    *,
    first: Generator = Generator.H1,
    bound: float = 10.0,
    start_range: float = 3.0,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> BruteForceResult:
    """Solve ``compose(steps) == target`` for the step times by multi-start least squares.

    Args:
        target: 2x2 x-block with unit determinant.
        cls: coupling class whose ``H1``/``H2`` propagators are used.
        n_steps: number of alternating steps, 1 to 6.
        seeds: number of random starts, or an explicit sequence of integer
            seeds; start ``k`` is drawn uniformly from ``[-start_range,
            start_range]`` with ``numpy.random.default_rng(seed_k)``.
        first: generator of the first step.
        bound: box constraint ``|t_i| <= bound`` on every step time. Without
            it some infeasible targets have residuals that tend to zero only
            as the times diverge.
        tol: max-entry residual regarded as converged.
        max_iter: evaluation cap per start.

    Returns:
        The best result over all starts; ties in residual are broken by the
        lexicographically smallest time vector. A :class:`NoConvergence`
        warning is issued if no start reaches ``tol``.
    """
    if not 1 <= n_steps <= 6:
        raise ValueError("n_steps must be between 1 and 6")
    target = np.asarray(target, dtype=float)
    det = float(np.linalg.det(target))
    if abs(det - 1.0) > 1e-9 * max(1.0, float(np.abs(target).max()) ** 2):
        raise ValueError(f"target must have unit determinant, got {det!r}")
    seed_list = list(range(seeds)) if isinstance(seeds, int) else [int(s) for s in seeds]
    gens = _alternating(first, n_steps)
    fun, jac = _residual_and_jacobian(cls, gens, target)

    found = []
    for seed in seed_list:
        x0 = np.random.default_rng(seed).uniform(-start_range, start_range, n_steps)
        x0 = np.clip(x0, -bound, bound)
        sol = least_squares(
            fun, x0, jac=jac, bounds=(-bound, bound), method="trf",
            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_iter,
        )
        x = sol.x
        res = float(np.abs(compose(cls, zip(gens, x)) - target).max())
        found.append((res, tuple(float(v) for v in x)))

    found.sort()
    best_res, best_x = found[0]
    converged = best_res < tol
    if not converged:
        warnings.warn(
            f"no start reached residual {tol:g}; best residual {best_res:.3e}",
            NoConvergence,
            stacklevel=2,
        )
    solutions = []
    for res, x in found:
        if res >= tol:
            break
        if not any(max(abs(a - b) for a, b in zip(x, y)) < 1e-6 for y in solutions):
            solutions.append(x)
    return BruteForceResult(best_x, gens, best_res, converged, tuple(solutions))


def oscillation_period(cls: CouplingClass) -> float | None:
    """Period of the oscillatory propagators, ``2 pi / s``; ``None`` otherwise."""
    if cls.s is not None and cls.c2 < 0:
        return 2 * math.pi / cls.s
    return None
