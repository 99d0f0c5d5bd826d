"""Acceptance criteria, one marker per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
"""

import math
import warnings

import numpy as np
import pytest

from cvsynth.cli import main
from cvsynth.errors import AboveThreshold, NoConvergence
from cvsynth.gates import BeamSplitter, SingleModeSqueezer, TwoModeSqueezer
from cvsynth.oracle_verify import (
    CovarianceState,
    brute_force_params,
    evolve_gaussian,
    oscillation_period,
    replay,
)
from cvsynth.scheduler import build_schedule, schedule_tms_above_threshold, synthesize
from cvsynth.symplectic_core import (
    SIGNED_GENERATOR_PHASES,
    CanonicalHamiltonian,
    CouplingClass,
    CouplingMatrix,
    Generator,
    canonical_form,
    conjugate_hamiltonian,
    lift_full,
    symplectic_defect,
)
from cvsynth.synthesis_generic import (
    r_threshold,
    synth_bs_amp,
    synth_bs_osc,
    synth_tms_amp,
    synth_tms_osc,
)
from cvsynth.synthesis_xp import optimal_alpha_sms, synth_bs_xp, synth_sms_xp, synth_tms_xp

XP = CanonicalHamiltonian(1.0, 0.0)


def _replay_error(params, target, native=XP):
    sched = build_schedule(params, native, target)
    M = replay(sched, native)
    return float(np.abs(M - lift_full(target.block(), unimodular=True)).max())


# 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "swap gate")
def test_c1_swap_gate():
    params = synth_bs_xp(math.pi / 2)
    assert params.times == (-1.0, 1.0, -1.0)
    assert _replay_error(params, BeamSplitter(math.pi / 2)) < 1e-12


# 2 ---------------------------------------------------------------------------

@pytest.mark.criterion(2, "balanced beam splitter")
def test_c2_balanced_beam_splitter():
    a, b, g = synth_bs_xp(math.pi / 4).times
    expected_a = 1 - math.sqrt(2)
    assert abs(a - expected_a) <= 1e-15 * abs(expected_a)
    assert abs(g - expected_a) <= 1e-15 * abs(expected_a)
    assert abs(b - math.sqrt(2) / 2) <= 1e-15 * (math.sqrt(2) / 2)
    assert _replay_error(synth_bs_xp(math.pi / 4), BeamSplitter(math.pi / 4)) < 1e-12


# 3 ---------------------------------------------------------------------------

@pytest.mark.criterion(3, "two-mode squeezer closed form")
@pytest.mark.parametrize("r", [0.1, 1.0, 3.0])
def test_c3_tms_closed_form(r):
    params = synth_tms_xp(r)
    a, b, g = params.times
    assert a == pytest.approx(math.tanh(r / 2), rel=1e-15)
    assert g == pytest.approx(math.tanh(r / 2), rel=1e-15)
    assert b == pytest.approx(math.sinh(r), rel=1e-15)
    assert np.abs(params.block() - TwoModeSqueezer(r).block()).max() < 1e-11


# 4 ---------------------------------------------------------------------------

def _sms_time(r, alpha):
    return synth_sms_xp(r, alpha).total_time


@pytest.mark.criterion(4, "single-mode squeezer optimality")
def test_c4_sms_optimal_alpha():
    r = 1.0
    a_opt = optimal_alpha_sms(r)
    t_opt = _sms_time(r, a_opt)
    for a in np.linspace(0.1 * a_opt, 10 * a_opt, 1000):
        assert t_opt <= _sms_time(r, a) + 1e-9
    h = 1e-5 * a_opt
    deriv = (_sms_time(r, a_opt + h) - _sms_time(r, a_opt - h)) / (2 * h)
    assert abs(deriv) < 1e-6 * t_opt


# 5 ---------------------------------------------------------------------------

@pytest.mark.criterion(5, "single-mode squeezer sqrt(r) scaling")
def test_c5_sms_sqrt_scaling():
    def ratio(r):
        return max(abs(t) for t in synth_sms_xp(r).times) / math.sqrt(r)

    hi, lo = ratio(1e-3), ratio(1e-4)
    assert abs(hi - lo) / lo < 0.05


# 6 ---------------------------------------------------------------------------

@pytest.mark.criterion(6, "amplifier two-mode squeezer asymptote")
def test_c6_amplifier_tms_asymptote():
    d = synth_tms_amp(20.0, 2.0)
    assert abs(math.tanh(d.alpha) - 1 / 3.5) < 1e-6
    betas = [synth_tms_amp(r, 2.0).beta for r in np.linspace(0.1, 20.0, 50)]
    assert all(b1 > b0 for b0, b1 in zip(betas, betas[1:]))


# 7 ---------------------------------------------------------------------------

@pytest.mark.criterion(7, "oscillatory threshold")
def test_c7_oscillatory_threshold():
    s = 2.0
    r_th = r_threshold(s)
    assert abs(r_th - math.acosh(math.sqrt(3.25))) < 1e-12
    # frozen from the oracle evaluation of arccosh(sqrt(3.25))
    assert abs(r_th - 1.1947632172871092) < 1e-12
    synth_tms_osc(r_th - 1e-6, s)
    with pytest.raises(AboveThreshold):
        synth_tms_osc(r_th + 1e-6, s)
    native = CanonicalHamiltonian(1.0, -s * s)
    sched = schedule_tms_above_threshold(2 * r_th, s, native=native)
    assert sched.n_blocks > 1
    M = replay(sched, native)
    assert np.abs(M - lift_full(TwoModeSqueezer(2 * r_th).block(), unimodular=True)).max() < 1e-9


# 8 ---------------------------------------------------------------------------

@pytest.mark.criterion(8, "phase-shift table")
def test_c8_phase_shift_table():
    rng = np.random.default_rng(8)
    for _ in range(100):
        c1 = rng.uniform(0.1, 3.0)
        c2 = rng.uniform(-c1, c1)
        C = CouplingMatrix.canonical(c1, c2)
        h1 = np.array([[0, c1], [c2, 0]])
        h2 = np.array([[0, c2], [c1, 0]])
        expected = {
            (Generator.H1, +1): h1,
            (Generator.H2, +1): h2,
            (Generator.H1, -1): -h1,
            (Generator.H2, -1): -h2,
        }
        for key, ph in SIGNED_GENERATOR_PHASES.items():
            got = conjugate_hamiltonian(C, ph).matrix
            assert np.abs(got - expected[key]).max() < 1e-12


# 9 ---------------------------------------------------------------------------

def _random_couplings(n=500, seed=9):
    rng = np.random.default_rng(seed)
    return [CouplingMatrix.from_matrix(rng.uniform(-1, 1, (2, 2))) for _ in range(n)]


@pytest.mark.criterion(9, "canonical form")
def test_c9_reconstruction():
    for C in _random_couplings():
        H = canonical_form(C)
        rotated = conjugate_hamiltonian(C, H.rotation).matrix
        assert np.abs(rotated - H.canonical_coupling().matrix).max() < 1e-10


@pytest.mark.criterion(9, "canonical form")
def test_c9_c1_dominates():
    for C in _random_couplings():
        H = canonical_form(C)
        assert H.c1 >= abs(H.c2)


@pytest.mark.criterion(9, "canonical form")
def test_c9_sign_follows_det():
    mismatches = 0
    checked = 0
    for C in _random_couplings():
        det = float(np.linalg.det(C.matrix))
        if abs(det) <= 1e-12:
            continue
        checked += 1
        if np.sign(canonical_form(C).c2) != np.sign(det):
            mismatches += 1
    assert mismatches == 0, f"sign(c2) != sign(det C) for {mismatches} of {checked} couplings"


# 10 --------------------------------------------------------------------------

def _closed_form_cases(n=50, seed=10):
    rng = np.random.default_rng(seed)

    def draw_s():
        return float(rng.uniform(0.3, 0.8)) if rng.random() < 0.5 else float(rng.uniform(1.3, 3.0))

    cases = []
    for k in range(n):
        kind = k % 6
        if kind == 0:
            cases.append(synth_bs_xp(rng.uniform(0.05, math.pi / 2)))
        elif kind == 1:
            cases.append(synth_tms_xp(rng.uniform(0.05, 2.0)))
        elif kind == 2:
            cases.append(synth_bs_amp(rng.uniform(0.05, math.pi / 2), draw_s()))
        elif kind == 3:
            cases.append(synth_tms_amp(rng.uniform(0.05, 2.0), draw_s()))
        elif kind == 4:
            cases.append(synth_bs_osc(rng.uniform(0.05, math.pi / 2), draw_s()))
        else:
            s = draw_s()
            cases.append(synth_tms_osc(rng.uniform(0.05, 0.9) * r_threshold(s), s))
    return cases


@pytest.mark.criterion(10, "brute-force oracle cross-check")
def test_c10_brute_force_reproduces_closed_forms():
    for d in _closed_form_cases():
        times = [t for _, t in d.steps]
        res = brute_force_params(d.block(), d.cls, 3, 8)
        assert res.converged
        period = oscillation_period(d.cls)

        def distance(x):
            diffs = [a - b for a, b in zip(x, times)]
            if period is not None:
                diffs = [math.remainder(v, period) for v in diffs]
            return max(abs(v) for v in diffs)

        assert min(distance(x) for x in res.solutions) < 1e-5


@pytest.mark.criterion(10, "brute-force oracle cross-check")
def test_c10_sms_three_steps_insufficient():
    S = SingleModeSqueezer(1.0).block()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoConvergence)
        for first in Generator:
            assert brute_force_params(S, CouplingClass.xp(), 3, 50, first=first).residual >= 0.1
    assert brute_force_params(S, CouplingClass.xp(), 4, 50).residual < 1e-10


# 11 --------------------------------------------------------------------------

_SUITE = [
    (CanonicalHamiltonian(1.0, 0.0), BeamSplitter(0.7)),
    (CanonicalHamiltonian(1.0, 0.0), BeamSplitter(math.pi)),
    (CanonicalHamiltonian(1.0, 0.0), TwoModeSqueezer(1.5)),
    (CanonicalHamiltonian(1.0, 0.0), SingleModeSqueezer(0.8)),
    (CanonicalHamiltonian(1.0, 0.25), BeamSplitter(1.2)),
    (CanonicalHamiltonian(1.0, 0.25), TwoModeSqueezer(2.0)),
    (CanonicalHamiltonian(1.0, -4.0), BeamSplitter(0.3)),
    (CanonicalHamiltonian(1.0, -4.0), TwoModeSqueezer(2.5)),
    (canonical_form(CouplingMatrix(0.3, -1.2, 0.7, 0.4)), TwoModeSqueezer(0.4)),
    (canonical_form(CouplingMatrix(0.2, 1.0, 0.5, -0.1)), BeamSplitter(0.9)),
]


@pytest.mark.criterion(11, "symplectic and Gaussian suite")
def test_c11_replays_are_symplectic():
    for native, target in _SUITE:
        for fuse in (True, False):
            M = replay(synthesize(target, native, fuse=fuse), native)
            assert symplectic_defect(M) < 1e-10


@pytest.mark.criterion(11, "symplectic and Gaussian suite")
@pytest.mark.parametrize("native", [CanonicalHamiltonian(1.0, 0.0), CanonicalHamiltonian(1.0, 0.25)])
def test_c11_tms_reduces_relative_variance(native):
    M = replay(synthesize(TwoModeSqueezer(1.0), native), native)
    vac = CovarianceState.vacuum()
    out = evolve_gaussian(vac, M)
    v = [1.0, -1.0, 0.0, 0.0]
    ratio = out.variance(v) / vac.variance(v)
    assert abs(ratio - math.exp(-2)) <= 1e-9 * math.exp(-2)


# 12 --------------------------------------------------------------------------

_CLI_MATRIX = [
    (["--canonical", "1,0"], "bs:0.7"),
    (["--canonical", "1,0"], "bs:3.141592653589793"),
    (["--canonical", "1,0"], "tms:1"),
    (["--canonical", "1,0", "--split", "2"], "tms:2"),
    (["--canonical", "1,0"], "sms:0.5"),
    (["--hamiltonian", "0.6,0.8,-0.3,-0.4"], "bs:0.7"),
    (["--hamiltonian", "0.6,0.8,-0.3,-0.4"], "tms:1"),
    (["--hamiltonian", "0.6,0.8,-0.3,-0.4"], "sms:0.5"),
    (["--canonical", "1,0.25"], "bs:0.7"),
    (["--canonical", "1,0.25"], "tms:1"),
    (["--canonical", "1,0.25"], "tms:3"),
    (["--hamiltonian", "0.2,1.0,0.5,-0.1"], "bs:0.7"),
    (["--hamiltonian", "0.2,1.0,0.5,-0.1"], "tms:1"),
    (["--canonical", "1,-4"], "bs:0.7"),
    (["--canonical", "1,-4"], "tms:0.5"),
    (["--canonical", "1,-4"], "tms:2"),
    (["--hamiltonian", "0.3,-1.2,0.7,0.4"], "bs:0.7"),
    (["--hamiltonian", "0.3,-1.2,0.7,0.4"], "tms:0.3"),
    (["--canonical", "1,0"], "custom:2,1,1,1"),
    (["--canonical", "1,0.25"], "custom:1,0.5,0,1"),
]


@pytest.mark.criterion(12, "end-to-end CLI")
@pytest.mark.parametrize("coupling,target", _CLI_MATRIX)
def test_c12_cli_round_trip(tmp_path, coupling, target):
    out = tmp_path / "schedule.json"
    assert main(["synthesize", *coupling, "--target", target, "--out", str(out)]) == 0
    assert main(["verify", "--schedule", str(out), "--tol", "1e-9"]) == 0


@pytest.mark.criterion(12, "end-to-end CLI")
def test_c12_degenerate_coupling_exits_2(capsys):
    assert main(["synthesize", "--canonical", "1,1", "--target", "tms:1"]) == 2
    assert "Degenerate" in capsys.readouterr().err
