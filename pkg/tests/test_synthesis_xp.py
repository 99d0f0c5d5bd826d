import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvsynth.errors import NonPositiveR, PoleAngle, ZeroAlpha
from cvsynth.gates import BeamSplitter, SingleModeSqueezer, TwoModeSqueezer
from cvsynth.symplectic_core import Generator
from cvsynth.synthesis_xp import (
    DecompositionParams,
    optimal_alpha_sms,
    split_tms,
    synth_bs_xp,
    synth_sms_xp,
    synth_tms_xp,
)


def test_swap():
    p = synth_bs_xp(math.pi / 2)
    assert p.times == (-1.0, 1.0, -1.0)
    assert np.allclose(p.block(), [[0, 1], [-1, 0]], atol=1e-15)


def test_balanced_beam_splitter():
    a, b, g = synth_bs_xp(math.pi / 4).times
    assert a == g == pytest.approx(1 - math.sqrt(2), rel=1e-15)
    assert b == pytest.approx(math.sqrt(2) / 2, rel=1e-15)


@given(st.floats(-3.1, 3.1))
def test_beam_splitter_composes(phi):
    assert np.allclose(synth_bs_xp(phi).block(), BeamSplitter(phi).block(), atol=1e-10)


def test_beam_splitter_angle_reduced():
    assert synth_bs_xp(0.5 + 2 * math.pi).times == pytest.approx(synth_bs_xp(0.5).times, abs=1e-12)


@pytest.mark.parametrize("phi", [math.pi, -math.pi, 3 * math.pi])
def test_beam_splitter_pole(phi):
    with pytest.raises(PoleAngle):
        synth_bs_xp(phi)


def test_beam_splitter_near_pole_is_accurate():
    phi = math.pi - 1e-6
    a = synth_bs_xp(phi).times[0]
    assert a == pytest.approx(-math.tan(phi / 2), rel=1e-9)


def test_tms_r1_values():
    a, b, g = synth_tms_xp(1.0).times
    assert a == pytest.approx(0.46211716, abs=1e-8)
    assert b == pytest.approx(1.17520119, abs=1e-8)
    assert g == a


@given(st.floats(-4, 4))
def test_tms_composes(r):
    S = TwoModeSqueezer(r).block()
    assert np.allclose(synth_tms_xp(r).block(), S, atol=1e-10 * np.abs(S).max())


def test_tms_zero_is_identity():
    assert synth_tms_xp(0.0).times == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_split_tms_composes(n):
    blocks = split_tms(2.0, n)
    assert len(blocks) == n
    S = np.eye(2)
    for b in blocks:
        S = b.block() @ S
    assert np.allclose(S, TwoModeSqueezer(2.0).block(), atol=1e-12)


def test_split_tms_shortens_large_squeezing():
    totals = [sum(b.total_time for b in split_tms(5.0, n)) for n in (1, 2, 4)]
    assert totals[0] > totals[1] > totals[2]


def test_split_tms_rejects_zero():
    with pytest.raises(ValueError):
        split_tms(1.0, 0)


def test_sms_values_at_r1_alpha1():
    a, b, g, d = synth_sms_xp(1.0, 1.0).times
    e = math.e
    assert a == 1.0
    assert b == pytest.approx(e - 1, rel=1e-15)
    assert g == pytest.approx(-1 / e, rel=1e-15)
    assert d == pytest.approx(e * (1 - e), rel=1e-15)


@given(st.floats(-3, 3), st.floats(0.05, 20) | st.floats(-20, -0.05))
def test_sms_family_composes(r, alpha):
    S = SingleModeSqueezer(r).block()
    got = synth_sms_xp(r, alpha).block()
    assert np.allclose(got, S, atol=1e-9 * max(1.0, np.abs(got).max()))


def test_sms_negative_r_one():
    assert np.allclose(synth_sms_xp(-1.0, 1.0).block(), np.diag([math.exp(-1), math.e]), atol=1e-14)


def test_sms_optimal_alpha_on_grid():
    r = 1.0
    a_opt = optimal_alpha_sms(r)
    t_opt = synth_sms_xp(r, a_opt).total_time
    grid = np.linspace(0.1 * a_opt, 10 * a_opt, 1000)
    assert t_opt <= min(synth_sms_xp(r, a).total_time for a in grid) + 1e-9


@pytest.mark.parametrize("r", [0.01, 0.3, 1.0, 2.5])
def test_sms_default_uses_optimal_alpha(r):
    assert synth_sms_xp(r).times[0] == optimal_alpha_sms(r)


def test_sms_sqrt_scaling():
    ratios = [max(abs(t) for t in synth_sms_xp(r).times) / math.sqrt(r) for r in (1e-3, 1e-4, 1e-5)]
    assert max(ratios) / min(ratios) < 1.05


def test_sms_zero_r():
    assert synth_sms_xp(0.0).times == (0.0, 0.0, 0.0, 0.0)


def test_sms_errors():
    with pytest.raises(ZeroAlpha):
        synth_sms_xp(1.0, 0.0)
    with pytest.raises(NonPositiveR):
        optimal_alpha_sms(0.0)


def test_sms_random_targets():
    rng = np.random.default_rng(3)
    for r in rng.uniform(-3, 3, 1000):
        if r == 0:
            continue
        S = synth_sms_xp(r).block()
        assert np.allclose(S, SingleModeSqueezer(r).block(), atol=1e-10 * max(1.0, math.exp(abs(r))))


@pytest.mark.parametrize("which", ["tms", "bs"])
def test_bs_tms_duality_small_argument(which):
    # tanh(e/2) and tan(e/2) both deviate from e/2 at third order
    def dev(eps):
        if which == "tms":
            return abs(synth_tms_xp(eps).times[0] - eps / 2)
        return abs(synth_bs_xp(eps).times[0] + eps / 2)

    for eps in (1e-1, 1e-2):
        assert dev(eps) / eps**3 == pytest.approx(1 / 24, rel=0.01)
    assert dev(0.02) / dev(0.01) == pytest.approx(8, rel=0.01)


def test_random_targets_exact():
    rng = np.random.default_rng(1000)
    for phi, r in zip(rng.uniform(-math.pi, math.pi, 1000), rng.uniform(-5, 5, 1000)):
        assert np.abs(synth_bs_xp(phi).block() - BeamSplitter(phi).block()).max() < 1e-10
        assert np.abs(synth_tms_xp(r).block() - TwoModeSqueezer(r).block()).max() < 1e-10


def test_outer_steps_equal():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-3, 3, 100):
        for p in (synth_bs_xp(x), synth_tms_xp(x)):
            assert p.times[0] == p.times[2]


def test_sms_family_diagonal():
    rng = np.random.default_rng(100)
    for r, alpha in zip(rng.uniform(-3, 3, 100), rng.uniform(0.1, 5, 100) * rng.choice([-1, 1], 100)):
        S = synth_sms_xp(r, alpha).block()
        assert abs(S[0, 1]) < 1e-10 and abs(S[1, 0]) < 1e-10
        assert S[0, 0] * S[1, 1] == pytest.approx(1.0, abs=1e-10)


def test_tms_beta_grows_exponentially():
    assert synth_tms_xp(10.0).times[1] == pytest.approx(math.exp(10) / 2, rel=1e-8)


def test_params_validation():
    with pytest.raises(ValueError):
        DecompositionParams(((Generator.H1, 1.0), (Generator.H1, 2.0)))
    with pytest.raises(ValueError):
        DecompositionParams(())
    with pytest.raises(ValueError):
        DecompositionParams(((Generator.H1, math.inf),))


def test_inverse():
    p = synth_bs_xp(0.9)
    assert np.allclose(p.inverse().block() @ p.block(), np.eye(2), atol=1e-14)
