"""Concentration field unit tests with hand-derived oracles."""

import math

import pytest

from bactlink.errors import ConfigError
from bactlink.fields import ChemoField, QsPuff, QsPuffField


# ---------------------------------------------------------------- chemo

def test_chemo_at_source_equals_c0():
    f = ChemoField(source=(0.0, 0.0), c0=10.0, lam=10.0)
    assert f.at((0.0, 0.0)) == 10.0


def test_chemo_hand_values():
    f = ChemoField(source=(0.0, 0.0), c0=10.0, lam=10.0)
    # r = 10: 10*10/(10+10) = 5
    assert f.at((10.0, 0.0)) == 5.0
    # r = 5 via the 3-4-5 triangle: 100/15 = 20/3
    assert abs(f.at((3.0, 4.0)) - 20.0 / 3.0) < 1e-12
    # c0 = 20, r = 30: 200/40 = 5
    g = ChemoField(source=(0.0, 0.0), c0=20.0, lam=10.0)
    assert g.at((0.0, 30.0)) == 5.0


def test_chemo_offset_source():
    f = ChemoField(source=(20.0, 0.0), c0=10.0, lam=10.0)
    assert f.at((20.0, 0.0)) == 10.0
    assert f.at((0.0, 0.0)) == f.at((40.0, 0.0))


def test_chemo_strictly_decreasing_with_r():
    f = ChemoField(source=(0.0, 0.0), c0=10.0, lam=10.0)
    vals = [f.at((r, 0.0)) for r in (0.0, 0.5, 1.0, 5.0, 25.0, 1e3, 1e6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(0.0 < v <= 10.0 for v in vals)


def test_chemo_validation():
    with pytest.raises(ConfigError):
        ChemoField(source=(0.0, 0.0), c0=-1.0)
    with pytest.raises(ConfigError):
        ChemoField(source=(0.0, 0.0), lam=0.0)


# ---------------------------------------------------------------- QS puffs

def test_puff_validation():
    with pytest.raises(ConfigError):
        QsPuff((0.0, 0.0), t_emit=0.0, q=0.0)
    with pytest.raises(ConfigError):
        QsPuff((0.0, 0.0), t_emit=-1.0, q=1.0)
    with pytest.raises(ConfigError):
        QsPuffField(d_q=0.0)
    with pytest.raises(ConfigError):
        QsPuffField(tau0=0.0)


def test_single_puff_peak_and_offset():
    # q=1, d_q=100 um^2/s, tau0=10 ms, evaluated right at emission:
    # tau = 10 ms = 0.01 s, so peak = q / (4 pi d_q tau) = 1 / (4 pi)
    f = QsPuffField(d_q=100.0, tau0=10.0)
    f.emit((0.0, 0.0), t=0.0, q=1.0)
    assert abs(f.at((0.0, 0.0), 0.0) - 1.0 / (4.0 * math.pi)) < 1e-15
    # at r=2 the exponent is -r^2/(4 d_q tau) = -4/4 = -1
    want = math.exp(-1.0) / (4.0 * math.pi)
    assert abs(f.at((2.0, 0.0), 0.0) - want) < 1e-15
    # 10 ms later the peak has halved: tau doubles to 0.02 s
    assert abs(f.at((0.0, 0.0), 10.0) - 1.0 / (8.0 * math.pi)) < 1e-15


def test_puff_isotropy():
    f = QsPuffField()
    f.emit((3.0, -1.0), t=5.0, q=2.0)
    r = 1.75  # dyadic, so both offsets subtract exactly
    a = f.at((3.0 + r, -1.0), 40.0)
    b = f.at((3.0, -1.0 + r), 40.0)
    assert a == b


def test_future_puff_does_not_contribute():
    f = QsPuffField()
    f.emit((0.0, 0.0), t=50.0, q=1.0)
    assert f.at((0.0, 0.0), 49.0) == 0.0
    assert f.at((0.0, 0.0), 50.0) > 0.0


def test_superposition_is_exact_sum():
    lone1 = QsPuffField()
    lone1.emit((0.0, 0.0), t=0.0, q=1.0)
    lone2 = QsPuffField()
    lone2.emit((4.0, 1.0), t=10.0, q=3.0)
    both = QsPuffField()
    both.emit((0.0, 0.0), t=0.0, q=1.0)
    both.emit((4.0, 1.0), t=10.0, q=3.0)
    for pos in ((0.0, 0.0), (2.0, 0.5), (4.0, 1.0), (-3.0, 2.0)):
        t = 25.0
        assert both.at(pos, t) == lone1.at(pos, t) + lone2.at(pos, t)


def test_prune_drops_decayed_puffs_in_order():
    # peak(t) = q / (4 pi d_q (t - t_emit + tau0) * 1e-3)
    #         = 1 / (0.4 pi (t - t_emit + 10)) for q=1, d_q=100
    f = QsPuffField(d_q=100.0, tau0=10.0, epsilon_prune=0.01)
    f.emit((0.0, 0.0), t=0.0, q=1.0)    # at t=790: peak ~ 9.9e-4 < 0.01
    f.emit((1.0, 0.0), t=780.0, q=1.0)  # at t=790: peak ~ 0.0398 >= 0.01
    f.emit((2.0, 0.0), t=790.0, q=1.0)  # fresh
    removed = f.prune(790.0)
    assert removed == 1
    assert [p.origin[0] for p in f.puffs] == [1.0, 2.0]
    assert len(f) == 2


def test_prune_keeps_everything_when_epsilon_zero():
    f = QsPuffField(epsilon_prune=0.0)
    f.emit((0.0, 0.0), t=0.0, q=1e-12)
    assert f.prune(1e9) == 0
    assert len(f) == 1
