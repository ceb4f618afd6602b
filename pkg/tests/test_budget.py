import pytest
from hypothesis import given, strategies as st

from bellsim.budget import (
    DETECTION_THRESHOLD_EXACT,
    SPEED_OF_LIGHT,
    Mode,
    TimingModel,
    compare_modes,
    detection_feasible,
    detection_threshold,
    min_separation,
    reference_budget,
)

times = st.floats(0, 1e-3, allow_nan=False)


def test_photon_experiment_separation():
    assert min_separation(TimingModel(1.0e-6, 0.3e-6)) == pytest.approx(389.7, abs=0.1)


def test_zero_times():
    assert min_separation(TimingModel(0, 0)) == 0


def test_povm_mode_ignores_selection():
    assert min_separation(TimingModel(5e-6, 400e-9, Mode.POVM)) == pytest.approx(119.9, abs=0.05)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        TimingModel(-1e-9, 0)


def test_threshold():
    assert detection_threshold() == 0.828
    assert DETECTION_THRESHOLD_EXACT == pytest.approx(0.8284271247461903)
    assert not detection_feasible(0.05)
    assert detection_feasible(1.0)


def test_compare_examples():
    c = compare_modes(1e-6, 100e-9)
    assert c.saving == pytest.approx(299.8, abs=0.05)
    c = compare_modes(0, 1e-6)
    assert c.saving == 0 and c.standard == c.povm
    c = compare_modes(400e-9, 400e-9)
    assert c.standard == pytest.approx(239.8, abs=0.05)
    assert c.povm == pytest.approx(119.9, abs=0.05)


@given(times, times)
def test_povm_never_worse(t_s, t_m):
    c = compare_modes(t_s, t_m)
    assert c.povm <= c.standard
    assert (c.saving > 0) == (t_s > 0)
    if t_s == 0:
        assert c.povm == c.standard
    assert c.saving == SPEED_OF_LIGHT * t_s


@given(times, times, times)
def test_monotone(t_s, t_m, extra):
    base = TimingModel(t_s, t_m)
    assert min_separation(TimingModel(t_s + extra, t_m)) >= min_separation(base)
    assert min_separation(TimingModel(t_s, t_m + extra)) >= min_separation(base)


def test_reference_budget():
    ref = reference_budget()
    assert ref["photon"]["locality_closed"] and not ref["photon"]["detection_closed"]
    assert not ref["ion"]["locality_closed"]
