import math

import numpy as np
import pytest

from xythermo import oracle, thermometry
from xythermo.spectrum import ChainSpec


def _flat(sites=8):
    return ChainSpec(gamma=1.0, field_ratio=0.0, sites=sites)


def test_rejects_nonpositive_temperature():
    spec = _flat()
    for bad in (0.0, -0.3, -math.inf, math.nan):
        with pytest.raises(ValueError):
            thermometry.ensemble(spec, bad)


def test_occupations_limits():
    spec = ChainSpec(gamma=0.5, field_ratio=0.5, sites=8)
    hot = thermometry.ensemble(spec, 1e9)
    assert np.max(np.abs(hot.occupations - 0.5)) < 1e-8
    cold = thermometry.ensemble(spec, 1e-9)
    assert np.max(cold.occupations) < 1e-8
    mid = thermometry.ensemble(spec, 0.7)
    assert np.all(mid.occupations > 0.0) and np.all(mid.occupations < 0.5)
    assert len(mid.occupations) == 8


def test_flat_band_occupation_closed_form():
    ens = thermometry.ensemble(_flat(), 2.0)  # every mode at energy 2J, T = 2J
    assert np.allclose(ens.occupations, 1.0 / (1.0 + math.e), atol=1e-14)


def test_infinite_temperature_is_exact():
    ens = thermometry.ensemble(_flat(), math.inf)
    assert np.all(ens.occupations == 0.5)
    assert thermometry.energy_variance(ens) == pytest.approx(8.0 * 4.0 * 0.25)
    assert thermometry.qfi(ens) == 0.0
    assert thermometry.snr_crb(ens) == 0.0


def test_energy_variance_flat_band():
    for T in (0.2, 1.0, 3.0):
        ens = thermometry.ensemble(_flat(), T)
        n = 1.0 / (1.0 + math.exp(2.0 / T))
        assert thermometry.energy_variance(ens) == pytest.approx(8 * 4 * n * (1 - n), rel=1e-13)
    cold = thermometry.ensemble(ChainSpec(gamma=0.5, field_ratio=0.5, sites=8), 1e-9)
    assert thermometry.energy_variance(cold) == pytest.approx(0.0, abs=1e-12)


def test_energy_variance_matches_dense_reference():
    spec = ChainSpec(gamma=0.5, field_ratio=0.5, sites=8)
    sys = oracle.build(spec, oracle.MATCHED)
    got = thermometry.energy_variance(thermometry.ensemble(spec, 0.3))
    h1 = oracle.thermal_expectation(sys, 0.3, "H")
    h2 = oracle.thermal_expectation(sys, 0.3, "H2")
    assert got == pytest.approx(h2 - h1 * h1, rel=1e-9)


def test_qfi_flat_band_and_decay():
    for T in (0.5, 2.0):
        ens = thermometry.ensemble(_flat(), T)
        n = 1.0 / (1.0 + math.exp(2.0 / T))
        assert thermometry.qfi(ens) == pytest.approx(8 * (2.0 / T**2) ** 2 * n * (1 - n), rel=1e-12)
    big = thermometry.qfi(thermometry.ensemble(_flat(), 1e6))
    assert 0.0 < big < 1e-23  # ~ const/T^4


def test_qfi_additive_over_modes():
    spec = ChainSpec(gamma=0.3, field_ratio=1.2, sites=10)
    ens = thermometry.ensemble(spec, 0.4)
    per_mode = (ens.modes.energies / 0.4**2) ** 2 * ens.occupations * (1 - ens.occupations)
    assert thermometry.qfi(ens) == pytest.approx(float(np.sum(per_mode)), rel=1e-14)


def test_qfi_matches_dense_reference():
    spec = ChainSpec(gamma=0.3, field_ratio=1.2, sites=8)
    sys = oracle.build(spec, oracle.MATCHED)
    for T in (0.1, 0.4, 1.0):
        got = thermometry.qfi(thermometry.ensemble(spec, T))
        assert got == pytest.approx(oracle.oracle_qfi(sys, T), rel=1e-10)


def test_uncertainty_relation_saturates_by_construction():
    # (dH)^2 * (dT)^2 / T^4 = 1 with (dT)^2 = 1/qfi
    for gamma, f, T in ((1.0, 0.0, 0.2), (0.5, 1.5, 0.7), (0.0, 0.4, 1.3)):
        ens = thermometry.ensemble(ChainSpec(gamma=gamma, field_ratio=f, sites=8), T)
        lhs = thermometry.energy_variance(ens) / thermometry.qfi(ens) / T**4
        assert lhs == pytest.approx(1.0, abs=1e-12)


def test_snr_crb_flat_band_value():
    ens = thermometry.ensemble(_flat(), 0.2)
    n = 1.0 / (1.0 + math.exp(10.0))
    assert thermometry.snr_crb(ens) == pytest.approx(8 * 100 * n * (1 - n), rel=1e-12)


def test_snr_crb_equals_t2_qfi():
    ens = thermometry.ensemble(ChainSpec(gamma=0.6, field_ratio=0.9, sites=12), 0.35)
    assert thermometry.snr_crb(ens) == pytest.approx(0.35**2 * thermometry.qfi(ens), rel=1e-12)


def test_snr_crb_parameter_symmetries():
    base = ChainSpec(gamma=0.7, field_ratio=0.8, sites=12)
    ref = thermometry.snr_crb(thermometry.ensemble(base, 0.3))
    for g, f in ((0.7, -0.8), (-0.7, 0.8)):
        other = ChainSpec(gamma=g, field_ratio=f, sites=12)
        assert thermometry.snr_crb(thermometry.ensemble(other, 0.3)) == pytest.approx(ref, rel=1e-10)


def test_snr_crb_vanishes_at_both_extremes_and_is_unimodal():
    spec = ChainSpec(gamma=0.5, field_ratio=0.5, sites=12)
    grid = np.geomspace(1e-3, 1e4, 61)
    values = np.array([thermometry.snr_crb(thermometry.ensemble(spec, float(t))) for t in grid])
    assert values[0] < 1e-10 and values[-1] < 1e-6  # tails fall off as 1/T^2
    assert np.all(values >= 0.0)
    rises = np.diff(values) > 0
    # monotone up to the peak, monotone down after: exactly one switch
    switches = int(np.sum(rises[:-1] != rises[1:]))
    assert switches == 1


def test_reduced_energies_and_fluctuation_weights():
    ens = thermometry.ensemble(ChainSpec(gamma=0.4, field_ratio=1.1, sites=8), 0.5)
    assert np.allclose(ens.reduced_energies(), ens.modes.energies / 0.5, atol=1e-15)
    w = ens.fluctuation_weights()
    assert np.allclose(w, ens.occupations * (1 - ens.occupations), atol=1e-15)
