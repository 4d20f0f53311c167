import numpy as np
import pytest

from pdmforecast.bayes import NodeId, validate_topology
from pdmforecast.errors import InvalidModel, MissingComponent, StateOutOfRange, UnknownComponent
from pdmforecast.fixtures import four_component, parallel_pair, series_pair
from pdmforecast.forecast import SystemModel, forecast_at, forecast_curve, point_mass_reliability
from pdmforecast.markov import validate_tpm
from pdmforecast.oracle import brute_force_forecast

from helpers import random_health, random_tree_model

SYS, A, B = NodeId(1, 0), NodeId(2, 0), NodeId(2, 1)


MONOTONE = {"series": series_pair, "parallel": parallel_pair, "four": four_component}


class TestSeriesFixture:
    def test_hand_enumerated_values(self):
        m = series_pair()
        h = m.health(0, 0)
        # P(A<=1) * P(B=0): n=1 -> .95 * .95; n=2 -> (.64 + .255) * .95^2
        assert forecast_at(m, h, 1)[0] == pytest.approx(0.9025, abs=1e-12)
        assert forecast_at(m, h, 2)[0] == pytest.approx(0.8077375, abs=1e-12)

    def test_curve(self):
        m = series_pair()
        curve = forecast_curve(m, m.health(0, 0), 2)
        np.testing.assert_allclose(curve.reliability, [1.0, 0.9025, 0.8077375], atol=1e-12, rtol=0)

    def test_step_zero_is_one(self):
        m = series_pair()
        assert forecast_at(m, m.health(0, 0), 0)[0] == 1.0

    @pytest.mark.parametrize("n", [0, 1, 5, 50])
    def test_failed_component_means_failed_system(self, n):
        m = series_pair()
        assert forecast_at(m, m.health(2, 0), n)[0] == 0.0
        assert forecast_at(m, m.health(0, 1), n)[0] == 0.0

    def test_marginals_returned(self):
        m = series_pair()
        _, marg = forecast_at(m, m.health(0, 0), 1)
        np.testing.assert_allclose(marg[A].probs, [0.8, 0.15, 0.05])
        assert set(marg) == {SYS, A, B}


def test_identity_tpms_give_constant_curve():
    m = series_pair()
    still = SystemModel(
        m.topology, m.cpts, {A: validate_tpm(np.eye(3)), B: validate_tpm(np.eye(2))}, m.functional_states
    )
    curve = forecast_curve(still, still.health(1, 0), 30)
    assert np.all(curve.reliability == curve.reliability[0])


def test_all_failed_curve_is_constant():
    m = four_component()
    curve = forecast_curve(m, m.health(6, 5, 6, 5), 20)
    expected = point_mass_reliability(m, m.health(6, 5, 6, 5))
    np.testing.assert_allclose(curve.reliability, expected, atol=1e-15)


def test_curve_matches_pointwise_forecast():
    m = four_component()
    h = m.health(1, 0, 2, 0)
    curve = forecast_curve(m, h, 40, keep_marginals=True)
    for n in (0, 1, 13, 40):
        r, marg = forecast_at(m, h, n)
        assert curve[n] == pytest.approx(r, abs=1e-12)
        for node, d in marg.items():
            np.testing.assert_allclose(curve.node_marginals[n][node].probs, d.probs, atol=1e-12)


def test_marginals_not_kept_by_default():
    m = series_pair()
    assert forecast_curve(m, m.health(0, 0), 3).node_marginals is None


@pytest.mark.parametrize("name", sorted(MONOTONE))
def test_monotone_fixture_curves_do_not_increase(name):
    m = MONOTONE[name]()
    rng = np.random.default_rng(5)
    for _ in range(10):
        curve = forecast_curve(m, random_health(rng, m), 60)
        assert np.all(np.diff(curve.reliability) <= 1e-12)


@pytest.mark.parametrize("name", sorted(MONOTONE))
def test_degradation_dominance(name):
    m = MONOTONE[name]()
    rng = np.random.default_rng(6)
    for _ in range(20):
        h = random_health(rng, m)
        worse = {c: int(rng.integers(s, m.topology.nodes[c])) for c, s in h.items()}
        a = forecast_curve(m, h, 40).reliability
        b = forecast_curve(m, worse, 40).reliability
        assert np.all(b <= a + 1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_step_zero_equals_point_mass_network(seed):
    rng = np.random.default_rng(seed)
    m = random_tree_model(rng)
    h = random_health(rng, m)
    assert forecast_at(m, h, 0)[0] == pytest.approx(point_mass_reliability(m, h), abs=1e-15)


@pytest.mark.parametrize("seed", range(30))
def test_against_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    m = random_tree_model(rng)
    h = random_health(rng, m)
    n = int(rng.integers(0, 21))
    assert forecast_at(m, h, n)[0] == pytest.approx(brute_force_forecast(m, h, n), abs=1e-10)


class TestModelChecks:
    def test_health_vector_must_be_complete(self):
        m = series_pair()
        with pytest.raises(MissingComponent):
            forecast_at(m, {A: 0}, 1)

    def test_health_vector_unknown(self):
        m = series_pair()
        with pytest.raises(UnknownComponent):
            forecast_at(m, {A: 0, B: 0, SYS: 0}, 1)

    def test_health_out_of_range(self):
        m = series_pair()
        with pytest.raises(StateOutOfRange):
            forecast_at(m, {A: 3, B: 0}, 1)

    def test_tpm_size_must_match(self):
        m = series_pair()
        with pytest.raises(InvalidModel):
            SystemModel(m.topology, m.cpts, {A: m.tpms[B], B: m.tpms[B]})

    def test_missing_cpt(self):
        m = series_pair()
        with pytest.raises(InvalidModel):
            SystemModel(m.topology, {}, m.tpms)

    def test_functional_states(self):
        m = series_pair()
        with pytest.raises(InvalidModel):
            SystemModel(m.topology, m.cpts, m.tpms, frozenset())
        with pytest.raises(InvalidModel):
            SystemModel(m.topology, m.cpts, m.tpms, frozenset({2}))

    def test_single_component_system(self):
        top = validate_topology({SYS: 3}, {})
        m = SystemModel(top, {}, {SYS: validate_tpm([[0.8, 0.15, 0.05], [0.0, 0.9, 0.1], [0.0, 0.0, 1.0]])}, frozenset({0, 1}))
        assert forecast_at(m, {SYS: 0}, 1)[0] == pytest.approx(0.95, abs=1e-15)
