import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isac_offload import model
from isac_offload.model import CrbDomainError
from isac_offload.scenario import Decision, Scenario, ScenarioError, dbm_to_watt

from reference import (C_COM_BETA0, C_COMP_BETA0, CRB_BETA0, GAMMA_60, H_RAD_60, H_UE_60,
                       RATE_60, T_COM_HALF, T_OFF_HALF, mp_reference, rel)


def test_dbm_conversion():
    assert dbm_to_watt(27) == pytest.approx(0.50119, abs=5e-6)
    assert dbm_to_watt(30) == 1.0


class TestChannel:
    def test_ue_gain_overhead(self, table1, overhead_ue):
        h = model.channel_gain_ue(table1, overhead_ue)
        assert rel(h, H_UE_60) < 1e-12
        assert f"{h:.4e}" == "2.7778e-07"

    def test_ue_gain_reference_distance(self):
        sc = Scenario(ref_channel_gain=1.0, uav_altitude=1.0)
        assert model.channel_gain_ue(sc, Decision(0.0, 100.0, 120.0)) == 1.0

    def test_ue_gain_square_law(self):
        # UE at origin, H = 30: horizontal offset 40 gives d = 50; H = 60, offset 80 gives d = 100
        near = Scenario(uav_altitude=30.0, ue_position=(0.0, 0.0))
        far = Scenario(uav_altitude=60.0, ue_position=(0.0, 0.0))
        h1 = model.channel_gain_ue(near, Decision(0.0, 40.0, 0.0))
        h2 = model.channel_gain_ue(far, Decision(0.0, 80.0, 0.0))
        assert h1 / h2 == pytest.approx(4.0, rel=1e-14)

    def test_path_loss_exponent_generalises(self, table1, overhead_ue):
        sc = table1.replace(path_loss_exponent=3.0)
        assert model.channel_gain_ue(sc, overhead_ue) == pytest.approx(1e-3 / 60 ** 3, rel=1e-14)

    def test_radar_gain_overhead(self):
        sc = Scenario(target_position=(100.0, 120.0))
        h = model.channel_gain_radar(sc, Decision(0.0, 100.0, 120.0))
        assert rel(h, H_RAD_60) < 1e-12
        assert f"{h:.4e}" == "6.1402e-13"

    def test_radar_gain_vanishing_rcs(self):
        sc = Scenario(target_position=(100.0, 120.0), rcs=1e-300)
        assert model.channel_gain_radar(sc, Decision(0.0, 100.0, 120.0)) < 1e-300

    def test_radar_gain_fourth_power(self):
        near = Scenario(uav_altitude=30.0, target_position=(0.0, 0.0), ue_position=(0.0, 0.0))
        far = Scenario(uav_altitude=60.0, target_position=(0.0, 0.0), ue_position=(0.0, 0.0))
        h1 = model.channel_gain_radar(near, Decision(0.0, 40.0, 0.0))
        h2 = model.channel_gain_radar(far, Decision(0.0, 80.0, 0.0))
        assert h1 / h2 == pytest.approx(16.0, rel=1e-13)


class TestRate:
    def test_table1_overhead(self, table1, overhead_ue):
        r = model.transmission_rate(table1, overhead_ue)
        assert rel(r, RATE_60) < 1e-12
        assert r == pytest.approx(1.0445e8, rel=1e-4)

    def test_zero_gain(self):
        assert model.shannon_rate(1e7, 0.5, 1e-17, 0.0) == 0.0

    def test_unit_snr_gives_bandwidth(self):
        B, N0, P = 1e7, 1e-17, 2.0
        assert model.shannon_rate(B, P, N0, B * N0 / P) == B


class TestLatency:
    def test_table1_half_split(self, table1, overhead_ue):
        t_local, t_com, t_ue, t_off, t_total = model.latency_chain(table1, overhead_ue)
        assert rel(t_local, 25.0 / 6.0) < 1e-14
        assert rel(t_com, T_COM_HALF) < 1e-12
        assert t_ue == 5.0
        assert rel(t_off, T_OFF_HALF) < 1e-12
        assert t_total == t_off
        assert round(t_total, 4) == 5.0479
        assert round(t_com, 5) == 0.04787

    def test_full_offload(self, table1):
        t_local, _, _, t_off, t_total = model.latency_chain(table1, Decision(0.0, 300.0, 300.0))
        assert t_local == 0.0
        assert t_total == t_off

    def test_infinite_uav_capacity(self, table1):
        sc = table1.replace(uav_capacity=math.inf)
        *_, t_off, t_total = model.latency_chain(sc, Decision(0.7, 300.0, 300.0))
        assert t_total == t_off


class TestCost:
    def test_full_offload_values(self, table1, overhead_ue):
        d = Decision(0.0, 100.0, 120.0)
        c_com, c_comp, c_total = model.cost_chain(table1, d)
        assert rel(c_com, C_COM_BETA0) < 1e-12
        assert rel(c_comp, C_COMP_BETA0) < 1e-12
        assert c_total == c_com + c_comp
        assert c_com - 5e8 == pytest.approx(0.048, abs=5e-4)
        assert c_comp - 5e8 == pytest.approx(0.05, abs=1e-6)

    def test_beta_max_scaling(self, table1):
        at0 = model.cost_chain(table1, Decision(0.0, 100.0, 120.0))
        at9 = model.cost_chain(table1, Decision(0.9, 100.0, 120.0))
        # the bit and cycle terms scale by exactly 0.1; the transmit-energy term
        # scales through t_com, which is itself proportional to (1 - beta)
        assert at9[1] == pytest.approx(0.1 * at0[1], rel=1e-12)
        assert at9[0] == pytest.approx(0.1 * at0[0], rel=1e-12)

    def test_free_resources(self, table1):
        sc = table1.replace(price_bandwidth=0, price_cycle=0, price_tx_energy=0, price_ue_energy=0)
        assert model.cost_chain(sc, Decision(0.0, 0.0, 0.0))[2] == 0.0


class TestRadar:
    def test_snr_overhead(self):
        sc = Scenario(target_position=(100.0, 120.0))
        g = model.radar_snr(sc, Decision(0.0, 100.0, 120.0))
        assert rel(g, GAMMA_60) < 1e-12
        assert f"{g:.4e}" == "3.0774e-03"  # 3.0775e-3 in the rounded hand value

    def test_snr_linear_in_power(self):
        a = Scenario(target_position=(100.0, 120.0), tx_power=1.0)
        b = a.replace(tx_power=3.0)
        d = Decision(0.0, 250.0, 400.0)
        assert model.radar_snr(b, d) == pytest.approx(3 * model.radar_snr(a, d), rel=1e-15)

    def test_crb_overhead(self):
        sc = Scenario(target_position=(100.0, 120.0))
        crb = model.crb_velocity(sc, Decision(0.0, 100.0, 120.0))
        assert rel(crb, CRB_BETA0) < 1e-12
        assert f"{crb:.2e}" == "8.89e-09"

    def test_crb_closed_form_zero_power(self):
        with np.errstate(divide="ignore"):
            assert model.crb_closed_form(0.03, 0.0, 5e6, 1e-7, np.float64(0.0)) == np.inf

    def test_crb_cubic_laws(self, table1):
        d0 = Decision(0.0, 300.0, 300.0)
        d_half = Decision(0.5, 300.0, 300.0)
        assert model.crb_velocity(table1, d_half) / model.crb_velocity(table1, d0) == pytest.approx(8.0, rel=1e-13)
        big = table1.replace(task_bits=1e7)
        assert model.crb_velocity(table1, d0) / model.crb_velocity(big, d0) == pytest.approx(8.0, rel=1e-13)

    def test_crb_domain_error(self, table1):
        with pytest.raises(CrbDomainError):
            model.crb_velocity(table1, (1.0, 300.0, 300.0))


class TestEvaluate:
    def test_matches_mpmath_reference(self, table1):
        for d in [(0.5, 100.0, 120.0), (0.0, 0.0, 0.0), (0.9, 1000.0, 1000.0), (0.33, 460.0, 290.0)]:
            ev = model.evaluate(table1, d).as_dict()
            ref = mp_reference(table1, *d)
            for key, want in ref.items():
                assert rel(ev[key], float(want)) < 1e-9, key

    def test_weighted_sum_example(self):
        # target under the UE so both worked values apply at one decision
        sc = Scenario(target_position=(100.0, 120.0))
        ev = model.evaluate(sc, Decision(0.5, 100.0, 120.0))
        assert ev.objective == 1.0 * ev.t_total + 40.0 * ev.crb
        assert rel(ev.crb, 8 * CRB_BETA0) < 1e-12
        assert round(ev.objective, 4) == 5.0479

    def test_latency_only_weighting(self, table1):
        sc = table1.replace(weight_crb=0.0)
        ev = model.evaluate(sc, Decision(0.4, 10.0, 20.0))
        assert ev.objective == ev.t_total

    def test_infinite_budget_always_feasible(self, table1):
        sc = table1.replace(budget=math.inf)
        assert model.evaluate(sc, Decision(0.0, 900.0, 900.0)).feasible

    def test_rejects_out_of_range(self, table1):
        with pytest.raises(ValueError):
            model.evaluate(table1, Decision(0.95, 0.0, 0.0))
        with pytest.raises(ValueError):
            model.evaluate(table1, Decision(0.5, -1.0, 0.0))

    def test_feasibility_follows_budget(self, table1):
        assert not model.evaluate(table1, Decision(0.0, 100.0, 120.0)).feasible
        assert model.evaluate(table1, Decision(0.3, 100.0, 120.0)).feasible


class TestPenalty:
    def test_feasible_equals_objective(self, table1):
        d = Decision(0.5, 200.0, 200.0)
        assert model.penalized_objective(table1, d, 1e6) == model.evaluate(table1, d).objective

    def test_double_budget(self, table1):
        d = Decision(0.0, 100.0, 120.0)
        ev = model.evaluate(table1, d)
        sc = table1.replace(budget=ev.c_total / 2)
        ev2 = model.evaluate(sc, d)
        assert model.penalized_objective(sc, d, 1e3) == pytest.approx(ev2.objective + 1e3, rel=1e-12)

    def test_zero_mu_is_objective(self, table1):
        d = Decision(0.0, 100.0, 120.0)
        assert model.penalized_objective(table1, d, 0.0) == model.evaluate(table1, d).objective

    def test_negative_mu_rejected(self, table1):
        with pytest.raises(ValueError):
            model.penalized_objective(table1, Decision(0.5, 0, 0), -1.0)


class TestScenarioValidation:
    @pytest.mark.parametrize("key,value", [("bandwidth", -1.0), ("task_bits", 0.0), ("rcs", -0.1),
                                           ("beta_max", 1.0), ("price_cycle", -1.0),
                                           ("budget", 0.0), ("ue_position", (2000.0, 0.0))])
    def test_rejects(self, key, value):
        with pytest.raises(ScenarioError) as exc:
            Scenario(**{key: value})
        assert exc.value.key == key

    def test_weights_not_both_zero(self):
        with pytest.raises(ScenarioError):
            Scenario(weight_latency=0.0, weight_crb=0.0)

    def test_empty_area(self):
        with pytest.raises(ScenarioError):
            Scenario(area_bounds=(0, 0, 0, 10), ue_position=(0, 0), target_position=(0, 0))


# --- properties ---------------------------------------------------------------

positions = st.tuples(st.floats(0, 1000), st.floats(0, 1000))
betas = st.floats(0.0, 0.9)


@settings(max_examples=200, deadline=None)
@given(betas, positions)
def test_total_is_max(beta, pos):
    sc = Scenario()
    t_local, _, _, t_off, t_total = model.latency_chain(sc, (beta, *pos))
    assert t_total >= t_local and t_total >= t_off
    assert t_total == max(t_local, t_off)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.89), st.floats(1e-4, 1e-2), positions)
def test_monotone_in_beta(beta, step, pos):
    sc = Scenario()
    lo = model.evaluate(sc, (beta, *pos))
    hi = model.evaluate(sc, (min(beta + step, 0.9), *pos))
    assert hi.t_local > lo.t_local
    assert hi.t_off < lo.t_off
    assert hi.crb > lo.crb
    assert hi.c_total < lo.c_total


@settings(max_examples=100, deadline=None)
@given(betas, positions)
def test_cost_identity_and_finite(beta, pos):
    ev = model.evaluate(Scenario(), (beta, *pos))
    assert ev.c_total == ev.c_com + ev.c_comp
    assert all(math.isfinite(v) for v in ev.as_dict().values())


@settings(max_examples=50, deadline=None)
@given(betas, positions)
def test_pure(beta, pos):
    sc = Scenario()
    assert model.evaluate(sc, (beta, *pos)) == model.evaluate(sc, (beta, *pos))


@settings(max_examples=50, deadline=None)
@given(betas, positions, st.floats(1e6, 1e8))
def test_plateau(beta, pos, capacity):
    sc = Scenario(uav_capacity=capacity)
    t_local, *_, t_off, t_total = model.latency_chain(sc, (beta, *pos))
    if t_local <= t_off:
        faster = sc.replace(uav_capacity=capacity * 3)
        assert model.latency_chain(faster, (beta, *pos))[4] == t_total


def test_vectorised_matches_scalar(table1, rng):
    genes = np.column_stack([rng.uniform(0, 0.9, 50), rng.uniform(0, 1000, 50), rng.uniform(0, 1000, 50)])
    vec = model.evaluate_arrays(table1, genes[:, 0], genes[:, 1], genes[:, 2])
    for i, g in enumerate(genes):
        ev = model.evaluate(table1, g)
        assert ev.objective == pytest.approx(vec["objective"][i], rel=1e-15)
        assert ev.feasible == vec["feasible"][i]
