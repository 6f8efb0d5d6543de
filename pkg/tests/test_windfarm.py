import math

import pytest

from prefopt import windfarm
from prefopt.errors import CapabilityError
from prefopt.solver.encoding import grid_axis
from prefopt.windfarm import (
    DEFAULT_WEIGHTS,
    WindfarmDecision,
    anchor_resistance,
    decision_grid,
    emissions,
    evaluate_performance,
    fleet_margin,
    fleet_utilization,
    installation_cost,
    is_feasible,
    resistance_margin,
    simulate_installation,
)


def params_with(**overrides):
    base = windfarm.default_params()
    return windfarm.WindfarmParams(**{**base.__dict__, **overrides})


class TestSimulateInstallation:
    def test_single_vessel_single_cycle(self):
        # deck holds the full campaign: one transit plus n/rate install days
        p = params_with(n_anchors=10,
                        small=windfarm.VesselClassSpec("small", 2.0, 100, 5000, 4.0, 0.1))
        f1, busy = simulate_installation(WindfarmDecision(1, 0, 0, 3.0, 5.0), p)
        assert f1 == pytest.approx(p.transit_time_days + 10 / 2.0)
        assert busy == [("small", f1)]

    def test_doubling_identical_vessels_halves_install_portion(self):
        p = windfarm.default_params()
        one = simulate_installation(WindfarmDecision(1, 0, 0, 3.0, 5.0), p)[0]
        two = simulate_installation(WindfarmDecision(2, 0, 0, 3.0, 5.0), p)[0]
        install_one = one - 4 * p.transit_time_days   # 48 anchors / cap 12 -> 4 cycles
        install_two = two - 2 * p.transit_time_days   # 24 each -> 2 cycles
        assert install_two == pytest.approx(install_one / 2.0)

    def test_fixture_hand_stepped(self):
        # 48 anchors split pro-rata to rates 2 and 4: 16 and 32 anchors;
        # cycles ceil(16/12)=2 and ceil(32/24)=2; install 8 days each
        p = windfarm.default_params()
        f1, busy = simulate_installation(WindfarmDecision(1, 1, 0, 3.0, 5.0), p)
        assert dict(busy) == {"small": 2 * 1.0 + 8.0, "large": 2 * 1.0 + 8.0}
        assert f1 == pytest.approx(10.0)

    def test_zero_capacity_is_an_error(self):
        with pytest.raises(CapabilityError):
            simulate_installation(WindfarmDecision(0, 0, 0, 3.0, 5.0), windfarm.default_params())


class TestCost:
    def test_capex_only_when_day_rates_zero(self):
        p = windfarm.default_params()
        zero_rates = params_with(
            small=windfarm.VesselClassSpec("small", 2.0, 12, 0.0, 4.0, 0.1),
            large=windfarm.VesselClassSpec("large", 4.0, 24, 0.0, 9.0, 0.25),
            barge=windfarm.VesselClassSpec("barge", 3.0, 18, 0.0, 6.0, 0.15),
        )
        x = WindfarmDecision(1, 1, 0, 2.0, 4.0)
        _, busy = simulate_installation(x, zero_rates)
        assert installation_cost(x, zero_rates, busy) == pytest.approx(
            48 * p.anchor_cost_coeff * 2.0 * 4.0)

    def test_opex_only_when_anchor_coeff_zero(self):
        p = params_with(anchor_cost_coeff=0.0)
        x = WindfarmDecision(1, 0, 0, 2.0, 4.0)
        _, busy = simulate_installation(x, p)
        expected = sum(p.small.day_rate * t for _, t in busy)
        assert installation_cost(x, p, busy) == pytest.approx(expected)

    def test_fixture_total(self):
        p = windfarm.default_params()
        x = WindfarmDecision(1, 1, 0, 2.0, 4.0)
        _, busy = simulate_installation(x, p)
        capex = 48 * 180.0 * 2.0 * 4.0
        opex = 5000.0 * 10.0 + 11000.0 * 10.0
        assert installation_cost(x, p, busy) == pytest.approx(capex + opex)


class TestUtilization:
    def test_no_risk_fleet(self):
        p = params_with(small=windfarm.VesselClassSpec("small", 2.0, 12, 5000, 4.0, 0.0))
        assert fleet_utilization(WindfarmDecision(2, 0, 0, 3, 5), p) == 0.0

    def test_single_vessel(self):
        p = params_with(small=windfarm.VesselClassSpec("small", 2.0, 12, 5000, 4.0, 0.3))
        assert fleet_utilization(WindfarmDecision(1, 0, 0, 3, 5), p) == pytest.approx(0.3)

    def test_two_vessels_complement_product(self):
        p = params_with(
            small=windfarm.VesselClassSpec("small", 2.0, 12, 5000, 4.0, 0.3),
            large=windfarm.VesselClassSpec("large", 4.0, 24, 11000, 9.0, 0.5),
        )
        got = fleet_utilization(WindfarmDecision(1, 1, 0, 3, 5), p)
        assert got == pytest.approx(1 - 0.7 * 0.5)  # 0.65

    def test_monotone_in_fleet_size(self):
        p = windfarm.default_params()
        for x1, x2, x3 in [(1, 0, 0), (1, 1, 0), (2, 1, 1)]:
            smaller = fleet_utilization(WindfarmDecision(x1, x2, x3, 3, 5), p)
            larger = fleet_utilization(WindfarmDecision(x1 + 1, x2, x3, 3, 5), p)
            assert 0.0 <= smaller <= larger <= 1.0


class TestEmissions:
    def test_zero_rates(self):
        p = params_with(small=windfarm.VesselClassSpec("small", 2.0, 12, 5000, 0.0, 0.1))
        x = WindfarmDecision(1, 0, 0, 3, 5)
        _, busy = simulate_installation(x, p)
        assert emissions(x, p, busy) == 0.0

    def test_direct_product(self):
        p = params_with(small=windfarm.VesselClassSpec("small", 2.0, 120, 5000, 5.0, 0.1),
                        n_anchors=18, transit_time_days=1.0)
        x = WindfarmDecision(1, 0, 0, 3, 5)
        f1, busy = simulate_installation(x, p)  # 1 + 18/2 = 10 days
        assert f1 == pytest.approx(10.0)
        assert emissions(x, p, busy) == pytest.approx(50.0)

    def test_additive_over_fleet(self):
        p = windfarm.default_params()
        x = WindfarmDecision(1, 1, 1, 3, 5)
        _, busy = simulate_installation(x, p)
        rates = {"small": 4.0, "large": 9.0, "barge": 6.0}
        assert emissions(x, p, busy) == pytest.approx(
            sum(rates[name] * t for name, t in busy))


class TestResistance:
    def test_zero_penetration_limit(self):
        assert anchor_resistance(2.0, 0.0, windfarm.default_params()) == 0.0

    def test_quadratic_in_penetration(self):
        p = windfarm.default_params()
        assert anchor_resistance(2.0, 8.0, p) == pytest.approx(4 * anchor_resistance(2.0, 4.0, p))

    def test_direct_value(self):
        assert anchor_resistance(2.0, 4.0, windfarm.default_params()) == pytest.approx(320.0)


class TestConstraints:
    def test_empty_fleet_violates_min_fleet(self):
        assert fleet_margin(WindfarmDecision(0, 0, 0, 3, 5)) > 0

    def test_weak_anchor_violates_holding(self):
        p = windfarm.default_params()  # F_a = 1500, R_a(1.5, 2) = 60
        assert resistance_margin(WindfarmDecision(1, 0, 0, 1.5, 2.0), p) > 0

    def test_domain_maxima_are_in_domain(self):
        assert is_feasible(WindfarmDecision(3, 2, 2, 4.0, 8.0), windfarm.default_params())

    def test_holding_margin_monotone(self):
        p = windfarm.default_params()
        for d, pen in [(1.5, 2.0), (2.0, 5.0), (3.0, 6.0)]:
            base = resistance_margin(WindfarmDecision(1, 0, 0, d, pen), p)
            assert resistance_margin(WindfarmDecision(1, 0, 0, d + 0.5, pen), p) <= base
            assert resistance_margin(WindfarmDecision(1, 0, 0, d, pen + 0.5), p) <= base


class TestDurationMonotonicity:
    def test_adding_a_vessel_never_slows_installation(self):
        p = windfarm.default_params()
        for x1 in range(3):
            for x2 in range(2):
                for x3 in range(2):
                    if x1 + x2 + x3 == 0:
                        continue
                    base = simulate_installation(WindfarmDecision(x1, x2, x3, 3, 5), p)[0]
                    for dx in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                        bigger = WindfarmDecision(x1 + dx[0], x2 + dx[1], x3 + dx[2], 3, 5)
                        assert simulate_installation(bigger, p)[0] <= base + 1e-12


class TestProblemStructure:
    def test_weight_structure(self):
        assert DEFAULT_WEIGHTS[("energy_provider", "duration")] == 0.25
        assert DEFAULT_WEIGHTS[("energy_provider", "emissions")] == 0.25
        assert DEFAULT_WEIGHTS[("contractor", "cost")] == 0.25
        assert DEFAULT_WEIGHTS[("contractor", "utilization")] == 0.25
        assert sum(DEFAULT_WEIGHTS.values()) == 1.0

    def test_all_thresholds_default_zero(self, windfarm_coarse_problem):
        thresholds = windfarm_coarse_problem.thresholds_by_column()
        assert all(v == 0.0 for v in thresholds.values())

    def test_curves_are_descending_over_bounds(self, windfarm_coarse_problem):
        for actor in windfarm_coarse_problem.actors:
            for curve in actor.curves.values():
                first, last = curve.breakpoints[0], curve.breakpoints[-1]
                assert first[1] == 100.0 and last[1] == 0.0

    def test_grid_axis_endpoints(self):
        assert grid_axis(1.5, 4.0, 6.0) == [1.5, 4.0]
        assert grid_axis(2.0, 8.0, 6.0) == [2.0, 8.0]
        vals = grid_axis(1.5, 4.0, 0.1)
        assert len(vals) == 26 and vals[0] == 1.5 and vals[-1] == 4.0

    def test_two_point_grid_cardinality(self):
        assert windfarm.grid_size(6.0) == 4 * 3 * 3 * 2 * 2  # 144
        assert sum(1 for _ in decision_grid(6.0)) == 144

    def test_surrogate_fixture_vector(self):
        f = evaluate_performance(WindfarmDecision(1, 0, 0, 2.0, 4.0),
                                 windfarm.default_params())
        # single small vessel: 4 cycles of 12 anchors, 24 install days
        assert f[0] == pytest.approx(4 + 24)
        assert f[1] == pytest.approx(48 * 180.0 * 2.0 * 4.0 + 5000.0 * 28)
        assert f[2] == pytest.approx(0.1)
        assert f[3] == pytest.approx(4.0 * 28)

    def test_empty_fleet_reported_via_problem(self, windfarm_coarse_problem):
        from prefopt.model import check_feasibility
        report = check_feasibility(windfarm_coarse_problem,
                                   WindfarmDecision(0, 0, 0, 2.0, 4.0))
        assert "min_fleet" in report.names()
