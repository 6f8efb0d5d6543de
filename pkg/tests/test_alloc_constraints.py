import numpy as np
import pytest

from prefopt.alloc import Schedule, check_constraints, fixture_instance


@pytest.fixture(scope="module")
def inst():
    return fixture_instance()


def feasible_schedule():
    return Schedule(
        start={"a0": 0, "a1": 4, "a2": 7},
        maint_location={"a2": "l3"},
        vessel={"r0": "v0", "r1": "v0", "r2": "v1", "r3": "v1"},
        links=(("r0", "r1"), ("r2", "r3")),
        sequence_start={"r0": 1, "r1": 0, "r2": 1, "r3": 0},
        speed={("r0", "r1"): 10.0, ("r2", "r3"): 8.0},
    )


def variant(base, **changes):
    return Schedule(**{**base.__dict__, **changes})


class TestFamilies:
    def test_feasible_baseline(self, inst):
        assert check_constraints(feasible_schedule(), inst).ok

    def test_g0_start_outside_window(self, inst):
        s = variant(feasible_schedule(), start={"a0": 0, "a1": 4, "a2": 13})
        assert 0 in check_constraints(s, inst).violations

    def test_g0_vessel_outside_domain(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v9", "r1": "v0", "r2": "v1", "r3": "v1"})
        assert 0 in check_constraints(s, inst).violations

    def test_g1_same_vessel_within_activity(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v0", "r1": "v1", "r2": "v1", "r3": "v0"},
                    links=(), speed={},
                    sequence_start={"r0": 1, "r1": 1, "r2": 1, "r3": 1})
        report = check_constraints(s, inst)
        assert 1 in report.violations
        assert ("a1", "r1", "r2") in report.violations[1]

    def test_g2_predecessor_not_finished(self, inst):
        s = variant(feasible_schedule(), start={"a0": 2, "a1": 4, "a2": 7})
        assert 2 in check_constraints(s, inst).violations  # a1 < a0 end (5)

    def test_g3_two_successors(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v0", "r1": "v0", "r2": "v1", "r3": "v0"},
                    links=(("r0", "r1"), ("r0", "r3")),
                    speed={("r0", "r1"): 10.0, ("r0", "r3"): 10.0})
        assert 3 in check_constraints(s, inst).violations

    def test_g4_two_predecessors(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v0", "r1": "v0", "r2": "v1", "r3": "v0"},
                    links=(("r0", "r3"), ("r1", "r3")),
                    speed={("r0", "r3"): 10.0, ("r1", "r3"): 10.0})
        assert 4 in check_constraints(s, inst).violations

    def test_g5_self_loop(self, inst):
        s = variant(feasible_schedule(),
                    links=(("r0", "r0"),), speed={("r0", "r0"): 10.0})
        assert 5 in check_constraints(s, inst).violations

    def test_g6_cross_vessel_link(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v0", "r1": "v1", "r2": "v0", "r3": "v1"},
                    links=(("r0", "r1"),), speed={("r0", "r1"): 10.0})
        assert 6 in check_constraints(s, inst).violations

    def test_g7_link_within_activity(self, inst):
        s = variant(feasible_schedule(),
                    vessel={"r0": "v0", "r1": "v0", "r2": "v1", "r3": "v1"},
                    links=(("r1", "r2"),), speed={("r1", "r2"): 10.0})
        report = check_constraints(s, inst)
        assert 7 in report.violations

    def test_g8_link_against_start_order(self, inst):
        s = variant(feasible_schedule(),
                    links=(("r1", "r0"),), speed={("r1", "r0"): 10.0})
        assert 8 in check_constraints(s, inst).violations

    def test_g9_insufficient_travel_time(self, inst):
        # a2 at l3 right after a1 ends (day 6): needs 1 sailing day from l2
        s = variant(feasible_schedule(), start={"a0": 0, "a1": 4, "a2": 6})
        report = check_constraints(s, inst)
        assert 9 in report.violations

    def test_g10_g11_g12_path_shape(self, inst):
        # two roles on v0 without a link: two sequence starts, two ends, no path
        s = variant(feasible_schedule(), links=(("r2", "r3"),),
                    speed={("r2", "r3"): 8.0},
                    sequence_start={"r0": 1, "r1": 1, "r2": 1, "r3": 0})
        report = check_constraints(s, inst)
        assert 10 in report.violations and 11 in report.violations
        assert 12 in report.violations
        assert ("v0", 0, 2) in report.violations[12]  # 0 links for 2 roles

    def test_g13_speed_not_in_vessel_set(self, inst):
        s = variant(feasible_schedule(),
                    speed={("r0", "r1"): 9.0, ("r2", "r3"): 8.0})
        report = check_constraints(s, inst)
        assert 13 in report.violations

    def test_unused_vessel_is_vacuously_compliant(self, inst):
        # all four roles on... not possible here (g1 forces a split on a1);
        # instead check a vessel with no roles in a reduced instance
        from prefopt.alloc import AllocInstance
        reduced = AllocInstance(**{
            **inst.__dict__,
            "activities": ("a0",), "activity_kind": {"a0": "tow"},
            "roles": ("r0",), "duration": {"a0": 3},
            "start_window": {"a0": (0, 3)},
            "tow_start": {"a0": "l0"}, "tow_end": {"a0": "l1"},
            "maint_locations": {}, "predecessor": {"a0": None},
            "parent_activity": {"r0": "a0"}, "vessel_domain": {"r0": ("v0",)},
        })
        s = Schedule(start={"a0": 0}, maint_location={}, vessel={"r0": "v0"},
                     links=(), sequence_start={"r0": 1}, speed={})
        assert check_constraints(s, reduced).ok  # v1 has no roles


class TestPathEquivalence:
    def test_decoded_schedules_form_simple_paths(self, inst, alloc_keys):
        """g10-g12 jointly imply one simple path per used vessel."""
        rng = np.random.default_rng(5)
        for _ in range(200):
            s = alloc_keys.decode(rng.random(alloc_keys.length))
            succ = dict(s.links)
            pred = {rp: r for r, rp in s.links}
            for v in inst.vessels:
                mine = [r for r in inst.roles if s.vessel[r] == v]
                if not mine:
                    continue
                heads = [r for r in mine if r not in pred]
                assert len(heads) == 1
                walk, seen = heads[0], {heads[0]}
                while walk in succ:
                    walk = succ[walk]
                    assert walk not in seen
                    seen.add(walk)
                assert seen == set(mine)
