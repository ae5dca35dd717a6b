import json
import tempfile
import unittest
from pathlib import Path
from typing import get_args

import mock
import numpy as np

from fflab.combinatorics import PointSet
from fflab.config import override_settings
from fflab.errors import BaselineError, UnknownScenario
from fflab.field import get_field
from fflab.harness.baselines import BASELINE_FILE, ORIGINS, BaselineEntry, BaselineStore, oracle_hash, regenerate
from fflab.harness.runner import (
    ScenarioReport,
    _judge,
    check_trends,
    render_csv,
    render_json,
    run_scenario,
    sweep,
    sweep_points,
)
from fflab.harness.scenario import (
    Oracle,
    Outcome,
    Parameters,
    Scenario,
    ScenarioContext,
    ScenarioKind,
    Status,
    all_scenarios,
    derive_seed,
    get_scenario,
    scenario,
)
from fflab.harness.serialization import deserialize_witness, serialize_witness
from fflab.surfaces import Surface, SurfaceFunction
from tests.unit.types import ArithmeticScenarios, ExactScenarios, ReportOnlyScenarios, TrackedScenarios
from tests.unit.utils import random_ffunction, rng


def constant_check(metric: float, passed=None):
    return lambda context: Outcome(metric, passed)


def make_scenario(kind: ScenarioKind, metric: float = 0.0, passed=None, floor: bool = False) -> Scenario:
    oracle = Oracle("fixed", Parameters(3, 3)) if kind is ScenarioKind.CONSTANT_TRACKED else None
    return Scenario("XX-1", "test scenario", kind, constant_check(metric, passed), oracle=oracle, floor=floor)


class TestRegistry(unittest.TestCase):
    """Tests scenario registration and lookup"""

    def test_ids(self):
        expected = set(get_args(ExactScenarios) + get_args(TrackedScenarios) + get_args(ReportOnlyScenarios))
        expected |= set(get_args(ArithmeticScenarios))
        self.assertEqual({registered.id for registered in all_scenarios()}, expected)

    def test_kinds(self):
        for ids, kind in (
            (ExactScenarios, ScenarioKind.EXACT_IDENTITY),
            (TrackedScenarios, ScenarioKind.CONSTANT_TRACKED),
            (ReportOnlyScenarios, ScenarioKind.REPORT_ONLY),
            (ArithmeticScenarios, ScenarioKind.EXPONENT_ARITH),
        ):
            for scenario_id in get_args(ids):
                self.assertIs(get_scenario(scenario_id).kind, kind, scenario_id)

    def test_oracles_are_admissible(self):
        for registered in all_scenarios():
            if registered.kind is ScenarioKind.CONSTANT_TRACKED:
                self.assertIsNotNone(registered.oracle)
                self.assertTrue(registered.supports(registered.oracle.parameters), registered.id)

    def test_sorted(self):
        ids = [registered.id for registered in all_scenarios()]
        self.assertEqual(ids[:3], ["BR-1", "BR-2", "BR-3"])

    def test_unknown(self):
        self.assertRaises(UnknownScenario, get_scenario, "XX-9")
        self.assertRaises(KeyError, get_scenario, "XX-9")

    def test_duplicate(self):
        register = scenario("FT-1", "duplicate", ScenarioKind.EXACT_IDENTITY)
        self.assertRaises(ValueError, register, constant_check(0.0))

    def test_tracked_needs_oracle(self):
        self.assertRaises(ValueError, Scenario, "XX-1", "x", ScenarioKind.CONSTANT_TRACKED, constant_check(0.0))

    def test_from_str(self):
        self.assertIs(ScenarioKind.from_str("constant-tracked"), ScenarioKind.CONSTANT_TRACKED)
        self.assertIs(Status.from_str("PASS"), Status.PASS)
        self.assertIsNone(Status.from_str("skipped"))


class TestSeeds(unittest.TestCase):
    def test_derive_seed(self):
        self.assertEqual(derive_seed(0, "FT-1", 2), derive_seed(0, "FT-1", 2))
        self.assertNotEqual(derive_seed(0, "FT-1", 2), derive_seed(0, "FT-1", 3))
        self.assertNotEqual(derive_seed(0, "FT-1", 2), derive_seed(1, "FT-1", 2))

    def test_trial_rngs(self):
        context = ScenarioContext("FT-1", Parameters(3, 3, 3, 7))
        first = [generator.integers(0, 1000) for generator in context.trial_rngs()]
        second = [generator.integers(0, 1000) for generator in context.trial_rngs()]
        self.assertEqual(first, second)
        self.assertEqual(len(first), 3)


class TestJudge(unittest.TestCase):
    """Tests how outcomes become statuses"""

    def test_exact(self):
        status, details = _judge(make_scenario(ScenarioKind.EXACT_IDENTITY), Outcome(1e-12), None)
        self.assertIs(status, Status.PASS)
        self.assertIn("tolerance", details)
        status, _ = _judge(make_scenario(ScenarioKind.EXACT_IDENTITY), Outcome(1e-3), None)
        self.assertIs(status, Status.FAIL)

    def test_passed_overrides(self):
        status, _ = _judge(make_scenario(ScenarioKind.EXACT_IDENTITY), Outcome(1.0, True), None)
        self.assertIs(status, Status.PASS)
        status, _ = _judge(make_scenario(ScenarioKind.EXPONENT_ARITH), Outcome(0.0, False), None)
        self.assertIs(status, Status.FAIL)

    def test_report_only(self):
        status, _ = _judge(make_scenario(ScenarioKind.REPORT_ONLY), Outcome(5.0, False), None)
        self.assertIs(status, Status.REPORT_ONLY)

    def test_constant_tracked(self):
        store = BaselineStore(Path("unused"), {"XX-1": BaselineEntry(1.0, {}, "hash")})
        tracked = make_scenario(ScenarioKind.CONSTANT_TRACKED)
        status, details = _judge(tracked, Outcome(1.9), store)
        self.assertIs(status, Status.PASS)
        self.assertEqual(details["limit"], 2.0)
        self.assertIs(_judge(tracked, Outcome(2.5), store)[0], Status.FAIL)
        with override_settings(slack=3.0):
            self.assertIs(_judge(tracked, Outcome(2.5), store)[0], Status.PASS)

    def test_floor(self):
        store = BaselineStore(Path("unused"), {"XX-1": BaselineEntry(0.5, {}, "hash", "bound")})
        tracked = make_scenario(ScenarioKind.CONSTANT_TRACKED, floor=True)
        status, details = _judge(tracked, Outcome(0.3), store)
        self.assertIs(status, Status.PASS)
        self.assertEqual(details["limit"], 0.25)
        self.assertEqual(details["origin"], "bound")
        self.assertIs(_judge(tracked, Outcome(0.2), store)[0], Status.FAIL)
        self.assertIs(_judge(tracked, Outcome(5.0), store)[0], Status.PASS)

    def test_missing_baseline(self):
        status, details = _judge(make_scenario(ScenarioKind.CONSTANT_TRACKED), Outcome(0.0), BaselineStore(Path("x")))
        self.assertIs(status, Status.FAIL)
        self.assertIn("fflab baseline --regen", details["error"])


class TestRunScenario(unittest.TestCase):
    """Tests single runs and their reports"""

    def test_closed_form_passes(self):
        report = run_scenario("FT-1", Parameters(3, 3, 1, 0))
        self.assertIs(report.status, Status.PASS)
        self.assertFalse(report.failed)
        self.assertLess(report.metric, 1e-9)

    def test_unsupported_dimension(self):
        self.assertRaises(ValueError, run_scenario, "FT-1", Parameters(3, 4, 1, 0))

    def test_failure_has_witness(self):
        report = run_scenario("ST-1", Parameters(3, 3, 1, 0), BaselineStore(Path("missing")))
        self.assertIs(report.status, Status.FAIL)
        self.assertIsNotNone(report.witness)

    def test_json(self):
        report = run_scenario("FT-3", Parameters(3, 2, 2, 5))
        payload = json.loads(render_json([report]))
        self.assertEqual(payload["schema"], "fflab-report/1")
        self.assertNotIn("runtime_ms", payload["reports"][0])
        self.assertEqual(payload["reports"][0]["parameters"], {"prime": 3, "dim": 2, "trials": 2, "seed": 5})
        self.assertIn("runtime_ms", json.loads(render_json([report], timings=True))["reports"][0])

    def test_deterministic(self):
        first = render_json([run_scenario("FT-3", Parameters(3, 2, 2, 5))])
        second = render_json([run_scenario("FT-3", Parameters(3, 2, 2, 5))])
        self.assertEqual(first, second)

    def test_csv(self):
        report = run_scenario("FT-1", Parameters(3, 3, 1, 0))
        lines = render_csv([report]).splitlines()
        self.assertEqual(lines[0], "scenario,prime,dim,trials,seed,status,metric,runtime_ms")
        self.assertTrue(lines[1].startswith("FT-1,3,3,1,0,pass,"))


class TestSerialization(unittest.TestCase):
    """Tests the witness payloads"""

    def test_ffunction(self):
        f = random_ffunction(3, 2)
        payload = serialize_witness(f)
        self.assertEqual(payload["type"], "ffunction")
        self.assertTrue(np.array_equal(deserialize_witness(payload).data, f.data))

    def test_surface_function(self):
        f = SurfaceFunction.random(Surface.hyperbolic_paraboloid(get_field(3), 3), rng(1))
        restored = deserialize_witness(json.loads(json.dumps(serialize_witness(f))))
        self.assertTrue(np.array_equal(restored.values, f.values))
        self.assertIs(restored.surface.kind, f.surface.kind)

    def test_point_set_and_others(self):
        points = PointSet(get_field(5), 2, [[1, 2], [3, 4]])
        self.assertEqual(deserialize_witness(serialize_witness(points)), points)
        self.assertEqual(deserialize_witness(serialize_witness("too large")), "too large")
        self.assertIsNone(serialize_witness(None))
        sequence = serialize_witness([points, "note"])
        self.assertEqual(sequence["type"], "sequence")
        self.assertRaises(TypeError, serialize_witness, object())
        self.assertRaises(ValueError, deserialize_witness, {"type": "tensor", "prime": 3})


class TestBaselines(unittest.TestCase):
    """Tests regeneration, persistence and hash verification"""

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_regenerate_and_reload(self):
        store = BaselineStore.load(self.path)
        written = regenerate([get_scenario("KK-1"), get_scenario("FT-1")], store)
        self.assertEqual(list(written), ["KK-1"])
        store.save()
        reloaded = BaselineStore.load(self.path)
        self.assertIn("KK-1", reloaded)
        self.assertEqual(reloaded.get("KK-1"), written["KK-1"])
        reloaded.verify([get_scenario("KK-1")])
        report = run_scenario("KK-1", Parameters(3, 2, 1, 0), reloaded)
        self.assertIs(report.status, Status.PASS)

    def test_hash_depends_on_slack(self):
        tracked = get_scenario("KK-1")
        self.assertNotEqual(oracle_hash(tracked, 2.0), oracle_hash(tracked, 3.0))
        self.assertRaises(BaselineError, oracle_hash, get_scenario("FT-1"))

    def test_stale_hash(self):
        store = BaselineStore(self.path / BASELINE_FILE, {"KK-1": BaselineEntry(1.0, {}, "stale")})
        store.save()
        self.assertRaises(BaselineError, BaselineStore.load(self.path).verify, [get_scenario("KK-1")])
        self.assertRaises(BaselineError, sweep, ["KK-1"], [3], [2], 1, 0, None, 1, self.path)

    def test_bad_schema(self):
        (self.path / BASELINE_FILE).write_text(json.dumps({"schema": "other", "entries": {}}), encoding="utf-8")
        self.assertRaises(BaselineError, BaselineStore.load, self.path)
        (self.path / BASELINE_FILE).write_text("{", encoding="utf-8")
        self.assertRaises(BaselineError, BaselineStore.load, self.path)

    def test_missing_entry(self):
        with self.assertRaises(BaselineError) as context:
            BaselineStore.load(self.path).get("EN-2")
        self.assertIn("--ids EN-2", str(context.exception))


class TestSweep(unittest.TestCase):
    """Tests sweeps over primes and dimensions"""

    def test_points(self):
        points, skipped = sweep_points(["FT-1", "FT-2"], [3, 5], [2, 3], 1, 0)
        self.assertEqual(
            [(scenario_id, parameters.prime, parameters.dim) for scenario_id, parameters in points],
            [("FT-1", 3, 3), ("FT-1", 5, 3), ("FT-2", 3, 2), ("FT-2", 3, 3), ("FT-2", 5, 2), ("FT-2", 5, 3)],
        )
        self.assertEqual(skipped, [("FT-1", 3, 2), ("FT-1", 5, 2)])

    def test_writes_reports(self):
        with tempfile.TemporaryDirectory() as directory:
            out_dir = Path(directory) / "out"
            result = sweep(["FT-1", "FT-3"], [3], [2, 3], 1, 0, out_dir=out_dir, baseline_dir=Path(directory))
            self.assertEqual(result.exit_code, 0)
            self.assertEqual(len(result.reports), 3)
            self.assertEqual(result.skipped, (("FT-1", 3, 2),))
            payload = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
            self.assertEqual([report["scenario"] for report in payload["reports"]], ["FT-1", "FT-3", "FT-3"])
            self.assertEqual(len((out_dir / "summary.csv").read_text(encoding="utf-8").splitlines()), 4)

    def test_failure_exit_code(self):
        with tempfile.TemporaryDirectory() as directory:
            result = sweep(["EN-2"], [3], [3], 1, 0, baseline_dir=Path(directory))
            self.assertTrue(result.failed)
            self.assertEqual(result.exit_code, 1)

class TestTrends(unittest.TestCase):
    """Tests the check that a nonincreasing metric does not rise with the prime"""

    def reports(self, metrics, scenario_id="KK-4", dim=2):
        primes = (3, 5, 7)
        return [
            ScenarioReport(scenario_id, Parameters(prime, dim, 1, 0), Status.PASS, metric)
            for prime, metric in zip(primes, metrics)
        ]

    def test_falling_passes(self):
        reports = self.reports([0.6, 0.5, 0.5])
        self.assertEqual(check_trends(reports), reports)

    def test_rise_fails(self):
        checked = check_trends(list(reversed(self.reports([0.6, 0.5, 0.55]))))
        self.assertEqual([report.status for report in checked], [Status.FAIL, Status.PASS, Status.PASS])
        self.assertIn("at p=5", checked[0].details["trend"])
        self.assertIn("at p=7", checked[0].witness["reason"])

    def test_dimensions_are_separate(self):
        reports = self.reports([0.3, 0.2], dim=3) + self.reports([0.6, 0.5])
        self.assertFalse(any(report.failed for report in check_trends(reports)))

    def test_other_scenarios_untouched(self):
        reports = self.reports([0.1, 0.9], scenario_id="KK-1")
        self.assertEqual(check_trends(reports), reports)


class TestEnergyScenarios(unittest.TestCase):
    """Tests the energy scenarios that carry their own verdict"""

    def test_quadruple_loop_agrees(self):
        report = run_scenario("EN-1", Parameters(3, 3, 1, 0))
        self.assertIs(report.status, Status.PASS)
        self.assertGreater(report.details["quadruples"], 0)
        self.assertEqual(report.details["quadruples"], report.details["samples"])

    def test_within_log_slack(self):
        report = run_scenario("EX-3", Parameters(3, 3, 2, 0))
        self.assertIs(report.status, Status.PASS)
        self.assertLessEqual(report.metric, 0.2)
        self.assertEqual(report.details["breaches"], [])

    def test_excess_fails(self):
        with mock.patch("fflab.combinatorics.surface_energy_curve", return_value=lambda alpha: 2.0):
            report = run_scenario("EX-3", Parameters(3, 3, 2, 0))
        self.assertIs(report.status, Status.FAIL)
        self.assertIn("hyperbolic_paraboloid full surface", report.details["breaches"])
        self.assertIsNotNone(report.witness)


COMMITTED = Path("baselines")


class TestCommittedBaselines(unittest.TestCase):
    """Tests the baselines shipped with the repository against their oracles"""

    def setUp(self):
        self.store = BaselineStore.load(COMMITTED)
        tracked = ScenarioKind.CONSTANT_TRACKED
        self.tracked = [registered for registered in all_scenarios() if registered.kind is tracked]

    def test_complete_and_current(self):
        self.assertEqual({registered.id for registered in self.tracked}, set(get_args(TrackedScenarios)))
        for registered in self.tracked:
            self.assertIn(registered.id, self.store, registered.id)
            self.assertIn(self.store.get(registered.id).origin, ORIGINS)
        self.store.verify(self.tracked)

    def test_oracles_respect_constants(self):
        with tempfile.TemporaryDirectory() as directory:
            measured = regenerate(self.tracked, BaselineStore.load(Path(directory)))
        for registered in self.tracked:
            committed, value = self.store.get(registered.id), measured[registered.id].constant
            with self.subTest(scenario=registered.id, origin=committed.origin):
                if committed.origin == "enumeration":
                    self.assertAlmostEqual(value, committed.constant, delta=1e-9 * committed.constant)
                elif registered.floor:
                    self.assertGreaterEqual(value, committed.constant - 1e-12)
                else:
                    self.assertLessEqual(value, committed.constant + 1e-12)

    def test_sweep_with_committed_store(self):
        result = sweep(["EN-2", "KK-1"], [5], [2, 3], 5, 0, baseline_dir=COMMITTED)
        self.assertFalse(result.failed, [report.witness for report in result.reports if report.failed])
        self.assertEqual(len(result.reports), 2)

    def test_kakeya_density_falls(self):
        result = sweep(["KK-4"], [3, 5, 7], [2], 2, 0, baseline_dir=COMMITTED)
        self.assertFalse(result.failed)
        for report, expected in zip(result.reports, (2 / 3, 3 / 5, 4 / 7)):
            self.assertAlmostEqual(report.metric, expected)
            self.assertEqual(report.details["origin"], "bound")
