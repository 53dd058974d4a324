import json
import os
import tempfile
import unittest
from maxcut_game.core.dynamics import Schedule
from maxcut_game.core.fixtures import figure1_gamma, figure1_graph, figure1_sigma, swap_gadget
from maxcut_game.core.equilibrium import is_nash, iter_strong_deviations
from maxcut_game.core.game import Coloring, canonical_colorings
from maxcut_game.core.graph import Graph
from maxcut_game.experiments import goldens
from maxcut_game.experiments.config import ExperimentConfig, config_from_mapping, load_config
from maxcut_game.experiments.report import EXIT_COUNTEREXAMPLE, EXIT_OK, ExperimentReport, Histogram
from maxcut_game.experiments.runners import (
    GUARANTEED_CLAIMS,
    _audit_graph,
    cmd_dynamics_fuzz,
    cmd_er_experiment,
    cmd_figure1_regression,
    cmd_identity_fuzz,
    cmd_pruning_audit,
    cmd_table1,
    cmd_seven_member_configs,
    cmd_triangle_claim,
    cmd_verify_theorems,
    dynamics_violations,
    identity_violations,
    route_claim,
    table1_cell,
    table1_config,
)


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        """Test the default configuration."""
        config = ExperimentConfig()
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.er_n, 15)
        self.assertEqual(config.er_avg_degrees, [5.0, 10.0])
        self.assertEqual(config.fail_on, ["color_range_gain", "small_coalition_gain"])
        self.assertIsNone(config.audit_cap)

    def test_validation(self):
        """Test rejection of out-of-range values."""
        bad = [
            {"jobs": 0},
            {"mode": "lemma"},
            {"graph_source": "file"},
            {"budget": 0},
            {"n_max": 8},
            {"k_values": [0]},
            {"audit_cap": 0},
        ]
        for values in bad:
            with self.subTest(values=values):
                with self.assertRaises(ValueError):
                    config_from_mapping(values)
        with self.assertRaises(ValueError):
            config_from_mapping({"colours": 3})

    def test_digest(self):
        """Test that execution-only fields do not change the digest."""
        base = ExperimentConfig()
        self.assertEqual(base.digest(), base.with_overrides(jobs=4, out_dir="out", progress=True).digest())
        self.assertNotEqual(base.digest(), base.with_overrides(seed=1).digest())
        self.assertEqual(len(base.digest()), 64)

    def test_load_config(self):
        """Test reading overrides from YAML."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "config.yaml")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("seed: 7\nk_values: [2]\nfail_on: []\n")
            config = load_config(path)
            self.assertEqual(config.seed, 7)
            self.assertEqual(config.k_values, [2])
            self.assertEqual(config.fail_on, [])
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("- 1\n- 2\n")
            with self.assertRaises(ValueError):
                load_config(path)


class TestReport(unittest.TestCase):
    def test_histogram(self):
        """Test counting, merging and CSV output."""
        first = Histogram(range(3))
        first.add(1)
        first.add(4, 2)
        second = Histogram()
        second.add(1, 5)
        first.merge(second)
        self.assertEqual(first.to_dict(), {"0": 0, "1": 6, "2": 0, "4": 2})
        self.assertEqual(first.total(), 8)
        self.assertEqual(first.get(3), 0)
        self.assertEqual(first.to_csv(), "size,count\n0,0\n1,6\n2,0\n4,2\n")

    def test_exit_codes(self):
        """Test that failed checks and counterexamples fail the run."""
        report = ExperimentReport("demo", "0" * 64, "0.1.0")
        self.assertTrue(report.check("ok", 1, 1, goldens.PUBLISHED))
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertFalse(report.check("bad", 1, 2, goldens.DERIVED))
        self.assertEqual(report.exit_code, EXIT_COUNTEREXAMPLE)

        report = ExperimentReport("demo", "0" * 64, "0.1.0")
        report.add_finding("isolated_component", {"claim": "isolated_component"})
        self.assertTrue(report.passed)
        report.add_counterexample("cut_gain_bound", {"k": 2})
        self.assertFalse(report.passed)

    def test_findings_are_capped(self):
        """Test that only a bounded number of findings is kept per claim."""
        report = ExperimentReport("demo", "0" * 64, "0.1.0")
        for i in range(50):
            report.add_finding("color_range_gain", {"i": i})
        self.assertEqual(report.finding_counts["color_range_gain"], 50)
        self.assertEqual(len(report.findings), 20)

    def test_write(self):
        """Test the JSON and CSV files of a report."""
        report = ExperimentReport("er-experiment", "0" * 64, "0.1.0")
        report.histogram("deviation_size_all", range(2)).add(1)
        with tempfile.TemporaryDirectory() as tmp:
            written = report.write(tmp)
            names = sorted(os.path.basename(path) for path in written)
            self.assertEqual(names, ["er_experiment.json", "er_experiment_deviation_size_all.csv"])
            with open(os.path.join(tmp, "er_experiment.json"), encoding="utf-8") as handle:
                self.assertEqual(json.load(handle)["histograms"]["deviation_size_all"], {"0": 0, "1": 1})

    def test_route_claim(self):
        """Test that guaranteed and fail_on claims become counterexamples."""
        config = ExperimentConfig(fail_on=["color_range_gain"])
        report = ExperimentReport("audit", config.digest(), "0.1.0")
        route_claim(report, config, "cut_gain_bound", {})
        route_claim(report, config, "color_range_gain", {})
        route_claim(report, config, "small_coalition_gain", {})
        route_claim(report, config, "isolated_component", {})
        self.assertEqual([c["claim"] for c in report.counterexamples], ["cut_gain_bound", "color_range_gain"])
        self.assertEqual(sorted(report.finding_counts), ["isolated_component", "small_coalition_gain"])
        self.assertIn("cut_gain_bound", GUARANTEED_CLAIMS)
        self.assertNotIn("isolated_component", GUARANTEED_CLAIMS)


class TestGoldenExperiments(unittest.TestCase):
    def setUp(self):
        self.config = ExperimentConfig()

    def test_figure1(self):
        """Test every worked-example value under both reconstructions."""
        report = cmd_figure1_regression(self.config)
        self.assertEqual(report.failed_checks, [])
        self.assertEqual(report.exit_code, EXIT_OK)
        self.assertEqual(len(report.golden_checks), 2 * len(goldens.FIGURE1))
        by_name = {check.name: check for check in report.golden_checks}
        self.assertEqual(by_name["v1-v3:cut_gamma"].actual, 7)
        self.assertEqual(by_name["v1-v6:cut_gamma"].actual, 8)

    def test_figure1_negative_control(self):
        """Test that a wrong edge set fails the regression."""
        g = figure1_graph()
        broken = Graph(g.n, g.edges[1:], g.names)
        report = cmd_figure1_regression(self.config, {"broken": broken})
        self.assertFalse(report.passed)
        self.assertEqual(report.exit_code, EXIT_COUNTEREXAMPLE)

    def test_table1(self):
        """Test the coalition pair-count table against its printed values."""
        report = cmd_table1(self.config)
        self.assertEqual(report.failed_checks, [])
        self.assertEqual(len(report.records), 5)

    def test_table1_cells(self):
        """Test individual cells, including infeasible and open-ended ones."""
        self.assertEqual(table1_cell("b.3", 5)["text"], "n.a.")
        self.assertEqual(table1_cell("a.1", 8)["text"], ">=5")
        self.assertEqual(table1_cell("b.1", 6)["max_pc"], 4)
        self.assertEqual(table1_cell("b.1", 6)["delta_s"], 2)
        self.assertEqual(table1_config("a.2", 6).class_sizes, (2, 2, 1, 1))
        self.assertIsNone(table1_config("b.1", 4))
        with self.assertRaises(ValueError):
            table1_config("a.1", 3)
        with self.assertRaises(ValueError):
            table1_config("c.1", 5)

    def test_seven_member_configs(self):
        """Test the seven-member configuration bounds."""
        report = cmd_seven_member_configs(self.config)
        self.assertEqual(report.failed_checks, [])
        bounds = {tuple(r["class_sizes"]): r["delta_s_bound"] for r in report.records if "class_sizes" in r}
        self.assertEqual(bounds, {sizes: bound for sizes, (_, bound) in goldens.SEVEN_MEMBER_CONFIGS.items()})

    def test_triangle_claim(self):
        """Test the five-vertex triangle enumeration."""
        report = cmd_triangle_claim(self.config)
        self.assertEqual(report.failed_checks, [])
        self.assertTrue(report.passed)
        by_m = {r["m"]: r for r in report.records}
        self.assertEqual(by_m[7]["graphs"], 120)
        self.assertEqual(by_m[7]["triangle_free"], 0)
        self.assertEqual(by_m[6]["triangle_free"], 10)


class TestSweeps(unittest.TestCase):
    def test_verify_theorems_small(self):
        """Test that optima of small graphs are strong equilibria."""
        for mode in ("seven_strong", "full_strong", "two_colors"):
            with self.subTest(mode=mode):
                config = ExperimentConfig(mode=mode, n_max=4, k_values=[2, 3])
                report = cmd_verify_theorems(config)
                self.assertTrue(report.passed)
                self.assertEqual(report.header["instances"], report.header["instances_checked"])
                self.assertGreater(report.header["optima_checked"], 0)

    def test_verify_theorems_many_colors(self):
        """Test the k >= n - 2 mode on labeled graphs."""
        config = ExperimentConfig(mode="many_colors", graph_source="labeled", n_max=4)
        report = cmd_verify_theorems(config)
        self.assertTrue(report.passed)

    def test_verify_theorems_sampled(self):
        """Test a handful of sampled graphs."""
        config = ExperimentConfig(graph_source="er", sample_count=4, k_values=[2])
        report = cmd_verify_theorems(config)
        self.assertEqual(len(report.records), 4)
        self.assertEqual(report.failed_checks, [])

    def test_max_optima_skips(self):
        """Test that instances with too many optima are skipped."""
        config = ExperimentConfig(n_max=3, k_values=[3], max_optima=1)
        report = cmd_verify_theorems(config)
        self.assertTrue(any("skipped" in record for record in report.records))
        self.assertLess(report.header["instances_checked"], report.header["instances"])

    def test_worker_count_does_not_change_report(self):
        """Test that the process pool gives byte-identical reports."""
        config = ExperimentConfig(n_max=4, k_values=[2])
        single = cmd_verify_theorems(config).to_json()
        pooled = cmd_verify_theorems(config.with_overrides(jobs=2)).to_json()
        self.assertEqual(single, pooled)

    def test_er_experiment_small(self):
        """Test deviation-size histograms on a few random graphs."""
        config = ExperimentConfig(er_n=6, er_avg_degrees=[2.0, 3.0], er_graphs_per_degree=2)
        report = cmd_er_experiment(config)
        self.assertEqual(report.failed_checks, [])
        self.assertEqual(len(report.records), 4)
        self.assertIn("deviation_size_d2", report.histograms)
        self.assertEqual(sorted(k for k, _ in report.histograms["deviation_size_all"].items()), list(range(7)))
        self.assertEqual(cmd_er_experiment(config).to_json(), report.to_json())

    def test_identity_fuzz_small(self):
        """Test the exact identities on random and exhaustive instances."""
        config = ExperimentConfig(fuzz_count=300, grid_n_max=3, grid_k_max=2)
        report = cmd_identity_fuzz(config)
        self.assertTrue(report.passed)
        self.assertEqual(report.records[0]["samples"], 300)
        self.assertGreater(report.records[0]["identity_pairs"], 0)

    def test_identity_violations(self):
        """Test the per-instance identity check."""
        g, sigma = swap_gadget()
        self.assertEqual(identity_violations(g, sigma, Coloring((2, 1, 2, 1), 2)), [])
        self.assertEqual(identity_violations(figure1_graph(), figure1_sigma(), figure1_gamma()), [])

    def test_pruning_audit_small(self):
        """Test that no guaranteed claim fails in the audit sweep."""
        config = ExperimentConfig(audit_n_max=4, audit_k_max=2, fail_on=[])
        report = cmd_pruning_audit(config)
        self.assertEqual(report.counterexamples, [])
        self.assertEqual(report.header["truncated_colorings"], 0)
        self.assertIsNone(report.header["audit_cap"])
        self.assertGreater(report.header["flag_counts"]["audited"], 0)
        self.assertGreater(report.finding_counts.get("isolated_component", 0), 0)

    def test_audit_covers_every_minimal_deviation(self):
        """Test that the uncapped audit visits every minimal deviation and a cap is reported as truncation."""
        g, _ = swap_gadget()
        expected = sum(
            1
            for sigma in canonical_colorings(g.n, 2)
            if is_nash(g, sigma)[0]
            for cert in iter_strong_deviations(g, sigma, g.n)
            if cert.minimal
        )
        self.assertGreaterEqual(expected, 2)
        full = _audit_graph(("c4", g, 2, ExperimentConfig().audit_cap))
        self.assertEqual(len(full["audits"]), expected)
        self.assertEqual(full["truncated"], 0)
        capped = _audit_graph(("c4", g, 2, 1))
        self.assertGreater(capped["truncated"], 0)
        self.assertLess(len(capped["audits"]), expected)

    def test_dynamics_fuzz_small(self):
        """Test dynamics on a few random instances."""
        config = ExperimentConfig(dynamics_count=20, dynamics_n_max=8, dynamics_k_max=3)
        report = cmd_dynamics_fuzz(config)
        self.assertTrue(report.passed)
        self.assertEqual(report.histograms["best_response_steps"].total(), 20)

    def test_dynamics_violations(self):
        """Test the per-instance dynamics check."""
        g, sigma = swap_gadget()
        steps, problems = dynamics_violations(g, Coloring.monochromatic(4, 2), Schedule.ROUND_ROBIN, seed=0)
        self.assertEqual(problems, [])
        self.assertGreater(steps, 0)


if __name__ == "__main__":
    unittest.main()
