import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout
from maxcut_game.core.fixtures import figure1_graph
from maxcut_game.core.graph import serialize_graph
from maxcut_game.experiments.cli import build_parser, main, read_coloring
from maxcut_game.experiments.report import EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.square = self._write("square.txt", "n 4 k 2\n0 1\n1 2\n2 3\n3 0\n")
        self.swap = self._write("swap.txt", "1 2 2 1\n")

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name, text):
        path = os.path.join(self.dir, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def _run(self, argv):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = main(argv + ["--log-level", "ERROR"])
        return code, buffer.getvalue()

    def test_solve(self):
        """Test the exact solver command."""
        out = os.path.join(self.dir, "solve.json")
        code, _ = self._run(["solve", "--graph", self.square, "--enumerate-all", "--out", out])
        self.assertEqual(code, EXIT_OK)
        with open(out, encoding="utf-8") as handle:
            result = json.load(handle)
        self.assertEqual(result["best_value"], 4)
        self.assertEqual(result["witnesses"], [[1, 2, 1, 2], [2, 1, 2, 1]])
        self.assertEqual(result["count_labeled"], 2)

    def test_solve_parallel(self):
        """Test the solver command with worker threads."""
        graph = self._write("figure1.txt", serialize_graph(figure1_graph(), k=3))
        code, output = self._run(["solve", "--graph", graph, "--jobs", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(output)["best_value"], 9)

    def test_solve_parallel_rejects_budget(self):
        """Test that a node budget cannot be combined with worker threads."""
        code, _ = self._run(["solve", "--graph", self.square, "--jobs", "2", "--budget", "10"])
        self.assertEqual(code, EXIT_ERROR)
        code, _ = self._run(["solve", "--graph", self.square, "--jobs", "1", "--budget", "1000"])
        self.assertEqual(code, EXIT_OK)

    def test_verify_qse_finds_deviation(self):
        """Test that a strong deviation gives exit code 2 and a certificate."""
        out = os.path.join(self.dir, "cert.json")
        args = ["verify-qse", "--graph", self.square, "--coloring", self.swap, "--q", "2", "--emit-certificate", out]
        code, _ = self._run(args)
        self.assertEqual(code, EXIT_COUNTEREXAMPLE)
        with open(out, encoding="utf-8") as handle:
            cert = json.load(handle)
        self.assertTrue(cert["found"])
        self.assertEqual(cert["coalition"], [0, 1])
        self.assertEqual(cert["gamma"], [2, 1, 2, 1])

    def test_verify_qse_optimum(self):
        """Test that the solver's optimum passes."""
        code, output = self._run(["verify-qse", "--graph", self.square, "--from-solver", "--pruning", "3"])
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(json.loads(output)["found"])

    def test_dynamics(self):
        """Test the dynamics command and its trace file."""
        out = os.path.join(self.dir, "trace.json")
        code, _ = self._run(["dynamics", "--graph", self.square, "--init", "mono", "--trace-out", out])
        self.assertEqual(code, EXIT_OK)
        with open(out, encoding="utf-8") as handle:
            trace = json.load(handle)
        self.assertEqual(trace["terminal"], "converged-NE")
        self.assertEqual(trace["initial"], [1, 1, 1, 1])

        code, output = self._run(
            ["dynamics", "--graph", self.square, "--init", "file", "--coloring", self.swap, "--mode", "coalition", "--q", "2"]
        )
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(output)["final"], [2, 1, 2, 1])

    def test_experiments(self):
        """Test that the golden experiments pass from the command line."""
        for command in ("figure1", "table1", "seven-member-configs", "triangle-claim"):
            with self.subTest(command=command):
                code, output = self._run([command])
                self.assertEqual(code, EXIT_OK)
                self.assertTrue(json.loads(output)["passed"])

    def test_experiment_out_dir(self):
        """Test report files written to --out-dir."""
        out_dir = os.path.join(self.dir, "reports")
        code, _ = self._run(["identity-fuzz", "--count", "50", "--grid-n-max", "2", "--grid-k-max", "2", "--out-dir", out_dir])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(os.path.exists(os.path.join(out_dir, "identity_fuzz.json")))

    def test_config_file(self):
        """Test that flags override the YAML file."""
        config = self._write("config.yaml", "seed: 3\ndynamics_count: 1000\n")
        code, output = self._run(["dynamics-fuzz", "--config", config, "--count", "5", "--n-max", "6"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(output)["records"], [{"instances": 5}])
        args = build_parser().parse_args(["dynamics-fuzz", "--count", "5"])
        self.assertEqual(args.dynamics_count, 5)

    def test_figure1_negative_control(self):
        """Test that a wrong graph fails the worked-example regression."""
        graph = self._write("broken.txt", "n 6\n0 1\n1 2\n")
        code, _ = self._run(["figure1", "--graph", graph])
        self.assertEqual(code, EXIT_COUNTEREXAMPLE)

    def test_errors(self):
        """Test exit code 1 on bad input."""
        code, _ = self._run(["solve", "--graph", os.path.join(self.dir, "missing.txt"), "--k", "2"])
        self.assertEqual(code, EXIT_ERROR)
        bad = self._write("bad.txt", "n 3\n0 0\n")
        code, _ = self._run(["solve", "--graph", bad, "--k", "2"])
        self.assertEqual(code, EXIT_ERROR)
        no_k = self._write("no_k.txt", "n 2\n0 1\n")
        code, _ = self._run(["solve", "--graph", no_k])
        self.assertEqual(code, EXIT_ERROR)

    def test_read_coloring_formats(self):
        """Test the accepted colouring file formats."""
        for text in ("[1, 2, 2, 1]", '{"sigma": [1, 2, 2, 1]}', "1,2,2,1", "1 2\n2 1\n"):
            with self.subTest(text=text):
                path = self._write("c.txt", text)
                self.assertEqual(read_coloring(path, 2).colors, (1, 2, 2, 1))


if __name__ == "__main__":
    unittest.main()
