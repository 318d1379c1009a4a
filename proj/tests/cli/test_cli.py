"""End-to-end checks of the projsub command line: usage: test_cli.py <projsub binary> <configs dir>."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

BINARY = None
CONFIGS = None


def run(*args):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, timeout=300)


class Cli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def config(self, name):
        return os.path.join(CONFIGS, name)

    def write_config(self, name, doc):
        p = self.path(name)
        with open(p, "w") as f:
            json.dump(doc, f)
        return p

    def solve(self, config, *extra):
        trace = self.path(os.path.basename(config) + ".csv")
        r = run("solve", "--config", config, "--out", trace, *extra)
        return r, trace

    def test_solve_and_check_pass(self):
        for name in ["corner_ppa.json", "corner_spa.json", "corner_cpa.json", "relaxed_ball_rppa.json",
                     "two_halfspaces_pocs.json", "shifted_quadratic_gpa.json"]:
            with self.subTest(config=name):
                summary = self.path("summary.json")
                r, trace = self.solve(self.config(name), "--summary", summary)
                self.assertEqual(r.returncode, 0, r.stderr)
                with open(summary) as f:
                    s = json.load(f)
                self.assertIn(s["status"], ("completed", "stopped_early"))
                report = self.path("report.json")
                c = run("check", "--config", self.config(name), "--trace", trace, "--out", report)
                self.assertEqual(c.returncode, 0, c.stdout + c.stderr)
                with open(report) as f:
                    doc = json.load(f)
                self.assertTrue(doc["overall_pass"])
                self.assertEqual(len(doc["checks"]), 8)

    def test_seed_override_is_deterministic(self):
        doc = {"problem": "shifted-quadratic", "method": "CPA", "schedule": {"kind": "power", "lambda0": 1, "p": 1},
               "ordering": "random", "max_iters": 200}
        cfg = self.write_config("random.json", doc)
        outs = []
        for i, seed in enumerate(["5", "5", "6"]):
            trace = self.path(f"t{i}.csv")
            r = run("solve", "--config", cfg, "--out", trace, "--seed", seed)
            self.assertEqual(r.returncode, 0, r.stderr)
            with open(trace) as f:
                outs.append(f.read())
        self.assertEqual(outs[0], outs[1])
        self.assertNotEqual(outs[0], outs[2])

    def test_malformed_json_is_invalid_input(self):
        bad = self.path("bad.json")
        with open(bad, "w") as f:
            f.write("{ not json")
        r, _ = self.solve(bad)
        self.assertEqual(r.returncode, 2)
        self.assertTrue(r.stderr)

    def test_unknown_key_is_invalid_input(self):
        cfg = self.write_config("x.json", {"problem": "corner", "method": "SPA",
                                           "schedule": {"kind": "power", "lambda0": 1, "p": 1}, "colour": 1})
        r, _ = self.solve(cfg)
        self.assertEqual(r.returncode, 2)

    def test_constant_schedule_needs_override(self):
        doc = {"problem": "corner", "method": "PPA", "schedule": {"kind": "constant", "lambda0": 0.05},
               "weights": "uniform", "max_iters": 100}
        cfg = self.write_config("const.json", doc)
        r, _ = self.solve(cfg)
        self.assertEqual(r.returncode, 2)
        r, _ = self.solve(cfg, "--override-schedule-guard")
        self.assertEqual(r.returncode, 0, r.stderr)

    def test_numeric_abort_exit_code(self):
        doc = {"problem": {"name": "escape",
                           "objective": [{"kind": "quadratic-distance", "center": [2, 0], "region_radius": 3},
                                         {"kind": "quadratic-distance", "center": [2, 0], "region_radius": 3}],
                           "sets": [{"kind": "halfspace", "a": [1, 0], "b": 0}],
                           "start": [0, 0]},
               "method": "SPA",
               "schedule": {"kind": "table", "values": [0.01, 0.01, 10.0],
                            "flags": {"diminishing": True, "divergent_sum": True}},
               "max_iters": 10}
        cfg = self.write_config("abort.json", doc)
        r, trace = self.solve(cfg)
        self.assertEqual(r.returncode, 3, r.stderr)
        self.assertTrue(os.path.exists(trace))

    def test_corrupted_trace_fails_check(self):
        cfg = self.config("corner_ppa.json")
        r, trace = self.solve(cfg)
        self.assertEqual(r.returncode, 0)
        with open(trace) as f:
            lines = f.read().splitlines()
        header = lines[0].split(",")
        xcol = header.index("x_1")
        row = lines[501].split(",")
        row[xcol] = str(float(row[xcol]) + 10.0)
        lines[501] = ",".join(row)
        bad = self.path("corrupt.csv")
        with open(bad, "w") as f:
            f.write("\n".join(lines) + "\n")
        c = run("check", "--config", cfg, "--trace", bad)
        self.assertEqual(c.returncode, 1, c.stdout + c.stderr)
        self.assertIn("fail", c.stdout)

    def test_unreadable_trace_is_invalid_input(self):
        bad = self.path("garbage.csv")
        with open(bad, "w") as f:
            f.write("k,lambda\n1,2,3\n")
        c = run("check", "--config", self.config("corner_ppa.json"), "--trace", bad)
        self.assertEqual(c.returncode, 2)

    def test_unknown_check_is_invalid_input(self):
        r, trace = self.solve(self.config("corner_spa.json"))
        c = run("check", "--config", self.config("corner_spa.json"), "--trace", trace, "--checks", "nonsense")
        self.assertEqual(c.returncode, 2)

    def test_inapplicable_named_check_is_invalid_input(self):
        r, trace = self.solve(self.config("corner_spa.json"))
        c = run("check", "--config", self.config("corner_spa.json"), "--trace", trace, "--checks", "ppa-lemma")
        self.assertEqual(c.returncode, 2)
        c = run("check", "--config", self.config("corner_spa.json"), "--trace", trace, "--checks",
                "spa-lemma,key-estimate")
        self.assertEqual(c.returncode, 0, c.stdout + c.stderr)

    def test_constant_step_check(self):
        cfg = self.config("corner_constant.json")
        r, trace = self.solve(cfg)
        self.assertEqual(r.returncode, 0, r.stderr)
        c = run("check", "--config", cfg, "--trace", trace, "--checks", "constant-step")
        self.assertEqual(c.returncode, 0, c.stdout + c.stderr)

    def test_compare_table(self):
        a = self.config("corner_ppa.json")
        b = self.config("corner_spa.json")
        r = run("compare", a, b, a, "--max-gap", "1e-2")
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        lines = r.stdout.splitlines()
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[0].startswith("config"))
        self.assertEqual(lines[1], lines[3])

    def test_compare_marks_failures(self):
        r = run("compare", self.config("corner_ppa.json"), "--max-gap", "-1")
        self.assertEqual(r.returncode, 1)
        self.assertIn("FAIL", r.stdout)

    def test_counterexample(self):
        table = self.path("seq.csv")
        r = run("counterexample", "--K", "1000", "--table", table)
        self.assertIn(r.returncode, (0, 1))
        with open(table) as f:
            self.assertEqual(sum(1 for _ in f), 1001)
        r = run("counterexample", "--K", "1000000", "--frequency", "2")
        self.assertEqual(r.returncode, 1)
        self.assertIn("counterexample-recurrence: fail", r.stdout)

    def test_usage_errors(self):
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("solve").returncode, 2)
        self.assertEqual(run("frobnicate").returncode, 2)
        self.assertEqual(run("--help").returncode, 0)


if __name__ == "__main__":
    BINARY, CONFIGS = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
